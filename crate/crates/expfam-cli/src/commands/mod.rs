pub mod bias_variance;
pub mod bounds_table;
pub mod prior_landscape;
pub mod risk_curve;
pub mod smd_check;
pub mod table1;
