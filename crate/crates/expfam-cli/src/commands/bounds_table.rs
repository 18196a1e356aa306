//! Tabulates every closed-form bound and exact risk over a sample-size grid,
//! checking the exact-below-bound sandwiches on the way.

use clap::Args;
use expfam::bounds::{
    asymptote, covariance_mle_bound, covariance_mle_exact, expected_inverse_exact,
    expected_inverse_sandwich, gamma_map_bound, gamma_mle_bound, gamma_mle_exact,
    gamma_mle_lower_bound, gaussian_variance_map_bound, quadratic_map_exact,
};
use expfam::special::QuadratureConfig;

use crate::config::{parse_n_grid, CommonArgs};
use crate::csvio::{fmt, write_csv};
use crate::error::CliError;

#[derive(Debug, Args)]
pub struct BoundsTableArgs {
    /// Gamma shape for the univariate columns.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,

    #[arg(long, default_value_t = 1.0)]
    pub n0: f64,

    /// Prior-to-truth ratio μ₀/μ*.
    #[arg(long, default_value_t = 1.0)]
    pub ratio: f64,

    /// Data dimension for the covariance columns.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,

    #[arg(long, default_value = "1..100")]
    pub n_grid: String,

    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn run(args: &BoundsTableArgs) -> Result<(), CliError> {
    if args.alpha <= 0.0 || args.n0 <= 0.0 || args.ratio <= 0.0 || args.dim == 0 {
        return Err(CliError::config("alpha, n0, ratio must be positive and dim >= 1"));
    }
    let n_grid = parse_n_grid(&args.n_grid).map_err(CliError::config)?;
    args.common.ensure_out_dir()?;
    let quad = QuadratureConfig::default();

    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for &n in &n_grid {
        let mle_exact = gamma_mle_exact(args.alpha, n)?;
        let mle_lower = gamma_mle_lower_bound(args.alpha, n)?;
        let mle_bound = gamma_mle_bound(args.alpha, n)?;
        let map_bound = gamma_map_bound(args.alpha, n, args.n0, args.ratio)?;
        let gv_map_bound = if args.alpha == 0.5 {
            gaussian_variance_map_bound(n, args.n0, args.ratio)?
        } else {
            f64::NAN
        };
        let (inv_lo, inv_hi) = expected_inverse_sandwich(args.alpha, n, args.n0, args.ratio)?;
        let inv_exact = expected_inverse_exact(args.alpha, n, args.n0, args.ratio, &quad)?;
        let cov_exact = covariance_mle_exact(args.dim, n)?;
        let cov_bound = covariance_mle_bound(args.dim, n)?;
        let quad_map = quadratic_map_exact(1, n, args.n0, (args.ratio - 1.0).powi(2))?;

        if mle_exact.is_finite() && !(mle_lower <= mle_exact && mle_exact <= mle_bound) {
            violations.push(format!("gamma sandwich broken at n={n}"));
        }
        if !(inv_lo - 1e-9 <= inv_exact && inv_exact <= inv_hi + 1e-9) {
            violations.push(format!(
                "expected-inverse {inv_exact} outside [{inv_lo}, {inv_hi}] at n={n}"
            ));
        }
        if cov_exact.is_finite() && cov_exact > cov_bound {
            violations.push(format!("covariance sandwich broken at n={n}"));
        }

        rows.push(vec![
            n.to_string(),
            fmt(mle_exact),
            fmt(mle_lower),
            fmt(mle_bound),
            fmt(map_bound),
            fmt(gv_map_bound),
            fmt(inv_lo),
            fmt(inv_exact),
            fmt(inv_hi),
            fmt(cov_exact),
            fmt(cov_bound),
            fmt(quad_map),
            fmt(asymptote(1, n)),
        ]);
    }

    if args.common.emit.csv {
        write_csv(
            &args.common.path(&format!("bounds-table-gamma:{}", args.alpha), "csv"),
            &[
                "n",
                "gamma_mle_exact",
                "gamma_mle_lower",
                "gamma_mle_bound",
                "gamma_map_bound",
                "gaussian_variance_map_bound",
                "expected_inverse_lo",
                "expected_inverse_exact",
                "expected_inverse_hi",
                "covariance_mle_exact",
                "covariance_mle_bound",
                "quadratic_map_exact",
                "asymptote",
            ],
            &rows,
        )?;
    }

    if !violations.is_empty() {
        return Err(CliError::assertion("bound-sandwiches", violations.join("; ")));
    }
    println!(
        "bounds-table: exact values sit inside their bounds at all {} grid points",
        n_grid.len()
    );
    Ok(())
}
