//! Verifies that the stochastic-mirror-descent recursion lands exactly on
//! the closed-form MAP, across random runs on the whole family catalog.

use clap::Args;
use expfam::estimator::{map, smd_run, Dataset, PriorHyper};
use expfam::families::standard_five;
use expfam::family::Family;
use expfam::rng::{stream, stream_index};

use crate::config::CommonArgs;
use crate::csvio::{fmt, write_csv};
use crate::error::CliError;

const MAX_REL_GAP: f64 = 1e-12;

#[derive(Debug, Args)]
pub struct SmdCheckArgs {
    /// Randomized runs per family.
    #[arg(long, default_value_t = 100)]
    pub runs: u64,

    #[command(flatten)]
    pub common: CommonArgs,
}

/// |a−b| relative to max(1, |a|, |b|) per coordinate.
fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

pub fn worst_gap_for(fam: &dyn Family, runs: u64, seed: u64, fam_index: u32) -> f64 {
    let mut worst: f64 = 0.0;
    for run in 0..runs {
        let mut rng = stream(seed, stream_index(fam_index, run as u32));
        let mu_star = fam.random_interior_mean(&mut rng);
        let theta_star = fam.to_natural(&mu_star);
        let n0 = 0.25 + 3.75 * (run % 8) as f64 / 8.0;
        let prior = PriorHyper::new(n0, fam.random_interior_mean(&mut rng)).unwrap();
        let n = 1 + (run as usize) % 50;
        let data = Dataset::sample(fam, &theta_star, n, &mut rng);
        let closed = map(fam, &data, &prior).unwrap();
        let traj = smd_run(fam, &data, &prior).unwrap();
        for (a, b) in traj.final_iterate().as_slice().iter().zip(closed.as_slice()) {
            worst = worst.max(rel_gap(*a, *b));
        }
    }
    worst
}

pub fn run(args: &SmdCheckArgs) -> Result<(), CliError> {
    if args.runs == 0 {
        return Err(CliError::config("runs must be positive"));
    }
    args.common.ensure_out_dir()?;

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (i, fam) in standard_five().iter().enumerate() {
        let worst = worst_gap_for(fam.as_ref(), args.runs, args.common.seed, i as u32);
        rows.push(vec![fam.name(), args.runs.to_string(), fmt(worst)]);
        // Negated so that a NaN gap also fails.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(worst <= MAX_REL_GAP) {
            failures.push(format!("{}: max gap {worst:.3e}", fam.name()));
        }
    }

    if args.common.emit.csv {
        write_csv(
            &args.common.path("smd-check-all", "csv"),
            &["family", "runs", "max_rel_gap"],
            &rows,
        )?;
    }
    if !failures.is_empty() {
        return Err(CliError::assertion(
            "smd-equals-map",
            format!("gap above {MAX_REL_GAP:.0e}: {}", failures.join("; ")),
        ));
    }
    println!(
        "smd-check: final SMD iterate equals the closed-form MAP within {MAX_REL_GAP:.0e} on all families"
    );
    Ok(())
}
