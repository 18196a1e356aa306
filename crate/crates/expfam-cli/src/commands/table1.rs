//! Boundedness verdicts for the three SMD variance assumptions on the
//! Gaussian-variance family.

use clap::Args;
use expfam::assumptions::{assumption_table, Verdict};

use crate::config::CommonArgs;
use crate::csvio::{fmt, write_csv};
use crate::error::CliError;

#[derive(Debug, Args)]
pub struct Table1Args {
    /// Monte Carlo trials per probe point.
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,

    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn run(args: &Table1Args) -> Result<(), CliError> {
    if args.trials == 0 {
        return Err(CliError::config("trials must be positive"));
    }
    args.common.ensure_out_dir()?;
    let table = assumption_table(args.trials, args.common.seed)?;

    let mut rows = Vec::new();
    for probe in &table {
        let (verdict, payload) = match &probe.verdict {
            Verdict::Bounded { c } => ("bounded".to_string(), format!("C={}", fmt(*c))),
            Verdict::Unbounded { witness } => (
                "unbounded".to_string(),
                witness
                    .iter()
                    .map(|(point, value)| format!("mu={}:value={}", fmt(*point), fmt(*value)))
                    .collect::<Vec<_>>()
                    .join(";"),
            ),
        };
        rows.push(vec![
            probe.assumption.as_str().to_string(),
            probe.family.clone(),
            verdict,
            payload,
        ]);
    }
    if args.common.emit.csv {
        write_csv(
            &args.common.path("table1-gaussian-variance", "csv"),
            &["assumption", "family", "verdict", "c_or_witness"],
            &rows,
        )?;
    }

    let expected = [false, false, true];
    for (probe, want_bounded) in table.iter().zip(expected) {
        if probe.verdict.is_bounded() != want_bounded {
            return Err(CliError::assertion(
                "assumption-verdicts",
                format!(
                    "{} came out {}, expected {}",
                    probe.assumption.as_str(),
                    if probe.verdict.is_bounded() { "bounded" } else { "unbounded" },
                    if want_bounded { "bounded" } else { "unbounded" },
                ),
            ));
        }
    }
    println!("table1: verdicts (unbounded, unbounded, bounded) reproduced");
    Ok(())
}
