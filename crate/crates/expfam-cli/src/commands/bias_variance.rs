//! Bias–variance decomposition of the expected Bregman risk across sample
//! sizes, split at the primal mean.

use clap::Args;
use expfam::bounds::asymptote;
use expfam::estimator::PriorHyper;
use expfam::risk::{bias_variance_mc, EstimatorKind};

use crate::config::{parse_n_grid, resolve_family, resolve_mean_star, resolve_mu0, CommonArgs};
use crate::csvio::{fmt, write_csv};
use crate::error::CliError;
use crate::svg;

#[derive(Debug, Args)]
pub struct BiasVarianceArgs {
    #[arg(long, default_value = "full-gaussian-1d")]
    pub family: String,

    /// True mean parameter μ* (default for full-gaussian-1d: 0,1).
    #[arg(long)]
    pub mu_star: Option<String>,

    #[arg(long, default_value_t = 1.0)]
    pub n0: f64,

    /// Prior mean μ₀ (default for full-gaussian-1d: 1,2).
    #[arg(long)]
    pub mu0: Option<String>,

    #[arg(long, default_value = "1..100")]
    pub n_grid: String,

    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,

    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn run(args: &BiasVarianceArgs) -> Result<(), CliError> {
    let fam = resolve_family(&args.family)?;
    let (_, theta_star) = resolve_mean_star(fam.as_ref(), &args.mu_star)?;
    let default_mu0: Vec<f64> = if fam.name() == "full-gaussian-1d" {
        vec![1.0, 2.0]
    } else {
        fam.default_mean_star().as_slice().to_vec()
    };
    let mu0 = resolve_mu0(fam.as_ref(), &args.mu0, &default_mu0)?;
    let n_grid = parse_n_grid(&args.n_grid).map_err(CliError::config)?;
    args.common.ensure_out_dir()?;

    let estimator = if args.n0 > 0.0 {
        EstimatorKind::Map(PriorHyper::new(args.n0, mu0).map_err(|e| CliError::config(e.to_string()))?)
    } else {
        EstimatorKind::Mle
    };

    let mut rows = Vec::new();
    let mut curves: Vec<(usize, f64, f64, f64)> = Vec::new();
    let mut violations = Vec::new();
    for (i, &n) in n_grid.iter().enumerate() {
        let bv = bias_variance_mc(
            fam.as_ref(),
            &theta_star,
            &estimator,
            n,
            args.trials,
            args.common.seed.wrapping_add(i as u64),
        )?;
        rows.push(vec![
            n.to_string(),
            fmt(bv.total),
            fmt(bv.bias),
            fmt(bv.variance),
            fmt(bv.total_std_err),
            fmt(bv.variance_std_err),
            fmt(asymptote(fam.dim(), n)),
            args.trials.to_string(),
        ]);
        if bv.divergent() {
            violations.push(format!("decomposition divergent at n={n}"));
        } else {
            let defect = (bv.total - bv.bias - bv.variance).abs();
            let budget = 4.0 * (bv.total_std_err + bv.variance_std_err);
            if defect > budget {
                violations.push(format!("identity defect {defect:.3e} > {budget:.3e} at n={n}"));
            }
            curves.push((n, bv.total, bv.bias, bv.variance));
        }
    }

    if args.common.emit.csv {
        write_csv(
            &args.common.path(&format!("bias-variance-{}", fam.name()), "csv"),
            &[
                "n",
                "total",
                "bias",
                "variance",
                "total_std_err",
                "variance_std_err",
                "asymptote",
                "trials",
            ],
            &rows,
        )?;
    }

    if args.common.emit.svg {
        type Row = (usize, f64, f64, f64);
        let series = |label: &str, color, pick: &dyn Fn(&Row) -> f64| svg::Series {
            label: label.to_string(),
            color,
            dashed: false,
            points: curves.iter().map(|c| (c.0 as f64, pick(c))).collect(),
        };
        let plot = svg::LinePlot {
            title: format!(
                "Bias-variance decomposition, {} (seed {})",
                fam.name(),
                args.common.seed
            ),
            x_label: "samples n".into(),
            y_label: "Bregman divergence".into(),
            log_x: true,
            log_y: true,
            series: vec![
                series("total", svg::BLUE, &|c| c.1),
                series("bias", svg::GREEN, &|c| c.2),
                series("variance", svg::RED, &|c| c.3),
                svg::Series {
                    label: "asymptote d/2n".into(),
                    color: svg::GREY,
                    dashed: true,
                    points: n_grid
                        .iter()
                        .map(|&n| (n as f64, asymptote(fam.dim(), n)))
                        .collect(),
                },
            ],
            bands: vec![],
            glyphs: vec![],
        };
        svg::write_svg(
            &args.common.path(&format!("bias-variance-{}", fam.name()), "svg"),
            &plot.render(),
        )?;
    }

    if !violations.is_empty() {
        return Err(CliError::assertion("bias-plus-variance", violations.join("; ")));
    }
    println!(
        "bias-variance: total = bias + variance within 4 combined std errs at all {} grid points",
        n_grid.len()
    );
    Ok(())
}
