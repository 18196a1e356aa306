//! MLE and MAP risk curves against sample size, with closed-form bound
//! overlays and the d/(2n) asymptote.

use clap::Args;
use expfam::bounds;
use expfam::estimator::PriorHyper;
use expfam::family::Family;
use expfam::param::MeanParam;
use expfam::risk::{risk_curve, EstimatorKind, RiskEstimate};

use crate::config::{parse_n_grid, resolve_family, resolve_mean_star, resolve_mu0, CommonArgs};
use crate::csvio::{fmt, write_csv};
use crate::error::CliError;
use crate::svg;

#[derive(Debug, Args)]
pub struct RiskCurveArgs {
    /// Family identifier (see `expfam-lab --help` for the catalog).
    #[arg(long, default_value = "gaussian-variance")]
    pub family: String,

    /// True mean parameter μ*, comma-separated (default: family reference).
    #[arg(long)]
    pub mu_star: Option<String>,

    /// Prior pseudo-count n₀ for the MAP curve.
    #[arg(long, default_value_t = 1.0)]
    pub n0: f64,

    /// Prior mean μ₀ (default: μ*).
    #[arg(long)]
    pub mu0: Option<String>,

    /// Sample sizes: `a,b,c`, `lo..hi`, or `lo:hi:count` (log-spaced).
    #[arg(long, default_value = "1:100:30")]
    pub n_grid: String,

    /// Monte Carlo trials per grid point.
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,

    #[command(flatten)]
    pub common: CommonArgs,
}

/// MLE-risk upper bound overlay, where the family has one.
fn mle_bound(fam: &dyn Family, n: usize) -> f64 {
    let name = fam.name();
    if let Some(gamma) = fam_as_gamma(fam) {
        return bounds::gamma_mle_bound(gamma, n).unwrap();
    }
    if let Some(d) = name.strip_prefix("gaussian-cov:") {
        return bounds::covariance_mle_bound(d.parse().unwrap(), n).unwrap();
    }
    if name.starts_with("quadratic") {
        // d/(2n) is exact there.
        return bounds::asymptote(fam.dim(), n);
    }
    f64::NAN
}

/// MAP-risk upper bound overlay (symmetrized form, ~2x slack).
fn map_bound(fam: &dyn Family, n: usize, n0: f64, mu_star: &MeanParam, mu0: &MeanParam) -> f64 {
    if let Some(alpha) = fam_as_gamma(fam) {
        let ratio = mu0.as_slice()[0] / mu_star.as_slice()[0];
        if alpha == 0.5 {
            return bounds::gaussian_variance_map_bound(n, n0, ratio).unwrap();
        }
        return bounds::gamma_map_bound(alpha, n, n0, ratio).unwrap();
    }
    if fam.name().starts_with("quadratic") {
        let bias_sq = (mu_star.coords() - mu0.coords()).norm_squared();
        return bounds::quadratic_map_exact(fam.dim(), n, n0, bias_sq).unwrap();
    }
    f64::NAN
}

fn fam_as_gamma(fam: &dyn Family) -> Option<f64> {
    match fam.name().as_str() {
        "gaussian-variance" => Some(0.5),
        "exponential" => Some(1.0),
        name => name.strip_prefix("gamma:").and_then(|a| a.parse().ok()),
    }
}

pub fn run(args: &RiskCurveArgs) -> Result<(), CliError> {
    let fam = resolve_family(&args.family)?;
    let (mu_star, theta_star) = resolve_mean_star(fam.as_ref(), &args.mu_star)?;
    let mu0 = resolve_mu0(fam.as_ref(), &args.mu0, mu_star.as_slice())?;
    if args.n0 <= 0.0 {
        return Err(CliError::config("n0 must be positive for the MAP curve"));
    }
    let n_grid = parse_n_grid(&args.n_grid).map_err(CliError::config)?;
    args.common.ensure_out_dir()?;

    let prior = PriorHyper::new(args.n0, mu0.clone()).map_err(|e| CliError::config(e.to_string()))?;
    let mle = risk_curve(
        fam.as_ref(),
        &theta_star,
        &EstimatorKind::Mle,
        &n_grid,
        args.trials,
        args.common.seed,
    )?;
    let map = risk_curve(
        fam.as_ref(),
        &theta_star,
        &EstimatorKind::Map(prior),
        &n_grid,
        args.trials,
        args.common.seed.wrapping_add(1),
    )?;

    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut push = |label: &str, n: usize, est: &RiskEstimate, bound: f64| {
        rows.push(vec![
            n.to_string(),
            label.to_string(),
            fmt(est.mean),
            fmt(est.std_err),
            fmt(est.ci90.0),
            fmt(est.ci90.1),
            fmt(est.infinite_fraction),
            fmt(bound),
            fmt(bounds::asymptote(fam.dim(), n)),
        ]);
        if est.mean.is_finite() && bound.is_finite() && est.mean > bound + 3.0 * est.std_err {
            violations.push(format!("{label} risk {} > bound {bound} at n={n}", est.mean));
        }
    };
    for (n, est) in &mle {
        push("mle", *n, est, mle_bound(fam.as_ref(), *n));
    }
    for (n, est) in &map {
        push("map", *n, est, map_bound(fam.as_ref(), *n, args.n0, &mu_star, &mu0));
    }

    if args.common.emit.csv {
        write_csv(
            &args.common.path(&format!("risk-curve-{}", fam.name()), "csv"),
            &[
                "n",
                "estimator",
                "mean",
                "std_err",
                "lo90",
                "hi90",
                "infinite_fraction",
                "bound",
                "asymptote",
            ],
            &rows,
        )?;
    }

    if args.common.emit.svg {
        let curve_series = |label: &str, color, data: &[(usize, RiskEstimate)]| svg::Series {
            label: label.to_string(),
            color,
            dashed: false,
            points: data
                .iter()
                .filter(|(_, e)| e.mean.is_finite())
                .map(|(n, e)| (*n as f64, e.mean))
                .collect(),
        };
        let bound_series = |label: &str, color, f: &dyn Fn(usize) -> f64| svg::Series {
            label: label.to_string(),
            color,
            dashed: true,
            points: n_grid.iter().map(|&n| (n as f64, f(n))).collect(),
        };
        let band = |color, data: &[(usize, RiskEstimate)]| svg::Band {
            color,
            lower: data
                .iter()
                .filter(|(_, e)| e.mean.is_finite())
                .map(|(n, e)| (*n as f64, e.ci90.0))
                .collect(),
            upper: data
                .iter()
                .filter(|(_, e)| e.mean.is_finite())
                .map(|(n, e)| (*n as f64, e.ci90.1))
                .collect(),
        };
        let glyphs = |color, data: &[(usize, RiskEstimate)]| {
            data.iter()
                .filter(|(_, e)| e.divergent())
                .map(|(n, _)| svg::DivergenceGlyph { x: *n as f64, color })
                .collect::<Vec<_>>()
        };
        let mut all_glyphs = glyphs(svg::BLUE, &mle);
        all_glyphs.extend(glyphs(svg::ORANGE, &map));
        let plot = svg::LinePlot {
            title: format!("Expected Bregman risk, {} (seed {})", fam.name(), args.common.seed),
            x_label: "samples n".into(),
            y_label: "E[B(mu*, estimate)]".into(),
            log_x: true,
            log_y: true,
            series: vec![
                curve_series("MLE (MC, 90% band)", svg::BLUE, &mle),
                bound_series("MLE bound", svg::BLUE, &|n| mle_bound(fam.as_ref(), n)),
                curve_series("MAP (MC, 90% band)", svg::ORANGE, &map),
                bound_series("MAP bound (factor-2 slack)", svg::ORANGE, &|n| {
                    map_bound(fam.as_ref(), n, args.n0, &mu_star, &mu0)
                }),
                bound_series("asymptote d/2n", svg::GREY, &|n| {
                    bounds::asymptote(fam.dim(), n)
                }),
            ],
            bands: vec![band(svg::BLUE, &mle), band(svg::ORANGE, &map)],
            glyphs: all_glyphs,
        };
        svg::write_svg(
            &args.common.path(&format!("risk-curve-{}", fam.name()), "svg"),
            &plot.render(),
        )?;
    }

    if !violations.is_empty() {
        return Err(CliError::assertion("risk-below-bound", violations.join("; ")));
    }
    println!(
        "risk-curve: {} grid points x {} trials, bounds respected",
        n_grid.len(),
        args.trials
    );
    Ok(())
}
