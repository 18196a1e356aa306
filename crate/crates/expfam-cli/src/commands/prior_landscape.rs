//! MAP risk landscape over the prior hyperparameters (n₀, μ₀), with the
//! reference valley μ₀ = μ*(1 + 1/n₀) overlaid.

use clap::Args;
use expfam::risk::map_risk_landscape;

use crate::config::{log_grid, parse_n_grid, resolve_family, resolve_mean_star, CommonArgs};
use crate::csvio::{fmt, write_csv};
use crate::error::CliError;
use crate::svg::{render_heat_panels, write_svg, HeatPanel};

#[derive(Debug, Args)]
pub struct PriorLandscapeArgs {
    /// One-dimensional family.
    #[arg(long, default_value = "gaussian-variance")]
    pub family: String,

    #[arg(long)]
    pub mu_star: Option<String>,

    /// Sample sizes, one landscape panel each.
    #[arg(long, default_value = "1,5,10")]
    pub n_grid: String,

    /// Grid resolution per hyperparameter axis.
    #[arg(long, default_value_t = 40)]
    pub grid_points: usize,

    /// Lower end of the (n₀, μ₀) log grid.
    #[arg(long, default_value_t = 1e-2)]
    pub hyper_min: f64,

    /// Upper end of the (n₀, μ₀) log grid.
    #[arg(long, default_value_t = 1e2)]
    pub hyper_max: f64,

    /// Monte Carlo draws per landscape (shared across all grid cells).
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,

    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn run(args: &PriorLandscapeArgs) -> Result<(), CliError> {
    let fam = resolve_family(&args.family)?;
    if fam.dim() != 1 {
        return Err(CliError::config("prior-landscape needs a one-dimensional family"));
    }
    let (mu_star, theta_star) = resolve_mean_star(fam.as_ref(), &args.mu_star)?;
    let mu_star = mu_star.as_slice()[0];
    let n_list = parse_n_grid(&args.n_grid).map_err(CliError::config)?;
    if args.grid_points < 2 || args.hyper_min <= 0.0 || args.hyper_max <= args.hyper_min {
        return Err(CliError::config("need grid_points >= 2 and 0 < hyper_min < hyper_max"));
    }
    args.common.ensure_out_dir()?;

    let hyper = log_grid(args.hyper_min, args.hyper_max, args.grid_points);
    let mut rows = Vec::new();
    let mut panels = Vec::new();
    let mut infinite_cells = 0usize;
    for (ni, &n) in n_list.iter().enumerate() {
        let scape = map_risk_landscape(
            fam.as_ref(),
            &theta_star,
            &hyper,
            &hyper,
            n,
            args.trials,
            args.common.seed,
            ni as u32,
        )?;
        let mut minima = Vec::new();
        for (i, &n0) in hyper.iter().enumerate() {
            let mut best = (f64::INFINITY, 0.0);
            for (j, &mu0) in hyper.iter().enumerate() {
                let risk = scape.risks[i][j];
                if !risk.is_finite() {
                    infinite_cells += 1;
                }
                if risk < best.0 {
                    best = (risk, mu0);
                }
                rows.push(vec![n.to_string(), fmt(n0), fmt(mu0), fmt(risk)]);
            }
            minima.push((n0, best.1));
        }
        panels.push(HeatPanel {
            title: format!("n = {n}"),
            x_grid: hyper.clone(),
            y_grid: hyper.clone(),
            values: scape.risks,
            reference: hyper.iter().map(|&n0| (n0, mu_star * (1.0 + 1.0 / n0))).collect(),
            minima,
        });
    }

    if args.common.emit.csv {
        write_csv(
            &args.common.path(&format!("prior-landscape-{}", fam.name()), "csv"),
            &["n", "n0", "mu0", "risk"],
            &rows,
        )?;
    }
    if args.common.emit.svg {
        let content = render_heat_panels(
            &format!(
                "Expected MAP risk over prior hyperparameters, {} (seed {})",
                fam.name(),
                args.common.seed
            ),
            "pseudo-count n0",
            "prior mean mu0",
            &panels,
        );
        write_svg(
            &args.common.path(&format!("prior-landscape-{}", fam.name()), "svg"),
            &content,
        )?;
    }

    if infinite_cells > 0 {
        return Err(CliError::assertion(
            "landscape-finite",
            format!("{infinite_cells} grid cells diverged; the MAP risk should be finite everywhere"),
        ));
    }
    println!(
        "prior-landscape: {} panels x {}x{} cells, all finite",
        n_list.len(),
        args.grid_points,
        args.grid_points
    );
    Ok(())
}
