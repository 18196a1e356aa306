//! Shared flags, grid parsing, and family/parameter resolution.

use std::path::PathBuf;

use clap::Args;
use expfam::families;
use expfam::family::Family;
use expfam::param::{MeanParam, NaturalParam};

use crate::error::CliError;

/// Flags common to every command. The seed is mandatory: there is no
/// wall-clock default, so every run is reproducible by construction.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Base seed for all random streams.
    #[arg(long)]
    pub seed: u64,

    /// Worker threads for the Monte Carlo pool (0 = all cores). The output
    /// is byte-identical for any value.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,

    /// Output directory for CSV/SVG files.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,

    /// What to write: `csv`, `svg`, or `csv,svg`.
    #[arg(long, default_value = "csv,svg", value_parser = parse_emit)]
    pub emit: Emit,
}

#[derive(Debug, Clone, Copy)]
pub struct Emit {
    pub csv: bool,
    pub svg: bool,
}

fn parse_emit(s: &str) -> Result<Emit, String> {
    let mut emit = Emit { csv: false, svg: false };
    for part in s.split(',') {
        match part.trim() {
            "csv" => emit.csv = true,
            "svg" => emit.svg = true,
            other => return Err(format!("unknown emit target '{other}' (expected csv, svg)")),
        }
    }
    if !emit.csv && !emit.svg {
        return Err("emit must include at least one of csv, svg".into());
    }
    Ok(emit)
}

impl CommonArgs {
    /// Installs the requested global worker pool; call once at startup.
    pub fn install_workers(&self) -> Result<(), CliError> {
        if self.workers == 0 {
            return Ok(());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build_global()
            .map_err(|e| CliError::config(format!("worker pool: {e}")))
    }

    pub fn ensure_out_dir(&self) -> Result<(), CliError> {
        std::fs::create_dir_all(&self.out).map_err(|e| CliError::io(&self.out, e))
    }

    pub fn path(&self, stem: &str, ext: &str) -> PathBuf {
        self.out.join(format!("{stem}-{}.{ext}", self.seed))
    }
}

pub fn resolve_family(name: &str) -> Result<Box<dyn Family>, CliError> {
    families::from_name(name).map_err(|e| CliError::config(e.to_string()))
}

/// Comma-separated floats.
pub fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}")))
        .collect()
}

/// Sample-size grids: `a,b,c` (strictly increasing integers), `lo..hi`
/// (every integer, inclusive), or `lo:hi:count` (log-spaced, deduplicated).
pub fn parse_n_grid(spec: &str) -> Result<Vec<usize>, String> {
    let grid: Vec<usize> = if let Some((lo, hi)) = spec.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|e| format!("'{spec}': {e}"))?;
        let hi: usize = hi.trim().parse().map_err(|e| format!("'{spec}': {e}"))?;
        if lo == 0 || hi < lo {
            return Err(format!("'{spec}': need 1 <= lo <= hi"));
        }
        (lo..=hi).collect()
    } else if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("'{spec}': expected lo:hi:count"));
        }
        let lo: usize = parts[0].trim().parse().map_err(|e| format!("'{spec}': {e}"))?;
        let hi: usize = parts[1].trim().parse().map_err(|e| format!("'{spec}': {e}"))?;
        let count: usize = parts[2].trim().parse().map_err(|e| format!("'{spec}': {e}"))?;
        if lo == 0 || hi < lo || count < 2 {
            return Err(format!("'{spec}': need 1 <= lo <= hi and count >= 2"));
        }
        let (llo, lhi) = ((lo as f64).ln(), (hi as f64).ln());
        let mut grid: Vec<usize> = (0..count)
            .map(|i| {
                (llo + (lhi - llo) * i as f64 / (count - 1) as f64)
                    .exp()
                    .round() as usize
            })
            .collect();
        grid.dedup();
        grid
    } else {
        spec.split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|e| format!("'{p}': {e}")))
            .collect::<Result<_, _>>()?
    };
    if grid.is_empty() {
        return Err("empty n grid".into());
    }
    if grid.contains(&0) {
        return Err("sample sizes must be positive".into());
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("'{spec}': n grid must be strictly increasing"));
    }
    Ok(grid)
}

/// Log-spaced grid of `count` points over [lo, hi].
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (llo + (lhi - llo) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// μ* from a flag or the family default, validated against M.
pub fn resolve_mean_star(
    fam: &dyn Family,
    flag: &Option<String>,
) -> Result<(MeanParam, NaturalParam), CliError> {
    let mu = match flag {
        Some(spec) => MeanParam::new(parse_floats(spec).map_err(CliError::config)?),
        None => fam.default_mean_star(),
    };
    if mu.dim() != fam.dim() {
        return Err(CliError::config(format!(
            "mu-star needs {} coordinates for {}, got {}",
            fam.dim(),
            fam.name(),
            mu.dim()
        )));
    }
    if !fam.contains_mean(mu.as_slice()) {
        return Err(CliError::config(format!(
            "mu-star {:?} lies outside the mean domain of {}",
            mu.as_slice(),
            fam.name()
        )));
    }
    let theta = fam.to_natural(&mu);
    Ok((mu, theta))
}

/// μ₀ from a flag or a caller default, validated against M.
pub fn resolve_mu0(fam: &dyn Family, flag: &Option<String>, default: &[f64]) -> Result<MeanParam, CliError> {
    let mu0 = match flag {
        Some(spec) => MeanParam::new(parse_floats(spec).map_err(CliError::config)?),
        None => MeanParam::from_slice(default),
    };
    if mu0.dim() != fam.dim() || !fam.contains_mean(mu0.as_slice()) {
        return Err(CliError::config(format!(
            "mu0 {:?} is not an interior mean parameter of {}",
            mu0.as_slice(),
            fam.name()
        )));
    }
    Ok(mu0)
}
