use std::fs;
use std::path::Path;

use ergopress::io::{parse_potential, parse_tower};
use ergopress::variational::OptimizerConfig;
use ergopress::{Potential, Tower};

use crate::args::RunArgs;
use crate::error::{CliError, CliResult};

/// Everything a tower-level command needs, loaded and validated.
#[derive(Debug, Clone)]
pub struct Scenario {
    /// File stem of the tower description.
    pub id: String,
    pub tower: Tower,
    pub potential: Potential,
    pub omegas: Vec<f64>,
    pub n_min: usize,
    pub n_max: usize,
    pub config: OptimizerConfig,
}

pub fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))
}

/// Parses a comma-separated list of weights in `[0, 1]`.
pub fn parse_omegas(text: &str) -> CliResult<Vec<f64>> {
    let omegas = text
        .split(',')
        .map(|s| {
            let w: f64 = s
                .trim()
                .parse()
                .map_err(|_| CliError::validation(format!("bad omega {s:?}")))?;
            if !(0.0..=1.0).contains(&w) {
                return Err(CliError::validation(format!("omega {w} outside [0, 1]")));
            }
            Ok(w)
        })
        .collect::<CliResult<Vec<f64>>>()?;
    Ok(omegas)
}

impl Scenario {
    pub fn load(args: &RunArgs) -> CliResult<Self> {
        let (tower, mut potential) = parse_tower(&read(&args.tower)?)?;
        if let Some(p) = &args.potential {
            potential = parse_potential(&read(p)?, tower.x())?;
        }
        let omegas = parse_omegas(&args.omega)?;
        if args.n_min == 0 || args.n_min > args.n_max {
            return Err(CliError::validation(format!(
                "level range {}..={} must be nonempty and start at 1 or later",
                args.n_min, args.n_max
            )));
        }
        let mut config = match &args.config {
            Some(p) => serde_json::from_str(&read(p)?)
                .map_err(|e| CliError::validation(format!("bad optimizer config: {e}")))?,
            None => OptimizerConfig::default(),
        };
        if let Some(s) = args.seed {
            config.seed = s;
        }
        config.validate()?;
        let id = args
            .tower
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "tower".into());
        Ok(Self {
            id,
            tower,
            potential,
            omegas,
            n_min: args.n_min,
            n_max: args.n_max,
            config,
        })
    }
}
