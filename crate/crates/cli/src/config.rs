use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use surfcrack::{nondimensionalize, CrackParams, PhysicalInputs};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Solve,
    Sweep,
    Fig3,
    Fig4,
    Converge,
    Field,
    KinematicsDemo,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Solve => "solve",
            Mode::Sweep => "sweep",
            Mode::Fig3 => "fig3",
            Mode::Fig4 => "fig4",
            Mode::Converge => "converge",
            Mode::Field => "field",
            Mode::KinematicsDemo => "kinematics-demo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Command-line flags. Every value is optional so that a config file can
/// supply it; flags win over the file.
#[derive(Debug, Clone, Default, Parser)]
#[command(name = "surfcrack", version, about = "Mode-III crack opening with strain-gradient surface elasticity")]
pub struct Flags {
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Grid size (odd, at least 33).
    #[arg(long)]
    pub n: Option<usize>,
    /// Flat JSON config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Strong-residual threshold above which the run fails.
    #[arg(long = "tol-residual")]
    pub tol_residual: Option<f64>,
    /// Grid sizes for `converge`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<usize>>,
    /// Decreasing beta values for `sweep`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub betas: Option<Vec<f64>>,
}

/// Contents of the flat JSON config file.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub mode: Option<Mode>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub n: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub tol_residual: Option<f64>,
    pub ns: Option<Vec<usize>>,
    pub betas: Option<Vec<f64>>,
    pub mu: Option<f64>,
    pub mu_s: Option<f64>,
    pub zeta: Option<f64>,
    pub eta: Option<f64>,
    pub ell: Option<f64>,
    pub sigma: Option<f64>,
    pub field_half_width: Option<f64>,
    pub field_height: Option<f64>,
    pub field_nx: Option<usize>,
    pub field_ny: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldWindow {
    pub half_width: f64,
    pub height: f64,
    pub nx: usize,
    pub ny: usize,
}

/// A fully resolved run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub params: CrackParams,
    /// `None` means the mode default.
    pub n: Option<usize>,
    pub ns: Vec<usize>,
    pub betas: Vec<f64>,
    pub out: PathBuf,
    pub format: Format,
    pub tol_residual: f64,
    pub field: FieldWindow,
}

pub const DEFAULT_N: usize = 513;
pub const FIG4_N: usize = 2049;
pub const DEFAULT_NS: [usize; 4] = [129, 257, 513, 1025];
pub const DEFAULT_BETAS: [f64; 3] = [1e-2, 1e-4, 1e-6];

impl RunConfig {
    /// Merges flags over the optional config file and validates.
    pub fn resolve(flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let mode = flags
            .mode
            .or(file.mode)
            .ok_or_else(|| CliError::Usage("no mode given (--mode or \"mode\" in the config)".into()))?;

        let physical = [file.mu, file.mu_s, file.zeta, file.eta, file.ell, file.sigma];
        let alpha = flags.alpha.or(file.alpha);
        let beta = flags.beta.or(file.beta);
        let gamma = flags.gamma.or(file.gamma);
        let params = if physical.iter().any(Option::is_some) {
            if alpha.is_some() || beta.is_some() || gamma.is_some() {
                return Err(CliError::Usage(
                    "give either alpha/beta/gamma or the physical constants, not both".into(),
                ));
            }
            let [mu, mu_s, zeta, eta, ell, sigma] = physical.map(|v| v.ok_or(()));
            let missing = || CliError::Usage("physical input needs mu, mu_s, zeta, eta, ell and sigma".into());
            nondimensionalize(&PhysicalInputs {
                mu: mu.map_err(|_| missing())?,
                mu_s: mu_s.map_err(|_| missing())?,
                zeta: zeta.map_err(|_| missing())?,
                eta: eta.map_err(|_| missing())?,
                ell: ell.map_err(|_| missing())?,
                sigma: sigma.map_err(|_| missing())?,
            })
            .map_err(|e| CliError::Usage(e.to_string()))?
        } else {
            CrackParams::new(alpha.unwrap_or(1.0), beta.unwrap_or(1.0), gamma.unwrap_or(1.0))
                .map_err(|e| CliError::Usage(e.to_string()))?
        };

        let n = flags.n.or(file.n);
        if let Some(n) = n {
            if n < 33 || n % 2 == 0 {
                return Err(CliError::Usage(format!("n must be odd and at least 33, got {n}")));
            }
        }
        let ns = flags.ns.clone().or(file.ns).unwrap_or_else(|| DEFAULT_NS.to_vec());
        let betas = flags.betas.clone().or(file.betas).unwrap_or_else(|| DEFAULT_BETAS.to_vec());
        if betas.is_empty() || betas.iter().any(|b| !(*b > 0.0)) {
            return Err(CliError::Usage("betas must be positive".into()));
        }
        let tol_residual = flags.tol_residual.or(file.tol_residual).unwrap_or(1e-3);
        if !(tol_residual > 0.0) {
            return Err(CliError::Usage(format!("tol-residual must be positive, got {tol_residual}")));
        }
        let field = FieldWindow {
            half_width: file.field_half_width.unwrap_or(3.0),
            height: file.field_height.unwrap_or(3.0),
            nx: file.field_nx.unwrap_or(301),
            ny: file.field_ny.unwrap_or(301),
        };
        if !(field.half_width > 0.0 && field.height > 0.0) || field.nx < 3 || field.ny < 3 {
            return Err(CliError::Usage("field window needs positive extents and at least 3 x 3 nodes".into()));
        }
        Ok(Self {
            mode,
            params,
            n,
            ns,
            betas,
            out: flags.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from("out")),
            format: flags.format.or(file.format).unwrap_or_default(),
            tol_residual,
            field,
        })
    }

    pub fn n_or(&self, default: usize) -> usize {
        self.n.unwrap_or(default)
    }
}
