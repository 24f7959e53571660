use std::path::PathBuf;

use gabor_fiber_core::gabor::Lattice;
use gabor_fiber_core::Tolerances;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analyze,
    Dual,
    Verify,
    Classify,
    Correlations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Where a window comes from: a builtin name such as `gaussian` or
/// `rect:0:1`, or a `.csv` / `.json` file.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", content = "value", rename_all = "lowercase")]
pub enum WindowSource {
    Builtin(String),
    File(PathBuf),
}

impl WindowSource {
    pub fn parse(s: &str) -> Self {
        let path = PathBuf::from(s);
        let is_file = matches!(path.extension().and_then(|e| e.to_str()), Some("csv" | "json")) || path.exists();
        if is_file {
            WindowSource::File(path)
        } else {
            WindowSource::Builtin(s.to_owned())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TolerancesDto {
    pub frame_rel: f64,
    pub recon: f64,
    pub parseval: f64,
    pub wexler_raz: f64,
    pub imag_rel: f64,
    pub max_condition: f64,
}

impl From<Tolerances> for TolerancesDto {
    fn from(t: Tolerances) -> Self {
        Self {
            frame_rel: t.frame_rel,
            recon: t.recon,
            parseval: t.parseval,
            wexler_raz: t.wexler_raz,
            imag_rel: t.imag_rel,
            max_condition: t.max_condition,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub window: WindowSource,
    pub window2: Option<WindowSource>,
    pub a: f64,
    pub b: f64,
    /// Fibers per modulation period `1/b`; the sample step is `1/(b·grid)`.
    pub grid: usize,
    /// Translate radius `N` for the module route and the `Γ_j` table.
    pub trunc_n: Option<usize>,
    /// Section radius `K`.
    pub trunc_k: Option<usize>,
    /// Cell length for `classify`; defaults to `a`.
    pub period: Option<f64>,
    pub tol: Tolerances,
    pub out: Option<PathBuf>,
    pub format: Format,
}

pub const DEFAULT_GRID: usize = 128;

impl RunConfig {
    pub fn new(command: Command, window: WindowSource, a: f64, b: f64) -> Self {
        Self {
            command,
            window,
            window2: None,
            a,
            b,
            grid: DEFAULT_GRID,
            trunc_n: None,
            trunc_k: None,
            period: None,
            tol: Tolerances::default(),
            out: None,
            format: Format::Json,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.a > 0.0 && self.a.is_finite()) || !(self.b > 0.0 && self.b.is_finite()) {
            return Err(CliError::Config("a and b must be positive and finite".into()));
        }
        if self.grid == 0 {
            return Err(CliError::Config("grid must be a positive integer".into()));
        }
        if matches!(self.period, Some(p) if !(p > 0.0 && p.is_finite())) {
            return Err(CliError::Config("period must be positive".into()));
        }
        if self.command == Command::Verify && self.window2.is_none() {
            return Err(CliError::Config("verify needs --window2".into()));
        }
        if self.format == Format::Csv && matches!(self.command, Command::Analyze | Command::Verify | Command::Classify)
        {
            return Err(CliError::Config("csv output is only available for dual and correlations".into()));
        }
        let t = &self.tol;
        let all = [t.frame_rel, t.recon, t.parseval, t.wexler_raz, t.imag_rel, t.max_condition];
        if all.iter().any(|x| !(*x >= 0.0)) {
            return Err(CliError::Config("tolerances must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn lattice(&self) -> Result<Lattice, CliError> {
        Ok(Lattice::with_fibers(self.a, self.b, self.grid)?)
    }
}
