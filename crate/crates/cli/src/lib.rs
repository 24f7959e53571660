//! Command-line front end for `gabor-fiber-core`: window ingestion, lattice
//! configuration and JSON/CSV reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod report;
pub mod window_io;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use gabor_fiber_core::gabor::{
    self, dual_window, modulation_correlation, translate_correlation, wexler_raz_verify, AnalysisOptions, Lattice,
};
use gabor_fiber_core::spaces::classify_space;
use gabor_fiber_core::C64;
use serde::Serialize;

pub use config::{Command, Format, RunConfig, WindowSource};
use report::{
    complex, AnalysisDto, CorrelationDto, CorrelationsDto, DualDto, MembershipDto, Report, VerifyDto, WexlerRazDto,
};
use window_io::{load_window, write_csv};

/// `|m|, |k|` range of the Wexler–Raz check.
pub const WEXLER_RAZ_RANGE: usize = 6;

/// Extra section radius for `dual` beyond the support: the section dual
/// approaches the true dual exponentially in `K`.
pub const DUAL_MARGIN: usize = 12;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("input: {0}")]
    Input(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] gabor_fiber_core::Error),
}

impl CliError {
    /// 2 for precondition errors, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}

/// Runs one command and writes its report.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.validate()?;
    let lat = cfg.lattice()?;
    match cfg.command {
        Command::Analyze => analyze(cfg, &lat),
        Command::Dual => dual(cfg, &lat),
        Command::Verify => verify(cfg, &lat),
        Command::Classify => classify(cfg, &lat),
        Command::Correlations => correlations(cfg, &lat),
    }
}

fn analyze(cfg: &RunConfig, lat: &Lattice) -> Result<(), CliError> {
    let g = load_window(&cfg.window, lat.step())?.samples;
    let opts = AnalysisOptions { truncation: cfg.trunc_k, module_radius: cfg.trunc_n, tol: cfg.tol };
    let res = gabor::analyze(&g, lat, &opts)?;
    let report = Report::new(cfg, lat, Some(res.truncation), cfg.trunc_n, AnalysisDto::from(&res));
    write_json(cfg.out.as_deref(), &report)
}

fn dual(cfg: &RunConfig, lat: &Lattice) -> Result<(), CliError> {
    let g = load_window(&cfg.window, lat.step())?.samples;
    let trunc = cfg.trunc_k.unwrap_or_else(|| lat.default_truncation(&g) + DUAL_MARGIN);
    let d = dual_window(&g, lat, trunc, &cfg.tol)?;
    let wr = wexler_raz_verify(&g, &d.window, lat, WEXLER_RAZ_RANGE, WEXLER_RAZ_RANGE, &cfg.tol)?;
    let wr = WexlerRazDto::new(&wr, WEXLER_RAZ_RANGE, WEXLER_RAZ_RANGE);
    match cfg.format {
        Format::Json => {
            let report = Report::new(cfg, lat, Some(trunc), cfg.trunc_n, DualDto::new(&d, wr, true));
            write_json(cfg.out.as_deref(), &report)
        }
        Format::Csv => {
            let out = cfg.out.as_deref().ok_or_else(|| CliError::Config("dual --format csv needs --out".into()))?;
            write_csv(&d.window, BufWriter::new(create(out)?))?;
            let report = Report::new(cfg, lat, Some(trunc), cfg.trunc_n, DualDto::new(&d, wr, false));
            write_json(Some(&sidecar(out)), &report)
        }
    }
}

/// `dual.csv` → `dual.wr.json`.
pub fn sidecar(out: &Path) -> PathBuf {
    out.with_extension("wr.json")
}

fn verify(cfg: &RunConfig, lat: &Lattice) -> Result<(), CliError> {
    let g = load_window(&cfg.window, lat.step())?.samples;
    let source = cfg.window2.as_ref().ok_or_else(|| CliError::Config("verify needs --window2".into()))?;
    let h = load_window(source, lat.step())?.samples;
    let trunc = cfg.trunc_k.unwrap_or(WEXLER_RAZ_RANGE);
    let wr = wexler_raz_verify(&g, &h, lat, trunc, trunc, &cfg.tol)?;
    let mut residual = 0.0f64;
    for k in -(trunc as i64)..=trunc as i64 {
        let want = if k == 0 { lat.b() } else { 0.0 };
        let gk = modulation_correlation(&g, &h, lat, k)?;
        residual = gk.samples().iter().fold(residual, |r, z| r.max((z - want).norm()));
    }
    let result = VerifyDto {
        wexler_raz: WexlerRazDto::new(&wr, trunc, trunc),
        correlation_residual: residual,
        passed: wr.passed && residual <= cfg.tol.wexler_raz,
    };
    write_json(cfg.out.as_deref(), &Report::new(cfg, lat, Some(trunc), None, result))
}

fn classify(cfg: &RunConfig, lat: &Lattice) -> Result<(), CliError> {
    let spec = load_window(&cfg.window, lat.step())?.spec;
    let period = cfg.period.unwrap_or(lat.a());
    let m = classify_space(&spec, period, lat.step())?;
    write_json(cfg.out.as_deref(), &Report::new(cfg, lat, None, None, MembershipDto::from(&m)))
}

fn correlations(cfg: &RunConfig, lat: &Lattice) -> Result<(), CliError> {
    let g = load_window(&cfg.window, lat.step())?.samples;
    let k_max = cfg.trunc_k.unwrap_or_else(|| lat.needed_modulation_radius(&g)) as i64;
    let j_max = cfg.trunc_n.unwrap_or_else(|| lat.needed_translation_radius(&g)) as i64;
    let modulation = (-k_max..=k_max)
        .map(|k| Ok(CorrelationDto { index: k, values: to_pairs(modulation_correlation(&g, &g, lat, k)?.samples()) }))
        .collect::<Result<Vec<_>, CliError>>()?;
    let translation = (-j_max..=j_max)
        .map(|j| Ok(CorrelationDto { index: j, values: to_pairs(translate_correlation(&g, lat, j)?.samples()) }))
        .collect::<Result<Vec<_>, CliError>>()?;
    let result = CorrelationsDto { step: lat.step(), modulation, translation };
    match cfg.format {
        Format::Json => {
            let report = Report::new(cfg, lat, Some(k_max as usize), Some(j_max as usize), result);
            write_json(cfg.out.as_deref(), &report)
        }
        Format::Csv => with_output(cfg.out.as_deref(), |w| write_correlations_csv(&result, w)),
    }
}

fn to_pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().copied().map(complex).collect()
}

#[derive(Serialize)]
struct CorrelationRow {
    kind: &'static str,
    index: i64,
    x: f64,
    value_re: f64,
    value_im: f64,
}

/// Rows `kind,index,x,value_re,value_im` with `kind` either `G` or `Gamma`.
fn write_correlations_csv(c: &CorrelationsDto, out: &mut dyn Write) -> Result<(), CliError> {
    let mut wtr = csv::Writer::from_writer(out);
    let tables = [("G", &c.modulation), ("Gamma", &c.translation)];
    for (kind, table) in tables {
        for row in table.iter() {
            for (i, v) in row.values.iter().enumerate() {
                let rec =
                    CorrelationRow { kind, index: row.index, x: i as f64 * c.step, value_re: v[0], value_im: v[1] };
                wtr.serialize(rec).map_err(|e| CliError::Io(e.to_string()))?;
            }
        }
    }
    wtr.flush().map_err(|e| CliError::Io(e.to_string()))
}

fn create(path: &Path) -> Result<File, CliError> {
    File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn with_output(out: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<(), CliError>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(create(path)?);
            f(&mut w)?;
            w.flush().map_err(|e| CliError::Io(e.to_string()))
        }
        None => f(&mut io::stdout().lock()),
    }
}

fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), CliError> {
    with_output(out, |w| {
        serde_json::to_writer_pretty(&mut *w, value).map_err(|e| CliError::Io(e.to_string()))?;
        writeln!(w).map_err(|e| CliError::Io(e.to_string()))
    })
}
