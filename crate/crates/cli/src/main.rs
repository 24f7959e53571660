use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use gabor_fiber::config::DEFAULT_GRID;
use gabor_fiber::{run, Command, Format, RunConfig, WindowSource};
use gabor_fiber_core::Tolerances;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Analyze,
    Dual,
    Verify,
    Classify,
    Correlations,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Fmt {
    Json,
    Csv,
}

/// Frame bounds, dual windows and space membership of Gabor systems G(g, a, b).
///
/// Windows are builtin names (gaussian, rect, hat, exponential, paper_f1,
/// paper_f2, paper_f3, optionally with parameters such as rect:0:1) or
/// .csv/.json files. GABOR_FIBER_THREADS caps the worker threads.
#[derive(Debug, Parser)]
#[command(name = "gabor-fiber", version)]
struct Args {
    command: Cmd,
    #[arg(long)]
    window: String,
    #[arg(long)]
    window2: Option<String>,
    #[arg(short = 'a', allow_negative_numbers = true)]
    a: f64,
    #[arg(short = 'b', allow_negative_numbers = true)]
    b: f64,
    /// Fibers per modulation period 1/b.
    #[arg(long = "grid", default_value_t = DEFAULT_GRID)]
    grid: usize,
    /// Translate radius N (module route, Γ_j table).
    #[arg(long)]
    trunc_n: Option<usize>,
    /// Section radius K.
    #[arg(long)]
    trunc_k: Option<usize>,
    /// Cell length for classify (default a).
    #[arg(long)]
    period: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Fmt,
    #[arg(long)]
    tol_frame: Option<f64>,
    #[arg(long)]
    tol_recon: Option<f64>,
    #[arg(long)]
    tol_parseval: Option<f64>,
    #[arg(long)]
    tol_wexler_raz: Option<f64>,
    #[arg(long)]
    tol_imag: Option<f64>,
    #[arg(long)]
    tol_condition: Option<f64>,
}

impl Args {
    fn into_config(self) -> RunConfig {
        let command = match self.command {
            Cmd::Analyze => Command::Analyze,
            Cmd::Dual => Command::Dual,
            Cmd::Verify => Command::Verify,
            Cmd::Classify => Command::Classify,
            Cmd::Correlations => Command::Correlations,
        };
        let d = Tolerances::default();
        let tol = Tolerances {
            frame_rel: self.tol_frame.unwrap_or(d.frame_rel),
            recon: self.tol_recon.unwrap_or(d.recon),
            parseval: self.tol_parseval.unwrap_or(d.parseval),
            wexler_raz: self.tol_wexler_raz.unwrap_or(d.wexler_raz),
            imag_rel: self.tol_imag.unwrap_or(d.imag_rel),
            max_condition: self.tol_condition.unwrap_or(d.max_condition),
        };
        RunConfig {
            window2: self.window2.as_deref().map(WindowSource::parse),
            grid: self.grid,
            trunc_n: self.trunc_n,
            trunc_k: self.trunc_k,
            period: self.period,
            tol,
            out: self.out,
            format: match self.format {
                Fmt::Json => Format::Json,
                Fmt::Csv => Format::Csv,
            },
            ..RunConfig::new(command, WindowSource::parse(&self.window), self.a, self.b)
        }
    }
}

fn main() -> ExitCode {
    let cfg = Args::parse().into_config();
    if let Some(n) = std::env::var("GABOR_FIBER_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("gabor-fiber: cannot set thread count: {e}");
        }
    }
    match run(&cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gabor-fiber: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
