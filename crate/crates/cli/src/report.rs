//! Serializable report types. Every report carries `schema_version` and the
//! full effective configuration.

use std::path::PathBuf;

use gabor_fiber_core::gabor::{
    BesselEstimates, DualWindow, GaborAnalysis, Lattice, ParsevalReport, Warning, WexlerRazReport,
};
use gabor_fiber_core::hmod::FrameBounds;
use gabor_fiber_core::schur::{SchurReport, SchurVariant};
use gabor_fiber_core::spaces::{SpaceMembership, Verdict};
use gabor_fiber_core::C64;
use serde::Serialize;

use crate::config::{Command, Format, RunConfig, TolerancesDto, WindowSource};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub schema_version: u32,
    pub command: Command,
    pub config: ConfigDto,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(cfg: &RunConfig, lattice: &Lattice, trunc_k: Option<usize>, trunc_n: Option<usize>, result: T) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: cfg.command,
            config: ConfigDto {
                window: cfg.window.clone(),
                window2: cfg.window2.clone(),
                a: cfg.a,
                b: cfg.b,
                grid: cfg.grid,
                trunc_n,
                trunc_k,
                period: cfg.period,
                tolerances: cfg.tol.into(),
                out: cfg.out.clone(),
                format: cfg.format,
                lattice: lattice.into(),
            },
            result,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigDto {
    pub window: WindowSource,
    pub window2: Option<WindowSource>,
    /// As requested, before snapping.
    pub a: f64,
    pub b: f64,
    pub grid: usize,
    pub trunc_n: Option<usize>,
    pub trunc_k: Option<usize>,
    pub period: Option<f64>,
    pub tolerances: TolerancesDto,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub lattice: LatticeDto,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LatticeDto {
    pub a: f64,
    pub b: f64,
    pub step: f64,
    pub p_a: usize,
    pub q_b: usize,
    pub density: [u64; 2],
    pub snap_distance: f64,
}

impl From<&Lattice> for LatticeDto {
    fn from(l: &Lattice) -> Self {
        let (p, q) = l.density();
        Self {
            a: l.a(),
            b: l.b(),
            step: l.step(),
            p_a: l.p_a(),
            q_b: l.q_b(),
            density: [p, q],
            snap_distance: l.snap_distance(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WarningDto {
    Snap { distance: f64 },
    Truncation { needed: usize, used: usize },
    Conditioning { fiber: usize, condition: f64 },
}

impl From<&Warning> for WarningDto {
    fn from(w: &Warning) -> Self {
        match *w {
            Warning::Snap { distance } => WarningDto::Snap { distance },
            Warning::Truncation { needed, used } => WarningDto::Truncation { needed, used },
            Warning::Conditioning { fiber, condition } => WarningDto::Conditioning { fiber, condition },
        }
    }
}

fn warnings(ws: &[Warning]) -> Vec<WarningDto> {
    ws.iter().map(Into::into).collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundsDto {
    pub lower: f64,
    pub upper: f64,
}

impl From<FrameBounds> for BoundsDto {
    fn from(b: FrameBounds) -> Self {
        Self { lower: b.lower, upper: b.upper }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SchurDto {
    pub col_budget: f64,
    pub row_budget: f64,
    pub bound: f64,
    pub variant: &'static str,
    pub absolute: bool,
    pub norm_convergent: bool,
    pub strong_convergent: bool,
}

impl From<&SchurReport> for SchurDto {
    fn from(r: &SchurReport) -> Self {
        Self {
            col_budget: r.col_budget,
            row_budget: r.row_budget,
            bound: r.bound,
            variant: match r.variant {
                SchurVariant::Absolute => "absolute",
                SchurVariant::NormConvergent => "norm_convergent",
                SchurVariant::StrongConvergent => "strong_convergent",
            },
            absolute: r.absolute,
            norm_convergent: r.norm_convergent,
            strong_convergent: r.strong_convergent,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimatesDto {
    pub cc: f64,
    pub daubechies: f64,
    pub dual_cc: f64,
    pub schur: f64,
    pub schur_report: SchurDto,
    pub translate_radius: usize,
}

impl From<&BesselEstimates> for EstimatesDto {
    fn from(e: &BesselEstimates) -> Self {
        Self {
            cc: e.cc,
            daubechies: e.daubechies,
            dual_cc: e.dual_cc,
            schur: e.schur,
            schur_report: (&e.schur_report).into(),
            translate_radius: e.translate_radius,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParsevalDto {
    pub passed: bool,
    pub g0_residual: f64,
    pub off_residual: f64,
}

impl From<ParsevalReport> for ParsevalDto {
    fn from(p: ParsevalReport) -> Self {
        Self { passed: p.passed, g0_residual: p.g0_residual, off_residual: p.off_residual }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisDto {
    pub truncation: usize,
    pub bounds: BoundsDto,
    pub is_frame: bool,
    pub module_bounds: Option<BoundsDto>,
    pub estimates: EstimatesDto,
    pub parseval: ParsevalDto,
    pub walnut_tail: Vec<f64>,
    pub warnings: Vec<WarningDto>,
}

impl From<&GaborAnalysis> for AnalysisDto {
    fn from(a: &GaborAnalysis) -> Self {
        Self {
            truncation: a.truncation,
            bounds: a.bounds.into(),
            is_frame: a.is_frame,
            module_bounds: a.module_bounds.map(Into::into),
            estimates: (&a.estimates).into(),
            parseval: a.parseval.into(),
            walnut_tail: a.walnut_tail.clone(),
            warnings: warnings(&a.warnings),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct WexlerRazDto {
    pub origin: [f64; 2],
    pub origin_residual: f64,
    pub max_off_origin: f64,
    /// `(m, k)` of the largest off-origin value.
    pub worst: [i64; 2],
    pub k_max: usize,
    pub m_max: usize,
    pub passed: bool,
}

impl WexlerRazDto {
    pub fn new(r: &WexlerRazReport, k_max: usize, m_max: usize) -> Self {
        Self {
            origin: complex(r.origin),
            origin_residual: r.origin_residual,
            max_off_origin: r.max_off_origin,
            worst: [r.worst.0, r.worst.1],
            k_max,
            m_max,
            passed: r.passed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DualDto {
    pub bounds: BoundsDto,
    pub condition: f64,
    pub wexler_raz: WexlerRazDto,
    pub warnings: Vec<WarningDto>,
    /// Present in JSON output; CSV output writes the samples to `--out`.
    pub samples: Option<SamplesDto>,
}

impl DualDto {
    pub fn new(d: &DualWindow, wr: WexlerRazDto, with_samples: bool) -> Self {
        Self {
            bounds: d.bounds.into(),
            condition: d.condition,
            wexler_raz: wr,
            warnings: warnings(&d.warnings),
            samples: with_samples.then(|| SamplesDto::new(d.window.step(), d.window.start(), d.window.values())),
        }
    }
}

/// Samples `values[i]` at `x = (start + i)·step`.
#[derive(Debug, Clone, Serialize)]
pub struct SamplesDto {
    pub step: f64,
    pub start: i64,
    pub values: Vec<[f64; 2]>,
}

impl SamplesDto {
    pub fn new(step: f64, start: i64, values: &[C64]) -> Self {
        Self { step, start, values: values.iter().copied().map(complex).collect() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyDto {
    pub wexler_raz: WexlerRazDto,
    /// `max_{|k|≤K} ‖G_k^{h,g} − b·δ_k‖∞`.
    pub correlation_residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictDto {
    Yes,
    No,
    Undetermined,
}

impl From<Verdict> for VerdictDto {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Yes => VerdictDto::Yes,
            Verdict::No => VerdictDto::No,
            Verdict::Undetermined => VerdictDto::Undetermined,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MembershipDto {
    pub period: f64,
    pub in_w1: VerdictDto,
    pub in_w2: VerdictDto,
    pub in_x: VerdictDto,
    pub in_linf_l2: VerdictDto,
    pub w2_norm: Option<f64>,
    pub linf_l2_norm: Option<f64>,
}

impl From<&SpaceMembership> for MembershipDto {
    fn from(m: &SpaceMembership) -> Self {
        Self {
            period: m.period,
            in_w1: m.in_w1.into(),
            in_w2: m.in_w2.into(),
            in_x: m.in_x.into(),
            in_linf_l2: m.in_linf_l2.into(),
            w2_norm: m.w2_norm,
            linf_l2_norm: m.linf_l2_norm,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationDto {
    /// `k` for `G_k` (fibers of `[0, a)`), `j` for `Γ_j` (fibers of `[0, 1/b)`).
    pub index: i64,
    pub values: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationsDto {
    pub step: f64,
    pub modulation: Vec<CorrelationDto>,
    pub translation: Vec<CorrelationDto>,
}

pub fn complex(z: C64) -> [f64; 2] {
    [z.re, z.im]
}
