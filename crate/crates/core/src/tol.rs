/// Numerical thresholds shared by the frame computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative invertibility threshold: a system is a frame iff `A > frame_rel * (1 + B)`.
    pub frame_rel: f64,
    /// Relative reconstruction residual accepted for canonical duals.
    pub recon: f64,
    /// Absolute residual for the Parseval conditions `G_0 = b`, `G_k = 0`.
    pub parseval: f64,
    /// Absolute residual for the Wexler–Raz relations.
    pub wexler_raz: f64,
    /// Relative imaginary-part threshold for fields that should be real.
    pub imag_rel: f64,
    /// Fiber conditioning above which a dual-window solve is flagged.
    pub max_condition: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { frame_rel: 1e-9, recon: 1e-8, parseval: 1e-9, wexler_raz: 1e-8, imag_rel: 1e-10, max_condition: 1e12 }
    }
}

impl Tolerances {
    pub fn frame_tol(&self, upper: f64) -> f64 {
        self.frame_rel * (1.0 + upper)
    }
}
