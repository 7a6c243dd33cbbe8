//! Inverse problems: least-squares parameter extraction.
//!
//! Every calibration the toolkit supports is phrased as a fit of a forward
//! model from [`crate::response`] or [`crate::memory`] to a [`Dataset`].
//! Nonlinear problems go through the damped Gauss-Newton solver in
//! [`least_squares`]; fits that are linear in their single free parameter
//! (input power, g_0², efficiency scale) are solved in closed form.

mod fits;
mod least_squares;

pub use fits::{
    fit_cavity, fit_eff_bandwidth, fit_eff_detuning, fit_g0, fit_input_power, fit_ringdown,
    fit_t1, FitTarget,
};
pub use least_squares::{least_squares, LeastSquaresOptions};

use core::fmt;

use alloc::vec::Vec;

/// What a dataset's abscissa/ordinate mean. Units are fixed per kind:
///
/// | kind          | x                | y                       |
/// |---------------|------------------|-------------------------|
/// | OmitBroad     | Ω_mod, rad/s     | reflection magnitude    |
/// | OmitNarrow    | Ω_mod, rad/s     | reflection magnitude    |
/// | Transmission  | Δ, rad/s         | transmitted power, W    |
/// | Dba           | Δ, rad/s         | Γ_eff, rad/s            |
/// | Ringdown      | t, s             | amplitude, arb.         |
/// | DecayT1       | T_delay, s       | A_out/A_in              |
/// | EffBandwidth  | Γ_sig, rad/s     | η                       |
/// | EffDetuning   | δ, rad/s         | η                       |
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetKind {
    OmitBroad,
    OmitNarrow,
    Transmission,
    Dba,
    Ringdown,
    DecayT1,
    EffBandwidth,
    EffDetuning,
}

/// A measured or synthetic curve with optional per-point weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub kind: DatasetKind,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub weights: Option<Vec<f64>>,
}

impl Dataset {
    pub fn new(kind: DatasetKind, x: Vec<f64>, y: Vec<f64>) -> Result<Self, FitError> {
        Self::weighted(kind, x, y, None)
    }

    pub fn weighted(
        kind: DatasetKind,
        x: Vec<f64>,
        y: Vec<f64>,
        weights: Option<Vec<f64>>,
    ) -> Result<Self, FitError> {
        if x.is_empty() {
            return Err(FitError::EmptyDataset);
        }
        if x.len() != y.len() {
            return Err(FitError::LengthMismatch);
        }
        if let Some(w) = &weights {
            if w.len() != x.len() {
                return Err(FitError::LengthMismatch);
            }
            if w.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(FitError::NonFinite("weights"));
            }
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(FitError::NonFinite("x"));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(FitError::NonFinite("y"));
        }
        Ok(Dataset { kind, x, y, weights })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub(crate) fn weight(&self, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[i])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FitError {
    EmptyDataset,
    LengthMismatch,
    NonFinite(&'static str),
    /// Model evaluated non-finite at the initial parameters.
    ModelNonFinite,
    /// Initial guess violates the supplied bounds.
    InitOutOfBounds,
    /// A Jacobian column vanished: the parameter is unidentifiable.
    SingularJacobian,
    /// Ringdown amplitudes must be positive to take logarithms.
    NonPositiveAmplitude,
    /// Pathological backaction data produced a negative g_0² estimate.
    NegativeCouplingSquared,
    /// Not enough points survive the noise floor to fit a decay.
    TooFewUsablePoints { usable: usize, needed: usize },
    /// Heuristic initialization failed (flat or degenerate data).
    DegenerateData,
}

impl fmt::Display for FitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyDataset => write!(f, "dataset is empty"),
            Self::LengthMismatch => write!(f, "abscissa/ordinate/weight lengths differ"),
            Self::NonFinite(which) => write!(f, "{which} contain non-finite values"),
            Self::ModelNonFinite => write!(f, "model is not finite at the initial parameters"),
            Self::InitOutOfBounds => write!(f, "initial parameters violate the bounds"),
            Self::SingularJacobian => write!(f, "singular Jacobian: a parameter is unidentifiable"),
            Self::NonPositiveAmplitude => write!(f, "ringdown amplitudes must be positive"),
            Self::NegativeCouplingSquared => {
                write!(f, "backaction data implies a negative coupling squared")
            }
            Self::TooFewUsablePoints { usable, needed } => {
                write!(f, "only {usable} usable points, {needed} required")
            }
            Self::DegenerateData => write!(f, "data too degenerate to initialize the fit"),
        }
    }
}

impl core::error::Error for FitError {}

/// Soft diagnostics attached to a fit result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitWarning {
    /// The swept span is below twice the fitted linewidth; the width is
    /// under-constrained.
    SpanUnderConstrained { span: f64, required: f64 },
    /// Points excluded below the configured noise floor.
    PointsBelowNoiseFloor { excluded: usize },
    /// The iterative solver stopped at its iteration cap.
    MaxIterationsReached,
}

/// Estimated parameters with uncertainty and convergence diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Parameter names, in the same semantic units as the core types.
    pub names: Vec<&'static str>,
    pub values: Vec<f64>,
    /// Residual sum of squares at the solution.
    pub rss: f64,
    /// Per-parameter standard errors from the local quadratic model;
    /// `None` when the Jacobian lacks full column rank.
    pub std_errors: Option<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
    pub warnings: Vec<FitWarning>,
}

impl FitResult {
    /// Look a parameter up by name.
    pub fn get(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| *n == name)
            .map(|i| self.values[i])
    }

    pub fn std_error(&self, name: &str) -> Option<f64> {
        let i = self.names.iter().position(|n| *n == name)?;
        self.std_errors.as_ref().map(|e| e[i])
    }
}
