//! Static system parameters and elementary derived quantities.
//!
//! [`SystemParams`] collects the optomechanical platform constants
//! (mechanical mode, cavity, coupling, drive). [`DriveState`] holds the
//! quantities derived from the control drive: intracavity photon number,
//! field-enhanced coupling, optical damping and cooperativity.
//!
//! Sign convention: the control detuning is Δ = Ω_L − Ω_cav, so a
//! red-detuned drive has Δ < 0 and only adds damping.

use core::fmt;

use alloc::vec::Vec;
use num_complex::Complex64;
// float math under no_std; redundant whenever std is in the crate graph
#[allow(unused_imports)]
use num_traits::Float;

use crate::units::{laser_angular_frequency, BOLTZMANN, HBAR};

/// Parameter-validation failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamError {
    /// Field must be strictly positive.
    NotPositive(&'static str),
    /// Field must be non-negative.
    Negative(&'static str),
    /// Field must lie in (0, 1].
    OutOfUnitInterval(&'static str),
    /// Field must be finite.
    NonFinite(&'static str),
    /// Required field was never set.
    Missing(&'static str),
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotPositive(name) => write!(f, "{name} must be > 0"),
            Self::Negative(name) => write!(f, "{name} must be >= 0"),
            Self::OutOfUnitInterval(name) => write!(f, "{name} must lie in (0, 1]"),
            Self::NonFinite(name) => write!(f, "{name} must be finite"),
            Self::Missing(name) => write!(f, "{name} is required"),
        }
    }
}

impl core::error::Error for ParamError {}

/// Soft model-validity notices attached to a parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemWarning {
    /// Ω_m ≤ κ: sidebands are not resolved, the beamsplitter picture and
    /// the rotating-wave forms used throughout degrade.
    SidebandUnresolved,
    /// Δ > 0: blue-detuned drive amplifies instead of damping; the
    /// storage model does not cover this regime.
    BlueDetunedDrive,
}

impl fmt::Display for SystemWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SidebandUnresolved => {
                write!(f, "omega_m <= kappa: resolved-sideband assumption violated")
            }
            Self::BlueDetunedDrive => {
                write!(f, "delta > 0: blue-detuned drive amplifies the mechanics")
            }
        }
    }
}

/// Static optomechanical parameters. All rates angular (rad/s).
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Mechanical resonance frequency Ω_m.
    pub omega_m: f64,
    /// Intrinsic mechanical linewidth Γ_m (energy decay rate).
    pub gamma_m: f64,
    /// Cavity linewidth κ, FWHM convention (amplitude half-width κ/2).
    pub kappa: f64,
    /// Cavity overcoupling η_c ∈ (0, 1].
    pub eta_c: f64,
    /// Vacuum optomechanical coupling rate g_0.
    pub g0: f64,
    /// Control detuning Δ = Ω_L − Ω_cav; red side is negative.
    pub delta: f64,
    /// Input control power P_in, W.
    pub p_in: f64,
    /// Laser vacuum wavelength, m.
    pub lambda_l: f64,
    /// Dark-storage amplitude-energy lifetime T_1, s.
    pub t1: f64,
    /// Optical path efficiency on detection, (0, 1].
    pub eta_loss: f64,
    /// Photodetector quantum efficiency, (0, 1].
    pub eta_qe: f64,
}

impl SystemParams {
    /// Start building a parameter set.
    pub fn builder() -> SystemParamsBuilder {
        SystemParamsBuilder::default()
    }

    /// Mechanical quality factor Q = Ω_m/Γ_m.
    pub fn quality_factor(&self) -> f64 {
        self.omega_m / self.gamma_m
    }

    /// Control laser angular frequency Ω_L = 2πc/λ.
    pub fn laser_frequency(&self) -> f64 {
        laser_angular_frequency(self.lambda_l)
    }

    /// True iff Ω_m > κ.
    pub fn resolved_sideband(&self) -> bool {
        self.omega_m > self.kappa
    }

    /// Model-validity notices; never errors.
    pub fn warnings(&self) -> Vec<SystemWarning> {
        let mut w = Vec::new();
        if !self.resolved_sideband() {
            w.push(SystemWarning::SidebandUnresolved);
        }
        if self.delta > 0.0 {
            w.push(SystemWarning::BlueDetunedDrive);
        }
        w
    }

    fn validate(&self) -> Result<(), ParamError> {
        let finite = [
            (self.omega_m, "omega_m"),
            (self.gamma_m, "gamma_m"),
            (self.kappa, "kappa"),
            (self.eta_c, "eta_c"),
            (self.g0, "g0"),
            (self.delta, "delta"),
            (self.p_in, "p_in"),
            (self.lambda_l, "lambda_l"),
            (self.eta_loss, "eta_loss"),
            (self.eta_qe, "eta_qe"),
        ];
        for (v, name) in finite {
            if !v.is_finite() {
                return Err(ParamError::NonFinite(name));
            }
        }
        // t1 = 1/gamma_m may legitimately be infinite
        if self.t1.is_nan() {
            return Err(ParamError::NonFinite("t1"));
        }
        if self.omega_m <= 0.0 {
            return Err(ParamError::NotPositive("omega_m"));
        }
        if self.kappa <= 0.0 {
            return Err(ParamError::NotPositive("kappa"));
        }
        if self.lambda_l <= 0.0 {
            return Err(ParamError::NotPositive("lambda_l"));
        }
        if self.gamma_m < 0.0 {
            return Err(ParamError::Negative("gamma_m"));
        }
        if self.g0 < 0.0 {
            return Err(ParamError::Negative("g0"));
        }
        if self.p_in < 0.0 {
            return Err(ParamError::Negative("p_in"));
        }
        if self.t1 < 0.0 {
            return Err(ParamError::Negative("t1"));
        }
        for (v, name) in [
            (self.eta_c, "eta_c"),
            (self.eta_loss, "eta_loss"),
            (self.eta_qe, "eta_qe"),
        ] {
            if v <= 0.0 || v > 1.0 {
                return Err(ParamError::OutOfUnitInterval(name));
            }
        }
        Ok(())
    }
}

/// Builder for [`SystemParams`]. `omega_m` and `kappa` are required;
/// the mechanical linewidth may be given directly or through Q.
#[derive(Debug, Clone, Default)]
pub struct SystemParamsBuilder {
    omega_m: Option<f64>,
    kappa: Option<f64>,
    gamma_m: Option<f64>,
    quality_factor: Option<f64>,
    eta_c: Option<f64>,
    g0: Option<f64>,
    delta: Option<f64>,
    p_in: Option<f64>,
    lambda_l: Option<f64>,
    t1: Option<f64>,
    eta_loss: Option<f64>,
    eta_qe: Option<f64>,
}

impl SystemParamsBuilder {
    pub fn omega_m(mut self, omega_m: f64) -> Self {
        self.omega_m = Some(omega_m);
        self
    }

    pub fn kappa(mut self, kappa: f64) -> Self {
        self.kappa = Some(kappa);
        self
    }

    /// Set Γ_m directly (rad/s). Overrides any quality factor.
    pub fn gamma_m(mut self, gamma_m: f64) -> Self {
        self.gamma_m = Some(gamma_m);
        self.quality_factor = None;
        self
    }

    /// Derive Γ_m = Ω_m/Q at build time.
    pub fn quality_factor(mut self, q: f64) -> Self {
        self.quality_factor = Some(q);
        self.gamma_m = None;
        self
    }

    pub fn eta_c(mut self, eta_c: f64) -> Self {
        self.eta_c = Some(eta_c);
        self
    }

    pub fn g0(mut self, g0: f64) -> Self {
        self.g0 = Some(g0);
        self
    }

    pub fn delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn p_in(mut self, p_in: f64) -> Self {
        self.p_in = Some(p_in);
        self
    }

    pub fn lambda_l(mut self, lambda_l: f64) -> Self {
        self.lambda_l = Some(lambda_l);
        self
    }

    /// Dark-storage lifetime. When never set, T_1 = 1/Γ_m.
    pub fn t1(mut self, t1: f64) -> Self {
        self.t1 = Some(t1);
        self
    }

    pub fn eta_loss(mut self, eta_loss: f64) -> Self {
        self.eta_loss = Some(eta_loss);
        self
    }

    pub fn eta_qe(mut self, eta_qe: f64) -> Self {
        self.eta_qe = Some(eta_qe);
        self
    }

    pub fn build(self) -> Result<SystemParams, ParamError> {
        let omega_m = self.omega_m.ok_or(ParamError::Missing("omega_m"))?;
        let kappa = self.kappa.ok_or(ParamError::Missing("kappa"))?;
        let gamma_m = match (self.gamma_m, self.quality_factor) {
            (Some(g), _) => g,
            (None, Some(q)) => {
                if !(q > 0.0) {
                    return Err(ParamError::NotPositive("quality_factor"));
                }
                omega_m / q
            }
            (None, None) => 0.0,
        };
        let params = SystemParams {
            omega_m,
            gamma_m,
            kappa,
            eta_c: self.eta_c.unwrap_or(1.0),
            g0: self.g0.unwrap_or(0.0),
            delta: self.delta.unwrap_or(0.0),
            p_in: self.p_in.unwrap_or(0.0),
            lambda_l: self.lambda_l.unwrap_or(1550e-9),
            t1: self.t1.unwrap_or(1.0 / gamma_m),
            eta_loss: self.eta_loss.unwrap_or(1.0),
            eta_qe: self.eta_qe.unwrap_or(1.0),
        };
        params.validate()?;
        Ok(params)
    }
}

/// Quantities derived from the control drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveState {
    /// Mean intracavity photon number n̄_cav.
    pub n_cav: f64,
    /// Field-enhanced coupling g = g_0·√n̄_cav.
    pub g: f64,
    /// Optomechanical broadening Γ_opt (negative for blue detuning).
    pub gamma_opt: f64,
    /// Effective mechanical linewidth Γ_eff = Γ_m + Γ_opt.
    pub gamma_eff: f64,
    /// Classical cooperativity C = 4g_0²n̄_cav/(κΓ_m); `None` when Γ_m = 0.
    pub cooperativity: Option<f64>,
}

impl DriveState {
    /// Derive the drive state from the input power in `params`.
    pub fn from_params(params: &SystemParams) -> Self {
        Self::with_photon_number(params, cavity_photon_number(params))
    }

    /// Derive the drive state at a prescribed photon number.
    pub fn with_photon_number(params: &SystemParams, n_cav: f64) -> Self {
        let g = params.g0 * n_cav.sqrt();
        let gamma_opt = gamma_opt(params, n_cav);
        DriveState {
            n_cav,
            g,
            gamma_opt,
            gamma_eff: params.gamma_m + gamma_opt,
            cooperativity: cooperativity(params, n_cav),
        }
    }
}

/// Mechanical susceptibility χ_m(ω) = [γ/2 − i(ω − ω_m)]⁻¹, units 1/(rad/s).
///
/// On resonance χ_m = 2/γ, purely real; |χ_m|² falls to half its peak at
/// |ω − ω_m| = γ/2.
pub fn mech_susceptibility(omega: f64, omega_m: f64, gamma: f64) -> Result<Complex64, ParamError> {
    if !omega.is_finite() {
        return Err(ParamError::NonFinite("omega"));
    }
    if !omega_m.is_finite() {
        return Err(ParamError::NonFinite("omega_m"));
    }
    if !gamma.is_finite() {
        return Err(ParamError::NonFinite("gamma"));
    }
    if gamma <= 0.0 {
        return Err(ParamError::NotPositive("gamma"));
    }
    Ok(Complex64::new(gamma / 2.0, -(omega - omega_m)).inv())
}

/// Mean intracavity photon number
/// n̄_cav = (P_in/ħΩ_L) · η_c κ / ((κ/2)² + Δ²).
pub fn cavity_photon_number(params: &SystemParams) -> f64 {
    let flux = params.p_in / (HBAR * params.laser_frequency());
    let half_kappa = params.kappa / 2.0;
    flux * params.eta_c * params.kappa / (half_kappa * half_kappa + params.delta * params.delta)
}

/// Dynamical-backaction broadening
/// Γ_opt = n̄_cav g_0² κ [((κ/2)² + (Δ+Ω_m)²)⁻¹ − ((κ/2)² + (Δ−Ω_m)²)⁻¹].
///
/// Antisymmetric in Δ; positive (damping) on the red side, zero at Δ = 0.
pub fn gamma_opt(params: &SystemParams, n_cav: f64) -> f64 {
    n_cav * params.g0 * params.g0 * params.kappa * sideband_weight(params, params.delta)
}

/// The bracketed cavity-susceptibility factor of the backaction rate,
/// evaluated at detuning `delta`.
pub(crate) fn sideband_weight(params: &SystemParams, delta: f64) -> f64 {
    let half_kappa = params.kappa / 2.0;
    let k2 = half_kappa * half_kappa;
    let anti_stokes = delta + params.omega_m;
    let stokes = delta - params.omega_m;
    1.0 / (k2 + anti_stokes * anti_stokes) - 1.0 / (k2 + stokes * stokes)
}

/// Classical cooperativity C = 4g_0²n̄_cav/(κΓ_m).
///
/// Returns `None` when Γ_m = 0, where the ratio is undefined.
pub fn cooperativity(params: &SystemParams, n_cav: f64) -> Option<f64> {
    if params.gamma_m == 0.0 {
        return None;
    }
    Some(4.0 * params.g0 * params.g0 * n_cav / (params.kappa * params.gamma_m))
}

/// Thermal occupancy model for [`coherence_time_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Occupancy {
    /// High-temperature limit n̄_th = k_B T/ħΩ_m. At 10 K and MHz
    /// frequencies this differs from the Bose factor by < 1e-5 relative.
    #[default]
    Classical,
    /// Exact Bose factor n̄_th = [exp(ħΩ_m/k_B T) − 1]⁻¹.
    Bose,
}

/// Thermal phonon occupancy of a mode at `omega_m` in a bath at
/// `temperature` (K).
pub fn thermal_occupancy(temperature: f64, omega_m: f64, model: Occupancy) -> f64 {
    let ratio = HBAR * omega_m / (BOLTZMANN * temperature);
    match model {
        Occupancy::Classical => 1.0 / ratio,
        Occupancy::Bose => 1.0 / ratio.exp_m1(),
    }
}

/// Heating-limited coherence time 1/(Γ_m n̄_th) with Γ_m = Ω_m/Q, using the
/// classical occupancy.
pub fn coherence_time(bath_temperature: f64, omega_m: f64, q: f64) -> f64 {
    coherence_time_with(bath_temperature, omega_m, q, Occupancy::Classical)
}

/// [`coherence_time`] with an explicit occupancy model.
pub fn coherence_time_with(bath_temperature: f64, omega_m: f64, q: f64, model: Occupancy) -> f64 {
    let gamma_m = omega_m / q;
    1.0 / (gamma_m * thermal_occupancy(bath_temperature, omega_m, model))
}
