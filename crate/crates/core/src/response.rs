//! Steady-state frequency-domain models.
//!
//! The probe response is the reflection amplitude of a single-sided cavity
//! dressed by the mechanical mode,
//!
//! r(Ω) = 1 − η_c κ / [κ/2 − i(Δ + Ω) + g²·χ_m(Ω)],
//!
//! in the rotating-wave convention of [`crate::system::mech_susceptibility`].
//! With g = 0 it reduces to the bare cavity reflection used for
//! spectroscopic calibration. The detuning-dependent effective linewidth
//! and the transmitted-power curve live here as well.

use core::fmt;

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::system::{cavity_photon_number, gamma_opt, DriveState, SystemParams};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResponseError {
    /// Sweep frequencies must be strictly increasing.
    NonMonotonicGrid,
    /// A response sample came out non-finite.
    NonFiniteResponse,
    /// Mirror transmissions must lie in (0, 1).
    InvalidMirrorTransmission,
    /// Derived per-mirror coupling fractions exceed unity.
    CouplingExceedsUnity,
}

impl fmt::Display for ResponseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonMonotonicGrid => write!(f, "sweep grid must be strictly increasing"),
            Self::NonFiniteResponse => write!(f, "response is not finite on the grid"),
            Self::InvalidMirrorTransmission => {
                write!(f, "mirror transmissions must lie in (0, 1)")
            }
            Self::CouplingExceedsUnity => {
                write!(f, "per-mirror coupling fractions sum above one")
            }
        }
    }
}

impl core::error::Error for ResponseError {}

/// Which part of the cavity line a sweep samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// Coarse sweep outlining the full cavity response.
    Broad,
    /// Fine sweep across the transparency window around Ω ≈ Ω_m.
    Narrow,
}

/// A swept complex probe response with its parameter snapshot.
#[derive(Debug, Clone)]
pub struct SpectrumTrace {
    /// (probe frequency offset Ω_mod in rad/s, complex reflection amplitude).
    pub points: Vec<(f64, Complex64)>,
    pub params: SystemParams,
    pub kind: SweepKind,
}

impl SpectrumTrace {
    /// Build a trace from parallel arrays, enforcing the grid and
    /// finiteness invariants.
    pub fn new(
        freqs: &[f64],
        values: &[Complex64],
        params: SystemParams,
        kind: SweepKind,
    ) -> Result<Self, ResponseError> {
        if freqs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(ResponseError::NonMonotonicGrid);
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(ResponseError::NonFiniteResponse);
        }
        Ok(SpectrumTrace {
            points: freqs.iter().copied().zip(values.iter().copied()).collect(),
            params,
            kind,
        })
    }
}

/// OMIT probe reflection amplitude at modulation frequency `omega_mod`.
///
/// Evaluated in pole-free form, so it stays finite for Γ_m = 0 (where the
/// transparency window becomes perfect, r → 1 on two-photon resonance).
pub fn omit_probe_response(
    params: &SystemParams,
    drive: &DriveState,
    omega_mod: f64,
) -> Complex64 {
    probe_response(params, drive.g * drive.g, omega_mod)
}

/// Bare single-sided cavity reflection: the g = 0 limit of
/// [`omit_probe_response`], the calibration-fit target.
pub fn bare_cavity_response(params: &SystemParams, omega_mod: f64) -> Complex64 {
    probe_response(params, 0.0, omega_mod)
}

fn probe_response(params: &SystemParams, g_squared: f64, omega_mod: f64) -> Complex64 {
    // r = 1 − η_c κ χ_m⁻¹ / [(κ/2 − i(Δ+Ω)) χ_m⁻¹ + g²]
    let cavity = Complex64::new(params.kappa / 2.0, -(params.delta + omega_mod));
    let mech_inv = Complex64::new(params.gamma_m / 2.0, -(omega_mod - params.omega_m));
    let numerator = params.eta_c * params.kappa * mech_inv;
    1.0 - numerator / (cavity * mech_inv + g_squared)
}

/// Sweep the probe response over a strictly increasing frequency grid.
pub fn omit_sweep(
    params: &SystemParams,
    drive: &DriveState,
    grid: &[f64],
    kind: SweepKind,
) -> Result<SpectrumTrace, ResponseError> {
    let values: Vec<Complex64> = grid
        .iter()
        .map(|&w| omit_probe_response(params, drive, w))
        .collect();
    SpectrumTrace::new(grid, &values, params.clone(), kind)
}

/// Effective mechanical linewidth Γ_eff = Γ_m + Γ_opt(Δ) across a detuning
/// grid at the fixed input power of `params`.
pub fn dba_sweep(params: &SystemParams, delta_grid: &[f64]) -> Vec<(f64, f64)> {
    delta_grid
        .iter()
        .map(|&delta| {
            let mut at = params.clone();
            at.delta = delta;
            let n_cav = cavity_photon_number(&at);
            (delta, params.gamma_m + gamma_opt(&at, n_cav))
        })
        .collect()
}

/// Power transmission coefficients of the two cavity mirrors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorTransmissions {
    pub t_in: f64,
    pub t_out: f64,
}

impl Default for MirrorTransmissions {
    fn default() -> Self {
        // input/output coupler transmissions of the memory cavity
        MirrorTransmissions {
            t_in: 280e-6,
            t_out: 10e-6,
        }
    }
}

/// Per-mirror coupling fractions (η_in, η_out).
///
/// η_in is the overcoupling η_c itself; the total round-trip loss
/// T_in + T_out + L_excess is inferred from η_c = T_in/total, so
/// η_out = T_out·η_c/T_in absorbs the excess intracavity loss.
pub fn coupling_fractions(
    params: &SystemParams,
    mirrors: MirrorTransmissions,
) -> Result<(f64, f64), ResponseError> {
    let valid = |t: f64| t > 0.0 && t < 1.0;
    if !valid(mirrors.t_in) || !valid(mirrors.t_out) {
        return Err(ResponseError::InvalidMirrorTransmission);
    }
    let eta_in = params.eta_c;
    let eta_out = mirrors.t_out * params.eta_c / mirrors.t_in;
    if eta_in + eta_out > 1.0 {
        return Err(ResponseError::CouplingExceedsUnity);
    }
    Ok((eta_in, eta_out))
}

/// Transmitted control power at detuning `delta`,
/// P_out(Δ) = P_in · η_in η_out κ² / ((κ/2)² + Δ²).
///
/// Linear in P_in, which is the single free parameter of the
/// transmission calibration fit.
pub fn transmission_power(
    params: &SystemParams,
    mirrors: MirrorTransmissions,
    delta: f64,
) -> Result<f64, ResponseError> {
    let (eta_in, eta_out) = coupling_fractions(params, mirrors)?;
    let half_kappa = params.kappa / 2.0;
    let lorentzian = params.kappa * params.kappa / (half_kappa * half_kappa + delta * delta);
    Ok(params.p_in * eta_in * eta_out * lorentzian)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::angular_from_hz;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn reference_params() -> SystemParams {
        SystemParams::builder()
            .omega_m(angular_from_hz(2.4e6))
            .quality_factor(1e8)
            .kappa(angular_from_hz(2.1e6))
            .eta_c(0.63)
            .g0(angular_from_hz(1.0))
            .delta(-angular_from_hz(2.4e6))
            .p_in(2.1051253060241597e-3)
            .build()
            .unwrap()
    }

    #[test]
    fn critically_coupled_resonant_reflection_flips_phase() {
        let mut p = reference_params();
        p.eta_c = 1.0;
        let r = bare_cavity_response(&p, -p.delta);
        assert_abs_diff_eq!(r.re, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn far_off_resonance_reflection_is_unity() {
        let p = reference_params();
        let r = bare_cavity_response(&p, -p.delta + 1e6 * p.kappa);
        assert_abs_diff_eq!(r.re, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.im, 0.0, epsilon = 1e-5);
    }

    #[test]
    fn bare_response_equals_omit_with_zero_coupling() {
        let mut p = reference_params();
        p.g0 = 0.0;
        let d = DriveState::from_params(&p);
        for k in 0..40 {
            let w = angular_from_hz(1.0e6 + 1.0e5 * k as f64);
            assert_eq!(omit_probe_response(&p, &d, w), bare_cavity_response(&p, w));
        }
    }

    #[test]
    fn bare_cavity_dip_width_is_kappa() {
        let p = reference_params();
        let dip = bare_cavity_response(&p, -p.delta).norm_sqr();
        let baseline = 1.0;
        let half_level = (dip + baseline) / 2.0;
        // |r|² is Lorentzian in (Δ+Ω) with FWHM exactly κ
        let at_half = bare_cavity_response(&p, -p.delta + p.kappa / 2.0).norm_sqr();
        assert_relative_eq!(at_half, half_level, max_relative = 1e-12);
    }

    #[test]
    fn omit_window_restores_reflection_on_two_photon_resonance() {
        let p = reference_params();
        let d = DriveState::from_params(&p);
        assert!(d.n_cav > 5.0e8 * 0.99 && d.n_cav < 5.0e8 * 1.01);
        let in_window = omit_probe_response(&p, &d, p.omega_m).norm_sqr();
        let bare_dip = bare_cavity_response(&p, p.omega_m).norm_sqr();
        assert!(in_window > 10.0 * bare_dip, "no transparency window");
        // the feature is local: a few hundred linewidths out the bare
        // response is recovered (the amplitude tail falls off as 1/δ)
        let aside = p.omega_m + 200.0 * d.gamma_eff;
        let beside = omit_probe_response(&p, &d, aside).norm_sqr();
        let bare = bare_cavity_response(&p, aside).norm_sqr();
        assert!(in_window > beside);
        assert_relative_eq!(beside, bare, max_relative = 1e-2);
    }

    #[test]
    fn response_finite_without_mechanical_damping() {
        let mut p = reference_params();
        p.gamma_m = 0.0;
        p.t1 = 0.023;
        let d = DriveState::from_params(&p);
        let r = omit_probe_response(&p, &d, p.omega_m);
        assert!(r.re.is_finite() && r.im.is_finite());
        // perfect interference: the window reaches full transparency
        assert_abs_diff_eq!(r.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn spectrum_trace_rejects_unsorted_grid() {
        let p = reference_params();
        let vals = [Complex64::new(1.0, 0.0); 3];
        let err = SpectrumTrace::new(&[1.0, 3.0, 2.0], &vals, p, SweepKind::Broad).unwrap_err();
        assert_eq!(err, ResponseError::NonMonotonicGrid);
    }

    #[test]
    fn dba_sweep_limits() {
        let p = reference_params();
        let grid: Vec<f64> = (-10..=10).map(|k| k as f64 * 0.3e6 * core::f64::consts::TAU).collect();
        let curve = dba_sweep(&p, &grid);
        // Γ_eff(0) = Γ_m
        let at_zero = curve.iter().find(|(d, _)| *d == 0.0).unwrap().1;
        assert_eq!(at_zero, p.gamma_m);
        // antisymmetry of the optical part on a symmetric grid
        for k in 0..curve.len() {
            let (d, g) = curve[k];
            let (d2, g2) = curve[curve.len() - 1 - k];
            assert_eq!(d, -d2);
            assert_abs_diff_eq!(g + g2, 2.0 * p.gamma_m, epsilon = 1e-9 * p.gamma_m.max(1.0));
        }
    }

    #[test]
    fn dba_peak_broadening_matches_cooperativity() {
        let p = reference_params();
        let n = cavity_photon_number(&p);
        let c = crate::system::cooperativity(&p, n).unwrap();
        let gamma_opt = crate::system::gamma_opt(&p, n);
        let bound = (p.kappa / (4.0 * p.omega_m)).powi(2);
        assert!(((gamma_opt / p.gamma_m) - c).abs() / c <= bound);
    }

    #[test]
    fn transmission_power_shape() {
        let p = reference_params();
        let m = MirrorTransmissions::default();
        let peak = transmission_power(&p, m, 0.0).unwrap();
        for k in 1..30 {
            let delta = k as f64 * 0.2 * p.kappa;
            let v = transmission_power(&p, m, delta).unwrap();
            assert!(v < peak);
            // even in Δ
            assert_eq!(v, transmission_power(&p, m, -delta).unwrap());
        }
        // vanishes far off resonance
        assert!(transmission_power(&p, m, 1e5 * p.kappa).unwrap() < 1e-9 * peak);
        // linear in P_in
        let mut doubled = p.clone();
        doubled.p_in *= 2.0;
        assert_relative_eq!(
            transmission_power(&doubled, m, 0.7 * p.kappa).unwrap(),
            2.0 * transmission_power(&p, m, 0.7 * p.kappa).unwrap(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn coupling_fractions_reject_overunity() {
        let mut p = reference_params();
        p.eta_c = 0.99;
        let m = MirrorTransmissions {
            t_in: 100e-6,
            t_out: 90e-6,
        };
        assert_eq!(
            coupling_fractions(&p, m).unwrap_err(),
            ResponseError::CouplingExceedsUnity
        );
        assert_eq!(
            coupling_fractions(
                &p,
                MirrorTransmissions {
                    t_in: 0.0,
                    t_out: 10e-6
                }
            )
            .unwrap_err(),
            ResponseError::InvalidMirrorTransmission
        );
    }
}
