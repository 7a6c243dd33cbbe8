//! The calibration fits: cavity spectroscopy, input power, vacuum
//! coupling, ringdown, storage-time decay, and the efficiency scalings.
//!
//! Initial guesses come from data heuristics (extremum location, half-max
//! crossings) unless the caller overrides them. Fits that are linear in
//! their only free parameter are solved by the normal equation without
//! iteration.

use alloc::vec;
use alloc::vec::Vec;
// float math under no_std; redundant whenever std is in the crate graph
#[allow(unused_imports)]
use num_traits::Float;

use super::least_squares::{least_squares, LeastSquaresOptions};
use super::{Dataset, FitError, FitResult, FitWarning};
use crate::response::{bare_cavity_response, coupling_fractions, transmission_power, MirrorTransmissions};
use crate::system::{cavity_photon_number, sideband_weight, SystemParams};

/// Whether a swept dataset records |r| or |r|².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FitTarget {
    Magnitude,
    #[default]
    Power,
}

impl FitTarget {
    fn apply(self, r: f64) -> f64 {
        match self {
            FitTarget::Magnitude => r,
            FitTarget::Power => r * r,
        }
    }
}

/// Extract detuning and linewidth from a broad cavity sweep by fitting
/// `amplitude · |r(Ω; Δ, κ)|^target + offset` with the coupling rate g = 0.
///
/// Parameters are named `delta`, `kappa`, `amplitude`, `offset` (rad/s for
/// the first two). A [`FitWarning::SpanUnderConstrained`] is attached when
/// the sweep covers less than twice the fitted linewidth.
pub fn fit_cavity(
    data: &Dataset,
    params: &SystemParams,
    target: FitTarget,
    init: Option<[f64; 4]>,
) -> Result<FitResult, FitError> {
    if data.len() < 4 {
        return Err(FitError::TooFewUsablePoints {
            usable: data.len(),
            needed: 4,
        });
    }
    let span = data.x[data.x.len() - 1] - data.x[0];
    if !(span > 0.0) {
        return Err(FitError::DegenerateData);
    }

    let init = match init {
        Some(i) => i,
        None => {
            let (i_min, y_min) = argmin(&data.y);
            let baseline = 0.5 * (data.y[0] + data.y[data.y.len() - 1]);
            let depth = baseline - y_min;
            if !(depth > 0.0) {
                return Err(FitError::DegenerateData);
            }
            let width = crossing_width(&data.x, &data.y, y_min + depth / 2.0, i_min, false)
                .unwrap_or(span / 4.0);
            [-data.x[i_min], width, baseline, 0.0]
        }
    };

    let base = params.clone();
    let model = |p: &[f64]| -> Vec<f64> {
        let mut pp = base.clone();
        pp.delta = p[0];
        pp.kappa = p[1];
        data.x
            .iter()
            .map(|&w| p[2] * target.apply(bare_cavity_response(&pp, w).norm()) + p[3])
            .collect()
    };
    let amp_scale = init[2].abs().max(1e-6);
    let options = LeastSquaresOptions {
        typical_scale: Some(vec![span, span, amp_scale, amp_scale]),
        ..LeastSquaresOptions::default()
    };
    let bounds = [
        (f64::NEG_INFINITY, f64::INFINITY),
        (1e-9 * span.max(1.0), f64::INFINITY),
        (f64::NEG_INFINITY, f64::INFINITY),
        (f64::NEG_INFINITY, f64::INFINITY),
    ];
    let mut fit = least_squares(
        model,
        data,
        &init,
        Some(&bounds),
        &["delta", "kappa", "amplitude", "offset"],
        &options,
    )?;
    let kappa_hat = fit.values[1];
    if span < 2.0 * kappa_hat {
        fit.warnings.push(FitWarning::SpanUnderConstrained {
            span,
            required: 2.0 * kappa_hat,
        });
    }
    Ok(fit)
}

/// One-parameter linear fit of the transmitted-power curve; returns
/// `p_in` (W). κ, η_c and the mirror transmissions are fixed inputs.
pub fn fit_input_power(
    data: &Dataset,
    params: &SystemParams,
    mirrors: MirrorTransmissions,
) -> Result<FitResult, FitError> {
    coupling_fractions(params, mirrors).map_err(|_| FitError::DegenerateData)?;
    let mut unit = params.clone();
    unit.p_in = 1.0;
    let predictions: Vec<f64> = data
        .x
        .iter()
        .map(|&d| transmission_power(&unit, mirrors, d).expect("mirrors validated above"))
        .collect();
    linear_amplitude_fit(data, &predictions, "p_in")
}

/// Closed-form extraction of the vacuum coupling rate from a backaction
/// sweep Γ_eff(Δ), with Γ_m fixed to zero so g_0 is the only free
/// parameter. Since the model is linear in g_0², the normal equation is
/// solved exactly and rooted; pathological data with a negative g_0²
/// estimate is an error.
pub fn fit_g0(data: &Dataset, params: &SystemParams) -> Result<FitResult, FitError> {
    // Γ_eff(Δ) = g_0² · n̄_cav(Δ)·κ·sideband_weight(Δ)
    let base: Vec<f64> = data
        .x
        .iter()
        .map(|&delta| {
            let mut pp = params.clone();
            pp.delta = delta;
            cavity_photon_number(&pp) * pp.kappa * sideband_weight(&pp, delta)
        })
        .collect();
    let fit = linear_amplitude_fit(data, &base, "g0_squared")?;
    let g0_sq = fit.values[0];
    if g0_sq < 0.0 {
        return Err(FitError::NegativeCouplingSquared);
    }
    let g0 = g0_sq.sqrt();
    let std_errors = fit.std_errors.as_ref().and_then(|se| {
        (g0 > 0.0).then(|| vec![se[0] / (2.0 * g0)])
    });
    Ok(FitResult {
        names: vec!["g0"],
        values: vec![g0],
        rss: fit.rss,
        std_errors,
        iterations: 0,
        converged: true,
        warnings: fit.warnings,
    })
}

/// Fit A(t) = A_0·e^{−Γ_m t/2} by linear regression on the log amplitude.
///
/// Returns `gamma_m`, the quality factor `q` = Ω_m/Γ_m (infinite for a
/// non-decaying record) and the amplitude 1/e time `t1_equivalent` = 2/Γ_m.
/// The residual sum of squares refers to the log-amplitude residuals.
pub fn fit_ringdown(data: &Dataset, omega_m: f64) -> Result<FitResult, FitError> {
    if data.y.iter().any(|&v| v <= 0.0) {
        return Err(FitError::NonPositiveAmplitude);
    }
    if data.len() < 2 {
        return Err(FitError::TooFewUsablePoints {
            usable: data.len(),
            needed: 2,
        });
    }
    let logs: Vec<f64> = data.y.iter().map(|v| v.ln()).collect();
    let reg = linear_regression(&data.x, &logs, data)?;
    let gamma_m = -2.0 * reg.slope;
    let q = omega_m / gamma_m;
    let t1_equivalent = 2.0 / gamma_m;
    let std_errors = reg.slope_se.map(|se| {
        let se_gamma = 2.0 * se;
        let se_q = if gamma_m != 0.0 {
            (omega_m / (gamma_m * gamma_m)) * se_gamma
        } else {
            f64::INFINITY
        };
        let se_t1 = if gamma_m != 0.0 {
            (2.0 / (gamma_m * gamma_m)) * se_gamma
        } else {
            f64::INFINITY
        };
        vec![se_gamma, se_q, se_t1]
    });
    Ok(FitResult {
        names: vec!["gamma_m", "q", "t1_equivalent"],
        values: vec![gamma_m, q, t1_equivalent],
        rss: reg.rss,
        std_errors,
        iterations: 0,
        converged: true,
        warnings: Vec::new(),
    })
}

/// Fit normalized retrieved amplitudes A_out/A_in = A_0·e^{−T_delay/2T_1}.
///
/// Points at or below 3× the configured noise-floor amplitude are excluded
/// and reported through [`FitWarning::PointsBelowNoiseFloor`]. Fewer than
/// two surviving points is an error.
pub fn fit_t1(data: &Dataset, noise_floor: f64) -> Result<FitResult, FitError> {
    if noise_floor < 0.0 || !noise_floor.is_finite() {
        return Err(FitError::NonFinite("noise_floor"));
    }
    let threshold = 3.0 * noise_floor;
    let mut t = Vec::new();
    let mut logs = Vec::new();
    let mut weights = Vec::new();
    for i in 0..data.len() {
        if data.y[i] > threshold && data.y[i] > 0.0 {
            t.push(data.x[i]);
            logs.push(data.y[i].ln());
            weights.push(data.weight(i));
        }
    }
    let excluded = data.len() - t.len();
    if t.len() < 2 {
        return Err(FitError::TooFewUsablePoints {
            usable: t.len(),
            needed: 2,
        });
    }
    let kept = Dataset::weighted(data.kind, t.clone(), logs.clone(), Some(weights))?;
    let reg = linear_regression(&t, &logs, &kept)?;
    let t1 = if reg.slope == 0.0 {
        f64::INFINITY
    } else {
        -1.0 / (2.0 * reg.slope)
    };
    let amplitude0 = reg.intercept.exp();
    let std_errors = reg.slope_se.map(|se| {
        let se_t1 = if reg.slope != 0.0 {
            se / (2.0 * reg.slope * reg.slope)
        } else {
            f64::INFINITY
        };
        vec![se_t1, amplitude0 * reg.intercept_se.unwrap_or(0.0)]
    });
    let mut warnings = Vec::new();
    if excluded > 0 {
        warnings.push(FitWarning::PointsBelowNoiseFloor { excluded });
    }
    Ok(FitResult {
        names: vec!["t1", "amplitude0"],
        values: vec![t1, amplitude0],
        rss: reg.rss,
        std_errors,
        iterations: 0,
        converged: true,
        warnings,
    })
}

/// Fit η(Γ_sig) = scale·4Γ_sig Γ_eff/(Γ_sig+Γ_eff)² at fixed Γ_eff;
/// linear in `scale`, solved in closed form.
pub fn fit_eff_bandwidth(data: &Dataset, gamma_eff: f64) -> Result<FitResult, FitError> {
    if !(gamma_eff > 0.0) {
        return Err(FitError::NonFinite("gamma_eff"));
    }
    let predictions: Vec<f64> = data
        .x
        .iter()
        .map(|&gsig| {
            let sum = gsig + gamma_eff;
            4.0 * gsig * gamma_eff / (sum * sum)
        })
        .collect();
    linear_amplitude_fit(data, &predictions, "scale")
}

/// Fit the two-photon-detuning Lorentzian
/// η(δ) = peak·Γ_eff²/((δ − center)² + Γ_eff²).
///
/// Parameters are named `center`, `gamma_eff`, `peak`.
pub fn fit_eff_detuning(data: &Dataset, init: Option<[f64; 3]>) -> Result<FitResult, FitError> {
    if data.len() < 3 {
        return Err(FitError::TooFewUsablePoints {
            usable: data.len(),
            needed: 3,
        });
    }
    let span = data.x[data.x.len() - 1] - data.x[0];
    if !(span > 0.0) {
        return Err(FitError::DegenerateData);
    }
    let init = match init {
        Some(i) => i,
        None => {
            let (i_max, y_max) = argmax(&data.y);
            if !(y_max > 0.0) {
                return Err(FitError::DegenerateData);
            }
            let width = crossing_width(&data.x, &data.y, y_max / 2.0, i_max, true)
                .map(|w| w / 2.0)
                .unwrap_or(span / 8.0);
            [data.x[i_max], width, y_max]
        }
    };
    let model = |p: &[f64]| -> Vec<f64> {
        let w2 = p[1] * p[1];
        data.x
            .iter()
            .map(|&d| {
                let off = d - p[0];
                p[2] * w2 / (off * off + w2)
            })
            .collect()
    };
    let options = LeastSquaresOptions {
        typical_scale: Some(vec![span, span, init[2].abs().max(1e-9)]),
        ..LeastSquaresOptions::default()
    };
    let bounds = [
        (f64::NEG_INFINITY, f64::INFINITY),
        (1e-9 * span, f64::INFINITY),
        (f64::NEG_INFINITY, f64::INFINITY),
    ];
    least_squares(
        model,
        data,
        &init,
        Some(&bounds),
        &["center", "gamma_eff", "peak"],
        &options,
    )
}

// ---------------------------------------------------------------------
// shared helpers

/// Exact solution of y ≈ a·m by the weighted normal equation.
fn linear_amplitude_fit(
    data: &Dataset,
    predictions: &[f64],
    name: &'static str,
) -> Result<FitResult, FitError> {
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..data.len() {
        let w = data.weight(i);
        num += w * predictions[i] * data.y[i];
        den += w * predictions[i] * predictions[i];
    }
    if den == 0.0 {
        return Err(FitError::SingularJacobian);
    }
    let a = num / den;
    let mut rss = 0.0;
    for i in 0..data.len() {
        let r = data.y[i] - a * predictions[i];
        rss += data.weight(i) * r * r;
    }
    let std_errors = (data.len() > 1).then(|| {
        let s2 = rss / (data.len() - 1) as f64;
        vec![(s2 / den).sqrt()]
    });
    Ok(FitResult {
        names: vec![name],
        values: vec![a],
        rss,
        std_errors,
        iterations: 0,
        converged: true,
        warnings: Vec::new(),
    })
}

struct Regression {
    slope: f64,
    intercept: f64,
    rss: f64,
    slope_se: Option<f64>,
    intercept_se: Option<f64>,
}

fn linear_regression(x: &[f64], y: &[f64], weighted: &Dataset) -> Result<Regression, FitError> {
    let n = x.len();
    let mut sw = 0.0;
    let mut sx = 0.0;
    let mut sy = 0.0;
    for i in 0..n {
        let w = weighted.weight(i);
        sw += w;
        sx += w * x[i];
        sy += w * y[i];
    }
    let xbar = sx / sw;
    let ybar = sy / sw;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..n {
        let w = weighted.weight(i);
        sxx += w * (x[i] - xbar) * (x[i] - xbar);
        sxy += w * (x[i] - xbar) * (y[i] - ybar);
    }
    if sxx == 0.0 {
        return Err(FitError::DegenerateData);
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let mut rss = 0.0;
    for i in 0..n {
        let r = y[i] - (slope * x[i] + intercept);
        rss += weighted.weight(i) * r * r;
    }
    let (slope_se, intercept_se) = if n > 2 {
        let s2 = rss / (n - 2) as f64;
        (
            Some((s2 / sxx).sqrt()),
            Some((s2 * (1.0 / sw + xbar * xbar / sxx)).sqrt()),
        )
    } else {
        (None, None)
    };
    Ok(Regression {
        slope,
        intercept,
        rss,
        slope_se,
        intercept_se,
    })
}

fn argmin(y: &[f64]) -> (usize, f64) {
    let mut idx = 0;
    let mut best = y[0];
    for (i, &v) in y.iter().enumerate() {
        if v < best {
            best = v;
            idx = i;
        }
    }
    (idx, best)
}

fn argmax(y: &[f64]) -> (usize, f64) {
    let mut idx = 0;
    let mut best = y[0];
    for (i, &v) in y.iter().enumerate() {
        if v > best {
            best = v;
            idx = i;
        }
    }
    (idx, best)
}

/// Full width of the feature at `level`, found by scanning outward from
/// the extremum and interpolating the crossings. `peak_up` selects a peak
/// (crossing downward) versus a dip (crossing upward).
fn crossing_width(x: &[f64], y: &[f64], level: f64, i_ext: usize, peak_up: bool) -> Option<f64> {
    let crossed = |v: f64| if peak_up { v < level } else { v > level };
    let mut left = None;
    for i in (0..i_ext).rev() {
        if crossed(y[i]) {
            let f = (level - y[i]) / (y[i + 1] - y[i]);
            left = Some(x[i] + f * (x[i + 1] - x[i]));
            break;
        }
    }
    let mut right = None;
    for i in (i_ext + 1)..x.len() {
        if crossed(y[i]) {
            let f = (level - y[i - 1]) / (y[i] - y[i - 1]);
            right = Some(x[i - 1] + f * (x[i] - x[i - 1]));
            break;
        }
    }
    match (left, right) {
        (Some(l), Some(r)) if r > l => Some(r - l),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::DatasetKind;
    use crate::units::angular_from_hz;
    use approx::assert_relative_eq;

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
    fn cavity_roundtrip_noiseless() {
        let params = reference_params();
        let grid: Vec<f64> = (0..241)
            .map(|k| angular_from_hz(0.3e6 + k as f64 * 17.5e3))
            .collect();
        let y: Vec<f64> = grid
            .iter()
            .map(|&w| bare_cavity_response(&params, w).norm_sqr())
            .collect();
        let data = Dataset::new(DatasetKind::OmitBroad, grid, y).unwrap();
        let fit = fit_cavity(&data, &params, FitTarget::Power, None).unwrap();
        assert!(fit.converged);
        assert_relative_eq!(fit.get("delta").unwrap(), params.delta, max_relative = 1e-6);
        assert_relative_eq!(fit.get("kappa").unwrap(), params.kappa, max_relative = 1e-6);
        assert_relative_eq!(fit.get("amplitude").unwrap(), 1.0, max_relative = 1e-5);
        assert!(fit.get("offset").unwrap().abs() < 1e-6);
        assert!(fit.warnings.is_empty());
    }

    #[test]
    fn cavity_magnitude_target_roundtrip() {
        let params = reference_params();
        let grid: Vec<f64> = (0..201)
            .map(|k| angular_from_hz(0.4e6 + k as f64 * 20e3))
            .collect();
        let y: Vec<f64> = grid
            .iter()
            .map(|&w| bare_cavity_response(&params, w).norm())
            .collect();
        let data = Dataset::new(DatasetKind::OmitBroad, grid, y).unwrap();
        let fit = fit_cavity(&data, &params, FitTarget::Magnitude, None).unwrap();
        assert_relative_eq!(fit.get("kappa").unwrap(), params.kappa, max_relative = 1e-6);
    }

    #[test]
    fn cavity_short_span_raises_flag() {
        let params = reference_params();
        // span of 0.5κ around the dip
        let center = -params.delta;
        let grid: Vec<f64> = (0..41)
            .map(|k| center + (k as f64 / 40.0 - 0.5) * 0.5 * params.kappa)
            .collect();
        let y: Vec<f64> = grid
            .iter()
            .map(|&w| bare_cavity_response(&params, w).norm_sqr())
            .collect();
        let data = Dataset::new(DatasetKind::OmitBroad, grid, y).unwrap();
        let fit = fit_cavity(&data, &params, FitTarget::Power, None).unwrap();
        assert!(fit
            .warnings
            .iter()
            .any(|w| matches!(w, FitWarning::SpanUnderConstrained { .. })));
    }

    #[test]
    fn input_power_single_point_inversion() {
        let params = reference_params();
        let mirrors = MirrorTransmissions::default();
        let truth = transmission_power(&params, mirrors, 0.0).unwrap();
        let data = Dataset::new(DatasetKind::Transmission, vec![0.0], vec![truth]).unwrap();
        let fit = fit_input_power(&data, &params, mirrors).unwrap();
        assert_relative_eq!(fit.get("p_in").unwrap(), params.p_in, max_relative = 1e-14);
        assert!(fit.std_errors.is_none());
    }

    #[test]
    fn input_power_zero_data_gives_zero() {
        let params = reference_params();
        let mirrors = MirrorTransmissions::default();
        let data = Dataset::new(
            DatasetKind::Transmission,
            vec![0.0, params.kappa / 2.0, params.kappa],
            vec![0.0, 0.0, 0.0],
        )
        .unwrap();
        let fit = fit_input_power(&data, &params, mirrors).unwrap();
        assert_eq!(fit.get("p_in").unwrap(), 0.0);
    }

    #[test]
    fn g0_roundtrip_and_scaling() {
        let params = reference_params();
        let grid: Vec<f64> = (1..=30)
            .map(|k| -angular_from_hz(0.15e6 * k as f64))
            .collect();
        let y: Vec<f64> = grid
            .iter()
            .map(|&d| {
                let mut pp = params.clone();
                pp.delta = d;
                let n = cavity_photon_number(&pp);
                crate::system::gamma_opt(&pp, n)
            })
            .collect();
        let data = Dataset::new(DatasetKind::Dba, grid.clone(), y.clone()).unwrap();
        let fit = fit_g0(&data, &params).unwrap();
        assert_relative_eq!(fit.get("g0").unwrap(), params.g0, max_relative = 1e-10);

        // quadrupled broadening doubles the coupling estimate
        let scaled: Vec<f64> = y.iter().map(|v| 4.0 * v).collect();
        let data4 = Dataset::new(DatasetKind::Dba, grid, scaled).unwrap();
        let fit4 = fit_g0(&data4, &params).unwrap();
        assert_relative_eq!(fit4.get("g0").unwrap(), 2.0 * params.g0, max_relative = 1e-10);
    }

    #[test]
    fn g0_rejects_pathological_data() {
        let params = reference_params();
        // broadening with the wrong sign everywhere on the red side
        let grid: Vec<f64> = (1..=10).map(|k| -angular_from_hz(0.2e6 * k as f64)).collect();
        let y: Vec<f64> = grid.iter().map(|_| -100.0).collect();
        let data = Dataset::new(DatasetKind::Dba, grid, y).unwrap();
        assert_eq!(fit_g0(&data, &params).unwrap_err(), FitError::NegativeCouplingSquared);
    }

    #[test]
    fn ringdown_roundtrip() {
        let omega_m = angular_from_hz(2.4e6);
        let q_true = 1e8;
        let gamma_m = omega_m / q_true;
        let t: Vec<f64> = (0..50).map(|k| k as f64 * 0.4).collect();
        let y: Vec<f64> = t.iter().map(|&tk| 0.8 * (-gamma_m * tk / 2.0).exp()).collect();
        let data = Dataset::new(DatasetKind::Ringdown, t, y).unwrap();
        let fit = fit_ringdown(&data, omega_m).unwrap();
        assert_relative_eq!(fit.get("q").unwrap(), q_true, max_relative = 1e-9);
        assert_relative_eq!(fit.get("t1_equivalent").unwrap(), 2.0 / gamma_m, max_relative = 1e-9);
    }

    #[test]
    fn ringdown_constant_amplitude_is_infinite_q() {
        let omega_m = angular_from_hz(2.4e6);
        let t: Vec<f64> = (0..10).map(|k| k as f64).collect();
        let y = vec![0.5; 10];
        let data = Dataset::new(DatasetKind::Ringdown, t, y).unwrap();
        let fit = fit_ringdown(&data, omega_m).unwrap();
        assert_eq!(fit.get("gamma_m").unwrap(), 0.0);
        assert!(fit.get("q").unwrap().is_infinite());
    }

    #[test]
    fn ringdown_rejects_non_positive_amplitudes() {
        let omega_m = angular_from_hz(2.4e6);
        let data = Dataset::new(
            DatasetKind::Ringdown,
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 0.5],
        )
        .unwrap();
        assert_eq!(fit_ringdown(&data, omega_m).unwrap_err(), FitError::NonPositiveAmplitude);
    }

    #[test]
    fn t1_roundtrip_noiseless() {
        let t1_true = 0.023;
        let t: Vec<f64> = (0..26).map(|k| k as f64 * 2e-3).collect();
        let y: Vec<f64> = t.iter().map(|&tk| (-tk / (2.0 * t1_true)).exp()).collect();
        // generated decay hits e^{-1/2} at T_delay = T_1
        let at_t1 = (-0.023 / (2.0 * t1_true)).exp();
        assert_relative_eq!(at_t1, 0.6065306597126334, max_relative = 1e-14);
        let data = Dataset::new(DatasetKind::DecayT1, t, y).unwrap();
        let fit = fit_t1(&data, 0.0).unwrap();
        assert_relative_eq!(fit.get("t1").unwrap(), t1_true, max_relative = 1e-10);
        assert_relative_eq!(fit.get("amplitude0").unwrap(), 1.0, max_relative = 1e-10);
        assert!(fit.warnings.is_empty());
    }

    #[test]
    fn t1_noise_floor_exclusion() {
        let t1_true = 0.023;
        let floor = 0.05;
        let t: Vec<f64> = (0..40).map(|k| k as f64 * 5e-3).collect();
        let y: Vec<f64> = t
            .iter()
            .map(|&tk| ((-tk / (2.0 * t1_true)).exp()).max(floor))
            .collect();
        let data = Dataset::new(DatasetKind::DecayT1, t, y).unwrap();
        let fit = fit_t1(&data, floor).unwrap();
        assert_relative_eq!(fit.get("t1").unwrap(), t1_true, max_relative = 1e-6);
        assert!(matches!(
            fit.warnings[0],
            FitWarning::PointsBelowNoiseFloor { excluded } if excluded > 0
        ));
    }

    #[test]
    fn t1_all_points_below_floor_is_error() {
        let data = Dataset::new(
            DatasetKind::DecayT1,
            vec![0.0, 1e-3, 2e-3],
            vec![0.01, 0.009, 0.008],
        )
        .unwrap();
        assert!(matches!(
            fit_t1(&data, 0.1).unwrap_err(),
            FitError::TooFewUsablePoints { usable: 0, .. }
        ));
    }

    #[test]
    fn eff_bandwidth_scale_recovery() {
        let gamma_eff = 6000.0;
        let grid: Vec<f64> = (0..50).map(|k| gamma_eff * 0.05 * 1.13_f64.powi(k)).collect();
        let y: Vec<f64> = grid
            .iter()
            .map(|&g| 0.45 * 4.0 * g * gamma_eff / ((g + gamma_eff) * (g + gamma_eff)))
            .collect();
        let data = Dataset::new(DatasetKind::EffBandwidth, grid.clone(), y).unwrap();
        let fit = fit_eff_bandwidth(&data, gamma_eff).unwrap();
        assert_relative_eq!(fit.get("scale").unwrap(), 0.45, max_relative = 1e-12);

        let zeros = Dataset::new(DatasetKind::EffBandwidth, grid, vec![0.0; 50]).unwrap();
        assert_eq!(fit_eff_bandwidth(&zeros, gamma_eff).unwrap().get("scale"), Some(0.0));
    }

    #[test]
    fn eff_detuning_roundtrip() {
        let gamma_eff = 6000.0;
        let peak = 0.3277922461968260;
        let grid: Vec<f64> = (-30..=30).map(|k| k as f64 * 0.2 * gamma_eff).collect();
        let y: Vec<f64> = grid
            .iter()
            .map(|&d| peak * gamma_eff * gamma_eff / (d * d + gamma_eff * gamma_eff))
            .collect();
        let data = Dataset::new(DatasetKind::EffDetuning, grid, y).unwrap();
        let fit = fit_eff_detuning(&data, None).unwrap();
        assert!(fit.converged);
        assert!(fit.get("center").unwrap().abs() < 1e-8 * gamma_eff);
        assert_relative_eq!(fit.get("gamma_eff").unwrap(), gamma_eff, max_relative = 1e-8);
        assert_relative_eq!(fit.get("peak").unwrap(), peak, max_relative = 1e-8);
        // half width: η(δ = Γ_eff) = peak/2 on the fitted curve
        let w = fit.get("gamma_eff").unwrap();
        let p = fit.get("peak").unwrap();
        assert_relative_eq!(p * w * w / (w * w + w * w), p / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn eff_detuning_center_ignores_vertical_scale() {
        let gamma_eff = 6000.0;
        let center = 800.0;
        let grid: Vec<f64> = (-30..=30).map(|k| k as f64 * 0.2 * gamma_eff).collect();
        let make = |scale: f64| {
            let y: Vec<f64> = grid
                .iter()
                .map(|&d| {
                    scale * gamma_eff * gamma_eff
                        / ((d - center) * (d - center) + gamma_eff * gamma_eff)
                })
                .collect();
            Dataset::new(DatasetKind::EffDetuning, grid.clone(), y).unwrap()
        };
        let a = fit_eff_detuning(&make(0.3), None).unwrap();
        let b = fit_eff_detuning(&make(3.0), None).unwrap();
        assert_relative_eq!(a.get("center").unwrap(), center, max_relative = 1e-8);
        assert_relative_eq!(b.get("center").unwrap(), center, max_relative = 1e-8);
    }
}
