//! Digital lock-in demodulation of the detected retrieval beat.
//!
//! The photodetector sees a transient beat oscillating at the signal
//! frequency, V(t) ∝ |envelope(t)|·cos(Ω_sig t + φ). Mixing with
//! e^{−iΩ_ref t} and low-pass filtering with a single pole recovers the
//! envelope shape. The absolute scale carries the unspecified detector
//! proportionality plus the filter's tracking gain, so envelope
//! comparisons should be made after normalization; energies are always
//! computed from the field envelopes directly.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
// float math under no_std; redundant whenever std is in the crate graph
#[allow(unused_imports)]
use num_traits::Float;

use super::ProtocolError;

/// Synthesize the carrier-domain detector voltage from an envelope
/// magnitude sampled at `sample_dt`: V_k = |env_k|·cos(ω_carrier t_k + φ).
pub fn synthesize_carrier(
    envelope_magnitude: &[f64],
    sample_dt: f64,
    omega_carrier: f64,
    phase: f64,
) -> Vec<f64> {
    envelope_magnitude
        .iter()
        .enumerate()
        .map(|(k, &a)| a * (omega_carrier * k as f64 * sample_dt + phase).cos())
        .collect()
}

/// Demodulate a real sampled signal at `omega_ref`, low-pass with a
/// first-order filter of angular cutoff `lp_bandwidth`, and return the
/// envelope magnitude (scaled ×2 so a pure tone of amplitude A settles
/// to A).
///
/// The sample rate must be at least 10 carrier cycles per second of
/// reference frequency (anti-aliasing guard). Useful envelope recovery
/// additionally wants lp_bandwidth ≪ omega_ref and lp_bandwidth ≥ 5Γ_eff.
pub fn lockin_demodulate(
    samples: &[f64],
    sample_dt: f64,
    omega_ref: f64,
    lp_bandwidth: f64,
) -> Result<Vec<f64>, ProtocolError> {
    if !(sample_dt > 0.0) {
        return Err(ProtocolError::NotPositive("sample_dt"));
    }
    if !(omega_ref > 0.0) {
        return Err(ProtocolError::NotPositive("omega_ref"));
    }
    if !(lp_bandwidth > 0.0) {
        return Err(ProtocolError::NotPositive("lp_bandwidth"));
    }
    let rate = 1.0 / sample_dt;
    let required = 10.0 * omega_ref / TAU;
    if rate < required {
        return Err(ProtocolError::SampleRateTooLow { rate, required });
    }

    // exact single-pole step: y += (1 − e^{−ω_lp dt})(x − y)
    let alpha = -(-lp_bandwidth * sample_dt).exp_m1();
    let mut y = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(samples.len());
    for (k, &v) in samples.iter().enumerate() {
        let phase = -omega_ref * k as f64 * sample_dt;
        let mixed = Complex64::new(phase.cos(), phase.sin()) * v;
        y += (mixed - y) * alpha;
        out.push(2.0 * y.norm());
    }
    Ok(out)
}
