//! The write signal: an exponentially rising sinusoid, truncated at t = 0.
//!
//! An EOM driven with V(t) = V_max sin(Ω_sig t) e^{Γ_sig t/2} H(−t)
//! puts a sideband of amplitude βs_0/2 on the control field, with
//! β = πV_max/V_π ≪ 1 the modulation depth. In the frame rotating at
//! Ω_sig only the component co-rotating with the mechanics survives, so
//! the stored envelope is
//!
//! s_in(t) = (β s_0/2) · e^{Γ_sig t/2} · H(−t),
//!
//! and the two-photon detuning δ = Ω_sig − Ω_m appears in the memory
//! propagator rather than in the envelope phase.

use alloc::vec::Vec;
use num_complex::Complex64;
// float math under no_std; redundant whenever std is in the crate graph
#[allow(unused_imports)]
use num_traits::Float;

use super::{ProtocolError, ProtocolWarning};

/// Modulation depth above which the small-signal expansion is flagged.
const BETA_WARN: f64 = 0.2;

/// Write-pulse parameters. Rates are angular (rad/s); `s0` is a photon
/// flux amplitude, |s|² in photons/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalPulse {
    /// Modulation depth β = πV_max/V_π.
    pub beta: f64,
    /// Carrier flux amplitude s_0, √(photons/s).
    pub s0: f64,
    /// Signal bandwidth Γ_sig.
    pub gamma_sig: f64,
    /// Signal frequency Ω_sig.
    pub omega_sig: f64,
    /// Two-photon detuning δ = Ω_sig − Ω_m.
    pub delta: f64,
    /// Truncation length of the rising exponential, s.
    pub t_write: f64,
}

impl SignalPulse {
    /// Construct the write signal against a mechanical resonance at
    /// `omega_m`, fixing δ = Ω_sig − Ω_m.
    pub fn new(
        beta: f64,
        s0: f64,
        gamma_sig: f64,
        omega_sig: f64,
        omega_m: f64,
        t_write: f64,
    ) -> Result<Self, ProtocolError> {
        for (v, name) in [
            (beta, "beta"),
            (s0, "s0"),
            (gamma_sig, "gamma_sig"),
            (omega_sig, "omega_sig"),
            (omega_m, "omega_m"),
            (t_write, "t_write"),
        ] {
            if !v.is_finite() {
                return Err(ProtocolError::NonFinite(name));
            }
        }
        if gamma_sig <= 0.0 {
            return Err(ProtocolError::BandwidthNotPositive);
        }
        if beta < 0.0 {
            return Err(ProtocolError::Negative("beta"));
        }
        if s0 < 0.0 {
            return Err(ProtocolError::Negative("s0"));
        }
        if t_write < 0.0 {
            return Err(ProtocolError::Negative("t_write"));
        }
        Ok(SignalPulse {
            beta,
            s0,
            gamma_sig,
            omega_sig,
            delta: omega_sig - omega_m,
            t_write,
        })
    }

    /// Envelope amplitude at the end of the write pulse, βs_0/2.
    pub fn peak_amplitude(&self) -> f64 {
        self.beta * self.s0 / 2.0
    }

    /// Rotating-frame envelope at time t (t ≤ 0 inside the pulse).
    pub fn envelope(&self, t: f64) -> Complex64 {
        if t > 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(self.peak_amplitude() * (self.gamma_sig * t / 2.0).exp(), 0.0)
    }

    /// Pulse energy for an untruncated rise, E_in = (βs_0/2)²/Γ_sig.
    pub fn energy(&self) -> f64 {
        let a = self.peak_amplitude();
        a * a / self.gamma_sig
    }

    /// Fraction of [`Self::energy`] inside the window [−t_write, 0],
    /// 1 − e^{−Γ_sig t_write}.
    pub fn window_fraction(&self) -> f64 {
        -(-self.gamma_sig * self.t_write).exp_m1()
    }

    /// Energy actually contained in the truncated window.
    pub fn windowed_energy(&self) -> f64 {
        self.energy() * self.window_fraction()
    }

    pub fn warnings(&self) -> Vec<ProtocolWarning> {
        let mut w = Vec::new();
        if self.beta >= BETA_WARN {
            w.push(ProtocolWarning::ModulationDepthLarge { beta: self.beta });
        }
        if self.t_write < 5.0 / self.gamma_sig {
            w.push(ProtocolWarning::WriteWindowShort {
                truncated_fraction: (-self.gamma_sig * self.t_write).exp(),
            });
        }
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pulse() -> SignalPulse {
        SignalPulse::new(0.05, 1000.0, 6000.0, 2.4e6, 2.4e6, 2e-3).unwrap()
    }

    #[test]
    fn peak_amplitude_at_pulse_end() {
        let p = pulse();
        assert_eq!(p.envelope(0.0).re, p.beta * p.s0 / 2.0);
        assert_eq!(p.envelope(1e-9), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn envelope_five_time_constants_early() {
        let p = pulse();
        let t = -5.0 / p.gamma_sig;
        assert_relative_eq!(
            p.envelope(t).re,
            p.peak_amplitude() * (-2.5_f64).exp(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn energy_closed_form() {
        let p = pulse();
        assert_relative_eq!(p.energy(), p.peak_amplitude().powi(2) / p.gamma_sig, max_relative = 1e-15);
        // brute-force quadrature of |envelope|² over the window
        let n = 400_000;
        let dt = p.t_write / n as f64;
        let mut sum = 0.0;
        for k in 0..=n {
            let t = -p.t_write + k as f64 * dt;
            let v = p.envelope(t).norm_sqr();
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            sum += w * v * dt;
        }
        assert_relative_eq!(sum, p.windowed_energy(), max_relative = 1e-6);
    }

    #[test]
    fn rejects_non_positive_bandwidth() {
        assert_eq!(
            SignalPulse::new(0.05, 1.0, 0.0, 1.0, 1.0, 1.0).unwrap_err(),
            ProtocolError::BandwidthNotPositive
        );
        assert_eq!(
            SignalPulse::new(0.05, 1.0, -3.0, 1.0, 1.0, 1.0).unwrap_err(),
            ProtocolError::BandwidthNotPositive
        );
    }

    #[test]
    fn warnings_fire_on_invariant_violations() {
        let strong = SignalPulse::new(0.3, 1.0, 6000.0, 2.4e6, 2.4e6, 2e-3).unwrap();
        assert!(matches!(
            strong.warnings()[0],
            ProtocolWarning::ModulationDepthLarge { .. }
        ));
        let short = SignalPulse::new(0.05, 1.0, 6000.0, 2.4e6, 2.4e6, 1e-4).unwrap();
        assert!(matches!(
            short.warnings()[0],
            ProtocolWarning::WriteWindowShort { .. }
        ));
        assert!(pulse().warnings().is_empty());
    }

    #[test]
    fn two_photon_detuning_follows_signal_frequency() {
        let p = SignalPulse::new(0.05, 1.0, 6000.0, 2.4e6 + 500.0, 2.4e6, 2e-3).unwrap();
        assert_eq!(p.delta, 500.0);
    }
}
