//! Shared fixtures and independent oracles for the integration tests.
//!
//! The steady-state oracle here integrates the two-mode (cavity + mechanics)
//! linear equations in time; it never touches the closed-form reflection
//! expression it is used to check.

#![allow(dead_code)]

use num_complex::Complex64;
use omem_core::system::{DriveState, SystemParams};
use omem_core::units::angular_from_hz;

/// The membrane-cavity parameter set used throughout: Ω_m/2π = 2.4 MHz,
/// Q = 1e8, κ/2π = 2.1 MHz, η_c = 0.63, g_0/2π = 1.0 Hz, Δ = −Ω_m, with
/// the input power chosen so n̄_cav = 5.04e8.
pub fn reference_params() -> SystemParams {
    SystemParams::builder()
        .omega_m(angular_from_hz(2.4e6))
        .quality_factor(1e8)
        .kappa(angular_from_hz(2.1e6))
        .eta_c(0.63)
        .g0(angular_from_hz(1.0))
        .delta(-angular_from_hz(2.4e6))
        .p_in(2.1051253060241597e-3)
        .lambda_l(1550e-9)
        .t1(0.023)
        .eta_loss(0.60)
        .eta_qe(0.83)
        .build()
        .unwrap()
}

/// A synthetic drive with prescribed rates, for protocol tests that fix
/// Γ_eff directly instead of deriving it from a power.
pub fn drive_with(gamma_eff: f64, gamma_m: f64) -> DriveState {
    DriveState {
        n_cav: 0.0,
        g: 0.0,
        gamma_opt: gamma_eff - gamma_m,
        gamma_eff,
        cooperativity: None,
    }
}

fn rk4_two_mode<F>(state: [Complex64; 2], t: f64, h: f64, f: F) -> [Complex64; 2]
where
    F: Fn(f64, [Complex64; 2]) -> [Complex64; 2],
{
    let add = |a: [Complex64; 2], b: [Complex64; 2], s: f64| {
        [a[0] + b[0] * s, a[1] + b[1] * s]
    };
    let k1 = f(t, state);
    let k2 = f(t + h / 2.0, add(state, k1, h / 2.0));
    let k3 = f(t + h / 2.0, add(state, k2, h / 2.0));
    let k4 = f(t + h, add(state, k3, h));
    [
        state[0] + (k1[0] + (k2[0] + k3[0]) * 2.0 + k4[0]) * (h / 6.0),
        state[1] + (k1[1] + (k2[1] + k3[1]) * 2.0 + k4[1]) * (h / 6.0),
    ]
}

/// Steady-state reflection from direct time integration of the coupled
/// cavity/mechanics equations with a monochromatic input at offset
/// `omega_mod`, run until transients decay.
///
/// In the frame rotating at the control laser:
///   da/dt = (iΔ − κ/2)a + ig·b + √(η_c κ)·s0·e^{−iΩt}
///   db/dt = (−iΩ_m − Γ_m/2)b + ig·a
/// and r = s_out/s_in = 1 − √(η_c κ)·a(T)·e^{iΩT}/s0.
pub fn steady_state_reflection_direct(
    params: &SystemParams,
    g: f64,
    omega_mod: f64,
    settle_constants: f64,
) -> Complex64 {
    let kappa = params.kappa;
    let in_coupling = (params.eta_c * kappa).sqrt();
    let s0 = 1.0;
    let cav = Complex64::new(-kappa / 2.0, params.delta);
    let mech = Complex64::new(-params.gamma_m / 2.0, -params.omega_m);
    let ig = Complex64::new(0.0, g);

    let rhs = |t: f64, s: [Complex64; 2]| {
        let drive = Complex64::new(0.0, -omega_mod * t).exp() * (in_coupling * s0);
        [cav * s[0] + ig * s[1] + drive, mech * s[1] + ig * s[0]]
    };

    // transients die at the slower of the two amplitude decay rates
    let gamma_opt_scale = 4.0 * g * g / kappa;
    let slow = (params.gamma_m / 2.0).min((params.gamma_m + gamma_opt_scale) / 2.0);
    let t_end = settle_constants / slow.max(1e-300);
    let max_rate = kappa
        .max(params.omega_m)
        .max(params.delta.abs())
        .max(omega_mod.abs())
        .max(g);
    let h = 0.01 / max_rate;
    let steps = (t_end / h).ceil() as usize;
    let h = t_end / steps as f64;

    let mut state = [Complex64::new(0.0, 0.0); 2];
    let mut t = 0.0;
    for _ in 0..steps {
        state = rk4_two_mode(state, t, h, rhs);
        t += h;
    }
    let s_in = Complex64::new(0.0, -omega_mod * t).exp() * s0;
    1.0 - in_coupling * state[0] / s_in
}

/// Steady-state reflection for very slowly damped systems: integrates the
/// constant-coefficient envelope equations and removes the last slow
/// transient with one Aitken extrapolation over three equally spaced
/// samples.
pub fn steady_state_reflection_accelerated(
    params: &SystemParams,
    g: f64,
    omega_mod: f64,
    gamma_slow: f64,
) -> Complex64 {
    let kappa = params.kappa;
    let in_coupling = (params.eta_c * kappa).sqrt();
    let cav = Complex64::new(-kappa / 2.0, params.delta + omega_mod);
    let mech = Complex64::new(-params.gamma_m / 2.0, omega_mod - params.omega_m);
    let ig = Complex64::new(0.0, g);
    let drive = Complex64::new(in_coupling, 0.0);

    let rhs = move |_t: f64, s: [Complex64; 2]| {
        [cav * s[0] + ig * s[1] + drive, mech * s[1] + ig * s[0]]
    };

    let max_rate = kappa.max((params.delta + omega_mod).abs()).max(g);
    let h = 0.01 / max_rate;

    // settle the fast (cavity) transient, then sample the slow one
    let mut state = [Complex64::new(0.0, 0.0); 2];
    let settle_steps = (60.0 / kappa / h).ceil() as usize;
    for _ in 0..settle_steps {
        state = rk4_two_mode(state, 0.0, h, rhs);
    }
    let tau_steps = (2.0 / gamma_slow / h).ceil() as usize;
    let a0 = state[0];
    for _ in 0..tau_steps {
        state = rk4_two_mode(state, 0.0, h, rhs);
    }
    let a1 = state[0];
    for _ in 0..tau_steps {
        state = rk4_two_mode(state, 0.0, h, rhs);
    }
    let a2 = state[0];

    // Aitken Δ²: exact for a single remaining geometric transient
    let denom = a0 + a2 - a1 * 2.0;
    let a_ss = (a0 * a2 - a1 * a1) / denom;
    1.0 - in_coupling * a_ss
}
