//! Time-domain storage and retrieval protocol.
//!
//! The memory dynamics in the frame rotating at the signal frequency Ω_sig
//! is the scalar Langevin equation
//!
//! db/dt = −(Γ_eff/2 − iδ)·b + √(η_c Γ_opt)·s_in(t),
//! s_out(t) = s_in(t) − i√(η_c Γ_opt)·b(t),
//!
//! with δ = Ω_sig − Ω_m the two-photon detuning, driven during the write
//! pulse by an exponentially rising envelope, left dark (Γ_opt = 0, decay
//! 1/2T_1) during storage, and read out with the drive back on. All three
//! segments have exact closed forms; a fixed-step RK4 oracle verifies them.

mod lockin;
mod protocol;
mod pulse;

pub use lockin::{lockin_demodulate, synthesize_carrier};
pub use protocol::{
    closed_form_efficiency, closed_form_efficiency_with_gamma_m, efficiency, evolve_delay,
    evolve_read, evolve_write, ode_oracle, simulate_protocol, EfficiencyReport, ProtocolRun,
    ProtocolTimeline, ProtocolTrace, ReadStage, Segment, WriteStage,
};
pub use pulse::SignalPulse;

use core::fmt;

/// Hard failure in protocol construction or evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum ProtocolError {
    /// Signal bandwidth must be strictly positive.
    BandwidthNotPositive,
    /// A duration or sample step came out non-positive where required.
    NotPositive(&'static str),
    /// A duration was negative.
    Negative(&'static str),
    /// A numeric input was NaN or infinite.
    NonFinite(&'static str),
    /// sample_dt fails to resolve the fastest envelope rate.
    SampleStepTooCoarse { dt: f64, limit: f64 },
    /// The RK4 oracle refuses steps above its accuracy bound.
    OracleStepTooLarge { dt: f64, limit: f64 },
    /// Γ_eff < Γ_m would imply a negative optical damping during drive.
    GammaEffBelowGammaM,
    /// Efficiency is undefined for a trace with no input energy.
    ZeroInputEnergy,
    /// Carrier sampling violates the anti-aliasing guard.
    SampleRateTooLow { rate: f64, required: f64 },
}

impl fmt::Display for ProtocolError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BandwidthNotPositive => write!(f, "gamma_sig must be > 0"),
            Self::NotPositive(name) => write!(f, "{name} must be > 0"),
            Self::Negative(name) => write!(f, "{name} must be >= 0"),
            Self::NonFinite(name) => write!(f, "{name} must be finite"),
            Self::SampleStepTooCoarse { dt, limit } => {
                write!(f, "sample_dt = {dt:e} s exceeds the resolution limit {limit:e} s")
            }
            Self::OracleStepTooLarge { dt, limit } => {
                write!(f, "oracle step {dt:e} s exceeds the accuracy limit {limit:e} s")
            }
            Self::GammaEffBelowGammaM => {
                write!(f, "gamma_eff below gamma_m: optical damping cannot be negative")
            }
            Self::ZeroInputEnergy => write!(f, "trace carries no input energy"),
            Self::SampleRateTooLow { rate, required } => {
                write!(f, "sample rate {rate:e} Hz below anti-aliasing bound {required:e} Hz")
            }
        }
    }
}

impl core::error::Error for ProtocolError {}

/// Soft notices about model validity for a protocol configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProtocolWarning {
    /// β ≥ 0.2: the small-modulation expansion of the EOM drive degrades.
    ModulationDepthLarge { beta: f64 },
    /// t_write < 5/Γ_sig: more than ~1% of the pulse energy is cut off.
    WriteWindowShort { truncated_fraction: f64 },
    /// t_read < 5/Γ_eff: retrieval is biased low by the reported factor.
    ReadWindowShort { bias: f64 },
}

impl fmt::Display for ProtocolWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ModulationDepthLarge { beta } => {
                write!(f, "modulation depth beta = {beta} is not small")
            }
            Self::WriteWindowShort { truncated_fraction } => {
                write!(f, "write window truncates {truncated_fraction:e} of the pulse energy")
            }
            Self::ReadWindowShort { bias } => {
                write!(f, "read window biases retrieved energy low by {bias:e}")
            }
        }
    }
}
