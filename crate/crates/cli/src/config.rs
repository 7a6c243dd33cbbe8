//! Scenario configuration: JSON schema, validation with field paths, and
//! resolution into core types.
//!
//! External units are ordinary: frequencies and rates in Hz, powers in W,
//! lengths in m, times in s. Conversion to the angular internal convention
//! happens here and nowhere else. The full schema is documented in the
//! repository README.

use std::fs;
use std::path::{Path, PathBuf};

use omem_core::estimation::{DatasetKind, FitTarget};
use omem_core::response::SweepKind;
use omem_core::system::SystemParams;
use omem_core::units::angular_from_hz;
use serde::Deserialize;

use crate::io::parse_dataset_kind;
use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    system: RawSystem,
    scenario: RawScenario,
    #[serde(default)]
    noise: Option<RawNoise>,
    #[serde(default)]
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    omega_m_hz: f64,
    #[serde(default)]
    gamma_m_hz: Option<f64>,
    #[serde(default)]
    q_factor: Option<f64>,
    kappa_hz: f64,
    #[serde(default)]
    eta_c: Option<f64>,
    #[serde(default)]
    g0_hz: Option<f64>,
    #[serde(default)]
    delta_hz: Option<f64>,
    #[serde(default)]
    p_in_w: Option<f64>,
    #[serde(default)]
    lambda_m: Option<f64>,
    #[serde(default)]
    t1_s: Option<f64>,
    #[serde(default)]
    eta_loss: Option<f64>,
    #[serde(default)]
    eta_qe: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    kind: String,
    #[serde(default)]
    sweep: Option<String>,
    #[serde(default)]
    target: Option<String>,
    #[serde(default)]
    grid: Option<RawGrid>,
    #[serde(default)]
    pulse: Option<RawPulse>,
    #[serde(default)]
    timeline: Option<RawTimeline>,
    #[serde(default)]
    t_delay_s: Option<f64>,
    #[serde(default)]
    fit: Option<RawFit>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    start: f64,
    stop: f64,
    count: usize,
    #[serde(default)]
    spacing: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPulse {
    #[serde(default)]
    beta: Option<f64>,
    #[serde(default)]
    s0: Option<f64>,
    #[serde(default)]
    gamma_sig_hz: Option<f64>,
    #[serde(default)]
    delta_hz: Option<f64>,
    #[serde(default)]
    t_write_s: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTimeline {
    #[serde(default)]
    t_delay_s: Option<f64>,
    #[serde(default)]
    t_read_s: Option<f64>,
    #[serde(default)]
    sample_dt_s: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFit {
    kind: String,
    data: String,
    #[serde(default)]
    target: Option<String>,
    #[serde(default)]
    noise_floor: Option<f64>,
    #[serde(default)]
    gamma_eff_hz: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoise {
    relative_amplitude: f64,
    #[serde(default)]
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    #[serde(default)]
    dir: Option<String>,
    #[serde(default)]
    prefix: Option<String>,
}

/// Grid specification in file units (Hz or s depending on the scenario).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log_spaced: bool,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        let mut out = Vec::with_capacity(n);
        if self.log_spaced {
            let (la, lb) = (self.start.ln(), self.stop.ln());
            for k in 0..n {
                out.push((la + (lb - la) * k as f64 / (n - 1) as f64).exp());
            }
        } else {
            for k in 0..n {
                out.push(self.start + (self.stop - self.start) * k as f64 / (n - 1) as f64);
            }
        }
        out
    }
}

/// Write-pulse settings in file units; unset fields default against the
/// drive at run time (Γ_sig = Γ_eff, δ = 0, t_write = 10/Γ_sig).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PulseSpec {
    pub beta: f64,
    pub s0: f64,
    pub gamma_sig_hz: Option<f64>,
    pub delta_hz: f64,
    pub t_write_s: Option<f64>,
}

/// Timing settings; unset fields default to t_read = 10/Γ_eff and
/// sample_dt = 0.01/max rate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TimelineSpec {
    pub t_delay_s: f64,
    pub t_read_s: Option<f64>,
    pub sample_dt_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitSpec {
    pub kind: FitKind,
    pub data: PathBuf,
    pub target: FitTarget,
    pub noise_floor: f64,
    pub gamma_eff_hz: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitKind {
    Cavity,
    InputPower,
    G0,
    Ringdown,
    T1,
    EffBandwidth,
    EffDetuning,
}

impl FitKind {
    /// Dataset kind this fit consumes.
    pub fn dataset(self) -> DatasetKind {
        match self {
            FitKind::Cavity => DatasetKind::OmitBroad,
            FitKind::InputPower => DatasetKind::Transmission,
            FitKind::G0 => DatasetKind::Dba,
            FitKind::Ringdown => DatasetKind::Ringdown,
            FitKind::T1 => DatasetKind::DecayT1,
            FitKind::EffBandwidth => DatasetKind::EffBandwidth,
            FitKind::EffDetuning => DatasetKind::EffDetuning,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    /// Probe-response sweep; grid in Hz of modulation frequency.
    OmitSweep {
        sweep: SweepKind,
        target: FitTarget,
        grid: Grid,
    },
    /// Effective-linewidth curve; grid in Hz of control detuning. Also
    /// produces the transmitted-power curve recorded alongside.
    DbaSweep { grid: Grid },
    /// One write/store/read experiment.
    Storage {
        pulse: PulseSpec,
        timeline: TimelineSpec,
    },
    /// Storage repeated over a grid of delays (seconds).
    T1Scan {
        grid: Grid,
        pulse: PulseSpec,
        timeline: TimelineSpec,
    },
    /// Efficiency versus signal bandwidth; grid in Hz of Γ_sig.
    BandwidthScan { grid: Grid },
    /// Efficiency versus two-photon detuning; grid in Hz of δ.
    DetuningScan { grid: Grid, t_delay_s: f64 },
    /// An estimation run on a dataset file.
    Fit(FitSpec),
}

impl Scenario {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Scenario::OmitSweep { .. } => "omit_sweep",
            Scenario::DbaSweep { .. } => "dba_sweep",
            Scenario::Storage { .. } => "storage",
            Scenario::T1Scan { .. } => "t1_scan",
            Scenario::BandwidthScan { .. } => "bandwidth_scan",
            Scenario::DetuningScan { .. } => "detuning_scan",
            Scenario::Fit(_) => "fit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Noise {
    pub relative_amplitude: f64,
    pub seed: u64,
}

/// A validated scenario configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub params: SystemParams,
    pub scenario: Scenario,
    pub noise: Option<Noise>,
    pub out_dir: Option<PathBuf>,
    pub prefix: String,
}

impl ScenarioConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = serde_json::from_str(text)?;
        resolve(raw)
    }
}

fn resolve(raw: RawConfig) -> Result<ScenarioConfig, CliError> {
    let params = resolve_system(&raw.system)?;
    let scenario = resolve_scenario(&raw.scenario)?;
    let noise = match raw.noise {
        None => None,
        Some(n) => {
            if !(n.relative_amplitude >= 0.0) || !n.relative_amplitude.is_finite() {
                return Err(CliError::config(
                    "noise.relative_amplitude",
                    "must be a finite value >= 0",
                ));
            }
            if n.relative_amplitude > 0.0 && n.seed.is_none() {
                return Err(CliError::config(
                    "noise.seed",
                    "required whenever noise.relative_amplitude > 0",
                ));
            }
            Some(Noise {
                relative_amplitude: n.relative_amplitude,
                seed: n.seed.unwrap_or(0),
            })
        }
    };
    let (out_dir, prefix) = match raw.output {
        None => (None, scenario.kind_name().to_string()),
        Some(o) => (
            o.dir.map(PathBuf::from),
            o.prefix.unwrap_or_else(|| scenario.kind_name().to_string()),
        ),
    };
    Ok(ScenarioConfig {
        params,
        scenario,
        noise,
        out_dir,
        prefix,
    })
}

fn resolve_system(raw: &RawSystem) -> Result<SystemParams, CliError> {
    let mut b = SystemParams::builder()
        .omega_m(angular_from_hz(raw.omega_m_hz))
        .kappa(angular_from_hz(raw.kappa_hz));
    match (raw.gamma_m_hz, raw.q_factor) {
        (Some(_), Some(_)) => {
            return Err(CliError::config(
                "system.gamma_m_hz",
                "give either gamma_m_hz or q_factor, not both",
            ))
        }
        (Some(g), None) => b = b.gamma_m(angular_from_hz(g)),
        (None, Some(q)) => b = b.quality_factor(q),
        (None, None) => {}
    }
    if let Some(v) = raw.eta_c {
        b = b.eta_c(v);
    }
    if let Some(v) = raw.g0_hz {
        b = b.g0(angular_from_hz(v));
    }
    if let Some(v) = raw.delta_hz {
        b = b.delta(angular_from_hz(v));
    }
    if let Some(v) = raw.p_in_w {
        b = b.p_in(v);
    }
    if let Some(v) = raw.lambda_m {
        b = b.lambda_l(v);
    }
    if let Some(v) = raw.t1_s {
        b = b.t1(v);
    }
    if let Some(v) = raw.eta_loss {
        b = b.eta_loss(v);
    }
    if let Some(v) = raw.eta_qe {
        b = b.eta_qe(v);
    }
    b.build()
        .map_err(|e| CliError::config(format!("system.{}", param_field(&e)), e.to_string()))
}

fn param_field(err: &omem_core::system::ParamError) -> &'static str {
    use omem_core::system::ParamError::*;
    match err {
        NotPositive(f) | Negative(f) | OutOfUnitInterval(f) | NonFinite(f) | Missing(f) => f,
    }
}

fn resolve_grid(grid: &Option<RawGrid>, path: &str, allow_log: bool) -> Result<Grid, CliError> {
    let g = grid
        .as_ref()
        .ok_or_else(|| CliError::config(path, "grid block is required for this scenario"))?;
    if g.count < 2 {
        return Err(CliError::config(
            format!("{path}.count"),
            "sweeps need at least 2 points",
        ));
    }
    if !(g.stop > g.start) {
        return Err(CliError::config(
            format!("{path}.stop"),
            "must be greater than start",
        ));
    }
    let log_spaced = match g.spacing.as_deref() {
        None | Some("linear") => false,
        Some("log") => {
            if !allow_log {
                return Err(CliError::config(
                    format!("{path}.spacing"),
                    "log spacing is not meaningful for this scenario",
                ));
            }
            if !(g.start > 0.0) {
                return Err(CliError::config(
                    format!("{path}.start"),
                    "log spacing requires start > 0",
                ));
            }
            true
        }
        Some(other) => {
            return Err(CliError::config(
                format!("{path}.spacing"),
                format!("unknown spacing '{other}' (expected linear or log)"),
            ))
        }
    };
    Ok(Grid {
        start: g.start,
        stop: g.stop,
        count: g.count,
        log_spaced,
    })
}

fn resolve_pulse(raw: &Option<RawPulse>) -> Result<PulseSpec, CliError> {
    let d = RawPulse {
        beta: None,
        s0: None,
        gamma_sig_hz: None,
        delta_hz: None,
        t_write_s: None,
    };
    let p = raw.as_ref().unwrap_or(&d);
    let spec = PulseSpec {
        beta: p.beta.unwrap_or(0.05),
        s0: p.s0.unwrap_or(1000.0),
        gamma_sig_hz: p.gamma_sig_hz,
        delta_hz: p.delta_hz.unwrap_or(0.0),
        t_write_s: p.t_write_s,
    };
    if let Some(g) = spec.gamma_sig_hz {
        if !(g > 0.0) {
            return Err(CliError::config(
                "scenario.pulse.gamma_sig_hz",
                "must be > 0",
            ));
        }
    }
    Ok(spec)
}

fn resolve_timeline(raw: &Option<RawTimeline>) -> Result<TimelineSpec, CliError> {
    let d = RawTimeline {
        t_delay_s: None,
        t_read_s: None,
        sample_dt_s: None,
    };
    let t = raw.as_ref().unwrap_or(&d);
    let spec = TimelineSpec {
        t_delay_s: t.t_delay_s.unwrap_or(0.0),
        t_read_s: t.t_read_s,
        sample_dt_s: t.sample_dt_s,
    };
    if spec.t_delay_s < 0.0 {
        return Err(CliError::config("scenario.timeline.t_delay_s", "must be >= 0"));
    }
    Ok(spec)
}

fn resolve_target(raw: &Option<String>, path: &str) -> Result<FitTarget, CliError> {
    match raw.as_deref() {
        None | Some("power") => Ok(FitTarget::Power),
        Some("magnitude") => Ok(FitTarget::Magnitude),
        Some(other) => Err(CliError::config(
            path,
            format!("unknown target '{other}' (expected power or magnitude)"),
        )),
    }
}

fn resolve_scenario(raw: &RawScenario) -> Result<Scenario, CliError> {
    match raw.kind.as_str() {
        "omit_sweep" => {
            let sweep = match raw.sweep.as_deref() {
                None | Some("broad") => SweepKind::Broad,
                Some("narrow") => SweepKind::Narrow,
                Some(other) => {
                    return Err(CliError::config(
                        "scenario.sweep",
                        format!("unknown sweep '{other}' (expected broad or narrow)"),
                    ))
                }
            };
            Ok(Scenario::OmitSweep {
                sweep,
                target: resolve_target(&raw.target, "scenario.target")?,
                grid: resolve_grid(&raw.grid, "scenario.grid", false)?,
            })
        }
        "dba_sweep" => Ok(Scenario::DbaSweep {
            grid: resolve_grid(&raw.grid, "scenario.grid", false)?,
        }),
        "storage" => Ok(Scenario::Storage {
            pulse: resolve_pulse(&raw.pulse)?,
            timeline: resolve_timeline(&raw.timeline)?,
        }),
        "t1_scan" => Ok(Scenario::T1Scan {
            grid: resolve_grid(&raw.grid, "scenario.grid", false)?,
            pulse: resolve_pulse(&raw.pulse)?,
            timeline: resolve_timeline(&raw.timeline)?,
        }),
        "bandwidth_scan" => Ok(Scenario::BandwidthScan {
            grid: resolve_grid(&raw.grid, "scenario.grid", true)?,
        }),
        "detuning_scan" => Ok(Scenario::DetuningScan {
            grid: resolve_grid(&raw.grid, "scenario.grid", false)?,
            t_delay_s: raw.t_delay_s.unwrap_or(0.0),
        }),
        "fit" => {
            let f = raw.fit.as_ref().ok_or_else(|| {
                CliError::config("scenario.fit", "fit block is required for kind = fit")
            })?;
            let kind = match f.kind.as_str() {
                "cavity" => FitKind::Cavity,
                "input_power" => FitKind::InputPower,
                "g0" => FitKind::G0,
                "ringdown" => FitKind::Ringdown,
                "t1" => FitKind::T1,
                "eff_bandwidth" => FitKind::EffBandwidth,
                "eff_detuning" => FitKind::EffDetuning,
                other => {
                    return Err(CliError::config(
                        "scenario.fit.kind",
                        format!("unknown fit kind '{other}'"),
                    ))
                }
            };
            if kind == FitKind::EffBandwidth && f.gamma_eff_hz.is_none() {
                return Err(CliError::config(
                    "scenario.fit.gamma_eff_hz",
                    "required for the eff_bandwidth fit",
                ));
            }
            Ok(Scenario::Fit(FitSpec {
                kind,
                data: PathBuf::from(&f.data),
                target: resolve_target(&f.target, "scenario.fit.target")?,
                noise_floor: f.noise_floor.unwrap_or(0.0),
                gamma_eff_hz: f.gamma_eff_hz,
            }))
        }
        other => {
            let _ = parse_dataset_kind(other);
            Err(CliError::config(
                "scenario.kind",
                format!(
                    "unknown kind '{other}' (expected omit_sweep, dba_sweep, storage, \
                     t1_scan, bandwidth_scan, detuning_scan or fit)"
                ),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal(scenario: &str) -> String {
        format!(
            r#"{{
  "system": {{"omega_m_hz": 2.4e6, "q_factor": 1e8, "kappa_hz": 2.1e6, "eta_c": 0.63}},
  "scenario": {scenario}
}}"#
        )
    }

    #[test]
    fn parses_minimal_sweep() {
        let cfg = ScenarioConfig::from_json(&minimal(
            r#"{"kind": "omit_sweep", "grid": {"start": 1e6, "stop": 4e6, "count": 11}}"#,
        ))
        .unwrap();
        match cfg.scenario {
            Scenario::OmitSweep { grid, .. } => {
                assert_eq!(grid.count, 11);
                assert!(!grid.log_spaced);
            }
            _ => panic!("wrong scenario"),
        }
        assert_eq!(cfg.prefix, "omit_sweep");
    }

    #[test]
    fn grid_count_invariant() {
        let err = ScenarioConfig::from_json(&minimal(
            r#"{"kind": "omit_sweep", "grid": {"start": 1e6, "stop": 4e6, "count": 1}}"#,
        ))
        .unwrap_err();
        assert_eq!(
            err.to_string(),
            "scenario.grid.count: sweeps need at least 2 points"
        );
    }

    #[test]
    fn noise_requires_seed() {
        let text = r#"{
  "system": {"omega_m_hz": 2.4e6, "kappa_hz": 2.1e6},
  "scenario": {"kind": "storage"},
  "noise": {"relative_amplitude": 0.05}
}"#;
        let err = ScenarioConfig::from_json(text).unwrap_err();
        assert!(err.to_string().starts_with("noise.seed:"));
    }

    #[test]
    fn system_errors_carry_field_paths() {
        let text = r#"{
  "system": {"omega_m_hz": 2.4e6, "kappa_hz": 2.1e6, "eta_c": 1.7},
  "scenario": {"kind": "storage"}
}"#;
        let err = ScenarioConfig::from_json(text).unwrap_err();
        assert!(err.to_string().starts_with("system.eta_c:"), "{err}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{
  "system": {"omega_m_hz": 2.4e6, "kappa_hz": 2.1e6, "bogus": 1},
  "scenario": {"kind": "storage"}
}"#;
        assert!(matches!(
            ScenarioConfig::from_json(text).unwrap_err(),
            CliError::Parse(_)
        ));
    }

    #[test]
    fn log_grid_points_are_geometric() {
        let grid = Grid {
            start: 1.0,
            stop: 100.0,
            count: 5,
            log_spaced: true,
        };
        let pts = grid.points();
        for w in pts.windows(2) {
            assert!((w[1] / w[0] - pts[1] / pts[0]).abs() < 1e-12);
        }
        assert!((pts[0] - 1.0).abs() < 1e-12);
        assert!((pts[4] - 100.0).abs() < 1e-10);
    }

    #[test]
    fn eff_bandwidth_fit_needs_gamma_eff() {
        let err = ScenarioConfig::from_json(&minimal(
            r#"{"kind": "fit", "fit": {"kind": "eff_bandwidth", "data": "x.csv"}}"#,
        ))
        .unwrap_err();
        assert!(err.to_string().starts_with("scenario.fit.gamma_eff_hz:"));
    }
}
