//! CSV and flat-JSON artifact formats.
//!
//! CSV dialect: comma separated, `.` decimal point, one header row, LF
//! line endings. Floats are written in Rust's shortest round-trip form,
//! which makes files byte-stable across runs. JSON records are flat
//! key-value objects with units carried in the key names (`kappa_hz`,
//! `t1_s`, `p_in_w`).

use std::fs;
use std::io::Write;
use std::path::Path;

use omem_core::estimation::{Dataset, DatasetKind, FitResult};
use omem_core::memory::ProtocolTrace;
use omem_core::units::hz_from_angular;
use serde_json::Value;

use crate::CliError;

/// Column headers per dataset kind, also used to validate files on read.
pub fn dataset_header(kind: DatasetKind) -> &'static str {
    match kind {
        DatasetKind::OmitBroad | DatasetKind::OmitNarrow => "freq_hz,response",
        DatasetKind::Transmission => "delta_hz,p_out_w",
        DatasetKind::Dba => "delta_hz,gamma_eff_hz",
        DatasetKind::Ringdown => "t_s,amplitude",
        DatasetKind::DecayT1 => "t_delay_s,amp_ratio",
        DatasetKind::EffBandwidth => "gamma_sig_hz,eta",
        DatasetKind::EffDetuning => "delta_hz,eta",
    }
}

/// Whether a dataset kind's abscissa (and, for rate-valued ordinates,
/// the ordinate) is a frequency to be converted Hz ↔ rad/s at this
/// boundary.
fn frequency_columns(kind: DatasetKind) -> (bool, bool) {
    match kind {
        DatasetKind::OmitBroad | DatasetKind::OmitNarrow => (true, false),
        DatasetKind::Transmission => (true, false),
        DatasetKind::Dba => (true, true),
        DatasetKind::Ringdown | DatasetKind::DecayT1 => (false, false),
        DatasetKind::EffBandwidth => (true, false),
        DatasetKind::EffDetuning => (true, false),
    }
}

pub fn parse_dataset_kind(name: &str) -> Option<DatasetKind> {
    Some(match name {
        "omit_broad" => DatasetKind::OmitBroad,
        "omit_narrow" => DatasetKind::OmitNarrow,
        "transmission" => DatasetKind::Transmission,
        "dba" => DatasetKind::Dba,
        "ringdown" => DatasetKind::Ringdown,
        "decay_t1" => DatasetKind::DecayT1,
        "eff_bandwidth" => DatasetKind::EffBandwidth,
        "eff_detuning" => DatasetKind::EffDetuning,
        _ => return None,
    })
}

pub fn dataset_kind_name(kind: DatasetKind) -> &'static str {
    match kind {
        DatasetKind::OmitBroad => "omit_broad",
        DatasetKind::OmitNarrow => "omit_narrow",
        DatasetKind::Transmission => "transmission",
        DatasetKind::Dba => "dba",
        DatasetKind::Ringdown => "ringdown",
        DatasetKind::DecayT1 => "decay_t1",
        DatasetKind::EffBandwidth => "eff_bandwidth",
        DatasetKind::EffDetuning => "eff_detuning",
    }
}

/// Write a two-column dataset; `x`/`y` are in core units and converted to
/// the file units of the kind.
pub fn write_dataset(path: &Path, kind: DatasetKind, x: &[f64], y: &[f64]) -> Result<(), CliError> {
    let (fx, fy) = frequency_columns(kind);
    let mut out = String::new();
    out.push_str(dataset_header(kind));
    out.push('\n');
    for (xv, yv) in x.iter().zip(y.iter()) {
        let xo = if fx { hz_from_angular(*xv) } else { *xv };
        let yo = if fy { hz_from_angular(*yv) } else { *yv };
        out.push_str(&format!("{xo},{yo}\n"));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Read a dataset back into core units, validating the header.
pub fn read_dataset(path: &Path, kind: DatasetKind) -> Result<Dataset, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Dataset {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if header != dataset_header(kind) {
        return Err(CliError::Dataset {
            path: path.display().to_string(),
            reason: format!(
                "header '{header}' does not match '{}' expected for kind {}",
                dataset_header(kind),
                dataset_kind_name(kind)
            ),
        });
    }
    let (fx, fy) = frequency_columns(kind);
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split(',');
        let parse = |field: Option<&str>| -> Result<f64, CliError> {
            field
                .ok_or(())
                .and_then(|s| s.parse::<f64>().map_err(|_| ()))
                .map_err(|_| CliError::Dataset {
                    path: path.display().to_string(),
                    reason: format!("line {}: expected two numeric columns", n + 2),
                })
        };
        let xv = parse(cols.next())?;
        let yv = parse(cols.next())?;
        x.push(if fx { omem_core::units::angular_from_hz(xv) } else { xv });
        y.push(if fy { omem_core::units::angular_from_hz(yv) } else { yv });
    }
    Dataset::new(kind, x, y).map_err(|e| CliError::Dataset {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

/// Write a swept complex response: columns freq_hz, re, im, abs2.
pub fn write_spectrum(path: &Path, points: &[(f64, omem_core::Complex64)]) -> Result<(), CliError> {
    let mut out = String::from("freq_hz,re,im,abs2\n");
    for (omega, r) in points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            hz_from_angular(*omega),
            r.re,
            r.im,
            r.norm_sqr()
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Write a protocol trace: one row per sample with complex envelopes and
/// the protocol segment label.
pub fn write_trace(path: &Path, trace: &ProtocolTrace) -> Result<(), CliError> {
    let mut out = String::from("t_s,s_in_re,s_in_im,b_re,b_im,s_out_re,s_out_im,segment\n");
    for k in 0..trace.t.len() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            trace.t[k],
            trace.s_in[k].re,
            trace.s_in[k].im,
            trace.b[k].re,
            trace.b[k].im,
            trace.s_out[k].re,
            trace.s_out[k].im,
            trace.segment[k].name()
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Write a flat key-value record as pretty JSON, keys in insertion order.
pub fn write_record(path: &Path, record: &[(String, Value)]) -> Result<(), CliError> {
    let mut map = serde_json::Map::new();
    for (k, v) in record {
        map.insert(k.clone(), v.clone());
    }
    let mut file = fs::File::create(path)?;
    let text = serde_json::to_string_pretty(&Value::Object(map))?;
    file.write_all(text.as_bytes())?;
    file.write_all(b"\n")?;
    Ok(())
}

/// Flatten a fit result into unit-suffixed keys (rad/s values converted
/// to Hz).
pub fn fit_result_record(fit: &FitResult) -> Vec<(String, Value)> {
    let mut rec = Vec::new();
    for (i, name) in fit.names.iter().enumerate() {
        let (key, value) = file_facing(name, fit.values[i]);
        rec.push((key, json_f64(value)));
        if let Some(se) = &fit.std_errors {
            let (key, value) = file_facing(name, se[i]);
            rec.push((format!("{key}_stderr"), json_f64(value)));
        }
    }
    rec.push(("rss".into(), json_f64(fit.rss)));
    rec.push(("iterations".into(), Value::from(fit.iterations as u64)));
    rec.push(("converged".into(), Value::from(fit.converged)));
    rec.push((
        "warnings".into(),
        Value::from(fit.warnings.len() as u64),
    ));
    rec
}

/// Map a core parameter name to its file-facing key and unit.
fn file_facing(name: &str, value: f64) -> (String, f64) {
    match name {
        // angular rates → Hz
        "delta" | "kappa" | "g0" | "gamma_m" | "gamma_eff" | "center" => {
            (format!("{name}_hz"), hz_from_angular(value))
        }
        // seconds
        "t1" | "t1_equivalent" => (format!("{name}_s"), value),
        // watts
        "p_in" => ("p_in_w".into(), value),
        // dimensionless
        _ => (name.to_string(), value),
    }
}

pub fn json_f64(v: f64) -> Value {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(format!("{v}")))
}
