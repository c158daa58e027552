//! Scenario files: flat UTF-8 key=value lines with dotted section prefixes
//! (model.nbar=50). A run's JSON sidecar embeds the resolved form of the
//! same keys, so a sidecar can be fed back in as a config verbatim.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;

use crate::output::fmt_f64;

pub type ConfigResult<T> = Result<T, String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }

    fn parse(value: &str) -> ConfigResult<Self> {
        match value {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(format!("output.format: expected csv or json, got '{value}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialKind {
    Ground,
    Basin { a: Complex64 },
    Attractor { sign: i32 },
    SpinCoherent { beta: Complex64 },
    CustomDicke { amps: Vec<Complex64> },
}

impl InitialKind {
    pub fn name(&self) -> &'static str {
        match self {
            InitialKind::Ground => "ground",
            InitialKind::Basin { .. } => "basin",
            InitialKind::Attractor { .. } => "attractor",
            InitialKind::SpinCoherent { .. } => "spin_coherent",
            InitialKind::CustomDicke { .. } => "custom_dicke",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl TimeGrid {
    /// λt sample points, inclusive of both endpoints.
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let span = self.stop - self.start;
        (0..self.steps)
            .map(|i| self.start + span * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ObservableFlags {
    pub p_initial: bool,
    pub p_attractor_plus: bool,
    pub p_attractor_minus: bool,
    pub entropy: bool,
    pub tangle: bool,
    pub leakage: bool,
}

impl ObservableFlags {
    pub fn any(&self) -> bool {
        self.p_initial
            || self.p_attractor_plus
            || self.p_attractor_minus
            || self.entropy
            || self.tangle
            || self.leakage
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub n_qubits: usize,
    pub nbar: f64,
    pub theta: f64,
    pub lambda: f64,
    pub fock_cutoff: Option<usize>,
    pub initial: Option<InitialKind>,
    pub time: Option<TimeGrid>,
    pub observables: ObservableFlags,
    pub output_path: Option<String>,
    pub output_format: Option<OutputFormat>,
    pub scan_samples: usize,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> ConfigResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let map = if text.trim_start().starts_with('{') {
            map_from_json(&text)?
        } else {
            map_from_flat(&text)?
        };
        Self::from_map(map)
    }

    pub fn from_map(mut map: BTreeMap<String, String>) -> ConfigResult<Self> {
        let n_qubits = req_usize(&mut map, "model.n_qubits")?;
        if n_qubits == 0 {
            return Err("model.n_qubits: must be >= 1".into());
        }
        let nbar = req_f64(&mut map, "model.nbar")?;
        if !(nbar >= 0.0) || !nbar.is_finite() {
            return Err(format!("model.nbar: must be finite and >= 0, got {nbar}"));
        }
        let theta = opt_f64(&mut map, "model.theta")?.unwrap_or(0.0);
        if !theta.is_finite() {
            return Err(format!("model.theta: must be finite, got {theta}"));
        }
        let lambda = opt_f64(&mut map, "model.lambda")?.unwrap_or(1.0);
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(format!("model.lambda: must be finite and > 0, got {lambda}"));
        }
        let fock_cutoff = opt_usize(&mut map, "model.fock_cutoff")?;

        let initial = take_initial(&mut map, n_qubits)?;
        let time = take_time(&mut map)?;

        let observables = ObservableFlags {
            p_initial: opt_bool(&mut map, "observables.p_initial")?,
            p_attractor_plus: opt_bool(&mut map, "observables.p_attractor_plus")?,
            p_attractor_minus: opt_bool(&mut map, "observables.p_attractor_minus")?,
            entropy: opt_bool(&mut map, "observables.entropy")?,
            tangle: opt_bool(&mut map, "observables.tangle")?,
            leakage: opt_bool(&mut map, "observables.leakage")?,
        };

        let output_path = map.remove("output.path");
        let output_format = match map.remove("output.format") {
            Some(v) => Some(OutputFormat::parse(&v)?),
            None => None,
        };

        let scan_samples = opt_usize(&mut map, "scan.samples")?.unwrap_or(50);
        if scan_samples < 2 {
            return Err(format!(
                "scan.samples: need at least 2 samples, got {scan_samples}"
            ));
        }

        if let Some(key) = map.keys().next() {
            return Err(format!("unrecognized key: {key}"));
        }

        Ok(Self {
            n_qubits,
            nbar,
            theta,
            lambda,
            fock_cutoff,
            initial,
            time,
            observables,
            output_path,
            output_format,
            scan_samples,
        })
    }

    /// Every key with defaults filled in, for the sidecar. Feeding this map
    /// back through from_map reproduces the run, so output.path is omitted
    /// and the Fock cutoff is the one actually used.
    pub fn resolved(&self, cutoff_used: usize, format: OutputFormat) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("model.n_qubits".into(), self.n_qubits.to_string());
        m.insert("model.nbar".into(), fmt_f64(self.nbar));
        m.insert("model.theta".into(), fmt_f64(self.theta));
        m.insert("model.lambda".into(), fmt_f64(self.lambda));
        m.insert("model.fock_cutoff".into(), cutoff_used.to_string());
        if let Some(kind) = &self.initial {
            m.insert("initial.kind".into(), kind.name().into());
            match kind {
                InitialKind::Ground => {}
                InitialKind::Basin { a } => {
                    m.insert("initial.a_re".into(), fmt_f64(a.re));
                    m.insert("initial.a_im".into(), fmt_f64(a.im));
                }
                InitialKind::Attractor { sign } => {
                    m.insert("initial.sign".into(), sign.to_string());
                }
                InitialKind::SpinCoherent { beta } => {
                    m.insert("initial.beta_re".into(), fmt_f64(beta.re));
                    m.insert("initial.beta_im".into(), fmt_f64(beta.im));
                }
                InitialKind::CustomDicke { amps } => {
                    let list: Vec<String> = amps
                        .iter()
                        .map(|c| format!("{}:{}", fmt_f64(c.re), fmt_f64(c.im)))
                        .collect();
                    m.insert("initial.amplitudes".into(), list.join(","));
                }
            }
        }
        if let Some(t) = &self.time {
            m.insert("time.start".into(), fmt_f64(t.start));
            m.insert("time.stop".into(), fmt_f64(t.stop));
            m.insert("time.steps".into(), t.steps.to_string());
        }
        m.insert(
            "observables.p_initial".into(),
            self.observables.p_initial.to_string(),
        );
        m.insert(
            "observables.p_attractor_plus".into(),
            self.observables.p_attractor_plus.to_string(),
        );
        m.insert(
            "observables.p_attractor_minus".into(),
            self.observables.p_attractor_minus.to_string(),
        );
        m.insert(
            "observables.entropy".into(),
            self.observables.entropy.to_string(),
        );
        m.insert(
            "observables.tangle".into(),
            self.observables.tangle.to_string(),
        );
        m.insert(
            "observables.leakage".into(),
            self.observables.leakage.to_string(),
        );
        m.insert("output.format".into(), format.name().into());
        m.insert("scan.samples".into(), self.scan_samples.to_string());
        m
    }
}

fn map_from_flat(text: &str) -> ConfigResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value, got '{line}'", lineno + 1))?;
        let key = key.trim().to_string();
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(format!("line {}: duplicate key {key}", lineno + 1));
        }
    }
    Ok(map)
}

/// A JSON object of the same dotted keys; a sidecar wraps it under "config".
fn map_from_json(text: &str) -> ConfigResult<BTreeMap<String, String>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format!("invalid JSON config: {e}"))?;
    let top = value
        .as_object()
        .ok_or("JSON config must be an object of dotted keys")?;
    let obj = match top.get("config") {
        Some(inner) => inner
            .as_object()
            .ok_or("JSON config field 'config' must be an object")?,
        None => top,
    };
    let mut map = BTreeMap::new();
    for (key, v) in obj {
        let s = match v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::Bool(b) => b.to_string(),
            _ => return Err(format!("{key}: unsupported JSON value {v}")),
        };
        map.insert(key.clone(), s);
    }
    Ok(map)
}

fn take_initial(
    map: &mut BTreeMap<String, String>,
    n_qubits: usize,
) -> ConfigResult<Option<InitialKind>> {
    let kind = match map.remove("initial.kind") {
        Some(k) => k,
        None => {
            for stray in [
                "initial.a_re",
                "initial.a_im",
                "initial.sign",
                "initial.beta_re",
                "initial.beta_im",
                "initial.amplitudes",
            ] {
                if map.contains_key(stray) {
                    return Err(format!("{stray}: initial.kind is missing"));
                }
            }
            return Ok(None);
        }
    };
    let parsed = match kind.as_str() {
        "ground" => InitialKind::Ground,
        "basin" => InitialKind::Basin {
            a: Complex64::new(
                opt_f64(map, "initial.a_re")?.unwrap_or(0.0),
                opt_f64(map, "initial.a_im")?.unwrap_or(0.0),
            ),
        },
        "attractor" => {
            let sign = opt_i64(map, "initial.sign")?.unwrap_or(1);
            if sign != 1 && sign != -1 {
                return Err(format!("initial.sign: must be 1 or -1, got {sign}"));
            }
            InitialKind::Attractor { sign: sign as i32 }
        }
        "spin_coherent" => InitialKind::SpinCoherent {
            beta: Complex64::new(
                opt_f64(map, "initial.beta_re")?.unwrap_or(0.0),
                opt_f64(map, "initial.beta_im")?.unwrap_or(0.0),
            ),
        },
        "custom_dicke" => {
            let raw = map
                .remove("initial.amplitudes")
                .ok_or("initial.amplitudes: required for initial.kind=custom_dicke")?;
            let amps = parse_amplitudes(&raw)?;
            if amps.len() != n_qubits + 1 {
                return Err(format!(
                    "initial.amplitudes: expected {} entries for {} qubits, got {}",
                    n_qubits + 1,
                    n_qubits,
                    amps.len()
                ));
            }
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(format!(
                    "initial.amplitudes: norm {norm} is not 1 within 1e-9 \
                     (amplitudes are never renormalized)"
                ));
            }
            InitialKind::CustomDicke { amps }
        }
        other => {
            return Err(format!(
                "initial.kind: expected ground | basin | attractor | spin_coherent | \
                 custom_dicke, got '{other}'"
            ))
        }
    };
    // a key from a different kind means two kinds were described at once
    for (stray, owner) in [
        ("initial.a_re", "basin"),
        ("initial.a_im", "basin"),
        ("initial.sign", "attractor"),
        ("initial.beta_re", "spin_coherent"),
        ("initial.beta_im", "spin_coherent"),
        ("initial.amplitudes", "custom_dicke"),
    ] {
        if map.contains_key(stray) {
            return Err(format!(
                "{stray}: only valid for initial.kind={owner}, not '{kind}'"
            ));
        }
    }
    Ok(Some(parsed))
}

fn take_time(map: &mut BTreeMap<String, String>) -> ConfigResult<Option<TimeGrid>> {
    let start = opt_f64(map, "time.start")?;
    let stop = opt_f64(map, "time.stop")?;
    let steps = opt_usize(map, "time.steps")?;
    match (start, stop, steps) {
        (None, None, None) => Ok(None),
        (Some(start), Some(stop), Some(steps)) => {
            if !start.is_finite() || !stop.is_finite() {
                return Err("time.start/time.stop: must be finite".into());
            }
            if stop < start {
                return Err(format!(
                    "time.stop: must be >= time.start, got {stop} < {start}"
                ));
            }
            if steps < 1 {
                return Err("time.steps: must be >= 1".into());
            }
            Ok(Some(TimeGrid { start, stop, steps }))
        }
        _ => Err("time: start, stop and steps must be given together".into()),
    }
}

fn parse_amplitudes(raw: &str) -> ConfigResult<Vec<Complex64>> {
    raw.split(',')
        .map(|item| {
            let item = item.trim();
            let (re, im) = match item.split_once(':') {
                Some((re, im)) => (re.trim(), im.trim()),
                None => (item, "0"),
            };
            let re: f64 = re
                .parse()
                .map_err(|_| format!("initial.amplitudes: invalid number '{re}'"))?;
            let im: f64 = im
                .parse()
                .map_err(|_| format!("initial.amplitudes: invalid number '{im}'"))?;
            Ok(Complex64::new(re, im))
        })
        .collect()
}

fn req_f64(map: &mut BTreeMap<String, String>, key: &str) -> ConfigResult<f64> {
    opt_f64(map, key)?.ok_or_else(|| format!("{key}: required"))
}

fn opt_f64(map: &mut BTreeMap<String, String>, key: &str) -> ConfigResult<Option<f64>> {
    map.remove(key)
        .map(|v| {
            v.parse()
                .map_err(|_| format!("{key}: invalid number '{v}'"))
        })
        .transpose()
}

fn req_usize(map: &mut BTreeMap<String, String>, key: &str) -> ConfigResult<usize> {
    opt_usize(map, key)?.ok_or_else(|| format!("{key}: required"))
}

fn opt_usize(map: &mut BTreeMap<String, String>, key: &str) -> ConfigResult<Option<usize>> {
    map.remove(key)
        .map(|v| {
            v.parse()
                .map_err(|_| format!("{key}: invalid non-negative integer '{v}'"))
        })
        .transpose()
}

fn opt_i64(map: &mut BTreeMap<String, String>, key: &str) -> ConfigResult<Option<i64>> {
    map.remove(key)
        .map(|v| v.parse().map_err(|_| format!("{key}: invalid integer '{v}'")))
        .transpose()
}

fn opt_bool(map: &mut BTreeMap<String, String>, key: &str) -> ConfigResult<bool> {
    match map.remove(key) {
        None => Ok(false),
        Some(v) => match v.as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(format!("{key}: expected true or false, got '{v}'")),
        },
    }
}
