//! One function per subcommand, returning an error whose kind picks the
//! process exit code: config 2, Fock-space adequacy 3, verify failure 4.

use std::fmt;
use std::path::Path;

use cavrevive::attractor::{
    attractor_state, basin_samples, basin_state, cat_decomposition, characteristic_times,
    BasinParameter,
};
use cavrevive::engine::{build_propagator, evolve, evolve_series};
use cavrevive::hilbert::{
    coherent_field_amps, default_fock_cutoff, spin_coherent, symmetric_product, ModelParams,
    QubitPureState, SymmetricState,
};
use cavrevive::observables::{
    default_field_grid, default_sphere_grid, entropy, field_q_function, field_spectrum,
    mixed_tangle, pure_tangle, reduce_qubits, spectrum_entropy, spin_q_function,
    state_probability, symmetric_to_two_qubit, PhaseSpaceGrid, QubitDensityMatrix,
};
use cavrevive::oracle::{full_evolve_series, FullState};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::config::{InitialKind, OutputFormat, ScenarioConfig};
use crate::output::{sidecar_path, sidecar_text, write_text, Table};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Adequacy(String),
    Io(String),
    VerifyFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Adequacy(_) => 3,
            CliError::Io(_) => 1,
            CliError::VerifyFailed => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) | CliError::Adequacy(m) | CliError::Io(m) => f.write_str(m),
            CliError::VerifyFailed => f.write_str("verification failed"),
        }
    }
}

impl From<cavrevive::Error> for CliError {
    fn from(e: cavrevive::Error) -> Self {
        match e {
            cavrevive::Error::CutoffTooSmall { .. } => CliError::Adequacy(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<String> for CliError {
    fn from(m: String) -> Self {
        CliError::Config(m)
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfuncKind {
    Field,
    Spin,
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("cannot write {}: {e}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    write_text(out, text).map_err(|e| match out {
        Some(p) => io_err(p, e),
        None => CliError::Io(format!("cannot write to stdout: {e}")),
    })
}

fn emit_table(table: &Table, out: Option<&Path>, format: OutputFormat) -> CliResult<()> {
    let text = match format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => table.to_json(),
    };
    emit(out, &text)
}

fn emit_sidecar(
    cfg: &ScenarioConfig,
    cutoff_used: usize,
    format: OutputFormat,
    derived: serde_json::Value,
    out: Option<&Path>,
) -> CliResult<()> {
    if let Some(path) = out {
        let side = sidecar_path(path);
        let text = sidecar_text(&cfg.resolved(cutoff_used, format), derived);
        std::fs::write(&side, text).map_err(|e| io_err(&side, e))?;
    }
    Ok(())
}

/// Model with the configured cutoff, or the default raised to `min_cutoff`
/// when the config leaves the cutoff open.
fn model_params(cfg: &ScenarioConfig, min_cutoff: Option<usize>) -> CliResult<ModelParams> {
    let params = match cfg.fock_cutoff {
        Some(c) => ModelParams::with_cutoff(cfg.n_qubits, cfg.lambda, cfg.nbar, cfg.theta, c)?,
        None => {
            let c = default_fock_cutoff(cfg.nbar).max(min_cutoff.unwrap_or(0));
            ModelParams::with_cutoff(cfg.n_qubits, cfg.lambda, cfg.nbar, cfg.theta, c)?
        }
    };
    Ok(params)
}

fn register_state(cfg: &ScenarioConfig) -> CliResult<QubitPureState> {
    let kind = cfg
        .initial
        .as_ref()
        .ok_or_else(|| CliError::Config("initial.kind: required for this command".into()))?;
    let nq = cfg.n_qubits;
    let state = match kind {
        InitialKind::Ground => {
            let mut amps = vec![Complex64::ZERO; nq + 1];
            amps[0] = Complex64::ONE;
            QubitPureState { n_qubits: nq, amps }
        }
        InitialKind::Basin { a } => {
            let p = BasinParameter::new(nq, *a, cfg.theta)
                .map_err(|e| CliError::Config(format!("initial.a_re/a_im: {e}")))?;
            basin_state(&p)
        }
        InitialKind::Attractor { sign } => attractor_state(*sign, cfg.theta, nq)?,
        InitialKind::SpinCoherent { beta } => spin_coherent(*beta, nq)?,
        // norm was checked to 1e−9 at parse time and is kept as given
        InitialKind::CustomDicke { amps } => QubitPureState {
            n_qubits: nq,
            amps: amps.clone(),
        },
    };
    Ok(state)
}

fn initial_joint(cfg: &ScenarioConfig, params: &ModelParams) -> CliResult<SymmetricState> {
    let register = register_state(cfg)?;
    let field = coherent_field_amps(cfg.nbar, cfg.theta, params.fock_cutoff)?;
    Ok(symmetric_product(&register, &field)?)
}

fn times_json(params: &ModelParams) -> serde_json::Value {
    match characteristic_times(params) {
        Ok(t) => json!({
            "t_collapse": t.collapse,
            "t_revival": t.revival,
            "t_attractor": t.attractor,
            "t_attractor_minus": t.attractor_minus,
        }),
        Err(_) => serde_json::Value::Null,
    }
}

pub fn run_evolve(
    cfg: &ScenarioConfig,
    out: Option<&Path>,
    format: OutputFormat,
) -> CliResult<()> {
    let grid = cfg
        .time
        .ok_or_else(|| CliError::Config("time.start/stop/steps: required for evolve".into()))?;
    let flags = cfg.observables;
    if !flags.any() {
        return Err(CliError::Config(
            "observables: enable at least one column".into(),
        ));
    }
    if flags.tangle && cfg.n_qubits != 2 {
        return Err(CliError::Config(format!(
            "observables.tangle: requires model.n_qubits = 2, got {}",
            cfg.n_qubits
        )));
    }

    let params = model_params(cfg, None)?;
    let register = register_state(cfg)?;
    let psi0 = initial_joint(cfg, &params)?;
    let prop = build_propagator(&params)?;

    let lam_t = grid.points();
    let phys: Vec<f64> = lam_t.iter().map(|v| v / cfg.lambda).collect();
    let states = evolve_series(&prop, &psi0, &phys)?;

    let att_plus = attractor_state(1, cfg.theta, cfg.n_qubits)?;
    let att_minus = attractor_state(-1, cfg.theta, cfg.n_qubits)?;

    let mut columns = vec!["t"];
    for (on, name) in [
        (flags.p_initial, "p_initial"),
        (flags.p_attractor_plus, "p_attractor_plus"),
        (flags.p_attractor_minus, "p_attractor_minus"),
        (flags.entropy, "entropy"),
        (flags.tangle, "tangle"),
        (flags.leakage, "leakage"),
    ] {
        if on {
            columns.push(name);
        }
    }

    let rows: Vec<cavrevive::Result<Vec<f64>>> = lam_t
        .par_iter()
        .zip(&states)
        .map(|(&t, s)| {
            let mut row = vec![t];
            if flags.p_initial {
                row.push(state_probability(s, &register)?);
            }
            if flags.p_attractor_plus {
                row.push(state_probability(s, &att_plus)?);
            }
            if flags.p_attractor_minus {
                row.push(state_probability(s, &att_minus)?);
            }
            if flags.entropy {
                row.push(entropy(&reduce_qubits(s))?);
            }
            if flags.tangle {
                row.push(mixed_tangle(&symmetric_to_two_qubit(&reduce_qubits(s))?)?);
            }
            if flags.leakage {
                row.push(s.leakage());
            }
            Ok(row)
        })
        .collect();
    let rows: Vec<Vec<f64>> = rows.into_iter().collect::<cavrevive::Result<_>>()?;

    let table = Table { columns, rows };
    emit_table(&table, out, format)?;

    let revival_units = if cfg.nbar > 0.0 {
        let lam_t_r = std::f64::consts::TAU * cfg.nbar.sqrt();
        json!({"start": grid.start / lam_t_r, "stop": grid.stop / lam_t_r})
    } else {
        serde_json::Value::Null
    };
    let derived = json!({
        "fock_cutoff_used": params.fock_cutoff,
        "characteristic_times": times_json(&params),
        "lambda_t_over_t_revival": revival_units,
    });
    emit_sidecar(cfg, params.fock_cutoff, format, derived, out)
}

/// Fock levels needed before every probe of a disc of radius `r` passes the
/// Poisson-tail adequacy check in field_q_function.
fn probe_cutoff(r: f64) -> usize {
    (r * r + 8.0 * r + 25.0).ceil() as usize
}

pub fn run_qfunc(
    cfg: &ScenarioConfig,
    out: Option<&Path>,
    format: OutputFormat,
    lam_time: f64,
    kind: QfuncKind,
    grid_n: Option<usize>,
) -> CliResult<()> {
    if !lam_time.is_finite() {
        return Err(CliError::Config("--time: must be finite".into()));
    }
    if grid_n.is_some_and(|n| n < 2) {
        return Err(CliError::Config("--grid: need at least 2 points".into()));
    }

    let min_cutoff = match kind {
        QfuncKind::Field => {
            let half = 1.6 * cfg.nbar.sqrt().max(1.0);
            Some(probe_cutoff(half * std::f64::consts::SQRT_2))
        }
        QfuncKind::Spin => None,
    };
    let params = model_params(cfg, min_cutoff)?;
    let psi0 = initial_joint(cfg, &params)?;
    let prop = build_propagator(&params)?;
    let psi = evolve(&prop, &psi0, lam_time / cfg.lambda)?;

    let (table, grid_meta) = match kind {
        QfuncKind::Field => {
            let n = grid_n.unwrap_or(201);
            let probes = default_field_grid(cfg.nbar, n);
            let q = field_q_function(&psi, &probes)?;
            let PhaseSpaceGrid::Field { points, values } = &q else {
                unreachable!("field kind yields a field grid");
            };
            let rows = points
                .iter()
                .zip(values)
                .map(|(b, v)| vec![b.re, b.im, *v])
                .collect();
            let table = Table {
                columns: vec!["re_beta", "im_beta", "q"],
                rows,
            };
            (table, json!({"kind": "field", "points_per_axis": n}))
        }
        QfuncKind::Spin => {
            let n_polar = grid_n.unwrap_or(181);
            let n_azimuth = 2 * n_polar - 1;
            let probes = default_sphere_grid(n_polar, n_azimuth);
            let q = spin_q_function(&reduce_qubits(&psi), &probes)?;
            let PhaseSpaceGrid::Spin { points, values } = &q else {
                unreachable!("spin kind yields a sphere grid");
            };
            let rows = points
                .iter()
                .zip(values)
                .map(|((th, ph), v)| vec![*th, *ph, *v])
                .collect();
            let table = Table {
                columns: vec!["theta_s", "phi_s", "q_s"],
                rows,
            };
            (
                table,
                json!({"kind": "spin", "n_polar": n_polar, "n_azimuth": n_azimuth}),
            )
        }
    };
    emit_table(&table, out, format)?;

    let derived = json!({
        "fock_cutoff_used": params.fock_cutoff,
        "characteristic_times": times_json(&params),
        "qfunc": {
            "lambda_t": lam_time,
            "grid": grid_meta,
            "radial_scale": cfg.nbar.sqrt(),
        },
    });
    emit_sidecar(cfg, params.fock_cutoff, format, derived, out)
}

pub fn run_times(cfg: &ScenarioConfig, out: Option<&Path>, format: OutputFormat) -> CliResult<()> {
    let params = model_params(cfg, None)?;
    let t = characteristic_times(&params)?;
    match format {
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(&json!({
                "t_collapse": t.collapse,
                "t_revival": t.revival,
                "t_attractor": t.attractor,
                "t_attractor_minus": t.attractor_minus,
            }))
            .expect("times serialization");
            text.push('\n');
            emit(out, &text)
        }
        OutputFormat::Csv => {
            let table = Table {
                columns: vec!["t_collapse", "t_revival", "t_attractor", "t_attractor_minus"],
                rows: vec![vec![t.collapse, t.revival, t.attractor, t.attractor_minus]],
            };
            emit_table(&table, out, format)
        }
    }
}

pub fn run_basin_scan(
    cfg: &ScenarioConfig,
    out: Option<&Path>,
    format: OutputFormat,
) -> CliResult<()> {
    if cfg.n_qubits != 2 {
        return Err(CliError::Config(format!(
            "model.n_qubits: basin-scan tabulates the two-qubit tangle and needs 2, got {}",
            cfg.n_qubits
        )));
    }
    let params = model_params(cfg, None)?;
    let t_star = characteristic_times(&params)?.attractor;
    let field = coherent_field_amps(cfg.nbar, cfg.theta, params.fock_cutoff)?;
    let prop = build_propagator(&params)?;
    let target = attractor_state(1, cfg.theta, 2)?;

    let rows: Vec<cavrevive::Result<Vec<f64>>> = basin_samples(2, cfg.scan_samples)
        .par_iter()
        .map(|&a| {
            let p = BasinParameter::new(2, a, cfg.theta)?;
            let q0 = basin_state(&p);
            let tau = pure_tangle(&q0)?;
            let at = evolve(&prop, &symmetric_product(&q0, &field)?, t_star)?;
            Ok(vec![
                a.re,
                a.im,
                tau,
                state_probability(&at, &target)?,
                entropy(&reduce_qubits(&at))?,
            ])
        })
        .collect();
    let rows: Vec<Vec<f64>> = rows.into_iter().collect::<cavrevive::Result<_>>()?;

    let table = Table {
        columns: vec!["re_a", "im_a", "tangle", "p_attractor_plus", "entropy"],
        rows,
    };
    emit_table(&table, out, format)?;

    let derived = json!({
        "fock_cutoff_used": params.fock_cutoff,
        "characteristic_times": times_json(&params),
        "scan": {"samples": cfg.scan_samples},
    });
    emit_sidecar(cfg, params.fock_cutoff, format, derived, out)
}

struct Check {
    name: &'static str,
    tolerance: f64,
    outcome: Result<f64, String>,
}

impl Check {
    fn passed(&self) -> bool {
        matches!(&self.outcome, Ok(v) if *v <= self.tolerance)
    }

    fn to_json(&self) -> serde_json::Value {
        match &self.outcome {
            Ok(v) => json!({
                "name": self.name,
                "measured": v,
                "tolerance": self.tolerance,
                "pass": self.passed(),
            }),
            Err(e) => json!({
                "name": self.name,
                "error": e,
                "tolerance": self.tolerance,
                "pass": false,
            }),
        }
    }
}

/// splitmix64 stream; a fixed self-check needs repeatable draws, not a
/// seedable RNG dependency in the binary.
struct Draws(u64);

impl Draws {
    fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        (z ^ (z >> 31)) as f64 / (u64::MAX as f64 + 1.0)
    }

    fn next_complex(&mut self) -> Complex64 {
        Complex64::new(2.0 * self.next_f64() - 1.0, 2.0 * self.next_f64() - 1.0)
    }

    fn unit_amps(&mut self, dim: usize) -> Vec<Complex64> {
        let mut amps: Vec<Complex64> = (0..dim).map(|_| self.next_complex()).collect();
        let scale = amps
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
            .recip();
        for a in &mut amps {
            *a *= scale;
        }
        amps
    }

    fn symmetric_state(&mut self, nq: usize, cutoff: usize) -> SymmetricState {
        let amps = self.unit_amps((nq + 1) * (cutoff + 1));
        SymmetricState::new(nq, cutoff, amps).expect("dimensions agree")
    }
}

fn check_oracle(cutoff_override: Option<usize>) -> Result<f64, String> {
    let nbar = 10.0;
    let cutoff = cutoff_override.unwrap_or_else(|| default_fock_cutoff(nbar));
    // the requested cutoff must hold the coherent field it will carry
    coherent_field_amps(nbar, 0.2, cutoff).map_err(|e| e.to_string())?;
    let mut draws = Draws(0x5eed);
    let mut worst = 0.0f64;
    for nq in 1..=3usize {
        let params = ModelParams::with_cutoff(nq, 1.0, nbar, 0.2, cutoff)
            .map_err(|e| e.to_string())?;
        let prop = build_propagator(&params).map_err(|e| e.to_string())?;
        for k in 0..5 {
            let psi0 = draws.symmetric_state(nq, params.fock_cutoff);
            let times: Vec<f64> = (1..=5).map(|i| 2.3 * i as f64 + 0.1 * k as f64).collect();
            let fast = evolve_series(&prop, &psi0, &times).map_err(|e| e.to_string())?;
            let full0 = FullState::from_symmetric(&psi0).map_err(|e| e.to_string())?;
            let slow =
                full_evolve_series(&params, &full0, &times).map_err(|e| e.to_string())?;
            for (f, s) in fast.iter().zip(&slow) {
                let f = FullState::from_symmetric(f).map_err(|e| e.to_string())?;
                let diff: f64 = f
                    .amps
                    .iter()
                    .zip(&s.amps)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(diff);
            }
        }
    }
    Ok(worst)
}

fn check_cat_reconstruction() -> Result<f64, String> {
    let mut draws = Draws(0xcafe);
    let mut worst = 0.0f64;
    for nq in 2..=12usize {
        let r_max = BasinParameter::max_modulus(nq);
        for _ in 0..100 {
            let a = Complex64::from_polar(
                r_max * draws.next_f64().sqrt(),
                std::f64::consts::TAU * draws.next_f64(),
            );
            let theta = std::f64::consts::PI * (2.0 * draws.next_f64() - 1.0);
            let p = BasinParameter::new(nq, a, theta).map_err(|e| e.to_string())?;
            let psi = basin_state(&p);
            let rec = cat_decomposition(&p).map_err(|e| e.to_string())?.reconstruct();
            let err = psi
                .amps
                .iter()
                .zip(&rec)
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            worst = worst.max(err);
        }
    }
    Ok(worst)
}

fn check_schmidt_symmetry() -> Result<f64, String> {
    let mut draws = Draws(0x5c4);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let psi = draws.symmetric_state(3, 40);
        let s_q = entropy(&reduce_qubits(&psi)).map_err(|e| e.to_string())?;
        let s_f = spectrum_entropy(&field_spectrum(&psi)).map_err(|e| e.to_string())?;
        worst = worst.max((s_q - s_f).abs());
    }
    Ok(worst)
}

fn check_tangle_consistency() -> Result<f64, String> {
    let mut draws = Draws(0x7a6);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let reg = QubitPureState {
            n_qubits: 2,
            amps: draws.unit_amps(3),
        };
        let rho = nalgebra_outer(&reg.amps);
        let dm = QubitDensityMatrix::from_matrix(2, rho).map_err(|e| e.to_string())?;
        let tau_mixed =
            mixed_tangle(&symmetric_to_two_qubit(&dm).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
        let tau_pure = pure_tangle(&reg).map_err(|e| e.to_string())?;
        worst = worst.max((tau_mixed - tau_pure).abs());
    }
    Ok(worst)
}

fn nalgebra_outer(amps: &[Complex64]) -> nalgebra::DMatrix<Complex64> {
    nalgebra::DMatrix::from_fn(amps.len(), amps.len(), |i, j| amps[i] * amps[j].conj())
}

fn check_conservation(cutoff_override: Option<usize>) -> Result<f64, String> {
    let nbar = 10.0;
    let cutoff = cutoff_override.unwrap_or_else(|| default_fock_cutoff(nbar));
    coherent_field_amps(nbar, 0.0, cutoff).map_err(|e| e.to_string())?;
    let params = ModelParams::with_cutoff(2, 1.0, nbar, 0.0, cutoff).map_err(|e| e.to_string())?;
    let field =
        coherent_field_amps(nbar, 0.0, params.fock_cutoff).map_err(|e| e.to_string())?;
    let mut ground = vec![Complex64::ZERO; 3];
    ground[0] = Complex64::ONE;
    let register = QubitPureState {
        n_qubits: 2,
        amps: ground,
    };
    let psi0 = symmetric_product(&register, &field).map_err(|e| e.to_string())?;
    let prop = build_propagator(&params).map_err(|e| e.to_string())?;
    let t_r = characteristic_times(&params).map_err(|e| e.to_string())?.revival;
    let times: Vec<f64> = (0..100).map(|i| 2.0 * t_r * i as f64 / 99.0).collect();
    let e0 = psi0.mean_excitation();
    let mut worst = 0.0f64;
    for s in evolve_series(&prop, &psi0, &times).map_err(|e| e.to_string())? {
        worst = worst.max((s.norm() - 1.0).abs());
        worst = worst.max((s.mean_excitation() - e0).abs() / e0);
    }
    Ok(worst)
}

fn check_attractor_probability(cutoff_override: Option<usize>) -> Result<f64, String> {
    let nbar = 50.0;
    let cutoff = cutoff_override.unwrap_or_else(|| default_fock_cutoff(nbar));
    coherent_field_amps(nbar, 0.0, cutoff).map_err(|e| e.to_string())?;
    let params = ModelParams::with_cutoff(1, 1.0, nbar, 0.0, cutoff).map_err(|e| e.to_string())?;
    let field =
        coherent_field_amps(nbar, 0.0, params.fock_cutoff).map_err(|e| e.to_string())?;
    let mut ground = vec![Complex64::ZERO; 2];
    ground[0] = Complex64::ONE;
    let register = QubitPureState {
        n_qubits: 1,
        amps: ground,
    };
    let psi0 = symmetric_product(&register, &field).map_err(|e| e.to_string())?;
    let prop = build_propagator(&params).map_err(|e| e.to_string())?;
    let t_star = characteristic_times(&params)
        .map_err(|e| e.to_string())?
        .attractor;
    let at = evolve(&prop, &psi0, t_star).map_err(|e| e.to_string())?;
    let p = state_probability(&at, &attractor_state(1, 0.0, 1).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    // frozen regression value for |g⟩⊗|α⟩, n̄ = 50, at t_r/2
    Ok((p - 0.995414969653267).abs())
}

pub fn run_verify(out: Option<&Path>) -> CliResult<()> {
    let cutoff_override = match std::env::var("CAVREVIVE_VERIFY_CUTOFF") {
        Ok(v) => Some(v.parse::<usize>().map_err(|_| {
            CliError::Config(format!(
                "CAVREVIVE_VERIFY_CUTOFF must be a non-negative integer, got '{v}'"
            ))
        })?),
        Err(_) => None,
    };

    let checks = vec![
        Check {
            name: "oracle_equivalence",
            tolerance: 1e-9,
            outcome: check_oracle(cutoff_override),
        },
        Check {
            name: "cat_reconstruction",
            tolerance: 1e-12,
            outcome: check_cat_reconstruction(),
        },
        Check {
            name: "schmidt_symmetry",
            tolerance: 1e-8,
            outcome: check_schmidt_symmetry(),
        },
        Check {
            name: "tangle_pure_vs_mixed",
            tolerance: 1e-8,
            outcome: check_tangle_consistency(),
        },
        Check {
            name: "conservation",
            tolerance: 1e-9,
            outcome: check_conservation(cutoff_override),
        },
        Check {
            name: "attractor_probability",
            tolerance: 1e-6,
            outcome: check_attractor_probability(cutoff_override),
        },
    ];

    let all_pass = checks.iter().all(Check::passed);
    let mut text = serde_json::to_string_pretty(&json!({
        "pass": all_pass,
        "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
    }))
    .expect("report serialization");
    text.push('\n');
    emit(out, &text)?;

    if all_pass {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}
