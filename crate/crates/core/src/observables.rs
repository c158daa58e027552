//! Reductions and every plotted quantity: probabilities, von Neumann
//! entropy, pure/mixed tangle, field and spin Husimi Q functions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{ln_factorials, sqrt_binomial, QubitPureState, SymmetricState};

/// Reduced register state ρ^q = Tr_F |Ψ⟩⟨Ψ| in the Dicke basis,
/// ascending N_e.
#[derive(Debug, Clone)]
pub struct QubitDensityMatrix {
    pub n_qubits: usize,
    pub rho: DMatrix<Complex64>,
}

impl QubitDensityMatrix {
    /// Wraps a matrix, checking shape, Hermiticity (1e−12) and unit trace
    /// (1e−10).
    pub fn from_matrix(n_qubits: usize, rho: DMatrix<Complex64>) -> Result<Self> {
        let d = n_qubits + 1;
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "expected {d}x{d} density matrix, got {}x{}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let herm = (&rho - rho.adjoint()).norm();
        if herm > 1e-12 {
            return Err(Error::InvalidDensity(format!(
                "Hermiticity residual {herm:.3e}"
            )));
        }
        let tr: Complex64 = rho.diagonal().iter().sum();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        Ok(Self { n_qubits, rho })
    }

    /// Eigenvalues in descending order.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut w: Vec<f64> = self
            .rho
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        w.sort_by(|a, b| b.total_cmp(a));
        w
    }
}

/// Two-qubit state in the product basis |ee⟩, |eg⟩, |ge⟩, |gg⟩.
#[derive(Debug, Clone)]
pub struct TwoQubitDensityMatrix {
    pub rho: DMatrix<Complex64>,
}

impl TwoQubitDensityMatrix {
    pub fn from_matrix(rho: DMatrix<Complex64>) -> Result<Self> {
        if rho.nrows() != 4 || rho.ncols() != 4 {
            return Err(Error::DimensionMismatch(format!(
                "expected 4x4 density matrix, got {}x{}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let herm = (&rho - rho.adjoint()).norm();
        if herm > 1e-12 {
            return Err(Error::InvalidDensity(format!(
                "Hermiticity residual {herm:.3e}"
            )));
        }
        let tr: Complex64 = rho.diagonal().iter().sum();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        Ok(Self { rho })
    }
}

/// Traces out the field: ρ[m,m′] = Σ_n ψ[m,n] ψ*[m′,n].
pub fn reduce_qubits(psi: &SymmetricState) -> QubitDensityMatrix {
    let d = psi.n_qubits + 1;
    let mut rho = DMatrix::<Complex64>::zeros(d, d);
    for m in 0..d {
        let row_m = psi.field_slice(m);
        for mp in m..d {
            let row_mp = psi.field_slice(mp);
            let mut acc = Complex64::ZERO;
            for n in 0..row_m.len() {
                acc += row_m[n] * row_mp[n].conj();
            }
            rho[(m, mp)] = acc;
            if mp != m {
                rho[(mp, m)] = acc.conj();
            }
        }
    }
    QubitDensityMatrix {
        n_qubits: psi.n_qubits,
        rho,
    }
}

/// −Σ pᵢ ln pᵢ from an eigenvalue list. Values in [−1e−10, 1e−10] are
/// truncation noise and count as zero; anything below −1e−8 is rejected.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &p in eigenvalues {
        if p < -1e-8 {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {p:.3e}")));
        }
        if p > 1e-10 {
            s -= p * p.ln();
        }
    }
    Ok(s)
}

/// Von Neumann entropy S = −Tr ρ ln ρ, in nats.
pub fn entropy(rho: &QubitDensityMatrix) -> Result<f64> {
    spectrum_entropy(&rho.spectrum())
}

/// ⟨target|ρ^q|target⟩ without forming ρ^q: Σ_n |⟨target|ψ(·,n)⟩|².
pub fn state_probability(psi: &SymmetricState, target: &QubitPureState) -> Result<f64> {
    if psi.n_qubits != target.n_qubits {
        return Err(Error::DimensionMismatch(format!(
            "state has N_q = {}, target has N_q = {}",
            psi.n_qubits, target.n_qubits
        )));
    }
    let d = psi.fock_cutoff + 1;
    let mut acc = 0.0;
    for n in 0..d {
        let mut inner = Complex64::ZERO;
        for ne in 0..=psi.n_qubits {
            inner += target.amps[ne].conj() * psi.amps[ne * d + n];
        }
        acc += inner.norm_sqr();
    }
    Ok(acc.min(1.0))
}

/// Tangle τ = 4|C_ee C_gg − C_eg C_ge|² of a symmetric two-qubit pure
/// state, with C_eg = C_ge = amps[N_e=1]/√2.
pub fn pure_tangle(state: &QubitPureState) -> Result<f64> {
    if state.n_qubits != 2 {
        return Err(Error::WrongQubitCount(state.n_qubits));
    }
    let c_gg = state.amps[0];
    let c_sym = state.amps[1] * std::f64::consts::FRAC_1_SQRT_2;
    let c_ee = state.amps[2];
    let tau = 4.0 * (c_ee * c_gg - c_sym * c_sym).norm_sqr();
    Ok(tau.clamp(0.0, 1.0))
}

/// Embeds the Dicke 3×3 register state into the two-qubit product basis,
/// |N_e=1⟩ = (|eg⟩+|ge⟩)/√2. Exact for symmetric dynamics: the singlet
/// row and column stay zero.
pub fn symmetric_to_two_qubit(rho: &QubitDensityMatrix) -> Result<TwoQubitDensityMatrix> {
    if rho.n_qubits != 2 {
        return Err(Error::WrongQubitCount(rho.n_qubits));
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    // rows: ee, eg, ge, gg; columns: N_e = 0, 1, 2
    let mut map = DMatrix::<Complex64>::zeros(4, 3);
    map[(0, 2)] = Complex64::ONE;
    map[(1, 1)] = Complex64::new(r, 0.0);
    map[(2, 1)] = Complex64::new(r, 0.0);
    map[(3, 0)] = Complex64::ONE;
    let rho4 = &map * &rho.rho * map.adjoint();
    TwoQubitDensityMatrix::from_matrix(rho4)
}

/// Mixed-state tangle: the squared Wootters concurrence
/// C = max(0, √μ₁ − √μ₂ − √μ₃ − √μ₄), μᵢ the descending eigenvalues of
/// ρρ̃ with ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y). Computed through the Hermitian
/// form √ρ ρ̃ √ρ, which has the same spectrum.
pub fn mixed_tangle(rho: &TwoQubitDensityMatrix) -> Result<f64> {
    let eig = rho.rho.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|&w| w < -1e-8) {
        return Err(Error::InvalidDensity(format!(
            "negative eigenvalue {:.3e}",
            eig.eigenvalues.min()
        )));
    }
    // Eigenvalue noise εₙ of order 1e−16 would turn into √εₙ ~ 1e−8 in the
    // square root, polluting the null space; weights that small carry no
    // concurrence and are dropped outright.
    let sqrt_w = DVector::from_iterator(
        4,
        eig.eigenvalues
            .iter()
            .map(|&w| if w > 1e-13 { w.sqrt() } else { 0.0 }),
    );
    let sqrt_rho = &eig.eigenvectors
        * DMatrix::from_diagonal(&sqrt_w.map(|x| Complex64::new(x, 0.0)))
        * eig.eigenvectors.adjoint();

    // σ_y⊗σ_y in the (ee, eg, ge, gg) ordering: antidiagonal (−1, 1, 1, −1)
    let mut yy = DMatrix::<Complex64>::zeros(4, 4);
    yy[(0, 3)] = -Complex64::ONE;
    yy[(1, 2)] = Complex64::ONE;
    yy[(2, 1)] = Complex64::ONE;
    yy[(3, 0)] = -Complex64::ONE;
    let rho_tilde = &yy * rho.rho.map(|z| z.conj()) * &yy;

    let m = &sqrt_rho * rho_tilde * &sqrt_rho;
    let mut mu: Vec<f64> = m
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|&w| if w > 1e-13 { w.sqrt() } else { 0.0 })
        .collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    let c = (mu[0] - mu[1] - mu[2] - mu[3]).max(0.0);
    Ok((c * c).clamp(0.0, 1.0))
}

/// Eigenvalues of the field reduced state, descending. The nonzero part
/// of the field spectrum equals that of the (N_q+1)² Gram matrix
/// G[m,m′] = ⟨φ_m|φ_m′⟩ of the Dicke-conditioned field slices, so the
/// (n_max+1)² matrix is never formed.
pub fn field_spectrum(psi: &SymmetricState) -> Vec<f64> {
    let mut w: Vec<f64> = field_gram(psi)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    w.sort_by(|a, b| b.total_cmp(a));
    w
}

/// Largest-weight eigenstate of the field reduced state, as
/// (weight, normalized Fock vector).
pub fn dominant_field_state(psi: &SymmetricState) -> (f64, Vec<Complex64>) {
    let eig = field_gram(psi).symmetric_eigen();
    let mut top = 0;
    for k in 1..eig.eigenvalues.len() {
        if eig.eigenvalues[k] > eig.eigenvalues[top] {
            top = k;
        }
    }
    let w = eig.eigenvectors.column(top);
    let d = psi.fock_cutoff + 1;
    let mut v = vec![Complex64::ZERO; d];
    for m in 0..=psi.n_qubits {
        let slice = psi.field_slice(m);
        let wm = w[m];
        for n in 0..d {
            v[n] += wm * slice[n];
        }
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in &mut v {
            *z /= norm;
        }
    }
    (eig.eigenvalues[top], v)
}

fn field_gram(psi: &SymmetricState) -> DMatrix<Complex64> {
    let d = psi.n_qubits + 1;
    let mut g = DMatrix::<Complex64>::zeros(d, d);
    for m in 0..d {
        let row_m = psi.field_slice(m);
        for mp in m..d {
            let row_mp = psi.field_slice(mp);
            let mut acc = Complex64::ZERO;
            for n in 0..row_m.len() {
                acc += row_m[n].conj() * row_mp[n];
            }
            g[(m, mp)] = acc;
            if mp != m {
                g[(mp, m)] = acc.conj();
            }
        }
    }
    g
}

/// Phase-space sample set: probe coordinates with Q values.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseSpaceGrid {
    /// Complex-plane probes β with Q(β) = ⟨β|ρ_F|β⟩/π.
    Field {
        points: Vec<Complex64>,
        values: Vec<f64>,
    },
    /// Sphere probes (polar, azimuth) with
    /// Q_s = (N_q+1)/(4π) ⟨Ω|ρ^q|Ω⟩.
    Spin {
        points: Vec<(f64, f64)>,
        values: Vec<f64>,
    },
}

impl PhaseSpaceGrid {
    pub fn values(&self) -> &[f64] {
        match self {
            PhaseSpaceGrid::Field { values, .. } | PhaseSpaceGrid::Spin { values, .. } => values,
        }
    }
}

/// Square field-grid probes covering |β| ≤ 1.6√n̄, re fastest, n×n points.
pub fn default_field_grid(nbar: f64, n: usize) -> Vec<Complex64> {
    let r = 1.6 * nbar.sqrt().max(1.0);
    let step = if n > 1 { 2.0 * r / (n - 1) as f64 } else { 0.0 };
    let mut pts = Vec::with_capacity(n * n);
    for i in 0..n {
        let im = -r + step * i as f64;
        for j in 0..n {
            let re = -r + step * j as f64;
            pts.push(Complex64::new(re, im));
        }
    }
    pts
}

/// Equiangular sphere probes: polar 0…π (rows), azimuth 0…2π inclusive
/// (columns, so the seam is duplicated for plotting), azimuth fastest.
pub fn default_sphere_grid(n_polar: usize, n_azimuth: usize) -> Vec<(f64, f64)> {
    use std::f64::consts::PI;
    let dp = if n_polar > 1 { PI / (n_polar - 1) as f64 } else { 0.0 };
    let da = if n_azimuth > 1 { 2.0 * PI / (n_azimuth - 1) as f64 } else { 0.0 };
    let mut pts = Vec::with_capacity(n_polar * n_azimuth);
    for i in 0..n_polar {
        for j in 0..n_azimuth {
            pts.push((dp * i as f64, da * j as f64));
        }
    }
    pts
}

/// Husimi Q of the field, Q(β) = (1/π) Σ_m |⟨β|φ_m⟩|², evaluated without
/// forming ρ_F. The largest probe must itself fit under the Fock cutoff.
pub fn field_q_function(psi: &SymmetricState, grid: &[Complex64]) -> Result<PhaseSpaceGrid> {
    let n_max = psi.fock_cutoff;
    let lf = ln_factorials(n_max);
    let worst = grid.iter().map(|b| b.norm_sqr()).fold(0.0, f64::max);
    let deficit = probe_truncation_deficit(worst, &lf);
    if deficit >= 1e-8 {
        return Err(Error::CutoffTooSmall { leakage: deficit });
    }

    let nq = psi.n_qubits;
    let d = n_max + 1;
    let values: Vec<f64> = grid
        .par_iter()
        .map(|beta| {
            // ⟨β|n⟩ = e^{−|β|²/2} (β*)ⁿ/√n!
            let b2 = beta.norm_sqr();
            let arg = -beta.arg();
            let ln_b = 0.5 * b2.ln();
            let mut q = 0.0;
            for m in 0..=nq {
                let slice = &psi.amps[m * d..(m + 1) * d];
                let mut inner = Complex64::ZERO;
                if b2 == 0.0 {
                    inner = slice[0];
                } else {
                    for n in 0..d {
                        let ln_mag = -0.5 * b2 + n as f64 * ln_b - 0.5 * lf[n];
                        if ln_mag < -340.0 {
                            continue;
                        }
                        inner += Complex64::from_polar(ln_mag.exp(), arg * n as f64) * slice[n];
                    }
                }
                q += inner.norm_sqr();
            }
            q / std::f64::consts::PI
        })
        .collect();

    Ok(PhaseSpaceGrid::Field {
        points: grid.to_vec(),
        values,
    })
}

/// Probability a coherent probe of mean |β|² loses beyond the cutoff.
fn probe_truncation_deficit(b2: f64, lf: &[f64]) -> f64 {
    if b2 == 0.0 {
        return 0.0;
    }
    let ln_b = 0.5 * b2.ln();
    let mut norm = 0.0;
    for (n, lfn) in lf.iter().enumerate() {
        let ln_p = -b2 + 2.0 * (n as f64 * ln_b) - lfn;
        norm += ln_p.exp();
    }
    (1.0 - norm).max(0.0)
}

/// Spin Q function Q_s(θ_s, φ_s) = (N_q+1)/(4π) ⟨Ω|ρ|Ω⟩ with |Ω⟩ the spin
/// coherent state at that sphere point: β = tan(θ_s/2) e^{−iφ_s}, north
/// pole (θ_s = 0) = all qubits excited. Normalized so the sphere integral
/// is 1.
pub fn spin_q_function(rho: &QubitDensityMatrix, grid: &[(f64, f64)]) -> Result<PhaseSpaceGrid> {
    let nq = rho.n_qubits;
    let sqrt_c: Vec<f64> = (0..=nq).map(|ne| sqrt_binomial(nq, ne)).collect();
    let scale = (nq as f64 + 1.0) / (4.0 * std::f64::consts::PI);

    let values: Vec<f64> = grid
        .par_iter()
        .map(|&(polar, azimuth)| {
            let (sin_h, cos_h) = (0.5 * polar).sin_cos();
            let mut omega = Vec::with_capacity(nq + 1);
            for ne in 0..=nq {
                let k = nq - ne;
                let mag = sqrt_c[ne] * cos_h.powi(ne as i32) * sin_h.powi(k as i32);
                omega.push(Complex64::from_polar(mag, -azimuth * k as f64));
            }
            let mut acc = Complex64::ZERO;
            for i in 0..=nq {
                for j in 0..=nq {
                    acc += omega[i].conj() * rho.rho[(i, j)] * omega[j];
                }
            }
            (scale * acc.re).max(0.0)
        })
        .collect();

    Ok(PhaseSpaceGrid::Spin {
        points: grid.to_vec(),
        values,
    })
}
