//! Brute-force reference in the full 2^{N_q} ⊗ Fock space.
//!
//! Nothing here assumes permutation symmetry or excitation conservation:
//! the interaction is assembled from per-qubit σᵢ± and the dense matrix
//! is diagonalized whole. That makes this path slow and small (N_q ≤ 3)
//! but an independent check on the block engine, and it can hold
//! non-symmetric states such as the singlet that the engine cannot.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{expand_symmetric_to_full, ModelParams, SymmetricState};
use crate::observables::{spectrum_entropy, TwoQubitDensityMatrix};

const MAX_QUBITS: usize = 3;
const MAX_CUTOFF: usize = 300;

/// State over every qubit bitstring: amps[bits·(n_max+1) + n], bit i set
/// when qubit i is excited.
#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    pub n_qubits: usize,
    pub fock_cutoff: usize,
    pub amps: Vec<Complex64>,
}

impl FullState {
    pub fn new(n_qubits: usize, fock_cutoff: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_size(n_qubits, fock_cutoff)?;
        let dim = (1usize << n_qubits) * (fock_cutoff + 1);
        if amps.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {dim} amplitudes, got {}",
                amps.len()
            )));
        }
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm2.sqrt() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParams(format!(
                "full state norm {} differs from 1 by more than 1e-10",
                norm2.sqrt()
            )));
        }
        Ok(Self {
            n_qubits,
            fock_cutoff,
            amps,
        })
    }

    /// Spreads a symmetric-subspace state over its bitstrings.
    pub fn from_symmetric(psi: &SymmetricState) -> Result<Self> {
        check_size(psi.n_qubits, psi.fock_cutoff)?;
        Self::new(psi.n_qubits, psi.fock_cutoff, expand_symmetric_to_full(psi)?)
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn overlap(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn check_size(n_qubits: usize, fock_cutoff: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::SizeGuard(format!(
            "oracle supports 1 <= n_qubits <= {MAX_QUBITS}, got {n_qubits}"
        )));
    }
    if fock_cutoff > MAX_CUTOFF {
        return Err(Error::SizeGuard(format!(
            "oracle supports n_max <= {MAX_CUTOFF}, got {fock_cutoff}"
        )));
    }
    Ok(())
}

/// V|ψ⟩ with V = λ Σᵢ (â σᵢ⁺ + â† σᵢ⁻), no normalization of the result.
/// The Fock ladder is truncated symmetrically, so ⟨φ|Vψ⟩ = ⟨Vφ|ψ⟩ holds
/// exactly on the retained levels.
pub fn full_hamiltonian_apply(params: &ModelParams, state: &FullState) -> Result<FullState> {
    if params.n_qubits != state.n_qubits || params.fock_cutoff != state.fock_cutoff {
        return Err(Error::DimensionMismatch(
            "params and state disagree on N_q or n_max".into(),
        ));
    }
    check_size(state.n_qubits, state.fock_cutoff)?;
    let d = state.fock_cutoff + 1;
    let lam = params.coupling;
    let mut out = vec![Complex64::ZERO; state.amps.len()];
    for bits in 0..(1usize << state.n_qubits) {
        for n in 0..d {
            let amp = state.amps[bits * d + n];
            if amp.re == 0.0 && amp.im == 0.0 {
                continue;
            }
            for i in 0..state.n_qubits {
                let mask = 1usize << i;
                if bits & mask == 0 {
                    // â σᵢ⁺: absorb a photon, excite qubit i
                    if n >= 1 {
                        out[(bits | mask) * d + (n - 1)] += amp * lam * (n as f64).sqrt();
                    }
                } else if n + 1 < d {
                    // â† σᵢ⁻: de-excite qubit i, emit a photon
                    out[(bits & !mask) * d + (n + 1)] += amp * lam * ((n + 1) as f64).sqrt();
                }
            }
        }
    }
    Ok(FullState {
        n_qubits: state.n_qubits,
        fock_cutoff: state.fock_cutoff,
        amps: out,
    })
}

fn dense_interaction(params: &ModelParams) -> DMatrix<f64> {
    let nq = params.n_qubits;
    let d = params.fock_cutoff + 1;
    let dim = (1usize << nq) * d;
    let lam = params.coupling;
    let mut v = DMatrix::<f64>::zeros(dim, dim);
    for bits in 0..(1usize << nq) {
        for n in 0..d {
            let col = bits * d + n;
            for i in 0..nq {
                let mask = 1usize << i;
                if bits & mask == 0 {
                    if n >= 1 {
                        v[((bits | mask) * d + n - 1, col)] += lam * (n as f64).sqrt();
                    }
                } else if n + 1 < d {
                    v[((bits & !mask) * d + n + 1, col)] += lam * ((n + 1) as f64).sqrt();
                }
            }
        }
    }
    v
}

/// Evolves by dense eigendecomposition of the full interaction matrix.
pub fn full_evolve(params: &ModelParams, psi0: &FullState, t: f64) -> Result<FullState> {
    Ok(full_evolve_series(params, psi0, &[t])?.pop().expect("one state"))
}

/// Same dense propagation over several times, diagonalizing once.
pub fn full_evolve_series(
    params: &ModelParams,
    psi0: &FullState,
    times: &[f64],
) -> Result<Vec<FullState>> {
    if params.n_qubits != psi0.n_qubits || params.fock_cutoff != psi0.fock_cutoff {
        return Err(Error::DimensionMismatch(
            "params and state disagree on N_q or n_max".into(),
        ));
    }
    check_size(psi0.n_qubits, psi0.fock_cutoff)?;
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidParams("times must be finite".into()));
    }
    let dim = psi0.amps.len();
    let eig = dense_interaction(params).symmetric_eigen();
    // c = Vᵀ ψ
    let mut c = vec![Complex64::ZERO; dim];
    for k in 0..dim {
        let col = eig.eigenvectors.column(k);
        let mut acc = Complex64::ZERO;
        for i in 0..dim {
            acc += col[i] * psi0.amps[i];
        }
        c[k] = acc;
    }
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let y: DVector<Complex64> = DVector::from_iterator(
            dim,
            (0..dim).map(|k| c[k] * Complex64::from_polar(1.0, -eig.eigenvalues[k] * t)),
        );
        let mut amps = vec![Complex64::ZERO; dim];
        for k in 0..dim {
            let col = eig.eigenvectors.column(k);
            let yk = y[k];
            if yk.norm_sqr() < 1e-64 {
                continue;
            }
            for i in 0..dim {
                amps[i] += col[i] * yk;
            }
        }
        out.push(FullState {
            n_qubits: psi0.n_qubits,
            fock_cutoff: psi0.fock_cutoff,
            amps,
        });
    }
    Ok(out)
}

/// Eigenvalues of the full interaction matrix, ascending.
pub fn full_spectrum(params: &ModelParams) -> Result<Vec<f64>> {
    check_size(params.n_qubits, params.fock_cutoff)?;
    let mut w: Vec<f64> = dense_interaction(params)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    w.sort_by(f64::total_cmp);
    Ok(w)
}

/// Register reduced density matrix over bitstrings, ρ[b,b′] = Σ_n ψ[b,n] ψ*[b′,n].
pub fn full_reduce_qubits(state: &FullState) -> DMatrix<Complex64> {
    let nb = 1usize << state.n_qubits;
    let d = state.fock_cutoff + 1;
    let mut rho = DMatrix::<Complex64>::zeros(nb, nb);
    for b in 0..nb {
        for bp in b..nb {
            let mut acc = Complex64::ZERO;
            for n in 0..d {
                acc += state.amps[b * d + n] * state.amps[bp * d + n].conj();
            }
            rho[(b, bp)] = acc;
            if bp != b {
                rho[(bp, b)] = acc.conj();
            }
        }
    }
    rho
}

/// Entanglement entropy of the register cut, computed from the bitstring
/// reduction.
pub fn full_qubit_entropy(state: &FullState) -> Result<f64> {
    let w: Vec<f64> = full_reduce_qubits(state)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    spectrum_entropy(&w)
}

/// Two-qubit reduction in the (ee, eg, ge, gg) ordering; eg = qubit 0
/// excited.
pub fn full_two_qubit_density(state: &FullState) -> Result<TwoQubitDensityMatrix> {
    if state.n_qubits != 2 {
        return Err(Error::WrongQubitCount(state.n_qubits));
    }
    let rho = full_reduce_qubits(state);
    // bitstring index for each of ee, eg, ge, gg
    let order = [0b11usize, 0b01, 0b10, 0b00];
    let reord = DMatrix::from_fn(4, 4, |i, j| rho[(order[i], order[j])]);
    TwoQubitDensityMatrix::from_matrix(reord)
}

/// ⟨target|ρ^q|target⟩ for a register vector over bitstrings.
pub fn full_state_probability(state: &FullState, target: &[Complex64]) -> Result<f64> {
    let nb = 1usize << state.n_qubits;
    if target.len() != nb {
        return Err(Error::DimensionMismatch(format!(
            "expected {nb} target amplitudes, got {}",
            target.len()
        )));
    }
    let d = state.fock_cutoff + 1;
    let mut acc = 0.0;
    for n in 0..d {
        let mut inner = Complex64::ZERO;
        for b in 0..nb {
            inner += target[b].conj() * state.amps[b * d + n];
        }
        acc += inner.norm_sqr();
    }
    Ok(acc.min(1.0))
}
