//! Block-diagonal construction and exact propagation.
//!
//! The interaction V = ħλ(âJ⁺ + â†J⁻) conserves the excitation number
//! E = â†â + N_e, so the Hamiltonian splits into independent blocks, one
//! per E. Within a block the basis states (N_e, n = E − N_e) form a chain
//! coupled only between neighbors, giving a real symmetric tridiagonal
//! matrix with zero diagonal (interaction picture, on resonance). Each
//! block is diagonalized once; evolution to any t is then three small
//! matrix products with no step error.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{ModelParams, SymmetricState};

/// Eigendecomposition of one excitation block.
///
/// Eigenvalues are stored in units of λ; the chain couplings are
/// √n √((N_e+1)(N_q−N_e)), from â on |n⟩ and the collective raising
/// operator between Dicke levels.
#[derive(Debug, Clone)]
pub struct ExcitationBlock {
    pub excitation_number: usize,
    /// (N_e, n) pairs, ascending in N_e. Blocks with E > n_max lose their
    /// low-N_e members to the Fock cutoff.
    pub basis: Vec<(usize, usize)>,
    /// Ascending, in units of λ.
    pub eigenvalues: DVector<f64>,
    /// Orthogonal; column k belongs to eigenvalues[k].
    pub eigenvectors: DMatrix<f64>,
}

impl ExcitationBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// All blocks of one model, reusable for any number of evolve calls.
#[derive(Debug, Clone)]
pub struct BlockPropagator {
    pub params: ModelParams,
    /// Indexed by E = 0 ..= n_max + N_q.
    pub blocks: Vec<ExcitationBlock>,
}

/// Builds and diagonalizes the excitation-E block.
pub fn build_block(params: &ModelParams, excitation: usize) -> Result<ExcitationBlock> {
    let nq = params.n_qubits;
    let n_max = params.fock_cutoff;
    if excitation > n_max + nq {
        return Err(Error::InvalidParams(format!(
            "excitation number {excitation} exceeds n_max + N_q = {}",
            n_max + nq
        )));
    }
    let ne_lo = excitation.saturating_sub(n_max);
    let ne_hi = excitation.min(nq);
    let basis: Vec<(usize, usize)> = (ne_lo..=ne_hi).map(|ne| (ne, excitation - ne)).collect();
    let dim = basis.len();

    if dim == 1 {
        return Ok(ExcitationBlock {
            excitation_number: excitation,
            basis,
            eigenvalues: DVector::zeros(1),
            eigenvectors: DMatrix::identity(1, 1),
        });
    }

    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim - 1 {
        let (ne, n) = basis[i];
        // ⟨N_e+1, n−1| V |N_e, n⟩ / λ
        let v = ((n as f64) * ((ne + 1) * (nq - ne)) as f64).sqrt();
        h[(i, i + 1)] = v;
        h[(i + 1, i)] = v;
    }
    let eig = h.symmetric_eigen();

    // nalgebra returns eigenpairs unordered; fix an ascending order so
    // output bytes never depend on solver internals.
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = DVector::from_iterator(dim, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut eigenvectors = DMatrix::zeros(dim, dim);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }

    Ok(ExcitationBlock {
        excitation_number: excitation,
        basis,
        eigenvalues,
        eigenvectors,
    })
}

/// Diagonalizes every block up to E = n_max + N_q, in parallel.
pub fn build_propagator(params: &ModelParams) -> Result<BlockPropagator> {
    let top = params.fock_cutoff + params.n_qubits;
    let blocks: Result<Vec<ExcitationBlock>> = (0..=top)
        .into_par_iter()
        .map(|e| build_block(params, e))
        .collect();
    Ok(BlockPropagator {
        params: params.clone(),
        blocks: blocks?,
    })
}

/// Propagates psi0 to time t (in units of 1/λ when λ=1): per block,
/// amplitudes are rotated through the eigenbasis with phases e^{−iωλt}.
pub fn evolve(prop: &BlockPropagator, psi0: &SymmetricState, t: f64) -> Result<SymmetricState> {
    if psi0.n_qubits != prop.params.n_qubits || psi0.fock_cutoff != prop.params.fock_cutoff {
        return Err(Error::DimensionMismatch(format!(
            "state is (N_q={}, n_max={}) but propagator is (N_q={}, n_max={})",
            psi0.n_qubits, psi0.fock_cutoff, prop.params.n_qubits, prop.params.fock_cutoff
        )));
    }
    if !t.is_finite() {
        return Err(Error::InvalidParams(format!("time must be finite, got {t}")));
    }
    let d = psi0.fock_cutoff + 1;
    let lam_t = prop.params.coupling * t;
    let mut out = vec![Complex64::ZERO; psi0.amps.len()];
    let mut c = Vec::new();
    let mut y = Vec::new();
    for block in &prop.blocks {
        let dim = block.dim();
        c.clear();
        c.extend(block.basis.iter().map(|&(ne, n)| psi0.amps[ne * d + n]));
        if c.iter().all(|a| a.re == 0.0 && a.im == 0.0) {
            continue;
        }
        // y = e^{−iΛλt} Vᵀ c
        y.clear();
        for k in 0..dim {
            let mut acc = Complex64::ZERO;
            for i in 0..dim {
                acc += block.eigenvectors[(i, k)] * c[i];
            }
            y.push(acc * Complex64::from_polar(1.0, -block.eigenvalues[k] * lam_t));
        }
        // block output = V y
        for (i, &(ne, n)) in block.basis.iter().enumerate() {
            let mut acc = Complex64::ZERO;
            for k in 0..dim {
                acc += block.eigenvectors[(i, k)] * y[k];
            }
            out[ne * d + n] = acc;
        }
    }
    SymmetricState::new(psi0.n_qubits, psi0.fock_cutoff, out)
}

/// Evolves to each time of an ascending grid, independently from the
/// eigenbasis (no step-to-step error accumulation). Times are processed in
/// parallel; the result order matches the input order.
pub fn evolve_series(
    prop: &BlockPropagator,
    psi0: &SymmetricState,
    times: &[f64],
) -> Result<Vec<SymmetricState>> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidParams("times must be finite".into()));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParams("times must be ascending".into()));
    }
    times
        .par_iter()
        .map(|&t| evolve(prop, psi0, t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{coherent_field_amps, symmetric_product, QubitPureState};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(nq: usize, nbar: f64) -> ModelParams {
        ModelParams::new(nq, 1.0, nbar, 0.0).unwrap()
    }

    fn random_state(nq: usize, n_max: usize, rng: &mut ChaCha8Rng) -> SymmetricState {
        let dim = (nq + 1) * (n_max + 1);
        let mut amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        SymmetricState::new(nq, n_max, amps).unwrap()
    }

    #[test]
    fn vacuum_rabi_doublet() {
        let p = ModelParams::with_cutoff(1, 1.0, 0.0, 0.0, 4).unwrap();
        let b = build_block(&p, 1).unwrap();
        assert_eq!(b.dim(), 2);
        assert_abs_diff_eq!(b.eigenvalues[0], -1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(b.eigenvalues[1], 1.0, epsilon = 1e-13);
    }

    #[test]
    fn two_qubit_low_blocks() {
        let p = ModelParams::with_cutoff(2, 1.0, 0.0, 0.0, 6).unwrap();
        let b1 = build_block(&p, 1).unwrap();
        assert_eq!(b1.dim(), 2);
        assert_abs_diff_eq!(b1.eigenvalues[1], 2f64.sqrt(), epsilon = 1e-13);
        let b2 = build_block(&p, 2).unwrap();
        assert_eq!(b2.dim(), 3);
        // couplings 2 and √2 give the chiral triple {−√6, 0, √6}
        assert_abs_diff_eq!(b2.eigenvalues[0], -6f64.sqrt(), epsilon = 1e-13);
        assert_abs_diff_eq!(b2.eigenvalues[1], 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(b2.eigenvalues[2], 6f64.sqrt(), epsilon = 1e-13);
    }

    #[test]
    fn block_count_and_clipped_dims() {
        let p = ModelParams::with_cutoff(1, 1.0, 50.0, 0.0, 120).unwrap();
        let prop = build_propagator(&p).unwrap();
        assert_eq!(prop.blocks.len(), 122);
        assert!(prop.blocks.iter().all(|b| b.dim() <= 2));

        let p40 = ModelParams::with_cutoff(40, 1.0, 50.0, 0.0, 191).unwrap();
        let prop40 = build_propagator(&p40).unwrap();
        assert_eq!(prop40.blocks.iter().map(|b| b.dim()).max(), Some(41));
        // clipped block at the top: only (N_e = N_q, n = n_max) survives
        assert_eq!(prop40.blocks.last().unwrap().dim(), 1);
    }

    #[test]
    fn eigenpairs_satisfy_residual_and_orthogonality() {
        let p = ModelParams::with_cutoff(5, 1.0, 0.0, 0.0, 30).unwrap();
        for e in [0usize, 1, 3, 5, 17, 33, 35] {
            let b = build_block(&p, e).unwrap();
            let dim = b.dim();
            // rebuild H from the chain couplings
            let mut h = DMatrix::<f64>::zeros(dim, dim);
            for i in 0..dim - 1 {
                let (ne, n) = b.basis[i];
                let v = ((n as f64) * ((ne + 1) * (5 - ne)) as f64).sqrt();
                h[(i, i + 1)] = v;
                h[(i + 1, i)] = v;
            }
            let resid = (&h * &b.eigenvectors
                - &b.eigenvectors * DMatrix::from_diagonal(&b.eigenvalues))
                .norm();
            assert!(resid < 1e-11, "E={e}: eigen residual {resid}");
            let ortho = (b.eigenvectors.transpose() * &b.eigenvectors
                - DMatrix::<f64>::identity(dim, dim))
                .norm();
            assert!(ortho < 1e-12, "E={e}: orthogonality {ortho}");
        }
    }

    #[test]
    fn chiral_spectrum_pairing() {
        let p = ModelParams::with_cutoff(4, 1.0, 0.0, 0.0, 40).unwrap();
        for e in 0..=40usize {
            let b = build_block(&p, e).unwrap();
            let dim = b.dim();
            for k in 0..dim {
                let lo = b.eigenvalues[k];
                let hi = b.eigenvalues[dim - 1 - k];
                assert_abs_diff_eq!(lo, -hi, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn evolve_at_zero_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = params(2, 5.0);
        let prop = build_propagator(&p).unwrap();
        let psi = random_state(2, p.fock_cutoff, &mut rng);
        let out = evolve(&prop, &psi, 0.0).unwrap();
        let err: f64 = psi
            .amps
            .iter()
            .zip(&out.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(err < 1e-13);
    }

    #[test]
    fn vacuum_rabi_half_cycle_swaps_excitation() {
        let p = ModelParams::with_cutoff(1, 1.0, 0.0, 0.0, 4).unwrap();
        let prop = build_propagator(&p).unwrap();
        let e = QubitPureState::from_amps(1, vec![Complex64::ZERO, Complex64::ONE]).unwrap();
        let mut vac = vec![Complex64::ZERO; 5];
        vac[0] = Complex64::ONE;
        let psi0 = symmetric_product(&e, &vac).unwrap();
        let out = evolve(&prop, &psi0, std::f64::consts::FRAC_PI_2).unwrap();
        // cos(λt)|e,0⟩ − i sin(λt)|g,1⟩ at λt = π/2
        assert_abs_diff_eq!(out.amp(0, 1).im, -1.0, epsilon = 1e-12);
        assert!(out.amp(1, 0).norm() < 1e-12);
    }

    #[test]
    fn unitarity_and_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let p = params(3, 8.0);
        let prop = build_propagator(&p).unwrap();
        for _ in 0..20 {
            let psi = random_state(3, p.fock_cutoff, &mut rng);
            let t1 = rng.gen_range(0.0..30.0);
            let t2 = rng.gen_range(0.0..30.0);
            let a = evolve(&prop, &psi, t1).unwrap();
            assert_abs_diff_eq!(a.norm(), 1.0, epsilon = 1e-10);
            let ab = evolve(&prop, &a, t2).unwrap();
            let direct = evolve(&prop, &psi, t1 + t2).unwrap();
            let err: f64 = ab
                .amps
                .iter()
                .zip(&direct.amps)
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err < 1e-10, "composition error {err}");
        }
    }

    #[test]
    fn forward_backward_recovers_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = params(2, 10.0);
        let prop = build_propagator(&p).unwrap();
        let psi = random_state(2, p.fock_cutoff, &mut rng);
        let there = evolve(&prop, &psi, 17.3).unwrap();
        let back = evolve(&prop, &there, -17.3).unwrap();
        let err: f64 = psi
            .amps
            .iter()
            .zip(&back.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(err < 1e-11, "round-trip error {err}");
    }

    #[test]
    fn excitation_number_conserved() {
        let p = params(2, 20.0);
        let prop = build_propagator(&p).unwrap();
        let q = QubitPureState::from_amps(
            2,
            vec![
                Complex64::new(0.6, 0.0),
                Complex64::new(0.0, 0.8),
                Complex64::ZERO,
            ],
        )
        .unwrap();
        let f = coherent_field_amps(20.0, 0.0, p.fock_cutoff).unwrap();
        let psi0 = symmetric_product(&q, &f).unwrap();
        let e0 = psi0.mean_excitation();
        for &t in &[1.0, 13.7, 88.8] {
            let et = evolve(&prop, &psi0, t).unwrap().mean_excitation();
            assert!((et - e0).abs() / e0 < 1e-9, "⟨E⟩ drift at t={t}: {e0} -> {et}");
        }
    }

    #[test]
    fn series_matches_single_calls_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = params(2, 6.0);
        let prop = build_propagator(&p).unwrap();
        let psi = random_state(2, p.fock_cutoff, &mut rng);
        let times = [0.0, 0.5, 0.5, 2.25];
        let series = evolve_series(&prop, &psi, &times).unwrap();
        for (k, &t) in times.iter().enumerate() {
            let single = evolve(&prop, &psi, t).unwrap();
            assert_eq!(series[k].amps, single.amps);
        }
        assert_eq!(series[1].amps, series[2].amps);
    }

    #[test]
    fn series_rejects_bad_grids() {
        let p = params(1, 1.0);
        let prop = build_propagator(&p).unwrap();
        let q = QubitPureState::from_amps(1, vec![Complex64::ONE, Complex64::ZERO]).unwrap();
        let f = coherent_field_amps(1.0, 0.0, p.fock_cutoff).unwrap();
        let psi = symmetric_product(&q, &f).unwrap();
        assert!(evolve_series(&prop, &psi, &[1.0, 0.5]).is_err());
        assert!(evolve_series(&prop, &psi, &[f64::NAN]).is_err());
    }

    #[test]
    fn evolve_rejects_mismatched_state() {
        let p = params(2, 5.0);
        let prop = build_propagator(&p).unwrap();
        let other = ModelParams::with_cutoff(1, 1.0, 5.0, 0.0, p.fock_cutoff).unwrap();
        let q = QubitPureState::from_amps(1, vec![Complex64::ONE, Complex64::ZERO]).unwrap();
        let f = coherent_field_amps(5.0, 0.0, other.fock_cutoff).unwrap();
        let psi = symmetric_product(&q, &f).unwrap();
        assert!(evolve(&prop, &psi, 1.0).is_err());
    }

    #[test]
    fn default_cutoff_keeps_leakage_tiny() {
        let p = params(1, 50.0);
        let prop = build_propagator(&p).unwrap();
        let q = QubitPureState::from_amps(1, vec![Complex64::ONE, Complex64::ZERO]).unwrap();
        let f = coherent_field_amps(50.0, 0.0, p.fock_cutoff).unwrap();
        let psi0 = symmetric_product(&q, &f).unwrap();
        let late = evolve(&prop, &psi0, 3.0 * 2.0 * std::f64::consts::PI * 50f64.sqrt()).unwrap();
        assert!(late.leakage() < 1e-8, "leakage {}", late.leakage());
    }
}
