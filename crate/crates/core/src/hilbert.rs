//! Basis definitions and pure-state constructors.
//!
//! The register of N_q identical qubits is described in the symmetric
//! (Dicke) basis |N_q, m⟩, m = −N_q/2 … N_q/2, stored by the number of
//! excited qubits N_e = m + N_q/2 ∈ {0, …, N_q}. The cavity mode lives in
//! a truncated Fock basis |n⟩, n = 0 … n_max. Joint states use a single
//! dicke-major amplitude layout: the field vector attached to each Dicke
//! level is contiguous, `amps[N_e * (n_max + 1) + n]`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// ln(n!) for n = 0..=nmax, by cumulative summation.
pub(crate) fn ln_factorials(nmax: usize) -> Vec<f64> {
    let mut lf = Vec::with_capacity(nmax + 1);
    lf.push(0.0);
    let mut acc = 0.0;
    for n in 1..=nmax {
        acc += (n as f64).ln();
        lf.push(acc);
    }
    lf
}

/// √(n choose k) evaluated in the log domain.
pub(crate) fn sqrt_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    let lf = ln_factorials(n);
    (0.5 * (lf[n] - lf[k] - lf[n - k])).exp()
}

/// Default Fock cutoff for mean photon number n̄: the Poisson tail beyond
/// n̄ + 10√n̄ is far below 1e−12 and the extra 20 levels leave headroom for
/// dynamical spreading.
pub fn default_fock_cutoff(nbar: f64) -> usize {
    (nbar + 10.0 * nbar.sqrt() + 20.0).ceil() as usize
}

/// Physical parameters of one resonant Tavis–Cummings system.
///
/// Evolution takes place in the interaction picture, where only the
/// coupling term ħλ(âJ⁺ + â†J⁻) acts; on resonance the free part commutes
/// with it and contributes a global phase per excitation block. `omega` is
/// therefore retained for bookkeeping only and never enters the dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub n_qubits: usize,
    /// Coupling strength λ (angular frequency; sets the time unit 1/λ).
    pub coupling: f64,
    /// Common cavity/qubit frequency ω. Unused by the rotating-frame
    /// evolution; kept so configurations can record it.
    pub omega: f64,
    /// Mean photon number n̄ of the initial coherent field.
    pub nbar: f64,
    /// Coherent-state phase θ, as in α = √n̄ e^{−iθ}.
    pub theta: f64,
    /// Highest retained Fock level n_max.
    pub fock_cutoff: usize,
}

impl ModelParams {
    /// Parameters with the default Fock cutoff for `nbar`.
    pub fn new(n_qubits: usize, coupling: f64, nbar: f64, theta: f64) -> Result<Self> {
        Self::with_cutoff(n_qubits, coupling, nbar, theta, default_fock_cutoff(nbar))
    }

    /// Parameters with an explicit cutoff. A cutoff below the safety floor
    /// n̄ + 6√n̄ is raised to it.
    pub fn with_cutoff(
        n_qubits: usize,
        coupling: f64,
        nbar: f64,
        theta: f64,
        fock_cutoff: usize,
    ) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidParams("n_qubits must be >= 1".into()));
        }
        if !(coupling > 0.0) {
            return Err(Error::InvalidParams(format!(
                "coupling must be > 0, got {coupling}"
            )));
        }
        if !(nbar >= 0.0) {
            return Err(Error::InvalidParams(format!("nbar must be >= 0, got {nbar}")));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidParams("theta must be finite".into()));
        }
        let floor = (nbar + 6.0 * nbar.sqrt()).ceil() as usize;
        Ok(Self {
            n_qubits,
            coupling,
            omega: 0.0,
            nbar,
            theta,
            fock_cutoff: fock_cutoff.max(floor),
        })
    }

    /// Number of retained Fock levels, n_max + 1.
    pub fn fock_dim(&self) -> usize {
        self.fock_cutoff + 1
    }

    /// Number of Dicke levels, N_q + 1.
    pub fn dicke_dim(&self) -> usize {
        self.n_qubits + 1
    }
}

/// One level of the symmetric register: |N_q, m⟩ addressed by the number
/// of excited qubits. m itself is half-integer for odd N_q, so the stored
/// index is N_e = m + N_q/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DickeIndex {
    pub n_qubits: usize,
    pub n_excited: usize,
}

impl DickeIndex {
    pub fn new(n_qubits: usize, n_excited: usize) -> Result<Self> {
        if n_excited > n_qubits {
            return Err(Error::InvalidParams(format!(
                "n_excited = {n_excited} exceeds n_qubits = {n_qubits}"
            )));
        }
        Ok(Self { n_qubits, n_excited })
    }

    /// 2m = 2N_e − N_q, kept integral to avoid half-integer indexing.
    pub fn twice_m(&self) -> i64 {
        2 * self.n_excited as i64 - self.n_qubits as i64
    }

    pub fn m(&self) -> f64 {
        self.twice_m() as f64 / 2.0
    }

    pub fn n_ground(&self) -> usize {
        self.n_qubits - self.n_excited
    }
}

/// Pure state of the symmetric qubit register: N_q + 1 Dicke amplitudes,
/// ascending in N_e.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitPureState {
    pub n_qubits: usize,
    pub amps: Vec<Complex64>,
}

impl QubitPureState {
    /// Wraps amplitudes, requiring unit norm within 1e−12.
    pub fn from_amps(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != n_qubits + 1 {
            return Err(Error::DimensionMismatch(format!(
                "expected {} Dicke amplitudes, got {}",
                n_qubits + 1,
                amps.len()
            )));
        }
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams(format!(
                "qubit state norm² = {norm2} differs from 1 by more than 1e-12"
            )));
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Joint pure state of register ⊗ field in the dicke-major layout.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricState {
    pub n_qubits: usize,
    pub fock_cutoff: usize,
    pub amps: Vec<Complex64>,
}

impl SymmetricState {
    pub fn new(n_qubits: usize, fock_cutoff: usize, amps: Vec<Complex64>) -> Result<Self> {
        let expect = (n_qubits + 1) * (fock_cutoff + 1);
        if amps.len() != expect {
            return Err(Error::DimensionMismatch(format!(
                "expected {} amplitudes for N_q = {n_qubits}, n_max = {fock_cutoff}, got {}",
                expect,
                amps.len()
            )));
        }
        Ok(Self {
            n_qubits,
            fock_cutoff,
            amps,
        })
    }

    /// Flat index of (N_e, n). Dicke-major: the per-level field vector is
    /// contiguous.
    #[inline]
    pub fn index(&self, n_excited: usize, n: usize) -> usize {
        n_excited * (self.fock_cutoff + 1) + n
    }

    #[inline]
    pub fn amp(&self, n_excited: usize, n: usize) -> Complex64 {
        self.amps[self.index(n_excited, n)]
    }

    /// Field amplitudes conditioned on Dicke level N_e (unnormalized).
    pub fn field_slice(&self, n_excited: usize) -> &[Complex64] {
        let d = self.fock_cutoff + 1;
        &self.amps[n_excited * d..(n_excited + 1) * d]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Probability resting in the top three Fock levels n ≥ n_max − 2.
    /// Significant weight here means the truncation is distorting the
    /// dynamics.
    pub fn leakage(&self) -> f64 {
        let d = self.fock_cutoff + 1;
        let lo = d.saturating_sub(3);
        (0..=self.n_qubits)
            .flat_map(|ne| self.amps[ne * d + lo..(ne + 1) * d].iter())
            .map(|a| a.norm_sqr())
            .sum()
    }

    /// ⟨â†â + N_e⟩, the conserved excitation number.
    pub fn mean_excitation(&self) -> f64 {
        let d = self.fock_cutoff + 1;
        let mut acc = 0.0;
        for ne in 0..=self.n_qubits {
            for n in 0..d {
                acc += (ne + n) as f64 * self.amps[ne * d + n].norm_sqr();
            }
        }
        acc
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Coherent-state Fock amplitudes e^{−n̄/2} αⁿ/√n! with α = √n̄ e^{−iθ}.
///
/// Magnitudes are evaluated in the log domain, so arbitrary n̄ is safe.
/// The truncated vector is renormalized; if the truncation discards
/// probability ≥ 1e−8 the cutoff is inadequate and an error is returned.
pub fn coherent_field_amps(nbar: f64, theta: f64, n_max: usize) -> Result<Vec<Complex64>> {
    if !(nbar >= 0.0) {
        return Err(Error::InvalidParams(format!("nbar must be >= 0, got {nbar}")));
    }
    if nbar == 0.0 {
        let mut amps = vec![Complex64::ZERO; n_max + 1];
        amps[0] = Complex64::ONE;
        return Ok(amps);
    }
    let lf = ln_factorials(n_max);
    let ln_a = 0.5 * nbar.ln(); // ln |α|
    let mut amps = Vec::with_capacity(n_max + 1);
    let mut norm2 = 0.0;
    for n in 0..=n_max {
        let ln_mag = -0.5 * nbar + n as f64 * ln_a - 0.5 * lf[n];
        let mag = ln_mag.exp();
        let phase = -theta * n as f64;
        let amp = Complex64::from_polar(mag, phase);
        norm2 += amp.norm_sqr();
        amps.push(amp);
    }
    let deficit = 1.0 - norm2;
    if deficit >= 1e-8 {
        return Err(Error::CutoffTooSmall { leakage: deficit });
    }
    let scale = norm2.sqrt().recip();
    for a in &mut amps {
        *a *= scale;
    }
    Ok(amps)
}

/// Spin coherent state |β, N_q⟩: the symmetric product of N_q copies of
/// the same single-qubit state, with Dicke amplitudes
/// √C(N_q, N_e) β^{N_q−N_e} / (1+|β|²)^{N_q/2}.
///
/// β = 0 is the fully excited register; |β| → ∞ tends to all-ground. The
/// sum runs over every occupation N_e = 0..=N_q.
pub fn spin_coherent(beta: Complex64, n_qubits: usize) -> Result<QubitPureState> {
    if n_qubits == 0 {
        return Err(Error::InvalidParams("n_qubits must be >= 1".into()));
    }
    let nq = n_qubits;
    let lf = ln_factorials(nq);
    let b = beta.norm();
    let arg = beta.arg();
    let ln_norm = 0.5 * nq as f64 * b.mul_add(b, 1.0).ln(); // ln (1+|β|²)^{N_q/2}
    let mut amps = vec![Complex64::ZERO; nq + 1];
    for ne in 0..=nq {
        let k = nq - ne; // exponent of β
        if b == 0.0 {
            if k == 0 {
                amps[ne] = Complex64::ONE;
            }
            continue;
        }
        let ln_c = 0.5 * (lf[nq] - lf[ne] - lf[k]);
        let ln_mag = ln_c + k as f64 * b.ln() - ln_norm;
        amps[ne] = Complex64::from_polar(ln_mag.exp(), arg * k as f64);
    }
    // Log-domain rounding leaves ~1e-16 norm error; tidy it up.
    let n2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let scale = n2.sqrt().recip();
    for a in &mut amps {
        *a *= scale;
    }
    QubitPureState::from_amps(nq, amps)
}

/// Tensor product |ψ_q⟩ ⊗ |field⟩ in the joint layout.
pub fn symmetric_product(
    qubit: &QubitPureState,
    field_amps: &[Complex64],
) -> Result<SymmetricState> {
    if field_amps.is_empty() {
        return Err(Error::DimensionMismatch("empty field vector".into()));
    }
    let d = field_amps.len();
    let mut amps = Vec::with_capacity((qubit.n_qubits + 1) * d);
    for q in &qubit.amps {
        for f in field_amps {
            amps.push(q * f);
        }
    }
    SymmetricState::new(qubit.n_qubits, d - 1, amps)
}

/// Bit i of a full-space basis index marks qubit i excited; the full
/// amplitude layout is qubit-bitstring-major, `full[bits * (n_max+1) + n]`.
///
/// Projects a full 2^{N_q} ⊗ Fock state onto the symmetric subspace.
/// Succeeds only when the component outside that subspace is negligible
/// (norm < 1e−10).
pub fn embed_full_to_symmetric(
    full_amps: &[Complex64],
    n_qubits: usize,
    fock_cutoff: usize,
) -> Result<SymmetricState> {
    if n_qubits == 0 || n_qubits > 12 {
        return Err(Error::SizeGuard(format!(
            "symmetric projection supports 1 <= n_qubits <= 12, got {n_qubits}"
        )));
    }
    let d = fock_cutoff + 1;
    let dim = (1usize << n_qubits) * d;
    if full_amps.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "expected {dim} full-space amplitudes, got {}",
            full_amps.len()
        )));
    }
    let mut sym = vec![Complex64::ZERO; (n_qubits + 1) * d];
    for bits in 0..(1usize << n_qubits) {
        let ne = bits.count_ones() as usize;
        for n in 0..d {
            sym[ne * d + n] += full_amps[bits * d + n];
        }
    }
    let mut proj_norm2 = 0.0;
    for ne in 0..=n_qubits {
        let inv_sqrt_c = sqrt_binomial(n_qubits, ne).recip();
        for n in 0..d {
            sym[ne * d + n] *= inv_sqrt_c;
            proj_norm2 += sym[ne * d + n].norm_sqr();
        }
    }
    let full_norm2: f64 = full_amps.iter().map(|a| a.norm_sqr()).sum();
    let residual = (full_norm2 - proj_norm2).max(0.0).sqrt();
    if residual >= 1e-10 {
        return Err(Error::NotSymmetric { residual });
    }
    SymmetricState::new(n_qubits, fock_cutoff, sym)
}

/// Inverse of [`embed_full_to_symmetric`] on its image: spreads each Dicke
/// amplitude uniformly over the C(N_q, N_e) bitstrings.
pub fn expand_symmetric_to_full(psi: &SymmetricState) -> Result<Vec<Complex64>> {
    let nq = psi.n_qubits;
    if nq > 12 {
        return Err(Error::SizeGuard(format!(
            "full-space expansion supports n_qubits <= 12, got {nq}"
        )));
    }
    let d = psi.fock_cutoff + 1;
    let mut full = vec![Complex64::ZERO; (1usize << nq) * d];
    let inv_sqrt_c: Vec<f64> = (0..=nq).map(|ne| sqrt_binomial(nq, ne).recip()).collect();
    for bits in 0..(1usize << nq) {
        let ne = bits.count_ones() as usize;
        let w = inv_sqrt_c[ne];
        for n in 0..d {
            full[bits * d + n] = psi.amps[ne * d + n] * w;
        }
    }
    Ok(full)
}
