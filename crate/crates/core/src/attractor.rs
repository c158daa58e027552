//! Attractor states, their basin, and the cat-transfer predictions.
//!
//! Any register state in the basin evolves, at t* = t_r/2N_q with the
//! field in a large coherent state, into one common attractor: a spin
//! coherent state independent of where in the basin the register started.
//! The basin is parametrized by one complex number a and decomposes into
//! a superposition of two antipodal spin coherent states, so it contains
//! register cat states; at t* that cat structure reappears in the field.

use num_complex::Complex64;

use crate::engine::{evolve_series, BlockPropagator};
use crate::error::{Error, Result};
use crate::hilbert::{
    coherent_field_amps, ln_factorials, spin_coherent, sqrt_binomial, ModelParams, QubitPureState,
    SymmetricState,
};
use crate::observables::state_probability;

use std::f64::consts::{FRAC_PI_2, PI};

/// The time scales of the resonant model, in units of 1/λ when λ = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicTimes {
    /// Rabi-envelope collapse, √2/λ.
    pub collapse: f64,
    /// Revival of the oscillations, 2π√n̄/λ.
    pub revival: f64,
    /// When the basin reaches the +1 attractor, t_r/2N_q.
    pub attractor: f64,
    /// When the −1 attractor is attained, 3t_r/2 (single qubit).
    pub attractor_minus: f64,
}

/// Collapse, revival, and attractor times for the given parameters. The
/// revival time is undefined for an empty field.
pub fn characteristic_times(params: &ModelParams) -> Result<CharacteristicTimes> {
    if params.nbar <= 0.0 {
        return Err(Error::InvalidParams(
            "characteristic times require nbar > 0".into(),
        ));
    }
    let lam = params.coupling;
    let revival = 2.0 * PI * params.nbar.sqrt() / lam;
    Ok(CharacteristicTimes {
        collapse: std::f64::consts::SQRT_2 / lam,
        revival,
        attractor: revival / (2.0 * params.n_qubits as f64),
        attractor_minus: 1.5 * revival,
    })
}

/// The attractor register state
/// |att±⟩ = 2^{−N_q/2} Σ √C(N_q,N_e) e^{−iθN_e} (±i)^{N_q−N_e} |N_e⟩,
/// equal to the spin coherent state of β = ±i e^{iθ} up to a global
/// phase. `sign` selects the branch: +1 is reached at t*, −1 half a
/// revival later.
pub fn attractor_state(sign: i32, theta: f64, n_qubits: usize) -> Result<QubitPureState> {
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidParams(format!(
            "attractor sign must be +1 or -1, got {sign}"
        )));
    }
    if n_qubits == 0 {
        return Err(Error::InvalidParams("n_qubits must be >= 1".into()));
    }
    let nq = n_qubits;
    let lf = ln_factorials(nq);
    let ln_scale = 0.5 * nq as f64 * std::f64::consts::LN_2; // ln 2^{N_q/2}
    let mut amps = Vec::with_capacity(nq + 1);
    for ne in 0..=nq {
        let k = (nq - ne) as f64;
        let ln_mag = 0.5 * (lf[nq] - lf[ne] - lf[nq - ne]) - ln_scale;
        let phase = sign as f64 * FRAC_PI_2 * k - theta * ne as f64;
        amps.push(Complex64::from_polar(ln_mag.exp(), phase));
    }
    let n2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let scale = n2.sqrt().recip();
    for a in &mut amps {
        *a *= scale;
    }
    QubitPureState::from_amps(nq, amps)
}

/// Coordinates of a basin state: the amplitude a shared by all even-N_e
/// Dicke levels, and the register phase θ. The odd levels carry
/// s = √(2^{1−N_q} − |a|²), so |a| is capped at 2^{(1−N_q)/2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasinParameter {
    pub n_qubits: usize,
    pub a: Complex64,
    pub theta: f64,
}

impl BasinParameter {
    pub fn new(n_qubits: usize, a: Complex64, theta: f64) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidParams("n_qubits must be >= 1".into()));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidParams("theta must be finite".into()));
        }
        let max = Self::max_modulus(n_qubits);
        if a.norm() > max * (1.0 + 1e-12) {
            return Err(Error::BasinOutOfRange {
                modulus: a.norm(),
                max,
            });
        }
        Ok(Self { n_qubits, a, theta })
    }

    /// The odd-level amplitude s ≥ 0.
    pub fn s(&self) -> f64 {
        let max2 = (2f64).powf(1.0 - self.n_qubits as f64);
        (max2 - self.a.norm_sqr()).max(0.0).sqrt()
    }

    /// Largest admissible |a|, 1/√(2^{N_q−1}).
    pub fn max_modulus(n_qubits: usize) -> f64 {
        (2f64).powf(0.5 * (1.0 - n_qubits as f64))
    }
}

/// A basin-of-attraction register state,
/// amps[N_e] = A(N_e) e^{−iθN_e} √C(N_q,N_e) with A = a on even N_e and
/// A = s on odd N_e. Every such state reaches the +1 attractor at t*.
pub fn basin_state(param: &BasinParameter) -> QubitPureState {
    let nq = param.n_qubits;
    let s = Complex64::new(param.s(), 0.0);
    let mut amps = Vec::with_capacity(nq + 1);
    for ne in 0..=nq {
        let a = if ne % 2 == 0 { param.a } else { s };
        let rot = Complex64::from_polar(1.0, -param.theta * ne as f64);
        amps.push(a * rot * sqrt_binomial(nq, ne));
    }
    let n2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let scale = n2.sqrt().recip();
    for a in &mut amps {
        *a *= scale;
    }
    QubitPureState::from_amps(nq, amps).expect("basin amplitudes are normalized")
}

/// A basin state written as a two-branch superposition of antipodal spin
/// coherent states: ψ = w₊ |β⟩ + w₋ |−β⟩ with β = e^{iθ}.
#[derive(Debug, Clone)]
pub struct CatDecomposition {
    pub weight_plus: Complex64,
    pub weight_minus: Complex64,
    /// Branch parameter; the components sit at ±β on the Bloch sphere.
    pub beta: Complex64,
    pub component_plus: QubitPureState,
    pub component_minus: QubitPureState,
}

impl CatDecomposition {
    /// w₊ component_plus + w₋ component_minus, for reconstruction checks.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        self.component_plus
            .amps
            .iter()
            .zip(&self.component_minus.amps)
            .map(|(p, m)| self.weight_plus * p + self.weight_minus * m)
            .collect()
    }
}

/// Splits a basin state over the two spin coherent branches ±e^{iθ}:
/// w± carry |a ± s| and the split is exact, with reconstruction residual
/// at machine precision. The single-branch point w₋ = 0 sits at
/// a = 2^{−N_q/2}; a = 0 and |a| = 2^{(1−N_q)/2} give equal weights, the
/// register cat states.
pub fn cat_decomposition(param: &BasinParameter) -> Result<CatDecomposition> {
    let nq = param.n_qubits;
    let s = Complex64::new(param.s(), 0.0);
    let scale = (2f64).powf(0.5 * (nq as f64 - 2.0));
    let phase = Complex64::from_polar(1.0, -param.theta * nq as f64);
    let parity = if nq % 2 == 0 { 1.0 } else { -1.0 };
    let beta = Complex64::from_polar(1.0, param.theta);
    Ok(CatDecomposition {
        weight_plus: scale * (param.a + s) * phase,
        weight_minus: scale * (param.a - s) * phase * parity,
        beta,
        component_plus: spin_coherent(beta, nq)?,
        component_minus: spin_coherent(-beta, nq)?,
    })
}

/// Large-n̄ prediction for the field at t*: the cat
/// √(2^{N_q−2}) [(a−s) e^{iπn̄/2} |iα⟩ − (a+s) e^{−iπn̄/2} |−iα⟩],
/// α = √n̄ e^{−iθ}, returned as normalized Fock amplitudes at the model
/// cutoff.
pub fn predicted_field_state(
    param: &BasinParameter,
    params: &ModelParams,
) -> Result<Vec<Complex64>> {
    if param.n_qubits != params.n_qubits {
        return Err(Error::DimensionMismatch(format!(
            "basin parameter has N_q = {}, model has N_q = {}",
            param.n_qubits, params.n_qubits
        )));
    }
    let s = Complex64::new(param.s(), 0.0);
    let scale = (2f64).powf(0.5 * (params.n_qubits as f64 - 2.0));
    // ±iα = √n̄ e^{−i(θ ∓ π/2)}
    let plus = coherent_field_amps(params.nbar, param.theta - FRAC_PI_2, params.fock_cutoff)?;
    let minus = coherent_field_amps(params.nbar, param.theta + FRAC_PI_2, params.fock_cutoff)?;
    let rot = Complex64::from_polar(1.0, FRAC_PI_2 * params.nbar);
    let w_plus = scale * (param.a - s) * rot;
    let w_minus = -scale * (param.a + s) * rot.conj();
    let mut amps: Vec<Complex64> = plus
        .iter()
        .zip(&minus)
        .map(|(p, m)| w_plus * p + w_minus * m)
        .collect();
    let n2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    if n2 <= 0.0 {
        return Err(Error::InvalidParams("predicted field state vanishes".into()));
    }
    let inv = n2.sqrt().recip();
    for z in &mut amps {
        *z *= inv;
    }
    Ok(amps)
}

/// Deterministic covering of the admissible a-disc: the center, the
/// boundary, the τ-zero radius R/√2, then a sunflower fill. Identical
/// input always yields identical samples, so scan outputs are
/// reproducible byte for byte.
pub fn basin_samples(n_qubits: usize, count: usize) -> Vec<Complex64> {
    let r_max = BasinParameter::max_modulus(n_qubits);
    let mut pts = Vec::with_capacity(count);
    for seed in [
        Complex64::ZERO,
        Complex64::new(r_max, 0.0),
        Complex64::new(r_max * std::f64::consts::FRAC_1_SQRT_2, 0.0),
    ] {
        if pts.len() < count {
            pts.push(seed);
        }
    }
    let golden = PI * (3.0 - 5f64.sqrt());
    let denom = count as f64 - 2.5;
    let mut k = 0usize;
    while pts.len() < count {
        k += 1;
        let r = r_max * ((k as f64 - 0.5) / denom).sqrt();
        pts.push(Complex64::from_polar(r, k as f64 * golden));
    }
    pts
}

/// P(att⁺) = ⟨att⁺|ρ^q(t)|att⁺⟩ along a time grid; bitwise equal to
/// evolving and projecting by hand.
pub fn attractor_probability_series(
    prop: &BlockPropagator,
    initial: &SymmetricState,
    times: &[f64],
) -> Result<Vec<f64>> {
    let target = attractor_state(1, prop.params.theta, prop.params.n_qubits)?;
    let states = evolve_series(prop, initial, times)?;
    states
        .iter()
        .map(|s| state_probability(s, &target))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{build_propagator, evolve};
    use crate::hilbert::symmetric_product;
    use crate::observables::pure_tangle;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn times_frozen_values() {
        let p = ModelParams::new(1, 1.0, 50.0, 0.0).unwrap();
        let t = characteristic_times(&p).unwrap();
        assert_abs_diff_eq!(t.collapse, 1.4142135623730951, epsilon = 1e-15);
        assert_abs_diff_eq!(t.revival, 44.42882938158366, epsilon = 1e-12);
        assert_abs_diff_eq!(t.attractor, 22.21441469079183, epsilon = 1e-12);
        assert_abs_diff_eq!(t.attractor_minus, 1.5 * 44.42882938158366, epsilon = 1e-12);
        let p2 = ModelParams::new(2, 1.0, 50.0, 0.0).unwrap();
        let t2 = characteristic_times(&p2).unwrap();
        assert_abs_diff_eq!(t2.attractor, 11.107207345395915, epsilon = 1e-12);
        assert!(t2.attractor < t2.revival && t2.collapse > 0.0);
    }

    #[test]
    fn times_scale_with_coupling() {
        let p = ModelParams::new(1, 2.0, 50.0, 0.0).unwrap();
        let t = characteristic_times(&p).unwrap();
        assert_abs_diff_eq!(t.revival, 44.42882938158366 / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.collapse, std::f64::consts::SQRT_2 / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn times_reject_empty_field() {
        let p = ModelParams::new(1, 1.0, 0.0, 0.0).unwrap();
        assert!(characteristic_times(&p).is_err());
    }

    #[test]
    fn attractor_is_spin_coherent() {
        for &nq in &[1usize, 2, 5] {
            for &sign in &[1i32, -1] {
                let theta = 0.7;
                let att = attractor_state(sign, theta, nq).unwrap();
                let beta = Complex64::I * sign as f64 * Complex64::from_polar(1.0, theta);
                let sc = spin_coherent(beta, nq).unwrap();
                assert_abs_diff_eq!(att.overlap(&sc).norm(), 1.0, epsilon = 1e-12);
                assert_abs_diff_eq!(att.norm(), 1.0, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn attractor_rejects_bad_sign() {
        assert!(attractor_state(0, 0.0, 2).is_err());
        assert!(attractor_state(2, 0.0, 2).is_err());
    }

    #[test]
    fn attractor_single_qubit_components() {
        // N_q = 1, θ = 0: (|e⟩ + i|g⟩)/√2 with |g⟩ = N_e=0
        let att = attractor_state(1, 0.0, 1).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(att.amps[0].im, r, epsilon = 1e-14);
        assert_abs_diff_eq!(att.amps[1].re, r, epsilon = 1e-14);
    }

    #[test]
    fn attractor_two_qubit_tangle_is_zero() {
        let att = attractor_state(-1, std::f64::consts::FRAC_PI_3, 2).unwrap();
        assert_abs_diff_eq!(pure_tangle(&att).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn basin_modulus_cap() {
        assert!(BasinParameter::new(2, Complex64::new(0.5, 0.0), 0.0).is_ok());
        assert!(BasinParameter::new(2, Complex64::new(0.71, 0.0), 0.0).is_err());
        match BasinParameter::new(3, Complex64::new(0.6, 0.0), 0.0) {
            Err(Error::BasinOutOfRange { modulus, max }) => {
                assert_abs_diff_eq!(modulus, 0.6, epsilon = 1e-15);
                assert_abs_diff_eq!(max, 0.5, epsilon = 1e-15);
            }
            other => panic!("expected BasinOutOfRange, got {other:?}"),
        }
    }

    #[test]
    fn basin_edge_cases_two_qubits() {
        // a = a_max = 1/√2: even levels only, (|ee⟩+|gg⟩)/√2
        let p = BasinParameter::new(2, Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0), 0.0)
            .unwrap();
        let psi = basin_state(&p);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(psi.amps[0].re, r, epsilon = 1e-12);
        assert_abs_diff_eq!(psi.amps[1].norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(psi.amps[2].re, r, epsilon = 1e-12);
        assert_abs_diff_eq!(pure_tangle(&psi).unwrap(), 1.0, epsilon = 1e-12);

        // a = 0: the middle Dicke level, (|eg⟩+|ge⟩)/√2
        let p0 = BasinParameter::new(2, Complex64::ZERO, 0.0).unwrap();
        let psi0 = basin_state(&p0);
        assert_abs_diff_eq!(psi0.amps[1].norm(), 1.0, epsilon = 1e-12);

        // a = 1/2 (= s): an even superposition, a product state
        let ph = BasinParameter::new(2, Complex64::new(0.5, 0.0), 0.0).unwrap();
        let psih = basin_state(&ph);
        assert_abs_diff_eq!(pure_tangle(&psih).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn basin_norm_complex_parameter() {
        let a = Complex64::from_polar(0.19, 2.1);
        for &theta in &[0.0, 0.7, -1.3] {
            let p = BasinParameter::new(4, a, theta).unwrap();
            let psi = basin_state(&p);
            assert_abs_diff_eq!(psi.norm(), 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn cat_reconstruction_is_exact() {
        for &nq in &[2usize, 3, 5] {
            let a = Complex64::from_polar(0.6 * BasinParameter::max_modulus(nq), -0.9);
            for &theta in &[0.0, 0.7] {
                let p = BasinParameter::new(nq, a, theta).unwrap();
                let psi = basin_state(&p);
                let cat = cat_decomposition(&p).unwrap();
                let rec = cat.reconstruct();
                let err: f64 = psi
                    .amps
                    .iter()
                    .zip(&rec)
                    .map(|(x, y)| (x - y).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(err < 1e-12, "N_q={nq} θ={theta}: residual {err:.2e}");
            }
        }
    }

    #[test]
    fn cat_single_branch_point() {
        // w₋ vanishes where a = s, i.e. a = 2^{−N_q/2}, and the basin
        // state is then the +β spin coherent state itself.
        for &nq in &[2usize, 4, 7] {
            let a = Complex64::new((2f64).powf(-0.5 * nq as f64), 0.0);
            let p = BasinParameter::new(nq, a, 0.4).unwrap();
            let cat = cat_decomposition(&p).unwrap();
            assert_abs_diff_eq!(cat.weight_minus.norm(), 0.0, epsilon = 1e-13);
            let psi = basin_state(&p);
            assert_abs_diff_eq!(psi.overlap(&cat.component_plus).norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn cat_equal_weights_at_basin_edges() {
        for &nq in &[2usize, 3, 6] {
            for a in [
                Complex64::ZERO,
                Complex64::new(BasinParameter::max_modulus(nq), 0.0),
            ] {
                let p = BasinParameter::new(nq, a, 0.0).unwrap();
                let cat = cat_decomposition(&p).unwrap();
                assert_relative_eq!(
                    cat.weight_plus.norm(),
                    cat.weight_minus.norm(),
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn predicted_field_state_is_normalized_cat() {
        let params = ModelParams::new(2, 1.0, 25.0, 0.3).unwrap();
        let p = BasinParameter::new(2, Complex64::new(0.2, 0.1), 0.3).unwrap();
        let amps = predicted_field_state(&p, &params).unwrap();
        let n2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        assert_abs_diff_eq!(n2, 1.0, epsilon = 1e-12);
        // two antipodal lobes: mean photon number stays n̄
        let mean: f64 = amps
            .iter()
            .enumerate()
            .map(|(n, z)| n as f64 * z.norm_sqr())
            .sum();
        assert_relative_eq!(mean, 25.0, max_relative = 1e-4);
    }

    #[test]
    fn predicted_field_single_branch() {
        // a = s = 2^{−N_q/2} kills the |iα⟩ branch, leaving exactly |−iα⟩
        let params = ModelParams::new(3, 1.0, 16.0, 0.0).unwrap();
        let a = Complex64::new((2f64).powf(-1.5), 0.0);
        let p = BasinParameter::new(3, a, 0.0).unwrap();
        let amps = predicted_field_state(&p, &params).unwrap();
        let minus_i_alpha = coherent_field_amps(16.0, FRAC_PI_2, params.fock_cutoff).unwrap();
        let ov: Complex64 = amps
            .iter()
            .zip(&minus_i_alpha)
            .map(|(x, y)| x.conj() * y)
            .sum();
        assert_abs_diff_eq!(ov.norm(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn single_qubit_reaches_both_attractors() {
        // N_q = 1, n̄ = 50, θ = 0.7, register at the basin edge a = 1/√2:
        // P(att⁺, t*) and P(att⁻, 3t_r/2), frozen from an independent
        // computation.
        let params = ModelParams::new(1, 1.0, 50.0, 0.7).unwrap();
        let prop = build_propagator(&params).unwrap();
        let bp = BasinParameter::new(1, Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0), 0.7)
            .unwrap();
        let q = basin_state(&bp);
        let f = coherent_field_amps(50.0, 0.7, params.fock_cutoff).unwrap();
        let psi0 = symmetric_product(&q, &f).unwrap();
        let t = characteristic_times(&params).unwrap();
        let p_plus = attractor_probability_series(&prop, &psi0, &[t.attractor]).unwrap()[0];
        assert_abs_diff_eq!(p_plus, 0.995530483709, epsilon = 1e-6);
        let minus = attractor_state(-1, 0.7, 1).unwrap();
        let late = evolve(&prop, &psi0, t.attractor_minus).unwrap();
        let p_minus = state_probability(&late, &minus).unwrap();
        assert_abs_diff_eq!(p_minus, 0.970713677262, epsilon = 1e-6);
    }

    #[test]
    fn basin_samples_cover_the_disc() {
        let pts = basin_samples(2, 50);
        assert_eq!(pts.len(), 50);
        let r = BasinParameter::max_modulus(2);
        assert_eq!(pts[0], Complex64::ZERO);
        assert_abs_diff_eq!(pts[1].norm(), r, epsilon = 1e-15);
        assert_abs_diff_eq!(pts[2].norm(), r * std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert!(pts.iter().all(|a| BasinParameter::new(2, *a, 0.0).is_ok()));
        // the fill reaches both small and near-boundary radii
        let radii: Vec<f64> = pts[3..].iter().map(|a| a.norm()).collect();
        assert!(radii.iter().cloned().fold(f64::MAX, f64::min) < 0.15 * r);
        assert!(radii.iter().cloned().fold(0.0, f64::max) > 0.95 * r);
        assert_eq!(pts, basin_samples(2, 50));
    }

    #[test]
    fn probability_series_matches_pieces() {
        let params = ModelParams::with_cutoff(2, 1.0, 4.0, 0.2, 40).unwrap();
        let prop = build_propagator(&params).unwrap();
        let bp = BasinParameter::new(2, Complex64::new(0.3, -0.2), 0.2).unwrap();
        let f = coherent_field_amps(4.0, 0.2, 40).unwrap();
        let psi0 = symmetric_product(&basin_state(&bp), &f).unwrap();
        let times = [0.0, 1.5, 6.0];
        let series = attractor_probability_series(&prop, &psi0, &times).unwrap();
        let target = attractor_state(1, 0.2, 2).unwrap();
        for (&t, &p) in times.iter().zip(&series) {
            let direct = state_probability(&evolve(&prop, &psi0, t).unwrap(), &target).unwrap();
            assert_eq!(p, direct);
        }
    }
}
