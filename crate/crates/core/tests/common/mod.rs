//! Helpers shared by the integration suites.
#![allow(dead_code)]

use cavrevive::hilbert::SymmetricState;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random normalized state of the joint symmetric space.
pub fn random_symmetric_state(nq: usize, cutoff: usize, rng: &mut ChaCha8Rng) -> SymmetricState {
    let dim = (nq + 1) * (cutoff + 1);
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    SymmetricState::new(nq, cutoff, amps).unwrap()
}

/// Connected components of the region {value ≥ frac·max} on a rows×cols
/// lattice, 4-adjacency, optionally wrapping the column axis (azimuth
/// seam of a sphere grid).
pub fn superlevel_components(
    values: &[f64],
    rows: usize,
    cols: usize,
    frac: f64,
    wrap_cols: bool,
) -> usize {
    assert_eq!(values.len(), rows * cols);
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let cut = frac * max;
    let mask: Vec<bool> = values.iter().map(|&v| v >= cut).collect();
    let mut label = vec![false; values.len()];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..values.len() {
        if !mask[start] || label[start] {
            continue;
        }
        count += 1;
        label[start] = true;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            let (r, c) = (idx / cols, idx % cols);
            let mut neighbors = Vec::with_capacity(4);
            if r > 0 {
                neighbors.push(idx - cols);
            }
            if r + 1 < rows {
                neighbors.push(idx + cols);
            }
            if c > 0 {
                neighbors.push(idx - 1);
            } else if wrap_cols {
                neighbors.push(idx + cols - 1);
            }
            if c + 1 < cols {
                neighbors.push(idx + 1);
            } else if wrap_cols {
                neighbors.push(idx + 1 - cols);
            }
            for n in neighbors {
                if mask[n] && !label[n] {
                    label[n] = true;
                    stack.push(n);
                }
            }
        }
    }
    count
}
