//! Exact simulator for N_q identical qubits resonantly coupled to one
//! cavity mode through the rotating-wave interaction λ(âJ⁺ + â†J⁻).
//!
//! The excitation number â†â + N_e is conserved, so the joint Hilbert
//! space splits into small tridiagonal blocks that are diagonalized once
//! and reused for evolution to any time with no step error. On top of
//! that engine sit the quantities behind collapse and revival physics:
//! Rabi envelopes, entanglement entropy and tangle, Husimi Q functions
//! for field and register, the attractor states every basin state
//! reaches at t* = t_r/2N_q, and the cat decomposition that tracks a
//! Schrödinger-cat superposition moving from the register into the field
//! and back.
//!
//! ```
//! use cavrevive::hilbert::{coherent_field_amps, symmetric_product, ModelParams};
//! use cavrevive::engine::{build_propagator, evolve};
//! use cavrevive::attractor::{attractor_state, basin_state, characteristic_times, BasinParameter};
//! use cavrevive::observables::state_probability;
//! use num_complex::Complex64;
//!
//! let params = ModelParams::new(2, 1.0, 50.0, 0.0).unwrap();
//! let a = BasinParameter::new(2, Complex64::new(0.5, 0.0), 0.0).unwrap();
//! let field = coherent_field_amps(50.0, 0.0, params.fock_cutoff).unwrap();
//! let psi0 = symmetric_product(&basin_state(&a), &field).unwrap();
//! let prop = build_propagator(&params).unwrap();
//! let t_star = characteristic_times(&params).unwrap().attractor;
//! let at_star = evolve(&prop, &psi0, t_star).unwrap();
//! let target = attractor_state(1, 0.0, 2).unwrap();
//! assert!(state_probability(&at_star, &target).unwrap() > 0.9);
//! ```

pub mod attractor;
pub mod engine;
pub mod error;
pub mod hilbert;
pub mod observables;
pub mod oracle;

pub use error::{Error, Result};
