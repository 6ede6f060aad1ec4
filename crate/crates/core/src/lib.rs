//! Transition probabilities of the quantum singular oscillator
//! `H = p²/2 + ω(t)² x²/2 + g/(8x²)` with an arbitrary time-dependent
//! frequency.
//!
//! The pipeline is: a [`FrequencyProfile`](profile::FrequencyProfile) is fed
//! to the classical solver in [`reflection`], which returns the reflection
//! parameter `ρ`; the closed forms in [`transitions`] turn `(j, ρ)` into
//! probabilities, generating functions and the adiabatic-invariant ratio.
//! [`tdse`] recomputes the same probabilities by direct propagation in a
//! truncated su(1,1) basis.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod error;
pub mod model;
pub mod ode;
pub mod profile;
pub mod reflection;
pub mod registry;
pub mod settings;
pub mod special;
pub mod tdse;
pub mod transitions;

pub use algebra::{build_generators, hamiltonian_matrix, GeneratorMatrices, HermitianTridiagonal};
pub use error::{Error, ErrorClass, Result};
pub use model::{make_model, OscillatorModel};
pub use profile::{profile_from_params, profile_registry, FrequencyProfile};
pub use reflection::{compute_rho, rho_sudden, ReflectionResult};
pub use registry::{Params, Registry};
pub use settings::SolverSettings;
pub use tdse::{compare, OracleReport};
pub use transitions::{
    adiabatic_invariant_ratio, build_table, energy_level, generating_g0, generating_g1,
    transition_probability, vacuum_probability, TransitionTable,
};
