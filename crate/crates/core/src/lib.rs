//! Numerical generalized functions.
//!
//! Distributions such as the Heaviside step `H` and the Dirac delta `δ` are
//! embedded as ε-indexed families of smooth functions built from a single
//! mollifier. Products like `(H² − H)·H'` then make sense representative by
//! representative, integrals become ε-indexed numbers, and the asymptotics
//! module classifies how those numbers behave as ε → 0.
//!
//! The [`qft`] module carries the same ideas to truncated Fock-space toy
//! models: exact (spectral) transition probabilities next to Dyson partial
//! sums, with couplings that may diverge as ε → 0.

pub mod asymptotics;
pub mod embedding;
pub mod error;
pub mod gf;
pub mod jet;
pub mod qft;
pub mod quadrature;

pub use asymptotics::{
    classify, fit_power_law, is_associated, is_negligible, limit_estimate, AssociationReport,
    AsymptoticClass, EpsilonGrid, Thresholds, Verdict,
};
pub use embedding::{
    embed_delta, embed_heaviside, embed_smooth, make_mollifier, standard_test_suite, Mollifier,
    MollifierKind, TestFunction,
};
pub use error::{Error, Result};
pub use gf::{BinaryOp, Epsilon, GenFunction, GenNumber, SmoothRepresentative, Support};
pub use qft::{
    build_hamiltonian, dyson_partial_sums, evolve, ladder_matrices, sweep_epsilon, transition,
    transition_probability, truncation_study, FockSpec, InteractionSpec, Potential, StateVector,
    TransitionProblem,
};
pub use quadrature::{integrate, integrate_gf, pair, QuadratureResult};
