//! Exact-arithmetic toolkit for deciding whether a linear dissipative-looking
//! system `ξ̇ = Mξ` is Hamiltonian, factoring `M = A·S` with `A` alternating
//! and `S` symmetric, and deriving canonical Hamiltonians and Lagrangians
//! for second-order equations `ẍ = B₁ẋ + B₂x + f(x)`.

pub mod canonicalizer;
pub mod criterion;
pub mod dynamics;
pub mod error;
pub mod factorization;
pub mod matrix;
pub mod multipoly;
pub mod phase;
pub mod poly;
pub mod potential;
pub mod rational;
pub mod reduction;
mod symsolve;

pub use error::{Error, Result};
pub use matrix::RatMatrix;
pub use multipoly::MultiPoly;
pub use phase::PhaseVars;
pub use poly::UniPoly;
pub use rational::Rational;
pub use symsolve::SearchConfig;
