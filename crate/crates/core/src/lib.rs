//! Exact symbolic laboratory for tame dynamical systems: Cantor-normal-form
//! ordinals, Cantor-Bendixson ranks of countable compact spaces, oscillation
//! ranks of parity-flip systems, and finite geometric-tree stages of
//! dendrites with homeomorphism synthesis.

pub mod betarank;
pub mod cbspace;
pub mod cli;
pub mod dendrite;
pub mod dynamics;
pub mod ordinal;
pub mod rational;
pub mod report;
pub mod suites;
pub mod textio;

pub use cbspace::{build_space, BaseSubset, CBSpace, PointAddress};
pub use ordinal::{Ordinal, Parity};
pub use rational::Rational;
