//! Homeomorphism synthesis on tree stages, finite-image maps standing in
//! for limits of homeomorphisms, and exact oscillation on trees.

pub mod beta;
pub mod embed;
pub mod finite_map;
pub mod homeo;
pub mod partial;
pub mod stab;
pub mod witness;

use thiserror::Error;

use crate::dendrite::TreeError;

pub use beta::{verify_beta_le_2, BetaCheck};
pub use finite_map::{betweenness_preserved, collapse_map, tree_eps_derivative, FiniteImageTreeMap, Piece, PointMap};
pub use homeo::{read_homeo, write_homeo, Outside, TreeHomeo};
pub use partial::{back_and_forth, leaf_class, PartialHomeo};
pub use stab::{stab_orbit_probe, OrbitProbe};
pub use witness::{
    ellis_family, minimal_witness, pab_approx, proximal_witness, rigidity_sequence, twocolor_pab_sequence, EllisFamily,
    PabSequence, RigidStep,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("invalid homeomorphism: {0}")]
    Invalid(String),
    #[error("not reachable at this stage's resolution: {0}")]
    Resolution(String),
    #[error("incompatible input: {0}")]
    Incompatible(String),
    #[error("unsupported map: {0}")]
    Unsupported(String),
}
