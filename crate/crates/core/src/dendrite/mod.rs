//! Finite stages of dendrites: Wazewski refinements and the two-color
//! construction, with the exact path metric and arc/component calculus.

pub mod build;
pub mod cover;
pub mod endpoint;
pub mod io;
pub mod region;
pub mod stage;

use thiserror::Error;

use crate::rational::Rational;

pub use build::{build_twocolor_stage, build_twocolor_tower, build_wazewski_stage, star};
pub use cover::{build_convex_cover, ConvexCover, CoverRegion};
pub use endpoint::{classify_endpoint, type_witness, EndpointAddress, EndpointClass, EndpointKind};
pub use region::Region;
pub use stage::{Arc, Color, Direction, Edge, GeometricPoint, Order, PointType, Role, StageMode, TreeStage, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("edge parameter out of (0,1) in {0}")]
    BadParam(String),
    #[error("points coincide at {0}")]
    SamePoint(String),
    #[error("invalid orders: {0}")]
    InvalidOrders(String),
    #[error("{0}")]
    WrongMode(String),
    #[error("stage depth {have} is below the required {need}")]
    InsufficientDepth { need: u32, have: u32 },
    #[error("not enough marks on an arc for the requested thread")]
    NotEnoughMarks,
    #[error("bad thread: {0}")]
    BadThread(String),
    #[error("expected a positive value, got {0}")]
    NonPositive(Rational),
}
