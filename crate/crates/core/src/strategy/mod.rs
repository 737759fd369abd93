//! The robber strategy on the layered dodecahedron and the cop adversaries used to exercise it.

pub mod adversary;
pub mod case;
pub mod cert;
pub mod plan;
pub mod robber;
pub mod world;

use thiserror::Error;

use crate::construct::ConstructError;
use crate::graph::Vertex;

pub use adversary::{make_adversary, scripted_template, AdversaryKind, RemoteCops, RemoteHandle};
pub use case::{classify_case, Dispatch, CASE_LABELS};
pub use cert::{compute_r, reach_centre_check, safe_reach_check, CertError, RLoop, RResult};
pub use robber::{corner_kind, CornerKind, LogEntry, CentreRobber, RobberStats};
pub use world::{World, STRATEGY_LAYERS};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StrategyError {
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error("robber at {0} is not at a face centre")]
    NotAtCentre(Vertex),
    #[error("expected 3 cops, got {0}")]
    CopCount(usize),
    #[error("expected exactly one cop adjacent to the robber, found {0}")]
    AdjacentCops(usize),
    #[error("the strategy is pinned to 49 layers, graph has {0}")]
    WrongLayers(u32),
    #[error("robber at {0} is not at a corner")]
    NotAtCorner(Vertex),
    #[error("cop adjacent to or on the corner")]
    CopAtCorner,
    #[error("unknown adversary `{0}`")]
    UnknownAdversary(String),
}
