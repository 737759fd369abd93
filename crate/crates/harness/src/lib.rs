//! Command-line workbench: graph builds and checks, exact solving, matches, tournaments and the play server.

pub mod graphs;
pub mod play;
pub mod serve;
pub mod tournament;

pub use graphs::{GraphId, Loaded};
