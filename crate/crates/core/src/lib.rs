//! Cops-and-robbers workbench: graphs, the layered dodecahedron, game engine, exact solver and robber strategy.

pub mod construct;
pub mod graph;
pub mod engine;
pub mod solver;
pub mod strategy;
