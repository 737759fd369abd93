mod cube;
pub mod dodeca;
mod landmarks;
mod layered;
mod validate;

use std::fmt::Write as _;

pub use cube::{build_subdivided_cube, q_label, q_prime_trap_lines, qv};
pub use dodeca::{build_dodecahedron, face_label, DodecaFrame, Dodecahedron, N_FACES};
pub use landmarks::LandmarkTable;
pub use layered::{ConstructError, FaceAddress, Layered, Role};
pub use validate::{validate_construction, Check, ConstructionReport, ValidateOptions};

use crate::graph::Vertex;

pub fn build_layered_dodecahedron(layers: u32) -> Result<(Layered, LandmarkTable), ConstructError> {
    let d = Layered::new(layers)?;
    let t = LandmarkTable::base(&d);
    Ok((d, t))
}

/// One line per (vertex, address): "vertex_id face role layer side offset".
pub fn face_address_dump(d: &Layered) -> String {
    let mut out = String::new();
    for v in 0..d.graph().n_vertices() as Vertex {
        for a in d.addresses(v) {
            writeln!(out, "{v} {a}").unwrap();
        }
    }
    out
}
