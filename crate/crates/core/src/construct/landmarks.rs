use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::dodeca::{face_label, DodecaFrame, N_FACES};
use super::layered::{ConstructError, Layered};
use crate::graph::Vertex;

/// Named vertices of the layered dodecahedron relative to one labelling frame.
#[derive(Clone, Debug)]
pub struct LandmarkTable {
    pub frame: DodecaFrame,
    pub start: usize,
    pub reflected: bool,
    /// Face ids of U, U₁, …, U₁₁.
    pub face: [usize; N_FACES],
    /// Centres o, o₁, …, o₁₁.
    pub o: [Vertex; N_FACES],
    pub v: [Vertex; 5],
    pub q: [Vertex; 5],
    pub x: [Vertex; 5],
    pub y: [Vertex; 5],
    /// mᵢ is the middle of B₅₊ᵢ.
    pub m: [Vertex; 5],
    /// B₁..B₁₅ at indices 1..=15.
    pub b: Vec<Vec<Vertex>>,
    pub b_middle: Vec<Vertex>,
    pub p: Vertex,
    pub q_mark: Vertex,
    /// Neighbours of o in the three normal positions.
    pub p123: [Vertex; 3],
    names: BTreeMap<String, Vertex>,
}

impl LandmarkTable {
    pub fn base(d: &Layered) -> Self {
        Self::new(d, 0, 0, false)
    }

    pub fn new(d: &Layered, u: usize, start: usize, reflected: bool) -> Self {
        let frame = DodecaFrame::new(&d.dodeca, u, start, reflected);
        let l = d.layers();
        let face = frame.face;
        let o = face.map(|f| d.center(f));
        let mut b = vec![Vec::new()];
        for i in 1..=15 {
            let (a, z) = frame.b_endpoints(i);
            b.push(d.outer_path(a, z));
        }
        let b_middle: Vec<Vertex> = b.iter().map(|p| if p.is_empty() { 0 } else { p[p.len() / 2] }).collect();
        let m = [b_middle[6], b_middle[7], b_middle[8], b_middle[9], b_middle[10]];
        let u0 = face[0];
        let (v3, v4, v5) = (frame.v[2], frame.v[3], frame.v[4]);
        let p = d.side_vertex(u0, v3, v4, l, l).unwrap();
        let q_mark = d.side_vertex(u0, v4, v5, l, l).unwrap();
        let p123 = [0, 1, 2].map(|t| {
            let pos = d.side_position(u0, v4, v5, 1, t).unwrap();
            d.spoke_middle(u0, pos)
        });
        let mut t = LandmarkTable {
            face,
            o,
            v: frame.v,
            q: frame.q,
            x: frame.x,
            y: frame.y,
            m,
            b,
            b_middle,
            p,
            q_mark,
            p123,
            frame,
            start,
            reflected,
            names: BTreeMap::new(),
        };
        t.fill_names(d);
        t
    }

    fn fill_names(&mut self, d: &Layered) {
        let mut names = BTreeMap::new();
        for i in 0..N_FACES {
            let label = face_label(i);
            names.insert(format!("o@{label}"), self.o[i]);
            let corners = self.face_corners(d, i);
            for j in 0..5 {
                names.insert(format!("v{}@{label}", j + 1), corners[j]);
                let path = d.outer_path(corners[(j + 4) % 5], corners[j]);
                names.insert(format!("m{}@{label}", j + 1), path[path.len() / 2]);
            }
        }
        for i in 1..=15 {
            names.insert(format!("m@B{i}"), self.b_middle[i]);
        }
        for i in 0..5 {
            names.insert(format!("q{}", i + 1), self.q[i]);
            names.insert(format!("x{}", i + 1), self.x[i]);
            names.insert(format!("y{}", i + 1), self.y[i]);
        }
        names.insert("m".into(), self.b_middle[1]);
        names.insert("p".into(), self.p);
        names.insert("q".into(), self.q_mark);
        for (i, &z) in self.p123.iter().enumerate() {
            names.insert(format!("p{}", i + 1), z);
        }
        self.names = names;
    }

    /// Corners of the face with label index `i`, starting at its lowest-ranked corner and following the frame's direction.
    pub fn face_corners(&self, d: &Layered, i: usize) -> [Vertex; 5] {
        let mut cyc = d.dodeca.faces[self.face[i]];
        if self.reflected {
            cyc.reverse();
        }
        let start = (0..5).min_by_key(|&j| self.frame.rank(cyc[j])).unwrap();
        std::array::from_fn(|j| cyc[(start + j) % 5])
    }

    pub fn resolve(&self, name: &str) -> Result<Vertex, ConstructError> {
        self.names.get(name).copied().ok_or_else(|| ConstructError::UnknownLandmark(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = (&str, Vertex)> {
        self.names.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn sidecar(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.names() {
            writeln!(out, "{k} {v}").unwrap();
        }
        out
    }

    /// Side path Bᵢ as a vertex set.
    pub fn side(&self, i: usize) -> &[Vertex] {
        &self.b[i]
    }
}
