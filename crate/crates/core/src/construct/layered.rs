use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::dodeca::{Dodecahedron, N_FACES};
use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("layer count must be at least 1")]
    ZeroLayers,
    #[error("unknown landmark `{0}`")]
    UnknownLandmark(String),
    #[error("vertex {0} is not a ring vertex of face {1}")]
    NotRing(Vertex, usize),
    #[error("layers out of order: {0} > {1}")]
    LayerOrder(u32, u32),
    #[error("corners {0} and {1} do not bound a side of face {2}")]
    NotASide(Vertex, Vertex, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Role {
    Center,
    Ring { layer: u32, side: u32, offset: u32 },
    CenterConnector { spoke: u32 },
    LayerConnector { layer: u32, index: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaceAddress {
    pub face: u8,
    pub role: Role,
}

impl fmt::Display for FaceAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.role {
            Role::Center => write!(f, "{} center - - -", self.face),
            Role::Ring { layer, side, offset } => write!(f, "{} ring {layer} {side} {offset}", self.face),
            Role::CenterConnector { spoke } => write!(f, "{} spoke - - {spoke}", self.face),
            Role::LayerConnector { layer, index } => write!(f, "{} connector {layer} - {index}", self.face),
        }
    }
}

/// The layered dodecahedron with `layers` nested pentagonal rings per face.
#[derive(Clone, Debug)]
pub struct Layered {
    layers: u32,
    pub dodeca: Dodecahedron,
    graph: Graph,
    face_base: Vec<u32>,
    faces_of: Vec<u16>,
}

impl Layered {
    pub fn new(layers: u32) -> Result<Self, ConstructError> {
        if layers == 0 {
            return Err(ConstructError::ZeroLayers);
        }
        let dodeca = Dodecahedron::new();
        let l = layers;
        let outer_base = 20u32;
        let per_face = 10 * l * l + 20 * l - 9;
        let first_face = outer_base + 30 * (2 * l + 1);
        let face_base: Vec<u32> = (0..N_FACES as u32).map(|f| first_face + f * per_face).collect();
        let n = (first_face + N_FACES as u32 * per_face) as usize;
        let mut me = Layered { layers, dodeca, graph: Graph::from_edges(0, &[]).unwrap(), face_base, faces_of: vec![0; n] };

        let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(me.closed_edge_count());
        for (e, &(a, b)) in me.dodeca.edges().iter().enumerate() {
            let base = outer_base + e as u32 * (2 * l + 1);
            let mut prev = a;
            for j in 0..2 * l + 1 {
                edges.push((prev, base + j));
                prev = base + j;
            }
            edges.push((prev, b));
        }
        for f in 0..N_FACES {
            let o = me.center(f);
            for k in 0..me.ring_len(1) {
                let mid = me.spoke_middle(f, k);
                edges.push((o, mid));
                edges.push((mid, me.ring(f, 1, k)));
            }
            for n in 1..l {
                let len = me.ring_len(n);
                for k in 0..len {
                    edges.push((me.ring(f, n, k), me.ring(f, n, (k + 1) % len)));
                }
                for up in 0..me.ring_len(n + 1) {
                    let mid = me.connector_middle(f, n, up);
                    edges.push((me.ring(f, n, me.inward(n + 1, up)), mid));
                    edges.push((mid, me.ring(f, n + 1, up)));
                }
            }
        }
        me.graph = Graph::from_edges(n, &edges).expect("construction produces a simple graph");
        for f in 0..N_FACES {
            for v in me.face_vertices(f) {
                me.faces_of[v as usize] |= 1 << f;
            }
        }
        Ok(me)
    }

    fn closed_edge_count(&self) -> usize {
        let l = self.layers as usize;
        180 * l * l + 480 * l - 60
    }

    pub fn layers(&self) -> u32 {
        self.layers
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn expected_vertices(l: u32) -> usize {
        let l = l as usize;
        120 * l * l + 300 * l - 58
    }

    pub fn expected_edges(l: u32) -> usize {
        let l = l as usize;
        180 * l * l + 480 * l - 60
    }

    pub fn ring_len(&self, n: u32) -> u32 {
        10 * n + 10
    }

    pub fn side_len(&self, n: u32) -> u32 {
        2 * n + 2
    }

    fn inner_ring_offset(&self, n: u32) -> u32 {
        5 * n * n + 5 * n - 10
    }

    fn inner_ring_total(&self) -> u32 {
        self.inner_ring_offset(self.layers)
    }

    pub fn center(&self, f: usize) -> Vertex {
        self.face_base[f]
    }

    pub fn spoke_middle(&self, f: usize, k: u32) -> Vertex {
        self.face_base[f] + 1 + self.inner_ring_total() + k
    }

    /// Middle vertex of the connector ending at position `up` of layer `n + 1`.
    pub fn connector_middle(&self, f: usize, n: u32, up: u32) -> Vertex {
        let before = 5 * (n - 1) * n + 20 * (n - 1);
        self.face_base[f] + 1 + self.inner_ring_total() + 20 + before + up
    }

    /// Position on layer `n - 1` joined to position `up` of layer `n` (n ≥ 2).
    pub fn inward(&self, n: u32, up: u32) -> u32 {
        let side_up = 2 * n + 2;
        let (s, t) = (up / side_up, up % side_up);
        let side_low = 2 * n;
        let len_low = self.ring_len(n - 1);
        match t {
            0 | 1 => s * side_low,
            t if t == side_up - 1 => ((s + 1) * side_low) % len_low,
            t => s * side_low + t - 1,
        }
    }

    /// Ring vertex of face `f` at layer `n`, position `k` counted along the face orientation from corner c₀.
    pub fn ring(&self, f: usize, n: u32, k: u32) -> Vertex {
        let len = self.ring_len(n);
        let k = k % len;
        if n < self.layers {
            return self.face_base[f] + 1 + self.inner_ring_offset(n) + k;
        }
        let side = self.side_len(n);
        let (s, t) = ((k / side) as usize, k % side);
        let cyc = self.dodeca.faces[f];
        let (a, b) = (cyc[s], cyc[(s + 1) % 5]);
        if t == 0 {
            return a;
        }
        let e = self.dodeca.edge_index(a, b).unwrap() as u32;
        let j = if a < b { t } else { side - t };
        20 + e * (2 * self.layers + 1) + j - 1
    }

    pub fn layer_vertices(&self, f: usize, n: u32) -> Vec<Vertex> {
        (0..self.ring_len(n)).map(|k| self.ring(f, n, k)).collect()
    }

    /// Ring position of the vertex on layer `n` of face `f` that lies `t` edges from corner `a` along the side toward corner `b`.
    pub fn side_position(&self, f: usize, a: Vertex, b: Vertex, n: u32, t: u32) -> Result<u32, ConstructError> {
        let cyc = self.dodeca.faces[f];
        let side = self.side_len(n);
        for s in 0..5 {
            if cyc[s] == a && cyc[(s + 1) % 5] == b {
                return Ok(s as u32 * side + t);
            }
            if cyc[s] == b && cyc[(s + 1) % 5] == a {
                return Ok((s as u32 * side + side - t) % self.ring_len(n));
            }
        }
        Err(ConstructError::NotASide(a, b, f))
    }

    pub fn side_vertex(&self, f: usize, a: Vertex, b: Vertex, n: u32, t: u32) -> Result<Vertex, ConstructError> {
        Ok(self.ring(f, n, self.side_position(f, a, b, n, t)?))
    }

    /// The side path of layer `n` from the corner below `a` to the corner below `b`.
    pub fn side_path(&self, f: usize, a: Vertex, b: Vertex, n: u32) -> Result<Vec<Vertex>, ConstructError> {
        (0..=self.side_len(n)).map(|t| self.side_vertex(f, a, b, n, t)).collect()
    }

    /// Vertices of the outer side path between adjacent dodecahedron corners `a` and `b`, from `a`.
    pub fn outer_path(&self, a: Vertex, b: Vertex) -> Vec<Vertex> {
        let f = self.dodeca.faces_on_edge(a, b)[0];
        self.side_path(f, a, b, self.layers).expect("adjacent corners bound a side")
    }

    pub fn face_vertices(&self, f: usize) -> Vec<Vertex> {
        let mut out = Vec::with_capacity((10 * self.layers * self.layers + 30 * self.layers) as usize);
        out.push(self.center(f));
        for n in 1..=self.layers {
            out.extend(self.layer_vertices(f, n));
        }
        for k in 0..20 {
            out.push(self.spoke_middle(f, k));
        }
        for n in 1..self.layers {
            for up in 0..self.ring_len(n + 1) {
                out.push(self.connector_middle(f, n, up));
            }
        }
        out
    }

    pub fn faces_mask(&self, v: Vertex) -> u16 {
        self.faces_of[v as usize]
    }

    pub fn in_face(&self, v: Vertex, f: usize) -> bool {
        self.faces_of[v as usize] & (1 << f) != 0
    }

    pub fn faces_of(&self, v: Vertex) -> Vec<usize> {
        (0..N_FACES).filter(|&f| self.in_face(v, f)).collect()
    }

    pub fn is_corner(&self, v: Vertex) -> bool {
        v < 20
    }

    /// Every FaceAddress of `v`, ordered by face id; outer-layer vertices have one per incident face.
    pub fn addresses(&self, v: Vertex) -> Vec<FaceAddress> {
        let l = self.layers;
        let mut out = Vec::new();
        if v < 20 {
            for f in self.dodeca.faces_at(v) {
                let s = self.dodeca.face_position(f, v).unwrap() as u32;
                out.push(FaceAddress { face: f as u8, role: Role::Ring { layer: l, side: s, offset: 0 } });
            }
            return out;
        }
        let first_face = self.face_base[0];
        if v < first_face {
            let e = (v - 20) / (2 * l + 1);
            let j = (v - 20) % (2 * l + 1) + 1;
            let (a, b) = self.dodeca.edges()[e as usize];
            for f in self.dodeca.faces_on_edge(a, b) {
                let pos = self.side_position(f, a, b, l, j).unwrap();
                let side = self.side_len(l);
                out.push(FaceAddress {
                    face: f as u8,
                    role: Role::Ring { layer: l, side: pos / side, offset: pos % side },
                });
            }
            return out;
        }
        let per_face = self.face_base.get(1).copied().unwrap_or(u32::MAX) - first_face;
        let f = ((v - first_face) / per_face) as usize;
        let mut rel = v - self.face_base[f];
        let role = if rel == 0 {
            Role::Center
        } else {
            rel -= 1;
            if rel < self.inner_ring_total() {
                let mut n = 1;
                while self.inner_ring_offset(n + 1) <= rel {
                    n += 1;
                }
                let k = rel - self.inner_ring_offset(n);
                let side = self.side_len(n);
                Role::Ring { layer: n, side: k / side, offset: k % side }
            } else {
                rel -= self.inner_ring_total();
                if rel < 20 {
                    Role::CenterConnector { spoke: rel }
                } else {
                    rel -= 20;
                    let mut n = 1;
                    while 5 * n * (n + 1) + 20 * n <= rel {
                        n += 1;
                    }
                    Role::LayerConnector { layer: n, index: rel - (5 * (n - 1) * n + 20 * (n - 1)) }
                }
            }
        };
        out.push(FaceAddress { face: f as u8, role });
        out
    }

    pub fn address(&self, v: Vertex) -> FaceAddress {
        self.addresses(v)[0]
    }

    pub fn vertex_at(&self, a: FaceAddress) -> Vertex {
        let f = a.face as usize;
        match a.role {
            Role::Center => self.center(f),
            Role::Ring { layer, side, offset } => self.ring(f, layer, side * self.side_len(layer) + offset),
            Role::CenterConnector { spoke } => self.spoke_middle(f, spoke),
            Role::LayerConnector { layer, index } => self.connector_middle(f, layer, index),
        }
    }

    /// (layer, position) of a ring vertex within face `f`.
    pub fn ring_coords(&self, f: usize, v: Vertex) -> Option<(u32, u32)> {
        self.addresses(v).into_iter().find_map(|a| match a.role {
            Role::Ring { layer, side, offset } if a.face as usize == f => {
                Some((layer, side * self.side_len(layer) + offset))
            }
            _ => None,
        })
    }

    pub fn ring_distance(&self, n: u32, k1: u32, k2: u32) -> u32 {
        let len = self.ring_len(n);
        let d = k1.abs_diff(k2) % len;
        d.min(len - d)
    }

    /// Position on layer `r` of the radial descent from position `k` on layer `n` (r ≤ n).
    pub fn project(&self, n: u32, k: u32, r: u32) -> u32 {
        let mut k = k;
        let mut n = n;
        while n > r {
            k = self.inward(n, k);
            n -= 1;
        }
        k
    }

    /// The unique shortest path from ring vertex `v` of face `f` to the centre.
    pub fn radial_path(&self, f: usize, v: Vertex) -> Result<Vec<Vertex>, ConstructError> {
        let (mut n, mut k) = self.ring_coords(f, v).ok_or(ConstructError::NotRing(v, f))?;
        let mut path = vec![v];
        while n > 1 {
            path.push(self.connector_middle(f, n - 1, k));
            k = self.inward(n, k);
            n -= 1;
            path.push(self.ring(f, n, k));
        }
        path.push(self.spoke_middle(f, k));
        path.push(self.center(f));
        Ok(path)
    }

    /// Distance between ring vertices of one face from the layer formula.
    pub fn face_distance_formula(&self, f: usize, x: Vertex, y: Vertex) -> Result<u32, ConstructError> {
        let (r, kx) = self.ring_coords(f, x).ok_or(ConstructError::NotRing(x, f))?;
        let (s, ky) = self.ring_coords(f, y).ok_or(ConstructError::NotRing(y, f))?;
        if r > s {
            return Err(ConstructError::LayerOrder(r, s));
        }
        let w = self.project(s, ky, r);
        Ok((2 * r + 2 * s).min(2 * (s - r) + self.ring_distance(r, w, kx)))
    }
}
