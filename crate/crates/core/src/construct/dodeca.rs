use crate::graph::{Graph, Vertex};

pub const N_FACES: usize = 12;

/// The dodecahedron with its 12 pentagonal faces, each stored as a consistently oriented 5-cycle.
///
/// Corner ids: v₁..v₅ = 0..4 (the face U), q₁..q₅ = 5..9, x₁..x₅ = 10..14 (the corner of Uᵢ
/// away from U), y₁..y₅ = 15..19 (the face U₁₁). Face ids follow the labels U, U₁, …, U₁₁.
#[derive(Clone, Debug)]
pub struct Dodecahedron {
    pub graph: Graph,
    pub faces: [[Vertex; 5]; N_FACES],
    edges: Vec<(Vertex, Vertex)>,
}

pub fn v(i: usize) -> Vertex {
    (i - 1) as Vertex
}
pub fn q(i: usize) -> Vertex {
    (4 + i) as Vertex
}
pub fn x(i: usize) -> Vertex {
    (9 + i) as Vertex
}
pub fn y(i: usize) -> Vertex {
    (14 + i) as Vertex
}

fn wrap(i: usize) -> usize {
    (i + 4) % 5 + 1
}

impl Dodecahedron {
    pub fn new() -> Self {
        let mut edges = Vec::with_capacity(30);
        for i in 1..=5 {
            edges.push((v(i), v(wrap(i + 1))));
            edges.push((v(i), q(i)));
            edges.push((q(i), x(i)));
            edges.push((q(i), x(wrap(i + 1))));
            edges.push((x(i), y(i)));
            edges.push((y(i), y(wrap(i + 1))));
        }
        let mut faces = [[0; 5]; N_FACES];
        faces[0] = [v(1), v(2), v(3), v(4), v(5)];
        for i in 1..=5 {
            faces[i] = [v(i), v(wrap(i - 1)), q(wrap(i - 1)), x(i), q(i)];
            faces[5 + i] = [q(i), x(i), y(i), y(wrap(i + 1)), x(wrap(i + 1))];
        }
        faces[11] = [y(1), y(5), y(4), y(3), y(2)];
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        let graph = Graph::from_edges(20, &edges).expect("dodecahedron edges are simple");
        Dodecahedron { graph, faces, edges }
    }

    /// Sorted list of the 30 edges as (low, high).
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge_index(&self, a: Vertex, b: Vertex) -> Option<usize> {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).ok()
    }

    pub fn faces_at(&self, c: Vertex) -> Vec<usize> {
        (0..N_FACES).filter(|&f| self.faces[f].contains(&c)).collect()
    }

    /// Faces containing both endpoints of an edge (exactly two for an edge).
    pub fn faces_on_edge(&self, a: Vertex, b: Vertex) -> Vec<usize> {
        (0..N_FACES)
            .filter(|&f| self.faces[f].contains(&a) && self.faces[f].contains(&b))
            .collect()
    }

    pub fn face_position(&self, f: usize, c: Vertex) -> Option<usize> {
        self.faces[f].iter().position(|&z| z == c)
    }
}

impl Default for Dodecahedron {
    fn default() -> Self {
        Self::new()
    }
}

pub fn build_dodecahedron() -> Graph {
    Dodecahedron::new().graph
}

/// The labelling of the dodecahedron seen from a face U, a first corner v₁ and a direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DodecaFrame {
    /// Face ids of U, U₁, …, U₁₁.
    pub face: [usize; N_FACES],
    pub v: [Vertex; 5],
    pub q: [Vertex; 5],
    pub x: [Vertex; 5],
    pub y: [Vertex; 5],
}

impl DodecaFrame {
    pub fn new(d: &Dodecahedron, u: usize, start: usize, reflected: bool) -> Self {
        let cyc = d.faces[u];
        let mut vs = [0; 5];
        for (i, slot) in vs.iter_mut().enumerate() {
            *slot = if reflected { cyc[(start + 5 - i) % 5] } else { cyc[(start + i) % 5] };
        }
        let mut face = [usize::MAX; N_FACES];
        face[0] = u;
        let mut qs = [0; 5];
        for i in 0..5 {
            let prev = vs[(i + 4) % 5];
            face[1 + i] = d.faces_on_edge(prev, vs[i]).into_iter().find(|&f| f != u).unwrap();
            qs[i] = *d.graph.neighbors(vs[i]).iter().find(|c| !vs.contains(c)).unwrap();
        }
        for i in 0..5 {
            face[6 + i] = d
                .faces_at(qs[i])
                .into_iter()
                .find(|&f| f != face[1 + i] && f != face[1 + (i + 1) % 5])
                .unwrap();
        }
        face[11] = (0..N_FACES).find(|f| !face.contains(f)).unwrap();
        let mut xs = [0; 5];
        for i in 0..5 {
            xs[i] = *d.faces[face[1 + i]]
                .iter()
                .find(|c| !vs.contains(c) && !qs.contains(c))
                .unwrap();
        }
        let mut ys = [0; 5];
        for i in 0..5 {
            ys[i] = *d.graph.neighbors(xs[i]).iter().find(|c| !qs.contains(c)).unwrap();
        }
        DodecaFrame { face, v: vs, q: qs, x: xs, y: ys }
    }

    /// Endpoints of the side path Bᵢ, i in 1..=15, in their naming order.
    pub fn b_endpoints(&self, i: usize) -> (Vertex, Vertex) {
        match i {
            1..=5 => (self.v[i - 1], self.q[i - 1]),
            6..=10 => (self.v[(i + 3) % 5], self.v[i - 6]),
            11..=15 => {
                let j = (i - 11 + 2) % 5;
                (self.x[j], self.y[j])
            }
            _ => panic!("side path index {i} out of 1..=15"),
        }
    }

    /// Rank of a corner in the naming order v < q < x < y.
    pub fn rank(&self, c: Vertex) -> usize {
        for (base, arr) in [(0, &self.v), (5, &self.q), (10, &self.x), (15, &self.y)] {
            if let Some(i) = arr.iter().position(|&z| z == c) {
                return base + i;
            }
        }
        unreachable!("corner {c} not labelled")
    }

    pub fn corner_name(&self, c: Vertex) -> String {
        let r = self.rank(c);
        format!("{}{}", ["v", "q", "x", "y"][r / 5], r % 5 + 1)
    }

    pub fn label_of_face(&self, f: usize) -> usize {
        self.face.iter().position(|&z| z == f).unwrap()
    }
}

pub fn face_label(i: usize) -> String {
    if i == 0 {
        "U".to_string()
    } else {
        format!("U{i}")
    }
}
