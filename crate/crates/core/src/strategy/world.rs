use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, OnceLock};

use super::StrategyError;
use crate::construct::{LandmarkTable, Layered, Role, N_FACES};
use crate::graph::{multi_bfs, Graph, Vertex};

/// Layer count the robber strategy is pinned to.
pub const STRATEGY_LAYERS: u32 = 49;

const FAR: u16 = u16::MAX;

/// A layered dodecahedron with its 120 labelling frames and distance fields to every named landmark.
pub struct World {
    pub d: Layered,
    frames: Vec<LandmarkTable>,
    fields: Vec<Box<[u16]>>,
    point: HashMap<Vertex, usize>,
    centre: [usize; N_FACES],
    side: Vec<usize>,
    face: [usize; N_FACES],
    centre_face: HashMap<Vertex, usize>,
}

impl World {
    pub fn new(layers: u32) -> Result<Self, StrategyError> {
        let d = Layered::new(layers)?;
        let mut frames = Vec::with_capacity(120);
        for u in 0..N_FACES {
            for start in 0..5 {
                for refl in [false, true] {
                    frames.push(LandmarkTable::new(&d, u, start, refl));
                }
            }
        }
        let g = d.graph();
        let mut fields: Vec<Box<[u16]>> = Vec::new();
        let mut point = HashMap::new();
        let mut add_point = |fields: &mut Vec<Box<[u16]>>, v: Vertex| -> usize {
            *point.entry(v).or_insert_with(|| {
                fields.push(to_u16(multi_bfs(g, &[v])));
                fields.len() - 1
            })
        };
        let centre: [usize; N_FACES] = std::array::from_fn(|f| add_point(&mut fields, d.center(f)));
        for c in 0..20 {
            add_point(&mut fields, c);
        }
        let l = d.layers();
        let edges = d.dodeca.edges().to_vec();
        let mut side = Vec::with_capacity(edges.len());
        for &(a, b) in &edges {
            let path = d.outer_path(a, b);
            add_point(&mut fields, path[path.len() / 2]);
            let f = d.dodeca.faces_on_edge(a, b)[0];
            add_point(&mut fields, d.side_vertex(f, a, b, l, l)?);
            add_point(&mut fields, d.side_vertex(f, b, a, l, l)?);
            fields.push(to_u16(multi_bfs(g, &path)));
            side.push(fields.len() - 1);
        }
        let face: [usize; N_FACES] = std::array::from_fn(|f| {
            fields.push(to_u16(multi_bfs(g, &d.face_vertices(f))));
            fields.len() - 1
        });
        let centre_face = (0..N_FACES).map(|f| (d.center(f), f)).collect();
        Ok(World { d, frames, fields, point, centre, side, face, centre_face })
    }

    /// The process-wide world on 𝒟(49).
    pub fn shared() -> Arc<World> {
        static W: OnceLock<Arc<World>> = OnceLock::new();
        W.get_or_init(|| Arc::new(World::new(STRATEGY_LAYERS).expect("layered graph builds"))).clone()
    }

    pub fn graph(&self) -> &Graph {
        self.d.graph()
    }

    pub fn layers(&self) -> u32 {
        self.d.layers()
    }

    pub fn frames(&self) -> &[LandmarkTable] {
        &self.frames
    }

    pub fn frame(&self, face: usize, start: usize, reflected: bool) -> &LandmarkTable {
        &self.frames[frame_index(face, start, reflected)]
    }

    pub fn frame_at(&self, index: usize) -> &LandmarkTable {
        &self.frames[index]
    }

    /// The face whose centre is `v`.
    pub fn centre_face(&self, v: Vertex) -> Option<usize> {
        self.centre_face.get(&v).copied()
    }

    fn get(field: &[u16], v: Vertex) -> u32 {
        let d = field[v as usize];
        if d == FAR {
            u32::MAX
        } else {
            d as u32
        }
    }

    pub fn to_centre(&self, f: usize, v: Vertex) -> u32 {
        Self::get(&self.fields[self.centre[f]], v)
    }

    pub fn to_face(&self, f: usize, v: Vertex) -> u32 {
        Self::get(&self.fields[self.face[f]], v)
    }

    pub fn to_faces(&self, fs: &[usize], v: Vertex) -> u32 {
        fs.iter().map(|&f| self.to_face(f, v)).min().unwrap_or(u32::MAX)
    }

    /// Distance from `v` to the outer side path between adjacent corners `a` and `b`.
    pub fn to_side(&self, a: Vertex, b: Vertex, v: Vertex) -> u32 {
        let e = self.d.dodeca.edge_index(a, b).expect("corners are adjacent");
        Self::get(&self.fields[self.side[e]], v)
    }

    /// Precomputed field toward a single landmark vertex.
    pub fn point_field(&self, target: Vertex) -> Option<&[u16]> {
        self.point.get(&target).map(|&i| &*self.fields[i])
    }

    pub fn to_point(&self, target: Vertex, v: Vertex) -> Option<u32> {
        self.point_field(target).map(|f| Self::get(f, v))
    }

    /// Shortest path from `from` to the source of `field`, lowest id first at ties.
    pub fn descend(&self, field: &[u16], from: Vertex) -> Vec<Vertex> {
        let g = self.graph();
        let mut d = field[from as usize];
        let mut path = Vec::with_capacity(d as usize + 1);
        let mut x = from;
        path.push(x);
        while d > 0 && d != FAR {
            x = *g.neighbors(x).iter().find(|&&y| field[y as usize] == d - 1).expect("field is a BFS field");
            path.push(x);
            d -= 1;
        }
        path
    }

    /// Image of `v` under the automorphism taking frame `from` onto frame `to`.
    pub fn map_vertex(&self, v: Vertex, from: &LandmarkTable, to: &LandmarkTable) -> Vertex {
        let d = &self.d;
        let corner = |c: Vertex| -> Vertex {
            let r = from.frame.rank(c);
            [to.v, to.q, to.x, to.y][r / 5][r % 5]
        };
        if d.is_corner(v) {
            return corner(v);
        }
        let a = d.address(v);
        let f = a.face as usize;
        let f2 = to.face[from.frame.label_of_face(f)];
        let cyc = d.dodeca.faces[f];
        let map_pos = |n: u32, k: u32| -> u32 {
            let side = d.side_len(n);
            let (s, t) = ((k / side) as usize, k % side);
            let (a, b) = (corner(cyc[s]), corner(cyc[(s + 1) % 5]));
            d.side_position(f2, a, b, n, t).expect("automorphism preserves sides") % d.ring_len(n)
        };
        match a.role {
            Role::Center => d.center(f2),
            Role::Ring { layer, side, offset } => d.ring(f2, layer, map_pos(layer, side * d.side_len(layer) + offset)),
            Role::CenterConnector { spoke } => d.spoke_middle(f2, map_pos(1, spoke)),
            Role::LayerConnector { layer, index } => d.connector_middle(f2, layer, map_pos(layer + 1, index)),
        }
    }

    /// Inward neighbour of corner `c` inside face `f`.
    pub fn inward_of_corner(&self, c: Vertex, f: usize) -> Vertex {
        let field = &self.fields[self.centre[f]];
        let dc = field[c as usize];
        *self.graph().neighbors(c).iter().find(|&&y| field[y as usize] == dc - 1).expect("corner lies on a face")
    }
}

pub fn frame_index(face: usize, start: usize, reflected: bool) -> usize {
    face * 10 + start * 2 + reflected as usize
}

fn to_u16(d: Vec<u32>) -> Box<[u16]> {
    d.into_iter().map(|x| if x >= FAR as u32 { FAR } else { x as u16 }).collect()
}

/// Single-source distance fields for arbitrary targets, keeping the most recent few.
pub struct FieldCache {
    cap: usize,
    entries: VecDeque<(Vertex, Arc<[u16]>)>,
}

impl FieldCache {
    pub fn new(cap: usize) -> Self {
        FieldCache { cap: cap.max(1), entries: VecDeque::new() }
    }

    pub fn get(&mut self, g: &Graph, target: Vertex) -> Arc<[u16]> {
        if let Some(i) = self.entries.iter().position(|(t, _)| *t == target) {
            let e = self.entries.remove(i).unwrap();
            self.entries.push_front(e);
            return self.entries[0].1.clone();
        }
        let f: Arc<[u16]> = to_u16(multi_bfs(g, &[target])).into();
        if self.entries.len() == self.cap {
            self.entries.pop_back();
        }
        self.entries.push_front((target, f.clone()));
        f
    }
}

/// A distance field borrowed from the world or owned by a cache.
pub enum FieldRef<'a> {
    Landmark(&'a [u16]),
    Cached(Arc<[u16]>),
}

impl std::ops::Deref for FieldRef<'_> {
    type Target = [u16];
    fn deref(&self) -> &[u16] {
        match self {
            FieldRef::Landmark(f) => f,
            FieldRef::Cached(f) => f,
        }
    }
}

impl FieldRef<'_> {
    pub fn dist(&self, v: Vertex) -> u32 {
        World::get(self, v)
    }
}

/// Distance lookups toward a target: the world's landmark field when there is one, otherwise a cached BFS.
pub fn field_for<'a>(w: &'a World, cache: &mut FieldCache, target: Vertex) -> FieldRef<'a> {
    match w.point_field(target) {
        Some(f) => FieldRef::Landmark(f),
        None => FieldRef::Cached(cache.get(w.graph(), target)),
    }
}
