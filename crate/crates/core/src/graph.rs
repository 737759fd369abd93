use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

pub type Vertex = u32;

pub const INF: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range (n = {1})")]
    OutOfRange(u32, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(u32, u32),
    #[error("empty vertex set")]
    EmptySet,
    #[error("no path between {0} and {1}")]
    Disconnected(u32, u32),
    #[error("edge list parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Simple undirected graph in compressed sparse row form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<u32>,
    targets: Vec<Vertex>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut degree = vec![0u32; n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x as usize >= n {
                    return Err(GraphError::OutOfRange(x, n));
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0u32);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill: Vec<u32> = offsets[..n].to_vec();
        let mut targets = vec![0; 2 * edges.len()];
        for &(u, v) in edges {
            targets[fill[u as usize] as usize] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize] as usize] = u;
            fill[v as usize] += 1;
        }
        for v in 0..n {
            let slice = &mut targets[offsets[v] as usize..offsets[v + 1] as usize];
            slice.sort_unstable();
            if let Some(w) = slice.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (v as u32, w[0]);
                return Err(GraphError::DuplicateEdge(a.min(b), a.max(b)));
            }
        }
        Ok(Graph { offsets, targets })
    }

    pub fn n_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn n_edges(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.targets[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// `u == v` or adjacent.
    pub fn within_one(&self, u: Vertex, v: Vertex) -> bool {
        u == v || self.has_edge(u, v)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n_vertices() as Vertex)
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn check(&self, v: Vertex) -> Result<(), GraphError> {
        if (v as usize) < self.n_vertices() {
            Ok(())
        } else {
            Err(GraphError::OutOfRange(v, self.n_vertices()))
        }
    }

    pub fn bfs(&self, source: Vertex) -> Result<DistanceField, GraphError> {
        self.check(source)?;
        Ok(DistanceField { source: Source::Vertex(source), dist: multi_bfs(self, &[source]) })
    }

    pub fn bfs_from_set(&self, sources: &[Vertex]) -> Result<DistanceField, GraphError> {
        if sources.is_empty() {
            return Err(GraphError::EmptySet);
        }
        for &s in sources {
            self.check(s)?;
        }
        Ok(DistanceField { source: Source::Set(sources.to_vec()), dist: multi_bfs(self, sources) })
    }

    pub fn distance(&self, u: Vertex, v: Vertex) -> Result<u32, GraphError> {
        self.check(u)?;
        self.check(v)?;
        Ok(Searcher::new(self.n_vertices()).distance(self, u, v))
    }

    pub fn distance_to_set(&self, v: Vertex, a: &[Vertex]) -> Result<u32, GraphError> {
        self.set_to_set_distance(&[v], a)
    }

    pub fn set_to_set_distance(&self, a: &[Vertex], b: &[Vertex]) -> Result<u32, GraphError> {
        if a.is_empty() || b.is_empty() {
            return Err(GraphError::EmptySet);
        }
        for &x in a.iter().chain(b) {
            self.check(x)?;
        }
        let field = multi_bfs(self, a);
        Ok(b.iter().map(|&y| field[y as usize]).min().unwrap())
    }

    /// Shortest path from `u` to `v`; at every step the lowest-id neighbor one hop closer to `v` is taken.
    pub fn shortest_path(&self, u: Vertex, v: Vertex) -> Result<Vec<Vertex>, GraphError> {
        self.check(u)?;
        self.check(v)?;
        let field = multi_bfs(self, &[v]);
        path_down(self, &field, u).ok_or(GraphError::Disconnected(u, v))
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(16 * self.n_edges());
        writeln!(out, "p {} {}", self.n_vertices(), self.n_edges()).unwrap();
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut header = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| GraphError::Parse { line: i + 1, msg: msg.to_string() };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if header.is_none() {
                if fields.len() != 3 || fields[0] != "p" {
                    return Err(err("expected header `p <n> <m>`"));
                }
                let n: usize = fields[1].parse().map_err(|_| err("bad vertex count"))?;
                let m: usize = fields[2].parse().map_err(|_| err("bad edge count"))?;
                header = Some((n, m));
                continue;
            }
            if fields.len() != 2 {
                return Err(err("expected `u v`"));
            }
            let u: Vertex = fields[0].parse().map_err(|_| err("bad vertex id"))?;
            let v: Vertex = fields[1].parse().map_err(|_| err("bad vertex id"))?;
            edges.push((u, v));
        }
        let (n, m) = header.ok_or(GraphError::Parse { line: 0, msg: "missing header".into() })?;
        if edges.len() != m {
            return Err(GraphError::Parse {
                line: 0,
                msg: format!("header says {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edges(n, &edges)
    }

    /// Length of a shortest cycle, or `None` for forests.
    pub fn girth(&self) -> Option<u32> {
        let n = self.n_vertices();
        let mut best = INF;
        let mut dist = vec![INF; n];
        let mut parent = vec![INF; n];
        let mut queue = VecDeque::new();
        for s in 0..n as Vertex {
            dist.iter_mut().for_each(|d| *d = INF);
            dist[s as usize] = 0;
            queue.clear();
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                for &y in self.neighbors(x) {
                    if dist[y as usize] == INF {
                        dist[y as usize] = dist[x as usize] + 1;
                        parent[y as usize] = x;
                        queue.push_back(y);
                    } else if parent[x as usize] != y {
                        best = best.min(dist[x as usize] + dist[y as usize] + 1);
                    }
                }
            }
        }
        (best != INF).then_some(best)
    }

    pub fn is_connected(&self) -> bool {
        self.n_vertices() == 0 || multi_bfs(self, &[0]).iter().all(|&d| d != INF)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Vertex(Vertex),
    Set(Vec<Vertex>),
}

#[derive(Clone, Debug)]
pub struct DistanceField {
    pub source: Source,
    pub dist: Vec<u32>,
}

impl DistanceField {
    #[inline]
    pub fn get(&self, v: Vertex) -> u32 {
        self.dist[v as usize]
    }

    /// Path from `from` down to the source along decreasing distances, lowest-id first.
    pub fn path_from(&self, g: &Graph, from: Vertex) -> Option<Vec<Vertex>> {
        path_down(g, &self.dist, from)
    }
}

pub fn multi_bfs(g: &Graph, sources: &[Vertex]) -> Vec<u32> {
    let mut dist = vec![INF; g.n_vertices()];
    let mut queue = Vec::with_capacity(g.n_vertices());
    for &s in sources {
        if dist[s as usize] != 0 {
            dist[s as usize] = 0;
            queue.push(s);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let dx = dist[x as usize] + 1;
        for &y in g.neighbors(x) {
            if dist[y as usize] == INF {
                dist[y as usize] = dx;
                queue.push(y);
            }
        }
    }
    dist
}

/// BFS restricted to vertices where `allowed` is true.
pub fn masked_bfs(g: &Graph, sources: &[Vertex], allowed: impl Fn(Vertex) -> bool) -> Vec<u32> {
    let mut dist = vec![INF; g.n_vertices()];
    let mut queue = Vec::new();
    for &s in sources {
        if allowed(s) && dist[s as usize] != 0 {
            dist[s as usize] = 0;
            queue.push(s);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let dx = dist[x as usize] + 1;
        for &y in g.neighbors(x) {
            if dist[y as usize] == INF && allowed(y) {
                dist[y as usize] = dx;
                queue.push(y);
            }
        }
    }
    dist
}

fn path_down(g: &Graph, dist: &[u32], from: Vertex) -> Option<Vec<Vertex>> {
    let mut d = dist[from as usize];
    if d == INF {
        return None;
    }
    let mut path = Vec::with_capacity(d as usize + 1);
    let mut x = from;
    path.push(x);
    while d > 0 {
        x = *g.neighbors(x).iter().find(|&&y| dist[y as usize] == d - 1)?;
        path.push(x);
        d -= 1;
    }
    Some(path)
}

/// Reusable BFS buffers for point queries that stop early.
pub struct Searcher {
    stamp: Vec<u32>,
    dist: Vec<u32>,
    queue: Vec<Vertex>,
    epoch: u32,
}

impl Searcher {
    pub fn new(n: usize) -> Self {
        Searcher { stamp: vec![0; n], dist: vec![0; n], queue: Vec::new(), epoch: 0 }
    }

    fn reset(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.queue.clear();
    }

    pub fn distance(&mut self, g: &Graph, u: Vertex, v: Vertex) -> u32 {
        self.distances(g, u, &[v])[0]
    }

    /// Breadth-first search from `source` that stops at the first discovered vertex accepted by `stop`.
    pub fn explore_until(&mut self, g: &Graph, source: Vertex, mut stop: impl FnMut(Vertex) -> bool) -> Option<Vertex> {
        self.reset();
        let e = self.epoch;
        self.stamp[source as usize] = e;
        self.dist[source as usize] = 0;
        self.queue.push(source);
        if stop(source) {
            return Some(source);
        }
        let mut head = 0;
        while head < self.queue.len() {
            let x = self.queue[head];
            head += 1;
            let dx = self.dist[x as usize] + 1;
            for &y in g.neighbors(x) {
                if self.stamp[y as usize] != e {
                    self.stamp[y as usize] = e;
                    self.dist[y as usize] = dx;
                    self.queue.push(y);
                    if stop(y) {
                        return Some(y);
                    }
                }
            }
        }
        None
    }

    /// Distance found by the last search, if it reached `v`.
    pub fn known(&self, v: Vertex) -> Option<u32> {
        (self.stamp[v as usize] == self.epoch).then(|| self.dist[v as usize])
    }

    /// Distances from `source` to each target, exploring only as far as the farthest target.
    pub fn distances(&mut self, g: &Graph, source: Vertex, targets: &[Vertex]) -> Vec<u32> {
        self.reset();
        let e = self.epoch;
        self.stamp[source as usize] = e;
        self.dist[source as usize] = 0;
        self.queue.push(source);
        let mut uniq = targets.to_vec();
        uniq.sort_unstable();
        uniq.dedup();
        let mut remaining = uniq.iter().filter(|&&t| t != source).count();
        let mut head = 0;
        while remaining > 0 && head < self.queue.len() {
            let x = self.queue[head];
            head += 1;
            let dx = self.dist[x as usize] + 1;
            for &y in g.neighbors(x) {
                if self.stamp[y as usize] != e {
                    self.stamp[y as usize] = e;
                    self.dist[y as usize] = dx;
                    self.queue.push(y);
                    if uniq.binary_search(&y).is_ok() {
                        remaining -= 1;
                    }
                }
            }
        }
        targets
            .iter()
            .map(|&t| if self.stamp[t as usize] == e { self.dist[t as usize] } else { INF })
            .collect()
    }
}
