use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::dodeca::N_FACES;
use super::layered::Layered;
use crate::graph::{masked_bfs, multi_bfs, Graph, Vertex, INF};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstructionReport {
    pub layers: u32,
    pub vertices: usize,
    pub edges: usize,
    pub distance_pairs: u64,
    pub distance_exhaustive: bool,
    pub checks: Vec<Check>,
}

impl ConstructionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ConstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "layers {}  |V| = {}  |E| = {}", self.layers, self.vertices, self.edges)?;
        for c in &self.checks {
            writeln!(f, "  [{}] {:<18} {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail)?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

#[derive(Clone, Debug)]
pub struct ValidateOptions {
    /// Distance-formula equality is exhaustive up to this many layers and sampled above it.
    pub exhaustive_up_to: u32,
    pub samples: usize,
    pub seed: u64,
    /// Run the corner/middle bound check.
    pub corner_bounds: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { exhaustive_up_to: 6, samples: 10_000, seed: 7, corner_bounds: true }
    }
}

struct Builder {
    checks: Vec<Check>,
}

impl Builder {
    fn push(&mut self, name: &str, failures: Vec<String>, ok_detail: String) {
        let passed = failures.is_empty();
        let detail = if passed {
            ok_detail
        } else {
            let shown: Vec<&str> = failures.iter().take(5).map(|s| s.as_str()).collect();
            format!("{} failure(s): {}", failures.len(), shown.join("; "))
        };
        self.checks.push(Check { name: name.to_string(), passed, detail });
    }
}

/// Checks `g` against the combinatorial facts of the layered construction; `d` supplies only the addressing.
pub fn validate_construction(g: &Graph, d: &Layered, opts: &ValidateOptions) -> ConstructionReport {
    let l = d.layers();
    let mut b = Builder { checks: Vec::new() };
    let n = g.n_vertices();
    let m = g.n_edges();

    let mut fails = Vec::new();
    if n != Layered::expected_vertices(l) {
        fails.push(format!("|V| = {n}, expected {}", Layered::expected_vertices(l)));
    }
    if m != Layered::expected_edges(l) {
        fails.push(format!("|E| = {m}, expected {}", Layered::expected_edges(l)));
    }
    if m + 6 > 3 * n {
        fails.push(format!("|E| = {m} exceeds 3|V| - 6"));
    }
    b.push("counts", fails, format!("|V| = {n}, |E| = {m} <= {}", 3 * n - 6));
    if n != d.graph().n_vertices() {
        return ConstructionReport {
            layers: l,
            vertices: n,
            edges: m,
            distance_pairs: 0,
            distance_exhaustive: false,
            checks: b.checks,
        };
    }

    let mut fails = Vec::new();
    for f in 0..N_FACES {
        for layer in 1..=l {
            let side = d.side_len(layer);
            for s in 0..5 {
                let walk: Vec<Vertex> = (0..=side).map(|t| d.ring(f, layer, s * side + t)).collect();
                let edges = walk.windows(2).filter(|w| g.has_edge(w[0], w[1])).count() as u32;
                if edges != side {
                    fails.push(format!("face {f} layer {layer} side {s}: {edges} of {side} edges"));
                }
            }
        }
    }
    b.push("side-lengths", fails, "every side of layer n has 2n+2 edges".into());

    let (fails, detail) = connector_census(g, d);
    b.push("connectors", fails, detail);

    let mut fails = Vec::new();
    for f in 0..N_FACES {
        let o = d.center(f);
        let mut spokes: Vec<u32> = g
            .neighbors(o)
            .iter()
            .filter(|&&c| g.degree(c) == 2)
            .filter_map(|&c| g.neighbors(c).iter().find(|&&z| z != o).and_then(|&z| d.ring_coords(f, z)))
            .filter(|&(layer, _)| layer == 1)
            .map(|(_, k)| k)
            .collect();
        spokes.sort_unstable();
        spokes.dedup();
        let pentagons = (0..spokes.len())
            .filter(|&i| {
                let (a, c) = (spokes[i], spokes[(i + 1) % spokes.len()]);
                d.ring_distance(1, a, c) == 1 && g.has_edge(d.ring(f, 1, a), d.ring(f, 1, c))
            })
            .count();
        if spokes.len() != 20 || pentagons != 20 {
            fails.push(format!("face {f}: {} centre paths, {pentagons} pentagons", spokes.len()));
        }
    }
    b.push("centre-pentagons", fails, "20 centre pentagons per face".into());

    let mut fails = Vec::new();
    for f in 0..N_FACES {
        let dist = multi_bfs(g, &[d.center(f)]);
        for t in [0, l + 1] {
            for s in 0..5 {
                let v = d.ring(f, l, s * d.side_len(l) + t);
                if dist[v as usize] != 2 * l {
                    fails.push(format!("face {f}: d(o, {v}) = {}", dist[v as usize]));
                }
            }
        }
    }
    b.push("spokes", fails, format!("corners and middles at distance {} from their centre", 2 * l));

    let mut fails = Vec::new();
    for v in 0..n as Vertex {
        let faces = d.faces_mask(v).count_ones();
        let want = match d.addresses(v)[0].role {
            super::layered::Role::Ring { layer, .. } if layer == l => {
                if d.is_corner(v) {
                    3
                } else {
                    2
                }
            }
            _ => 1,
        };
        if faces != want {
            fails.push(format!("vertex {v} in {faces} faces, expected {want}"));
        }
    }
    b.push("face-membership", fails, "outer vertices in 2 faces, corners in 3".into());

    let exhaustive = l <= opts.exhaustive_up_to;
    let (fails, pairs) = if exhaustive { distance_exhaustive(g, d) } else { distance_sampled(g, d, opts) };
    b.push(
        "distance-formula",
        fails,
        format!("{pairs} pairs {}", if exhaustive { "(exhaustive)" } else { "(sampled)" }),
    );

    if opts.corner_bounds {
        let fails = corner_bounds(g, d);
        b.push("corner-bounds", fails, format!("thresholds {} / {}", 2 * l, 2 * l + 2));
    }

    ConstructionReport {
        layers: l,
        vertices: n,
        edges: m,
        distance_pairs: pairs,
        distance_exhaustive: exhaustive,
        checks: b.checks,
    }
}

fn connector_census(g: &Graph, d: &Layered) -> (Vec<String>, String) {
    let l = d.layers();
    let mut found: Vec<Vec<Vec<(u32, u32)>>> = vec![vec![Vec::new(); l as usize + 1]; N_FACES];
    for c in 0..g.n_vertices() as Vertex {
        if g.degree(c) != 2 || d.faces_mask(c).count_ones() != 1 {
            continue;
        }
        let f = d.faces_of(c)[0];
        let ends: Vec<(u32, u32)> = g.neighbors(c).iter().filter_map(|&z| d.ring_coords(f, z)).collect();
        if ends.len() != 2 {
            continue;
        }
        let (lo, hi) = if ends[0].0 < ends[1].0 { (ends[0], ends[1]) } else { (ends[1], ends[0]) };
        if hi.0 == lo.0 + 1 {
            found[f][lo.0 as usize].push((hi.1, lo.1));
        }
    }
    let mut fails = Vec::new();
    for f in 0..N_FACES {
        for n in 1..l {
            let mut cons = found[f][n as usize].clone();
            cons.sort_unstable();
            let want = 10 * n + 20;
            let (mut hex, mut pent) = (0, 0);
            for i in 0..cons.len() {
                let (ua, la) = cons[i];
                let (ub, lb) = cons[(i + 1) % cons.len()];
                let size = 4 + d.ring_distance(n + 1, ua, ub) + d.ring_distance(n, la, lb);
                match size {
                    5 => pent += 1,
                    6 => hex += 1,
                    _ => {}
                }
            }
            if cons.len() as u32 != want || hex != 5 * (2 * n + 2) || pent != 10 {
                fails.push(format!(
                    "face {f} annulus {n}: {} connectors (want {want}), {hex} hexagons, {pent} pentagons",
                    cons.len()
                ));
            }
        }
    }
    (fails, "10n+20 connectors, 5(2n+2) hexagons and 10 pentagons per annulus".into())
}

fn ring_vertices(d: &Layered, f: usize) -> Vec<Vertex> {
    (1..=d.layers()).flat_map(|n| d.layer_vertices(f, n)).collect()
}

fn distance_exhaustive(g: &Graph, d: &Layered) -> (Vec<String>, u64) {
    let mut fails = Vec::new();
    let mut pairs = 0u64;
    for f in 0..N_FACES {
        let ring = ring_vertices(d, f);
        for &y in &ring {
            let dist = multi_bfs(g, &[y]);
            let (s, _) = d.ring_coords(f, y).unwrap();
            for &x in &ring {
                let (r, _) = d.ring_coords(f, x).unwrap();
                if r > s {
                    continue;
                }
                pairs += 1;
                let formula = d.face_distance_formula(f, x, y).unwrap();
                if formula != dist[x as usize] {
                    fails.push(format!("face {f}: d({x},{y}) = {} but formula gives {formula}", dist[x as usize]));
                }
            }
        }
    }
    (fails, pairs)
}

fn distance_sampled(g: &Graph, d: &Layered, opts: &ValidateOptions) -> (Vec<String>, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let sources = ((opts.samples as f64).sqrt().ceil() as usize).max(1);
    let per_source = opts.samples.div_ceil(sources);
    let l = d.layers();
    let mut fails = Vec::new();
    let mut pairs = 0u64;
    for _ in 0..sources {
        let f = rng.gen_range(0..N_FACES);
        let s = rng.gen_range(1..=l);
        let y = d.ring(f, s, rng.gen_range(0..d.ring_len(s)));
        let dist = multi_bfs(g, &[y]);
        for _ in 0..per_source {
            let r = rng.gen_range(1..=s);
            let x = d.ring(f, r, rng.gen_range(0..d.ring_len(r)));
            pairs += 1;
            let formula = d.face_distance_formula(f, x, y).unwrap();
            if formula != dist[x as usize] {
                fails.push(format!("face {f}: d({x},{y}) = {} but formula gives {formula}", dist[x as usize]));
            }
        }
    }
    (fails, pairs)
}

fn corner_bounds(g: &Graph, d: &Layered) -> Vec<String> {
    let l = d.layers();
    let side = d.side_len(l);
    let near = 2 * l;
    let mut fails = Vec::new();
    for f in 0..N_FACES {
        let inside = |v: Vertex| d.in_face(v, f);
        let corners: Vec<Vertex> = (0..5).map(|s| d.ring(f, l, s * side)).collect();
        let middles: Vec<Vertex> = (0..5).map(|s| d.ring(f, l, s * side + l + 1)).collect();
        let cf: Vec<Vec<u32>> = corners.iter().map(|&c| masked_bfs(g, &[c], inside)).collect();
        let mf: Vec<Vec<u32>> = middles.iter().map(|&c| masked_bfs(g, &[c], inside)).collect();
        let o = d.center(f);
        for u in d.face_vertices(f) {
            if u == o {
                continue;
            }
            let close: Vec<usize> = (0..5).filter(|&i| cf[i][u as usize] <= near).collect();
            if close.len() > 2 {
                fails.push(format!("face {f}: vertex {u} within {near} of {} corners", close.len()));
            } else if close.len() == 2 {
                let between = cf[close[0]][corners[close[1]] as usize];
                if between != side {
                    fails.push(format!("face {f}: vertex {u} near corners at face distance {between}"));
                }
            }
            let close_m = (0..5).filter(|&i| mf[i][u as usize] <= near).count();
            if close_m > 2 {
                fails.push(format!("face {f}: vertex {u} within {near} of {close_m} middles"));
            }
            if cf.iter().any(|c| c[u as usize] == INF) {
                fails.push(format!("face {f}: vertex {u} unreachable inside the face"));
            }
        }
    }
    fails
}
