use std::collections::BTreeMap;

use pursuit_core::construct::{
    build_dodecahedron, build_layered_dodecahedron, build_subdivided_cube, face_address_dump, q_label, qv,
    validate_construction, ConstructError, Dodecahedron, Layered, Role, ValidateOptions, N_FACES,
};
use pursuit_core::graph::{Graph, Vertex};

fn labels(g: &Graph, label: u32) -> Vec<u32> {
    let mut out: Vec<u32> = g.neighbors(qv(label)).iter().map(|&v| q_label(v)).collect();
    out.sort();
    out
}

#[test]
fn q_prime_adjacency_and_girth() {
    let g = build_subdivided_cube();
    assert_eq!((g.n_vertices(), g.n_edges()), (20, 24));
    assert_eq!(labels(&g, 17), vec![1, 9]);
    assert_eq!(labels(&g, 18), vec![3, 11]);
    assert_eq!(labels(&g, 20), vec![7, 15]);
    assert_eq!(labels(&g, 1), vec![2, 8, 17]);
    assert_eq!(labels(&g, 12), vec![11, 13]);
    assert!(g.has_edge(qv(9), qv(17)) && g.has_edge(qv(3), qv(18)));
    assert_eq!(g.girth(), Some(8));
}

#[test]
fn dodecahedron_is_cubic_with_girth_five() {
    let g = build_dodecahedron();
    assert_eq!((g.n_vertices(), g.n_edges()), (20, 30));
    assert!((0..20).all(|v| g.degree(v) == 3));
    assert_eq!(g.girth(), Some(5));
    let d = Dodecahedron::new();
    assert_eq!(d.faces.len(), N_FACES);
    for c in 0..20 {
        assert_eq!(d.faces_at(c).len(), 3);
    }
    for &(a, b) in d.edges() {
        assert_eq!(d.faces_on_edge(a, b).len(), 2);
    }
    let diam = (0..20).map(|v| (0..20).map(|u| g.distance(v, u).unwrap()).max().unwrap()).max().unwrap();
    assert_eq!(diam, 5);
}

#[test]
fn zero_layers_is_an_error() {
    assert_eq!(Layered::new(0).err(), Some(ConstructError::ZeroLayers));
    assert!(build_layered_dodecahedron(0).is_err());
}

/// Vertex count from a per-role hand census: per face a centre, 20 centre connectors,
/// inner rings of 10n+10 and annulus connectors of 10n+20; 30 shared sides of 2L+1 interior vertices and 20 corners.
fn census(l: usize) -> usize {
    let per_face = 1 + 20 + (1..l).map(|n| 10 * n + 10).sum::<usize>() + (1..l).map(|n| 10 * n + 20).sum::<usize>();
    12 * per_face + 30 * (2 * l + 1) + 20
}

#[test]
fn counts_match_closed_forms_and_hand_census() {
    for (l, v, e) in [(1, 362, 600), (2, 1022, 1620), (3, 1922, 3000), (4, 3062, 4740), (5, 4442, 6840)] {
        let d = Layered::new(l).unwrap();
        let g = d.graph();
        assert_eq!((g.n_vertices(), g.n_edges()), (v, e), "L = {l}");
        assert_eq!(census(l as usize), v);
        assert_eq!(Layered::expected_vertices(l), v);
        assert_eq!(Layered::expected_edges(l), e);
        assert!(g.is_connected());
    }
    assert_eq!(Layered::expected_vertices(49), 302_762);
    assert_eq!(Layered::expected_edges(49), 455_640);
    assert_eq!(census(49), 302_762);
}

#[test]
fn role_census_per_face() {
    let l = 4;
    let d = Layered::new(l).unwrap();
    let mut rings: BTreeMap<(u8, u32), usize> = BTreeMap::new();
    let mut connectors: BTreeMap<(u8, u32), usize> = BTreeMap::new();
    let mut spokes: BTreeMap<u8, usize> = BTreeMap::new();
    for v in 0..d.graph().n_vertices() as Vertex {
        for a in d.addresses(v) {
            match a.role {
                Role::Ring { layer, .. } => *rings.entry((a.face, layer)).or_default() += 1,
                Role::LayerConnector { layer, .. } => *connectors.entry((a.face, layer)).or_default() += 1,
                Role::CenterConnector { .. } => *spokes.entry(a.face).or_default() += 1,
                Role::Center => {}
            }
        }
    }
    for f in 0..12u8 {
        assert_eq!(spokes[&f], 20);
        for n in 1..=l {
            assert_eq!(rings[&(f, n)], 10 * n as usize + 10, "face {f} ring {n}");
        }
        for n in 1..l {
            assert_eq!(connectors[&(f, n)], 10 * n as usize + 20, "face {f} annulus {n}");
        }
    }
}

#[test]
fn side_lengths_and_spokes() {
    let d = Layered::new(5).unwrap();
    let g = d.graph();
    for n in 1..=5 {
        assert_eq!(d.side_len(n), 2 * n + 2);
        assert_eq!(d.ring_len(n), 10 * n + 10);
    }
    for f in 0..N_FACES {
        for &c in &d.dodeca.faces[f] {
            assert_eq!(g.distance(d.center(f), c).unwrap(), 10);
        }
    }
    let (a, b) = (d.dodeca.faces[0][0], d.dodeca.faces[0][1]);
    let side = d.side_path(0, a, b, 5).unwrap();
    assert_eq!(side.len(), 13);
    assert_eq!(g.distance(a, b).unwrap(), 12);
}

#[test]
fn addresses_round_trip() {
    let d = Layered::new(3).unwrap();
    for v in 0..d.graph().n_vertices() as Vertex {
        for a in d.addresses(v) {
            assert_eq!(d.vertex_at(a), v);
        }
        let faces = d.faces_of(v).len();
        let expect = if d.is_corner(v) { 3 } else { d.addresses(v).len() };
        assert_eq!(faces, expect);
    }
    let dump = face_address_dump(&d);
    assert!(dump.lines().count() >= d.graph().n_vertices());
    assert!(dump.lines().next().unwrap().starts_with("0 "));
}

#[test]
fn validator_passes_small_layers_exhaustively() {
    for l in 2..=5 {
        let d = Layered::new(l).unwrap();
        let opts = ValidateOptions { exhaustive_up_to: 5, ..ValidateOptions::default() };
        let r = validate_construction(d.graph(), &d, &opts);
        assert!(r.passed(), "{r}");
        assert!(r.distance_exhaustive);
        assert!(r.distance_pairs > 0);
    }
}

#[test]
fn validator_rejects_a_rewired_graph() {
    let d = Layered::new(3).unwrap();
    let g = d.graph();
    let mut edges: Vec<_> = g.edges().collect();
    let (u, v) = edges[100];
    let w = (0..g.n_vertices() as Vertex).find(|&w| w != u && w != v && !g.has_edge(u, w)).unwrap();
    edges[100] = (u, w);
    let mutated = Graph::from_edges(g.n_vertices(), &edges).unwrap();
    let r = validate_construction(&mutated, &d, &ValidateOptions::default());
    assert!(!r.passed());
}

#[test]
fn distance_formula_matches_bfs_on_sampled_ring_pairs() {
    let d = Layered::new(6).unwrap();
    let g = d.graph();
    for f in [0, 7] {
        let verts = d.face_vertices(f);
        let ring: Vec<Vertex> = verts.into_iter().filter(|&v| d.ring_coords(f, v).is_some()).collect();
        for (i, &x) in ring.iter().enumerate().step_by(37) {
            for &y in ring.iter().skip(i % 5).step_by(11) {
                let (rx, _) = d.ring_coords(f, x).unwrap();
                let (ry, _) = d.ring_coords(f, y).unwrap();
                let (a, b) = if rx <= ry { (x, y) } else { (y, x) };
                assert_eq!(d.face_distance_formula(f, a, b).unwrap(), g.distance(a, b).unwrap());
            }
        }
    }
}
