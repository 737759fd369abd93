use crate::graph::{Graph, Vertex};

/// Vertex id of the Q′ vertex with label `label` (1..=20).
pub fn qv(label: u32) -> Vertex {
    assert!((1..=20).contains(&label), "Q' labels run 1..=20");
    label - 1
}

pub fn q_label(v: Vertex) -> u32 {
    v + 1
}

/// The subdivided cube Q′: outer 8-cycle 1..8, inner 8-cycle 9..16, and connectors 17..20.
pub fn build_subdivided_cube() -> Graph {
    let mut edges = Vec::with_capacity(24);
    for i in 1..=8 {
        edges.push((qv(i), qv(i % 8 + 1)));
        edges.push((qv(8 + i), qv(8 + i % 8 + 1)));
    }
    for (c, a) in [(17, 1), (18, 3), (19, 5), (20, 7)] {
        edges.push((qv(c), qv(a)));
        edges.push((qv(c), qv(a + 8)));
    }
    Graph::from_edges(20, &edges).expect("Q' is simple")
}

/// The five two-cop trapping lines on Q′, as (cop labels, robber label) triples starting after the robber's first turn.
pub fn q_prime_trap_lines() -> Vec<Vec<(Vec<Vertex>, Vertex)>> {
    let lines: [&[([u32; 2], u32)]; 5] = [
        &[([9, 5], 1), ([17, 5], 1), ([17, 5], 8), ([1, 6], 8)],
        &[([9, 5], 1), ([17, 5], 1), ([17, 5], 2), ([1, 4], 2)],
        &[([9, 5], 2), ([17, 4], 2), ([1, 3], 2)],
        &[([9, 5], 3), ([9, 4], 3), ([9, 4], 2), ([17, 3], 2)],
        &[([9, 5], 3), ([9, 4], 3), ([9, 4], 18), ([10, 3], 18)],
    ];
    lines
        .iter()
        .map(|line| line.iter().map(|(c, r)| (c.iter().map(|&l| qv(l)).collect(), qv(*r))).collect())
        .collect()
}
