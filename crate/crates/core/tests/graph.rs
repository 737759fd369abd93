use proptest::prelude::*;
use pursuit_core::graph::{masked_bfs, multi_bfs, Graph, GraphError, Searcher, INF};

fn cycle(n: u32) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n as usize, &edges).unwrap()
}

fn petersen() -> Graph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &e).unwrap()
}

fn floyd(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<u32>> {
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(u, v) in edges {
        d[u as usize][v as usize] = 1;
        d[v as usize][u as usize] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] != INF && d[k][j] != INF && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

fn simple_edges() -> impl Strategy<Value = (usize, Vec<(u32, u32)>)> {
    (2usize..14).prop_flat_map(|n| {
        let pairs: Vec<(u32, u32)> = (0..n as u32).flat_map(|a| (a + 1..n as u32).map(move |b| (a, b))).collect();
        (Just(n), proptest::sample::subsequence(pairs.clone(), 0..=pairs.len()))
    })
}

#[test]
fn rejects_bad_edges() {
    assert_eq!(Graph::from_edges(3, &[(0, 3)]), Err(GraphError::OutOfRange(3, 3)));
    assert_eq!(Graph::from_edges(3, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
    assert_eq!(Graph::from_edges(3, &[(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
}

#[test]
fn cycle_basics() {
    let g = cycle(6);
    assert_eq!(g.n_vertices(), 6);
    assert_eq!(g.n_edges(), 6);
    assert_eq!(g.neighbors(0), &[1, 5]);
    assert!(g.has_edge(5, 0));
    assert!(!g.has_edge(0, 3));
    assert!(g.within_one(2, 2));
    assert_eq!(g.distance(0, 3), Ok(3));
    assert_eq!(g.girth(), Some(6));
    assert_eq!(g.shortest_path(0, 2).unwrap(), vec![0, 1, 2]);
    assert_eq!(g.distance(0, 9), Err(GraphError::OutOfRange(9, 6)));
}

#[test]
fn petersen_girth_and_diameter() {
    let g = petersen();
    assert_eq!(g.girth(), Some(5));
    let diam = (0..10).map(|v| (0..10).map(|u| g.distance(v, u).unwrap()).max().unwrap()).max().unwrap();
    assert_eq!(diam, 2);
}

#[test]
fn forest_has_no_girth_and_disconnected_distance_errors() {
    let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
    assert_eq!(g.girth(), None);
    assert!(!g.is_connected());
    assert_eq!(g.distance(0, 3), Ok(INF));
    assert_eq!(g.shortest_path(0, 3), Err(GraphError::Disconnected(0, 3)));
    assert_eq!(g.bfs_from_set(&[]).err(), Some(GraphError::EmptySet));
}

#[test]
fn set_distances() {
    let g = cycle(10);
    assert_eq!(g.distance_to_set(0, &[4, 7]), Ok(3));
    assert_eq!(g.set_to_set_distance(&[0, 1], &[5, 6]), Ok(4));
    assert_eq!(multi_bfs(&g, &[0, 5])[3], 2);
    let masked = masked_bfs(&g, &[0], |v| v != 1);
    assert_eq!(masked[2], 8);
}

#[test]
fn edge_list_round_trip_and_errors() {
    let g = petersen();
    let text = g.to_edge_list();
    assert!(text.starts_with("p 10 15\n"));
    assert_eq!(Graph::parse_edge_list(&text).unwrap(), g);
    assert!(matches!(Graph::parse_edge_list("p 3 2\n0 1\n"), Err(GraphError::Parse { .. })));
    assert!(matches!(Graph::parse_edge_list("0 1\n"), Err(GraphError::Parse { line: 1, .. })));
    assert!(matches!(Graph::parse_edge_list("p 3 1\n0 x\n"), Err(GraphError::Parse { line: 2, .. })));
    assert_eq!(Graph::parse_edge_list("# c\np 2 1\n\n1 0\n").unwrap().n_edges(), 1);
}

#[test]
fn searcher_explores_until_stop() {
    let g = cycle(12);
    let mut s = Searcher::new(12);
    assert_eq!(s.explore_until(&g, 0, |v| v == 4 || v == 9), Some(9));
    assert_eq!(s.known(9), Some(3));
    assert_eq!(s.distance(&g, 0, 6), 6);
    assert_eq!(s.distances(&g, 3, &[3, 0, 8]), vec![0, 3, 5]);
}

proptest! {
    #[test]
    fn bfs_matches_floyd_warshall((n, edges) in simple_edges()) {
        let g = Graph::from_edges(n, &edges).unwrap();
        let d = floyd(n, &edges);
        let mut s = Searcher::new(n);
        for u in 0..n as u32 {
            let f = g.bfs(u).unwrap();
            for v in 0..n as u32 {
                prop_assert_eq!(f.get(v), d[u as usize][v as usize]);
                prop_assert_eq!(s.distance(&g, u, v), d[u as usize][v as usize]);
                if d[u as usize][v as usize] != INF {
                    let p = f.path_from(&g, v).unwrap();
                    prop_assert_eq!(p.len() as u32, d[u as usize][v as usize] + 1);
                    prop_assert!(p.windows(2).all(|w| g.has_edge(w[0], w[1])));
                }
            }
        }
    }

    #[test]
    fn edge_list_round_trips((n, edges) in simple_edges()) {
        let g = Graph::from_edges(n, &edges).unwrap();
        prop_assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }
}
