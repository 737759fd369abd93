use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use pursuit_core::construct::{build_dodecahedron, build_subdivided_cube, q_prime_trap_lines, qv};
use pursuit_core::engine::{run_match, GameConfig, RobberStrategy, RuleSet, Turn};
use pursuit_core::graph::{Graph, Vertex};
use pursuit_core::solver::{
    cop_number, dismantlable, dismantling_order, solve, solve_table, solve_with_budget, verify_scripted_lines,
    CopNumber, SolveError, TableCops, TableRobber, TupleIndex, UNRESOLVED,
};

fn exact(k: usize) -> CopNumber {
    CopNumber::Exact { k }
}

fn cycle(n: u32) -> Graph {
    let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n as usize, &e).unwrap()
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

fn grid(w: u32, h: u32) -> Graph {
    let mut e = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let v = y * w + x;
            if x + 1 < w {
                e.push((v, v + 1));
            }
            if y + 1 < h {
                e.push((v, v + w));
            }
        }
    }
    Graph::from_edges((w * h) as usize, &e).unwrap()
}

/// Random spanning tree plus extra edges with probability `p`.
pub fn random_connected(rng: &mut ChaCha8Rng, n: u32, p: f64) -> Graph {
    let mut e = Vec::new();
    for v in 1..n {
        e.push((rng.gen_range(0..v), v));
    }
    for a in 0..n {
        for b in a + 1..n {
            if !e.contains(&(a, b)) && rng.gen_bool(p) {
                e.push((a, b));
            }
        }
    }
    Graph::from_edges(n as usize, &e).unwrap()
}

#[test]
fn q_prime_cop_numbers() {
    let g = build_subdivided_cube();
    assert_eq!(cop_number(&g, &RuleSet::classical(1), 4), Ok(exact(2)));
    assert_eq!(cop_number(&g, &RuleSet::lazy(1), 4), Ok(exact(3)));
    assert_eq!(cop_number(&g, &RuleSet::lazy_exactly_one(1), 4), Ok(exact(3)));
    let two = solve(&g, &RuleSet::classical(2)).unwrap();
    assert!(two.cops_win);
    assert!(!solve(&g, &RuleSet::lazy(2)).unwrap().cops_win);
}

#[test]
fn dodecahedron_cop_numbers() {
    let g = build_dodecahedron();
    assert_eq!(cop_number(&g, &RuleSet::classical(1), 4), Ok(exact(3)));
    assert_eq!(cop_number(&g, &RuleSet::lazy(1), 4), Ok(exact(3)));
    assert_eq!(cop_number(&g, &RuleSet::lazy_exactly_one(1), 4), Ok(exact(3)));
}

#[test]
fn known_families() {
    assert_eq!(cop_number(&cycle(3), &RuleSet::classical(1), 3), Ok(exact(1)));
    assert_eq!(cop_number(&cycle(7), &RuleSet::classical(1), 3), Ok(exact(2)));
    assert_eq!(cop_number(&cycle(7), &RuleSet::lazy(1), 3), Ok(exact(2)));
    assert_eq!(cop_number(&petersen(), &RuleSet::classical(1), 4), Ok(exact(3)));
    assert_eq!(cop_number(&grid(4, 4), &RuleSet::classical(1), 3), Ok(exact(2)));
    let star = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
    assert_eq!(cop_number(&star, &RuleSet::lazy(1), 3), Ok(exact(1)));
    assert_eq!(cop_number(&petersen(), &RuleSet::classical(1), 2), Ok(CopNumber::Exceeds { k_max: 2 }));
}

#[test]
fn budget_and_empty_errors() {
    let g = cycle(30);
    assert!(matches!(solve_with_budget(&g, &RuleSet::classical(3), 1000), Err(SolveError::Budget { .. })));
    assert_eq!(solve(&g, &RuleSet::classical(0)).err(), Some(SolveError::Empty));
}

#[test]
fn tuple_index_is_dense() {
    let idx = TupleIndex::new(7, 3);
    assert_eq!(idx.count(), 84);
    for i in 0..idx.count() {
        assert_eq!(idx.rank(idx.tuple(i)), i);
    }
    assert_eq!(idx.rank_unsorted(&[5, 1, 3]), idx.rank(&[1, 3, 5]));
}

#[test]
fn trap_lines_are_legal_and_end_trapped() {
    let g = build_subdivided_cube();
    let lines = q_prime_trap_lines();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[3].last().unwrap(), &(vec![qv(17), qv(3)], qv(2)));
    for (i, r) in verify_scripted_lines(&g, &RuleSet::classical(2), &lines).iter().enumerate() {
        assert!(r.legal && r.trapped, "line {}: {:?}", i + 1, r);
    }
    let mut bad = lines[0].clone();
    bad[1].0 = vec![qv(3), qv(5)];
    assert_eq!(verify_scripted_lines(&g, &RuleSet::classical(2), &[bad])[0].error_at, Some(1));
}

#[test]
fn at_most_one_wins_wherever_exactly_one_wins() {
    let g = build_subdivided_cube();
    let (_, loose) = solve_table(&g, &RuleSet::lazy(3)).unwrap();
    let (_, strict) = solve_table(&g, &RuleSet::lazy_exactly_one(3)).unwrap();
    let mut strict_wins = 0;
    for t in 0..loose.index.count() {
        let cops = loose.index.tuple(t).to_vec();
        for r in 0..20 {
            for turn in [Turn::Robber, Turn::Cops] {
                if strict.is_cop_win(&cops, r, turn) {
                    strict_wins += 1;
                    assert!(loose.is_cop_win(&cops, r, turn));
                }
            }
        }
    }
    assert!(strict_wins > 0);
}

#[test]
fn dismantling_orders() {
    let tree = Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
    let order = dismantling_order(&tree).unwrap();
    assert_eq!(order.len(), 5);
    assert!(!dismantlable(&cycle(4)));
    assert!(dismantlable(&cycle(3)));
    assert!(!dismantlable(&petersen()));
}

/// Placed at a fixed vertex, then plays from the table.
struct StartAt {
    at: Vertex,
    inner: TableRobber,
}

impl RobberStrategy for StartAt {
    fn name(&self) -> String {
        "start-at".into()
    }
    fn place(&mut self, _g: &Graph, _rules: &RuleSet, _cops: &[Vertex]) -> Vertex {
        self.at
    }
    fn act(&mut self, g: &Graph, rules: &RuleSet, cfg: &GameConfig) -> Vertex {
        self.inner.act(g, rules, cfg)
    }
}

#[test]
fn extracted_cops_capture_within_rank() {
    let g = Arc::new(build_subdivided_cube());
    let rules = RuleSet::lazy(3);
    let (res, table) = solve_table(&g, &rules).unwrap();
    let table = Arc::new(table);
    let mut cops = TableCops::new(g.clone(), table.clone()).unwrap();
    let mut robber = TableRobber { table: table.clone() };
    let t = run_match(&g, &rules, &mut cops, &mut robber, 1000, "q-prime");
    assert!(t.outcome.captured());
    assert_eq!(t.moves.len() as u32, res.placement_rank.unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut played = 0;
    while played < 1000 {
        let tu = rng.gen_range(0..table.index.count());
        let r = rng.gen_range(0..20);
        let rank = table.rank_at(tu, r, Turn::Robber);
        if rank == UNRESOLVED || rank == 0 {
            continue;
        }
        played += 1;
        let mut c = TableCops::new(g.clone(), table.clone()).unwrap();
        c.placement = table.index.tuple(tu).to_vec();
        let mut rb = StartAt { at: r, inner: TableRobber { table: table.clone() } };
        let t = run_match(&g, &rules, &mut c, &mut rb, 1000, "q-prime");
        assert!(t.outcome.captured());
        assert!(t.moves.len() as u32 <= rank, "{} plies > rank {rank}", t.moves.len());
    }
}

#[test]
fn extracted_robber_evades_too_few_cops() {
    let g = Arc::new(build_subdivided_cube());
    let rules = RuleSet::lazy(2);
    let (_, table) = solve_table(&g, &rules).unwrap();
    let table = Arc::new(table);
    assert_eq!(TableCops::new(g.clone(), table.clone()).err(), Some(SolveError::NotCopWin));
    for start in [[qv(9), qv(5)], [qv(1), qv(13)], [qv(17), qv(19)]] {
        let mut cops = pursuit_core::engine::StayCops { start: start.to_vec() };
        let mut rb = TableRobber { table: table.clone() };
        let t = run_match(&g, &rules, &mut cops, &mut rb, 200, "q-prime");
        assert!(!t.outcome.captured());
    }
}

#[test]
fn dismantlable_iff_one_cop_and_classical_below_lazy() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut yes, mut no) = (0, 0);
    for i in 0..60 {
        let n = rng.gen_range(3..=14);
        let p = [0.0, 0.08, 0.25, 0.6][i % 4];
        let g = random_connected(&mut rng, n, p);
        let one = solve(&g, &RuleSet::classical(1)).unwrap().cops_win;
        assert_eq!(dismantlable(&g), one, "graph {i}");
        if one {
            yes += 1;
        } else {
            no += 1;
        }
        let c = cop_number(&g, &RuleSet::classical(1), 3).unwrap();
        let c1 = cop_number(&g, &RuleSet::lazy(1), 3).unwrap();
        match (c, c1) {
            (CopNumber::Exact { k: a }, CopNumber::Exact { k: b }) => assert!(a <= b),
            (CopNumber::Exceeds { .. }, c1) => assert_eq!(c1, CopNumber::Exceeds { k_max: 3 }),
            _ => {}
        }
    }
    assert!(yes > 5 && no > 5, "{yes} / {no}");
}
