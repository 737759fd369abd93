use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use pursuit_core::engine::{run_match, CopStrategy, GameConfig, Outcome, RuleSet};
use pursuit_core::graph::{Searcher, Vertex};
use pursuit_core::strategy::{
    classify_case, compute_r, corner_kind, make_adversary, safe_reach_check, AdversaryKind, CertError, CornerKind,
    CentreRobber, RLoop, RemoteCops, StrategyError, World, CASE_LABELS,
};

fn world() -> Arc<World> {
    World::shared()
}

#[test]
fn compute_r_examples() {
    let r = compute_r(10, 8, &[0]).unwrap();
    assert_eq!((r.r, r.last_leg, r.broke, r.j_last), (6, 1, true, 0));
    let r = compute_r(10, 8, &[1, 1]).unwrap();
    assert_eq!((r.r, r.last_leg, r.broke), (5, 2, true));
    let r = compute_r(10, 8, &[2, 3, 5]).unwrap();
    assert_eq!((r.r, r.last_leg, r.broke), (4, 3, false));
    let r = compute_r(53, 8, &[0]).unwrap();
    assert_eq!(r.r, 49);
    assert_eq!(compute_r(54, 8, &[0]).err(), Some(CertError::RTooLarge(50)));
    assert_eq!(compute_r(7, 8, &[0]).err(), Some(CertError::KBelowL2 { k: 7, l2: 8 }));
    assert_eq!(compute_r(10, 8, &[3, 2]).err(), Some(CertError::SkipDecreased { leg: 2, prev: 3, now: 2 }));
    assert_eq!(compute_r(10, 8, &[3, 3]).err(), Some(CertError::Incomplete { given: 2 }));
    assert_eq!(compute_r(20, 8, &[1, 2, 90]).err(), Some(CertError::SkipTooLarge { leg: 3, skips: 90 }));
    assert_eq!(compute_r(53, 8, &[1]).err(), Some(CertError::SkipTooLarge { leg: 1, skips: 1 }));
}

#[test]
fn compute_r_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut broke = 0;
    for _ in 0..10_000 {
        let l2 = rng.gen_range(0..=60);
        let k = l2 + rng.gen_range(0..=45);
        let mut lp = RLoop::new(k, l2).unwrap();
        let mut skips = Vec::new();
        let mut j = 0;
        while let Some(ri) = lp.next_r() {
            j = (j + rng.gen_range(0..=2)).min(98 - 2 * ri);
            skips.push(j);
            lp.observe(j).unwrap();
        }
        let res = compute_r(k, l2, &skips).unwrap();
        assert_eq!(Some(&res), lp.result());
        assert!((4..=49).contains(&res.r), "r = {}", res.r);
        if res.broke {
            broke += 1;
            assert_eq!(res.r as i64, k as i64 - l2 as i64 + 4 - res.j_last as i64);
            assert_eq!(res.j_last, res.last_leg - 1);
        } else {
            assert_eq!(res.last_leg, k - l2 + 1);
            assert_eq!(res.r, 4);
        }
    }
    assert!(broke > 1000);
}

#[test]
fn safe_reach_check_examples() {
    let w = World::new(3).unwrap();
    let g = w.graph();
    let mut s = Searcher::new(g.n_vertices());
    let o = w.d.center(0);
    let c = w.d.dodeca.faces[0][0];
    let path = g.shortest_path(o, c).unwrap();
    let n = path.len() as u32 - 1;
    let far = w.d.center(11);
    assert!(safe_reach_check(g, &mut s, o, &path, &[far]).unwrap());
    let near = g.shortest_path(c, far).unwrap()[n as usize];
    assert_eq!(g.distance(near, c).unwrap(), n);
    assert!(!safe_reach_check(g, &mut s, o, &path, &[far, near]).unwrap());
    assert_eq!(safe_reach_check(g, &mut s, o, &[], &[far]), Err(CertError::EmptyPath));
    assert_eq!(safe_reach_check(g, &mut s, c, &path, &[far]), Err(CertError::WrongStart(o, c)));
    assert_eq!(safe_reach_check(g, &mut s, o, &[o, c], &[far]), Err(CertError::NotAnEdge(o, c)));
}

#[test]
fn certified_legs_are_never_intercepted() {
    let w = World::new(3).unwrap();
    let g = w.graph();
    let n = g.n_vertices() as Vertex;
    let mut s = Searcher::new(n as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    while checked < 300 {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let cops: Vec<Vertex> = (0..3).map(|_| rng.gen_range(0..n)).collect();
        let path = g.shortest_path(a, b).unwrap();
        if !safe_reach_check(g, &mut s, a, &path, &cops).unwrap() {
            continue;
        }
        checked += 1;
        let mut cops = cops;
        for (t, &x) in path.iter().enumerate().skip(1) {
            assert!(!cops.contains(&x), "robber walked into a cop at step {t}");
            for c in cops.iter_mut() {
                if let Some(&nx) = g.shortest_path(*c, x).unwrap().get(1) {
                    *c = nx;
                }
            }
            assert!(!cops.contains(&x), "robber caught at step {t}");
        }
    }
}

#[test]
fn automorphisms_preserve_edges() {
    let w = world();
    let g = w.graph();
    for (a, b) in [(0, 37), (0, 1), (5, 118), (64, 23)] {
        let (fa, fb) = (w.frame_at(a), w.frame_at(b));
        for (u, v) in g.edges().step_by(7) {
            let (mu, mv) = (w.map_vertex(u, fa, fb), w.map_vertex(v, fa, fb));
            assert!(g.has_edge(mu, mv), "frames {a}->{b}: edge {u}-{v} maps to {mu}-{mv}");
        }
        assert_eq!(w.map_vertex(fa.o[0], fa, fb), fb.o[0]);
        assert_eq!(w.map_vertex(fa.m[2], fa, fb), fb.m[2]);
        assert_eq!(w.map_vertex(fa.p, fa, fb), fb.p);
    }
}

#[test]
fn robber_is_pinned_to_49_layers() {
    let small = Arc::new(World::new(3).unwrap());
    assert_eq!(CentreRobber::new(small).err(), Some(StrategyError::WrongLayers(3)));
    assert!(CentreRobber::new(world()).is_ok());
}

#[test]
fn classification_preconditions() {
    let w = world();
    let t = w.frame_at(0);
    let o = t.o[0];
    let far = [t.o[11], t.o[10]];
    assert_eq!(classify_case(&w, t.v[0], &[t.p123[0], far[0], far[1]]).err(), Some(StrategyError::NotAtCentre(t.v[0])));
    assert_eq!(classify_case(&w, o, &[t.p123[0], far[0]]).err(), Some(StrategyError::CopCount(2)));
    assert_eq!(classify_case(&w, o, &[far[0], far[1], t.o[9]]).err(), Some(StrategyError::AdjacentCops(0)));
    assert_eq!(classify_case(&w, o, &[t.p123[0], t.p123[1], far[0]]).err(), Some(StrategyError::AdjacentCops(2)));
}

#[test]
fn dispatch_is_total_over_random_configurations() {
    let w = world();
    let g = w.graph();
    let n = g.n_vertices() as Vertex;
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut seen = std::collections::BTreeSet::new();
    let mut near = 0;
    for i in 0..10_000 {
        let f = rng.gen_range(0..12);
        let o = w.d.center(f);
        let adj = g.neighbors(o)[rng.gen_range(0..g.degree(o))];
        let mut cops = vec![adj];
        while cops.len() < 3 {
            let c = if i % 2 == 0 {
                rng.gen_range(0..n)
            } else {
                let mut c = o;
                for _ in 0..rng.gen_range(2..200) {
                    c = g.neighbors(c)[rng.gen_range(0..g.degree(c))];
                }
                c
            };
            if c != o && !g.has_edge(c, o) {
                cops.push(c);
            }
        }
        let at = rng.gen_range(0..3);
        cops.swap(0, at);
        near += cops.iter().filter(|&&c| w.d.in_face(c, f)).count();
        let d = classify_case(&w, o, &cops).unwrap();
        assert!(CASE_LABELS.contains(&d.label), "label {}", d.label);
        assert!(CASE_LABELS.contains(&d.program));
        assert_eq!(d.order[0], at);
        seen.insert(d.label);
    }
    assert!(near > 10_000);
    assert!(seen.iter().any(|l| l.starts_with('A')) && seen.iter().any(|l| l.starts_with('C')));
}

#[test]
fn corner_dispatch() {
    let w = world();
    let d = &w.d;
    let v = d.dodeca.faces[0][0];
    let faces = d.dodeca.faces_at(v);
    let away: Vec<usize> = (0..12).filter(|&f| w.to_faces(&faces, d.center(f)) >= 2).collect();
    let far = |i: usize| d.center(away[i]);
    assert_eq!(corner_kind(&w, d.center(0), &[far(0), far(1), far(2)]).err(), Some(StrategyError::NotAtCorner(d.center(0))));
    let adj = w.graph().neighbors(v)[0];
    assert_eq!(corner_kind(&w, v, &[adj, far(1), far(2)]).err(), Some(StrategyError::CopAtCorner));
    assert!(matches!(corner_kind(&w, v, &[far(0), far(1), far(2)]), Ok(CornerKind::TwoFace(..))));
    let nbrs: Vec<Vertex> = d.dodeca.edges().iter().filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None }).collect();
    assert_eq!(nbrs.len(), 3);
    let mid = |c: Vertex| {
        let p = d.outer_path(v, c);
        p[p.len() / 2]
    };
    assert_eq!(corner_kind(&w, v, &[mid(nbrs[0]), mid(nbrs[1]), far(0)]), Ok(CornerKind::ThreeFace));
    assert_eq!(corner_kind(&w, v, &[mid(nbrs[0]), mid(nbrs[1]), mid(nbrs[2])]), Ok(CornerKind::CentreMove));
}

#[test]
fn adversary_kinds_parse_and_display() {
    for k in AdversaryKind::BASIC {
        assert_eq!(k.to_string().parse::<AdversaryKind>().unwrap(), k);
    }
    let s: AdversaryKind = "scripted:A.2.3".parse().unwrap();
    assert_eq!(s, AdversaryKind::Scripted("A.2.3".into()));
    assert_eq!(s.to_string(), "scripted:A.2.3");
    assert!("scripted:Z.9".parse::<AdversaryKind>().is_err());
    assert!("sneaky".parse::<AdversaryKind>().is_err());
    assert!(make_adversary(&AdversaryKind::HumanRemote, 0, world()).is_err());
}

#[test]
fn adversaries_play_legally_under_both_semantics() {
    let w = world();
    let mut kinds = AdversaryKind::BASIC.to_vec();
    kinds.push(AdversaryKind::Scripted("A.1.1".into()));
    kinds.push(AdversaryKind::Scripted("C.1.2".into()));
    for k in &kinds {
        for rules in [RuleSet::lazy(3), RuleSet::lazy_exactly_one(3)] {
            let mut cops = make_adversary(k, 4, w.clone()).unwrap();
            let mut rob = CentreRobber::new(w.clone()).unwrap().quiet();
            let t = run_match(w.graph(), &rules, cops.as_mut(), &mut rob, 600, "layered:49");
            assert!(!matches!(t.outcome, Outcome::Forfeit { .. }), "{k} {rules}: {:?}", t.outcome);
            assert!(!t.outcome.captured(), "{k} {rules}");
            assert_eq!(rob.stats.cert_failures, 0);
        }
    }
}

#[test]
fn random_walk_is_replay_deterministic() {
    let w = world();
    let play = |seed| {
        let mut cops = make_adversary(&AdversaryKind::RandomWalk, seed, w.clone()).unwrap();
        let mut rob = CentreRobber::new(w.clone()).unwrap().quiet();
        run_match(w.graph(), &RuleSet::lazy(3), cops.as_mut(), &mut rob, 300, "layered:49").to_json()
    };
    assert_eq!(play(17), play(17));
    assert_ne!(play(17), play(18));
}

#[test]
fn robber_survives_greedy_cops() {
    let w = world();
    for seed in 0..3 {
        let mut cops = make_adversary(&AdversaryKind::Greedy, seed, w.clone()).unwrap();
        let mut rob = CentreRobber::new(w.clone()).unwrap();
        let t = run_match(w.graph(), &RuleSet::lazy(3), cops.as_mut(), &mut rob, 3000, "layered:49");
        assert_eq!(t.outcome, Outcome::Survived { rounds: 3000 });
        assert_eq!((rob.stats.cert_failures, rob.stats.divergences), (0, 0));
        assert!(rob.stats.cert_checks > 0);
        assert!(rob.log.iter().any(|e| e.label == "place"));
        assert!(t.replay(w.graph()).unwrap().captured.is_none());
    }
}

#[test]
fn scripted_adversaries_force_their_cases() {
    let w = world();
    for label in ["A.1.1", "A.2.3", "B.1.1.1", "C.1.1.1", "C.2.1"] {
        let kind = AdversaryKind::Scripted(label.into());
        let hit = (0..4).any(|seed| {
            let mut cops = make_adversary(&kind, seed, w.clone()).unwrap();
            let mut rob = CentreRobber::new(w.clone()).unwrap().quiet();
            let t = run_match(w.graph(), &RuleSet::lazy(3), cops.as_mut(), &mut rob, 3000, "layered:49");
            assert!(!t.outcome.captured());
            rob.stats.coverage.contains_key(label)
        });
        assert!(hit, "{label} never dispatched");
    }
}

#[test]
fn remote_cops_relay_moves() {
    let w = world();
    let g = w.graph();
    let start = vec![0, 1, 2];
    let (mut remote, handle) = RemoteCops::new(start.clone());
    assert_eq!(remote.place(g, &RuleSet::lazy(3)), start);
    let next = vec![g.neighbors(0)[0], 1, 2];
    handle.moves.send(next.clone()).unwrap();
    let cfg = GameConfig { cops: start.clone(), robber: Some(500), turn: pursuit_core::engine::Turn::Cops, round: 1, captured: None };
    assert_eq!(remote.act(g, &RuleSet::lazy(3), &cfg), next);
    assert_eq!(handle.states.recv().unwrap(), cfg);
    drop(handle);
    assert_eq!(remote.act(g, &RuleSet::lazy(3), &cfg), start);
}
