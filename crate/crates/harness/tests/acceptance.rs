//! One pass/fail line per acceptance criterion, written straight to stderr so it shows without `--nocapture`.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use pursuit_core::construct::{
    build_dodecahedron, build_subdivided_cube, q_prime_trap_lines, validate_construction, Layered, ValidateOptions,
};
use pursuit_core::engine::{LazySemantics, Outcome, RuleSet};
use pursuit_core::graph::Graph;
use pursuit_core::solver::{cop_number, dismantlable, verify_scripted_lines, CopNumber};
use pursuit_core::strategy::{compute_r, RLoop};
use pursuit_harness::graphs::GraphId;
use pursuit_harness::tournament::{full_field, run_tournament, TournamentReport, TournamentSpec};

struct Line {
    name: &'static str,
    pass: bool,
    detail: String,
    took: Duration,
}

fn emit(l: &Line) {
    let mut err = std::io::stderr();
    let tag = if l.pass { "PASS" } else { "FAIL" };
    writeln!(err, "[acceptance] {tag} {:<22} {} ({:.1?})", l.name, l.detail, l.took).unwrap();
}

fn timed(name: &'static str, f: impl FnOnce() -> (bool, String)) -> Line {
    let t = Instant::now();
    let (pass, detail) = f();
    Line { name, pass, detail, took: t.elapsed() }
}

fn push(lines: &mut Vec<Line>, l: Line) {
    emit(&l);
    lines.push(l);
}

fn number(c: &CopNumber) -> String {
    match c {
        CopNumber::Exact { k } => k.to_string(),
        CopNumber::Exceeds { k_max } => format!(">{k_max}"),
    }
}

fn q_prime_numbers() -> (bool, String) {
    let g = build_subdivided_cube();
    let c = cop_number(&g, &RuleSet::classical(1), 4).unwrap();
    let lazy = cop_number(&g, &RuleSet::lazy(1), 4).unwrap();
    let exact = cop_number(&g, &RuleSet::lazy_exactly_one(1), 4).unwrap();
    let want = |k| CopNumber::Exact { k };
    let pass = c == want(2) && lazy == want(3) && exact == want(3);
    (pass, format!("c = {}, c1 = {} (at-most-one), {} (exactly-one)", number(&c), number(&lazy), number(&exact)))
}

fn dodecahedron_numbers() -> (bool, String) {
    let g = build_dodecahedron();
    let c = cop_number(&g, &RuleSet::classical(1), 4).unwrap();
    let lazy = cop_number(&g, &RuleSet::lazy(1), 4).unwrap();
    let exact = cop_number(&g, &RuleSet::lazy_exactly_one(1), 4).unwrap();
    let at_least_3 = |n: &CopNumber| !matches!(n, CopNumber::Exact { k } if *k < 3);
    let pass = c == CopNumber::Exact { k: 3 } && at_least_3(&lazy) && at_least_3(&exact);
    (pass, format!("c = {}, c1 = {} (at-most-one), {} (exactly-one)", number(&c), number(&lazy), number(&exact)))
}

fn trap_lines() -> (bool, String) {
    let g = build_subdivided_cube();
    let reports = verify_scripted_lines(&g, &RuleSet::classical(2), &q_prime_trap_lines());
    let good = reports.iter().filter(|r| r.legal && r.trapped).count();
    (reports.len() == 5 && good == 5, format!("{good}/5 lines legal and ending trapped"))
}

fn distance_formula(big: &pursuit_core::construct::ConstructionReport) -> (bool, String) {
    let mut pass = true;
    let mut parts = Vec::new();
    for l in 2..=5 {
        let d = Layered::new(l).unwrap();
        let r = validate_construction(d.graph(), &d, &ValidateOptions { exhaustive_up_to: 5, corner_bounds: false, ..Default::default() });
        let ok = r.check("distance-formula").is_some_and(|c| c.passed) && r.distance_exhaustive;
        pass &= ok;
        parts.push(format!("L={l}: {} pairs", r.distance_pairs));
    }
    let ok = big.check("distance-formula").is_some_and(|c| c.passed) && !big.distance_exhaustive && big.distance_pairs >= 10_000;
    pass &= ok;
    parts.push(format!("L=49: {} sampled pairs", big.distance_pairs));
    (pass, parts.join(", "))
}

fn construction(r: &pursuit_core::construct::ConstructionReport) -> (bool, String) {
    let census = |l: usize| {
        let per_face = 21 + (1..l).map(|n| 20 * n + 30).sum::<usize>();
        12 * per_face + 30 * (2 * l + 1) + 20
    };
    let counts = r.vertices == 302_762 && r.edges == 455_640 && census(49) == r.vertices;
    let names = ["counts", "side-lengths", "connectors", "spokes", "corner-bounds", "face-membership"];
    let failed: Vec<&str> = names.iter().copied().filter(|n| !r.check(n).is_some_and(|c| c.passed)).collect();
    let pass = counts && failed.is_empty();
    let detail = format!("|V| = {}, |E| = {}, checks {}", r.vertices, r.edges, if failed.is_empty() { "all ok".into() } else { format!("failed {failed:?}") });
    (pass, detail)
}

fn survival(report: &TournamentReport, took: Duration) -> (bool, String) {
    let s = &report.summary;
    let forfeits = report.rows.iter().filter(|r| matches!(r.outcome, Outcome::Forfeit { .. })).count();
    let semantics = [LazySemantics::AtMostOne, LazySemantics::ExactlyOne];
    let per_pair = |adv: &str| semantics.iter().all(|&m| report.rows.iter().filter(|r| r.adversary == adv && r.semantics == m).count() >= 20);
    let covered = report.rows.iter().all(|r| per_pair(&r.adversary));
    let pass = s.captures == 0 && forfeits == 0 && s.cert_failures == 0 && covered && took < Duration::from_secs(30 * 60);
    (
        pass,
        format!(
            "{} matches, {} captures, {} forfeits, {} cert checks / {} failures, divergences {} (scripted {}), deviations {}",
            s.matches, s.captures, forfeits, s.cert_checks, s.cert_failures, s.divergences, s.scripted_divergences, s.deviations
        ),
    )
}

fn coverage(report: &TournamentReport) -> (bool, String) {
    let a = report.covered('A');
    let b = report.covered('B');
    let c = report.covered('C');
    let need_a = ["A.1.1", "A.1.2", "A.2.1", "A.2.2", "A.2.3"];
    let pass = need_a.iter().all(|k| a.contains(k)) && b.len() >= 5 && c.len() >= 5;
    (pass, format!("A {a:?}, B {} keys, C {} keys; histogram {:?}", b.len(), c.len(), report.summary.coverage))
}

fn compute_r_suite() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut broke, mut bad) = (0, 0);
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
        let r = compute_r(k, l2, &skips).unwrap();
        let closed = r.r as i64 == k as i64 - l2 as i64 + 4 - r.j_last as i64;
        if !(4..=49).contains(&r.r) || (r.broke && !closed) {
            bad += 1;
        }
        broke += r.broke as u32;
    }
    (bad == 0, format!("10000 inputs, {broke} broke early, {bad} violations"))
}

fn random_connected(rng: &mut ChaCha8Rng, n: u32, p: f64) -> Graph {
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

fn cross_validation() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let (mut agree, mut ordered, mut solved, mut dism) = (0, 0, 0, 0);
    for i in 0..200 {
        let n = rng.gen_range(3..=30);
        let p = [0.0, 0.04, 0.1, 0.3, 0.7][i % 5];
        let g = random_connected(&mut rng, n, p);
        let c = cop_number(&g, &RuleSet::classical(1), 3).unwrap();
        let d = dismantlable(&g);
        dism += d as u32;
        agree += (d == (c == CopNumber::Exact { k: 1 })) as u32;
        let c1 = cop_number(&g, &RuleSet::lazy(1), 3).unwrap();
        let ok = match (&c, &c1) {
            (CopNumber::Exact { k: a }, CopNumber::Exact { k: b }) => {
                solved += 1;
                a <= b
            }
            (CopNumber::Exceeds { .. }, c1) => matches!(c1, CopNumber::Exceeds { .. }),
            (CopNumber::Exact { .. }, CopNumber::Exceeds { .. }) => true,
        };
        ordered += ok as u32;
    }
    (
        agree == 200 && ordered == 200,
        format!("200 graphs ({dism} dismantlable): dismantlable <=> c = 1 on {agree}, c <= c1 on {ordered} ({solved} with both exact)"),
    )
}

#[test]
fn acceptance() {
    let mut lines = Vec::new();
    push(&mut lines, timed("q-prime-cop-numbers", q_prime_numbers));
    push(&mut lines, timed("dodecahedron", dodecahedron_numbers));
    push(&mut lines, timed("trap-lines", trap_lines));

    let t = Instant::now();
    let d49 = GraphId::Layered(49).load().unwrap();
    let d = d49.layered().unwrap();
    let big = validate_construction(&d49.graph, d, &ValidateOptions { exhaustive_up_to: 5, samples: 10_000, ..Default::default() });
    let shared = t.elapsed();
    let mut l = timed("distance-formula", || distance_formula(&big));
    l.took += shared;
    push(&mut lines, l);
    let mut l = timed("construction", || construction(&big));
    l.took += shared;
    push(&mut lines, l);

    let spec = TournamentSpec {
        entrants: full_field(5),
        semantics: vec![LazySemantics::AtMostOne, LazySemantics::ExactlyOne],
        placements: 20,
        max_rounds: 10_000,
        seed: 0,
        threads: None,
    };
    let t = Instant::now();
    let report = run_tournament(&d49, &spec).unwrap();
    let took = t.elapsed();
    let mut l = timed("survival-battery", || survival(&report, took));
    l.took = took;
    push(&mut lines, l);
    push(&mut lines, timed("dispatch-coverage", || coverage(&report)));

    push(&mut lines, timed("compute-r-suite", compute_r_suite));
    push(&mut lines, timed("solver-cross-check", cross_validation));

    let failed: Vec<&str> = lines.iter().filter(|l| !l.pass).map(|l| l.name).collect();
    writeln!(std::io::stderr(), "[acceptance] {}/{} criteria pass", lines.len() - failed.len(), lines.len()).unwrap();
    assert!(failed.is_empty(), "failed: {failed:?}");
}
