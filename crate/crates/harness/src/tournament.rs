use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use anyhow::{ensure, Result};
use rayon::prelude::*;
use serde::Serialize;
use pursuit_core::engine::{LazySemantics, Outcome, RuleSet, Variant};
use pursuit_core::graph::Vertex;
use pursuit_core::strategy::{AdversaryKind, RobberStats, CASE_LABELS};

use crate::graphs::{GraphId, Loaded};
use crate::play::{play, CopKind, MatchSpec, RobberKind};

/// One adversary in the field; `family` separates independently seeded copies of the same kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entrant {
    pub kind: AdversaryKind,
    pub family: u32,
}

#[derive(Clone, Debug)]
pub struct TournamentSpec {
    pub entrants: Vec<Entrant>,
    pub semantics: Vec<LazySemantics>,
    pub placements: u32,
    pub max_rounds: u32,
    pub seed: u64,
    pub threads: Option<usize>,
}

/// Every basic adversary with `walk_families` random-walk copies, then one scripted adversary per case label.
pub fn full_field(walk_families: u32) -> Vec<Entrant> {
    let mut out = Vec::new();
    for kind in AdversaryKind::BASIC {
        let copies = if kind == AdversaryKind::RandomWalk { walk_families.max(1) } else { 1 };
        out.extend((0..copies).map(|family| Entrant { kind: kind.clone(), family }));
    }
    out.extend(CASE_LABELS.iter().map(|l| Entrant { kind: AdversaryKind::Scripted(l.to_string()), family: 0 }));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchRow {
    pub adversary: String,
    pub family: u32,
    pub semantics: LazySemantics,
    pub seed: u64,
    pub cop_start: Vec<Vertex>,
    pub robber_start: Option<Vertex>,
    pub outcome: Outcome,
    pub stats: RobberStats,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub matches: usize,
    pub outcomes: BTreeMap<String, u32>,
    pub captures: u32,
    pub coverage: BTreeMap<String, u64>,
    pub dispatches: u64,
    pub shortcut: u64,
    pub cert_checks: u64,
    pub cert_failures: u64,
    pub deviations: u64,
    pub divergences: u64,
    pub scripted_divergences: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WallTime {
    pub total_s: f64,
    pub mean_match_s: f64,
    pub max_match_s: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TournamentReport {
    pub rows: Vec<MatchRow>,
    pub summary: Summary,
    pub wall: WallTime,
}

impl TournamentReport {
    /// One JSON line per match, then the summary line, then the timing line.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out += &serde_json::to_string(r).expect("row serializes");
            out.push('\n');
        }
        out += &serde_json::json!({ "summary": self.summary }).to_string();
        out.push('\n');
        out += &serde_json::json!({ "wall": self.wall }).to_string();
        out.push('\n');
        out
    }

    /// Case labels that fired, grouped by their top letter.
    pub fn covered(&self, top: char) -> Vec<&str> {
        self.summary.coverage.keys().filter(|k| k.starts_with(top)).map(|k| k.as_str()).collect()
    }
}

fn outcome_key(o: &Outcome) -> &'static str {
    match o {
        Outcome::Captured { .. } => "captured",
        Outcome::Survived { .. } => "survived",
        Outcome::Oscillation { .. } => "oscillation",
        Outcome::Forfeit { .. } => "forfeit",
        Outcome::InProgress => "in-progress",
    }
}

pub fn match_seed(base: u64, family: u32, placement: u32) -> u64 {
    base.wrapping_add(1_000 * family as u64).wrapping_add(placement as u64)
}

/// Runs the centre robber against every entrant, placement and semantics on `layered:49`.
pub fn run_tournament(loaded: &Loaded, spec: &TournamentSpec) -> Result<TournamentReport> {
    ensure!(loaded.world.is_some(), "tournaments run on layered:49, not {}", loaded.id);
    ensure!(spec.placements >= 1 && spec.max_rounds >= 1, "need at least one placement and one round");
    let mut jobs = Vec::new();
    for e in &spec.entrants {
        for &sem in &spec.semantics {
            for p in 0..spec.placements {
                jobs.push((e.clone(), sem, match_seed(spec.seed, e.family, p)));
            }
        }
    }
    let start = Instant::now();
    let run_all = || -> Vec<Result<(MatchRow, Duration)>> {
        jobs.par_iter()
            .map(|(e, sem, seed)| {
                let t = Instant::now();
                let ms = MatchSpec {
                    graph: GraphId::Layered(49),
                    rules: RuleSet { variant: Variant::Lazy, semantics: *sem, cops: 3 },
                    cops: CopKind::Adversary(e.kind.clone()),
                    robber: RobberKind::Centre,
                    max_rounds: spec.max_rounds,
                    seed: *seed,
                    cop_start: None,
                    robber_start: None,
                };
                let res = play(loaded, &ms)?;
                let row = MatchRow {
                    adversary: e.kind.to_string(),
                    family: e.family,
                    semantics: *sem,
                    seed: *seed,
                    cop_start: res.transcript.placements.cops.clone(),
                    robber_start: res.transcript.placements.robber,
                    outcome: res.transcript.outcome,
                    stats: res.stats.unwrap_or_default(),
                };
                Ok((row, t.elapsed()))
            })
            .collect()
    };
    let results = match spec.threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(run_all),
        None => run_all(),
    };
    let mut rows = Vec::with_capacity(results.len());
    let mut times = Vec::with_capacity(results.len());
    for r in results {
        let (row, t) = r?;
        rows.push(row);
        times.push(t.as_secs_f64());
    }
    let summary = summarize(&rows);
    let wall = WallTime {
        total_s: start.elapsed().as_secs_f64(),
        mean_match_s: times.iter().sum::<f64>() / times.len().max(1) as f64,
        max_match_s: times.iter().cloned().fold(0.0, f64::max),
    };
    Ok(TournamentReport { rows, summary, wall })
}

fn summarize(rows: &[MatchRow]) -> Summary {
    let mut s = Summary {
        matches: rows.len(),
        outcomes: BTreeMap::new(),
        captures: 0,
        coverage: BTreeMap::new(),
        dispatches: 0,
        shortcut: 0,
        cert_checks: 0,
        cert_failures: 0,
        deviations: 0,
        divergences: 0,
        scripted_divergences: 0,
    };
    for r in rows {
        *s.outcomes.entry(outcome_key(&r.outcome).to_string()).or_default() += 1;
        s.captures += r.outcome.captured() as u32;
        for (k, v) in &r.stats.coverage {
            *s.coverage.entry(k.clone()).or_default() += *v as u64;
        }
        s.dispatches += r.stats.dispatches as u64;
        s.shortcut += r.stats.shortcut as u64;
        s.cert_checks += r.stats.cert_checks;
        s.cert_failures += r.stats.cert_failures as u64;
        s.deviations += r.stats.deviations as u64;
        s.divergences += r.stats.divergences as u64;
        if r.adversary.starts_with("scripted:") {
            s.scripted_divergences += r.stats.divergences as u64;
        }
    }
    s
}
