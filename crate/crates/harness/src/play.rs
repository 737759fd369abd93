use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use anyhow::{anyhow, bail, ensure, Context, Result};
use pursuit_core::engine::{
    run_match, CopStrategy, LazySemantics, RobberStrategy, RuleSet, StayCops, StayRobber, Transcript, Variant,
};
use pursuit_core::graph::Vertex;
use pursuit_core::solver::{solve_table, PositionTable, TableCops, TableRobber};
use pursuit_core::strategy::{make_adversary, AdversaryKind, CentreRobber, RobberStats};

use crate::graphs::{GraphId, Loaded};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RobberKind {
    Centre,
    Stay,
    Solver,
}

impl FromStr for RobberKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(RobberKind::Centre),
            "stay" => Ok(RobberKind::Stay),
            "solver" | "solver-extracted" => Ok(RobberKind::Solver),
            _ => bail!("unknown robber kind `{s}` (paper | stay | solver)"),
        }
    }
}

impl fmt::Display for RobberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RobberKind::Centre => "paper",
            RobberKind::Stay => "stay",
            RobberKind::Solver => "solver",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CopKind {
    Adversary(AdversaryKind),
    Stay,
    Solver,
}

impl FromStr for CopKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stay" => Ok(CopKind::Stay),
            "solver" | "solver-extracted" => Ok(CopKind::Solver),
            _ => Ok(CopKind::Adversary(s.parse()?)),
        }
    }
}

impl fmt::Display for CopKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CopKind::Adversary(k) => k.fmt(f),
            CopKind::Stay => f.write_str("stay"),
            CopKind::Solver => f.write_str("solver"),
        }
    }
}

pub fn parse_rules(variant: &str, semantics: &str, cops: usize) -> Result<RuleSet> {
    let semantics = match semantics {
        "at-most-one" => LazySemantics::AtMostOne,
        "exactly-one" => LazySemantics::ExactlyOne,
        _ => bail!("unknown semantics `{semantics}` (at-most-one | exactly-one)"),
    };
    let variant = match variant {
        "classical" => Variant::Classical,
        "lazy" | "one-cop-moves" => Variant::Lazy,
        _ => bail!("unknown variant `{variant}` (classical | lazy)"),
    };
    ensure!(cops >= 1, "need at least one cop");
    Ok(RuleSet { variant, semantics, cops })
}

#[derive(Clone, Debug)]
pub struct MatchSpec {
    pub graph: GraphId,
    pub rules: RuleSet,
    pub cops: CopKind,
    pub robber: RobberKind,
    pub max_rounds: u32,
    pub seed: u64,
    pub cop_start: Option<Vec<Vertex>>,
    pub robber_start: Option<Vertex>,
}

pub struct MatchResult {
    pub transcript: Transcript,
    pub stats: Option<RobberStats>,
}

type TableKey = (GraphId, RuleSet);

/// Solved tables, shared between matches and sessions of one process.
pub fn solver_table(loaded: &Loaded, rules: &RuleSet) -> Result<Arc<PositionTable>> {
    static TABLES: OnceLock<Mutex<HashMap<TableKey, Arc<PositionTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    let key = (loaded.id, *rules);
    if let Some(t) = tables.lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let (_, table) = solve_table(&loaded.graph, rules).with_context(|| format!("solving {} under {rules}", loaded.id))?;
    let table = Arc::new(table);
    tables.lock().unwrap().insert(key, table.clone());
    Ok(table)
}

pub fn centre_robber(loaded: &Loaded, rules: &RuleSet) -> Result<CentreRobber> {
    let w = loaded.world.clone().ok_or_else(|| anyhow!("the centre robber plays on layered:49 only, not {}", loaded.id))?;
    ensure!(rules.variant == Variant::Lazy && rules.cops == 3, "the centre robber plays one-cop-moves against 3 cops");
    Ok(CentreRobber::new(w)?)
}

pub fn robber_for(loaded: &Loaded, rules: &RuleSet, kind: &RobberKind, start: Option<Vertex>) -> Result<Box<dyn RobberStrategy + Send>> {
    Ok(match kind {
        RobberKind::Centre => Box::new(centre_robber(loaded, rules)?),
        RobberKind::Stay => {
            let start = start.unwrap_or(loaded.graph.n_vertices() as Vertex - 1);
            loaded.graph.check(start)?;
            Box::new(StayRobber { start })
        }
        RobberKind::Solver => Box::new(TableRobber { table: solver_table(loaded, rules)? }),
    })
}

fn cops_for(loaded: &Loaded, spec: &MatchSpec) -> Result<Box<dyn CopStrategy + Send>> {
    let rules = &spec.rules;
    Ok(match &spec.cops {
        CopKind::Stay => {
            let start = spec.cop_start.clone().unwrap_or_else(|| (0..rules.cops as Vertex).collect());
            Box::new(StayCops { start })
        }
        CopKind::Solver => {
            let table = solver_table(loaded, rules)?;
            let mut c = TableCops::new(loaded.graph.clone(), table).with_context(|| format!("{} cops do not win", rules.cops))?;
            if let Some(s) = &spec.cop_start {
                c.placement = s.clone();
            }
            Box::new(c)
        }
        CopKind::Adversary(kind) => {
            let w = loaded.world.clone().ok_or_else(|| anyhow!("adversary `{kind}` plays on layered:49 only"))?;
            ensure!(rules.cops == 3, "adversaries field 3 cops");
            make_adversary(kind, spec.seed, w)?
        }
    })
}

/// Plays one match to capture or the round bound.
pub fn play(loaded: &Loaded, spec: &MatchSpec) -> Result<MatchResult> {
    ensure!(spec.max_rounds >= 1, "max-rounds must be at least 1");
    ensure!(loaded.id == spec.graph, "spec graph {} but {} loaded", spec.graph, loaded.id);
    let mut cops = cops_for(loaded, spec)?;
    let g = &loaded.graph;
    let id = spec.graph.to_string();
    if spec.robber == RobberKind::Centre {
        let mut r = centre_robber(loaded, &spec.rules)?.quiet();
        let transcript = run_match(g, &spec.rules, cops.as_mut(), &mut r, spec.max_rounds, &id);
        return Ok(MatchResult { transcript, stats: Some(r.stats) });
    }
    let mut r = robber_for(loaded, &spec.rules, &spec.robber, spec.robber_start)?;
    let transcript = run_match(g, &spec.rules, cops.as_mut(), r.as_mut(), spec.max_rounds, &id);
    Ok(MatchResult { transcript, stats: None })
}
