use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex};

pub const TRANSCRIPT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Classical,
    #[serde(alias = "one-cop-moves")]
    Lazy,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LazySemantics {
    #[default]
    AtMostOne,
    ExactlyOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleSet {
    pub variant: Variant,
    pub semantics: LazySemantics,
    pub cops: usize,
}

impl RuleSet {
    pub fn classical(cops: usize) -> Self {
        RuleSet { variant: Variant::Classical, semantics: LazySemantics::AtMostOne, cops }
    }

    pub fn lazy(cops: usize) -> Self {
        RuleSet { variant: Variant::Lazy, semantics: LazySemantics::AtMostOne, cops }
    }

    pub fn lazy_exactly_one(cops: usize) -> Self {
        RuleSet { variant: Variant::Lazy, semantics: LazySemantics::ExactlyOne, cops }
    }

    pub fn with_cops(self, cops: usize) -> Self {
        RuleSet { cops, ..self }
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            Variant::Classical => write!(f, "classical k={}", self.cops),
            Variant::Lazy => {
                let s = match self.semantics {
                    LazySemantics::AtMostOne => "at-most-one",
                    LazySemantics::ExactlyOne => "exactly-one",
                };
                write!(f, "lazy/{s} k={}", self.cops)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Turn {
    Robber,
    Cops,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameConfig {
    pub cops: Vec<Vertex>,
    pub robber: Option<Vertex>,
    pub turn: Turn,
    pub round: u32,
    pub captured: Option<u32>,
}

impl GameConfig {
    pub fn is_over(&self) -> bool {
        self.captured.is_some()
    }

    pub fn robber_pos(&self) -> Vertex {
        self.robber.expect("robber placed")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Move {
    Robber(Vertex),
    /// New positions of all cops, in cop order.
    Cops(Vec<Vertex>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("expected {expected} cop positions, got {got}")]
    CopCount { expected: usize, got: usize },
    #[error("robber not placed yet")]
    RobberNotPlaced,
    #[error("robber already placed")]
    RobberPlaced,
    #[error("game already decided")]
    GameOver,
    #[error("it is not the {0:?} turn")]
    WrongTurn(Turn),
    #[error("illegal move: {0}")]
    Illegal(String),
    #[error("no cops")]
    NoCops,
}

pub fn place_cops(g: &Graph, rules: &RuleSet, positions: &[Vertex]) -> Result<GameConfig, EngineError> {
    if rules.cops == 0 {
        return Err(EngineError::NoCops);
    }
    if positions.len() != rules.cops {
        return Err(EngineError::CopCount { expected: rules.cops, got: positions.len() });
    }
    for &p in positions {
        g.check(p)?;
    }
    Ok(GameConfig { cops: positions.to_vec(), robber: None, turn: Turn::Robber, round: 0, captured: None })
}

pub fn place_robber(g: &Graph, cfg: &GameConfig, r: Vertex) -> Result<GameConfig, EngineError> {
    g.check(r)?;
    if cfg.robber.is_some() {
        return Err(EngineError::RobberPlaced);
    }
    let mut next = cfg.clone();
    next.robber = Some(r);
    if cfg.cops.contains(&r) {
        next.captured = Some(0);
        return Ok(next);
    }
    next.round = 1;
    next.turn = Turn::Robber;
    Ok(next)
}

pub fn legal_moves(g: &Graph, cfg: &GameConfig, rules: &RuleSet) -> Result<Vec<Move>, EngineError> {
    if cfg.is_over() {
        return Err(EngineError::GameOver);
    }
    let r = cfg.robber.ok_or(EngineError::RobberNotPlaced)?;
    match cfg.turn {
        Turn::Robber => {
            let mut out = vec![Move::Robber(r)];
            out.extend(g.neighbors(r).iter().map(|&v| Move::Robber(v)));
            Ok(out)
        }
        Turn::Cops => Ok(cop_moves(g, &cfg.cops, rules).into_iter().map(Move::Cops).collect()),
    }
}

/// Every cop position vector reachable in one cops' turn (unsorted, in cop order).
pub fn cop_moves(g: &Graph, cops: &[Vertex], rules: &RuleSet) -> Vec<Vec<Vertex>> {
    match rules.variant {
        Variant::Classical => {
            let mut out = vec![Vec::with_capacity(cops.len())];
            for &c in cops {
                let options: Vec<Vertex> = std::iter::once(c).chain(g.neighbors(c).iter().copied()).collect();
                out = out
                    .into_iter()
                    .flat_map(|prefix| {
                        options.iter().map(move |&o| {
                            let mut p = prefix.clone();
                            p.push(o);
                            p
                        })
                    })
                    .collect();
            }
            out
        }
        Variant::Lazy => {
            let mut out = Vec::new();
            if rules.semantics == LazySemantics::AtMostOne {
                out.push(cops.to_vec());
            }
            for (i, &c) in cops.iter().enumerate() {
                for &n in g.neighbors(c) {
                    let mut p = cops.to_vec();
                    p[i] = n;
                    out.push(p);
                }
            }
            out
        }
    }
}

pub fn is_legal_cop_move(g: &Graph, from: &[Vertex], to: &[Vertex], rules: &RuleSet) -> Result<(), String> {
    if from.len() != to.len() {
        return Err(format!("expected {} cop positions, got {}", from.len(), to.len()));
    }
    let mut moved = 0;
    for (i, (&a, &b)) in from.iter().zip(to).enumerate() {
        if (b as usize) >= g.n_vertices() {
            return Err(format!("cop {i} target {b} out of range"));
        }
        if a != b {
            if !g.has_edge(a, b) {
                return Err(format!("cop {i} cannot move {a} -> {b}: not adjacent"));
            }
            moved += 1;
        }
    }
    if rules.variant == Variant::Lazy {
        if moved > 1 {
            return Err(format!("{moved} cops moved; only one may move"));
        }
        if moved == 0 && rules.semantics == LazySemantics::ExactlyOne {
            return Err("exactly one cop must move".to_string());
        }
    }
    Ok(())
}

pub fn apply_move(g: &Graph, cfg: &GameConfig, rules: &RuleSet, mv: &Move) -> Result<GameConfig, EngineError> {
    if cfg.is_over() {
        return Err(EngineError::GameOver);
    }
    let r = cfg.robber.ok_or(EngineError::RobberNotPlaced)?;
    let mut next = cfg.clone();
    match (mv, cfg.turn) {
        (Move::Robber(to), Turn::Robber) => {
            if g.check(*to).is_err() || !g.within_one(r, *to) {
                return Err(EngineError::Illegal(format!("robber cannot move {r} -> {to}")));
            }
            next.robber = Some(*to);
            next.turn = Turn::Cops;
            if next.cops.contains(to) {
                next.captured = Some(cfg.round);
            }
        }
        (Move::Cops(to), Turn::Cops) => {
            is_legal_cop_move(g, &cfg.cops, to, rules).map_err(EngineError::Illegal)?;
            next.cops = to.clone();
            next.turn = Turn::Robber;
            if to.contains(&r) {
                next.captured = Some(cfg.round);
            }
            next.round += 1;
        }
        (_, turn) => return Err(EngineError::WrongTurn(turn)),
    }
    Ok(next)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Actor {
    Robber,
    Cops,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub round: u32,
    pub actor: Actor,
    pub from: Vec<Vertex>,
    pub to: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Outcome {
    Captured { round: u32 },
    Survived { rounds: u32 },
    /// The robber strategy declared an oscillation and was not captured within the bound.
    Oscillation { rounds: u32, since_round: u32 },
    Forfeit { actor: Actor, round: u32, reason: String },
    /// Match not finished (interactive sessions).
    InProgress,
}

impl Outcome {
    pub fn captured(&self) -> bool {
        matches!(self, Outcome::Captured { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placements {
    pub cops: Vec<Vertex>,
    pub robber: Option<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub schema: u32,
    pub rules: RuleSet,
    pub graph_id: String,
    pub placements: Placements,
    pub moves: Vec<MoveRecord>,
    pub outcome: Outcome,
}

impl Transcript {
    pub fn new(rules: RuleSet, graph_id: &str, cops: Vec<Vertex>) -> Self {
        Transcript {
            schema: TRANSCRIPT_SCHEMA,
            rules,
            graph_id: graph_id.to_string(),
            placements: Placements { cops, robber: None },
            moves: Vec::new(),
            outcome: Outcome::InProgress,
        }
    }

    /// Replays every move through the engine and returns the final configuration.
    pub fn replay(&self, g: &Graph) -> Result<GameConfig, EngineError> {
        let mut cfg = place_cops(g, &self.rules, &self.placements.cops)?;
        let Some(r) = self.placements.robber else {
            return Ok(cfg);
        };
        cfg = place_robber(g, &cfg, r)?;
        for (i, rec) in self.moves.iter().enumerate() {
            let current: Vec<Vertex> = match rec.actor {
                Actor::Robber => vec![cfg.robber_pos()],
                Actor::Cops => cfg.cops.clone(),
            };
            if current != rec.from || rec.round != cfg.round {
                return Err(EngineError::Illegal(format!("record {i} does not match the replayed state")));
            }
            let mv = match rec.actor {
                Actor::Robber if rec.to.len() == 1 => Move::Robber(rec.to[0]),
                Actor::Cops => Move::Cops(rec.to.clone()),
                Actor::Robber => return Err(EngineError::Illegal(format!("record {i}: robber move needs one target"))),
            };
            cfg = apply_move(g, &cfg, &self.rules, &mv)?;
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transcript serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

pub trait CopStrategy {
    fn name(&self) -> String;
    fn place(&mut self, g: &Graph, rules: &RuleSet) -> Vec<Vertex>;
    fn act(&mut self, g: &Graph, rules: &RuleSet, cfg: &GameConfig) -> Vec<Vertex>;
}

pub trait RobberStrategy {
    fn name(&self) -> String;
    fn place(&mut self, g: &Graph, rules: &RuleSet, cops: &[Vertex]) -> Vertex;
    fn act(&mut self, g: &Graph, rules: &RuleSet, cfg: &GameConfig) -> Vertex;
    /// Round since which the strategy has been oscillating, if it is.
    fn oscillating_since(&self) -> Option<u32> {
        None
    }
}

/// Plays one match until capture or until `max_rounds` full rounds have been played.
pub fn run_match(
    g: &Graph,
    rules: &RuleSet,
    cops: &mut dyn CopStrategy,
    robber: &mut dyn RobberStrategy,
    max_rounds: u32,
    graph_id: &str,
) -> Transcript {
    let start = cops.place(g, rules);
    let mut t = Transcript::new(*rules, graph_id, start.clone());
    let mut cfg = match place_cops(g, rules, &start) {
        Ok(c) => c,
        Err(e) => {
            t.outcome = Outcome::Forfeit { actor: Actor::Cops, round: 0, reason: e.to_string() };
            return t;
        }
    };
    let r = robber.place(g, rules, &cfg.cops);
    t.placements.robber = Some(r);
    cfg = match place_robber(g, &cfg, r) {
        Ok(c) => c,
        Err(e) => {
            t.placements.robber = None;
            t.outcome = Outcome::Forfeit { actor: Actor::Robber, round: 0, reason: e.to_string() };
            return t;
        }
    };
    while cfg.captured.is_none() && cfg.round <= max_rounds {
        let (actor, from, mv) = match cfg.turn {
            Turn::Robber => (Actor::Robber, vec![cfg.robber_pos()], Move::Robber(robber.act(g, rules, &cfg))),
            Turn::Cops => (Actor::Cops, cfg.cops.clone(), Move::Cops(cops.act(g, rules, &cfg))),
        };
        match apply_move(g, &cfg, rules, &mv) {
            Ok(next) => {
                let to = match &mv {
                    Move::Robber(v) => vec![*v],
                    Move::Cops(v) => v.clone(),
                };
                t.moves.push(MoveRecord { round: cfg.round, actor, from, to });
                cfg = next;
            }
            Err(e) => {
                t.outcome = Outcome::Forfeit { actor, round: cfg.round, reason: e.to_string() };
                return t;
            }
        }
    }
    t.outcome = match cfg.captured {
        Some(round) => Outcome::Captured { round },
        None => match robber.oscillating_since() {
            Some(since_round) => Outcome::Oscillation { rounds: max_rounds, since_round },
            None => Outcome::Survived { rounds: max_rounds },
        },
    };
    t
}

/// Cops that never move (or, under exactly-one, shuffle the first cop back and forth).
pub struct StayCops {
    pub start: Vec<Vertex>,
}

impl CopStrategy for StayCops {
    fn name(&self) -> String {
        "stay".into()
    }

    fn place(&mut self, _g: &Graph, _rules: &RuleSet) -> Vec<Vertex> {
        self.start.clone()
    }

    fn act(&mut self, g: &Graph, rules: &RuleSet, cfg: &GameConfig) -> Vec<Vertex> {
        let mut next = cfg.cops.clone();
        if rules.variant == Variant::Lazy && rules.semantics == LazySemantics::ExactlyOne {
            next[0] = g.neighbors(next[0])[0];
        }
        next
    }
}

pub struct StayRobber {
    pub start: Vertex,
}

impl RobberStrategy for StayRobber {
    fn name(&self) -> String {
        "stay".into()
    }

    fn place(&mut self, _g: &Graph, _rules: &RuleSet, _cops: &[Vertex]) -> Vertex {
        self.start
    }

    fn act(&mut self, _g: &Graph, _rules: &RuleSet, cfg: &GameConfig) -> Vertex {
        cfg.robber_pos()
    }
}
