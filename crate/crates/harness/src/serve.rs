use std::io::{BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::Arc;
use std::thread;

use anyhow::{anyhow, bail, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use pursuit_core::engine::{
    apply_move, place_cops, place_robber, Actor, GameConfig, LazySemantics, Move, MoveRecord, Outcome, RobberStrategy, RuleSet,
    Transcript, Turn, Variant,
};
use pursuit_core::graph::{Graph, Vertex};

use crate::graphs::GraphId;
use crate::play::{parse_rules, robber_for, RobberKind};

#[derive(Clone, Debug, Deserialize)]
pub struct RulesMsg {
    #[serde(default = "default_variant")]
    pub variant: String,
    #[serde(default = "default_semantics")]
    pub semantics: String,
    pub cops: usize,
}

fn default_variant() -> String {
    "lazy".into()
}

fn default_semantics() -> String {
    "at-most-one".into()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Request {
    NewSession {
        graph: String,
        rules: RulesMsg,
        robber_kind: String,
        /// Cop start positions; defaults to vertices 0..k.
        #[serde(default)]
        cops: Option<Vec<Vertex>>,
    },
    State {},
    /// Either one cop's target, or all positions at once.
    CopMove {
        #[serde(default)]
        cop_index: Option<usize>,
        #[serde(default)]
        to: Option<Vertex>,
        #[serde(default)]
        positions: Option<Vec<Vertex>>,
    },
    RobberAuto {},
    Transcript {},
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Legal {
    /// Robber targets (including staying) when the robber is to move.
    pub robber: Vec<Vertex>,
    /// Per cop, the vertices it may move to (including staying) when the cops are to move.
    pub cops: Vec<Vec<Vertex>>,
    /// Whether only one cop may leave its vertex in a turn.
    pub one_cop_only: bool,
    /// Whether all cops may stay put.
    pub pass_allowed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateView {
    pub cop_positions: Vec<Vertex>,
    pub robber: Option<Vertex>,
    pub round: u32,
    pub turn: Turn,
    pub captured: Option<u32>,
    pub legal: Legal,
}

pub struct Session {
    g: Arc<Graph>,
    rules: RuleSet,
    cfg: GameConfig,
    robber: Box<dyn RobberStrategy + Send>,
    transcript: Transcript,
}

impl Session {
    pub fn new(graph: &str, rules: RuleSet, robber_kind: &str, cops: Option<Vec<Vertex>>) -> Result<Self> {
        let id: GraphId = graph.parse()?;
        let kind: RobberKind = robber_kind.parse()?;
        let loaded = id.load()?;
        let mut robber = robber_for(&loaded, &rules, &kind, None)?;
        let g = loaded.graph.clone();
        let start = cops.unwrap_or_else(|| (0..rules.cops as Vertex).collect());
        let cfg = place_cops(&g, &rules, &start)?;
        let r = robber.place(&g, &rules, &cfg.cops);
        let cfg = place_robber(&g, &cfg, r)?;
        let mut transcript = Transcript::new(rules, &id.to_string(), start);
        transcript.placements.robber = Some(r);
        if let Some(round) = cfg.captured {
            transcript.outcome = Outcome::Captured { round };
        }
        Ok(Session { g, rules, cfg, robber, transcript })
    }

    pub fn state(&self) -> StateView {
        let g = &self.g;
        let over = self.cfg.is_over();
        let robber = match (self.cfg.turn, self.cfg.robber) {
            (Turn::Robber, Some(r)) if !over => std::iter::once(r).chain(g.neighbors(r).iter().copied()).collect(),
            _ => Vec::new(),
        };
        let cops = if self.cfg.turn == Turn::Cops && !over {
            self.cfg.cops.iter().map(|&c| std::iter::once(c).chain(g.neighbors(c).iter().copied()).collect()).collect()
        } else {
            Vec::new()
        };
        let lazy = self.rules.variant == Variant::Lazy;
        StateView {
            cop_positions: self.cfg.cops.clone(),
            robber: self.cfg.robber,
            round: self.cfg.round,
            turn: self.cfg.turn,
            captured: self.cfg.captured,
            legal: Legal {
                robber,
                cops,
                one_cop_only: lazy,
                pass_allowed: !lazy || self.rules.semantics == LazySemantics::AtMostOne,
            },
        }
    }

    fn apply(&mut self, actor: Actor, mv: Move) -> Result<()> {
        let from = match actor {
            Actor::Robber => vec![self.cfg.robber_pos()],
            Actor::Cops => self.cfg.cops.clone(),
        };
        let next = apply_move(&self.g, &self.cfg, &self.rules, &mv)?;
        let to = match mv {
            Move::Robber(v) => vec![v],
            Move::Cops(v) => v,
        };
        self.transcript.moves.push(MoveRecord { round: self.cfg.round, actor, from, to });
        self.cfg = next;
        if let Some(round) = self.cfg.captured {
            self.transcript.outcome = Outcome::Captured { round };
        }
        Ok(())
    }

    /// Moves cop `i` to `to`, the others staying; state is unchanged on error.
    pub fn cop_move(&mut self, i: usize, to: Vertex) -> Result<()> {
        let mut next = self.cfg.cops.clone();
        let slot = next.get_mut(i).ok_or_else(|| anyhow!("no cop with index {i}"))?;
        *slot = to;
        self.cops_move(next)
    }

    pub fn cops_move(&mut self, positions: Vec<Vertex>) -> Result<()> {
        self.apply(Actor::Cops, Move::Cops(positions))
    }

    pub fn robber_auto(&mut self) -> Result<Vertex> {
        if self.cfg.is_over() {
            bail!("game already decided");
        }
        if self.cfg.turn != Turn::Robber {
            bail!("it is the cops' turn");
        }
        let to = self.robber.act(&self.g, &self.rules, &self.cfg);
        self.apply(Actor::Robber, Move::Robber(to))?;
        Ok(to)
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }
}

/// Answers one request line, creating or updating the connection's session.
pub fn handle(session: &mut Option<Session>, line: &str) -> Value {
    let req: Request = match serde_json::from_str(line) {
        Ok(r) => r,
        Err(e) => return json!({ "ok": false, "error": format!("bad request: {e}") }),
    };
    let result = match req {
        Request::NewSession { graph, rules, robber_kind, cops } => {
            match parse_rules(&rules.variant, &rules.semantics, rules.cops)
                .and_then(|r| Session::new(&graph, r, &robber_kind, cops))
            {
                Ok(s) => {
                    *session = Some(s);
                    Ok(())
                }
                Err(e) => Err(e),
            }
        }
        Request::Transcript {} => {
            return match session {
                Some(s) => json!({ "ok": true, "transcript": s.transcript() }),
                None => json!({ "ok": false, "error": "no session" }),
            }
        }
        other => match session.as_mut() {
            None => Err(anyhow!("no session")),
            Some(s) => match other {
                Request::State {} => Ok(()),
                Request::RobberAuto {} => s.robber_auto().map(|_| ()),
                Request::CopMove { cop_index, to, positions } => match (cop_index, to, positions) {
                    (Some(i), Some(to), None) => s.cop_move(i, to),
                    (None, None, Some(p)) => s.cops_move(p),
                    _ => Err(anyhow!("cop_move needs cop_index and to, or positions")),
                },
                _ => unreachable!(),
            },
        },
    };
    let state = session.as_ref().map(|s| s.state());
    match result {
        Ok(()) => json!({ "ok": true, "state": state }),
        Err(e) => json!({ "ok": false, "error": format!("{e:#}"), "state": state }),
    }
}

fn connection(stream: TcpStream) -> std::io::Result<()> {
    let mut out = stream.try_clone()?;
    let mut session = None;
    for line in BufReader::new(stream).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let reply = handle(&mut session, &line);
        writeln!(out, "{reply}")?;
        out.flush()?;
    }
    Ok(())
}

/// Accepts connections forever, one session per connection, each on its own thread.
pub fn serve(listener: TcpListener) -> Result<()> {
    for stream in listener.incoming() {
        let stream = stream?;
        thread::spawn(move || {
            let _ = connection(stream);
        });
    }
    Ok(())
}
