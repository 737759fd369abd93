use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::case::{classify_case, Dispatch};
use super::cert::RLoop;
use super::plan::{go, program, route, EscapeTarget, Plan};
use super::world::{field_for, FieldCache, World, STRATEGY_LAYERS};
use super::StrategyError;
use crate::construct::N_FACES;
use crate::engine::{GameConfig, RobberStrategy, RuleSet};
use crate::graph::{Graph, Vertex};

/// One structured event of the robber's dispatch and tactic log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEntry {
    pub round: u32,
    pub label: String,
    pub tactic: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobberStats {
    pub dispatches: u32,
    /// Dispatches resolved by a directly reachable neighbouring centre before classification.
    pub shortcut: u32,
    /// Dispatches whose w.l.o.g. normalisation found no exact match.
    pub inexact: u32,
    pub cert_checks: u64,
    pub cert_failures: u32,
    pub retreats: u32,
    pub corner_probes: u32,
    /// Program legs that were not certified when due, handled by recovery.
    pub deviations: u32,
    /// Fallback moves and dispatch gaps.
    pub divergences: u32,
    pub arrivals: u32,
    pub coverage: BTreeMap<String, u32>,
}

/// Which corner tactic's precondition holds at a corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CornerKind {
    TwoFace(usize, usize),
    ThreeFace,
    CentreMove,
}

/// Classifies a corner configuration as in the strategy-at-corner dispatch.
pub fn corner_kind(w: &World, v: Vertex, cops: &[Vertex]) -> Result<CornerKind, StrategyError> {
    if !w.d.is_corner(v) {
        return Err(StrategyError::NotAtCorner(v));
    }
    let d = |c: Vertex| w.to_point(v, c).unwrap();
    if cops.iter().any(|&c| d(c) <= 1) {
        return Err(StrategyError::CopAtCorner);
    }
    let faces = w.d.dodeca.faces_at(v);
    for i in 0..faces.len() {
        for j in i + 1..faces.len() {
            let pair = [faces[i], faces[j]];
            for a in 0..cops.len() {
                let rest_far = (0..cops.len()).filter(|&b| b != a).all(|b| w.to_faces(&pair, cops[b]) >= 2);
                if rest_far {
                    return Ok(CornerKind::TwoFace(pair[0], pair[1]));
                }
            }
        }
    }
    let inside: Vec<usize> = (0..cops.len()).filter(|&b| w.to_faces(&faces, cops[b]) == 0).collect();
    if inside.len() <= 2 && (0..cops.len()).filter(|b| !inside.contains(b)).all(|b| w.to_faces(&faces, cops[b]) >= 2) {
        return Ok(CornerKind::ThreeFace);
    }
    Ok(CornerKind::CentreMove)
}

enum LegField {
    Landmark(Vertex),
    Cached(Arc<[u16]>),
}

struct Leg {
    path: Vec<Vertex>,
    idx: usize,
    end: LegField,
    then: Plan,
    probe: bool,
    tag: &'static str,
}

struct CornerState {
    v: Vertex,
    probe: Option<(usize, Vertex)>,
    cycles: u32,
    first_probe: Option<u32>,
}

enum Mode {
    Wait(usize),
    Leg(Leg),
    Corner(CornerState),
    Recover,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stage {
    Out,
    B1Walk,
    B2Legs,
    Done,
}

struct Escape {
    frame: usize,
    origin: &'static str,
    order: [usize; 3],
    l: [u32; 3],
    moves: [u32; 3],
    phase1: bool,
    alpha: Option<(usize, Vertex)>,
    k: u32,
    walk_base: u32,
    skips: u32,
    rloop: Option<RLoop>,
    legs_done: u32,
    stage: Stage,
}

/// The robber strategy on 𝒟(49): wait at a centre, dispatch on the first adjacent cop, run the case program.
pub struct CentreRobber {
    w: Arc<World>,
    cache: FieldCache,
    mode: Mode,
    prev_cops: Option<Vec<Vertex>>,
    esc: Option<Escape>,
    pending: Option<Dispatch>,
    round: u32,
    keep_log: bool,
    pub log: Vec<LogEntry>,
    pub stats: RobberStats,
}

impl CentreRobber {
    pub fn new(w: Arc<World>) -> Result<Self, StrategyError> {
        if w.layers() != STRATEGY_LAYERS {
            return Err(StrategyError::WrongLayers(w.layers()));
        }
        Ok(CentreRobber {
            w,
            cache: FieldCache::new(6),
            mode: Mode::Recover,
            prev_cops: None,
            esc: None,
            pending: None,
            round: 0,
            keep_log: true,
            log: Vec::new(),
            stats: RobberStats::default(),
        })
    }

    /// Drops per-event log entries and keeps only the counters.
    pub fn quiet(mut self) -> Self {
        self.keep_log = false;
        self
    }

    pub fn world(&self) -> &Arc<World> {
        &self.w
    }

    /// Home face while waiting at a centre.
    pub fn home(&self) -> Option<usize> {
        match self.mode {
            Mode::Wait(f) => Some(f),
            _ => None,
        }
    }

    fn g(&self) -> &Graph {
        self.w.graph()
    }

    fn note(&mut self, label: &str, tactic: &str, detail: String) {
        if self.keep_log {
            self.log.push(LogEntry { round: self.round, label: label.into(), tactic: tactic.into(), detail });
        }
    }

    fn cover(&mut self, label: &str) {
        *self.stats.coverage.entry(label.to_string()).or_default() += 1;
    }

    fn threatened(&self, z: Vertex, cops: &[Vertex]) -> bool {
        cops.iter().any(|&c| c == z || self.g().has_edge(c, z))
    }

    fn observe(&mut self, cops: &[Vertex]) {
        let moved: Option<usize> = self
            .prev_cops
            .as_ref()
            .and_then(|p| (0..cops.len()).find(|&i| p[i] != cops[i]));
        self.prev_cops = Some(cops.to_vec());
        let Some(e) = self.esc.as_mut() else { return };
        if let Some(i) = moved {
            e.moves[i] += 1;
        }
        if e.phase1 && e.alpha.is_none() {
            let u2 = self.w.frame_at(e.frame).face[2];
            if let Some(i) = (0..cops.len()).find(|&i| self.w.d.in_face(cops[i], u2)) {
                e.alpha = Some((i, cops[i]));
            }
        }
        if e.stage == Stage::B2Legs {
            if let Some((a, _)) = e.alpha {
                if moved != Some(a) {
                    e.skips += 1;
                }
            }
        }
    }

    fn leg_dist(&self, end: &LegField, c: Vertex) -> u32 {
        match end {
            LegField::Landmark(t) => self.w.to_point(*t, c).unwrap(),
            LegField::Cached(f) => {
                let d = f[c as usize];
                if d == u16::MAX {
                    u32::MAX
                } else {
                    d as u32
                }
            }
        }
    }

    fn shortest(&mut self, from: Vertex, to: Vertex) -> Vec<Vertex> {
        let w = self.w.clone();
        let f = field_for(&w, &mut self.cache, to);
        w.descend(&f, from)
    }

    fn end_field(&mut self, t: Vertex) -> LegField {
        if self.w.point_field(t).is_some() {
            LegField::Landmark(t)
        } else {
            LegField::Cached(self.cache.get(self.w.graph(), t))
        }
    }

    /// Starts a leg if its certificate holds now.
    fn make_leg(&mut self, path: Vec<Vertex>, then: Plan, probe: bool, tag: &'static str, cops: &[Vertex]) -> Option<Mode> {
        let end = self.end_field(*path.last().unwrap());
        let n = (path.len() - 1) as u32;
        self.stats.cert_checks += 1;
        let ok = if probe {
            cops.iter().all(|&c| self.leg_dist(&end, c) >= n) && !self.threatened(path[1], cops)
        } else {
            cops.iter().all(|&c| self.leg_dist(&end, c) > n)
        };
        if !ok {
            return None;
        }
        Some(Mode::Leg(Leg { path, idx: 0, end, then, probe, tag }))
    }

    fn activate(&mut self, plan: Plan, r: Vertex, cops: &[Vertex], probe: bool) -> Option<Mode> {
        match plan {
            Plan::Go { to, then } => {
                if r == to {
                    return self.activate(*then, r, cops, probe);
                }
                let path = self.shortest(r, to);
                self.make_leg(path, *then, probe, "go", cops)
            }
            Plan::Route { via, then } => {
                let mut path = vec![r];
                for &x in &via {
                    let seg = self.shortest(*path.last().unwrap(), x);
                    path.extend_from_slice(&seg[1..]);
                }
                if path.len() == 1 {
                    return self.activate(*then, r, cops, probe);
                }
                self.make_leg(path, *then, probe, "route", cops)
            }
            Plan::Choose(alts) => alts.into_iter().find_map(|a| self.activate(a, r, cops, probe)),
            Plan::Centre(f) => {
                let o = self.w.d.center(f);
                if r == o {
                    self.stats.arrivals += 1;
                    self.esc = None;
                    self.note("arrive", "centre", format!("face {f}"));
                    return Some(Mode::Wait(f));
                }
                let path = self.shortest(r, o);
                self.make_leg(path, Plan::Centre(f), probe, "centre", cops)
            }
            Plan::Corner => {
                if self.w.d.is_corner(r) {
                    let kind = corner_kind(&self.w, r, cops).map(|k| format!("{k:?}")).unwrap_or_else(|e| e.to_string());
                    self.note("corner", "strategy-at-corner", kind);
                    Some(Mode::Corner(CornerState { v: r, probe: None, cycles: 0, first_probe: None }))
                } else {
                    None
                }
            }
            Plan::Escape(t) => self.start_escape(t, r, cops, probe),
            Plan::EscapeStep => self.escape_step(r, cops),
        }
    }

    fn dispatch(&mut self, f: usize, r: Vertex, cops: &[Vertex]) -> Option<Mode> {
        self.stats.dispatches += 1;
        let t = self.w.frame(f, 0, false);
        let o = r;
        for i in 1..=5 {
            let face = t.face[i];
            if cops.iter().all(|&c| self.w.to_centre(face, c) > self.w.to_centre(face, o)) {
                self.stats.shortcut += 1;
                self.note("shortcut", "reach-centre", format!("face {face}"));
                return self.activate(Plan::Centre(face), r, cops, false);
            }
        }
        match classify_case(&self.w, r, cops) {
            Ok(d) => {
                self.cover(d.label);
                if !d.exact {
                    self.stats.inexact += 1;
                }
                self.note(d.label, d.program, format!("frame {} order {:?} exact {}", d.frame, d.order, d.exact));
                let plan = program(&self.w, &d, cops);
                self.pending = Some(d);
                let m = self.activate(plan, r, cops, true);
                if m.is_none() {
                    self.stats.deviations += 1;
                    self.note("deviation", "program", "no certified opening leg".into());
                }
                m
            }
            Err(e) => {
                self.stats.divergences += 1;
                self.note("gap", "dispatch", e.to_string());
                None
            }
        }
    }

    fn mirror_frame(w: &World, frame: usize) -> usize {
        let t = w.frame_at(frame);
        (t.face[0] * 10..t.face[0] * 10 + 10)
            .find(|&i| {
                let m = w.frame_at(i);
                m.v[0] == t.v[1] && m.v[1] == t.v[0]
            })
            .expect("every frame has a mirror")
    }

    fn start_escape(&mut self, t: EscapeTarget, r: Vertex, cops: &[Vertex], probe: bool) -> Option<Mode> {
        let frame = (t.home * 10..t.home * 10 + 10).find(|&i| {
            let f = self.w.frame_at(i);
            self.w.to_side(f.v[0], f.v[1], t.target) == 0
        })?;
        let path = self.shortest(r, t.target);
        let mode = self.make_leg(path, Plan::EscapeStep, probe, "escape", cops)?;
        let (origin, order) = match &self.pending {
            Some(d) => (d.label, d.order),
            None => ("", [0, 1, 2]),
        };
        let fr = self.w.frame_at(frame);
        let (a, b) = (fr.v[0], fr.v[1]);
        let l = std::array::from_fn(|j| cops.get(j).map_or(u32::MAX, |&c| self.w.to_side(a, b, c)));
        self.note(origin, "escape", format!("target {} l {:?}", t.target, l));
        self.esc = Some(Escape {
            frame,
            origin,
            order,
            l,
            moves: [0; 3],
            phase1: true,
            alpha: None,
            k: 0,
            walk_base: 0,
            skips: 0,
            rloop: None,
            legs_done: 0,
            stage: Stage::Out,
        });
        Some(mode)
    }

    fn refine(&mut self, e_origin: &'static str, order: [usize; 3], moves: [u32; 3], alpha: Option<usize>) {
        if e_origin != "B.2.1.1" {
            return;
        }
        let label = if moves[order[0]] >= 47 {
            if alpha == Some(order[1]) {
                "B.2.1.1.1.2"
            } else {
                "B.2.1.1.1.1"
            }
        } else {
            "B.2.1.1.2"
        };
        self.cover(label);
        self.note(label, "refine", format!("moves {moves:?}"));
    }

    fn escape_step(&mut self, r: Vertex, cops: &[Vertex]) -> Option<Mode> {
        let stage = self.esc.as_ref()?.stage;
        match stage {
            Stage::Out => {
                let e = self.esc.as_mut().unwrap();
                e.phase1 = false;
                let (origin, order, moves) = (e.origin, e.order, e.moves);
                let t = self.w.frame_at(e.frame);
                let u2 = t.face[2];
                if cops.iter().all(|&c| !self.w.d.in_face(c, u2)) {
                    self.refine(origin, order, moves, None);
                    self.note(origin, "escape-a", format!("face {u2}"));
                    self.esc.as_mut().unwrap().stage = Stage::Done;
                    return self.activate(Plan::Centre(u2), r, cops, false);
                }
                let (a, s) = match e.alpha {
                    Some(x) => x,
                    None => {
                        let a = (0..cops.len()).filter(|&i| self.w.d.in_face(cops[i], u2)).max_by_key(|&i| e.moves[i]).unwrap();
                        (a, cops[a])
                    }
                };
                e.alpha = Some((a, s));
                let (b1, b2) = (t.b[1].clone(), t.b[2].clone());
                let d1 = self.w.to_side(b1[0], *b1.last().unwrap(), s);
                let d2 = self.w.to_side(b2[0], *b2.last().unwrap(), s);
                if d1 < d2 {
                    e.frame = Self::mirror_frame(&self.w, e.frame);
                }
                e.k = e.moves[a];
                let (k, la) = (e.k, e.l[a]);
                self.refine(origin, order, moves, Some(a));
                let e = self.esc.as_mut().unwrap();
                let t = self.w.frame_at(e.frame);
                if k >= la + 46 {
                    e.stage = Stage::B1Walk;
                    e.walk_base = e.moves[a];
                    let plan = route(vec![t.v[0], t.b_middle[1]], Plan::EscapeStep);
                    self.note(origin, "escape-b1", format!("k {k} l {la}"));
                    self.activate(plan, r, cops, false)
                } else {
                    match RLoop::new(k, la) {
                        Ok(lp) => {
                            e.rloop = Some(lp);
                            e.stage = Stage::B2Legs;
                            e.skips = 0;
                            self.note(origin, "escape-b2", format!("k {k} l {la}"));
                            self.escape_step(r, cops)
                        }
                        Err(err) => {
                            self.note("deviation", "escape-b2", err.to_string());
                            self.stats.deviations += 1;
                            None
                        }
                    }
                }
            }
            Stage::B1Walk => {
                let e = self.esc.as_mut().unwrap();
                e.stage = Stage::Done;
                let a = e.alpha.unwrap().0;
                let moved = e.moves[a] - e.walk_base;
                let t = self.w.frame_at(e.frame);
                let d = &self.w.d;
                let (v1, q1, x1) = (t.v[0], t.q[0], t.x[0]);
                let plan = if moved <= 96 {
                    go(q1, Plan::Centre(t.face[6]))
                } else {
                    let rr = 20;
                    let u1 = t.face[1];
                    let p = d.side_vertex(u1, v1, q1, rr, rr + 1).ok()?;
                    let q = d.side_vertex(u1, v1, q1, rr, 2 * rr + 2).ok()?;
                    let tt = d.side_vertex(u1, q1, x1, rr, 2 * rr + 2).ok()?;
                    go(p, Plan::Choose(vec![Plan::Centre(u1), route(vec![q, tt, x1], Plan::Centre(t.face[10]))]))
                };
                self.note("escape", "b1-walk", format!("moved {moved}"));
                self.activate(plan, r, cops, false)
            }
            Stage::B2Legs => {
                let w = self.w.clone();
                let e = self.esc.as_mut().unwrap();
                let lp = e.rloop.as_mut().unwrap();
                let done = if e.legs_done > 0 {
                    match lp.observe(e.skips) {
                        Ok(d) => d.cloned(),
                        Err(err) => {
                            self.stats.deviations += 1;
                            self.note("deviation", "r-loop", err.to_string());
                            return None;
                        }
                    }
                } else {
                    None
                };
                let t = w.frame_at(e.frame);
                let d = &w.d;
                let (v1, v2, q1, u2) = (t.v[0], t.v[1], t.q[0], t.face[2]);
                match done {
                    None => {
                        let ri = lp.next_r()?;
                        e.legs_done += 1;
                        let wi = d.side_vertex(u2, v1, v2, ri, ri + 1).ok()?;
                        self.activate(go(wi, Plan::EscapeStep), r, cops, false)
                    }
                    Some(res) => {
                        e.stage = Stage::Done;
                        let (k, la) = (e.k, e.l[e.alpha.unwrap().0]);
                        self.note("escape", "r-loop", format!("r {} j {} k {k} l {la}", res.r, res.j_last));
                        let plan = if res.j_last > k - la {
                            Plan::Centre(u2)
                        } else {
                            let rr = res.r;
                            let q2 = d.side_vertex(u2, v1, v2, rr, 0).ok()?;
                            let t2 = d.side_vertex(u2, v1, q1, rr, 2 * rr + 2).ok()?;
                            route(vec![q2, t2, q1], Plan::Centre(t.face[6]))
                        };
                        self.activate(plan, r, cops, false)
                    }
                }
            }
            Stage::Done => None,
        }
    }

    fn corner_step(&mut self, mut st: CornerState, r: Vertex, cops: &[Vertex]) -> Result<Vertex, Option<Mode>> {
        let w = self.w.clone();
        match st.probe {
            None => {
                if r != st.v {
                    return Err(None);
                }
                let faces = w.d.dodeca.faces_at(st.v);
                for &f in &faces {
                    if cops.iter().all(|&c| w.to_centre(f, c) > 98) {
                        if let Some(m) = self.activate(Plan::Centre(f), r, cops, false) {
                            return Err(Some(m));
                        }
                    }
                }
                let best = faces
                    .iter()
                    .filter_map(|&f| {
                        let vp = w.inward_of_corner(st.v, f);
                        let ok = !self.threatened(vp, cops)
                            && cops.iter().all(|&c| w.to_centre(f, c) >= 98)
                            && safe_at(w.graph(), vp, cops, 1);
                        let tight = cops.iter().filter(|&&c| w.to_centre(f, c) == 98).count();
                        ok.then_some((tight, f, vp))
                    })
                    .min();
                if let Some((_, f, vp)) = best {
                    self.stats.corner_probes += 1;
                    st.probe = Some((f, vp));
                    st.first_probe.get_or_insert(self.round);
                    self.mode = Mode::Corner(st);
                    return Ok(vp);
                }
                if !self.threatened(st.v, cops) {
                    let v = st.v;
                    self.mode = Mode::Corner(st);
                    return Ok(v);
                }
                Err(None)
            }
            Some((f, vp)) => {
                if r != vp {
                    return Err(None);
                }
                if cops.iter().all(|&c| w.to_centre(f, c) > 97) {
                    if let Some(m) = self.activate(Plan::Centre(f), r, cops, false) {
                        self.note("corner", "probe-through", format!("face {f}"));
                        return Err(Some(m));
                    }
                }
                if !self.threatened(st.v, cops) {
                    self.stats.retreats += 1;
                    st.cycles += 1;
                    st.probe = None;
                    let v = st.v;
                    self.mode = Mode::Corner(st);
                    return Ok(v);
                }
                Err(None)
            }
        }
    }

    /// Certified way back into the program after a leg could not continue.
    fn recover(&mut self, r: Vertex, cops: &[Vertex], allow_corner: bool) -> Option<Mode> {
        let w = self.w.clone();
        let mut centres: Vec<(u32, u32, usize)> = (0..N_FACES)
            .filter(|&f| w.d.center(f) != r)
            .filter_map(|f| {
                let n = w.to_centre(f, r);
                let slack = cops.iter().map(|&c| w.to_centre(f, c)).min().unwrap_or(u32::MAX);
                (slack > n).then(|| (n, u32::MAX - (slack - n), f))
            })
            .collect();
        centres.sort();
        for (_, _, f) in centres {
            if let Some(m) = self.activate(Plan::Centre(f), r, cops, false) {
                self.note("recover", "centre", format!("face {f}"));
                return Some(m);
            }
        }
        let mut corners: Vec<(u32, Vertex)> = (0..20u32)
            .filter(|&c| c != r)
            .filter_map(|c| {
                let n = w.to_point(c, r)?;
                cops.iter().all(|&x| w.to_point(c, x).unwrap() > n).then_some((n, c))
            })
            .collect();
        corners.sort();
        for (_, c) in corners {
            if let Some(m) = self.activate(go(c, Plan::Corner), r, cops, false) {
                self.note("recover", "corner", format!("corner {c}"));
                return Some(m);
            }
        }
        if allow_corner && w.d.is_corner(r) {
            return self.activate(Plan::Corner, r, cops, false);
        }
        None
    }

    /// Locally safest move when no certified plan applies.
    fn fallback(&mut self, r: Vertex, cops: &[Vertex]) -> Vertex {
        self.stats.divergences += 1;
        let w = self.w.clone();
        let g = w.graph();
        let near = cop_ball(g, cops, 6);
        let mut best = r;
        let mut key = (false, false, 0u32, std::cmp::Reverse(u32::MAX));
        for &y in std::iter::once(&r).chain(g.neighbors(r)) {
            let free = !self.threatened(y, cops);
            let safe = free && safe_at(g, y, cops, 2);
            let dist = near.get(&y).copied().unwrap_or(7);
            let home = (0..N_FACES)
                .filter(|&f| cops.iter().all(|&c| !w.d.in_face(c, f)))
                .map(|f| w.to_centre(f, y))
                .min()
                .unwrap_or(u32::MAX);
            let k = (safe, free, dist, std::cmp::Reverse(home));
            if k > key {
                key = k;
                best = y;
            }
        }
        self.note("divergence", "fallback", format!("to {best} safe {}", key.0));
        best
    }

    /// One decision; `Err` carries control to the next mode without moving.
    fn step(&mut self, r: Vertex, cops: &[Vertex]) -> Option<Vertex> {
        let mode = std::mem::replace(&mut self.mode, Mode::Recover);
        match mode {
            Mode::Wait(f) => {
                if r != self.w.d.center(f) {
                    return None;
                }
                let adj = cops.iter().filter(|&&c| self.g().has_edge(c, r)).count();
                match adj {
                    0 => {
                        self.mode = Mode::Wait(f);
                        Some(r)
                    }
                    1 => {
                        self.pending = None;
                        match self.dispatch(f, r, cops) {
                            Some(m) => self.mode = m,
                            None => self.mode = Mode::Recover,
                        }
                        self.resume(r, cops)
                    }
                    n => {
                        self.note("gap", "dispatch", format!("{n} adjacent cops"));
                        match self.recover(r, cops, false) {
                            Some(m) => {
                                self.mode = m;
                                self.resume(r, cops)
                            }
                            None => Some(self.fallback(r, cops)),
                        }
                    }
                }
            }
            Mode::Leg(mut leg) => {
                if leg.path.get(leg.idx) != Some(&r) {
                    return None;
                }
                let last = leg.path.len() - 1;
                if leg.idx == last {
                    let then = std::mem::replace(&mut leg.then, Plan::Corner);
                    match self.activate(then, r, cops, false) {
                        Some(m) => self.mode = m,
                        None => {
                            self.stats.deviations += 1;
                            self.note("deviation", leg.tag, format!("no certified continuation at {r}"));
                        }
                    }
                    return None;
                }
                let rem = (last - leg.idx) as u32;
                self.stats.cert_checks += 1;
                let ok = if leg.probe && leg.idx == 0 {
                    cops.iter().all(|&c| self.leg_dist(&leg.end, c) >= rem) && !self.threatened(leg.path[1], cops)
                } else {
                    cops.iter().all(|&c| self.leg_dist(&leg.end, c) > rem)
                };
                if ok {
                    leg.idx += 1;
                    let next = leg.path[leg.idx];
                    self.mode = Mode::Leg(leg);
                    return Some(next);
                }
                if leg.probe && leg.idx == 1 {
                    let back = leg.path[0];
                    if !self.threatened(back, cops) {
                        self.stats.retreats += 1;
                        self.esc = None;
                        self.note("retreat", leg.tag, format!("to {back}"));
                        self.mode = match self.w.centre_face(back) {
                            Some(f) => Mode::Wait(f),
                            None => Mode::Recover,
                        };
                        return Some(back);
                    }
                }
                self.stats.cert_failures += 1;
                self.note("cert-failure", leg.tag, format!("at {r} remaining {rem}"));
                None
            }
            Mode::Corner(st) => match self.corner_step(st, r, cops) {
                Ok(v) => Some(v),
                Err(Some(m)) => {
                    self.mode = m;
                    self.resume(r, cops)
                }
                Err(None) => match self.recover(r, cops, false) {
                    Some(m) => {
                        self.mode = m;
                        self.resume(r, cops)
                    }
                    None => Some(self.fallback(r, cops)),
                },
            },
            Mode::Recover => {
                self.esc = None;
                if let Some(f) = self.w.centre_face(r) {
                    if !cops.iter().any(|&c| self.g().has_edge(c, r)) {
                        self.mode = Mode::Wait(f);
                        return Some(r);
                    }
                }
                match self.recover(r, cops, true) {
                    Some(m) => {
                        self.mode = m;
                        self.resume(r, cops)
                    }
                    None => Some(self.fallback(r, cops)),
                }
            }
        }
    }

    /// Runs the freshly installed mode without falling back into dispatch.
    fn resume(&mut self, r: Vertex, cops: &[Vertex]) -> Option<Vertex> {
        match self.mode {
            Mode::Wait(_) => {
                if cops.iter().any(|&c| self.g().has_edge(c, r)) {
                    Some(self.fallback(r, cops))
                } else {
                    Some(r)
                }
            }
            _ => self.step(r, cops),
        }
    }

    fn placement(&self, cops: &[Vertex]) -> usize {
        (0..N_FACES)
            .max_by_key(|&f| {
                let free = cops.iter().all(|&c| !self.w.d.in_face(c, f));
                let d = cops.iter().map(|&c| self.w.to_centre(f, c)).min().unwrap_or(u32::MAX);
                (free, d, std::cmp::Reverse(f))
            })
            .unwrap()
    }
}

impl RobberStrategy for CentreRobber {
    fn name(&self) -> String {
        "centre-robber".into()
    }

    fn place(&mut self, _g: &Graph, _rules: &RuleSet, cops: &[Vertex]) -> Vertex {
        let f = self.placement(cops);
        self.mode = Mode::Wait(f);
        self.prev_cops = Some(cops.to_vec());
        self.note("place", "centre", format!("face {f}"));
        self.w.d.center(f)
    }

    fn act(&mut self, _g: &Graph, _rules: &RuleSet, cfg: &GameConfig) -> Vertex {
        self.round = cfg.round;
        let cops = cfg.cops.clone();
        self.observe(&cops);
        let r = cfg.robber_pos();
        for _ in 0..8 {
            if let Some(v) = self.step(r, &cops) {
                return v;
            }
        }
        self.mode = Mode::Recover;
        self.fallback(r, &cops)
    }

    fn oscillating_since(&self) -> Option<u32> {
        match &self.mode {
            Mode::Corner(st) if st.cycles >= 2 => st.first_probe,
            _ => None,
        }
    }
}

/// Cop distances up to `radius` around the cops.
fn cop_ball(g: &Graph, cops: &[Vertex], radius: u32) -> HashMap<Vertex, u32> {
    let mut dist = HashMap::new();
    let mut q = VecDeque::new();
    for &c in cops {
        if dist.insert(c, 0).is_none() {
            q.push_back(c);
        }
    }
    while let Some(x) = q.pop_front() {
        let d = dist[&x];
        if d == radius {
            continue;
        }
        for &y in g.neighbors(x) {
            if !dist.contains_key(&y) {
                dist.insert(y, d + 1);
                q.push_back(y);
            }
        }
    }
    dist
}

/// The robber at `y` survives `depth` further cop moves against any single-cop reply.
fn safe_at(g: &Graph, y: Vertex, cops: &[Vertex], depth: u32) -> bool {
    if cops.iter().any(|&c| c == y || g.has_edge(c, y)) {
        return false;
    }
    if depth == 0 {
        return true;
    }
    let near: Vec<usize> = {
        let ball = cop_ball(g, &[y], 2 * depth + 1);
        (0..cops.len()).filter(|&i| ball.contains_key(&cops[i])).collect()
    };
    let escapes = |cs: &[Vertex]| std::iter::once(&y).chain(g.neighbors(y)).any(|&z| safe_at(g, z, cs, depth - 1));
    let mut cs = cops.to_vec();
    if !escapes(&cs) {
        return false;
    }
    for &i in &near {
        let c = cops[i];
        for &nb in g.neighbors(c) {
            cs[i] = nb;
            if !escapes(&cs) {
                return false;
            }
        }
        cs[i] = c;
    }
    true
}
