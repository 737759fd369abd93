use std::cell::Cell;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::mpsc::{channel, Receiver, Sender};
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::case::{classify_case, Dispatch};
use super::world::{field_for, FieldCache, World};
use super::StrategyError;
use crate::construct::{LandmarkTable, N_FACES};
use crate::engine::{CopStrategy, GameConfig, LazySemantics, RuleSet, Variant};
use crate::graph::{masked_bfs, Graph, Searcher, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AdversaryKind {
    Greedy,
    RandomWalk,
    CenterGuard,
    Encircle,
    MirrorProber,
    /// Drives the robber into the configuration of one case label.
    Scripted(String),
    HumanRemote,
}

impl AdversaryKind {
    /// Every automatic adversary except the scripted family.
    pub const BASIC: [AdversaryKind; 5] = [
        AdversaryKind::Greedy,
        AdversaryKind::RandomWalk,
        AdversaryKind::CenterGuard,
        AdversaryKind::Encircle,
        AdversaryKind::MirrorProber,
    ];
}

impl fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdversaryKind::Greedy => f.write_str("greedy"),
            AdversaryKind::RandomWalk => f.write_str("random-walk"),
            AdversaryKind::CenterGuard => f.write_str("center-guard"),
            AdversaryKind::Encircle => f.write_str("encircle"),
            AdversaryKind::MirrorProber => f.write_str("mirror-prober"),
            AdversaryKind::Scripted(l) => write!(f, "scripted:{l}"),
            AdversaryKind::HumanRemote => f.write_str("human-remote"),
        }
    }
}

impl FromStr for AdversaryKind {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "greedy" => AdversaryKind::Greedy,
            "random-walk" => AdversaryKind::RandomWalk,
            "center-guard" => AdversaryKind::CenterGuard,
            "encircle" => AdversaryKind::Encircle,
            "mirror-prober" => AdversaryKind::MirrorProber,
            "human-remote" => AdversaryKind::HumanRemote,
            _ => match s.strip_prefix("scripted:") {
                Some(l) if super::CASE_LABELS.contains(&l) => AdversaryKind::Scripted(l.to_string()),
                _ => return Err(StrategyError::UnknownAdversary(s.to_string())),
            },
        })
    }
}

/// Builds an automatic adversary; `human-remote` needs [`RemoteCops::new`] instead.
pub fn make_adversary(kind: &AdversaryKind, seed: u64, w: Arc<World>) -> Result<Box<dyn CopStrategy + Send>, StrategyError> {
    let pilot = Pilot::new(w, seed);
    Ok(match kind {
        AdversaryKind::Greedy => Box::new(Greedy { p: pilot }),
        AdversaryKind::RandomWalk => Box::new(RandomWalk { p: pilot }),
        AdversaryKind::CenterGuard => Box::new(CenterGuard { p: pilot }),
        AdversaryKind::Encircle => Box::new(Encircle { p: pilot, home: None, goal: [0; 3], tight: false }),
        AdversaryKind::MirrorProber => Box::new(MirrorProber { p: pilot, prev: None, answer: None }),
        AdversaryKind::Scripted(label) => {
            let label = super::CASE_LABELS
                .iter()
                .find(|&&l| l == label)
                .ok_or_else(|| StrategyError::UnknownAdversary(label.clone()))?;
            Box::new(Scripted { p: pilot, label, setup: None, steer: None })
        }
        AdversaryKind::HumanRemote => return Err(StrategyError::UnknownAdversary("human-remote".into())),
    })
}

/// Shared movement helpers: shortest-path steps toward landmarks or the robber.
struct Pilot {
    w: Arc<World>,
    search: Searcher,
    cache: FieldCache,
    rng: ChaCha8Rng,
    flip: bool,
}

impl Pilot {
    fn new(w: Arc<World>, seed: u64) -> Self {
        let n = w.graph().n_vertices();
        Pilot { w, search: Searcher::new(n), cache: FieldCache::new(4), rng: ChaCha8Rng::seed_from_u64(seed), flip: false }
    }

    fn g(&self) -> &Graph {
        self.w.graph()
    }

    fn random_place(&mut self) -> Vec<Vertex> {
        let n = self.g().n_vertices() as Vertex;
        (0..3).map(|_| self.rng.gen_range(0..n)).collect()
    }

    /// Next vertex on a shortest path from `from` to `to`.
    fn toward(&mut self, from: Vertex, to: Vertex) -> Vertex {
        if from == to {
            return from;
        }
        let w = self.w.clone();
        let f = field_for(&w, &mut self.cache, to);
        let d = f.dist(from);
        *w.graph().neighbors(from).iter().find(|&&y| f.dist(y) == d - 1).expect("connected graph")
    }

    /// The cop nearest to `r` and its step toward it.
    fn chase(&mut self, cops: &[Vertex], r: Vertex) -> (usize, Vertex) {
        let w = self.w.clone();
        if let Some(f) = w.point_field(r) {
            let i = (0..cops.len()).min_by_key(|&i| f[cops[i] as usize]).unwrap();
            return (i, self.toward(cops[i], r));
        }
        let g = w.graph();
        let c = self.search.explore_until(g, r, |v| cops.contains(&v)).expect("connected graph");
        let i = cops.iter().position(|&x| x == c).unwrap();
        let d = self.search.known(c).unwrap();
        let next = *g.neighbors(c).iter().find(|&&y| self.search.known(y) == Some(d - 1)).unwrap();
        (i, next)
    }

    /// Every cop's step toward `r`.
    fn chase_all(&mut self, cops: &[Vertex], r: Vertex) -> Vec<Vertex> {
        let w = self.w.clone();
        let g = w.graph();
        let mut left: Vec<Vertex> = cops.to_vec();
        left.sort_unstable();
        left.dedup();
        let remaining = Cell::new(left.len());
        self.search.explore_until(g, r, |v| {
            if left.binary_search(&v).is_ok() {
                remaining.set(remaining.get() - 1);
            }
            remaining.get() == 0
        });
        cops.iter()
            .map(|&c| {
                let d = self.search.known(c).unwrap();
                if d == 0 {
                    c
                } else {
                    *g.neighbors(c).iter().find(|&&y| self.search.known(y) == Some(d - 1)).unwrap()
                }
            })
            .collect()
    }

    /// Applies one single-cop move, or a greedy all-cop move in the classical game.
    fn play(&mut self, rules: &RuleSet, cfg: &GameConfig, mv: Option<(usize, Vertex)>) -> Vec<Vertex> {
        if rules.variant == Variant::Classical {
            return self.chase_all(&cfg.cops, cfg.robber_pos());
        }
        let mut next = cfg.cops.clone();
        match mv {
            Some((i, v)) if v != next[i] => next[i] = v,
            _ => {
                if rules.semantics == LazySemantics::ExactlyOne {
                    self.shuffle(&mut next, cfg.robber_pos());
                }
            }
        }
        next
    }

    /// Moves the cop farthest from the robber, alternating between two neighbours.
    fn shuffle(&mut self, cops: &mut [Vertex], r: Vertex) {
        let w = self.w.clone();
        let i = (0..cops.len())
            .max_by_key(|&i| (0..N_FACES).map(|f| w.to_centre(f, cops[i]).abs_diff(w.to_centre(f, r))).max())
            .unwrap();
        let nb = w.graph().neighbors(cops[i]);
        self.flip = !self.flip;
        cops[i] = if self.flip { nb[0] } else { *nb.last().unwrap() };
    }
}

struct Greedy {
    p: Pilot,
}

impl CopStrategy for Greedy {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn place(&mut self, _g: &Graph, _rules: &RuleSet) -> Vec<Vertex> {
        self.p.random_place()
    }

    fn act(&mut self, _g: &Graph, rules: &RuleSet, cfg: &GameConfig) -> Vec<Vertex> {
        let mv = self.p.chase(&cfg.cops, cfg.robber_pos());
        self.p.play(rules, cfg, Some(mv))
    }
}

struct RandomWalk {
    p: Pilot,
}

impl CopStrategy for RandomWalk {
    fn name(&self) -> String {
        "random-walk".into()
    }

    fn place(&mut self, _g: &Graph, _rules: &RuleSet) -> Vec<Vertex> {
        self.p.random_place()
    }

    fn act(&mut self, g: &Graph, rules: &RuleSet, cfg: &GameConfig) -> Vec<Vertex> {
        let mut next = cfg.cops.clone();
        let idle = rules.variant == Variant::Lazy && rules.semantics == LazySemantics::AtMostOne && self.p.rng.gen_bool(0.1);
        if idle {
            return next;
        }
        for i in 0..next.len() {
            if rules.variant == Variant::Classical || i == 0 {
                let j = if rules.variant == Variant::Classical { i } else { self.p.rng.gen_range(0..next.len()) };
                let nb = g.neighbors(next[j]);
                next[j] = nb[self.p.rng.gen_range(0..nb.len())];
            }
        }
        next
    }
}

/// Two cops hold the centres nearest the robber while the third chases.
struct CenterGuard {
    p: Pilot,
}

impl CopStrategy for CenterGuard {
    fn name(&self) -> String {
        "center-guard".into()
    }

    fn place(&mut self, _g: &Graph, _rules: &RuleSet) -> Vec<Vertex> {
        self.p.random_place()
    }

    fn act(&mut self, _g: &Graph, rules: &RuleSet, cfg: &GameConfig) -> Vec<Vertex> {
        let r = cfg.robber_pos();
        let cops = &cfg.cops;
        let (chaser, step) = self.p.chase(cops, r);
        let w = self.p.w.clone();
        let mut centres: Vec<usize> = (0..N_FACES).filter(|&f| w.d.center(f) != r).collect();
        centres.sort_by_key(|&f| w.to_centre(f, r));
        let guards: Vec<usize> = (0..cops.len()).filter(|&i| i != chaser).collect();
        let mut mv = Some((chaser, step));
        if cfg.round % 2 == 1 {
            let mut worst: Option<(u32, usize, Vertex)> = None;
            for (k, &i) in guards.iter().enumerate() {
                let o = w.d.center(centres[k]);
                let d = w.to_centre(centres[k], cops[i]);
                if d > 0 && worst.map_or(true, |(wd, _, _)| d > wd) {
                    worst = Some((d, i, o));
                }
            }
            if let Some((_, i, o)) = worst {
                mv = Some((i, self.p.toward(cops[i], o)));
            }
        }
        self.p.play(rules, cfg, mv)
    }
}

/// Cops take corners of the robber's face, then close in.
struct Encircle {
    p: Pilot,
    home: Option<usize>,
    goal: [Vertex; 3],
    tight: bool,
}

impl CopStrategy for Encircle {
    fn name(&self) -> String {
        "encircle".into()
    }

    fn place(&mut self, _g: &Graph, _rules: &RuleSet) -> Vec<Vertex> {
        self.p.random_place()
    }

    fn act(&mut self, _g: &Graph, rules: &RuleSet, cfg: &GameConfig) -> Vec<Vertex> {
        let r = cfg.robber_pos();
        let w = self.p.w.clone();
        let face = w.d.faces_of(r)[0];
        if self.home != Some(face) {
            self.home = Some(face);
            self.tight = false;
            let corners = w.d.dodeca.faces[face];
            let mut free: Vec<Vertex> = corners.to_vec();
            for i in 0..3 {
                let k = (0..free.len()).min_by_key(|&k| w.to_point(free[k], cfg.cops[i]).unwrap()).unwrap();
                self.goal[i] = free.remove(k);
            }
        }
        let pending = (0..3)
            .filter(|&i| cfg.cops[i] != self.goal[i])
            .max_by_key(|&i| w.to_point(self.goal[i], cfg.cops[i]).unwrap());
        self.tight |= pending.is_none();
        let mv = match pending {
            Some(i) if !self.tight && cfg.round % 3 != 0 => (i, self.p.toward(cfg.cops[i], self.goal[i])),
            _ => self.p.chase(&cfg.cops, r),
        };
        self.p.play(rules, cfg, Some(mv))
    }
}

/// Answers a robber probe off a corner by stepping toward that face's centre, and undoes it on retreat.
struct MirrorProber {
    p: Pilot,
    prev: Option<Vertex>,
    answer: Option<(usize, Vertex)>,
}

impl CopStrategy for MirrorProber {
    fn name(&self) -> String {
        "mirror-prober".into()
    }

    fn place(&mut self, _g: &Graph, _rules: &RuleSet) -> Vec<Vertex> {
        self.p.random_place()
    }

    fn act(&mut self, _g: &Graph, rules: &RuleSet, cfg: &GameConfig) -> Vec<Vertex> {
        let r = cfg.robber_pos();
        let w = self.p.w.clone();
        let prev = self.prev.replace(r);
        let mut mv = None;
        if let Some(pr) = prev {
            if pr != r && w.d.is_corner(pr) {
                if let Some(&f) = w.d.faces_of(r).iter().find(|&&f| w.inward_of_corner(pr, f) == r) {
                    let i = (0..3).min_by_key(|&i| w.to_centre(f, cfg.cops[i])).unwrap();
                    let to = self.p.toward(cfg.cops[i], w.d.center(f));
                    self.answer = Some((i, cfg.cops[i]));
                    mv = Some((i, to));
                }
            } else if pr != r && w.d.is_corner(r) {
                if let Some((i, back)) = self.answer.take() {
                    if w.graph().has_edge(cfg.cops[i], back) {
                        mv = Some((i, back));
                    }
                }
            }
        }
        let mv = mv.unwrap_or_else(|| self.p.chase(&cfg.cops, r));
        self.p.play(rules, cfg, Some(mv))
    }
}

/// Labels fixed only by cop play after the dispatch start from their parent's configuration.
fn base_label(label: &str) -> &str {
    if label.starts_with("B.2.1.1.") {
        "B.2.1.1"
    } else {
        label
    }
}

/// Cop positions (λ₁, λ₂, λ₃) in the base frame realising one case label with the robber at o.
pub fn scripted_template(w: &World, label: &str) -> Option<[Vertex; 3]> {
    static CACHE: OnceLock<Mutex<HashMap<String, Option<[Vertex; 3]>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(label) {
        return *t;
    }
    let found = search_template(w, label, 200_000);
    cache.lock().unwrap().insert(label.to_string(), found);
    found
}

fn search_template(w: &World, label: &str, budget: u32) -> Option<[Vertex; 3]> {
    let t = w.frame(0, 0, false);
    let seed = label.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let o = t.o[0];
    let g = w.graph();
    let mut marks: Vec<Vertex> = Vec::new();
    marks.extend(t.v.iter().chain(&t.q).chain(&t.x).chain(&t.y).chain(&t.m).chain(&t.o[1..]));
    marks.extend(t.b_middle.iter().skip(1));
    marks.extend([t.p, t.q_mark]);
    let sample = |rng: &mut ChaCha8Rng| -> Vertex {
        let kind = rng.gen_range(0..12);
        if kind >= 10 {
            let side = &t.b[rng.gen_range(1..t.b.len())];
            let mut v = side[rng.gen_range(0..side.len())];
            for _ in 0..rng.gen_range(0..=3) {
                let nb = g.neighbors(v);
                v = nb[rng.gen_range(0..nb.len())];
            }
            v
        } else if kind < 4 {
            let face = match rng.gen_range(0..20) {
                0..=4 => t.face[0],
                5..=13 => t.face[rng.gen_range(1..=5)],
                _ => t.face[rng.gen_range(6..N_FACES)],
            };
            let n = rng.gen_range(1..=w.layers());
            w.d.ring(face, n, rng.gen_range(0..w.d.ring_len(n)))
        } else {
            let mut v = marks[rng.gen_range(0..marks.len())];
            let steps = if kind < 8 { rng.gen_range(0..=20) } else { rng.gen_range(0..=120) };
            for _ in 0..steps {
                let nb = g.neighbors(v);
                v = nb[rng.gen_range(0..nb.len())];
            }
            v
        }
    };
    for _ in 0..budget {
        let l1 = t.p123[rng.gen_range(0..3)];
        let (l2, l3) = (sample(&mut rng), sample(&mut rng));
        if [l2, l3].iter().any(|&c| c == o || g.has_edge(c, o)) {
            continue;
        }
        let cops = [l1, l2, l3];
        if shortcut_applies(w, t, &cops) {
            continue;
        }
        if let Ok(d) = classify_case(w, o, &cops) {
            if d.label == base_label(label) && d.exact && refinable(w, label, &d, &cops) {
                return Some(cops);
            }
        }
    }
    None
}

/// λ₂ close enough to U₅ to enter it while λ₁ still makes 47 moves before the robber reaches the side.
fn refinable(w: &World, label: &str, d: &Dispatch, cops: &[Vertex]) -> bool {
    label != "B.2.1.1.1.2" || w.to_face(w.frame_at(d.frame).face[5], cops[d.order[1]]) <= 50
}

fn shortcut_applies(w: &World, t: &LandmarkTable, cops: &[Vertex]) -> bool {
    (1..=5).any(|i| cops.iter().all(|&c| w.to_centre(t.face[i], c) > 196))
}

/// Template positions mapped onto a home face, checked to classify as the same label.
fn template_at(w: &World, label: &str, home: usize) -> Option<[Vertex; 3]> {
    let tpl = scripted_template(w, label)?;
    let label = base_label(label);
    let base = w.frame(0, 0, false);
    let o = w.d.center(home);
    (0..10).find_map(|k| {
        let to = w.frame_at(home * 10 + k);
        let cops = tpl.map(|v| w.map_vertex(v, base, to));
        let ok = classify_case(w, o, &cops).map_or(false, |d| d.label == label) && !shortcut_applies(w, to, &cops);
        ok.then_some(cops)
    })
}

struct Setup {
    home: usize,
    /// Remaining vertices per cop; λ₁'s path ends with its step into the centre's neighbourhood.
    paths: [Vec<Vertex>; 3],
}

/// Walks the cops into a template configuration around the robber's centre, then chases.
struct Scripted {
    p: Pilot,
    label: &'static str,
    setup: Option<Setup>,
    steer: Option<Steer>,
}

/// Cop roles after a dispatch, for labels refined by which cop reaches U₅ first.
struct Steer {
    l1: usize,
    l2: usize,
    u5: usize,
    l1_moves: u32,
}

impl Scripted {
    fn plan(&mut self, home: usize, cops: &[Vertex]) -> Option<Setup> {
        let w = self.p.w.clone();
        let target = template_at(&w, self.label, home)?;
        let g = w.graph();
        let o = w.d.center(home);
        let outside = |v: Vertex| v != o && !g.has_edge(v, o);
        let walk = |from: Vertex, to: Vertex| -> Option<Vec<Vertex>> {
            let field = masked_bfs(g, &[to], outside);
            let mut d = *field.get(from as usize)?;
            if d == u32::MAX {
                return None;
            }
            let mut x = from;
            let mut path = Vec::new();
            while d > 0 {
                x = *g.neighbors(x).iter().find(|&&y| field[y as usize] == d - 1)?;
                path.push(x);
                d -= 1;
            }
            Some(path)
        };
        let stage = *g.neighbors(target[0]).iter().find(|&&y| outside(y))?;
        let mut first = walk(cops[0], stage)?;
        first.push(target[0]);
        let paths = [first, walk(cops[1], target[1])?, walk(cops[2], target[2])?];
        Some(Setup { home, paths })
    }
}

impl CopStrategy for Scripted {
    fn name(&self) -> String {
        format!("scripted:{}", self.label)
    }

    fn place(&mut self, _g: &Graph, _rules: &RuleSet) -> Vec<Vertex> {
        self.p.random_place()
    }

    fn act(&mut self, _g: &Graph, rules: &RuleSet, cfg: &GameConfig) -> Vec<Vertex> {
        let r = cfg.robber_pos();
        let w = self.p.w.clone();
        let home = w.centre_face(r);
        let adjacent = cfg.cops.iter().any(|&c| c == r || w.graph().has_edge(c, r));
        if home.is_none() || adjacent {
            if let Some(s) = self.setup.take() {
                if base_label(self.label) != self.label && s.paths.iter().all(|p| p.is_empty()) {
                    if let Ok(d) = classify_case(&w, w.d.center(s.home), &cfg.cops) {
                        let u5 = w.frame_at(d.frame).face[5];
                        self.steer = Some(Steer { l1: d.order[0], l2: d.order[1], u5, l1_moves: 0 });
                    }
                }
            }
            let mv = match self.steer.as_mut() {
                Some(st) if home.is_none() => {
                    let (c1, c2) = (cfg.cops[st.l1], cfg.cops[st.l2]);
                    let o5 = w.d.center(st.u5);
                    match self.label {
                        "B.2.1.1.1.1" if !w.d.in_face(c1, st.u5) => Some((st.l1, o5)),
                        "B.2.1.1.1.2" | "B.2.1.1.2" if !w.d.in_face(c2, st.u5) => Some((st.l2, o5)),
                        "B.2.1.1.1.2" if st.l1_moves < 47 => {
                            st.l1_moves += 1;
                            Some((st.l1, r))
                        }
                        _ => None,
                    }
                }
                _ => None,
            };
            let mv = match mv {
                Some((i, to)) => (i, self.p.toward(cfg.cops[i], to)),
                None => self.p.chase(&cfg.cops, r),
            };
            return self.p.play(rules, cfg, Some(mv));
        }
        self.steer = None;
        let home = home.unwrap();
        if self.setup.as_ref().map_or(true, |s| s.home != home) {
            self.setup = self.plan(home, &cfg.cops);
        }
        let mv = match self.setup.as_mut() {
            Some(s) => {
                let i = [1, 2, 0].into_iter().find(|&i| !s.paths[i].is_empty());
                i.map(|i| (i, s.paths[i].remove(0)))
            }
            None => Some(self.p.chase(&cfg.cops, r)),
        };
        self.p.play(rules, cfg, mv)
    }
}

/// Cops driven over channels: each turn the state goes out and a move comes back.
pub struct RemoteCops {
    start: Vec<Vertex>,
    states: Sender<GameConfig>,
    moves: Receiver<Vec<Vertex>>,
}

/// The far end of a [`RemoteCops`].
pub struct RemoteHandle {
    pub states: Receiver<GameConfig>,
    pub moves: Sender<Vec<Vertex>>,
}

impl RemoteCops {
    pub fn new(start: Vec<Vertex>) -> (RemoteCops, RemoteHandle) {
        let (stx, srx) = channel();
        let (mtx, mrx) = channel();
        (RemoteCops { start, states: stx, moves: mrx }, RemoteHandle { states: srx, moves: mtx })
    }
}

impl CopStrategy for RemoteCops {
    fn name(&self) -> String {
        "human-remote".into()
    }

    fn place(&mut self, _g: &Graph, _rules: &RuleSet) -> Vec<Vertex> {
        self.start.clone()
    }

    fn act(&mut self, _g: &Graph, _rules: &RuleSet, cfg: &GameConfig) -> Vec<Vertex> {
        if self.states.send(cfg.clone()).is_err() {
            return cfg.cops.clone();
        }
        self.moves.recv().unwrap_or_else(|_| cfg.cops.clone())
    }
}
