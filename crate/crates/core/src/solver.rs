use std::collections::VecDeque;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::engine::{cop_moves, is_legal_cop_move, CopStrategy, GameConfig, RobberStrategy, RuleSet, Turn};
use crate::graph::{Graph, Vertex};

pub const UNRESOLVED: u32 = u32::MAX;
pub const DEFAULT_BUDGET: u64 = 1 << 32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("{positions} positions exceed the state budget of {budget}")]
    Budget { positions: u64, budget: u64 },
    #[error("need at least one cop and one vertex")]
    Empty,
    #[error("position is not a cop win")]
    NotCopWin,
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Ranks sorted cop tuples (multisets of size k over n vertices) densely.
#[derive(Clone, Debug)]
pub struct TupleIndex {
    n: usize,
    k: usize,
    binom: Vec<Vec<u64>>,
    tuples: Vec<Vertex>,
}

impl TupleIndex {
    pub fn new(n: usize, k: usize) -> Self {
        let top = n + k;
        let binom: Vec<Vec<u64>> = (0..=top).map(|a| (0..=k + 1).map(|b| binomial(a as u64, b as u64)).collect()).collect();
        let count = binomial((n + k - 1) as u64, k as u64) as usize;
        let mut me = TupleIndex { n, k, binom, tuples: vec![0; count * k] };
        let mut cur = vec![0 as Vertex; k];
        loop {
            let i = me.rank(&cur);
            me.tuples[i * k..(i + 1) * k].copy_from_slice(&cur);
            let mut j = k;
            while j > 0 && cur[j - 1] as usize == n - 1 {
                j -= 1;
            }
            if j == 0 {
                break;
            }
            cur[j - 1] += 1;
            let v = cur[j - 1];
            for z in cur.iter_mut().skip(j) {
                *z = v;
            }
        }
        me
    }

    pub fn count(&self) -> usize {
        self.tuples.len() / self.k
    }

    /// Rank of a sorted tuple.
    pub fn rank(&self, sorted: &[Vertex]) -> usize {
        sorted.iter().enumerate().map(|(i, &a)| self.binom[a as usize + i][i + 1]).sum::<u64>() as usize
    }

    pub fn rank_unsorted(&self, cops: &[Vertex]) -> usize {
        let mut s = cops.to_vec();
        s.sort_unstable();
        self.rank(&s)
    }

    pub fn tuple(&self, i: usize) -> &[Vertex] {
        &self.tuples[i * self.k..(i + 1) * self.k]
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Solved game table: ranks (plies to capture under optimal play) of every position.
#[derive(Clone, Debug)]
pub struct PositionTable {
    pub rules: RuleSet,
    pub index: TupleIndex,
    n: usize,
    /// Positions with the cops to move, indexed by tuple * n + robber.
    cops_to_move: Vec<u32>,
    robber_to_move: Vec<u32>,
    pub iterations: u64,
}

impl PositionTable {
    fn slot(&self, tuple: usize, r: Vertex) -> usize {
        tuple * self.n + r as usize
    }

    pub fn rank(&self, cops: &[Vertex], r: Vertex, turn: Turn) -> Option<u32> {
        let s = self.slot(self.index.rank_unsorted(cops), r);
        let v = match turn {
            Turn::Cops => self.cops_to_move[s],
            Turn::Robber => self.robber_to_move[s],
        };
        (v != UNRESOLVED).then_some(v)
    }

    pub fn rank_at(&self, tuple: usize, r: Vertex, turn: Turn) -> u32 {
        let s = self.slot(tuple, r);
        match turn {
            Turn::Cops => self.cops_to_move[s],
            Turn::Robber => self.robber_to_move[s],
        }
    }

    pub fn is_cop_win(&self, cops: &[Vertex], r: Vertex, turn: Turn) -> bool {
        self.rank(cops, r, turn).is_some()
    }

    /// Sorted, deduplicated successor tuples of a cop tuple.
    pub fn cop_successors(&self, g: &Graph, tuple: usize) -> Vec<usize> {
        successor_tuples(g, &self.index, &self.rules, tuple)
    }

    /// Worst-case rank of a cop placement over all robber placements (None if the robber escapes somewhere).
    pub fn placement_value(&self, tuple: usize) -> Option<u32> {
        let mut worst = 0;
        let cops = self.index.tuple(tuple);
        for r in 0..self.n as Vertex {
            if cops.contains(&r) {
                continue;
            }
            let v = self.robber_to_move[self.slot(tuple, r)];
            if v == UNRESOLVED {
                return None;
            }
            worst = worst.max(v);
        }
        Some(worst)
    }

    pub fn positions(&self) -> u64 {
        2 * self.cops_to_move.len() as u64
    }

    pub fn cop_win_positions(&self) -> u64 {
        self.cops_to_move.iter().chain(&self.robber_to_move).filter(|&&v| v != UNRESOLVED).count() as u64
    }

    pub fn rank_histogram(&self) -> Vec<u64> {
        let mut h = Vec::new();
        for &v in self.cops_to_move.iter().chain(&self.robber_to_move) {
            if v != UNRESOLVED {
                if h.len() <= v as usize {
                    h.resize(v as usize + 1, 0);
                }
                h[v as usize] += 1;
            }
        }
        h
    }
}

fn successor_tuples(g: &Graph, index: &TupleIndex, rules: &RuleSet, tuple: usize) -> Vec<usize> {
    let cops = index.tuple(tuple).to_vec();
    let mut out: Vec<usize> = cop_moves(g, &cops, rules).iter().map(|c| index.rank_unsorted(c)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveResult {
    pub rules: RuleSet,
    pub k: usize,
    pub cops_win: bool,
    pub placement: Option<Vec<Vertex>>,
    /// Plies to capture from the optimal placement against the best robber reply.
    pub placement_rank: Option<u32>,
    pub positions: u64,
    pub cop_win_positions: u64,
    pub iterations: u64,
    pub rank_histogram: Vec<u64>,
}

pub fn solve(g: &Graph, rules: &RuleSet) -> Result<SolveResult, SolveError> {
    solve_with_budget(g, rules, DEFAULT_BUDGET).map(|(r, _)| r)
}

pub fn solve_table(g: &Graph, rules: &RuleSet) -> Result<(SolveResult, PositionTable), SolveError> {
    solve_with_budget(g, rules, DEFAULT_BUDGET)
}

pub fn solve_with_budget(g: &Graph, rules: &RuleSet, budget: u64) -> Result<(SolveResult, PositionTable), SolveError> {
    let n = g.n_vertices();
    let k = rules.cops;
    if n == 0 || k == 0 {
        return Err(SolveError::Empty);
    }
    let tuples = binomial((n + k - 1) as u64, k as u64);
    let positions = tuples.saturating_mul(n as u64).saturating_mul(2);
    if positions > budget {
        return Err(SolveError::Budget { positions, budget });
    }
    let index = TupleIndex::new(n, k);
    let per_side = index.count() * n;
    let mut table = PositionTable {
        rules: *rules,
        index,
        n,
        cops_to_move: vec![UNRESOLVED; per_side],
        robber_to_move: vec![UNRESOLVED; per_side],
        iterations: 0,
    };
    let mut counter: Vec<u32> = vec![0; per_side];
    let mut queue: VecDeque<(usize, Turn)> = VecDeque::new();
    for t in 0..table.index.count() {
        for r in 0..n as Vertex {
            let s = t * n + r as usize;
            if table.index.tuple(t).contains(&r) {
                table.cops_to_move[s] = 0;
                table.robber_to_move[s] = 0;
                queue.push_back((s, Turn::Cops));
                queue.push_back((s, Turn::Robber));
            } else {
                counter[s] = g.degree(r) as u32 + 1;
            }
        }
    }
    let mut succ_cache: Vec<Option<Vec<usize>>> = vec![None; table.index.count()];
    while let Some((s, turn)) = queue.pop_front() {
        table.iterations += 1;
        let (t, r) = (s / n, (s % n) as Vertex);
        match turn {
            Turn::Robber => {
                let rank = table.robber_to_move[s] + 1;
                let preds = succ_cache[t].get_or_insert_with(|| successor_tuples(g, &table.index, rules, t));
                for &p in preds.iter() {
                    let ps = p * n + r as usize;
                    if table.cops_to_move[ps] == UNRESOLVED {
                        table.cops_to_move[ps] = rank;
                        queue.push_back((ps, Turn::Cops));
                    }
                }
            }
            Turn::Cops => {
                let rank = table.cops_to_move[s] + 1;
                let cops = table.index.tuple(t);
                for &r0 in std::iter::once(&r).chain(g.neighbors(r)) {
                    if cops.contains(&r0) {
                        continue;
                    }
                    let ps = t * n + r0 as usize;
                    if table.robber_to_move[ps] != UNRESOLVED {
                        continue;
                    }
                    counter[ps] -= 1;
                    if counter[ps] == 0 {
                        table.robber_to_move[ps] = rank;
                        queue.push_back((ps, Turn::Robber));
                    }
                }
            }
        }
    }
    let mut best: Option<(u32, usize)> = None;
    for t in 0..table.index.count() {
        if let Some(v) = table.placement_value(t) {
            if best.is_none_or(|(bv, _)| v < bv) {
                best = Some((v, t));
            }
        }
    }
    let result = SolveResult {
        rules: *rules,
        k,
        cops_win: best.is_some(),
        placement: best.map(|(_, t)| table.index.tuple(t).to_vec()),
        placement_rank: best.map(|(v, _)| v),
        positions: table.positions(),
        cop_win_positions: table.cop_win_positions(),
        iterations: table.iterations,
        rank_histogram: table.rank_histogram(),
    };
    Ok((result, table))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum CopNumber {
    Exact { k: usize },
    Exceeds { k_max: usize },
}

pub fn cop_number(g: &Graph, rules: &RuleSet, k_max: usize) -> Result<CopNumber, SolveError> {
    for k in 1..=k_max {
        if solve(g, &rules.with_cops(k))?.cops_win {
            return Ok(CopNumber::Exact { k });
        }
    }
    Ok(CopNumber::Exceeds { k_max })
}

/// Orders a target multiset of cop positions to match `from` by legal single-turn moves.
fn assign_moves(g: &Graph, rules: &RuleSet, from: &[Vertex], target: &[Vertex]) -> Option<Vec<Vertex>> {
    let k = from.len();
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        let to: Vec<Vertex> = perm.iter().map(|&i| target[i]).collect();
        if is_legal_cop_move(g, from, &to, rules).is_ok() {
            return Some(to);
        }
        let mut i = k.checked_sub(1)?;
        while i > 0 && perm[i - 1] >= perm[i] {
            i -= 1;
        }
        if i == 0 {
            return None;
        }
        let mut j = k - 1;
        while perm[j] <= perm[i - 1] {
            j -= 1;
        }
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

/// Cops playing the minimal-rank successor from the solved table.
pub struct TableCops {
    pub table: Arc<PositionTable>,
    pub graph: Arc<Graph>,
    pub placement: Vec<Vertex>,
}

/// Robber playing to stay in unresolved positions, or to delay capture as long as possible.
pub struct TableRobber {
    pub table: Arc<PositionTable>,
}

pub enum Extracted {
    Cops(TableCops),
    Robber(TableRobber),
}

pub fn extract_strategy(g: Arc<Graph>, table: Arc<PositionTable>, side: Turn) -> Result<Extracted, SolveError> {
    match side {
        Turn::Cops => {
            let best = (0..table.index.count())
                .filter_map(|t| table.placement_value(t).map(|v| (v, t)))
                .min()
                .ok_or(SolveError::NotCopWin)?;
            let placement = table.index.tuple(best.1).to_vec();
            Ok(Extracted::Cops(TableCops { table, graph: g, placement }))
        }
        Turn::Robber => Ok(Extracted::Robber(TableRobber { table })),
    }
}

impl TableCops {
    pub fn new(g: Arc<Graph>, table: Arc<PositionTable>) -> Result<Self, SolveError> {
        match extract_strategy(g, table, Turn::Cops)? {
            Extracted::Cops(c) => Ok(c),
            Extracted::Robber(_) => unreachable!(),
        }
    }

    /// Minimal-rank successor tuple of the cop tuple against robber `r`.
    pub fn best_successor(&self, cops: &[Vertex], r: Vertex) -> Result<usize, SolveError> {
        let t = self.table.index.rank_unsorted(cops);
        if self.table.rank_at(t, r, Turn::Cops) == UNRESOLVED {
            return Err(SolveError::NotCopWin);
        }
        self.table
            .cop_successors(&self.graph, t)
            .into_iter()
            .map(|s| (self.table.rank_at(s, r, Turn::Robber), s))
            .min()
            .map(|(_, s)| s)
            .ok_or(SolveError::NotCopWin)
    }
}

impl CopStrategy for TableCops {
    fn name(&self) -> String {
        "solver".into()
    }

    fn place(&mut self, _g: &Graph, _rules: &RuleSet) -> Vec<Vertex> {
        self.placement.clone()
    }

    fn act(&mut self, g: &Graph, rules: &RuleSet, cfg: &GameConfig) -> Vec<Vertex> {
        let r = cfg.robber_pos();
        let target = match self.best_successor(&cfg.cops, r) {
            Ok(s) => self.table.index.tuple(s).to_vec(),
            Err(_) => {
                let moves = cop_moves(g, &cfg.cops, rules);
                return moves.into_iter().next().unwrap_or_else(|| cfg.cops.clone());
            }
        };
        assign_moves(g, rules, &cfg.cops, &target).expect("successor tuples are reachable")
    }
}

impl TableRobber {
    fn score(&self, cops: &[Vertex], r: Vertex, turn: Turn) -> u64 {
        if cops.contains(&r) {
            return 0;
        }
        match self.table.rank(cops, r, turn) {
            None => u64::MAX,
            Some(v) => v as u64 + 1,
        }
    }
}

impl RobberStrategy for TableRobber {
    fn name(&self) -> String {
        "solver".into()
    }

    fn place(&mut self, g: &Graph, _rules: &RuleSet, cops: &[Vertex]) -> Vertex {
        (0..g.n_vertices() as Vertex).max_by_key(|&r| (self.score(cops, r, Turn::Robber), std::cmp::Reverse(r))).unwrap()
    }

    fn act(&mut self, g: &Graph, _rules: &RuleSet, cfg: &GameConfig) -> Vertex {
        let r = cfg.robber_pos();
        std::iter::once(r)
            .chain(g.neighbors(r).iter().copied())
            .max_by_key(|&x| (self.score(&cfg.cops, x, Turn::Cops), std::cmp::Reverse(x)))
            .unwrap()
    }
}

/// Elimination ordering by repeatedly removing a dominated vertex; `None` if the graph is not dismantlable.
pub fn dismantling_order(g: &Graph) -> Option<Vec<Vertex>> {
    let n = g.n_vertices();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let closed = |v: Vertex, alive: &[bool]| -> Vec<Vertex> {
        let mut c: Vec<Vertex> =
            std::iter::once(v).chain(g.neighbors(v).iter().copied()).filter(|&z| alive[z as usize]).collect();
        c.sort_unstable();
        c
    };
    for _ in 1..n {
        let mut removed = None;
        'search: for u in 0..n as Vertex {
            if !alive[u as usize] {
                continue;
            }
            let nu = closed(u, &alive);
            for &w in &nu {
                if w == u {
                    continue;
                }
                let nw = closed(w, &alive);
                if nu.iter().all(|z| nw.binary_search(z).is_ok()) {
                    removed = Some(u);
                    break 'search;
                }
            }
        }
        let u = removed?;
        alive[u as usize] = false;
        order.push(u);
    }
    order.extend((0..n as Vertex).filter(|&v| alive[v as usize]));
    Some(order)
}

pub fn dismantlable(g: &Graph) -> bool {
    dismantling_order(g).is_some()
}

/// A line of configurations ⟨u₁,u₂;r⟩, the first being the position after the robber's first turn.
pub type ScriptLine = Vec<(Vec<Vertex>, Vertex)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineReport {
    pub legal: bool,
    /// Index of the first triple that cannot follow its predecessor.
    pub error_at: Option<usize>,
    pub reason: Option<String>,
    /// At the final triple every robber move ends next to or on a cop.
    pub trapped: bool,
}

/// Checks that each step of each line is one legal half-turn of one side and that every line ends with the robber trapped.
pub fn verify_scripted_lines(g: &Graph, rules: &RuleSet, lines: &[ScriptLine]) -> Vec<LineReport> {
    lines.iter().map(|line| verify_line(g, rules, line)).collect()
}

fn verify_line(g: &Graph, rules: &RuleSet, line: &ScriptLine) -> LineReport {
    let fail = |i: usize, why: String| LineReport { legal: false, error_at: Some(i), reason: Some(why), trapped: false };
    if line.is_empty() {
        return fail(0, "empty line".into());
    }
    for (i, (cops, r)) in line.iter().enumerate() {
        if cops.len() != rules.cops || cops.iter().chain(std::iter::once(r)).any(|&v| g.check(v).is_err()) {
            return fail(i, "malformed configuration".into());
        }
        if cops.contains(r) {
            return fail(i, "robber already captured".into());
        }
    }
    let mut last_actor = Turn::Robber;
    for i in 1..line.len() {
        let (c0, r0) = &line[i - 1];
        let (c1, r1) = &line[i];
        if c0 == c1 && r0 != r1 {
            if !g.has_edge(*r0, *r1) {
                return fail(i, format!("robber cannot move {r0} -> {r1}"));
            }
            if last_actor == Turn::Robber {
                return fail(i, "two robber turns in a row".into());
            }
            last_actor = Turn::Robber;
        } else if r0 == r1 {
            if let Err(e) = is_legal_cop_move(g, c0, c1, rules) {
                return fail(i, e);
            }
            last_actor = Turn::Cops;
        } else {
            return fail(i, "both sides moved in one step".into());
        }
    }
    let (cops, r) = line.last().unwrap();
    let trapped = match last_actor {
        Turn::Robber => cops.iter().any(|&c| g.within_one(c, *r)),
        Turn::Cops => std::iter::once(*r)
            .chain(g.neighbors(*r).iter().copied())
            .all(|x| cops.iter().any(|&c| g.within_one(c, x))),
    };
    LineReport { legal: trapped, error_at: None, reason: (!trapped).then(|| "robber not trapped".into()), trapped }
}
