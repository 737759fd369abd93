use thiserror::Error;

use crate::graph::{Graph, Searcher, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertError {
    #[error("path is empty")]
    EmptyPath,
    #[error("path step {0} -> {1} is not an edge")]
    NotAnEdge(Vertex, Vertex),
    #[error("path does not start at the robber ({0} != {1})")]
    WrongStart(Vertex, Vertex),
    #[error("k - l2 + 4 = {0} exceeds 49")]
    RTooLarge(i64),
    #[error("k = {k} is below l2 = {l2}")]
    KBelowL2 { k: u32, l2: u32 },
    #[error("skip count decreased at leg {leg}: {prev} -> {now}")]
    SkipDecreased { leg: u32, prev: u32, now: u32 },
    #[error("skip count {skips} at leg {leg} exceeds the rounds elapsed")]
    SkipTooLarge { leg: u32, skips: u32 },
    #[error("loop needs more than the {given} skip observations supplied")]
    Incomplete { given: u32 },
}

/// Leg certificate: every cop is farther from the end of `path` than the path is long.
pub fn safe_reach_check(
    g: &Graph,
    search: &mut Searcher,
    robber_at: Vertex,
    path: &[Vertex],
    cops: &[Vertex],
) -> Result<bool, CertError> {
    let (&first, &end) = match (path.first(), path.last()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(CertError::EmptyPath),
    };
    if first != robber_at {
        return Err(CertError::WrongStart(first, robber_at));
    }
    for w in path.windows(2) {
        if !g.has_edge(w[0], w[1]) {
            return Err(CertError::NotAnEdge(w[0], w[1]));
        }
    }
    let n = (path.len() - 1) as u32;
    Ok(search.distances(g, end, cops).into_iter().all(|d| d > n))
}

/// Certificate check against precomputed distances from each cop to the end of a leg of length `n`.
pub fn leg_certified(n: u32, cop_to_end: impl IntoIterator<Item = u32>) -> bool {
    cop_to_end.into_iter().all(|d| d > n)
}

/// The robber at centre `o` reaches `o2` first: d(o, o2) < d(c, o2) for every cop.
pub fn reach_centre_check(g: &Graph, search: &mut Searcher, o: Vertex, o2: Vertex, cops: &[Vertex]) -> bool {
    let mut targets = vec![o];
    targets.extend_from_slice(cops);
    let d = search.distances(g, o2, &targets);
    d[1..].iter().all(|&c| d[0] < c)
}

/// Outcome of the leg loop that picks the detour depth r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RResult {
    pub r: u32,
    /// Leg ℓ at which the loop stopped.
    pub last_leg: u32,
    /// Whether the loop stopped on the skip condition rather than running out of legs.
    pub broke: bool,
    /// Skip count j_ℓ at the last leg.
    pub j_last: u32,
}

/// The leg loop with rᵢ = k − ℓ₂ + 5 − i, stopping at the first leg i whose skip count jᵢ equals i − 1.
#[derive(Clone, Debug)]
pub struct RLoop {
    k: u32,
    l2: u32,
    leg: u32,
    prev: u32,
    done: Option<RResult>,
}

impl RLoop {
    pub fn new(k: u32, l2: u32) -> Result<Self, CertError> {
        if k < l2 {
            return Err(CertError::KBelowL2 { k, l2 });
        }
        let r1 = k as i64 - l2 as i64 + 4;
        if r1 > 49 {
            return Err(CertError::RTooLarge(r1));
        }
        Ok(RLoop { k, l2, leg: 0, prev: 0, done: None })
    }

    pub fn legs(&self) -> u32 {
        self.k - self.l2 + 1
    }

    /// Depth of the next leg's target layer, or None once the loop has stopped.
    pub fn next_r(&self) -> Option<u32> {
        if self.done.is_some() {
            return None;
        }
        Some(self.k + 5 - self.l2 - (self.leg + 1))
    }

    /// Records the cumulative skip count after finishing the next leg.
    pub fn observe(&mut self, j: u32) -> Result<Option<&RResult>, CertError> {
        let Some(ri) = self.next_r() else {
            return Ok(self.done.as_ref());
        };
        let i = self.leg + 1;
        if j < self.prev {
            return Err(CertError::SkipDecreased { leg: i, prev: self.prev, now: j });
        }
        if j + 2 * ri > 98 {
            return Err(CertError::SkipTooLarge { leg: i, skips: j });
        }
        self.leg = i;
        self.prev = j;
        if j == i - 1 || i == self.legs() {
            self.done = Some(RResult { r: ri, last_leg: i, broke: j == i - 1, j_last: j });
        }
        Ok(self.done.as_ref())
    }

    pub fn result(&self) -> Option<&RResult> {
        self.done.as_ref()
    }
}

/// Runs the leg loop over cumulative skip counts; `skips[i-1]` covers legs 1..=i.
pub fn compute_r(k: u32, l2: u32, skips: &[u32]) -> Result<RResult, CertError> {
    let mut lp = RLoop::new(k, l2)?;
    for &j in skips {
        if let Some(r) = lp.observe(j)? {
            return Ok(r.clone());
        }
    }
    Err(CertError::Incomplete { given: skips.len() as u32 })
}
