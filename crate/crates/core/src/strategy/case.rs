use super::world::{frame_index, World};
use super::StrategyError;
use crate::construct::LandmarkTable;
use crate::graph::Vertex;

/// Every dispatch-table key, in table order.
pub const CASE_LABELS: &[&str] = &[
    "A.1.1",
    "A.1.2",
    "A.1'",
    "A.2.1",
    "A.2.2",
    "A.2.3",
    "B.1.1.1",
    "B.1.1.2.1",
    "B.1.1.2.2",
    "B.1.2.1",
    "B.1.2.1.1",
    "B.1.2.1.2.1",
    "B.1.2.1.2.2",
    "B.1.2.2",
    "B.1.3",
    "B.1'",
    "B.1.1''",
    "B.1.2''",
    "B.1''",
    "B.1'''",
    "B.2.1.1",
    "B.2.1.1.1.1",
    "B.2.1.1.1.2",
    "B.2.1.1.2",
    "B.2.1.2",
    "B.2.2",
    "C.1.1",
    "C.1.1.1",
    "C.1.1.2",
    "C.1.1.3",
    "C.1.1.4",
    "C.1.1.5",
    "C.1.2",
    "C.1'",
    "C.1''",
    "C.1'''",
    "C.1''''",
    "C.2.1",
    "C.2.2",
];

/// F = U₁₀ ∪ U₆ ∪ U₁ ∪ U₂ ∪ U₇ as face labels.
pub const F_LABELS: [usize; 5] = [10, 6, 1, 2, 7];

/// Result of classifying a one-adjacent-cop configuration at a face centre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dispatch {
    /// Coverage key.
    pub label: &'static str,
    /// Unprimed key whose program runs in `frame`.
    pub program: &'static str,
    /// World frame index the program is expressed in.
    pub frame: usize,
    /// Cop indices playing λ₁, λ₂, λ₃.
    pub order: [usize; 3],
    /// Whether every precondition of the label held as stated; false when a w.l.o.g. step had no exact match.
    pub exact: bool,
}

/// Distance queries in one frame.
pub struct Ctx<'a> {
    pub w: &'a World,
    pub t: &'a LandmarkTable,
}

impl<'a> Ctx<'a> {
    pub fn new(w: &'a World, frame: usize) -> Self {
        Ctx { w, t: w.frame_at(frame) }
    }

    /// d(vᵢ, x), i in 1..=5.
    pub fn dv(&self, i: usize, x: Vertex) -> u32 {
        self.pt(self.t.v[i - 1], x)
    }

    pub fn pt(&self, p: Vertex, x: Vertex) -> u32 {
        self.w.to_point(p, x).expect("landmark has a field")
    }

    /// d(x, Bᵢ), i in 1..=15.
    pub fn side(&self, i: usize, x: Vertex) -> u32 {
        let (a, b) = self.t.frame.b_endpoints(i);
        self.w.to_side(a, b, x)
    }

    /// d(x, ⋃ Uᵢ) over face labels.
    pub fn faces(&self, labels: &[usize], x: Vertex) -> u32 {
        labels.iter().map(|&i| self.w.to_face(self.t.face[i], x)).min().unwrap_or(u32::MAX)
    }

    pub fn in_face(&self, label: usize, x: Vertex) -> bool {
        self.w.d.in_face(x, self.t.face[label])
    }

    pub fn in_f(&self, x: Vertex) -> bool {
        F_LABELS.iter().any(|&i| self.in_face(i, x))
    }

    pub fn on_side(&self, i: usize, x: Vertex) -> bool {
        self.side(i, x) == 0
    }
}

/// Frame of face `f` whose first corner is `corner`, keeping the direction of `like`.
pub fn reframe(w: &World, like: usize, corner: Vertex) -> usize {
    let f = like / 10;
    let refl = like % 2 == 1;
    (0..5)
        .map(|s| frame_index(f, s, refl))
        .find(|&i| w.frame_at(i).v[0] == corner)
        .expect("corner lies on the face")
}

/// The other frame of the same face with the same v₁, swapping v₂↔v₅ and v₃↔v₄.
pub fn mirror_at_v1(w: &World, frame: usize) -> usize {
    let t = w.frame_at(frame);
    let f = frame / 10;
    (0..10)
        .map(|k| f * 10 + k)
        .find(|&i| i != frame && w.frame_at(i).v[0] == t.v[0])
        .expect("every frame has a mirror")
}

pub fn classify_case(w: &World, robber: Vertex, cops: &[Vertex]) -> Result<Dispatch, StrategyError> {
    let f = w.centre_face(robber).ok_or(StrategyError::NotAtCentre(robber))?;
    if cops.len() != 3 {
        return Err(StrategyError::CopCount(cops.len()));
    }
    let g = w.graph();
    let adjacent: Vec<usize> = (0..3).filter(|&i| g.has_edge(robber, cops[i])).collect();
    if adjacent.len() != 1 || cops.contains(&robber) {
        return Err(StrategyError::AdjacentCops(adjacent.len()));
    }
    let a = adjacent[0];
    let frame = (0..10)
        .map(|k| f * 10 + k)
        .find(|&i| w.frame_at(i).p123.contains(&cops[a]))
        .ok_or(StrategyError::NotAtCentre(robber))?;
    let others: Vec<usize> = (0..3).filter(|&i| i != a).collect();
    let (b, c) = (others[0], others[1]);
    let inside = |i: usize| w.d.in_face(cops[i], f);
    let n_in = 1 + inside(b) as usize + inside(c) as usize;
    let cx = Classifier { w, cops, a };
    Ok(match n_in {
        3 => cx.case_a(frame, b, c),
        1 => cx.case_b(frame, b, c),
        _ => {
            let (l2, l3) = if inside(b) { (c, b) } else { (b, c) };
            cx.case_c(frame, l2, l3)
        }
    })
}

struct Classifier<'a> {
    w: &'a World,
    cops: &'a [Vertex],
    a: usize,
}

impl Classifier<'_> {
    fn u(&self, i: usize) -> Vertex {
        self.cops[i]
    }

    fn dispatch(&self, label: &'static str, program: &'static str, frame: usize, l2: usize, l3: usize, exact: bool) -> Dispatch {
        Dispatch { label, program, frame, order: [self.a, l2, l3], exact }
    }

    /// First frame of the home face and λ₂/λ₃ assignment for which `pred` holds.
    fn search(&self, frame: usize, b: usize, c: usize, pred: impl Fn(&Ctx, Vertex, Vertex, Vertex) -> bool) -> Option<(usize, usize, usize)> {
        let f = frame / 10;
        let order = std::iter::once(frame).chain((0..10).map(|k| f * 10 + k).filter(move |&i| i != frame));
        for fr in order {
            let x = Ctx::new(self.w, fr);
            for (p, q) in [(b, c), (c, b)] {
                if pred(&x, self.u(self.a), self.u(p), self.u(q)) {
                    return Some((fr, p, q));
                }
            }
        }
        None
    }

    fn case_a(&self, frame: usize, b: usize, c: usize) -> Dispatch {
        let x = Ctx::new(self.w, frame);
        let (u1, ub, uc) = (self.u(self.a), self.u(b), self.u(c));
        let ok = |i: usize| x.dv(i, ub) >= 99 && x.dv(i, uc) >= 99 && x.dv(i, u1) >= 98;
        if ok(1) {
            let (program, l2, l3) = self.a1(frame, b, c);
            return self.dispatch(program, program, frame, l2, l3, true);
        }
        if let Some(i) = (2..=5).find(|&i| ok(i)) {
            let fr = reframe(self.w, frame, x.t.v[i - 1]);
            let (program, l2, l3) = self.a1(fr, b, c);
            return self.dispatch("A.1'", program, fr, l2, l3, true);
        }
        let pred = |x: &Ctx, u1, u2, u3| {
            x.dv(4, u1) <= 97 && x.dv(1, u2) <= 98 && x.dv(5, u2) <= 98 && x.dv(2, u3) <= 98 && x.dv(3, u3) <= 98
        };
        let (fr, l2, l3, exact) = match self.search(frame, b, c, pred) {
            Some((fr, l2, l3)) => (fr, l2, l3, true),
            None => {
                let (l2, l3) = if x.dv(1, ub) <= x.dv(1, uc) { (b, c) } else { (c, b) };
                (frame, l2, l3, false)
            }
        };
        let x = Ctx::new(self.w, fr);
        let label = if x.pt(x.t.p, self.u(l3)) >= 99 {
            "A.2.1"
        } else if x.pt(x.t.q_mark, self.u(l2)) >= 99 {
            "A.2.2"
        } else {
            "A.2.3"
        };
        self.dispatch(label, label, fr, l2, l3, exact)
    }

    fn a1(&self, frame: usize, b: usize, c: usize) -> (&'static str, usize, usize) {
        let x = Ctx::new(self.w, frame);
        for (p, q) in [(b, c), (c, b)] {
            if x.side(6, self.u(p)) <= 2 && x.side(7, self.u(q)) <= 2 {
                return ("A.1.1", p, q);
            }
        }
        let (l2, l3) = if x.side(6, self.u(b)) >= 3 { (b, c) } else { (c, b) };
        ("A.1.2", l2, l3)
    }

    fn case_b(&self, frame: usize, b: usize, c: usize) -> Dispatch {
        let x = Ctx::new(self.w, frame);
        let us = [self.u(self.a), self.u(b), self.u(c)];
        let ok = |i: usize| us.iter().all(|&u| x.dv(i, u) >= 99);
        for (i, label) in [(1, ""), (2, "B.1'"), (3, "B.1''"), (5, "B.1'''")] {
            if !ok(i) {
                continue;
            }
            let fr = if i == 1 { frame } else { reframe(self.w, frame, x.t.v[i - 1]) };
            let (program, fr, l2, l3) = self.b1(fr, b, c);
            let label = match (i, program) {
                (1, p) => p,
                (3, p) if p.starts_with("B.1.1") => "B.1.1''",
                (3, p) if p.starts_with("B.1.2") => "B.1.2''",
                (_, _) => label,
            };
            return self.dispatch(label, program, fr, l2, l3, true);
        }
        let in_u = |x: &Ctx, i: usize, u: Vertex| x.in_face(i, u);
        let pred = |x: &Ctx, u1: Vertex, u2: Vertex, u3: Vertex| {
            x.dv(4, u1) <= 97 && in_u(x, 1, u2) && in_u(x, 3, u3) && x.dv(1, u2) <= 98 && x.dv(3, u3) <= 98
        };
        let near_v3 = |x: &Ctx, u1: Vertex, u2: Vertex, u3: Vertex| pred(x, u1, u2, u3) && x.dv(3, u3) <= 11;
        if let Some((fr, l2, l3)) = self.search(frame, b, c, near_v3) {
            let x = Ctx::new(self.w, fr);
            let label = if x.dv(5, self.u(l2)) >= 12 { "B.2.1.1" } else { "B.2.1.2" };
            return self.dispatch(label, label, fr, l2, l3, true);
        }
        match self.search(frame, b, c, pred) {
            Some((fr, l2, l3)) => self.dispatch("B.2.2", "B.2.2", fr, l2, l3, true),
            None => self.dispatch("B.2.2", "B.2.2", frame, b, c, false),
        }
    }

    fn b1(&self, frame: usize, b: usize, c: usize) -> (&'static str, usize, usize, usize) {
        let x = Ctx::new(self.w, frame);
        let (ub, uc) = (self.u(b), self.u(c));
        match (x.in_f(ub), x.in_f(uc)) {
            (true, true) => {
                let near89 = |u| x.faces(&[8, 9], u) <= 1;
                if near89(ub) || near89(uc) {
                    let (l2, l3) = if near89(ub) { (b, c) } else { (c, b) };
                    return ("B.1.1.1", frame, l2, l3);
                }
                let near38 = |u| x.faces(&[3, 8], u) <= 101;
                if (near38(ub) as u8 + near38(uc) as u8) <= 1 {
                    ("B.1.1.2.1", frame, b, c)
                } else {
                    ("B.1.1.2.2", frame, b, c)
                }
            }
            (false, false) => ("B.1.3", frame, b, c),
            (in_b, _) => {
                let (l2, l3) = if in_b { (b, c) } else { (c, b) };
                let (u2, u3) = (self.u(l2), self.u(l3));
                if x.faces(&[1, 2], u3) >= 100 {
                    return ("B.1.2.2", frame, l2, l3);
                }
                let frame = if x.in_face(3, u3) { frame } else { mirror_at_v1(self.w, frame) };
                let x = Ctx::new(self.w, frame);
                if x.faces(&[1], u2) >= 3 {
                    return ("B.1.2.1", frame, l2, l3);
                }
                if x.faces(&[6], u2) <= 39 {
                    return ("B.1.2.1.1", frame, l2, l3);
                }
                let lp = x.faces(&[5], u2);
                let dp = x.dv(3, u3);
                if lp + dp <= 97 {
                    ("B.1.2.1.2.1", frame, l2, l3)
                } else {
                    ("B.1.2.1.2.2", frame, l2, l3)
                }
            }
        }
    }

    fn case_c(&self, frame: usize, l2: usize, l3: usize) -> Dispatch {
        let x = Ctx::new(self.w, frame);
        let (u1, u2, u3) = (self.u(self.a), self.u(l2), self.u(l3));
        let ok = |i: usize| x.dv(i, u2) >= 99 && x.dv(i, u3) >= 99 && x.dv(i, u1) >= 98;
        for (i, label) in [(1, ""), (2, "C.1'"), (3, "C.1''"), (5, "C.1'''"), (4, "C.1''''")] {
            if !ok(i) {
                continue;
            }
            let fr = if i == 1 { frame } else { reframe(self.w, frame, x.t.v[i - 1]) };
            let program = self.c1(fr, l2, l3);
            let label = if i == 1 { program } else { label };
            return self.dispatch(label, program, fr, l2, l3, true);
        }
        let c21 = |x: &Ctx, u1, u2, u3| {
            x.dv(4, u1) <= 97 && x.dv(2, u2) <= 98 && x.dv(3, u2) <= 98 && x.dv(1, u3) <= 98 && x.dv(5, u3) <= 98
        };
        let c22 = |x: &Ctx, u1, u2, u3| {
            x.dv(4, u1) <= 97 && x.dv(1, u2) <= 98 && x.dv(5, u2) <= 98 && x.dv(2, u3) <= 98 && x.dv(3, u3) <= 98
        };
        let f = frame / 10;
        for fr in std::iter::once(frame).chain((0..10).map(|k| f * 10 + k)) {
            let x = Ctx::new(self.w, fr);
            if c21(&x, u1, u2, u3) {
                return self.dispatch("C.2.1", "C.2.1", fr, l2, l3, true);
            }
            if c22(&x, u1, u2, u3) {
                return self.dispatch("C.2.2", "C.2.2", fr, l2, l3, true);
            }
        }
        let label = if x.dv(1, u2).min(x.dv(5, u2)) <= x.dv(2, u2).min(x.dv(3, u2)) { "C.2.2" } else { "C.2.1" };
        self.dispatch(label, label, frame, l2, l3, false)
    }

    fn c1(&self, frame: usize, l2: usize, l3: usize) -> &'static str {
        let x = Ctx::new(self.w, frame);
        let (u2, u3) = (self.u(l2), self.u(l3));
        if !x.in_f(u2) {
            return "C.1.2";
        }
        if x.dv(5, u2) <= 98 {
            return "C.1.1";
        }
        let near = |i: usize| x.dv(i, u3) <= 100;
        for (p, q, label) in [
            (5, 4, "C.1.1.1"),
            (3, 4, "C.1.1.2"),
            (2, 3, "C.1.1.3"),
            (1, 2, "C.1.1.4"),
            (1, 5, "C.1.1.5"),
        ] {
            if near(p) && near(q) {
                return label;
            }
        }
        "C.1.1"
    }
}
