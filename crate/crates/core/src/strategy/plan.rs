use super::case::{Ctx, Dispatch};
use super::world::World;
use crate::graph::Vertex;

/// A target a program can escape toward: a vertex on one outer side of the home face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EscapeTarget {
    pub home: usize,
    pub target: Vertex,
}

/// Case programs as trees of legs; each leg is taken only when certified at the moment it starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Plan {
    /// Shortest path to a vertex, then the continuation.
    Go { to: Vertex, then: Box<Plan> },
    /// Shortest segments through each waypoint in turn, certified against the last one.
    Route { via: Vec<Vertex>, then: Box<Plan> },
    /// The first alternative whose opening leg is available.
    Choose(Vec<Plan>),
    /// Reach the centre of a face and wait there.
    Centre(usize),
    /// Tactic at a dodecahedron corner.
    Corner,
    /// Escape toward a side vertex of the home face and on to a neighbouring centre.
    Escape(EscapeTarget),
    /// Continue the active escape at its next decision point.
    EscapeStep,
}

pub fn go(to: Vertex, then: Plan) -> Plan {
    Plan::Go { to, then: Box::new(then) }
}

pub fn route(via: Vec<Vertex>, then: Plan) -> Plan {
    Plan::Route { via, then: Box::new(then) }
}

/// Labels and ids of one frame, for writing programs.
struct P<'a> {
    x: Ctx<'a>,
    u: [Vertex; 3],
}

impl P<'_> {
    fn v(&self, i: usize) -> Vertex {
        self.x.t.v[i - 1]
    }
    fn q(&self, i: usize) -> Vertex {
        self.x.t.q[i - 1]
    }
    fn m(&self, i: usize) -> Vertex {
        self.x.t.m[i - 1]
    }
    fn o(&self, label: usize) -> Plan {
        Plan::Centre(self.x.t.face[label])
    }
    fn escape(&self, target: Vertex) -> Plan {
        Plan::Escape(EscapeTarget { home: self.x.t.face[0], target })
    }
    /// Go to corner vᵢ, then take the first available of `options`, ending with the corner tactic.
    fn corner(&self, i: usize, mut options: Vec<Plan>) -> Plan {
        options.push(Plan::Corner);
        go(self.v(i), Plan::Choose(options))
    }
    /// From corner vᵢ on to qᵢ and the centre beyond.
    fn via_q(&self, i: usize, beyond: usize) -> Plan {
        go(self.q(i), Plan::Choose(vec![self.o(beyond), Plan::Corner]))
    }
}

/// The case program for a classified dispatch.
pub fn program(w: &World, d: &Dispatch, cops: &[Vertex]) -> Plan {
    let x = Ctx::new(w, d.frame);
    let u = [cops[d.order[0]], cops[d.order[1]], cops[d.order[2]]];
    let p = P { x, u };
    let [u1, u2, u3] = p.u;
    let x = &p.x;
    let t = x.t;
    match d.program {
        "A.1.1" => Plan::Choose(vec![p.escape(p.m(4)), p.escape(t.p)]),
        "A.1.2" => p.corner(1, vec![p.o(1), p.o(2), p.via_q(1, 6)]),
        "A.2.1" => Plan::Choose(vec![p.escape(t.p), p.escape(p.m(4))]),
        "A.2.2" => Plan::Choose(vec![p.escape(t.q_mark), p.escape(p.m(5))]),
        "A.2.3" => p.escape(p.m(2)),
        "B.1.1.1" => {
            if x.on_side(1, u3) || x.on_side(1, u2) {
                p.corner(5, vec![p.o(5), p.o(1)])
            } else {
                p.corner(1, vec![p.o(1), p.o(2)])
            }
        }
        "B.1.1.2.1" => p.corner(3, vec![p.o(4), p.o(3), p.via_q(3, 8)]),
        "B.1.1.2.2" => p.corner(5, vec![p.o(1), p.o(5)]),
        "B.1.2.1" => p.corner(5, vec![p.o(1), p.o(5)]),
        "B.1.2.1.1" => p.corner(5, vec![p.o(5), p.o(1), p.via_q(5, 10)]),
        "B.1.2.1.2.1" => p.corner(1, vec![p.o(2), go(p.q(1), Plan::Choose(vec![p.o(6), p.o(2), Plan::Corner]))]),
        "B.1.2.1.2.2" => {
            if x.dv(4, u1) > 97 {
                p.corner(4, vec![p.via_q(4, 9)])
            } else {
                Plan::Choose(vec![p.escape(p.m(4)), p.corner(1, vec![p.o(1), p.o(2)])])
            }
        }
        "B.1.2.2" => {
            if !x.on_side(1, u2) {
                p.corner(1, vec![p.o(1), p.o(2)])
            } else if x.in_face(11, u3) {
                p.corner(3, vec![p.o(4), p.o(3)])
            } else if x.faces(&[2, 3, 7], u3) >= 50 && x.faces(&[7], u3) >= 196 {
                p.corner(2, vec![p.o(3), p.via_q(2, 7)])
            } else {
                p.corner(5, vec![p.o(5), p.via_q(5, 10)])
            }
        }
        "B.1.3" => {
            if [u2, u3].iter().any(|&c| x.faces(&[1, 2], c) >= 2) {
                p.corner(1, vec![p.o(1), p.o(2), p.via_q(1, 6)])
            } else if (x.in_face(3, u2) as u8 + x.in_face(3, u3) as u8) <= 1 {
                p.corner(3, vec![p.o(4), p.via_q(3, 8)])
            } else {
                p.corner(1, vec![p.o(1)])
            }
        }
        "B.2.1.1" => Plan::Choose(vec![p.escape(p.m(5)), p.corner(4, vec![p.via_q(4, 9)])]),
        "B.2.1.2" => p.escape(p.m(2)),
        "B.2.2" => p.escape(p.m(4)),
        "C.1.1" => {
            if x.dv(5, u3) <= 98 {
                p.corner(2, vec![])
            } else if x.dv(5, u2) >= 12 {
                p.escape(p.m(5))
            } else if x.side(7, u3) <= 50 {
                p.escape(t.p)
            } else {
                p.corner(1, vec![p.o(2), p.via_q(1, 6)])
            }
        }
        "C.1.1.1" => {
            if x.dv(2, u2) <= 98 && x.faces(&[4], u3) + x.faces(&[3], u2) >= 5 {
                p.corner(3, vec![p.o(4), p.o(3), p.via_q(3, 8)])
            } else if x.dv(2, u2) <= 98 {
                p.corner(1, vec![p.o(1), p.via_q(1, 6)])
            } else {
                p.corner(1, vec![p.o(1), p.o(2)])
            }
        }
        "C.1.1.2" => {
            if u2 != p.q(1) {
                p.corner(1, vec![p.o(1), p.o(2)])
            } else if x.side(10, u3) >= 50 {
                p.corner(5, vec![p.o(5), p.via_q(5, 10)])
            } else {
                p.corner(2, vec![p.o(2), p.o(3), p.via_q(2, 7)])
            }
        }
        "C.1.1.3" | "C.1.1.4" => p.corner(5, vec![p.o(5), p.o(1), p.via_q(5, 10)]),
        "C.1.1.5" => {
            if x.dv(2, u2) <= 98 || u2 == p.q(2) {
                p.corner(3, vec![p.o(3), p.o(4), p.via_q(3, 8)])
            } else {
                p.corner(2, vec![p.o(2), p.o(3)])
            }
        }
        "C.1.2" => {
            if x.faces(&[1, 2], u2) >= 3 || x.faces(&[1, 2], u3) >= 3 {
                p.corner(1, vec![p.o(1), p.o(2), p.via_q(1, 6)])
            } else {
                p.escape(t.p)
            }
        }
        "C.2.1" => {
            if x.dv(3, u2) >= 12 {
                p.escape(p.m(4))
            } else if x.pt(p.m(2), u3) <= 98 {
                p.escape(p.m(5))
            } else {
                p.escape(p.m(2))
            }
        }
        "C.2.2" => {
            if x.dv(5, u2) >= 12 {
                p.escape(p.m(5))
            } else if x.pt(p.m(2), u3) >= 99 {
                p.escape(p.m(2))
            } else {
                p.escape(p.m(4))
            }
        }
        other => unreachable!("no program for {other}"),
    }
}
