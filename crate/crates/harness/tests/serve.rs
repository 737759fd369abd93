use std::io::{BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::process::{Command, Stdio};
use std::sync::Arc;
use std::thread;

use serde_json::{json, Value};
use pursuit_core::construct::build_subdivided_cube;
use pursuit_core::engine::{RuleSet, Transcript};
use pursuit_core::graph::Vertex;
use pursuit_core::solver::{solve_table, TableCops};
use pursuit_harness::serve::serve;

fn server() -> SocketAddr {
    let l = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = l.local_addr().unwrap();
    thread::spawn(move || serve(l));
    addr
}

struct Client {
    out: TcpStream,
    inp: BufReader<TcpStream>,
}

impl Client {
    fn new(addr: SocketAddr) -> Self {
        let out = TcpStream::connect(addr).unwrap();
        let inp = BufReader::new(out.try_clone().unwrap());
        Client { out, inp }
    }

    fn raw(&mut self, line: &str) -> Value {
        writeln!(self.out, "{line}").unwrap();
        let mut reply = String::new();
        self.inp.read_line(&mut reply).unwrap();
        serde_json::from_str(&reply).unwrap()
    }

    fn send(&mut self, msg: Value) -> Value {
        self.raw(&msg.to_string())
    }

    fn ok(&mut self, msg: Value) -> Value {
        let r = self.send(msg.clone());
        assert_eq!(r["ok"], true, "{msg} -> {r}");
        r
    }
}

fn verts(v: &Value) -> Vec<Vertex> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as Vertex).collect()
}

fn q_prime_session(c: &mut Client, cops: &[Vertex]) -> Value {
    c.ok(json!({"type": "new_session", "graph": "q-prime", "rules": {"variant": "lazy", "cops": 3}, "robber_kind": "solver", "cops": cops}))
}

#[test]
fn state_lists_legal_moves() {
    let mut c = Client::new(server());
    let r = q_prime_session(&mut c, &[0, 4, 9]);
    let s = &r["state"];
    assert_eq!(verts(&s["cop_positions"]), vec![0, 4, 9]);
    assert_eq!(s["turn"], "robber");
    assert_eq!(s["round"], 1);
    let robber = s["robber"].as_u64().unwrap() as Vertex;
    let g = build_subdivided_cube();
    assert_eq!(verts(&s["legal"]["robber"]).len(), 1 + g.degree(robber));
    assert!(s["legal"]["cops"].as_array().unwrap().is_empty());
    let r = c.ok(json!({"type": "robber_auto"}));
    let s = &r["state"];
    assert_eq!(s["turn"], "cops");
    let per_cop = s["legal"]["cops"].as_array().unwrap();
    assert_eq!(per_cop.len(), 3);
    assert_eq!(verts(&per_cop[0]), vec![0, 1, 7, 16]);
    assert_eq!(s["legal"]["one_cop_only"], true);
    assert_eq!(s["legal"]["pass_allowed"], true);
    assert_eq!(c.ok(json!({"type": "state"}))["state"], r["state"]);
}

#[test]
fn illegal_moves_leave_state_unchanged() {
    let mut c = Client::new(server());
    q_prime_session(&mut c, &[0, 4, 9]);
    let r = c.send(json!({"type": "cop_move", "cop_index": 0, "to": 1}));
    assert_eq!(r["ok"], false);
    assert!(r["error"].as_str().unwrap().contains("turn"));
    let before = c.ok(json!({"type": "robber_auto"}))["state"].clone();
    for bad in [
        json!({"type": "cop_move", "cop_index": 0, "to": 2}),
        json!({"type": "cop_move", "cop_index": 5, "to": 1}),
        json!({"type": "cop_move", "positions": [1, 3, 9]}),
        json!({"type": "cop_move", "cop_index": 0}),
        json!({"type": "robber_auto"}),
    ] {
        let r = c.send(bad.clone());
        assert_eq!(r["ok"], false, "{bad}");
        assert!(!r["error"].as_str().unwrap().is_empty());
        assert_eq!(r["state"], before, "{bad}");
    }
    assert_eq!(c.raw("not json")["ok"], false);
    assert_eq!(c.ok(json!({"type": "state"}))["state"], before);
    let t: Transcript = serde_json::from_value(c.ok(json!({"type": "transcript"}))["transcript"].clone()).unwrap();
    assert_eq!(t.moves.len(), 1);
}

#[test]
fn requests_before_a_session_fail() {
    let mut c = Client::new(server());
    assert_eq!(c.send(json!({"type": "state"}))["ok"], false);
    assert_eq!(c.send(json!({"type": "transcript"}))["ok"], false);
    let r = c.send(json!({"type": "new_session", "graph": "q-prime", "rules": {"cops": 2}, "robber_kind": "paper"}));
    assert_eq!(r["ok"], false);
    assert!(r["error"].as_str().unwrap().contains("layered:49"));
    let r = c.send(json!({"type": "new_session", "graph": "q-prime", "rules": {"cops": 3}, "robber_kind": "ghost"}));
    assert_eq!(r["ok"], false);
}

#[test]
fn solver_robber_evades_passive_cops_but_falls_to_the_solver_line() {
    let g = Arc::new(build_subdivided_cube());
    let rules = RuleSet::lazy(3);
    let (_, table) = solve_table(&g, &rules).unwrap();
    let solver = TableCops::new(g.clone(), Arc::new(table)).unwrap();
    let addr = server();

    let mut passive = Client::new(addr);
    q_prime_session(&mut passive, &solver.placement);
    for _ in 0..30 {
        passive.ok(json!({"type": "robber_auto"}));
        let s = passive.ok(json!({"type": "cop_move", "cop_index": 0, "to": solver.placement[0]}));
        assert!(s["state"]["captured"].is_null());
    }

    let mut human = Client::new(addr);
    let mut s = q_prime_session(&mut human, &solver.placement)["state"].clone();
    let mut rounds = 0;
    while s["captured"].is_null() {
        s = human.ok(json!({"type": "robber_auto"}))["state"].clone();
        if !s["captured"].is_null() {
            break;
        }
        let cops = verts(&s["cop_positions"]);
        let r = s["robber"].as_u64().unwrap() as Vertex;
        let target = solver.table.index.tuple(solver.best_successor(&cops, r).unwrap()).to_vec();
        let moved: Vec<usize> = (0..3).filter(|&i| !target.contains(&cops[i])).collect();
        let msg = match moved.as_slice() {
            [] => json!({"type": "cop_move", "positions": cops}),
            [i] => {
                let mut rest = target.clone();
                for (j, &c) in cops.iter().enumerate() {
                    if j != *i {
                        rest.remove(rest.iter().position(|&x| x == c).unwrap());
                    }
                }
                json!({"type": "cop_move", "cop_index": i, "to": rest[0]})
            }
            _ => panic!("solver line moves more than one cop"),
        };
        s = human.ok(msg)["state"].clone();
        rounds += 1;
        assert!(rounds < 50);
    }
    assert!(s["captured"].is_number());

    let t: Transcript = serde_json::from_value(human.ok(json!({"type": "transcript"}))["transcript"].clone()).unwrap();
    let end = t.replay(&g).unwrap();
    assert_eq!(end.captured, s["captured"].as_u64().map(|x| x as u32));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("session.json");
    std::fs::write(&path, t.to_json()).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_pursuit")).args(["match", "--replay", path.to_str().unwrap()]).output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("captured"));
}

#[test]
fn sessions_are_independent() {
    let addr = server();
    let mut a = Client::new(addr);
    let mut b = Client::new(addr);
    q_prime_session(&mut a, &[0, 4, 9]);
    b.ok(json!({"type": "new_session", "graph": "dodecahedron", "rules": {"variant": "classical", "cops": 1}, "robber_kind": "stay", "cops": [3]}));
    let sa = a.ok(json!({"type": "robber_auto"}))["state"].clone();
    let sb = b.ok(json!({"type": "robber_auto"}))["state"].clone();
    assert_eq!(verts(&sb["cop_positions"]), vec![3]);
    assert_eq!(sb["legal"]["one_cop_only"], false);
    let moved = b.ok(json!({"type": "cop_move", "positions": [verts(&sb["legal"]["cops"][0])[1]]}));
    assert_eq!(moved["state"]["round"], 2);
    assert_eq!(a.ok(json!({"type": "state"}))["state"], sa);
}

#[test]
fn centre_robber_session() {
    let mut c = Client::new(server());
    let r = c.ok(json!({"type": "new_session", "graph": "layered:49", "rules": {"variant": "lazy", "semantics": "exactly-one", "cops": 3}, "robber_kind": "paper", "cops": [0, 1, 2]}));
    assert_eq!(r["state"]["legal"]["pass_allowed"], false);
    let s = c.ok(json!({"type": "robber_auto"}))["state"].clone();
    let r = c.send(json!({"type": "cop_move", "positions": [0, 1, 2]}));
    assert_eq!(r["ok"], false);
    assert_eq!(r["state"], s);
    let to = verts(&s["legal"]["cops"][1])[1];
    let s = c.ok(json!({"type": "cop_move", "cop_index": 1, "to": to}))["state"].clone();
    assert_eq!(verts(&s["cop_positions"]), vec![0, to, 2]);
    assert!(s["captured"].is_null());
}

#[test]
fn binary_serves_and_reports_busy_ports() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pursuit"))
        .args(["serve", "--port", "0"])
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stdout.take().unwrap()).read_line(&mut line).unwrap();
    let addr: SocketAddr = line.trim().strip_prefix("listening on ").unwrap().parse().unwrap();
    let mut c = Client::new(addr);
    q_prime_session(&mut c, &[0, 4, 9]);
    let busy = Command::new(env!("CARGO_BIN_EXE_pursuit")).args(["serve", "--port", &addr.port().to_string()]).output().unwrap();
    assert!(!busy.status.success());
    assert!(String::from_utf8_lossy(&busy.stderr).contains("binding"));
    child.kill().unwrap();
    child.wait().unwrap();
}
