use std::fs;
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand};
use pursuit_core::construct::{face_address_dump, validate_construction, Layered, ValidateOptions};
use pursuit_core::engine::{LazySemantics, Outcome, Transcript, Turn};
use pursuit_core::graph::{Graph, Vertex};
use pursuit_core::solver::{cop_number, solve_table, CopNumber};
use pursuit_core::strategy::AdversaryKind;
use pursuit_harness::graphs::GraphId;
use pursuit_harness::play::{parse_rules, play, CopKind, MatchSpec, RobberKind};
use pursuit_harness::serve::serve;
use pursuit_harness::tournament::{full_field, run_tournament, Entrant, TournamentSpec};

#[derive(Parser)]
#[command(name = "pursuit", about = "Cops and robbers workbench", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct RulesArgs {
    /// classical | lazy
    #[arg(long, default_value = "lazy")]
    variant: String,
    /// at-most-one | exactly-one
    #[arg(long, default_value = "at-most-one")]
    semantics: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the edge list (and for layered graphs the landmark sidecar and address dump).
    Build {
        #[arg(long)]
        graph: GraphId,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a graph against the construction invariants.
    Verify {
        #[arg(long)]
        graph: GraphId,
        /// Edge list to check instead of a fresh build.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Distance-formula pairs are exhaustive up to this many layers.
        #[arg(long, default_value_t = 6)]
        exhaustive_up_to: u32,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the game exactly for a fixed cop count, or find the cop number.
    Solve {
        #[arg(long)]
        graph: GraphId,
        #[command(flatten)]
        rules: RulesArgs,
        /// Solve for exactly this many cops.
        #[arg(long)]
        cops: Option<usize>,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        /// Write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the solved table (requires --cops): "cops robber turn rank" per line.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Play one match, or replay a transcript.
    Match {
        #[arg(long, default_value = "layered:49")]
        graph: GraphId,
        #[command(flatten)]
        rules: RulesArgs,
        #[arg(long, default_value_t = 3)]
        cops: usize,
        /// Adversary kind, `stay` or `solver`.
        #[arg(long, default_value = "greedy")]
        cop_strategy: String,
        /// paper | stay | solver
        #[arg(long, default_value = "paper")]
        robber: String,
        #[arg(long, default_value_t = 10_000)]
        max_rounds: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',')]
        cop_start: Option<Vec<Vertex>>,
        #[arg(long)]
        robber_start: Option<Vertex>,
        /// Write the transcript as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replay this transcript instead of playing.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Run the centre robber against a field of adversaries.
    Tournament {
        #[arg(long, default_value = "layered:49")]
        graph: GraphId,
        /// at-most-one | exactly-one | both
        #[arg(long, default_value = "both")]
        semantics: String,
        /// Comma-separated adversary kinds, or `all`.
        #[arg(long, default_value = "all")]
        adversaries: String,
        #[arg(long, default_value_t = 5)]
        random_walk_seeds: u32,
        #[arg(long, default_value_t = 20)]
        placements: u32,
        #[arg(long, default_value_t = 10_000)]
        max_rounds: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
        /// Write one JSON line per match plus summary lines.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve the line-delimited JSON play protocol over TCP.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 7878)]
        port: u16,
    },
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn cmd_build(graph: GraphId, out: &Path) -> Result<()> {
    let loaded = graph.load()?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let stem = graph.to_string().replace(':', "-");
    let g = &loaded.graph;
    write(&out.join(format!("{stem}.edges")), &g.to_edge_list())?;
    if let (Some(d), Some(t)) = (loaded.layered(), loaded.landmarks()) {
        write(&out.join(format!("{stem}.landmarks")), &t.sidecar())?;
        write(&out.join(format!("{stem}.addresses")), &face_address_dump(d))?;
    }
    println!("{graph}: {} vertices, {} edges -> {}", g.n_vertices(), g.n_edges(), out.display());
    Ok(())
}

fn small_report(graph: GraphId, g: &Graph) -> (bool, String) {
    let (n, m) = match graph {
        GraphId::QPrime => (20, 24),
        _ => (20, 30),
    };
    let ok = g.n_vertices() == n && g.n_edges() == m && g.is_connected();
    let text = format!(
        "{graph}: |V| = {} (expected {n}), |E| = {} (expected {m}), connected {}\n{}",
        g.n_vertices(),
        g.n_edges(),
        g.is_connected(),
        if ok { "PASS" } else { "FAIL" }
    );
    (ok, text)
}

fn cmd_verify(graph: GraphId, input: Option<&Path>, opts: ValidateOptions, out: Option<&Path>) -> Result<bool> {
    let given = match input {
        Some(p) => Some(Graph::parse_edge_list(&fs::read_to_string(p)?)?),
        None => None,
    };
    let GraphId::Layered(l) = graph else {
        let g = match given {
            Some(g) => g,
            None => (*graph.load()?.graph).clone(),
        };
        let (ok, text) = small_report(graph, &g);
        println!("{text}");
        return Ok(ok);
    };
    let d = Layered::new(l)?;
    let g = given.unwrap_or_else(|| d.graph().clone());
    let report = validate_construction(&g, &d, &opts);
    println!("{report}");
    if let Some(p) = out {
        write(p, &serde_json::to_string_pretty(&report)?)?;
    }
    Ok(report.passed())
}

fn cmd_solve(
    graph: GraphId,
    rules: &RulesArgs,
    cops: Option<usize>,
    k_max: usize,
    out: Option<&Path>,
    table_out: Option<&Path>,
) -> Result<()> {
    let loaded = graph.load()?;
    let g = &loaded.graph;
    let t = Instant::now();
    let report = match cops {
        Some(k) => {
            let r = parse_rules(&rules.variant, &rules.semantics, k)?;
            let (res, table) = solve_table(g, &r)?;
            println!(
                "{graph} {r}: {} wins; placement {:?}; capture within {:?} plies; {} positions",
                if res.cops_win { "cops" } else { "robber" },
                res.placement,
                res.placement_rank,
                res.positions
            );
            if let Some(p) = table_out {
                let mut text = String::new();
                for tu in 0..table.index.count() {
                    for v in 0..g.n_vertices() as Vertex {
                        for turn in [Turn::Robber, Turn::Cops] {
                            let rank = table.rank_at(tu, v, turn);
                            let turn = if turn == Turn::Robber { "robber" } else { "cops" };
                            let rank = if rank == u32::MAX { "-".to_string() } else { rank.to_string() };
                            text += &format!("{:?} {v} {turn} {rank}\n", table.index.tuple(tu));
                        }
                    }
                }
                write(p, &text)?;
            }
            serde_json::to_value(&res)?
        }
        None => {
            ensure!(table_out.is_none(), "--table needs --cops");
            let r = parse_rules(&rules.variant, &rules.semantics, 1)?;
            let c = cop_number(g, &r, k_max)?;
            match &c {
                CopNumber::Exact { k } => println!("{graph} {}: cop number {k}", r.with_cops(*k)),
                CopNumber::Exceeds { k_max } => println!("{graph} {r}: cop number exceeds {k_max}"),
            }
            serde_json::json!({ "graph": graph.to_string(), "rules": r, "cop_number": c })
        }
    };
    println!("solved in {:.2?}", t.elapsed());
    if let Some(p) = out {
        write(p, &serde_json::to_string_pretty(&report)?)?;
    }
    Ok(())
}

fn cmd_replay(path: &Path) -> Result<()> {
    let t = Transcript::from_json(&fs::read_to_string(path)?).context("parsing transcript")?;
    let graph: GraphId = t.graph_id.parse()?;
    let loaded = graph.load()?;
    let cfg = t.replay(&loaded.graph)?;
    match t.outcome {
        Outcome::Captured { round } => ensure!(cfg.captured == Some(round), "transcript claims capture in round {round}"),
        Outcome::InProgress => {}
        _ => ensure!(cfg.captured.is_none(), "replay ends in a capture the transcript does not record"),
    }
    println!("replayed {} moves on {graph}: cops {:?}, robber {:?}, round {}, captured {:?}", t.moves.len(), cfg.cops, cfg.robber, cfg.round, cfg.captured);
    println!("{}", serde_json::to_string(&t.outcome)?);
    Ok(())
}

fn parse_semantics(s: &str) -> Result<Vec<LazySemantics>> {
    Ok(match s {
        "both" => vec![LazySemantics::AtMostOne, LazySemantics::ExactlyOne],
        "at-most-one" => vec![LazySemantics::AtMostOne],
        "exactly-one" => vec![LazySemantics::ExactlyOne],
        _ => bail!("unknown semantics `{s}`"),
    })
}

fn parse_field(s: &str, walk_families: u32) -> Result<Vec<Entrant>> {
    if s == "all" {
        return Ok(full_field(walk_families));
    }
    let mut out = Vec::new();
    for name in s.split(',') {
        let kind: AdversaryKind = name.trim().parse()?;
        let copies = if kind == AdversaryKind::RandomWalk { walk_families.max(1) } else { 1 };
        out.extend((0..copies).map(|family| Entrant { kind: kind.clone(), family }));
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Build { graph, out } => cmd_build(graph, &out)?,
        Cmd::Verify { graph, input, exhaustive_up_to, samples, seed, out } => {
            let opts = ValidateOptions { exhaustive_up_to, samples, seed, ..ValidateOptions::default() };
            return cmd_verify(graph, input.as_deref(), opts, out.as_deref());
        }
        Cmd::Solve { graph, rules, cops, k_max, out, table } => {
            cmd_solve(graph, &rules, cops, k_max, out.as_deref(), table.as_deref())?
        }
        Cmd::Match { replay: Some(p), .. } => cmd_replay(&p)?,
        Cmd::Match { graph, rules, cops, cop_strategy, robber, max_rounds, seed, cop_start, robber_start, out, replay: None } => {
            let spec = MatchSpec {
                graph,
                rules: parse_rules(&rules.variant, &rules.semantics, cops)?,
                cops: cop_strategy.parse::<CopKind>()?,
                robber: robber.parse::<RobberKind>()?,
                max_rounds,
                seed,
                cop_start,
                robber_start,
            };
            let loaded = graph.load()?;
            let t = Instant::now();
            let res = play(&loaded, &spec)?;
            let tr = &res.transcript;
            println!(
                "{graph} {}: {} vs {} robber from {:?} / {:?}",
                spec.rules, spec.cops, spec.robber, tr.placements.cops, tr.placements.robber
            );
            println!("{}", serde_json::to_string(&tr.outcome)?);
            if let Some(s) = &res.stats {
                println!("{}", serde_json::to_string(s)?);
            }
            println!("played in {:.2?}", t.elapsed());
            if let Some(p) = out {
                write(&p, &tr.to_json())?;
            }
        }
        Cmd::Tournament { graph, semantics, adversaries, random_walk_seeds, placements, max_rounds, seed, threads, out } => {
            let spec = TournamentSpec {
                entrants: parse_field(&adversaries, random_walk_seeds)?,
                semantics: parse_semantics(&semantics)?,
                placements,
                max_rounds,
                seed,
                threads,
            };
            let loaded = graph.load()?;
            let report = run_tournament(&loaded, &spec)?;
            let s = &report.summary;
            println!("matches {}  outcomes {:?}", s.matches, s.outcomes);
            println!("coverage {:?}", s.coverage);
            println!(
                "dispatches {} (shortcut {})  cert checks {} failures {}  deviations {}  divergences {} (scripted {})",
                s.dispatches, s.shortcut, s.cert_checks, s.cert_failures, s.deviations, s.divergences, s.scripted_divergences
            );
            println!(
                "wall {:.1}s  mean match {:.3}s  max match {:.3}s",
                report.wall.total_s, report.wall.mean_match_s, report.wall.max_match_s
            );
            if let Some(p) = out {
                write(&p, &report.to_lines())?;
            }
        }
        Cmd::Serve { host, port } => {
            let listener = TcpListener::bind((host.as_str(), port)).with_context(|| format!("binding {host}:{port}"))?;
            println!("listening on {}", listener.local_addr()?);
            serve(listener)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
