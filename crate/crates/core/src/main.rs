use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use graphcode::code::{minimum_distance, GraphCode};
use graphcode::composite::{crt_split, product_code};
use graphcode::error::Error;
use graphcode::families::{build_family, TABLE_ONE};
use graphcode::format::{parse_code, parse_graph, write_graph, write_graph_code, CodeReport, VerificationJson};
use graphcode::limits::{thread_cap_from_env, Limits};
use graphcode::oracle::{kl_verify, KlEngine, KlMode, KlReport};
use graphcode::search::{is_coding_clique, search_cliques, SearchControl, SearchOptions};

#[derive(Parser)]
#[command(name = "graphcode", version, about = "Graph-state codes over Z_p: search, verify, classify")]
struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads (overrides GRAPHCODE_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Direct,
    Spectral,
}

impl From<EngineArg> for KlEngine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Direct => KlEngine::Direct,
            EngineArg::Spectral => KlEngine::Spectral,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Search a graph file for coding cliques through the zero vector.
    Search {
        graph: PathBuf,
        #[arg(short, long)]
        d: usize,
        /// Stop once a clique of this size is found.
        #[arg(long)]
        max_k: Option<usize>,
        /// Report every clique of exactly this size.
        #[arg(long)]
        all: Option<usize>,
        /// Seconds before the search returns its best clique so far.
        #[arg(long)]
        time_limit: Option<u64>,
        /// Also run the exhaustive oracle on each code found.
        #[arg(long)]
        oracle: bool,
    },
    /// Check a code file symbolically and optionally with the oracle.
    Verify {
        code: PathBuf,
        #[arg(long)]
        oracle: bool,
        /// Use this many sampled errors instead of the full sweep.
        #[arg(long)]
        sampled: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "spectral")]
        engine: EngineArg,
    },
    /// Classify a code file and report its stabilizer.
    Classify { code: PathBuf },
    /// Build a catalog family and write it as a code file.
    Family {
        name: String,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild and oracle-check the p = 3 table of codes.
    Table1,
    /// Product of two codes with coprime moduli.
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a graph over Z_pq into graphs over Z_p and Z_q.
    Split {
        graph: PathBuf,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
    },
}

/// Exit status with a message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BoundExceeded { .. } | Error::Cancelled => 3,
            Error::NotCodingClique(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

fn vector_text(v: &[u32]) -> String {
    let parts: Vec<String> = v.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

fn describe(code: &GraphCode) {
    println!("{}", code.summary());
    println!("  stabilizer set size {}, singleton {}", code.stabilizer_size(), code.singleton_check());
    println!("  clique:");
    for c in code.clique() {
        println!("    {}", vector_text(c.entries()));
    }
}

fn oracle_line(r: &KlReport) -> String {
    let verdict = if r.pass { "PASS" } else { "FAIL" };
    let mut s = match r.mode {
        KlMode::Exhaustive => format!("oracle {verdict}: {} errors, exhaustive", r.errors_checked),
        KlMode::Sampled { seed, .. } => format!("oracle {verdict}: {} sampled errors, seed {seed}", r.errors_checked),
    };
    s.push_str(&format!(", max deviation {:.3e}", r.max_deviation));
    if let Some(c) = &r.counterexample {
        s.push_str(&format!(
            "\n  counterexample X^{} Z^{} at entry ({}, {}), deviation {:.3e}",
            vector_text(&c.x),
            vector_text(&c.z),
            c.row,
            c.col,
            c.deviation
        ));
    }
    s
}

fn run(cli: Cli) -> CliResult {
    let limits = Limits::from_env();
    let json = cli.json;
    match cli.command {
        Command::Search { graph, d, max_k, all, time_limit, oracle } => {
            let g = parse_graph(&read(&graph)?)?;
            let control = SearchControl {
                deadline: time_limit.map(|s| Instant::now() + Duration::from_secs(s)),
                ..SearchControl::default()
            };
            let options = SearchOptions { max_k, all_of_size: all, control };
            let result = search_cliques(&g, d, &options, &limits)?;
            let mut reports = Vec::new();
            let mut failed = false;
            for clique in &result.cliques {
                let code = GraphCode::new(g.clone(), clique.clone(), d, &limits)?;
                let verification = if oracle {
                    let r = kl_verify(&g, code.clique(), d, KlMode::Exhaustive, KlEngine::Spectral, &limits)?;
                    failed |= !r.pass;
                    if !json {
                        describe(&code);
                        println!("  {}", oracle_line(&r));
                    }
                    VerificationJson::from_report(&r)
                } else {
                    if !json {
                        describe(&code);
                    }
                    VerificationJson::symbolic(true)
                };
                reports.push(CodeReport::new(&code, verification));
            }
            if json {
                print_json(&reports);
            } else {
                println!(
                    "super graph: {} vertices; {} clique(s) of size {}{}",
                    result.super_graph_vertices,
                    result.cliques.len(),
                    result.outcome.best_size,
                    if result.outcome.interrupted { " (time limit reached)" } else { "" }
                );
            }
            Ok(if failed || result.cliques.is_empty() { 1 } else { 0 })
        }
        Command::Verify { code, oracle, sampled, seed, engine } => {
            let file = parse_code(&read(&code)?)?;
            let check = is_coding_clique(&file.graph, file.d, &file.clique, &limits)?;
            if let Some(v) = &check.violation {
                if json {
                    print_json(&serde_json::json!({
                        "p": file.graph.modulus().get(),
                        "n": file.graph.n(),
                        "d": file.d,
                        "K": file.clique.len(),
                        "verification": VerificationJson::symbolic(false),
                        "violation": v.to_string(),
                    }));
                } else {
                    println!("symbolic FAIL: {v}");
                }
                return Ok(1);
            }
            let code = GraphCode::new(file.graph, file.clique, file.d, &limits)?;
            let report = if oracle || sampled.is_some() {
                let mode = match sampled {
                    Some(count) => KlMode::Sampled { count, seed },
                    None => KlMode::Exhaustive,
                };
                Some(kl_verify(code.graph(), code.clique(), code.d(), mode, engine.into(), &limits)?)
            } else {
                None
            };
            let pass = report.as_ref().is_none_or(|r| r.pass);
            if json {
                let v = report.as_ref().map_or(VerificationJson::symbolic(true), VerificationJson::from_report);
                print_json(&CodeReport::new(&code, v));
            } else {
                println!("symbolic PASS: {}", code.summary());
                println!("  stabilizer set size {}", code.stabilizer_size());
                if let Some(r) = &report {
                    println!("{}", oracle_line(r));
                }
            }
            Ok(if pass { 0 } else { 1 })
        }
        Command::Classify { code } => {
            let file = parse_code(&read(&code)?)?;
            let code = GraphCode::new(file.graph, file.clique, file.d, &limits)?;
            if json {
                print_json(&CodeReport::new(&code, VerificationJson::symbolic(true)));
            } else {
                describe(&code);
                println!("  minimum distance {}", minimum_distance(code.graph(), code.clique(), &limits)?);
                println!("  stabilizer generators:");
                for g in code.stabilizer_generators() {
                    println!("    {}", g.render());
                }
            }
            Ok(0)
        }
        Command::Family { name, p, n, out } => {
            let code = build_family(&name, p, n, &limits)?;
            if let Some(path) = &out {
                write(path, &write_graph_code(&code))?;
            }
            if json {
                print_json(&CodeReport::new(&code, VerificationJson::symbolic(true)));
            } else {
                println!("{}", code.summary());
            }
            Ok(0)
        }
        Command::Table1 => {
            let mut rows = Vec::new();
            let mut all_pass = true;
            for &(name, n, label) in TABLE_ONE {
                let code = build_family(name, Some(3), n, &limits)?;
                let r =
                    kl_verify(code.graph(), code.clique(), code.d(), KlMode::Exhaustive, KlEngine::Spectral, &limits)?;
                let pass = r.pass && code.label() == label;
                all_pass &= pass;
                if !json {
                    println!(
                        "{:<14} {:<12} {:>7} errors  max deviation {:.1e}  {}",
                        code.label(),
                        code.classification().to_string(),
                        r.errors_checked,
                        r.max_deviation,
                        if pass { "PASS" } else { "FAIL" }
                    );
                }
                rows.push(CodeReport::new(&code, VerificationJson::from_report(&r)));
            }
            if json {
                print_json(&rows);
            }
            Ok(if all_pass { 0 } else { 1 })
        }
        Command::Compose { first, second, out } => {
            let load = |path: &Path| -> Result<GraphCode, Failure> {
                let f = parse_code(&read(path)?)?;
                Ok(GraphCode::new(f.graph, f.clique, f.d, &limits)?)
            };
            let code = product_code(&load(&first)?, &load(&second)?, &limits)?;
            if let Some(path) = &out {
                write(path, &write_graph_code(&code))?;
            }
            if json {
                print_json(&CodeReport::new(&code, VerificationJson::symbolic(true)));
            } else {
                describe(&code);
            }
            Ok(0)
        }
        Command::Split { graph, p, q } => {
            let g = parse_graph(&read(&graph)?)?;
            let (gp, gq) = crt_split(&g, p, q)?;
            if json {
                print_json(&serde_json::json!({ "first": write_graph(&gp), "second": write_graph(&gq) }));
            } else {
                print!("{}{}", write_graph(&gp), write_graph(&gq));
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads.or_else(thread_cap_from_env) {
        // Fails only when a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
