use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use polyrecon::deck_mod::{self, Theorem5Verdict};
use polyrecon::graph::parse_graph;
use polyrecon::reconstruct::{self, ReconstructionOutcome};
use polyrecon::symm::complement_charpoly_mod4;
use polyrecon::{charpoly, deck, io as pio, oracle, walks, Modular, Poly};

/// Characteristic polynomials from polynomial decks.
///
/// Graphs are graph6 strings or edge-list files (`n m`, then `u v` lines).
/// Every command prints JSON; coefficients are decimal strings, leading
/// coefficient first. Exit status: 0 success, 1 error, 2 a "rank too low" or
/// "not applicable" verdict, 3 a failed verification sweep.
#[derive(Parser, Debug)]
#[command(name = "polyrecon", version)]
struct Cli {
    /// Indent the JSON output
    #[arg(long, global = true)]
    pretty: bool,

    /// Write the output here instead of standard output ("-" is stdout)
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characteristic polynomial of a graph
    Charpoly {
        /// graph6 string, or a path to an edge-list file
        graph: String,
        /// Reduce the coefficients to residues modulo M
        #[arg(long = "mod", value_name = "M")]
        modulus: Option<u64>,
    },
    /// Polynomial deck of a graph
    Deck {
        graph: String,
        /// Also emit the complement cards
        #[arg(long)]
        generalized: bool,
        /// Keep only the top S coefficients of each complement card
        #[arg(long, value_name = "S", requires = "generalized")]
        truncate_co: Option<usize>,
        #[arg(long = "mod", value_name = "M")]
        modulus: Option<u64>,
    },
    /// Recover (φ^G, φ^Ḡ) from a generalized deck
    Reconstruct {
        #[arg(long, value_name = "FILE")]
        deck: String,
        /// Coefficients used from each complement card
        #[arg(long, requires = "t", conflicts_with = "controllable")]
        s: Option<usize>,
        /// Coefficients used from each card
        #[arg(long, requires = "s")]
        t: Option<usize>,
        /// Use the shorter truncation that suffices for graphs with a
        /// large enough walk matrix rank
        #[arg(long)]
        controllable: bool,
    },
    /// Recover (φ^G, φ^Ḡ) of a C4-free graph with walk rank ≤ 2 from its
    /// plain deck
    ReconstructC4free {
        #[arg(long, value_name = "FILE")]
        deck: String,
    },
    /// φ^Ḡ (mod 4) from φ^G (mod 4)
    ComplementMod4 {
        #[arg(long, value_name = "FILE")]
        poly: String,
        /// Number of vertices (the polynomial must have n + 1 coefficients)
        #[arg(long)]
        n: usize,
    },
    /// Everything the plain deck determines modulo 2 and 4
    DeckMod {
        #[arg(long, value_name = "FILE")]
        deck: String,
    },
    /// Rank of the walk matrix
    WalkRank {
        graph: String,
        /// Rank over F2 instead of Q
        #[arg(long)]
        mod2: bool,
    },
    /// Check the invariant suite on every graph of order 3..=n-max
    Verify {
        #[arg(long)]
        n_max: usize,
        /// Comma-separated check names, or "all"
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long)]
        jobs: Option<usize>,
        /// Include per-check wall-clock timing (makes the output
        /// nondeterministic)
        #[arg(long)]
        timing: bool,
    },
    /// Group the graphs of order n by polynomial deck
    Collisions {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading standard input")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

/// A positional graph argument: an existing file is read as an edge list
/// (or graph6), anything else is taken literally.
fn read_graph(arg: &str) -> Result<polyrecon::Graph> {
    let text = if arg == "-" || std::path::Path::new(arg).is_file() { read_input(arg)? } else { arg.to_string() };
    Ok(parse_graph(&text)?)
}

fn coeffs_mod(coeffs: &[BigInt], m: Option<u64>) -> Result<Vec<String>> {
    match m {
        None => Ok(pio::coeff_strings(coeffs)),
        Some(m) if m < 2 => bail!("modulus must be at least 2, got {m}"),
        Some(m) => {
            let z = Modular::new(m);
            Ok(coeffs.iter().map(|c| z.reduce(c).to_string()).collect())
        }
    }
}

fn verdict_status(o: &ReconstructionOutcome) -> u8 {
    if o.is_success() {
        0
    } else {
        2
    }
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        b = b.num_threads(j.max(1));
    }
    Ok(b.build()?)
}

fn run(cmd: Command) -> Result<(Value, u8)> {
    Ok(match cmd {
        Command::Charpoly { graph, modulus } => {
            let g = read_graph(&graph)?;
            (json!({ "phi": coeffs_mod(charpoly(&g).coeffs(), modulus)? }), 0)
        }
        Command::Deck { graph, generalized, truncate_co, modulus } => {
            let g = read_graph(&graph)?;
            let d = deck(&g, generalized, truncate_co)?;
            let v = match modulus {
                Some(m) => pio::reduced_deck_to_json(&d, m)?,
                None => pio::deck_to_json(&d),
            };
            (v, 0)
        }
        Command::Reconstruct { deck, s, t, controllable } => {
            let d = pio::deck_from_json(&read_input(&deck)?)?;
            let o = match (s, t) {
                (Some(s), Some(t)) => reconstruct::reconstruct_general(&d, s, t)?,
                _ if controllable => reconstruct::reconstruct_controllable(&d)?,
                _ => reconstruct::reconstruct_full(&d)?,
            };
            (pio::outcome_to_json(&o), verdict_status(&o))
        }
        Command::ReconstructC4free { deck } => {
            let d = pio::deck_from_json(&read_input(&deck)?)?;
            let o = reconstruct::reconstruct_c4free_lowrank(&d)?;
            (pio::outcome_to_json(&o), verdict_status(&o))
        }
        Command::ComplementMod4 { poly, n } => {
            let coeffs = pio::poly_from_json(&read_input(&poly)?)?;
            if coeffs.len() != n + 1 {
                bail!("expected {} coefficients for n = {n}, got {}", n + 1, coeffs.len());
            }
            let z4 = Modular::new(4u64);
            let phi = Poly::new(z4.clone(), coeffs.iter().map(|c| z4.reduce(c)).collect());
            let phibar = complement_charpoly_mod4(&phi)?;
            (json!({ "phibar_mod4": pio::coeff_strings(phibar.coeffs()) }), 0)
        }
        Command::DeckMod { deck } => {
            let d = pio::deck_from_json(&read_input(&deck)?)?;
            let r = deck_mod::deck_mod_report(&d)?;
            let status = if matches!(r.theorem5, Theorem5Verdict::NotApplicable) { 2 } else { 0 };
            (pio::deck_mod_to_json(&r), status)
        }
        Command::WalkRank { graph, mod2 } => {
            let w = walks::walk_matrix(&read_graph(&graph)?);
            let rank = if mod2 { w.rank_f2() } else { w.rank_q() };
            (json!({ "rank": rank, "field": if mod2 { "F2" } else { "Q" } }), 0)
        }
        Command::Verify { n_max, checks, jobs, timing } => {
            let names = oracle::resolve_checks(&checks)?;
            let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let report = oracle::verify_sweep(n_max, &names, jobs)?;
            let status = if report.passed() { 0 } else { 3 };
            let mut v = serde_json::to_value(&report)?;
            if !timing {
                v.as_object_mut().expect("struct").remove("timing");
            }
            v["passed"] = json!(report.passed());
            (v, status)
        }
        Command::Collisions { n, jobs } => {
            let report = pool(jobs)?.install(|| oracle::deck_collision_search(n))?;
            let status = if report.findings.is_empty() { 0 } else { 3 };
            (serde_json::to_value(&report)?, status)
        }
    })
}

fn emit(v: &Value, pretty: bool, out: Option<&PathBuf>) -> Result<()> {
    let mut text = if pretty { serde_json::to_string_pretty(v)? } else { serde_json::to_string(v)? };
    text.push('\n');
    match out {
        Some(p) if p.as_os_str() != "-" => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        _ => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            println!("{}", pio::error_json(first));
            return ExitCode::from(1);
        }
    };
    let pretty = cli.pretty;
    let out = cli.out.clone();
    match run(cli.command).and_then(|(v, status)| emit(&v, pretty, out.as_ref()).map(|_| status)) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            println!("{}", pio::error_json(&format!("{e:#}")));
            ExitCode::from(1)
        }
    }
}
