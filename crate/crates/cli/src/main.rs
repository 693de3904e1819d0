//! Command-line front end for the read-only-memory approximation library.

mod gen;
mod load;
mod report;
mod solve;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use roapprox::exact::{validate, validate_structure, StructureKind};
use roapprox::instance::parse_id_list;
use serde_json::json;

use gen::{GenKind, GenSpec};
use load::Loaded;
use solve::{Options, Outcome, Problem};

#[derive(Parser, Debug)]
#[command(name = "roapprox", version, about = "Small-workspace approximation algorithms over read-only inputs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, ValueEnum, Default)]
enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Instance file (graph `p`, digraph `q` or family `h` format).
    #[arg(long)]
    input: PathBuf,
    /// vc, is, mis, ds, hs, or a deletion problem such as cluster-vd.
    #[arg(long)]
    problem: String,
    #[arg(long)]
    algorithm: String,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    delta: Option<usize>,
    /// Root for the tree algorithms.
    #[arg(long)]
    root: Option<u32>,
    #[arg(long)]
    compare_exact: bool,
    #[arg(long)]
    check_structure: bool,
    /// Recompute every layer instead of memoizing it.
    #[arg(long)]
    space_audit: bool,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

impl RunArgs {
    fn options(&self) -> Options {
        Options {
            k: self.k,
            epsilon: self.epsilon,
            d: self.d,
            delta: self.delta,
            root: self.root,
            compare_exact: self.compare_exact,
            check_structure: self.check_structure,
            space_audit: self.space_audit,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run an algorithm and report the validated solution.
    Solve(RunArgs),
    /// Kernelize a budgeted instance (vc or hs).
    Kernel {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        problem: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Brute-force optimum of a small instance.
    Exact {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        problem: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check a candidate solution or a structural property.
    Validate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, requires = "candidate")]
        problem: Option<String>,
        /// Comma or space separated ids.
        #[arg(long)]
        candidate: Option<String>,
        /// tree, c4free, degenerate, regular, tournament or functional.
        #[arg(long, conflicts_with = "problem")]
        structure: Option<String>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Print a random instance; trailing `key=value` pairs override the flags.
    Gen {
        kind: String,
        params: Vec<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Solve generated instances for a run of seeds, one JSON line each.
    Bench {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 16)]
        n: usize,
        /// Generator parameter `d` (regular, degenerate, family rank).
        #[arg(long = "gen-d")]
        gen_d: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        runs: u64,
        #[arg(long)]
        problem: String,
        #[arg(long)]
        algorithm: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long)]
        compare_exact: bool,
        #[arg(long)]
        space_audit: bool,
    },
}

/// Exit status for a verdict of NO (or an invalid candidate).
const EXIT_NO: u8 = 2;

fn emit_outcome(out: Outcome, format: Format) -> anyhow::Result<ExitCode> {
    let mut stdout = std::io::stdout().lock();
    match (out, format) {
        (Outcome::Report(r), Format::Json) => writeln!(stdout, "{}", serde_json::to_string(&r)?)?,
        (Outcome::Report(r), Format::Text) => write!(stdout, "{}", r.text())?,
        (Outcome::No(r), Format::Json) => {
            writeln!(stdout, "{}", serde_json::to_string(&r)?)?;
            return Ok(ExitCode::from(EXIT_NO));
        }
        (Outcome::No(r), Format::Text) => {
            write!(stdout, "{}", r.text())?;
            return Ok(ExitCode::from(EXIT_NO));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn structure_kind(name: &str, d: Option<usize>, input: &Loaded) -> anyhow::Result<StructureKind> {
    let need_d = || d.with_context(|| format!("--structure {name} needs --d"));
    Ok(match name {
        "tree" => StructureKind::Tree,
        "c4free" => StructureKind::C4Free,
        "degenerate" => StructureKind::Degenerate(need_d()?),
        "regular" => match d {
            Some(d) => StructureKind::Regular(d),
            None => {
                let g = input.graph()?;
                StructureKind::Regular(if g.n() == 0 { 0 } else { g.degree(1) })
            }
        },
        "tournament" => StructureKind::Tournament,
        "functional" => StructureKind::Functional,
        _ => bail!("unknown structure {name:?}"),
    })
}

fn bench(cmd: Cmd) -> anyhow::Result<ExitCode> {
    let Cmd::Bench { kind, n, gen_d, seed, runs, problem, algorithm, k, epsilon, d, delta, compare_exact, space_audit } =
        cmd
    else {
        unreachable!()
    };
    let kind: GenKind = kind.parse()?;
    let problem: Problem = problem.parse()?;
    let opts = Options { k, epsilon, d, delta, root: None, compare_exact, check_structure: false, space_audit };
    let seeds: Vec<u64> = (seed..seed + runs).collect();
    let workers = std::thread::available_parallelism().map_or(1, |w| w.get()).min(seeds.len().max(1));
    let chunk = seeds.len().div_ceil(workers).max(1);
    let lines: Vec<anyhow::Result<String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .chunks(chunk)
            .map(|part| {
                let (opts, algorithm) = (&opts, &algorithm);
                scope.spawn(move || {
                    part.iter()
                        .map(|&s| {
                            let spec = GenSpec { kind, n, d: gen_d, m: None, delta, p: None, seed: s };
                            let input = spec.generate()?;
                            let line = match solve::solve(problem, algorithm, &input, opts)? {
                                Outcome::Report(mut r) => {
                                    r.params.insert("seed".into(), json!(s));
                                    serde_json::to_string(&r)?
                                }
                                Outcome::No(mut r) => {
                                    r.params.insert("seed".into(), json!(s));
                                    serde_json::to_string(&r)?
                                }
                            };
                            Ok(line)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("bench worker panicked")).collect()
    });
    let mut stdout = std::io::stdout().lock();
    for line in lines {
        writeln!(stdout, "{}", line?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.cmd {
        Cmd::Solve(args) => {
            let problem: Problem = args.problem.parse()?;
            let input = Loaded::read(&args.input)?;
            emit_outcome(solve::solve(problem, &args.algorithm, &input, &args.options())?, args.format)
        }
        Cmd::Kernel { input, problem, k, format } => {
            let problem: Problem = problem.parse()?;
            let input = Loaded::read(&input)?;
            emit_outcome(solve::kernel(problem, &input, k)?, format)
        }
        Cmd::Exact { input, problem, format } => {
            let problem: Problem = problem.parse()?;
            let input = Loaded::read(&input)?;
            emit_outcome(Outcome::Report(solve::exact(problem, &input)?), format)
        }
        Cmd::Validate { input, problem, candidate, structure, d, format } => {
            let input = Loaded::read(&input)?;
            let verdict = match (problem, structure) {
                (Some(p), None) => {
                    let problem: Problem = p.parse()?;
                    let ids = parse_id_list(candidate.as_deref().unwrap_or(""))?;
                    validate(problem.kind(), input.as_instance(), &ids)
                }
                (None, Some(s)) => validate_structure(structure_kind(&s, d, &input)?, input.as_instance()),
                _ => bail!("give either --problem with --candidate, or --structure"),
            };
            let witness = verdict.witness.map(|w| format!("{w:?}"));
            let mut stdout = std::io::stdout().lock();
            match format {
                Format::Json => writeln!(stdout, "{}", json!({ "ok": verdict.ok, "witness": witness }))?,
                Format::Text => match witness {
                    None => writeln!(stdout, "ok")?,
                    Some(w) => writeln!(stdout, "invalid {w}")?,
                },
            }
            Ok(if verdict.ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_NO) })
        }
        Cmd::Gen { kind, params, n, d, m, delta, p, seed } => {
            let mut spec = GenSpec::new(kind.parse()?);
            spec.n = n.unwrap_or(spec.n);
            spec.d = d.or(spec.d);
            spec.m = m.or(spec.m);
            spec.delta = delta.or(spec.delta);
            spec.p = p.or(spec.p);
            spec.seed = seed.unwrap_or(spec.seed);
            for kv in &params {
                spec.set(kv)?;
            }
            print!("{}", spec.generate()?.text());
            Ok(ExitCode::SUCCESS)
        }
        cmd @ Cmd::Bench { .. } => bench(cmd),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
