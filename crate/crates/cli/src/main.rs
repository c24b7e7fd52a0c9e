//! `cgkit` command-line tool.
//!
//! Exit codes: 0 on success (for `separate`, cuts were found), 1 when
//! `separate` finds no cut, 2 on any error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cgkit::bk::{BkParams, PivotRule};
use cgkit::cgraph::{ConflictGraph, DEFAULT_MIN_CLQ_SIZE};
use cgkit::model::{parse_mps, read_point, write_mps, FractionalPoint, Literal, MilpInstance};
use cgkit::oracle::{enum_feasible, probe_pairs};
use cgkit::presolve::{strengthen, DEFAULT_ALPHA_MAX};
use cgkit::sep_clique::{cut_to_row, separate_cliques, DEFAULT_MIN_VIOL};
use cgkit::sep_oddcycle::{oddwheel_to_row, separate_odd_cycles};

#[derive(Parser)]
#[command(name = "cgkit", version, about = "Conflict graphs, clique strengthening and cut separation for binary MILPs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Model size and conflict graph statistics.
    Stats {
        model: PathBuf,
        #[command(flatten)]
        graph: GraphOpts,
    },
    /// Extend set-packing rows to larger cliques and drop dominated rows.
    Strengthen {
        model: PathBuf,
        #[command(flatten)]
        graph: GraphOpts,
        #[arg(long, default_value_t = DEFAULT_ALPHA_MAX)]
        alpha_max: usize,
        /// Write the strengthened model here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Separate cuts violated by a point.
    Separate {
        kind: CutKind,
        model: PathBuf,
        /// Lines of `name value [reduced_cost]`.
        point: PathBuf,
        #[command(flatten)]
        graph: GraphOpts,
        #[command(flatten)]
        sep: SepOpts,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force reference computations for small models.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Print the stored cliques, tuples and adjacency lists.
    Dump {
        model: PathBuf,
        #[command(flatten)]
        graph: GraphOpts,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Conflicts found by probing every pair of variables in every row.
    Probe { model: PathBuf },
    /// All feasible 0/1 points (at most 20 variables).
    Feasible { model: PathBuf },
}

#[derive(Args)]
struct GraphOpts {
    /// Cliques up to this size are stored as pairwise edges.
    #[arg(long, default_value_t = DEFAULT_MIN_CLQ_SIZE)]
    min_clq_size: usize,
}

#[derive(Args)]
struct SepOpts {
    #[arg(long, default_value_t = DEFAULT_MIN_VIOL)]
    min_viol: f64,
    /// Recursive call budget of the clique enumeration.
    #[arg(long, default_value_t = cgkit::bk::DEFAULT_MAX_CALLS)]
    max_calls: u64,
    /// One of rnd, deg, wgt, mdg, mwt.
    #[arg(long, default_value = "wgt", value_parser = parse_pivot)]
    pivot: PivotRule,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum CutKind {
    Clique,
    Oddcycle,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    /// `name: row # violation=v`
    Text,
    /// One whitespace-separated record per cut.
    Lines,
}

fn parse_pivot(s: &str) -> Result<PivotRule, String> {
    s.parse()
}

fn load_model(path: &Path) -> Result<MilpInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_mps(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_point(path: &Path, inst: &MilpInstance) -> Result<FractionalPoint> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_point(&text, inst).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Rounds away float noise below 1e-9 for printing.
fn num(v: f64) -> f64 {
    let r = (v * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn names(inst: &MilpInstance, g: &ConflictGraph, nodes: &[usize]) -> Vec<String> {
    nodes.iter().map(|&u| inst.literal_name(g.literal(u))).collect()
}

fn stats(model: &Path, graph: &GraphOpts) -> Result<()> {
    let inst = load_model(model)?;
    let t = Instant::now();
    let g = ConflictGraph::build(&inst, graph.min_clq_size);
    let took = t.elapsed();
    let s = g.stats();
    let mut out = String::new();
    writeln!(out, "variables: {}", inst.n_vars())?;
    writeln!(out, "binaries: {}", inst.n_binary())?;
    writeln!(out, "rows: {}", inst.rows.len())?;
    writeln!(out, "nonzeros: {}", inst.nonzeros())?;
    writeln!(out, "graph nodes: {}", g.n_nodes())?;
    writeln!(out, "graph edges: {}", g.edges().len())?;
    writeln!(out, "rows used: {}", s.rows_used)?;
    writeln!(out, "rows skipped: {}", s.rows_skipped)?;
    writeln!(out, "cliques detected: {}", s.detected())?;
    writeln!(out, "cliques stored: {}", g.store().first().len())?;
    writeln!(out, "tuples stored: {}", g.store().addtl().len())?;
    writeln!(out, "pairwise entries: {}", g.adjlist_entries())?;
    writeln!(out, "memory bytes: {}", g.memory_bytes())?;
    print!("{out}");
    // timing varies between runs, so it stays off stdout
    eprintln!("build time: {:.3} ms", took.as_secs_f64() * 1e3);
    Ok(())
}

fn strengthen_cmd(model: &Path, graph: &GraphOpts, alpha_max: usize, out: Option<&Path>) -> Result<()> {
    let inst = load_model(model)?;
    let g = ConflictGraph::build(&inst, graph.min_clq_size);
    let rep = strengthen(&inst, &g, alpha_max);
    emit(out, &write_mps(&rep.instance))?;
    eprintln!("rows removed: {}", rep.removed_rows.len());
    eprintln!("rows extended: {}", rep.extended.len());
    eprintln!("literals added: {}", rep.literals_added());
    Ok(())
}

fn separate(
    kind: CutKind,
    model: &Path,
    point: &Path,
    graph: &GraphOpts,
    sep: &SepOpts,
    format: Format,
    out: Option<&Path>,
) -> Result<bool> {
    let inst = load_model(model)?;
    let p = load_point(point, &inst)?;
    let g = ConflictGraph::build(&inst, graph.min_clq_size);
    let n = inst.n_vars();
    let mut text = String::new();
    let found = match kind {
        CutKind::Clique => {
            let params = BkParams {
                min_weight: 0.0,
                max_calls: sep.max_calls.max(1),
                pivot_rule: sep.pivot,
                rng_seed: sep.seed,
                weight_pruning: true,
            };
            let res = separate_cliques(&g, &p, sep.min_viol, &params);
            for (i, cut) in res.cuts.iter().enumerate() {
                let v = num(cut.violation);
                if format == Format::Lines {
                    writeln!(text, "clique {v} {}", names(&inst, &g, &cut.members).join(" "))?;
                } else {
                    let row = cut_to_row(cut, n, format!("clq{}", i + 1));
                    writeln!(text, "{} # violation={v}", row.to_text(&inst))?;
                }
            }
            if !res.exact {
                eprintln!("clique enumeration stopped after {} calls", res.bk_calls);
            }
            res.cuts.len()
        }
        CutKind::Oddcycle => {
            let res = separate_odd_cycles(&g, &p);
            for (i, cut) in res.cuts.iter().enumerate() {
                let v = num(cut.violation);
                let center = names(&inst, &g, &cut.center);
                if format == Format::Lines {
                    let cycle = names(&inst, &g, &cut.cycle).join(" ");
                    writeln!(text, "oddcycle {v} cycle {cycle} center {}", center.join(" "))?;
                } else {
                    let row = oddwheel_to_row(cut, n, format!("oc{}", i + 1));
                    write!(text, "{} # violation={v}", row.to_text(&inst))?;
                    if !center.is_empty() {
                        write!(text, " center={}", center.join(","))?;
                    }
                    writeln!(text)?;
                }
            }
            if res.clamped > 0 {
                eprintln!("{} auxiliary edge weights clamped at zero", res.clamped);
            }
            res.cuts.len()
        }
    };
    emit(out, &text)?;
    Ok(found > 0)
}

fn oracle(cmd: &OracleCommand) -> Result<()> {
    match cmd {
        OracleCommand::Probe { model } => {
            let inst = load_model(model)?;
            let n = inst.n_vars();
            let name = |u: usize| inst.literal_name(Literal::from_node(u, n));
            let res = probe_pairs(&inst);
            let mut out = String::new();
            for &(u, v) in &res.edges {
                writeln!(out, "{} {}", name(u), name(v))?;
            }
            print!("{out}");
        }
        OracleCommand::Feasible { model } => {
            let inst = load_model(model)?;
            let points = enum_feasible(&inst)?;
            let mut out = String::new();
            let header: Vec<&str> = inst.variables.iter().map(|v| v.name.as_str()).collect();
            writeln!(out, "# {}", header.join(" "))?;
            for m in &points {
                let bits: String = (0..inst.n_vars()).map(|j| if m >> j & 1 == 1 { '1' } else { '0' }).collect();
                writeln!(out, "{bits}")?;
            }
            writeln!(out, "# {} feasible", points.len())?;
            print!("{out}");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Stats { model, graph } => stats(&model, &graph)?,
        Command::Strengthen { model, graph, alpha_max, out } => {
            strengthen_cmd(&model, &graph, alpha_max, out.as_deref())?
        }
        Command::Separate { kind, model, point, graph, sep, format, out } => {
            let found = separate(kind, &model, &point, &graph, &sep, format, out.as_deref())?;
            return Ok(ExitCode::from(if found { 0 } else { 1 }));
        }
        Command::Oracle { command } => oracle(&command)?,
        Command::Dump { model, graph, out } => {
            let inst = load_model(&model)?;
            let g = ConflictGraph::build(&inst, graph.min_clq_size);
            emit(out.as_deref(), &g.dump(&inst))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
