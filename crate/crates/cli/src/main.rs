//! `toric-graph`: build the toric graph, emit preparation circuits, and run
//! the verification suites.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or runtime error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use toric_graph::circuit::synth::{encoder_stages, synth_half_with, synth_star, synth_toric_with, HalfSchedule};
use toric_graph::circuit::Circuit;
use toric_graph::lattice::build_toric_tableau;
use toric_graph::sim::MAX_QUBITS;
use toric_graph::standard_form::{closed_form_adjacency, decompose_adjacency, reduce_to_graph_with, vertex_labels};
use toric_graph::verify::{verify_distance, verify_encode, verify_pipeline, verify_state, Corruption, Report};
use toric_graph::LatticeParams;

#[derive(Parser)]
#[command(name = "toric-graph", version, about = "Toric code graph states and their log-depth circuits")]
struct Cli {
    /// Also write every output into this directory.
    #[arg(long, global = true, env = "TORIC_OUT_DIR")]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// The toric graph adjacency and its star/half layers.
    Graph {
        #[arg(long = "L", value_parser = clap::value_parser!(u32).range(2..=256))]
        l: u32,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
    },
    /// A preparation circuit.
    Circuit {
        #[command(subcommand)]
        kind: CircuitKind,
    },
    /// Run verification suites and print a JSON report.
    Verify(VerifyArgs),
    /// The stabilizer tableau at a stage of the reduction.
    Tableau {
        #[arg(long = "L", value_parser = clap::value_parser!(u32).range(2..=64))]
        l: u32,
        /// Stage name; `list` prints the available names.
        #[arg(long, default_value = "toric")]
        stage: String,
        #[arg(long, value_enum, default_value_t = TableauFormat::Text)]
        format: TableauFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableauFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CircuitFormat {
    Json,
    Qasm,
    Report,
    ReportJson,
}

#[derive(Clone, Copy, ValueEnum)]
enum Schedule {
    Reuse,
    Independent,
}

impl From<Schedule> for HalfSchedule {
    fn from(s: Schedule) -> Self {
        match s {
            Schedule::Reuse => HalfSchedule::Reuse,
            Schedule::Independent => HalfSchedule::Independent,
        }
    }
}

#[derive(Args)]
struct CircuitOpts {
    #[arg(long, value_enum, default_value_t = CircuitFormat::Json)]
    format: CircuitFormat,
    /// Half-graph level schedule.
    #[arg(long, value_enum, default_value_t = Schedule::Reuse)]
    schedule: Schedule,
}

#[derive(Subcommand)]
enum CircuitKind {
    /// Star graph on m qubits, center last.
    Star {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=4096))]
        m: u32,
        #[command(flatten)]
        opts: CircuitOpts,
    },
    /// Half graph on 2n qubits.
    Half {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4096))]
        n: u32,
        #[command(flatten)]
        opts: CircuitOpts,
    },
    /// Toric graph state on 2L² qubits.
    Toric {
        #[arg(long = "L", value_parser = clap::value_parser!(u32).range(2..=128))]
        l: u32,
        #[command(flatten)]
        opts: CircuitOpts,
    },
    /// Encoder of a two-qubit state into the toric graph code.
    Encoder {
        #[arg(long = "L", value_parser = clap::value_parser!(u32).range(2..=128))]
        l: u32,
        #[command(flatten)]
        opts: CircuitOpts,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scope {
    Pipeline,
    State,
    Distance,
    Encode,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Scope::All)]
    scope: Scope,
    /// Lattice side for the pipeline, state and encode suites.
    #[arg(long = "L", default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..=64))]
    l: u32,
    /// Copies (and GHZ size) for the distance suite.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..=4))]
    m: u32,
    /// Seed for the random encoder inputs.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of random encoder inputs.
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Test hook: toggle adjacency edge `U,V` before checking.
    #[arg(long, value_name = "U,V", value_parser = parse_edge, hide = true)]
    corrupt_edge: Option<(usize, usize)>,
}

fn parse_edge(s: &str) -> Result<(usize, usize), String> {
    let (u, v) = s.split_once(',').ok_or("expected U,V")?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(u)?, parse(v)?))
}

/// A failure that maps to exit code 2.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

struct Output {
    out_dir: Option<PathBuf>,
}

impl Output {
    fn write(&self, name: &str, contents: &str) -> Result<(), Fatal> {
        if let Some(dir) = &self.out_dir {
            fs::create_dir_all(dir).map_err(|e| Fatal(format!("{}: {e}", dir.display())))?;
            let path: PathBuf = Path::new(dir).join(name);
            fs::write(&path, contents).map_err(|e| Fatal(format!("{}: {e}", path.display())))?;
        }
        Ok(())
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn edges_json(a: &toric_graph::graph::Adjacency) -> Value {
    json!(a.edges().into_iter().map(|(u, v)| [u, v]).collect::<Vec<_>>())
}

fn cmd_graph(l: u32, format: GraphFormat, out: &Output) -> Result<String, Fatal> {
    let p = LatticeParams::new(l as usize)?;
    let a = closed_form_adjacency(p);
    let d = decompose_adjacency(&a, p)?;
    let json = json!({
        "L": l,
        "n": a.n(),
        "labels": vertex_labels(p),
        "edges": edges_json(&a),
        "layers": {
            "mstar": edges_json(&d.mstar),
            "mhalf1": edges_json(&d.mhalf1),
            "mhalf2": edges_json(&d.mhalf2),
        },
    });
    let labels = vertex_labels(p);
    let dot = d.to_dot(p);
    out.write(&format!("graph_L{l}.dot"), &dot)?;
    out.write(&format!("graph_L{l}.json"), &pretty(&json))?;
    for (name, layer) in d.layers() {
        out.write(&format!("graph_L{l}_{name}.dot"), &layer.to_dot(name, Some(&labels)))?;
        out.write(&format!("graph_L{l}_{name}.json"), &pretty(&layer.to_json()))?;
    }
    Ok(match format {
        GraphFormat::Dot => dot,
        GraphFormat::Json => pretty(&json),
    })
}

fn emit_circuit(stem: &str, c: &Circuit, format: CircuitFormat, out: &Output) -> Result<String, Fatal> {
    let json = pretty(&c.to_json());
    let qasm = c.to_qasm();
    let report = c.depth_report();
    let report_json = pretty(&serde_json::to_value(&report)?);
    out.write(&format!("{stem}.json"), &json)?;
    out.write(&format!("{stem}.qasm"), &qasm)?;
    out.write(&format!("{stem}.report.txt"), &report.to_string())?;
    out.write(&format!("{stem}.report.json"), &report_json)?;
    Ok(match format {
        CircuitFormat::Json => json,
        CircuitFormat::Qasm => qasm,
        CircuitFormat::Report => report.to_string(),
        CircuitFormat::ReportJson => report_json,
    })
}

fn cmd_circuit(kind: CircuitKind, out: &Output) -> Result<String, Fatal> {
    let (stem, c, opts) = match kind {
        CircuitKind::Star { m, opts } => (format!("star_m{m}"), synth_star(m as usize)?, opts),
        CircuitKind::Half { n, opts } => {
            (format!("half_n{n}"), synth_half_with(n as usize, opts.schedule.into())?, opts)
        }
        CircuitKind::Toric { l, opts } => {
            let p = LatticeParams::new(l as usize)?;
            (format!("toric_L{l}"), synth_toric_with(p, opts.schedule.into())?, opts)
        }
        CircuitKind::Encoder { l, opts } => {
            let p = LatticeParams::new(l as usize)?;
            (format!("encoder_L{l}"), encoder_stages(p)?.full(), opts)
        }
    };
    emit_circuit(&stem, &c, opts.format, out)
}

fn cmd_tableau(l: u32, stage: &str, format: TableauFormat) -> Result<String, Fatal> {
    let p = LatticeParams::new(l as usize)?;
    let (_, trace) = reduce_to_graph_with(p, true)?;
    if stage == "list" {
        return Ok(trace.stages.iter().map(|(s, _)| format!("{s}\n")).collect());
    }
    let t = if stage == "toric" {
        build_toric_tableau(p)
    } else {
        trace
            .stages
            .into_iter()
            .find(|(s, _)| *s == stage)
            .map(|(_, t)| t)
            .ok_or_else(|| Fatal(format!("unknown stage {stage:?}; try --stage list")))?
    };
    Ok(match format {
        TableauFormat::Text => t.to_text(),
        TableauFormat::Json => pretty(&t.to_json()),
    })
}

fn cmd_verify(args: &VerifyArgs, out: &Output) -> Result<(String, bool), Fatal> {
    let p = LatticeParams::new(args.l as usize)?;
    let corrupt = Corruption { flip_edge: args.corrupt_edge };
    let simulated = matches!(args.scope, Scope::State | Scope::Encode | Scope::All);
    if simulated && p.n_qubits() > MAX_QUBITS {
        return Err(Fatal(format!("L={} needs {} qubits; simulation is capped at {MAX_QUBITS}", args.l, p.n_qubits())));
    }
    let mut report = Report::default();
    let scope = args.scope;
    if matches!(scope, Scope::Pipeline | Scope::All) {
        report.extend(verify_pipeline(p, corrupt)?);
    }
    if matches!(scope, Scope::State | Scope::All) {
        report.extend(verify_state(p, corrupt)?);
    }
    if matches!(scope, Scope::Distance | Scope::All) {
        report.extend(verify_distance(args.m as usize)?);
    }
    if matches!(scope, Scope::Encode | Scope::All) {
        report.extend(verify_encode(p, args.seed, args.trials)?);
    }
    let text = pretty(&report.to_json());
    out.write("verify.json", &text)?;
    for f in report.failures() {
        eprintln!("FAILED {}: {}", f.check, f.witness);
    }
    Ok((text, report.all_passed()))
}

fn run(cli: Cli) -> Result<bool, Fatal> {
    let out = Output { out_dir: cli.out_dir };
    let (text, ok) = match cli.command {
        Command::Graph { l, format } => (cmd_graph(l, format, &out)?, true),
        Command::Circuit { kind } => (cmd_circuit(kind, &out)?, true),
        Command::Tableau { l, stage, format } => (cmd_tableau(l, &stage, format)?, true),
        Command::Verify(args) => cmd_verify(&args, &out)?,
    };
    print!("{text}");
    Ok(ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
