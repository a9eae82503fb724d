use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use cpref::cli::{execute, EngineChoice, Mode, RunConfig};
use cpref_core::Limits;

/// Dominance, consistency, subsumption and equivalence queries over
/// CP-nets, TCP-nets and CP-theories, with proofs.
#[derive(Parser, Debug)]
#[command(name = "cpref", version)]
struct Args {
    /// Preference specification (XML). Overrides the query's SPEC-FILE.
    #[arg(long)]
    spec: Option<PathBuf>,

    /// Second specification, for subsumption and equivalence.
    #[arg(long, requires = "spec")]
    spec2: Option<PathBuf>,

    /// Query file (XML) to run in batch mode.
    #[arg(long, conflicts_with = "interactive")]
    query: Option<PathBuf>,

    /// Menu-driven console session over --spec (and --spec2).
    #[arg(long, requires = "spec")]
    interactive: bool,

    #[arg(long, value_enum, default_value_t = EngineChoice::Symbolic)]
    engine: EngineChoice,

    /// Output file; standard output by default.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Write the SMV model (plus the query's CTL properties) instead of answering.
    #[arg(long, conflicts_with_all = ["interactive", "dump_ipg"])]
    emit_smv: bool,

    /// External SMV checker used to cross-check batch answers.
    #[arg(long)]
    checker: Option<PathBuf>,

    /// Node cap of the decision diagram manager.
    #[arg(long)]
    node_budget: Option<usize>,

    /// Largest outcome space the explicit engine will build.
    #[arg(long)]
    node_limit: Option<u128>,

    /// Write ELAPSED-MS="0.000" so reruns produce identical files.
    #[arg(long)]
    no_timing: bool,

    /// Print every edge of the induced preference graph of --spec.
    #[arg(long, requires = "spec", conflicts_with_all = ["interactive", "query"])]
    dump_ipg: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mode = if args.interactive {
        Mode::Interactive
    } else if args.emit_smv {
        Mode::EmitSmv
    } else if args.dump_ipg {
        Mode::DumpIpg
    } else {
        Mode::Batch
    };
    if mode == Mode::Batch && args.query.is_none() {
        eprintln!("error: one of --query, --interactive, --emit-smv or --dump-ipg is required");
        return ExitCode::from(2);
    }
    let defaults = Limits::default();
    let config = RunConfig {
        specs: args.spec.into_iter().chain(args.spec2).collect(),
        query: args.query,
        mode,
        engine: args.engine,
        out: args.out,
        checker: args.checker,
        limits: Limits {
            node_budget: args.node_budget.unwrap_or(defaults.node_budget),
            node_limit: args.node_limit.unwrap_or(defaults.node_limit),
        },
        timing: !args.no_timing,
    };
    let stdin = std::io::stdin();
    let code = execute(&config, stdin.lock(), &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(code as u8)
}
