use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use limqsp::bench::{self, BenchConfig, Family, Status};
use limqsp::circuit::{export_json, export_qasm3, import_json, Circuit};
use limqsp::limtdd::{self, DiagramStore, RootEdge};
use limqsp::sim::{self, DenseState, SIM_MAX_QUBITS};
use limqsp::synth::{self, SynthesisReport};

const VERIFY_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "limqsp", version, about = "LimTDD-based quantum state preparation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a circuit preparing the state (ancilla initialised by a leading X).
    Prepare(SynthArgs),
    /// Synthesize the reduction circuit |1>a|psi> -> |1>a|0...0>.
    Reduce(SynthArgs),
    /// Print diagram statistics and a node dump.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = limqsp::lim::TOL, value_parser = parse_tol)]
        tol: f64,
    },
    /// Simulate a JSON circuit against a statevector and report the fidelity.
    Verify {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Prepare)]
        mode: Mode,
    },
    /// Run the benchmark harness and write CSV.
    Bench(BenchArgs),
    /// Write a statevector file for a named state family.
    Family {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Clifford+T gate count (default 3n^2).
        #[arg(long)]
        gates: Option<usize>,
        /// Basis index for `basis`.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Output path; with `--format both` this is a prefix for .qasm and .json.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Qasm)]
    format: Format,
    #[arg(long)]
    verify: bool,
    #[arg(long, default_value_t = limqsp::lim::TOL, value_parser = parse_tol)]
    tol: f64,
    #[arg(long)]
    tower_opt: bool,
    #[arg(long)]
    fix_global_phase: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// key=value config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    family: Option<Family>,
    /// Qubit count or inclusive range `lo..hi`.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    gates: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    verify_max_n: Option<usize>,
    #[arg(long, value_parser = parse_tol)]
    tol: Option<f64>,
    /// Run instances on one thread.
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Qasm,
    Json,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Prepare,
    Reduce,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    CliffordT,
    Vn,
    Basis,
    Uniform,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if t > 0.0 && t <= 1e-3 {
        Ok(t)
    } else {
        Err(format!("tolerance must be in (0, 1e-3], got {s}"))
    }
}

enum Failure {
    Input(String),
    Verify(String),
}

impl From<limqsp::Error> for Failure {
    fn from(e: limqsp::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_state(path: &Path) -> CliResult<Vec<Complex64>> {
    sim::read_statevector(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn normalized(v: &[Complex64]) -> CliResult<Vec<Complex64>> {
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm.is_nan() || norm <= 0.0 {
        return Err(Failure::Input("state vector is all zero".into()));
    }
    Ok(v.iter().map(|a| a / norm).collect())
}

fn build(v: &[Complex64], tol: f64) -> CliResult<(DiagramStore, RootEdge)> {
    let mut store = DiagramStore::with_tolerance(tol);
    let root = limtdd::from_statevector(&mut store, v, tol)?;
    Ok((store, root))
}

fn stats_line(store: &DiagramStore, root: &RootEdge) -> String {
    format!("nodes={} paths={}", limtdd::node_count(store, root), limtdd::reduced_path_count(store, root))
}

/// Simulates `circuit` and returns `|⟨expected|out⟩|`.
fn check(circuit: &Circuit, psi: &[Complex64], mode: Mode) -> CliResult<f64> {
    let n = psi.len().trailing_zeros() as usize;
    let psi = normalized(psi)?;
    let m = circuit.num_qubits();
    if m > SIM_MAX_QUBITS {
        return Err(Failure::Input(format!("{m} qubits exceed the simulator cap of {SIM_MAX_QUBITS}")));
    }
    let with_anc = match circuit.ancilla() {
        Some(a) if a == n && m == n + 1 => true,
        None if m == n => false,
        _ => {
            return Err(Failure::Input(format!(
                "circuit has {m} qubits (ancilla {:?}) but the state has {n}",
                circuit.ancilla()
            )))
        }
    };
    let target = if with_anc { DenseState::with_ancilla_one(&psi)? } else { DenseState::from_amplitudes(psi)? };
    let reduced = if with_anc { DenseState::basis(m, 1 << n)? } else { DenseState::zero(m)? };
    let f = match mode {
        Mode::Prepare => sim::fidelity(&sim::run(circuit, DenseState::zero(m)?)?, &target)?,
        Mode::Reduce => sim::fidelity(&sim::run(circuit, target)?, &reduced)?,
    };
    Ok(f)
}

fn reduction(store: &DiagramStore, root: &RootEdge, tower: bool) -> CliResult<(Circuit, SynthesisReport)> {
    let (mut circuit, report) = synth::synthesize_reduction(store, root)?;
    if tower {
        match synth::tower_optimization(&circuit, &report) {
            Ok(c) => circuit = c,
            Err(e) => eprintln!("warning: {e}; keeping the ancilla"),
        }
    }
    Ok((circuit, report))
}

fn cmd_synth(args: &SynthArgs, mode: Mode) -> CliResult<()> {
    let psi = read_state(&args.input)?;
    let (store, root) = build(&psi, args.tol)?;
    let (red, report) = reduction(&store, &root, args.tower_opt)?;
    let circuit = match mode {
        Mode::Reduce => red.without_unused_ancilla(),
        Mode::Prepare => {
            synth::preparation_from(&red, &report, args.fix_global_phase).without_unused_ancilla().with_ancilla_init()
        }
    };

    eprintln!(
        "{} qubits={} gates={} arity={}",
        stats_line(&store, &root),
        root.num_qubits,
        circuit.len(),
        circuit.stats()
    );
    match (args.format, &args.out) {
        (Format::Both, None) => return Err(Failure::Input("--format both needs --out".into())),
        (Format::Both, Some(prefix)) => {
            write_or_print(Some(&prefix.with_extension("qasm")), &export_qasm3(&circuit))?;
            write_or_print(Some(&prefix.with_extension("json")), &export_json(&circuit))?;
        }
        (Format::Qasm, out) => write_or_print(out.as_deref(), &export_qasm3(&circuit))?,
        (Format::Json, out) => write_or_print(out.as_deref(), &export_json(&circuit))?,
    }

    if args.verify {
        let f = check(&circuit, &psi, mode)?;
        eprintln!("fidelity={f:.12}");
        if f < 1.0 - VERIFY_TOL {
            return Err(Failure::Verify(format!("fidelity {f} below 1 - {VERIFY_TOL:e}")));
        }
    }
    Ok(())
}

fn cmd_stats(input: &Path, tol: f64) -> CliResult<()> {
    let psi = read_state(input)?;
    let (store, root) = build(&psi, tol)?;
    println!("{} qubits={}", stats_line(&store, &root), root.num_qubits);
    print!("{}", limtdd::dump(&store, &root));
    Ok(())
}

fn cmd_verify(circuit: &Path, input: &Path, mode: Mode) -> CliResult<()> {
    let c = import_json(&read(circuit)?).map_err(|e| Failure::Input(format!("{}: {e}", circuit.display())))?;
    let psi = read_state(input)?;
    let f = check(&c, &psi, mode)?;
    println!("fidelity={f:.12}");
    if f < 1.0 - VERIFY_TOL {
        return Err(Failure::Verify(format!("fidelity {f} below 1 - {VERIFY_TOL:e}")));
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> CliResult<()> {
    let mut cfg = match &args.config {
        Some(p) => BenchConfig::parse(&read(p)?).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        None => BenchConfig::default(),
    };
    let overrides = [
        ("family", args.family.map(|f| if f == Family::Vn { "vn".to_string() } else { "clifford-t".to_string() })),
        ("n", args.n.clone()),
        ("instances", args.instances.map(|v| v.to_string())),
        ("gates", args.gates.map(|v| v.to_string())),
        ("seed", args.seed.map(|v| v.to_string())),
        ("verify_max_n", args.verify_max_n.map(|v| v.to_string())),
        ("tol", args.tol.map(|v| v.to_string())),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, &v).map_err(Failure::Input)?;
        }
    }
    if args.sequential {
        cfg.parallel = false;
    }
    let records = bench::run_suite(&cfg)?;
    write_or_print(args.out.as_deref(), &bench::to_csv(&records))?;
    let failed = records.iter().filter(|r| r.status == Status::Failed).count();
    if failed > 0 {
        return Err(Failure::Verify(format!("{failed} benchmark record(s) FAILED")));
    }
    Ok(())
}

fn cmd_family(
    kind: Kind,
    n: usize,
    seed: u64,
    gates: Option<usize>,
    index: usize,
    out: Option<&Path>,
) -> CliResult<()> {
    if n == 0 || n > SIM_MAX_QUBITS {
        return Err(Failure::Input(format!("n must be in 1..={SIM_MAX_QUBITS}")));
    }
    let v = match kind {
        Kind::CliffordT => bench::random_clifford_t_state(n, gates.unwrap_or(3 * n * n), seed),
        Kind::Vn => bench::vn_family_state(n),
        Kind::Basis => DenseState::basis(n, index)?.into_amplitudes(),
        Kind::Uniform => vec![Complex64::new(1.0 / ((1usize << n) as f64).sqrt(), 0.0); 1 << n],
    };
    write_or_print(out, &sim::write_statevector(&v)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Prepare(a) => cmd_synth(a, Mode::Prepare),
        Command::Reduce(a) => cmd_synth(a, Mode::Reduce),
        Command::Stats { input, tol } => cmd_stats(input, *tol),
        Command::Verify { circuit, input, mode } => cmd_verify(circuit, input, *mode),
        Command::Bench(a) => cmd_bench(a),
        Command::Family { kind, n, seed, gates, index, out } => {
            cmd_family(*kind, *n, *seed, *gates, *index, out.as_deref())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(3)
        }
    }
}
