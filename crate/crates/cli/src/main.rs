use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fuzzycc_core::io::{
    parse_cnf, parse_dimacs_graph, parse_instance, parse_multicut, serialize_clustering, serialize_instance,
    serialize_multicut, serialize_trace,
};
use fuzzycc_core::verify::{check_pipeline, check_rules, VerifyConfig};
use fuzzycc_core::{
    clique_to_cc_star, generate, instance_stats, kernelize, multicut_to_cc, optimal_clustering, sat3_to_tree_multicut,
    subdivide_real_edges, tree_multicut_to_cc, GenSpec, Mode, SolverLimits, Verdict,
};

const EXIT_NO: u8 = 2;
const EXIT_CAPABILITY: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_INTERNAL: u8 = 70;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(name = "fuzzycc", version, about = "Kernelization and exact solving for fuzzy correlation clustering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a kernel and write the reduced instance.
    Kernelize(KernelizeArgs),
    /// Solve an instance exactly and compare the optimum with its budget.
    Solve(SolveArgs),
    /// Build an instance from another problem.
    Reduce(ReduceArgs),
    /// Generate an instance from a TOML spec.
    Gen(GenArgs),
    /// Print size and parameter statistics.
    Stats(StatsArgs),
    /// Check the reduction rules against the exact solver.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Degeneracy,
    Closure,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Degeneracy => Mode::Degeneracy,
            ModeArg::Closure => Mode::Closure,
        }
    }
}

#[derive(Args)]
struct KernelizeArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long)]
    input: PathBuf,
    /// Defaults to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = SolverLimits::default().max_n)]
    max_n: usize,
    /// Write an optimal clustering here.
    #[arg(long)]
    clustering: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    /// Edge multicut (`mc` format) to an instance.
    Multicut,
    /// Subdivide every real edge of an instance.
    Subdivide,
    /// 3-CNF (DIMACS) to multicut on a binary tree.
    #[value(name = "3sat")]
    Sat3,
    /// Multicut on a binary tree with leaf terminals to an instance.
    TreeMulticut,
    /// Clique (DIMACS graph) to a star instance; needs `--k`.
    Clique,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(value_enum)]
    source: Source,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// Clique size for `clique`; budget override for `subdivide`.
    #[arg(long)]
    k: Option<i64>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// Also write the planted clustering here.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check each of Rules 1 to 9.
    #[arg(long)]
    rules: bool,
    /// Check both kernel pipelines end to end.
    #[arg(long)]
    pipelines: bool,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 9)]
    max_n: usize,
    #[arg(long, default_value_t = 4)]
    max_k: i64,
}

enum Failure {
    Core(fuzzycc_core::Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl From<fuzzycc_core::Error> for Failure {
    fn from(e: fuzzycc_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        use fuzzycc_core::Error as E;
        match self {
            Failure::Core(E::Usage(_) | E::Parse { .. }) | Failure::Usage(_) => EXIT_USAGE,
            Failure::Core(E::Capability(_)) => EXIT_CAPABILITY,
            Failure::Core(E::Invariant(_) | E::Internal(_)) => EXIT_INTERNAL,
            Failure::Io(..) => EXIT_IO,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(p, e) => format!("{}: {e}", p.display()),
            Failure::Usage(m) => m.clone(),
        }
    }
}

type Outcome = std::result::Result<u8, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn write(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_owned(), e))
}

/// Parse errors carry the offending file name.
fn parsed<T>(path: &Path, r: fuzzycc_core::Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(|e| match e {
        fuzzycc_core::Error::Parse { line, msg } => Failure::Usage(format!("{}: line {line}: {msg}", path.display())),
        other => other.into(),
    })
}

fn kernelize_cmd(a: KernelizeArgs) -> Outcome {
    let (g, k) = parsed(&a.input, parse_instance(&read(&a.input)?))?;
    let result = kernelize(a.mode.into(), g, k)?;
    let t = &result.trace;
    log::info!(
        "n {} -> {}, k {} -> {}, d {}, c {}, bound {}",
        t.initial.n,
        t.final_n,
        t.initial.k,
        t.final_k,
        t.initial.d,
        t.initial.c,
        result.bound_used
    );
    if let Some(path) = &a.trace {
        write(path, &serialize_trace(&t.entries))?;
    }
    match result.verdict {
        Verdict::No(reason) => {
            println!("NO {}", reason.name());
            Ok(EXIT_NO)
        }
        Verdict::Reduced { graph, k } => {
            let text = serialize_instance(&graph, k);
            match &a.output {
                Some(path) => write(path, &text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

fn solve_cmd(a: SolveArgs) -> Outcome {
    let (g, k) = parsed(&a.input, parse_instance(&read(&a.input)?))?;
    let limits = SolverLimits::new(a.max_n, true)?;
    let (cost, clustering) = optimal_clustering(&g, limits)?;
    if let Some(path) = &a.clustering {
        write(path, &serialize_clustering(&clustering))?;
    }
    if cost <= k {
        println!("YES {cost}");
        Ok(0)
    } else {
        println!("NO {cost}");
        Ok(EXIT_NO)
    }
}

fn reduce_cmd(a: ReduceArgs) -> Outcome {
    let text = read(&a.input)?;
    if a.k.is_some() && !matches!(a.source, Source::Clique | Source::Subdivide) {
        return Err(Failure::Usage("--k only applies to clique and subdivide".into()));
    }
    let out = match a.source {
        Source::Multicut => {
            let mc = parsed(&a.input, parse_multicut(&text))?;
            let (g, k) = multicut_to_cc(&mc);
            serialize_instance(&g, k)
        }
        Source::Subdivide => {
            let (g, k) = parsed(&a.input, parse_instance(&text))?;
            let (h, k2) = subdivide_real_edges(&g, a.k.unwrap_or(k));
            serialize_instance(&h, k2)
        }
        Source::Sat3 => {
            let phi = parsed(&a.input, parse_cnf(&text))?;
            serialize_multicut(&sat3_to_tree_multicut(&phi))
        }
        Source::TreeMulticut => {
            let mc = parsed(&a.input, parse_multicut(&text))?;
            let (g, k) = tree_multicut_to_cc(&mc)?;
            serialize_instance(&g, k)
        }
        Source::Clique => {
            let k = a.k.ok_or_else(|| Failure::Usage("reduce clique needs --k".into()))?;
            let sg = parsed(&a.input, parse_dimacs_graph(&text))?;
            let (g, k2) = clique_to_cc_star(&sg, k)?;
            serialize_instance(&g, k2)
        }
    };
    write(&a.output, &out)?;
    Ok(0)
}

fn gen_cmd(a: GenArgs) -> Outcome {
    let text = read(&a.spec)?;
    let spec: GenSpec = toml::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: {}", a.spec.display(), e.message())))?;
    let out = generate(&spec)?;
    write(&a.output, &serialize_instance(&out.graph, out.k))?;
    if let Some(path) = &a.witness {
        let w = out
            .witness
            .as_ref()
            .ok_or_else(|| Failure::Usage("--witness needs a planted spec".into()))?;
        write(path, &serialize_clustering(w))?;
    }
    Ok(0)
}

fn stats_cmd(a: StatsArgs) -> Outcome {
    let (g, k) = parsed(&a.input, parse_instance(&read(&a.input)?))?;
    print!("{}", instance_stats(&g, k));
    Ok(0)
}

fn verify_cmd(a: VerifyArgs) -> Outcome {
    if !a.rules && !a.pipelines {
        return Err(Failure::Usage("verify needs --rules and/or --pipelines".into()));
    }
    let cfg = VerifyConfig {
        samples: a.samples,
        seed: a.seed,
        max_n: a.max_n,
        max_k: a.max_k,
        ..VerifyConfig::default()
    };
    let mut ok = true;
    if a.rules {
        for r in check_rules(&cfg)? {
            let bad = r.mismatches().count();
            let status = if r.passed() { "ok" } else { "FAIL" };
            println!(
                "rule {} {status}: {} samples from {} candidates, {bad} mismatches",
                r.rule,
                r.samples.len(),
                r.candidates
            );
            ok &= r.passed();
        }
    }
    if a.pipelines {
        for mode in [Mode::Degeneracy, Mode::Closure] {
            let r = check_pipeline(mode, &cfg)?;
            let bad = r.samples.iter().filter(|s| !s.agrees()).count();
            let over = r.samples.iter().filter(|s| !s.within_bound()).count();
            let status = if r.passed() { "ok" } else { "FAIL" };
            println!(
                "pipeline {mode:?} {status}: {} samples, {bad} mismatches, {over} over bound",
                r.samples.len()
            );
            ok &= r.passed();
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Kernelize(a) => kernelize_cmd(a),
        Command::Solve(a) => solve_cmd(a),
        Command::Reduce(a) => reduce_cmd(a),
        Command::Gen(a) => gen_cmd(a),
        Command::Stats(a) => stats_cmd(a),
        Command::Verify(a) => verify_cmd(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("fuzzycc: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
