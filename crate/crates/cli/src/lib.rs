//! Argument handling for the `posim` binary, kept in a library so tests can
//! drive it without spawning processes.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use posim::emi::{empirical_expected_mi, sample_random_dag, DagNullSpec, DEFAULT_NULL_SAMPLES};
use posim::experiments::{
    default_grid, overlap_matrix, permutation_randomization, rewiring_randomization,
    swap_experiment, ExperimentConfig, Measure, Scheme,
};
use posim::order::{parse_down_sets, DEFAULT_EXTENSION_CAP};
use posim::{
    compare, gen_bucket_order, gen_regular_tree, gen_total_order, parse_order, write_order,
    CompareOptions, MeasureKind, NullChoice, PartialOrder,
};
use rand::SeedableRng;

#[derive(Debug, Parser)]
#[command(
    name = "posim",
    version,
    about = "Similarity measures between partial orders"
)]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, env = "POSIM_THREADS", value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare two orders.
    Compare(CompareArgs),
    /// Write a generated order as an edge list.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Estimate the expected mutual information between random DAGs.
    Null(NullArgs),
    /// Mutual information of one term of the relabelling null.
    Term(TermArgs),
    /// Reproduce a randomisation experiment as CSV.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Kv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InputFormat {
    /// Count line, then `u v` precedence pairs.
    Edges,
    /// Count line, then `x: y1 y2 …` down sets.
    Closure,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NullKind {
    DagUniform,
    RewireMcmc,
}

#[derive(Debug, Clone, Copy)]
enum Seed {
    Fixed(u64),
    Random,
}

impl Seed {
    fn resolve(self) -> u64 {
        match self {
            Seed::Fixed(s) => s,
            Seed::Random => rand::random(),
        }
    }
}

fn parse_seed(s: &str) -> Result<Seed, String> {
    if s == "random" {
        return Ok(Seed::Random);
    }
    s.parse()
        .map(Seed::Fixed)
        .map_err(|_| format!("expected an unsigned integer or `random`, found {s:?}"))
}

#[derive(Debug, Args)]
struct SeedArg {
    /// RNG seed, or `random` for a fresh one.
    #[arg(long, default_value = "0", value_parser = parse_seed)]
    seed: Seed,
}

#[derive(Debug, Args)]
struct CompareArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, default_value = "nmi", value_parser = parse_measure_kind)]
    measure: MeasureKind,
    /// Null pairs for EMI.
    #[arg(long, default_value_t = DEFAULT_NULL_SAMPLES)]
    samples: usize,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long, value_enum, default_value = "kv")]
    format: Format,
    #[arg(long, value_enum, default_value = "dag-uniform")]
    null: NullKind,
    /// Relocations before each rewire-mcmc sample; defaults to ten per link.
    #[arg(long)]
    burn_in: Option<usize>,
    /// Limit on enumerated linear extensions.
    #[arg(long, default_value_t = DEFAULT_EXTENSION_CAP)]
    cap: usize,
    #[arg(long, value_enum, default_value = "edges")]
    input: InputFormat,
}

fn parse_measure_kind(s: &str) -> Result<MeasureKind, String> {
    s.parse()
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    /// Regular tree, root 0, breadth-first ids.
    Tree {
        #[arg(long)]
        branching: usize,
        #[arg(long)]
        depth: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Total order 0 ≺ 1 ≺ … ≺ n−1.
    Chain {
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bucket order with the given bucket sizes, best bucket first.
    Buckets {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Random single-rooted DAG with `m` links.
    RandomDag {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct NullArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = DEFAULT_NULL_SAMPLES)]
    samples: usize,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long, value_enum, default_value = "kv")]
    format: Format,
}

#[derive(Debug, Args)]
struct TermArgs {
    #[arg(long)]
    candidates: usize,
    #[arg(long)]
    a: usize,
    #[arg(long)]
    b: usize,
    #[arg(long)]
    c: usize,
}

/// The base order of an experiment: a generated regular tree or a file.
#[derive(Debug, Args)]
struct BaseArgs {
    #[arg(long, default_value_t = 2)]
    branching: usize,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Edge-list file used instead of a generated tree.
    #[arg(long, conflicts_with_all = ["branching", "depth"])]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    runs: usize,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long, default_value_t = DEFAULT_NULL_SAMPLES)]
    null_samples: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[command(flatten)]
    base: BaseArgs,
    #[arg(long, default_value = "random", value_parser = parse_scheme)]
    scheme: Scheme,
    /// Grid step for f or g.
    #[arg(long, default_value_t = 0.05)]
    step: f64,
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse()
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    s.parse()
}

#[derive(Debug, Subcommand)]
enum ExperimentCommand {
    /// Swap one same-level pair per run, level by level.
    Swap {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long, value_delimiter = ',', default_value = "nmi,ami,emi,kendall", value_parser = parse_measure)]
        measures: Vec<Measure>,
    },
    /// Randomise candidate positions in scheme order.
    Permute {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_delimiter = ',', default_value = "nmi,ami", value_parser = parse_measure)]
        measures: Vec<Measure>,
    },
    /// Relocate links in scheme order.
    Rewire {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_delimiter = ',', default_value = "nmi,emi", value_parser = parse_measure)]
        measures: Vec<Measure>,
    },
    /// Overlap integrals between measure distributions at pairs of f.
    Overlap {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long, default_value = "ami", value_parser = parse_measure)]
        measure: Measure,
        #[arg(long, default_value_t = 40)]
        bins: usize,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
    },
}

/// Failure outside the library's own error type.
enum Failure {
    Domain(posim::Error),
    Io(String),
}

impl From<posim::Error> for Failure {
    fn from(e: posim::Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Runs the CLI on `args` (program name first). Returns the exit code: 0 on
/// success, 2 on usage errors, 1 on domain and I/O errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return if code == 0 { 0 } else { 2 };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        pool = pool.num_threads(t as usize);
    }
    let result = match pool.build() {
        Ok(pool) => pool.install(|| execute(cli.command)),
        Err(e) => Err(Failure::Io(format!("thread pool: {e}"))),
    };
    match result.and_then(|(text, path)| emit(&text, path.as_deref(), out)) {
        Ok(()) => 0,
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Outcome<()> {
    match path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Io(format!("writing {}: {e}", path.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("writing output: {e}"))),
    }
}

fn read_order(path: &Path, format: InputFormat) -> Outcome<PartialOrder> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("reading {}: {e}", path.display())))?;
    Ok(match format {
        InputFormat::Edges => parse_order(&text)?,
        InputFormat::Closure => parse_down_sets(&text)?,
    })
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut line = serde_json::to_string(value).expect("plain data serialises");
    line.push('\n');
    line
}

fn execute(command: Command) -> Outcome<(String, Option<PathBuf>)> {
    match command {
        Command::Compare(args) => {
            let a = read_order(&args.a, args.input)?;
            let b = read_order(&args.b, args.input)?;
            let options = CompareOptions {
                samples: args.samples,
                seed: args.seed.seed.resolve(),
                null: match args.null {
                    NullKind::DagUniform => NullChoice::DagUniform,
                    NullKind::RewireMcmc => NullChoice::RewireMcmc {
                        burn_in: args.burn_in,
                    },
                },
                cap: args.cap,
            };
            let report = compare(&a, &b, args.measure, &options)?;
            let text = match args.format {
                Format::Kv => report.to_key_value(),
                Format::Json => to_json(&report),
            };
            Ok((text, None))
        }
        Command::Gen(gen) => {
            let (order, output) = match gen {
                GenCommand::Tree {
                    branching,
                    depth,
                    output,
                } => (gen_regular_tree(branching, depth)?, output),
                GenCommand::Chain { n, output } => (gen_total_order(n)?, output),
                GenCommand::Buckets { sizes, output } => (gen_bucket_order(&sizes)?, output),
                GenCommand::RandomDag { n, m, seed, output } => {
                    let spec = DagNullSpec {
                        n,
                        m,
                        samples: 2,
                        seed: seed.seed.resolve(),
                    };
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(spec.seed);
                    (sample_random_dag(&spec, &mut rng)?, output)
                }
            };
            Ok((write_order(&order), output))
        }
        Command::Null(args) => {
            let null = empirical_expected_mi(&DagNullSpec {
                n: args.n,
                m: args.m,
                samples: args.samples,
                seed: args.seed.seed.resolve(),
            })?;
            let text = match args.format {
                Format::Kv => format!(
                    "mean_i={:.12}\nstderr_i={:.12}\nsamples_used={}\nnull_id={}\n",
                    null.mean_i, null.stderr_i, null.samples_used, null.null_id
                ),
                Format::Json => to_json(&null),
            };
            Ok((text, None))
        }
        Command::Term(t) => {
            let lf = posim::ami::LogFactorialTable::new(t.candidates);
            let i = posim::ami::term_mi(t.candidates, t.a, t.b, t.c)?;
            let ln_count = posim::ami::log_term_count(&lf, t.candidates, t.a, t.b, t.c)?;
            Ok((format!("term_mi={i:.12}\nln_count={ln_count:.12}\n"), None))
        }
        Command::Experiment(e) => experiment(e),
    }
}

fn base_order(base: &BaseArgs) -> Outcome<PartialOrder> {
    match &base.input {
        Some(path) => read_order(path, InputFormat::Edges),
        None => Ok(gen_regular_tree(base.branching, base.depth)?),
    }
}

fn config(base: &BaseArgs, measures: Vec<Measure>, grid: Vec<f64>) -> ExperimentConfig {
    ExperimentConfig {
        runs: base.runs,
        seed: base.seed.seed.resolve(),
        measures,
        grid,
        null_samples: base.null_samples,
    }
}

fn grid(step: f64) -> Outcome<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(
            posim::Error::InfeasibleSpec(format!("grid step {step} outside (0, 1]")).into(),
        );
    }
    Ok(default_grid(step))
}

fn experiment(command: ExperimentCommand) -> Outcome<(String, Option<PathBuf>)> {
    match command {
        ExperimentCommand::Swap { base, measures } => {
            let order = base_order(&base)?;
            let trace = swap_experiment(&order, &config(&base, measures, vec![1.0]))?;
            Ok((trace.to_csv(), base.output))
        }
        ExperimentCommand::Permute { curve, measures } => {
            let order = base_order(&curve.base)?;
            let config = config(&curve.base, measures, grid(curve.step)?);
            let trace = permutation_randomization(&order, curve.scheme, &config)?;
            Ok((trace.to_csv(), curve.base.output))
        }
        ExperimentCommand::Rewire { curve, measures } => {
            let order = base_order(&curve.base)?;
            let config = config(&curve.base, measures, grid(curve.step)?);
            let trace = rewiring_randomization(&order, curve.scheme, &config)?;
            Ok((trace.to_csv(), curve.base.output))
        }
        ExperimentCommand::Overlap {
            base,
            measure,
            bins,
            step,
        } => {
            let order = base_order(&base)?;
            let matrix = overlap_matrix(
                &order,
                measure,
                &grid(step)?,
                base.runs,
                bins,
                base.seed.seed.resolve(),
            )?;
            Ok((matrix.to_csv(), base.output))
        }
    }
}
