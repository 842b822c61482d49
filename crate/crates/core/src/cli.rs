//! Command-line front end.
//!
//! Every failure is reported as a single line `error:<code>: <message>` on
//! stderr. Exit status 1 means the input could not be read or validated,
//! 2 means a solver precondition failed and 3 means the solvers disagreed.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::bench::{run_grid, CSV_HEADER};
use crate::check::{check_instance, CheckReport, Solvers};
use crate::cost::{CostError, CostFunction, Label};
use crate::dp::dp_up;
use crate::generate::{random_instance, rng_from_seed, Arity, GenError};
use crate::interval::bottom_up_intervals;
use crate::ktuple::{parse_tuple_newick, serialize_tuple_labeling, solve_ktuple, TupleError};
use crate::newick::{
    parse_newick, parse_newick_batch, serialize_labeled, serialize_tree, NewickError,
};
use crate::oracle::OracleConfig;
use crate::solver::{solve, Algorithm, SolveError, TieRule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub exit: u8,
}

impl CliError {
    fn input(code: &str, message: impl Into<String>) -> Self {
        CliError {
            code: code.to_string(),
            message: message.into(),
            exit: 1,
        }
    }

    /// The single diagnostic line.
    pub fn diagnostic(&self) -> String {
        let message = self.message.replace('\n', " ");
        format!("error:{}: {}", self.code, message)
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        let exit = match &e {
            SolveError::Cost(CostError::MissingNodeLabel(_) | CostError::LeafMismatch { .. }) => 1,
            _ => 2,
        };
        CliError {
            code: e.code().to_string(),
            message: e.to_string(),
            exit,
        }
    }
}

impl From<NewickError> for CliError {
    fn from(e: NewickError) -> Self {
        CliError::input(e.code(), e.to_string())
    }
}

impl From<CostError> for CliError {
    fn from(e: CostError) -> Self {
        CliError::input(e.code(), e.to_string())
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        CliError::input("InvalidParameter", e.to_string())
    }
}

impl From<TupleError> for CliError {
    fn from(e: TupleError) -> Self {
        match e {
            TupleError::Solve(s) => s.into(),
            TupleError::TupleDecompositionNotMonotone { .. } => CliError {
                code: e.code().to_string(),
                message: e.to_string(),
                exit: 2,
            },
            other => CliError::input(other.code(), other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input("Io", e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "treelabel",
    version,
    about = "Minimum-cost integer labeling of rooted trees"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Label the internal nodes of one Newick tree.
    Solve(SolveArgs),
    /// Compare dp, interval and oracle costs on a batch of instances.
    Check(CheckArgs),
    /// Print random instances as Newick, one per line.
    Gen(GenArgs),
    /// Time solvers over a grid of tree sizes and label ranges; prints CSV.
    Bench(BenchArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmArg {
    Dp,
    Interval,
    Oracle,
    Auto,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Dp => Algorithm::Dp,
            AlgorithmArg::Interval => Algorithm::Interval,
            AlgorithmArg::Oracle => Algorithm::Oracle,
            AlgorithmArg::Auto => Algorithm::Auto,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieArg {
    Lowest,
    Highest,
    Midpoint,
}

impl From<TieArg> for TieRule {
    fn from(t: TieArg) -> Self {
        match t {
            TieArg::Lowest => TieRule::Lowest,
            TieArg::Highest => TieRule::Highest,
            TieArg::Midpoint => TieRule::Midpoint,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Newick,
    Json,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Newick file, or '-' for stdin.
    #[arg(default_value = "-")]
    pub input: String,
    #[arg(long, value_enum, default_value = "auto")]
    pub algorithm: AlgorithmArg,
    /// manhattan, power:<n> or table:<c0,c1,...>
    #[arg(long, default_value = "manhattan")]
    pub cost: String,
    #[arg(long, value_enum, default_value = "lowest")]
    pub tie: TieArg,
    /// Leaf names are '|'-separated nondecreasing tuples.
    #[arg(long)]
    pub tuple: bool,
    #[arg(long, value_enum, default_value = "newick")]
    pub format: Format,
    /// Write the DP cost table as CSV to this path.
    #[arg(long)]
    pub dump_table: Option<PathBuf>,
    /// Write the bottom-up intervals as CSV to this path.
    #[arg(long)]
    pub dump_intervals: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Newick file with one tree per line, or '-' for stdin. Omit to generate.
    pub input: Option<String>,
    #[arg(long, default_value = "manhattan")]
    pub cost: String,
    /// Number of generated instances.
    #[arg(long = "gen-count", default_value_t = 1000)]
    pub count: usize,
    /// Generated trees have 2 to this many leaves.
    #[arg(long = "gen-n", default_value_t = 7)]
    pub max_leaves: usize,
    /// Generated labels are drawn from [0, gen-m].
    #[arg(long = "gen-m", default_value_t = 12)]
    pub max_label: Label,
    /// binary or max:<k>
    #[arg(long, default_value = "binary")]
    pub arity: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub leaves: usize,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub lo: Label,
    #[arg(long, default_value_t = 12, allow_negative_numbers = true)]
    pub hi: Label,
    /// binary or max:<k>
    #[arg(long, default_value = "binary")]
    pub arity: String,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "dp,interval")]
    pub algorithm: Vec<AlgorithmArg>,
    /// Leaf counts; trees are binary so N = 2n - 1.
    #[arg(long, value_delimiter = ',', default_value = "500")]
    pub leaves: Vec<usize>,
    /// Label range sizes.
    #[arg(long, value_delimiter = ',', default_value = "64,128")]
    pub m: Vec<u64>,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long, default_value = "manhattan")]
    pub cost: String,
    #[arg(long)]
    pub seed: u64,
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<(String, String), CliError> {
    if path == "-" {
        let mut text = String::new();
        stdin.read_to_string(&mut text)?;
        Ok((text, "<stdin>".to_string()))
    } else {
        let text =
            fs::read_to_string(path).map_err(|e| CliError::input("Io", format!("{path}: {e}")))?;
        Ok((text, path.to_string()))
    }
}

fn parse_cost(spec: &str) -> Result<CostFunction, CliError> {
    Ok(spec.parse::<CostFunction>()?)
}

/// Parses `args` (without the program name) and runs the command.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("treelabel"))
        .chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            write!(stdout, "{e}")?;
            return Ok(());
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("bad arguments");
            let first = first.strip_prefix("error: ").unwrap_or(first);
            return Err(CliError::input("Usage", first));
        }
    };
    match cli.command {
        Command::Solve(a) => cmd_solve(&a, stdin, stdout),
        Command::Check(a) => cmd_check(&a, stdin, stdout, &Solvers::default()),
        Command::Gen(a) => cmd_gen(&a, stdout),
        Command::Bench(a) => cmd_bench(&a, stdout),
    }
}

pub fn cmd_solve(
    args: &SolveArgs,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let (text, source) = read_input(&args.input, stdin)?;
    let cost = parse_cost(&args.cost)?;
    let tie = TieRule::from(args.tie);
    let oracle = OracleConfig::from_env();
    if args.tuple {
        return solve_tuple(args, &text, &cost, tie, stdout);
    }

    let mut doc = parse_newick(&text)?;
    doc.source_name = source;
    let algorithm = Algorithm::from(args.algorithm);
    let resolved = algorithm.resolve(&doc.tree, &cost);
    if resolved == Algorithm::Interval && !doc.tree.is_binary() {
        return Err(SolveError::NotBinaryTree.into());
    }

    if let Some(path) = &args.dump_table {
        fs::write(path, dp_up(&doc.tree, &doc.leaf_labels, &cost)?.to_csv())?;
    }
    if let Some(path) = &args.dump_intervals {
        fs::write(
            path,
            bottom_up_intervals(&doc.tree, &doc.leaf_labels)?.to_csv(),
        )?;
    }

    let labeling = solve(resolved, &doc.tree, &doc.leaf_labels, &cost, tie, &oracle)?;
    match args.format {
        Format::Newick => {
            writeln!(stdout, "{}", serialize_labeled(&doc, &labeling.values)?)?;
        }
        Format::Json => {
            let range = doc.leaf_labels.range();
            let labels: Map<String, Value> = labeling
                .values
                .iter()
                .enumerate()
                .map(|(node, &label)| (node.to_string(), json!(label)))
                .collect();
            let out = json!({
                "cost": labeling.total_cost,
                "labels": labels,
                "algorithm": resolved.name(),
                "g_min": range.g_min,
                "g_max": range.g_max,
                "m": range.m,
            });
            writeln!(stdout, "{out}")?;
        }
    }
    Ok(())
}

fn solve_tuple(
    args: &SolveArgs,
    text: &str,
    cost: &CostFunction,
    tie: TieRule,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let (tree, leaves) = parse_tuple_newick(text)?;
    let algorithm = Algorithm::from(args.algorithm);
    let resolved = algorithm.resolve(&tree, cost);
    let labeling = solve_ktuple(&tree, &leaves, cost, algorithm, tie)?;
    match args.format {
        Format::Newick => writeln!(stdout, "{}", serialize_tuple_labeling(&tree, &labeling))?,
        Format::Json => {
            let labels: Map<String, Value> = labeling
                .values
                .iter()
                .enumerate()
                .map(|(node, tuple)| (node.to_string(), json!(tuple)))
                .collect();
            let out = json!({
                "cost": labeling.total_cost,
                "k": labeling.k,
                "labels": labels,
                "algorithm": resolved.name(),
            });
            writeln!(stdout, "{out}")?;
        }
    }
    Ok(())
}

/// Runs the agreement check with the given solver implementations.
pub fn cmd_check(
    args: &CheckArgs,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    solvers: &Solvers,
) -> Result<(), CliError> {
    let cost = parse_cost(&args.cost)?;
    let oracle = OracleConfig::from_env();
    let mut report = CheckReport::default();

    match &args.input {
        Some(path) => {
            let (text, source) = read_input(path, stdin)?;
            for (index, doc) in parse_newick_batch(&text, &source).into_iter().enumerate() {
                let doc = doc?;
                let row = check_instance(
                    index,
                    &doc.source_name,
                    &doc.tree,
                    &doc.leaf_labels,
                    &cost,
                    solvers,
                    &oracle,
                )?;
                writeln!(stdout, "{row}")?;
                report.rows.push(row);
            }
        }
        None => {
            let arity: Arity = args.arity.parse()?;
            if args.max_leaves < 2 {
                return Err(GenError::NoLeaves.into());
            }
            let mut rng = rng_from_seed(args.seed);
            for index in 0..args.count {
                let leaves = rand::Rng::random_range(&mut rng, 2..=args.max_leaves);
                let (tree, labels) = random_instance(&mut rng, leaves, 0, args.max_label, arity)?;
                let row =
                    check_instance(index, "generated", &tree, &labels, &cost, solvers, &oracle)?;
                writeln!(stdout, "{row}")?;
                report.rows.push(row);
            }
        }
    }

    write!(stdout, "{}", report.summary())?;
    if let Some(bad) = report.minimal_failure() {
        return Err(CliError {
            code: "Disagreement".to_string(),
            message: format!(
                "solvers disagree on instance {} ({bad}); reproducer: {}",
                bad.index, bad.newick
            ),
            exit: 3,
        });
    }
    Ok(())
}

pub fn cmd_gen(args: &GenArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let arity: Arity = args.arity.parse()?;
    let mut rng = rng_from_seed(args.seed);
    for _ in 0..args.count {
        let (tree, labels) = random_instance(&mut rng, args.leaves, args.lo, args.hi, arity)?;
        writeln!(stdout, "{}", serialize_tree(&tree, &labels))?;
    }
    Ok(())
}

pub fn cmd_bench(args: &BenchArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cost = parse_cost(&args.cost)?;
    if args.leaves.contains(&0) || args.m.contains(&0) {
        return Err(CliError::input(
            "InvalidParameter",
            "leaf counts and range sizes must be positive",
        ));
    }
    let algorithms: Vec<Algorithm> = args
        .algorithm
        .iter()
        .copied()
        .map(Algorithm::from)
        .collect();
    let rows = run_grid(
        &algorithms,
        &args.leaves,
        &args.m,
        args.reps,
        args.seed,
        &cost,
    )?;
    writeln!(stdout, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(stdout, "{}", row.to_csv())?;
    }
    Ok(())
}
