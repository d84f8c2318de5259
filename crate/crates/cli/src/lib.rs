//! Command-line front end: parses expressions, runs verification campaigns
//! and emits machine-readable reports.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

mod check;
mod commands;

#[derive(Parser, Debug)]
#[command(name = "ordrep", version, about = "Exact representations of linear orders by functions")]
pub struct Cli {
    /// Seed for every random choice of the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub json_out: Option<PathBuf>,
    /// Print nothing; the exit status and --json-out carry the result.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    /// Characteristic functions on the Hilbert cube (`I^α`).
    Hilbert,
    /// Spliced functions on [0,1] along Peano-curve fibers (`Replace`, `Dup`).
    Peano,
    /// Sums of level functions on nested intervals (countable products).
    Product,
}

impl Engine {
    fn name(self) -> &'static str {
        match self {
            Engine::Hilbert => "hilbert",
            Engine::Peano => "peano",
            Engine::Product => "product",
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample element pairs and check that their representations are ordered
    /// pointwise with a strict witness.
    CheckOrder {
        expr: String,
        #[arg(long, value_enum)]
        engine: Engine,
        /// Number of strictly ordered pairs to test.
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        /// Number of sampled evaluation points per pair.
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Emit the F_sigma / G_delta truncations of an initial segment of I^α
    /// with a stabilization table.
    Certify {
        expr: String,
        /// Element JSON; the default element when omitted.
        #[arg(long)]
        element: Option<String>,
        #[arg(long, default_value_t = 4)]
        depth: u64,
        /// Number of sampled points in the stabilization table.
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Evaluate the product representation of one element.
    ProductEval {
        expr: String,
        #[arg(long)]
        element: String,
        /// Parameter in [0,1], as "p/q".
        #[arg(long)]
        param: String,
        /// Truncation level.
        #[arg(long, default_value_t = 8)]
        depth: u64,
        /// Include the materialized registry.
        #[arg(long)]
        registry: bool,
    },
    /// Order the atoms of a chain family so every set is an initial segment.
    Extend {
        /// Family JSON, inline or as a file path.
        family: String,
        /// Comma-separated atom names to verify instead of the computed order.
        #[arg(long)]
        order: Option<String>,
    },
    /// Membership in the replacement closure and a rank bound.
    Rank {
        expr: String,
        /// Comma-separated base patterns: 1, 2, R, I, I^*, I^(α).
        #[arg(long, default_value = "R, I^*")]
        base: String,
        /// Also accept subsets of countable powers of generated sets.
        #[arg(long)]
        omega: bool,
        /// Number of random skeleton samples to check against the rank lemma.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// Maximum points per skeleton sample.
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Evaluate curves, fibers and representing functions exactly.
    Eval {
        #[command(subcommand)]
        target: EvalTarget,
    },
}

#[derive(Subcommand, Debug)]
pub enum EvalTarget {
    /// The Hilbert curve at a parameter.
    Curve { t: String },
    /// Parameters on the fiber of the first coordinate over `c`.
    Fiber {
        c: String,
        #[arg(long, default_value_t = 3)]
        count: usize,
    },
    /// The representing function of an element on [0,1].
    Rep {
        expr: String,
        #[arg(long)]
        element: String,
        #[arg(long = "param", required = true)]
        params: Vec<String>,
    },
    /// Fiber data of a replacement at the given base elements.
    Table {
        expr: String,
        #[arg(long = "element", required = true)]
        elements: Vec<String>,
    },
}

/// A finished run: the JSON report and the failures it records.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub json: Value,
    pub failures: Vec<String>,
}

impl Report {
    fn new(schema: &str, echo: &[String], seed: u64, mut body: Value, failures: Vec<String>) -> Self {
        body["schema"] = json!(format!("ordrep.{schema}/1"));
        body["command"] = json!(echo);
        body["seed"] = json!(seed);
        body["failures"] = json!(failures);
        Report { json: body, failures }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// The report as printed: pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

/// Runs a parsed command line; `echo` is recorded in the report.
pub fn run(cli: &Cli, echo: &[String]) -> anyhow::Result<Report> {
    let seed = cli.seed;
    let (schema, body, failures) = match &cli.command {
        Command::CheckOrder { expr, engine, pairs, points } => {
            let (body, failures) = check::check_order(expr, *engine, seed, *pairs, *points)?;
            ("check-order", body, failures)
        }
        Command::Certify { expr, element, depth, points } => {
            let (body, failures) = commands::certify(expr, element.as_deref(), *depth, *points, seed)?;
            ("certify", body, failures)
        }
        Command::ProductEval { expr, element, param, depth, registry } => {
            ("product-eval", commands::product_eval(expr, element, param, *depth, *registry)?, vec![])
        }
        Command::Extend { family, order } => {
            let (body, failures) = commands::extend(family, order.as_deref())?;
            ("extend", body, failures)
        }
        Command::Rank { expr, base, omega, samples, points } => {
            let (body, failures) = commands::rank(expr, base, *omega, *samples, *points, seed)?;
            ("rank", body, failures)
        }
        Command::Eval { target } => ("eval", commands::eval(target)?, vec![]),
    };
    Ok(Report::new(schema, echo, seed, body, failures))
}

/// Parses and runs an argument list (without the program name).
pub fn run_args<I, S>(args: I) -> anyhow::Result<Report>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let echo: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(std::iter::once("ordrep".to_string()).chain(echo.iter().cloned()))?;
    run(&cli, &echo)
}
