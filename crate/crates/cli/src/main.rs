use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use entropylab::functional::{check_conjugate_equivalence, conjugate_fast, default_dual_spec, GridFunctional};
use entropylab::harness::{
    convergence_study, run_suite, sandwich_csv, scalar_sandwich, write_plot_data, write_text, SuiteConfig, SuiteName,
};
use entropylab::matrix::{io as matrix_io, PDMatrix, SymMatrix};
use entropylab::operator_entropy::{
    furuta_entropy, furuta_via_identity, furuta_via_identity_integral, relative_entropy, relative_entropy_integral,
};
use entropylab::weight::interior_grid;
use entropylab::{Error, Weight};

#[derive(Parser)]
#[command(name = "entropylab", version, about = "Operator means, relative operator entropies and their functional extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Clone, Default)]
struct Common {
    /// Seed of the random instances (recorded in reports of fixed computations).
    #[arg(long)]
    seed: Option<u64>,
    /// Write a JSON report to this path.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Flat JSON config; command-line flags override its keys.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify {
        suite: SuiteArg,
        #[command(flatten)]
        common: Common,
        /// Number of random trials.
        #[arg(long)]
        trials: Option<usize>,
        /// Write the per-p minimum margins as CSV.
        #[arg(long, value_name = "PATH")]
        plot: Option<PathBuf>,
    },
    /// Conjugate a grid functional given as `x,value` CSV.
    Conjugate {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate S(A|B), or S_p(A|B) when `--p` is given.
    Entropy {
        /// Matrix file (JSON or CSV), or a positive number for a 1x1 matrix.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, value_enum, default_value_t = Via::Spectral)]
        via: Via,
        #[command(flatten)]
        common: Common,
    },
    /// Quadrature error against node count on fixed instances.
    Convergence {
        /// Write the study as CSV (printed to stdout otherwise).
        #[arg(long, value_name = "PATH")]
        plot: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Scalar Tsallis sandwich of S_p(a|b) at x = 1 over p = 0.1, ..., 0.9.
    Sandwich {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 4.0)]
        b: f64,
        /// Write the CSV here (printed to stdout otherwise).
        #[arg(long, value_name = "PATH")]
        plot: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Operator,
    Functional,
    Crossbackend,
}

impl From<SuiteArg> for SuiteName {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Operator => SuiteName::Operator,
            SuiteArg::Functional => SuiteName::Functional,
            SuiteArg::Crossbackend => SuiteName::Crossbackend,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Via {
    /// Both sides of S_p = −S(A♯B|A)/p = S(A♯B|B)/(1−p).
    Identity,
    Spectral,
    Integral,
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Pass,
    Fail,
}

type CliResult = Result<Verdict, Error>;

fn load_config(common: &Common, suite: SuiteName) -> Result<SuiteConfig, Error> {
    let mut config = match &common.config {
        Some(path) => SuiteConfig::load(path, Some(suite))?,
        None => SuiteConfig::default_for(suite),
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(report) = &common.report {
        config.report = Some(report.clone());
    }
    Ok(config)
}

fn write_json(path: &Path, value: &Value) -> Result<(), Error> {
    write_text(path, &(serde_json::to_string_pretty(value).expect("json value serializes") + "\n"))
}

fn verify(suite: SuiteName, common: &Common, trials: Option<usize>, plot: Option<&Path>) -> CliResult {
    let mut config = load_config(common, suite)?;
    if let Some(t) = trials {
        config.trials = t;
    }
    let report = run_suite(&config)?;
    for line in report.summary_lines() {
        println!("{line}");
    }
    if let Some(path) = plot {
        write_plot_data(&report, path)?;
    }
    Ok(if report.passed() { Verdict::Pass } else { Verdict::Fail })
}

fn conjugate(input: &Path, output: &Path, common: &Common) -> CliResult {
    let f = GridFunctional::read_csv(input)?;
    let conj = conjugate_fast(&f, &default_dual_spec(&f));
    conj.write_csv(output)?;
    let check = check_conjugate_equivalence(&f, 1e-12);
    println!("{}", check.summary());
    if let Some(path) = &common.report {
        write_json(path, &json!({ "seed": common.seed, "records": [check] }))?;
    }
    Ok(if check.pass { Verdict::Pass } else { Verdict::Fail })
}

fn read_matrix(arg: &str) -> Result<PDMatrix, Error> {
    match arg.trim().parse::<f64>() {
        Ok(v) => PDMatrix::scalar(v),
        Err(_) => matrix_io::read_pd(arg),
    }
}

fn entropy(a: &str, b: &str, p: Option<f64>, via: Via, common: &Common) -> CliResult {
    let config = load_config(common, SuiteName::Operator)?;
    let nodes = config.entropy_nodes;
    let (a, b) = (read_matrix(a)?, read_matrix(b)?);
    let p = p.map(Weight::new).transpose()?;
    let rows = |m: &SymMatrix| json!(m.matrix().rows());
    let mut out = match (via, p) {
        (Via::Spectral, None) => json!({ "quantity": "S(A|B)", "value": rows(&relative_entropy(&a, &b)?) }),
        (Via::Spectral, Some(p)) => json!({ "quantity": "S_p(A|B)", "value": rows(&furuta_entropy(&a, &b, p)?) }),
        (Via::Integral, None) => json!({
            "quantity": "S(A|B)",
            "nodes": nodes,
            "value": rows(&relative_entropy_integral(&a, &b, nodes)?),
        }),
        (Via::Integral | Via::Identity, Some(p)) => {
            let (via_a, via_b) = if via == Via::Integral {
                furuta_via_identity_integral(&a, &b, p, nodes)?
            } else {
                furuta_via_identity(&a, &b, p)?
            };
            let value = via_a.add(&via_b).scale(0.5);
            json!({
                "quantity": "S_p(A|B)",
                "value": rows(&value),
                "via_a": rows(&via_a),
                "via_b": rows(&via_b),
                "halves_deviation": via_a.sub(&via_b).frobenius_norm(),
            })
        }
        (Via::Identity, None) => return Err(Error::Config("--via identity needs --p".into())),
    };
    out["via"] = json!(match via {
        Via::Identity => "identity",
        Via::Spectral => "spectral",
        Via::Integral => "integral",
    });
    if let Some(p) = p {
        out["p"] = json!(p.value());
    }
    println!("{}", serde_json::to_string_pretty(&out).expect("json value serializes"));
    if let Some(path) = &common.report {
        write_json(path, &out)?;
    }
    Ok(Verdict::Pass)
}

fn convergence(plot: Option<&Path>, common: &Common) -> CliResult {
    let study = convergence_study()?;
    match plot {
        Some(path) => write_text(path, &study.to_csv())?,
        None => print!("{}", study.to_csv()),
    }
    let records = study.records();
    for r in records.iter().filter(|r| !r.pass) {
        eprintln!("{}", r.summary());
    }
    if let Some(path) = &common.report {
        write_json(path, &json!({ "seed": common.seed, "study": study, "records": records }))?;
    }
    Ok(if study.passed() { Verdict::Pass } else { Verdict::Fail })
}

fn sandwich(a: f64, b: f64, plot: Option<&Path>) -> CliResult {
    let csv = sandwich_csv(&scalar_sandwich(a, b, &interior_grid())?);
    match plot {
        Some(path) => write_text(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(Verdict::Pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify {
            suite,
            common,
            trials,
            plot,
        } => verify((*suite).into(), common, *trials, plot.as_deref()),
        Command::Conjugate { input, output, common } => conjugate(input, output, common),
        Command::Entropy { a, b, p, via, common } => entropy(a, b, *p, *via, common),
        Command::Convergence { plot, common } => convergence(plot.as_deref(), common),
        Command::Sandwich { a, b, plot } => sandwich(*a, *b, plot.as_deref()),
    };
    match result {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
