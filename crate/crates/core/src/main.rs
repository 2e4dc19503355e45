use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use contact_pair_lab::contact::normality;
use contact_pair_lab::corpus::{
    build_metric_pair, corpus_build, load_scenario, run_checks, CheckReport, RunOptions, Scenario, ScenarioError, Selection, CORPUS,
};
use contact_pair_lab::probe::{ProbeSet, DEFAULT_PROBES, DEFAULT_SEED};
use contact_pair_lab::report::Verdict;
use contact_pair_lab::submanifold::{classify, shape_data, verify_theorems, Subframe};

/// Environment variable overriding the default probe seed.
const SEED_ENV: &str = "CONTACT_PAIR_LAB_SEED";

/// Scenarios run by `corpus run` without a name.
const FULL_CORPUS: [&str; 8] =
    ["darboux(1,0)", "darboux(0,1)", "darboux(1,1)", "darboux(2,1)", "heis6", "heis6-leaf3", "heis6-n4", "darboux-J-noninvariant"];

#[derive(Parser)]
#[command(name = "contact-pair-lab", version, about = "Exact verification of metric contact pairs and their submanifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Built-in scenarios.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Run checks on a scenario file.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Classify one subframe of a scenario file.
    Submanifold {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        name: String,
        /// Also run every theorem check on the subframe.
        #[arg(long)]
        theorems: bool,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// List built-in scenarios.
    List,
    /// Run checks on one built-in scenario, or on the whole corpus.
    Run {
        /// Scenario name; `darboux(h,k)` selects parameters.
        name: Option<String>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated groups: pair, structure, metric, normality,
    /// connection, curvature, hermitian, submanifolds, all.
    #[arg(long, default_value = "all")]
    checks: Selection,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

struct InputError(String);

impl From<ScenarioError> for InputError {
    fn from(e: ScenarioError) -> Self {
        InputError(e.to_string())
    }
}

fn default_seed() -> Result<u64, InputError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| InputError(format!("{SEED_ENV}: `{v}` is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn options(args: &RunArgs) -> Result<RunOptions, InputError> {
    Ok(RunOptions { seed: args.seed.map_or_else(default_seed, Ok)?, probes: DEFAULT_PROBES })
}

/// `name` or `name(h,k)`.
fn build_named(spec: &str) -> Result<Scenario, InputError> {
    let (name, params) = match spec.split_once('(') {
        None => (spec, None),
        Some((name, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(|| InputError(format!("malformed scenario `{spec}`")))?;
            let (h, k) = inner.split_once(',').ok_or_else(|| InputError(format!("malformed parameters in `{spec}`")))?;
            let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| InputError(format!("malformed parameters in `{spec}`")));
            (name, Some((parse(h)?, parse(k)?)))
        }
    };
    Ok(corpus_build(name, params)?)
}

fn emit(reports: &[CheckReport], format: Format, single: bool) {
    match format {
        Format::Text => {
            for r in reports {
                print!("{}", r.to_text());
            }
        }
        Format::Json if single => println!("{}", reports[0].to_json()),
        Format::Json => println!("{}", serde_json::to_string_pretty(reports).expect("reports serialize")),
    }
}

fn status(reports: &[CheckReport]) -> ExitCode {
    if reports.iter().all(CheckReport::passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn submanifold(input: &PathBuf, name: &str, theorems: bool) -> Result<ExitCode, InputError> {
    let s = load_scenario(input)?;
    let span = s.submanifold(name).ok_or_else(|| InputError(format!("no submanifold `{name}` in {}", input.display())))?;
    let probes = ProbeSet::new(s.frame.base_point().to_vec(), default_seed()?, DEFAULT_PROBES);
    let mcp = build_metric_pair(&s, &probes).map_err(InputError)?;
    let sub = Subframe::new(s.frame.clone(), span.to_vec()).map_err(|e| InputError(e.to_string()))?;
    let vars = s.coordinates().names();
    let profile = classify(&sub, &mcp, &probes).map_err(|e| InputError(e.to_string()))?;
    println!("submanifold {name} of {}", s.name);
    println!("  profile: {}", profile.summary());
    for w in &profile.warnings {
        println!("  warning: {w}");
    }
    for i in 0..2 {
        println!("  |Z{}^T|^2 = {}", i + 1, profile.tangential_norm_sq[i].to_text(vars));
    }
    let shape = shape_data(&sub, &mcp).map_err(|e| InputError(e.to_string()))?;
    let h: Vec<String> = shape.mean_curvature.components().iter().map(|c| c.to_text(vars)).collect();
    println!("  mean curvature: [{}]", h.join(", "));
    println!("  minimal: {}", shape.minimal);
    if !theorems {
        return Ok(ExitCode::SUCCESS);
    }
    let nr = normality(mcp.structure()).map_err(|e| InputError(e.to_string()))?;
    let checks = verify_theorems(name, &sub, &mcp, &nr, &probes).map_err(|e| InputError(e.to_string()))?;
    let width = checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
    for c in &checks {
        println!("  {:<7} {:<width$}  {}", c.verdict.as_str().to_uppercase(), c.id, c.witness);
    }
    let failed = checks.iter().any(|c| {
        s.expectations.get(&c.id).map_or(c.verdict == Verdict::Fail, |want| *want != c.verdict)
    });
    Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn run(cli: Cli) -> Result<ExitCode, InputError> {
    match cli.command {
        Command::Corpus { action: CorpusAction::List } => {
            for (name, about) in CORPUS {
                println!("{name:<24} {about}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Corpus { action: CorpusAction::Run { name, run } } => {
            let opts = options(&run)?;
            let scenarios = match &name {
                Some(n) => vec![build_named(n)?],
                None => FULL_CORPUS.iter().map(|n| build_named(n)).collect::<Result<_, _>>()?,
            };
            let reports: Vec<CheckReport> = std::thread::scope(|scope| {
                let handles: Vec<_> = scenarios.iter().map(|s| scope.spawn(|| run_checks(s, &run.checks, opts))).collect();
                handles.into_iter().map(|h| h.join().expect("scenario thread")).collect()
            });
            emit(&reports, run.format, name.is_some());
            Ok(status(&reports))
        }
        Command::Verify { input, run } => {
            let opts = options(&run)?;
            let s = load_scenario(&input)?;
            let report = run_checks(&s, &run.checks, opts);
            emit(std::slice::from_ref(&report), run.format, true);
            Ok(status(std::slice::from_ref(&report)))
        }
        Command::Submanifold { input, name, theorems } => submanifold(&input, &name, theorems),
    }
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
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
