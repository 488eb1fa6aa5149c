use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use ablkit::abl::{distribution, element_from_distribution};
use ablkit::contextuality::{
    exhaustive_assignment_search, ghz3_constraints, ks_coloring_search, mermin_square_constraints,
    parity_obstruction,
};
use ablkit::rules::{
    check_product_rule, check_sum_rule, crossed_pair_cases, fixed_pair_cases, outcome_sign_cases,
    sweep_postselections,
};
use ablkit::scenarios::{self, FactKind};
use ablkit::states::singlet;
use ablkit::{Axis, ConstraintSystem, Error, KsInstance, Provenance, Scenario, ScenarioFile, Tolerances, Verdict};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ablkit_cli::report::{self, Body, CatalogEntry, Expected, RunReport};
use ablkit_cli::format;

/// Pre- and post-selected measurement probabilities, element-of-reality rule
/// checks and hidden-variable assignment searches.
#[derive(Debug, Parser)]
#[command(name = "ablkit", version)]
struct Cli {
    /// Override a tolerance, e.g. `--tol certainty=1e-6`. Repeatable.
    #[arg(long, global = true, value_name = "KEY=VALUE")]
    tol: Vec<String>,

    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Built-in scenarios.
    #[command(subcommand)]
    Scenario(ScenarioCmd),
    /// Outcome distribution of one observable of a scenario file.
    Abl {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        obs: String,
    },
    /// Sum or product rule for two commuting observables.
    Rules(RulesArgs),
    /// Both rules over the product post-selections of a singlet.
    Sweep {
        /// Axes for each particle, any of x, y, z.
        #[arg(long, default_value = "xyz")]
        axes: String,
        #[arg(long, value_enum, default_value_t = Pairing::Crossed)]
        pairing: Pairing,
    },
    /// Parity-constraint searches.
    #[command(subcommand)]
    Context(ContextCmd),
    /// Kochen-Specker colorings.
    #[command(subcommand)]
    Ks(KsCmd),
}

#[derive(Debug, Subcommand)]
enum ScenarioCmd {
    List,
    Run { name: String },
}

#[derive(Debug, Args)]
struct RulesArgs {
    /// Scenario file.
    #[arg(long, required_unless_present = "builtin", conflicts_with = "builtin")]
    file: Option<PathBuf>,
    /// Built-in scenario name.
    #[arg(long)]
    builtin: Option<String>,
    #[arg(long, value_enum)]
    rule: RuleKind,
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    r1: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    r2: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RuleKind {
    Sum,
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Pairing {
    /// Post `|up_1a up_2b>` tested on `(s1b, s2a)`.
    Crossed,
    /// Every post tested on `(s1y, s2x)`.
    Fixed,
    /// The four outcome-sign variants of `|1x, 2y>`, on `(s1y, s2x)`.
    Signs,
}

#[derive(Debug, Subcommand)]
enum ContextCmd {
    Search {
        #[arg(long, value_enum, conflicts_with = "file", required_unless_present = "file")]
        preset: Option<Preset>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Preset {
    Ghz3,
    MerminSquare,
}

#[derive(Debug, Subcommand)]
enum KsCmd {
    Color {
        #[arg(long)]
        file: PathBuf,
    },
}

/// A failure with its exit code: 1 for input problems, 2 when the numbers
/// rule the request out.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ZeroDenominator { .. } | Error::ZeroProbabilityOutcome { .. } | Error::NoConvergence { .. } => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

struct Outcome {
    report: RunReport,
    pretty_expected: Vec<Option<String>>,
    code: u8,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let started = Instant::now();
    match run(&cli, argv[1..].to_vec()) {
        Ok(out) => {
            let text = if cli.json {
                report::render_json(&out.report)
            } else {
                let mut t = report::render_human(&out.report, &out.pretty_expected);
                t.push_str(&format!("wall time: {:.3} ms\n", started.elapsed().as_secs_f64() * 1e3));
                t
            };
            // a closed pipe downstream is not our failure
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn tolerances(overrides: &[String]) -> Result<Tolerances, Failure> {
    let mut value = serde_json::to_value(Tolerances::default()).expect("plain data");
    for o in overrides {
        let (key, raw) = o
            .split_once('=')
            .ok_or_else(|| input_error(format!("--tol expects KEY=VALUE, got '{o}'")))?;
        let slot = value
            .get_mut(key)
            .ok_or_else(|| input_error(format!("unknown tolerance '{key}'")))?;
        let parsed: serde_json::Value =
            serde_json::from_str(raw).map_err(|_| input_error(format!("bad value for {key}: '{raw}'")))?;
        *slot = parsed;
    }
    serde_json::from_value(value).map_err(|e| input_error(format!("invalid tolerance: {e}")))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load_scenario(path: &Path) -> Result<Scenario, Failure> {
    let name = path.file_stem().map_or("file".into(), |s| s.to_string_lossy().into_owned());
    Ok(ScenarioFile::from_json(&read(path)?)?.into_scenario(&name)?)
}

fn done(report: RunReport) -> Outcome {
    Outcome {
        report,
        pretty_expected: vec![],
        code: 0,
    }
}

fn run(cli: &Cli, command: Vec<String>) -> Result<Outcome, Failure> {
    let tol = tolerances(&cli.tol)?;
    let report = |result| RunReport {
        command: command.clone(),
        result,
    };
    match &cli.command {
        Command::Scenario(ScenarioCmd::List) => {
            let scenarios = scenarios::CATALOG
                .iter()
                .map(|name| {
                    let s = scenarios::build(name)?;
                    Ok(CatalogEntry {
                        name: s.name,
                        description: s.description,
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(done(report(Body::ScenarioList { scenarios })))
        }
        Command::Scenario(ScenarioCmd::Run { name }) => {
            let s = scenarios::build(name)?;
            let facts = s.check_facts(&tol)?;
            let all_passed = facts.iter().all(|f| f.passed);
            let pretty_expected = s
                .facts()
                .iter()
                .map(|f| match &f.kind {
                    FactKind::Distribution { expected, .. } => Some(format::pairs(expected)),
                    _ => None,
                })
                .collect();
            Ok(Outcome {
                report: report(Body::ScenarioRun {
                    scenario: s.name.clone(),
                    description: s.description.clone(),
                    facts,
                    all_passed,
                }),
                pretty_expected,
                code: if all_passed { 0 } else { 1 },
            })
        }
        Command::Abl { file, obs } => {
            let s = load_scenario(file)?;
            let o = s.observable(obs)?;
            let d = distribution(s.selection(), o, &tol)?;
            let element = element_from_distribution(o.label(), &d, &tol);
            Ok(done(report(Body::Abl {
                observable: obs.clone(),
                formula: if s.post().is_some() { "abl" } else { "born" }.to_string(),
                distribution: d,
                element,
            })))
        }
        Command::Rules(args) => {
            let s = match (&args.file, &args.builtin) {
                (Some(f), _) => load_scenario(f)?,
                (None, Some(name)) => scenarios::build(name)?,
                (None, None) => unreachable!("clap enforces one source"),
            };
            let (a, b) = (s.observable(&args.a)?, s.observable(&args.b)?);
            let r = match args.rule {
                RuleKind::Sum => check_sum_rule(s.selection(), a, b, args.r1, args.r2, &tol)?,
                RuleKind::Product => check_product_rule(s.selection(), a, b, &tol)?,
            };
            let expected = known_rule_expectation(args, &r.verdict);
            Ok(done(report(Body::Rule { report: r, expected })))
        }
        Command::Sweep { axes, pairing } => {
            let axes = axes
                .chars()
                .map(Axis::try_from)
                .collect::<Result<Vec<_>, _>>()?;
            if axes.is_empty() {
                return Err(input_error("--axes needs at least one of x, y, z"));
            }
            let (cases, interpretation) = match pairing {
                Pairing::Crossed => (
                    crossed_pair_cases(&axes, &axes),
                    "post-selection |up_1a up_2b> with both outcomes +1, tested on (s1b, s2a); (a, b) = (x, y) is the pair (s1y, s2x)",
                ),
                Pairing::Fixed => (
                    fixed_pair_cases(&axes, &axes),
                    "post-selection |up_1a up_2b> with both outcomes +1, always tested on (s1y, s2x)",
                ),
                Pairing::Signs => (
                    outcome_sign_cases(),
                    "post-selections |+-_1x +-_2y> over all outcome signs, tested on (s1y, s2x)",
                ),
            };
            let rows = sweep_postselections(&singlet(), &cases, &tol)?;
            let expected = (*pairing == Pairing::Crossed).then(|| Expected {
                claim: "every evaluated post-selection violates both rules".into(),
                provenance: Provenance::Derived,
                met: rows.iter().filter(|r| !r.is_skipped()).all(|r| r.both_violated()),
            });
            Ok(done(report(Body::Sweep {
                pairing: format!("{pairing:?}").to_lowercase(),
                interpretation: interpretation.into(),
                rows,
                expected,
            })))
        }
        Command::Context(ContextCmd::Search { preset, file }) => {
            let (source, system, expected_space) = match (preset, file) {
                (Some(Preset::Ghz3), _) => ("preset ghz3".to_string(), ghz3_constraints(&tol)?, Some(64)),
                (Some(Preset::MerminSquare), _) => {
                    ("preset mermin-square".to_string(), mermin_square_constraints(&tol)?, Some(512))
                }
                (None, Some(f)) => (format!("file {}", f.display()), ConstraintSystem::from_json(&read(f)?)?, None),
                (None, None) => unreachable!("clap enforces one source"),
            };
            let result = exhaustive_assignment_search(&system)?;
            let expected = expected_space.map(|space| Expected {
                claim: format!("0 of {space}"),
                provenance: Provenance::Derived,
                met: result.count == 0 && result.search_space == space,
            });
            Ok(done(report(Body::Search {
                source,
                parity_obstruction: parity_obstruction(&system),
                result,
                expected,
            })))
        }
        Command::Ks(KsCmd::Color { file }) => {
            let instance = KsInstance::from_json(&read(file)?, &tol)?;
            let result = ks_coloring_search(&instance)?;
            Ok(done(report(Body::KsColor { result })))
        }
    }
}

/// Verdicts stated for the built-in singlet scenario.
fn known_rule_expectation(args: &RulesArgs, verdict: &Verdict) -> Option<Expected> {
    if args.builtin.as_deref() != Some("epr-bohm-vaidman") {
        return None;
    }
    let pair = (args.a.as_str(), args.b.as_str());
    if pair != ("s1y", "s2x") && pair != ("s2x", "s1y") {
        return None;
    }
    let want = match args.rule {
        RuleKind::Product => Verdict::ValueMismatch,
        RuleKind::Sum if args.r1 == 1.0 && args.r2 == 1.0 => Verdict::CombinedNotElement,
        RuleKind::Sum => return None,
    };
    Some(Expected {
        claim: format!("{want:?}"),
        provenance: Provenance::Paper,
        met: *verdict == want,
    })
}
