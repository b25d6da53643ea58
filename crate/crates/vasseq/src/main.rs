//! Command-line surface tying the pipeline together: machine validation and
//! execution, the N/A/B constructions, bounded language enumeration and
//! comparison, simulation games, resolver validation and the end-to-end
//! harness.
//!
//! Exit codes: 0 success / equal-up-to, 1 distinguished (witness found,
//! Spoiler win, failed assertion), 2 resource bound or inconclusive,
//! 3 parse or validation errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use vasseq::equivalence::{self, ContainVerdict, EqVerdict, EquivalenceError};
use vasseq::formats;
use vasseq::games::{self, GameVerdict, GamesError};
use vasseq::reduction;
use vasseq::resolver::{self, HdVerdict};
use vasseq::twocm::{CmRunResult, CounterMachine};
use vasseq::vass::{Budget, ResourceBound, Vass, DEFAULT_NODE_BUDGET};

#[derive(Parser)]
#[command(name = "vasseq", version, about = "VASS constructions, bounded language equivalence and simulation games")]
struct Cli {
    /// Node budget for bounded searches.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized commands; accepted for reproducible drivers even
    /// though every shipped subcommand is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    #[value(name = "machine-readable")]
    MachineReadable,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Semantics {
    Trace,
    Cover,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Construction {
    N,
    A,
    B,
}

#[derive(Subcommand)]
enum Command {
    /// Check the two-counter-machine shape rules.
    Validate { file: PathBuf },
    /// Run a two-counter machine from q_i(0,0) with bounded fuel.
    Run {
        file: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        fuel: usize,
    },
    /// Build the auxiliary VASS N, the deterministic VASS A or the
    /// history-deterministic VASS B from a machine.
    Build {
        which: Construction,
        file: PathBuf,
        /// Write the VASS document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a DOT rendering.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Enumerate the bounded language of a VASS.
    Lang {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        maxlen: usize,
        #[arg(long, value_enum, default_value_t = Semantics::Trace)]
        semantics: Semantics,
    },
    /// Compare two bounded languages; prints a distinguishing witness.
    Eq {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 8)]
        maxlen: usize,
        #[arg(long, value_enum, default_value_t = Semantics::Trace)]
        semantics: Semantics,
    },
    /// Bounded language containment of the first VASS in the second.
    Contain {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 8)]
        maxlen: usize,
    },
    /// Bounded simulation game: does the first VASS (Duplicator) simulate
    /// the second (Spoiler)?
    Sim {
        duplicator: PathBuf,
        spoiler: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Both directions of the bounded simulation game.
    Twosim {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Build B and validate its resolver at bounded length.
    ResolverCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        maxlen: usize,
    },
    /// The full harness: construction, determinism, history-determinism and
    /// the halting-iff-distinguished consequence.
    Theorem {
        file: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        fuel: usize,
        #[arg(long, default_value_t = 8)]
        maxlen: usize,
    },
}

enum CliError {
    /// Exit 2: a bounded search gave up or the harness cannot decide.
    Bound(String),
    /// Exit 3: unreadable input or broken document.
    Input(String),
}

impl From<ResourceBound> for CliError {
    fn from(e: ResourceBound) -> Self {
        CliError::Bound(e.to_string())
    }
}

impl From<GamesError> for CliError {
    fn from(e: GamesError) -> Self {
        CliError::Bound(e.to_string())
    }
}

impl From<EquivalenceError> for CliError {
    fn from(e: EquivalenceError) -> Self {
        CliError::Bound(e.to_string())
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_cm(path: &Path) -> Result<CounterMachine, CliError> {
    formats::parse_cm(&read_file(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_vass(path: &Path) -> Result<Vass, CliError> {
    formats::parse_vass(&read_file(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

struct Report {
    /// One line per row in text mode.
    rows: Vec<String>,
    json: serde_json::Value,
    exit: ExitCode,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let mut budget = Budget::new(cli.budget);
    match dispatch(&cli.command, &mut budget) {
        Ok(report) => {
            match cli.format {
                Format::Text => {
                    for row in &report.rows {
                        println!("{row}");
                    }
                }
                Format::MachineReadable => {
                    let mut doc = report.json;
                    doc["stats"] = json!({
                        "nodes_explored": budget.used(),
                        "max_antichain": budget.max_antichain(),
                        "wall_ms": started.elapsed().as_millis() as u64,
                        "seed": cli.seed,
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
                }
            }
            report.exit
        }
        Err(CliError::Bound(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(command: &Command, budget: &mut Budget) -> Result<Report, CliError> {
    match command {
        Command::Validate { file } => {
            // parse_cm already validates; reaching here means the machine is fine
            let m = load_cm(file)?;
            Ok(Report {
                rows: vec![format!(
                    "valid 2cm with {} states and {} transitions",
                    m.states().len(),
                    m.transitions().len()
                )],
                json: json!({ "command": "validate", "valid": true,
                              "states": m.states().len(), "transitions": m.transitions().len() }),
                exit: ExitCode::SUCCESS,
            })
        }
        Command::Run { file, fuel } => {
            let m = load_cm(file)?;
            let result = m.run_bounded(*fuel);
            let (rows, json, exit) = match &result {
                CmRunResult::Halted { steps, ops } => {
                    let ops: Vec<String> = ops.iter().map(|o| o.name().to_owned()).collect();
                    (
                        vec![format!("halted after {steps} steps: {}", ops.join(" "))],
                        json!({ "command": "run", "halted": true, "steps": steps, "ops": ops }),
                        ExitCode::SUCCESS,
                    )
                }
                CmRunResult::Running { after } => (
                    vec![format!("still running after {after} steps")],
                    json!({ "command": "run", "halted": false, "after": after }),
                    ExitCode::SUCCESS,
                ),
            };
            Ok(Report { rows, json, exit })
        }
        Command::Build { which, file, out, dot } => {
            let m = load_cm(file)?;
            let err = |e: reduction::ReductionError| CliError::Input(e.to_string());
            let (v, tags) = match which {
                Construction::N => (reduction::build_n(&m).map_err(err)?, None),
                Construction::A => (reduction::build_a(&m).map_err(err)?, None),
                Construction::B => {
                    let output = reduction::build_b(&m).map_err(err)?;
                    (output.b, Some(output.tags))
                }
            };
            let doc = formats::print_vass(&v);
            let mut rows = Vec::new();
            match out {
                Some(path) => {
                    fs::write(path, &doc)
                        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                    rows.push(format!("wrote {}", path.display()));
                }
                None => rows.push(doc.trim_end().to_owned()),
            }
            if let Some(path) = dot {
                let rendered = formats::export_dot(&v, tags.as_ref());
                fs::write(path, rendered)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                rows.push(format!("wrote {}", path.display()));
            }
            Ok(Report {
                rows,
                json: json!({ "command": "build",
                              "states": v.states().len(), "transitions": v.transitions().len() }),
                exit: ExitCode::SUCCESS,
            })
        }
        Command::Lang { file, maxlen, semantics } => {
            let v = load_vass(file)?;
            let words = match semantics {
                Semantics::Trace => v.bounded_trace_language(*maxlen, budget)?,
                Semantics::Cover => v.bounded_cover_language(*maxlen, budget)?,
            };
            let rendered: Vec<String> = words.iter().map(|w| v.format_word(w)).collect();
            Ok(Report {
                rows: rendered.iter().map(|w| format!("{w:?}")).collect(),
                json: json!({ "command": "lang", "maxlen": maxlen, "words": rendered }),
                exit: ExitCode::SUCCESS,
            })
        }
        Command::Eq { first, second, maxlen, semantics } => {
            let a = load_vass(first)?;
            let b = load_vass(second)?;
            let verdict = match semantics {
                Semantics::Trace => equivalence::trace_equal_bounded(&a, &b, *maxlen, budget)?,
                Semantics::Cover => equivalence::cover_equal_bounded(&a, &b, *maxlen, budget)?,
            };
            let rows = vec![equivalence::render_verdict(&a, &verdict)];
            let (json, exit) = match &verdict {
                EqVerdict::EqualUpTo(n) => (
                    json!({ "command": "eq", "verdict": "equal-up-to", "maxlen": n }),
                    ExitCode::SUCCESS,
                ),
                EqVerdict::Distinguished { word, in_first } => (
                    json!({ "command": "eq", "verdict": "distinguished",
                            "witness": a.word_letters(word), "in_first": in_first }),
                    ExitCode::from(1),
                ),
            };
            Ok(Report { rows, json, exit })
        }
        Command::Contain { first, second, maxlen } => {
            let a = load_vass(first)?;
            let b = load_vass(second)?;
            let verdict = equivalence::containment_bounded(&a, &b, *maxlen, budget)?;
            let (rows, json, exit) = match &verdict {
                ContainVerdict::ContainedUpTo(n) => (
                    vec![format!("no counterexample up to length {n}")],
                    json!({ "command": "contain", "verdict": "contained-up-to", "maxlen": n }),
                    ExitCode::SUCCESS,
                ),
                ContainVerdict::Witness(w) => (
                    vec![format!("witness outside the second language: {:?}", a.format_word(w))],
                    json!({ "command": "contain", "verdict": "witness",
                            "witness": a.word_letters(w) }),
                    ExitCode::from(1),
                ),
            };
            Ok(Report { rows, json, exit })
        }
        Command::Sim { duplicator, spoiler, depth } => {
            let dup = load_vass(duplicator)?;
            let spoil = load_vass(spoiler)?;
            let verdict = games::simulates_bounded(&dup, &spoil, *depth, budget)?;
            Ok(render_game("sim", &spoil, verdict))
        }
        Command::Twosim { first, second, depth } => {
            let a = load_vass(first)?;
            let b = load_vass(second)?;
            let (ab, ba) = games::two_sided_bounded(&a, &b, *depth, budget)?;
            let first_report = render_game("twosim", &b, ab);
            let second_report = render_game("twosim", &a, ba);
            let exit = if first_report.exit == ExitCode::SUCCESS
                && second_report.exit == ExitCode::SUCCESS
            {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
            Ok(Report {
                rows: vec![
                    format!("first simulates second: {}", first_report.rows[0]),
                    format!("second simulates first: {}", second_report.rows[0]),
                ],
                json: json!({ "command": "twosim",
                              "first_simulates_second": first_report.json,
                              "second_simulates_first": second_report.json }),
                exit,
            })
        }
        Command::ResolverCheck { file, maxlen } => {
            let m = load_cm(file)?;
            let output = reduction::build_b(&m).map_err(|e| CliError::Input(e.to_string()))?;
            let r = resolver::jancar_resolver(&output);
            let verdict = resolver::check_history_det_bounded(&output.b, &r, *maxlen, budget)?;
            let (rows, json, exit) = match &verdict {
                HdVerdict::OkUpTo(n) => (
                    vec![format!("resolver follows every accepted word up to length {n}")],
                    json!({ "command": "resolver-check", "verdict": "ok-up-to", "maxlen": n }),
                    ExitCode::SUCCESS,
                ),
                HdVerdict::Counterexample(w) => (
                    vec![format!("resolver loses the word {:?}", output.b.format_word(w))],
                    json!({ "command": "resolver-check", "verdict": "counterexample",
                            "witness": output.b.word_letters(w) }),
                    ExitCode::from(1),
                ),
            };
            Ok(Report { rows, json, exit })
        }
        Command::Theorem { file, fuel, maxlen } => {
            let m = load_cm(file)?;
            let report = equivalence::theorem_harness(&m, *fuel, *maxlen, budget)?;
            let mut rows = vec![format!(
                "machine {}",
                if report.machine_halts { "halts" } else { "does not halt" }
            )];
            if let Some(w) = &report.halting_word {
                rows.push(format!("halting word: {:?}", w.join(" ")));
            }
            for a in &report.assertions {
                rows.push(format!(
                    "[{}] {}{}",
                    if a.passed { "pass" } else { "FAIL" },
                    a.name,
                    if a.detail.is_empty() { String::new() } else { format!(" ({})", a.detail) }
                ));
            }
            rows.push(report.verdict.clone());
            let exit = if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) };
            let json = serde_json::to_value(&report).expect("report serializes");
            Ok(Report {
                rows,
                json: json!({ "command": "theorem", "report": json }),
                exit,
            })
        }
    }
}

fn render_game(command: &str, spoiler: &Vass, verdict: GameVerdict) -> Report {
    match verdict {
        GameVerdict::NoRefutationUpTo(depth) => Report {
            rows: vec![format!("no refutation up to depth {depth}")],
            json: json!({ "command": command, "verdict": "no-refutation-up-to", "depth": depth }),
            exit: ExitCode::SUCCESS,
        },
        GameVerdict::SpoilerWins { depth, witness } => Report {
            rows: vec![format!(
                "Spoiler wins in {depth} rounds via {:?}",
                spoiler.format_word(&witness)
            )],
            json: json!({ "command": command, "verdict": "spoiler-wins", "depth": depth,
                          "witness": spoiler.word_letters(&witness) }),
            exit: ExitCode::from(1),
        },
    }
}
