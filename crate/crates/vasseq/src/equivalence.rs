//! Bounded language comparison over a synchronized antichain product, with
//! shortest distinguishing-word witnesses, and the end-to-end harness for the
//! halting-iff-inequality construction.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::reduction::{build_a, build_b, ReductionError};
use crate::resolver::{check_history_det_bounded, jancar_resolver, HdVerdict};
use crate::twocm::{CmRunResult, CounterMachine};
use crate::vass::{Budget, Configuration, LetterId, ResourceBound, Vass, Word};

/// Outcome of bounded language comparison. `EqualUpTo` is explicitly not a
/// claim about the unbounded languages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EqVerdict {
    EqualUpTo(usize),
    /// `word` is accepted by exactly one input, the one named by `in_first`,
    /// and is shortest (then enumeration-least) among all distinguishing
    /// words within the bound.
    Distinguished { word: Word, in_first: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContainVerdict {
    ContainedUpTo(usize),
    Witness(Word),
}

#[derive(Debug, Clone, Error)]
pub enum EquivalenceError {
    #[error("the two VASSs must share an alphabet")]
    AlphabetMismatch,
    #[error(transparent)]
    Resource(#[from] ResourceBound),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("bounded methods cannot decide this machine: it neither halts within the fuel nor has a control-unreachable final state")]
    Inconclusive,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}

/// Acceptance mode of the synchronized search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// A prefix counts as soon as it is readable.
    Trace,
    /// A prefix counts when some run over it ends covering a final
    /// configuration.
    Cover,
}

/// Breadth-first search over pairs of per-input antichains, one pair per
/// prefix, in length-lexicographic order. Prefixes reaching an already seen
/// antichain pair have identical futures and are merged.
fn product_search(
    a: &Vass,
    b: &Vass,
    maxlen: usize,
    budget: &mut Budget,
    mode: Mode,
    containment: bool,
) -> Result<Option<Word>, EquivalenceError> {
    if !a.same_alphabet(b) {
        return Err(EquivalenceError::AlphabetMismatch);
    }
    let accepts = |v: &Vass, set: &[Configuration]| match mode {
        Mode::Trace => !set.is_empty(),
        Mode::Cover => set.iter().any(|c| v.accepting(c)),
    };
    let distinguishes = |set_a: &[Configuration], set_b: &[Configuration]| {
        let in_a = accepts(a, set_a);
        let in_b = accepts(b, set_b);
        if containment {
            in_a && !in_b
        } else {
            in_a != in_b
        }
    };
    let live = |set_a: &[Configuration], set_b: &[Configuration]| {
        if containment {
            // only prefixes still readable on the left can produce a witness
            !set_a.is_empty()
        } else {
            !set_a.is_empty() || !set_b.is_empty()
        }
    };

    let root_a = step_closure(a, &[a.initial().clone()], None);
    let root_b = step_closure(b, &[b.initial().clone()], None);
    budget.charge(2)?;
    if distinguishes(&root_a, &root_b) {
        return Ok(Some(Word::empty()));
    }
    let mut visited: HashSet<(Vec<Configuration>, Vec<Configuration>)> = HashSet::new();
    visited.insert((canonical(&root_a), canonical(&root_b)));
    let mut queue = VecDeque::new();
    queue.push_back((Word::empty(), root_a, root_b));
    while let Some((word, set_a, set_b)) = queue.pop_front() {
        if word.len() == maxlen {
            continue;
        }
        for l in 0..a.alphabet().len() {
            let letter = LetterId(l);
            let next_a = step_closure(a, &set_a, Some(letter));
            let next_b = step_closure(b, &set_b, Some(letter));
            budget.charge((next_a.len() + next_b.len()) as u64 + 1)?;
            budget.note_antichain(next_a.len().max(next_b.len()));
            let mut w = word.clone();
            w.0.push(letter);
            if distinguishes(&next_a, &next_b) {
                return Ok(Some(w));
            }
            if !live(&next_a, &next_b) {
                continue;
            }
            let key = (canonical(&next_a), canonical(&next_b));
            if visited.insert(key) {
                queue.push_back((w, next_a, next_b));
            }
        }
    }
    Ok(None)
}

fn step_closure(v: &Vass, set: &[Configuration], letter: Option<LetterId>) -> Vec<Configuration> {
    match letter {
        None => set.to_vec(),
        Some(l) => {
            let mut next = Vec::new();
            for c in set {
                for i in v.enabled(c, l) {
                    let succ = crate::vass::fire(c, &v.transitions()[i]).expect("enabled transition fires");
                    crate::vass::antichain_insert(&mut next, succ);
                }
            }
            next
        }
    }
}

fn canonical(set: &[Configuration]) -> Vec<Configuration> {
    let mut sorted = set.to_vec();
    sorted.sort();
    sorted
}

/// Are the bounded trace languages of `a` and `b` equal up to `maxlen`?
/// Returns the shortest, enumeration-least distinguishing word otherwise.
pub fn trace_equal_bounded(
    a: &Vass,
    b: &Vass,
    maxlen: usize,
    budget: &mut Budget,
) -> Result<EqVerdict, EquivalenceError> {
    match product_search(a, b, maxlen, budget, Mode::Trace, false)? {
        Some(word) => {
            let in_first = a.reads(a.initial(), &word);
            Ok(EqVerdict::Distinguished { word, in_first })
        }
        None => Ok(EqVerdict::EqualUpTo(maxlen)),
    }
}

/// As [`trace_equal_bounded`] under coverability acceptance: a word counts
/// only if some run over it ends covering a final configuration.
pub fn cover_equal_bounded(
    a: &Vass,
    b: &Vass,
    maxlen: usize,
    budget: &mut Budget,
) -> Result<EqVerdict, EquivalenceError> {
    match product_search(a, b, maxlen, budget, Mode::Cover, false)? {
        Some(word) => {
            let in_first = {
                // decide which side accepts the witness
                let mut set = vec![a.initial().clone()];
                for &l in &word.0 {
                    set = step_closure(a, &set, Some(l));
                }
                set.iter().any(|c| a.accepting(c))
            };
            Ok(EqVerdict::Distinguished { word, in_first })
        }
        None => Ok(EqVerdict::EqualUpTo(maxlen)),
    }
}

/// First word (length-lexicographic order) readable in `a` but not in `b`,
/// if any within the bound. Trace semantics.
pub fn containment_bounded(
    a: &Vass,
    b: &Vass,
    maxlen: usize,
    budget: &mut Budget,
) -> Result<ContainVerdict, EquivalenceError> {
    match product_search(a, b, maxlen, budget, Mode::Trace, true)? {
        Some(word) => Ok(ContainVerdict::Witness(word)),
        None => Ok(ContainVerdict::ContainedUpTo(maxlen)),
    }
}

/// One named assertion of the end-to-end harness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Report of the full pipeline on one machine: construction, determinism of
/// A, bounded history-determinism of B, and the halting-iff-distinguished
/// consequence at desk scale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub machine_halts: bool,
    pub halting_word: Option<Vec<String>>,
    pub assertions: Vec<Assertion>,
    /// Rendered language verdict, for display and machine-readable output.
    pub verdict: String,
    pub witness: Option<Vec<String>>,
}

impl TheoremReport {
    pub fn all_passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

/// Runs the whole construction on `m` and checks its verifiable
/// consequences. Fails with [`EquivalenceError::Inconclusive`] when bounded
/// methods can certify neither halting nor non-halting.
pub fn theorem_harness(
    m: &CounterMachine,
    fuel: usize,
    maxlen: usize,
    budget: &mut Budget,
) -> Result<TheoremReport, EquivalenceError> {
    let violations = m.validate();
    if !violations.is_empty() {
        return Err(EquivalenceError::PreconditionFailed(format!(
            "machine fails validation: {} violation(s)",
            violations.len()
        )));
    }
    let a = build_a(m)?;
    let out = build_b(m)?;
    let b = &out.b;
    let mut assertions = Vec::new();

    let det = a.is_deterministic();
    assertions.push(Assertion {
        name: "A is deterministic".into(),
        passed: det,
        detail: String::new(),
    });

    let resolver = jancar_resolver(&out);
    let hd = check_history_det_bounded(b, &resolver, maxlen, budget)?;
    assertions.push(Assertion {
        name: format!("B is history-deterministic up to length {maxlen}"),
        passed: matches!(hd, HdVerdict::OkUpTo(_)),
        detail: match &hd {
            HdVerdict::OkUpTo(_) => String::new(),
            HdVerdict::Counterexample(w) => format!("resolver loses {:?}", b.format_word(w)),
        },
    });

    let run = m.run_bounded(fuel);
    match run {
        CmRunResult::Halted { .. } => {
            let letters = m.halting_word(fuel).expect("halting run has a word");
            if letters.len() > maxlen {
                return Err(EquivalenceError::Inconclusive);
            }
            let w = a
                .word(&letters.iter().map(|s| s.as_str()).collect::<Vec<_>>())
                .expect("halting word is over the alphabet of A");
            let eq = trace_equal_bounded(&a, b, w.len(), budget)?;
            let (passed, detail, witness) = match &eq {
                EqVerdict::Distinguished { word, in_first } => (
                    *in_first && word.len() <= w.len(),
                    format!("distinguished at length {}", word.len()),
                    Some(a.word_letters(word)),
                ),
                EqVerdict::EqualUpTo(n) => {
                    (false, format!("unexpectedly equal up to {n}"), None)
                }
            };
            assertions.push(Assertion {
                name: "halting machine yields a distinguishing word no longer than its halting word".into(),
                passed,
                detail,
            });
            Ok(TheoremReport {
                machine_halts: true,
                halting_word: Some(letters),
                assertions,
                verdict: render_verdict(&a, &eq),
                witness,
            })
        }
        CmRunResult::Running { .. } => {
            if !m.final_control_unreachable() {
                return Err(EquivalenceError::Inconclusive);
            }
            let eq = trace_equal_bounded(&a, b, maxlen, budget)?;
            assertions.push(Assertion {
                name: format!("non-halting machine gives equal bounded languages up to {maxlen}"),
                passed: matches!(eq, EqVerdict::EqualUpTo(_)),
                detail: String::new(),
            });
            let witness = match &eq {
                EqVerdict::Distinguished { word, .. } => Some(a.word_letters(word)),
                EqVerdict::EqualUpTo(_) => None,
            };
            Ok(TheoremReport {
                machine_halts: false,
                halting_word: None,
                assertions,
                verdict: render_verdict(&a, &eq),
                witness,
            })
        }
    }
}

pub fn render_verdict(v: &Vass, eq: &EqVerdict) -> String {
    match eq {
        EqVerdict::EqualUpTo(n) => format!("no difference up to length {n}"),
        EqVerdict::Distinguished { word, in_first } => format!(
            "distinguished by {:?} (accepted by the {} input only)",
            v.format_word(word),
            if *in_first { "first" } else { "second" }
        ),
    }
}
