//! The Spoiler/Duplicator simulation game at bounded depth, two-sided
//! simulation, and the consistency harness tying game verdicts to bounded
//! language comparison.

use std::collections::HashMap;

use thiserror::Error;

use crate::equivalence::{trace_equal_bounded, EqVerdict, EquivalenceError};
use crate::resolver::{check_history_det_bounded, HdVerdict, Resolver};
use crate::vass::{antichain_insert, fire, Budget, Configuration, ResourceBound, Vass, Word};

/// Outcome of bounded game solving. Bounded search can only certify Spoiler
/// wins; the complement is "no refutation found", not a Duplicator win.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameVerdict {
    /// Spoiler forces Duplicator stuck within `depth` rounds; `witness` is
    /// the letter sequence of Spoiler's optimal strategy against best
    /// Duplicator play.
    SpoilerWins { depth: usize, witness: Word },
    NoRefutationUpTo(usize),
}

#[derive(Debug, Clone, Error)]
pub enum GamesError {
    #[error("the two VASSs must share an alphabet")]
    AlphabetMismatch,
    #[error(transparent)]
    Resource(#[from] ResourceBound),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error(transparent)]
    Equivalence(#[from] EquivalenceError),
}

type Memo = HashMap<(Configuration, Configuration, usize), Option<(usize, Vec<crate::vass::LetterId>)>>;

struct GameSolver<'a> {
    duplicator: &'a Vass,
    spoiler: &'a Vass,
    memo: Memo,
}

impl GameSolver<'_> {
    /// Spoiler's fastest forced win from `(s, d)` within `depth` rounds, with
    /// the principal-variation word. `None` when no refutation exists within
    /// the horizon. Duplicator responses are pruned to their per-state maxima:
    /// more Duplicator counters can only help Duplicator.
    fn spoiler_wins(
        &mut self,
        s: &Configuration,
        d: &Configuration,
        depth: usize,
        budget: &mut Budget,
    ) -> Result<Option<(usize, Vec<crate::vass::LetterId>)>, ResourceBound> {
        if depth == 0 {
            return Ok(None);
        }
        let key = (s.clone(), d.clone(), depth);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        budget.charge(1)?;
        let mut best: Option<(usize, Vec<crate::vass::LetterId>)> = None;
        for i in self.spoiler.enabled_any(s) {
            let t = &self.spoiler.transitions()[i];
            let letter = t.letter;
            let s_next = fire(s, t).expect("enabled transition fires");
            let mut responses: Vec<Configuration> = Vec::new();
            for j in self.duplicator.enabled(d, letter) {
                let succ = fire(d, &self.duplicator.transitions()[j]).expect("enabled transition fires");
                antichain_insert(&mut responses, succ);
            }
            budget.note_antichain(responses.len());
            let candidate = if responses.is_empty() {
                Some((1, vec![letter]))
            } else {
                let mut worst: Option<(usize, Vec<crate::vass::LetterId>)> = None;
                let mut all_won = true;
                for d_next in &responses {
                    match self.spoiler_wins(&s_next, d_next, depth - 1, budget)? {
                        Some((rounds, word)) => {
                            if worst.as_ref().map_or(true, |(r, _)| rounds > *r) {
                                worst = Some((rounds, word));
                            }
                        }
                        None => {
                            all_won = false;
                            break;
                        }
                    }
                }
                if all_won {
                    let (rounds, tail) = worst.expect("nonempty responses");
                    let mut word = vec![letter];
                    word.extend(tail);
                    Some((rounds + 1, word))
                } else {
                    None
                }
            };
            if let Some((rounds, word)) = candidate {
                if best.as_ref().map_or(true, |(r, _)| rounds < *r) {
                    best = Some((rounds, word));
                }
            }
        }
        self.memo.insert(key, best.clone());
        Ok(best)
    }
}

/// Does `duplicator` simulate `spoiler` as far as `depth` rounds can tell?
/// A round is one Spoiler move plus one Duplicator response.
pub fn simulates_bounded(
    duplicator: &Vass,
    spoiler: &Vass,
    depth: usize,
    budget: &mut Budget,
) -> Result<GameVerdict, GamesError> {
    if !duplicator.same_alphabet(spoiler) {
        return Err(GamesError::AlphabetMismatch);
    }
    let mut solver = GameSolver { duplicator, spoiler, memo: HashMap::new() };
    let verdict = solver.spoiler_wins(spoiler.initial(), duplicator.initial(), depth, budget)?;
    Ok(match verdict {
        Some((rounds, letters)) => GameVerdict::SpoilerWins { depth: rounds, witness: Word(letters) },
        None => GameVerdict::NoRefutationUpTo(depth),
    })
}

/// Both game directions: (`a` simulates `b`, `b` simulates `a`).
pub fn two_sided_bounded(
    a: &Vass,
    b: &Vass,
    depth: usize,
    budget: &mut Budget,
) -> Result<(GameVerdict, GameVerdict), GamesError> {
    Ok((
        simulates_bounded(a, b, depth, budget)?,
        simulates_bounded(b, a, depth, budget)?,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Cross-check report of game verdicts against bounded language comparison.
/// Any failed check is an inconsistency between the two decision routes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub checks: Vec<ConsistencyCheck>,
    pub a_simulates_b: GameVerdict,
    pub b_simulates_a: GameVerdict,
    pub language_verdict: EqVerdict,
}

impl ConsistencyReport {
    pub fn consistent(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Cross-checks two-sided simulation against bounded trace equality for two
/// history-deterministic inputs: Spoiler-win witnesses must be bounded
/// language differences and a shortest distinguishing word must yield a
/// Spoiler win at depth equal to its length.
pub fn lemma_consistency(
    a: &Vass,
    b: &Vass,
    ra: &impl Resolver,
    rb: &impl Resolver,
    depth: usize,
    maxlen: usize,
    budget: &mut Budget,
) -> Result<ConsistencyReport, GamesError> {
    for (v, r, name) in [(a, ra as &dyn Resolver, "first"), (b, rb, "second")] {
        match check_history_det_bounded_dyn(v, r, maxlen, budget)? {
            HdVerdict::OkUpTo(_) => {}
            HdVerdict::Counterexample(w) => {
                return Err(GamesError::PreconditionFailed(format!(
                    "{name} input is not history-deterministic at bound {maxlen}: resolver loses {:?}",
                    v.format_word(&w)
                )));
            }
        }
    }

    let (ab, ba) = two_sided_bounded(a, b, depth, budget)?;
    let eq = trace_equal_bounded(a, b, maxlen, budget)?;
    let mut checks = Vec::new();

    // Each Spoiler win must be realized as a language difference: the witness
    // is readable on the Spoiler side and unreadable on the Duplicator side.
    let mut witness_check = |verdict: &GameVerdict, spoiler: &Vass, dup: &Vass, name: &str| {
        if let GameVerdict::SpoilerWins { witness, depth } = verdict {
            let in_spoiler = spoiler.reads(spoiler.initial(), witness);
            let in_dup = dup.reads(dup.initial(), witness);
            checks.push(ConsistencyCheck {
                name: name.to_owned(),
                passed: in_spoiler && !in_dup,
                detail: format!(
                    "witness {:?} (depth {depth}): readable-in-spoiler={in_spoiler}, readable-in-duplicator={in_dup}",
                    spoiler.format_word(witness)
                ),
            });
        }
    };
    witness_check(&ab, b, a, "spoiler-win witness of (a simulates b) is a language difference");
    witness_check(&ba, a, b, "spoiler-win witness of (b simulates a) is a language difference");

    match &eq {
        EqVerdict::Distinguished { word, in_first } => {
            let (spoiler, dup) = if *in_first { (a, b) } else { (b, a) };
            let verdict = simulates_bounded(dup, spoiler, word.len(), budget)?;
            let passed = matches!(&verdict, GameVerdict::SpoilerWins { .. });
            checks.push(ConsistencyCheck {
                name: "shortest distinguishing word yields a Spoiler win at its length".to_owned(),
                passed,
                detail: format!(
                    "word {:?} of length {} gave {verdict:?}",
                    spoiler.format_word(word),
                    word.len()
                ),
            });
        }
        EqVerdict::EqualUpTo(n) => {
            // Equal bounded languages: a Spoiler win within the language bound
            // would contradict the comparison.
            for (verdict, name) in [(&ab, "a simulates b"), (&ba, "b simulates a")] {
                if let GameVerdict::SpoilerWins { witness, .. } = verdict {
                    checks.push(ConsistencyCheck {
                        name: format!("no Spoiler win at depth <= {n} when languages agree ({name})"),
                        passed: witness.len() > *n,
                        detail: format!("witness length {}", witness.len()),
                    });
                }
            }
        }
    }

    Ok(ConsistencyReport { checks, a_simulates_b: ab, b_simulates_a: ba, language_verdict: eq })
}

fn check_history_det_bounded_dyn(
    v: &Vass,
    r: &dyn Resolver,
    maxlen: usize,
    budget: &mut Budget,
) -> Result<HdVerdict, ResourceBound> {
    struct Wrap<'a>(&'a dyn Resolver);
    impl Resolver for Wrap<'_> {
        fn choose(&self, v: &Vass, h: &crate::resolver::History, l: crate::vass::LetterId) -> Option<usize> {
            self.0.choose(v, h, l)
        }
    }
    check_history_det_bounded(v, &Wrap(r), maxlen, budget)
}
