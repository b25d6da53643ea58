//! Compiles a validated two-counter machine into the auxiliary VASS N, the
//! deterministic VASS A and the history-deterministic VASS B.
//!
//! Naming scheme: N-copy states keep the machine state name, each zero-test
//! transition gets a fresh split state `<q>~<p>`, A suffixes `@A` and adds
//! the halt state `h@A`, B suffixes `@B` on its N-copy, `@A@B` on its A-copy
//! and names the gadget for the triple at `q` on counter `i` as `<q>!<i>@B`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::twocm::{CounterMachine, Op, Violation};
use crate::vass::{Vass, VassBuilder};

/// The alphabet of N, in declaration order.
pub const CM_ALPHABET: [&str; 6] = ["inc_1", "inc_2", "dec_1", "dec_2", "z_1", "z_2"];

/// The alphabet of A and B: the operations plus the halt letter.
pub const VASS_ALPHABET: [&str; 7] = ["inc_1", "inc_2", "dec_1", "dec_2", "z_1", "z_2", "h"];

pub const HALT_LETTER: &str = "h";

#[derive(Debug, Clone, Error)]
pub enum ReductionError {
    #[error("machine fails validation: {}", format_violations(.0))]
    InvalidMachine(Vec<Violation>),
    #[error("state name {0:?} collides with a generated split-state name")]
    NameCollision(String),
    #[error("not a VASS produced by build_n: {0}")]
    MalformedN(String),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Where a state of A or B comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProvenanceTag {
    /// Copy of the machine state `q`.
    NCopy(String),
    /// B's copy of A's copy of `q` (split states included).
    ACopy(String),
    /// Fresh middle state of a split zero-test.
    SplitState(String),
    /// B's crossing state for the triple at `q` on counter `i` (1-based).
    Gadget { source: String, counter: usize },
    /// The extra halt state reached by the `h` letter.
    HaltState,
}

/// The three constructed VASSs plus provenance tags for every state of A
/// and B. State names of A and B are disjoint by the naming scheme, so a
/// single map covers both.
#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub n: Vass,
    pub a: Vass,
    pub b: Vass,
    pub tags: BTreeMap<String, ProvenanceTag>,
}

/// A zero-test of the machine as it appears in N: `source --z_i--> split
/// --z_i--> target`, both transitions effect-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroTestTriple {
    pub source: String,
    pub split: String,
    pub target: String,
    /// 1-based counter index of the tested counter.
    pub counter: usize,
}

fn validated(m: &CounterMachine) -> Result<(), ReductionError> {
    let violations = m.validate();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ReductionError::InvalidMachine(violations))
    }
}

fn split_name(source: &str, target: &str) -> String {
    format!("{source}~{target}")
}

fn op_effect(op: Op) -> Vec<i64> {
    let mut effect = vec![0, 0];
    if op.is_inc() {
        effect[op.counter()] = 1;
    } else if op.is_dec() {
        effect[op.counter()] = -1;
    }
    effect
}

/// The N-part shared by all three constructions: machine states in
/// declaration order, then one split state per zero-test in transition order.
/// Returns state names and transitions as (source, letter, effect, target).
#[allow(clippy::type_complexity)]
fn n_parts(
    m: &CounterMachine,
) -> Result<(Vec<String>, Vec<(String, String, Vec<i64>, String)>), ReductionError> {
    let mut states: Vec<String> = m.states().to_vec();
    let mut transitions = Vec::new();
    for t in m.transitions() {
        let source = m.state_name(t.source).to_owned();
        let target = m.state_name(t.target).to_owned();
        if t.op.is_zero_test() {
            let split = split_name(&source, &target);
            if states.contains(&split) {
                return Err(ReductionError::NameCollision(split));
            }
            transitions.push((source, t.op.name().to_owned(), vec![0, 0], split.clone()));
            transitions.push((split.clone(), t.op.name().to_owned(), vec![0, 0], target));
            states.push(split);
        } else {
            transitions.push((source, t.op.name().to_owned(), op_effect(t.op), target));
        }
    }
    Ok((states, transitions))
}

/// The auxiliary VASS N: the machine with zero-tests split in two, trace
/// semantics (every state at the zero vector accepting).
pub fn build_n(m: &CounterMachine) -> Result<Vass, ReductionError> {
    validated(m)?;
    let (states, transitions) = n_parts(m)?;
    let mut builder = VassBuilder::new(2).letters(CM_ALPHABET);
    for s in &states {
        builder = builder.state(s);
    }
    for (src, letter, effect, tgt) in &transitions {
        builder = builder.transition(src, letter, effect.clone(), tgt);
    }
    builder = builder.initial(m.initial_name(), vec![0, 0]);
    for s in &states {
        builder = builder.final_config(s, vec![0, 0]);
    }
    Ok(builder.build().expect("generated N is well formed"))
}

/// The deterministic VASS A: N plus the halt state `h@A` and an effect-free
/// transition over `h` from the copy of the machine's final state.
pub fn build_a(m: &CounterMachine) -> Result<Vass, ReductionError> {
    validated(m)?;
    let (v, _) = build_a_tagged(m)?;
    Ok(v)
}

fn build_a_tagged(
    m: &CounterMachine,
) -> Result<(Vass, BTreeMap<String, ProvenanceTag>), ReductionError> {
    let (states, transitions) = n_parts(m)?;
    let halt = format!("{HALT_LETTER}@A");
    let suffixed = |s: &str| format!("{s}@A");

    let mut tags = BTreeMap::new();
    let mut builder = VassBuilder::new(2).letters(VASS_ALPHABET);
    for s in &states {
        let name = suffixed(s);
        let tag = if s.contains('~') {
            ProvenanceTag::SplitState(s.clone())
        } else {
            ProvenanceTag::NCopy(s.clone())
        };
        tags.insert(name.clone(), tag);
        builder = builder.state(&name);
    }
    tags.insert(halt.clone(), ProvenanceTag::HaltState);
    builder = builder.state(&halt);
    for (src, letter, effect, tgt) in &transitions {
        builder = builder.transition(&suffixed(src), letter, effect.clone(), &suffixed(tgt));
    }
    builder = builder.transition(&suffixed(m.final_name()), HALT_LETTER, vec![0, 0], &halt);
    builder = builder.initial(&suffixed(m.initial_name()), vec![0, 0]);
    for s in &states {
        builder = builder.final_config(&suffixed(s), vec![0, 0]);
    }
    builder = builder.final_config(&halt, vec![0, 0]);
    Ok((builder.build().expect("generated A is well formed"), tags))
}

/// The history-deterministic VASS B: a disjoint union of a copy of A and a
/// copy of N, crossable only through the gadget pair of each zero-test
/// triple, which decrements then increments the tested counter.
pub fn build_b(m: &CounterMachine) -> Result<ReductionOutput, ReductionError> {
    validated(m)?;
    let n = build_n(m)?;
    let (a, a_tags) = build_a_tagged(m)?;
    let triples = zero_test_triples(&n)?;

    let (states, transitions) = n_parts(m)?;
    let a_copy = |s: &str| format!("{s}@A@B");
    let n_copy = |s: &str| format!("{s}@B");
    let halt = format!("{HALT_LETTER}@A@B");

    let mut tags = a_tags;
    let mut builder = VassBuilder::new(2).letters(VASS_ALPHABET);
    // A-copy states first, then the N-copy, then one gadget per triple.
    for s in &states {
        let name = a_copy(s);
        tags.insert(name.clone(), ProvenanceTag::ACopy(s.clone()));
        builder = builder.state(&name);
    }
    tags.insert(halt.clone(), ProvenanceTag::HaltState);
    builder = builder.state(&halt);
    for s in &states {
        let name = n_copy(s);
        let tag = if s.contains('~') {
            ProvenanceTag::SplitState(s.clone())
        } else {
            ProvenanceTag::NCopy(s.clone())
        };
        tags.insert(name.clone(), tag);
        builder = builder.state(&name);
    }
    for triple in &triples {
        let name = format!("{}!{}@B", triple.source, triple.counter);
        tags.insert(
            name.clone(),
            ProvenanceTag::Gadget { source: triple.source.clone(), counter: triple.counter },
        );
        builder = builder.state(&name);
    }

    for (src, letter, effect, tgt) in &transitions {
        builder = builder.transition(&a_copy(src), letter, effect.clone(), &a_copy(tgt));
    }
    builder = builder.transition(&a_copy(m.final_name()), HALT_LETTER, vec![0, 0], &halt);
    for (src, letter, effect, tgt) in &transitions {
        builder = builder.transition(&n_copy(src), letter, effect.clone(), &n_copy(tgt));
    }
    for triple in &triples {
        let gadget = format!("{}!{}@B", triple.source, triple.counter);
        let letter = if triple.counter == 1 { "z_1" } else { "z_2" };
        let mut dec = vec![0, 0];
        dec[triple.counter - 1] = -1;
        let mut inc = vec![0, 0];
        inc[triple.counter - 1] = 1;
        builder = builder.transition(&n_copy(&triple.source), letter, dec, &gadget);
        builder = builder.transition(&gadget, letter, inc, &a_copy(&triple.target));
    }

    builder = builder.initial(&n_copy(m.initial_name()), vec![0, 0]);
    let all_states: Vec<String> = tags
        .keys()
        .filter(|name| name.ends_with("@B"))
        .cloned()
        .collect();
    // finals in state declaration order, not map order
    let mut b = builder;
    for s in &states {
        b = b.final_config(&a_copy(s), vec![0, 0]);
    }
    b = b.final_config(&halt, vec![0, 0]);
    for s in &states {
        b = b.final_config(&n_copy(s), vec![0, 0]);
    }
    for triple in &triples {
        b = b.final_config(&format!("{}!{}@B", triple.source, triple.counter), vec![0, 0]);
    }
    debug_assert_eq!(all_states.len(), states.len() * 2 + 1 + triples.len());

    Ok(ReductionOutput { n, a, b: b.build().expect("generated B is well formed"), tags })
}

/// Recovers the zero-test triples of a VASS produced by [`build_n`]: for each
/// split state exactly one incoming and one outgoing transition, both over
/// the same `z_i` letter and effect-free.
pub fn zero_test_triples(n: &Vass) -> Result<Vec<ZeroTestTriple>, ReductionError> {
    let malformed = |msg: String| ReductionError::MalformedN(msg);
    let mut triples = Vec::new();
    // iterate in transition order for a deterministic triple order
    let mut seen = std::collections::HashSet::new();
    for t in n.transitions() {
        let split = n.state_name(t.target);
        if !split.contains('~') || !seen.insert(split.to_owned()) {
            continue;
        }
        let incoming: Vec<_> = n
            .transitions()
            .iter()
            .filter(|u| n.state_name(u.target) == split)
            .collect();
        let outgoing: Vec<_> = n
            .transitions()
            .iter()
            .filter(|u| n.state_name(u.source) == split)
            .collect();
        let (inc, out) = match (incoming.as_slice(), outgoing.as_slice()) {
            ([i], [o]) => (*i, *o),
            _ => {
                return Err(malformed(format!(
                    "split state {split:?} must have exactly one incoming and one outgoing transition"
                )))
            }
        };
        if inc.letter != out.letter {
            return Err(malformed(format!("split state {split:?} letters differ")));
        }
        let letter = n.letter_name(inc.letter);
        let counter = match letter {
            "z_1" => 1,
            "z_2" => 2,
            _ => return Err(malformed(format!("split state {split:?} not over a zero-test letter"))),
        };
        if inc.effect.iter().any(|&e| e != 0) || out.effect.iter().any(|&e| e != 0) {
            return Err(malformed(format!("split state {split:?} transitions must be effect-free")));
        }
        triples.push(ZeroTestTriple {
            source: n.state_name(inc.source).to_owned(),
            split: split.to_owned(),
            target: n.state_name(out.target).to_owned(),
            counter,
        });
    }
    Ok(triples)
}
