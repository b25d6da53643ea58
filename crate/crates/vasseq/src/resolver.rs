//! Resolvers: on-the-fly resolution of nondeterminism, the concrete resolver
//! for the constructed VASS B, and bounded validation that a resolver
//! witnesses history-determinism.

use std::collections::HashSet;

use crate::reduction::{ProvenanceTag, ReductionOutput};
use crate::vass::{fire, Budget, Configuration, LetterId, NotEnabled, ResourceBound, Run, Vass, Word};

/// One past step: the configuration a transition was fired in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistoryStep {
    pub config: Configuration,
    pub transition: usize,
}

/// A run history: past (configuration, transition) pairs plus the current
/// configuration. The resolver interface takes the full history even though
/// the shipped resolvers are positional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct History {
    pub start: Configuration,
    pub steps: Vec<HistoryStep>,
    pub current: Configuration,
}

impl History {
    pub fn initial(start: Configuration) -> Self {
        History { start: start.clone(), steps: Vec::new(), current: start }
    }

    /// Appends a fired transition, advancing the current configuration.
    pub fn extend(&mut self, v: &Vass, transition: usize) -> Result<(), NotEnabled> {
        let next = fire(&self.current, &v.transitions()[transition])?;
        self.steps.push(HistoryStep { config: self.current.clone(), transition });
        self.current = next;
        Ok(())
    }

    pub fn to_run(&self) -> Run {
        Run {
            start: self.start.clone(),
            steps: self.steps.iter().map(|s| s.transition).collect(),
        }
    }
}

/// A choice function over histories. Any returned transition must be over the
/// given letter and enabled in the current configuration.
pub trait Resolver {
    fn choose(&self, v: &Vass, history: &History, letter: LetterId) -> Option<usize>;
}

/// Picks the lowest-index enabled transition over the letter. On a
/// deterministic VASS this is the only possible resolver.
#[derive(Debug, Clone, Default)]
pub struct FirstEnabledResolver;

impl Resolver for FirstEnabledResolver {
    fn choose(&self, v: &Vass, history: &History, letter: LetterId) -> Option<usize> {
        v.enabled(&history.current, letter).first().copied()
    }
}

/// The resolver for the constructed VASS B: at the two-way zero-test choice
/// it takes the gadget transition decrementing the tested counter whenever
/// that transition is enabled; with the counter at zero there is no choice.
/// Positional: the decision depends only on the current configuration and
/// letter.
#[derive(Debug, Clone)]
pub struct JancarResolver {
    gadget_entries: HashSet<usize>,
}

/// Builds the resolver from a [`ReductionOutput`]; the gadget-entering
/// transitions are identified through the provenance tags.
pub fn jancar_resolver(r: &ReductionOutput) -> JancarResolver {
    let gadget_states: HashSet<&str> = r
        .tags
        .iter()
        .filter(|(_, tag)| matches!(tag, ProvenanceTag::Gadget { .. }))
        .map(|(name, _)| name.as_str())
        .collect();
    let gadget_entries = r
        .b
        .transitions()
        .iter()
        .enumerate()
        .filter(|(_, t)| gadget_states.contains(r.b.state_name(t.target)))
        .map(|(i, _)| i)
        .collect();
    JancarResolver { gadget_entries }
}

impl Resolver for JancarResolver {
    fn choose(&self, v: &Vass, history: &History, letter: LetterId) -> Option<usize> {
        let enabled = v.enabled(&history.current, letter);
        enabled
            .iter()
            .copied()
            .find(|i| self.gadget_entries.contains(i))
            .or_else(|| enabled.first().copied())
    }
}

/// Where a resolver-guided run got stuck: the 1-based position of the letter
/// the resolver could not answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FailureAt(pub usize);

/// Replays `w` from the initial configuration, taking the resolver's
/// transition at each letter.
pub fn resolver_run(v: &Vass, r: &impl Resolver, w: &Word) -> Result<Run, FailureAt> {
    let mut history = History::initial(v.initial().clone());
    for (pos, &letter) in w.0.iter().enumerate() {
        match r.choose(v, &history, letter) {
            Some(t) => {
                let tr = &v.transitions()[t];
                assert_eq!(tr.letter, letter, "resolver answered with a transition over the wrong letter");
                history
                    .extend(v, t)
                    .expect("resolver answered with a transition that is not enabled");
            }
            None => return Err(FailureAt(pos + 1)),
        }
    }
    Ok(history.to_run())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HdVerdict {
    OkUpTo(usize),
    Counterexample(Word),
}

/// Bounded history-determinism check: every word of the bounded language must
/// be followable by the resolver into an accepting configuration. Acceptance
/// uses the VASS's own finals set, so the check serves coverability semantics
/// unchanged.
pub fn check_history_det_bounded(
    v: &Vass,
    r: &impl Resolver,
    maxlen: usize,
    budget: &mut Budget,
) -> Result<HdVerdict, ResourceBound> {
    for w in v.bounded_cover_language(maxlen, budget)? {
        match resolver_run(v, r, &w) {
            Ok(run) => {
                let end = v.replay(&run).expect("resolver run replays");
                if !v.accepting(&end) {
                    return Ok(HdVerdict::Counterexample(w));
                }
            }
            Err(_) => return Ok(HdVerdict::Counterexample(w)),
        }
    }
    Ok(HdVerdict::OkUpTo(maxlen))
}
