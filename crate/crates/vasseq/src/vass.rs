//! Vector addition systems with states: syntax, exact firing semantics,
//! bounded language enumeration and the syntactic/bounded structural checks.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index of a state in the owning [`Vass`]'s state table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

/// Index of a letter in the owning [`Vass`]'s alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LetterId(pub usize);

/// A transition `(source, letter, effect, target)`. The effect vector may be
/// negative componentwise; firability is checked against the configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub source: StateId,
    pub letter: LetterId,
    pub effect: Vec<i64>,
    pub target: StateId,
}

/// A state together with a nonnegative counter vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: StateId,
    pub counters: Vec<i64>,
}

impl Configuration {
    pub fn new(state: StateId, counters: Vec<i64>) -> Self {
        debug_assert!(counters.iter().all(|&c| c >= 0));
        Configuration { state, counters }
    }

    /// Componentwise comparison; both configurations must be in the same state.
    pub fn dominates(&self, other: &Configuration) -> bool {
        self.state == other.state
            && self
                .counters
                .iter()
                .zip(&other.counters)
                .all(|(a, b)| a >= b)
    }
}

/// A word over the owning VASS's alphabet. Ordered length-lexicographically
/// with the alphabet declaration order, which is the enumeration order used
/// by every bounded search.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<LetterId>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

/// A transition sequence firable from `start`; steps are indices into the
/// owning VASS's transition table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Run {
    pub start: Configuration,
    pub steps: Vec<usize>,
}

impl Run {
    pub fn empty(start: Configuration) -> Self {
        Run { start, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotEnabled {
    #[error("transition source does not match the configuration state")]
    WrongSource,
    #[error("firing would make counter {index} negative")]
    NegativeCounter { index: usize },
}

/// Exceeded the explicit node budget of a bounded search.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("node budget of {limit} explored configurations exhausted")]
pub struct ResourceBound {
    pub limit: u64,
}

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Explicit node budget threaded through every bounded search. Reports
/// [`ResourceBound`] instead of silently truncating.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: u64,
    max_antichain: usize,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0, max_antichain: 0 }
    }

    pub fn charge(&mut self, nodes: u64) -> Result<(), ResourceBound> {
        self.used += nodes;
        if self.used > self.limit {
            Err(ResourceBound { limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn note_antichain(&mut self, len: usize) {
        self.max_antichain = self.max_antichain.max(len);
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn max_antichain(&self) -> usize {
        self.max_antichain
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_NODE_BUDGET)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VassBuildError {
    #[error("duplicate state name {0:?}")]
    DuplicateState(String),
    #[error("duplicate letter {0:?}")]
    DuplicateLetter(String),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
    #[error("effect vector has length {got}, dimension is {dimension}")]
    EffectLength { got: usize, dimension: usize },
    #[error("counter vector has length {got}, dimension is {dimension}")]
    CounterLength { got: usize, dimension: usize },
    #[error("negative counter in configuration of state {0:?}")]
    NegativeCounters(String),
    #[error("no initial configuration given")]
    NoInitial,
}

/// Assembles a [`Vass`] by name; the finished value is immutable.
#[derive(Debug, Clone)]
pub struct VassBuilder {
    dimension: usize,
    alphabet: Vec<String>,
    states: Vec<String>,
    transitions: Vec<(String, String, Vec<i64>, String)>,
    initial: Option<(String, Vec<i64>)>,
    finals: Vec<(String, Vec<i64>)>,
}

impl VassBuilder {
    pub fn new(dimension: usize) -> Self {
        VassBuilder {
            dimension,
            alphabet: Vec::new(),
            states: Vec::new(),
            transitions: Vec::new(),
            initial: None,
            finals: Vec::new(),
        }
    }

    pub fn letter(mut self, name: &str) -> Self {
        self.alphabet.push(name.to_owned());
        self
    }

    pub fn letters<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, names: I) -> Self {
        for n in names {
            self.alphabet.push(n.as_ref().to_owned());
        }
        self
    }

    pub fn state(mut self, name: &str) -> Self {
        self.states.push(name.to_owned());
        self
    }

    pub fn transition(mut self, source: &str, letter: &str, effect: Vec<i64>, target: &str) -> Self {
        self.transitions
            .push((source.to_owned(), letter.to_owned(), effect, target.to_owned()));
        self
    }

    pub fn initial(mut self, state: &str, counters: Vec<i64>) -> Self {
        self.initial = Some((state.to_owned(), counters));
        self
    }

    pub fn final_config(mut self, state: &str, counters: Vec<i64>) -> Self {
        self.finals.push((state.to_owned(), counters));
        self
    }

    pub fn build(self) -> Result<Vass, VassBuildError> {
        let mut state_index = HashMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if state_index.insert(s.clone(), StateId(i)).is_some() {
                return Err(VassBuildError::DuplicateState(s.clone()));
            }
        }
        let mut letter_index = HashMap::new();
        for (i, l) in self.alphabet.iter().enumerate() {
            if letter_index.insert(l.clone(), LetterId(i)).is_some() {
                return Err(VassBuildError::DuplicateLetter(l.clone()));
            }
        }
        let lookup_state = |name: &str| {
            state_index
                .get(name)
                .copied()
                .ok_or_else(|| VassBuildError::UnknownState(name.to_owned()))
        };
        let lookup_letter = |name: &str| {
            letter_index
                .get(name)
                .copied()
                .ok_or_else(|| VassBuildError::UnknownLetter(name.to_owned()))
        };
        let check_counters = |state: &str, counters: &[i64]| {
            if counters.len() != self.dimension {
                return Err(VassBuildError::CounterLength {
                    got: counters.len(),
                    dimension: self.dimension,
                });
            }
            if counters.iter().any(|&c| c < 0) {
                return Err(VassBuildError::NegativeCounters(state.to_owned()));
            }
            Ok(())
        };

        let mut transitions = Vec::with_capacity(self.transitions.len());
        for (src, letter, effect, tgt) in &self.transitions {
            if effect.len() != self.dimension {
                return Err(VassBuildError::EffectLength {
                    got: effect.len(),
                    dimension: self.dimension,
                });
            }
            transitions.push(Transition {
                source: lookup_state(src)?,
                letter: lookup_letter(letter)?,
                effect: effect.clone(),
                target: lookup_state(tgt)?,
            });
        }

        let (init_state, init_counters) = self.initial.ok_or(VassBuildError::NoInitial)?;
        check_counters(&init_state, &init_counters)?;
        let initial = Configuration::new(lookup_state(&init_state)?, init_counters);

        let mut finals = Vec::with_capacity(self.finals.len());
        for (state, counters) in &self.finals {
            check_counters(state, counters)?;
            finals.push(Configuration::new(lookup_state(state)?, counters.clone()));
        }

        Ok(Vass {
            dimension: self.dimension,
            alphabet: self.alphabet,
            states: self.states,
            transitions,
            initial,
            finals,
        })
    }
}

/// A k-VASS: alphabet, states, integer-effect transitions, an initial
/// configuration and a finite set of final configurations. Acceptance is by
/// coverability of some final configuration; trace semantics is the special
/// case where every state at the zero vector is final.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vass {
    dimension: usize,
    alphabet: Vec<String>,
    states: Vec<String>,
    transitions: Vec<Transition>,
    initial: Configuration,
    finals: Vec<Configuration>,
}

impl Vass {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn initial(&self) -> &Configuration {
        &self.initial
    }

    pub fn finals(&self) -> &[Configuration] {
        &self.finals
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.states[id.0]
    }

    pub fn letter_name(&self, id: LetterId) -> &str {
        &self.alphabet[id.0]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(StateId)
    }

    pub fn letter_id(&self, name: &str) -> Option<LetterId> {
        self.alphabet.iter().position(|l| l == name).map(LetterId)
    }

    /// Builds a word from letter names; `None` if any name is foreign.
    pub fn word(&self, letters: &[&str]) -> Option<Word> {
        letters.iter().map(|l| self.letter_id(l)).collect::<Option<Vec<_>>>().map(Word)
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.0.iter()
            .map(|&l| self.letter_name(l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn word_letters(&self, w: &Word) -> Vec<String> {
        w.0.iter().map(|&l| self.letter_name(l).to_owned()).collect()
    }

    /// Same alphabet, same order. Words are exchangeable between two VASSs
    /// exactly when this holds.
    pub fn same_alphabet(&self, other: &Vass) -> bool {
        self.alphabet == other.alphabet
    }

    /// Configuration at a named state; counters checked against the dimension.
    pub fn config(&self, state: &str, counters: Vec<i64>) -> Option<Configuration> {
        if counters.len() != self.dimension || counters.iter().any(|&c| c < 0) {
            return None;
        }
        self.state_id(state).map(|s| Configuration::new(s, counters))
    }

    /// Transitions with the given source and letter that can be fired in `c`,
    /// in transition insertion order.
    pub fn enabled(&self, c: &Configuration, letter: LetterId) -> Vec<usize> {
        self.transitions
            .iter()
            .enumerate()
            .filter(|(_, t)| {
                t.source == c.state
                    && t.letter == letter
                    && c.counters.iter().zip(&t.effect).all(|(u, v)| u + v >= 0)
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// All transition indices firable in `c`, any letter, insertion order.
    pub fn enabled_any(&self, c: &Configuration) -> Vec<usize> {
        self.transitions
            .iter()
            .enumerate()
            .filter(|(_, t)| {
                t.source == c.state
                    && c.counters.iter().zip(&t.effect).all(|(u, v)| u + v >= 0)
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Does the end configuration of the run cover some final configuration?
    pub fn accepting(&self, c: &Configuration) -> bool {
        self.finals.iter().any(|f| c.dominates(f))
    }

    /// Replays a run, verifying consecutive firability.
    pub fn replay(&self, run: &Run) -> Result<Configuration, NotEnabled> {
        let mut c = run.start.clone();
        for &i in &run.steps {
            c = fire(&c, &self.transitions[i])?;
        }
        Ok(c)
    }

    /// The word a run reads.
    pub fn run_word(&self, run: &Run) -> Word {
        Word(run.steps.iter().map(|&i| self.transitions[i].letter).collect())
    }

    /// One antichain step: all successors of `set` over `letter`, pruned to
    /// the componentwise-maximal configurations per state.
    fn step_antichain(&self, set: &[Configuration], letter: LetterId) -> Vec<Configuration> {
        let mut next = Vec::new();
        for c in set {
            for i in self.enabled(c, letter) {
                let succ = fire(c, &self.transitions[i]).expect("enabled transition fires");
                antichain_insert(&mut next, succ);
            }
        }
        next
    }

    /// Is some run over `w` firable from `c`? Successor sets are pruned to
    /// their per-state maxima, sound by readability monotonicity.
    pub fn reads(&self, c: &Configuration, w: &Word) -> bool {
        let mut set = vec![c.clone()];
        for &letter in &w.0 {
            set = self.step_antichain(&set, letter);
            if set.is_empty() {
                return false;
            }
        }
        true
    }

    /// All words of length at most `maxlen` readable from the initial
    /// configuration, in length-lexicographic order. Prefix-closed.
    pub fn bounded_trace_language(
        &self,
        maxlen: usize,
        budget: &mut Budget,
    ) -> Result<Vec<Word>, ResourceBound> {
        self.bounded_language(maxlen, budget, false)
    }

    /// All words of length at most `maxlen` read by runs from the initial
    /// configuration that end covering some final configuration.
    pub fn bounded_cover_language(
        &self,
        maxlen: usize,
        budget: &mut Budget,
    ) -> Result<Vec<Word>, ResourceBound> {
        self.bounded_language(maxlen, budget, true)
    }

    fn bounded_language(
        &self,
        maxlen: usize,
        budget: &mut Budget,
        cover: bool,
    ) -> Result<Vec<Word>, ResourceBound> {
        let mut words = Vec::new();
        let accepts = |set: &[Configuration]| {
            if cover {
                set.iter().any(|c| self.accepting(c))
            } else {
                !set.is_empty()
            }
        };
        let root = vec![self.initial.clone()];
        budget.charge(1)?;
        if accepts(&root) {
            words.push(Word::empty());
        }
        // Breadth-first by prefix length; letters in declaration order.
        let mut frontier = vec![(Word::empty(), root)];
        for _ in 0..maxlen {
            let mut next_frontier = Vec::new();
            for (word, set) in &frontier {
                for l in 0..self.alphabet.len() {
                    let letter = LetterId(l);
                    let succ = self.step_antichain(set, letter);
                    budget.charge(succ.len() as u64 + 1)?;
                    budget.note_antichain(succ.len());
                    if succ.is_empty() {
                        continue;
                    }
                    let mut w = word.clone();
                    w.0.push(letter);
                    if accepts(&succ) {
                        words.push(w.clone());
                    }
                    next_frontier.push((w, succ));
                }
            }
            frontier = next_frontier;
            if frontier.is_empty() {
                break;
            }
        }
        Ok(words)
    }

    /// Same VASS with `F = { q(0...0) : q in states }`, turning coverability
    /// acceptance into trace semantics.
    pub fn all_states_accepting(&self) -> Vass {
        let mut v = self.clone();
        v.finals = (0..self.states.len())
            .map(|i| Configuration::new(StateId(i), vec![0; self.dimension]))
            .collect();
        v
    }

    /// Purely syntactic: no two distinct transitions share (source, letter).
    pub fn is_deterministic(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.transitions
            .iter()
            .all(|t| seen.insert((t.source, t.letter)))
    }

    /// Exhaustively counts accepting runs per accepted word of length at most
    /// `maxlen`. No antichain pruning here: pruning breaks run counting.
    pub fn is_unambiguous_bounded(
        &self,
        maxlen: usize,
        budget: &mut Budget,
    ) -> Result<UnambiguityVerdict, ResourceBound> {
        let mut accepted: HashMap<Word, Run> = HashMap::new();
        // Depth-first over the run tree, children in transition order.
        let mut stack = vec![(Run::empty(self.initial.clone()), self.initial.clone())];
        while let Some((run, end)) = stack.pop() {
            budget.charge(1)?;
            if self.accepting(&end) {
                let word = self.run_word(&run);
                if let Some(prev) = accepted.get(&word) {
                    return Ok(UnambiguityVerdict::AmbiguousWitness {
                        word,
                        first: prev.clone(),
                        second: run,
                    });
                }
                accepted.insert(word, run.clone());
            }
            if run.len() < maxlen {
                for i in self.enabled_any(&end) {
                    let succ = fire(&end, &self.transitions[i]).expect("enabled transition fires");
                    let mut next = run.clone();
                    next.steps.push(i);
                    stack.push((next, succ));
                }
            }
        }
        Ok(UnambiguityVerdict::OkUpTo(maxlen))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnambiguityVerdict {
    OkUpTo(usize),
    AmbiguousWitness { word: Word, first: Run, second: Run },
}

impl fmt::Display for UnambiguityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnambiguityVerdict::OkUpTo(n) => write!(f, "unambiguous up to length {n}"),
            UnambiguityVerdict::AmbiguousWitness { word, .. } => {
                write!(f, "ambiguous witness of length {}", word.len())
            }
        }
    }
}

/// Fires `t` in `c`: target state, counters plus effect. Fails when the
/// source mismatches or any counter would go negative.
pub fn fire(c: &Configuration, t: &Transition) -> Result<Configuration, NotEnabled> {
    if c.state != t.source {
        return Err(NotEnabled::WrongSource);
    }
    let mut counters = c.counters.clone();
    for (i, (u, v)) in counters.iter_mut().zip(&t.effect).enumerate() {
        *u += v;
        if *u < 0 {
            return Err(NotEnabled::NegativeCounter { index: i });
        }
    }
    Ok(Configuration::new(t.target, counters))
}

/// Inserts `c` keeping only componentwise-maximal configurations per state.
pub fn antichain_insert(set: &mut Vec<Configuration>, c: Configuration) {
    if set.iter().any(|m| m.dominates(&c)) {
        return;
    }
    set.retain(|m| !c.dominates(m));
    set.push(c);
}
