//! Minsky-style two-counter machines: syntax validation, deterministic
//! execution, bounded halting detection and the halting-word construction.

use std::fmt;

/// The six counter operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Inc1,
    Inc2,
    Dec1,
    Dec2,
    Z1,
    Z2,
}

pub const ALL_OPS: [Op; 6] = [Op::Inc1, Op::Inc2, Op::Dec1, Op::Dec2, Op::Z1, Op::Z2];

impl Op {
    pub fn name(self) -> &'static str {
        match self {
            Op::Inc1 => "inc_1",
            Op::Inc2 => "inc_2",
            Op::Dec1 => "dec_1",
            Op::Dec2 => "dec_2",
            Op::Z1 => "z_1",
            Op::Z2 => "z_2",
        }
    }

    pub fn parse(s: &str) -> Option<Op> {
        ALL_OPS.into_iter().find(|op| op.name() == s)
    }

    /// The counter (0-based) the operation touches or tests.
    pub fn counter(self) -> usize {
        match self {
            Op::Inc1 | Op::Dec1 | Op::Z1 => 0,
            Op::Inc2 | Op::Dec2 | Op::Z2 => 1,
        }
    }

    pub fn is_inc(self) -> bool {
        matches!(self, Op::Inc1 | Op::Inc2)
    }

    pub fn is_dec(self) -> bool {
        matches!(self, Op::Dec1 | Op::Dec2)
    }

    pub fn is_zero_test(self) -> bool {
        matches!(self, Op::Z1 | Op::Z2)
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmTransition {
    pub source: usize,
    pub op: Op,
    pub target: usize,
}

/// A two-counter machine: states, initial and final state, operation-labelled
/// transitions. Shape constraints live in [`CounterMachine::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterMachine {
    states: Vec<String>,
    initial: usize,
    final_: usize,
    transitions: Vec<CmTransition>,
}

/// A broken shape rule, named by the offending state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub state: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "state {:?}: {}", self.state, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmConfig {
    pub state: usize,
    pub counters: [u64; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepResult {
    Halted,
    Next { config: CmConfig, op: Op },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CmRunResult {
    Halted { steps: usize, ops: Vec<Op> },
    Running { after: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnknownName {
    State(String),
}

impl fmt::Display for UnknownName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnknownName::State(s) => write!(f, "unknown state {s:?}"),
        }
    }
}

impl std::error::Error for UnknownName {}

impl CounterMachine {
    /// Builds a machine from named parts. States not listed but mentioned by
    /// a transition are rejected. No shape validation happens here.
    pub fn new(
        states: Vec<String>,
        initial: &str,
        final_: &str,
        transitions: Vec<(String, Op, String)>,
    ) -> Result<CounterMachine, UnknownName> {
        let index = |name: &str| {
            states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| UnknownName::State(name.to_owned()))
        };
        let initial = index(initial)?;
        let final_ = index(final_)?;
        let transitions = transitions
            .into_iter()
            .map(|(src, op, tgt)| {
                Ok(CmTransition { source: index(&src)?, op, target: index(&tgt)? })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CounterMachine { states, initial, final_, transitions })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, i: usize) -> &str {
        &self.states[i]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn final_state(&self) -> usize {
        self.final_
    }

    pub fn initial_name(&self) -> &str {
        &self.states[self.initial]
    }

    pub fn final_name(&self) -> &str {
        &self.states[self.final_]
    }

    pub fn transitions(&self) -> &[CmTransition] {
        &self.transitions
    }

    /// Checks the 2CM shape: no transitions out of the final state, and each
    /// non-final state carries either a single increment or a dec/z pair on
    /// the same counter. Violations are data, not errors.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        for (i, name) in self.states.iter().enumerate() {
            let outgoing: Vec<&CmTransition> =
                self.transitions.iter().filter(|t| t.source == i).collect();
            let mut report = |message: String| {
                violations.push(Violation { state: name.clone(), message });
            };
            if i == self.final_ {
                if !outgoing.is_empty() {
                    report("final state has outgoing transitions".to_owned());
                }
                continue;
            }
            match outgoing.as_slice() {
                [t] if t.op.is_inc() => {}
                [t] => report(format!("single outgoing transition must be an increment, found {}", t.op)),
                [t1, t2] => {
                    let (dec, z) = if t1.op.is_dec() { (t1, t2) } else { (t2, t1) };
                    if !dec.op.is_dec() || !z.op.is_zero_test() {
                        report("two outgoing transitions must be a dec/z pair".to_owned());
                    } else if dec.op.counter() != z.op.counter() {
                        report("dec/z pair must test the same counter".to_owned());
                    }
                }
                [] => report("non-final state has no outgoing transitions".to_owned()),
                _ => report(format!("{} outgoing transitions, at most two allowed", outgoing.len())),
            }
        }
        violations
    }

    /// One deterministic step. A dec/z state takes the decrement branch
    /// exactly when the tested counter is positive. Requires a validated
    /// machine.
    pub fn step(&self, c: &CmConfig) -> StepResult {
        if c.state == self.final_ {
            return StepResult::Halted;
        }
        let outgoing: Vec<&CmTransition> =
            self.transitions.iter().filter(|t| t.source == c.state).collect();
        let taken = match outgoing.as_slice() {
            [t] => t,
            [t1, t2] => {
                let (dec, z) = if t1.op.is_dec() { (t1, t2) } else { (t2, t1) };
                if c.counters[dec.op.counter()] > 0 {
                    dec
                } else {
                    z
                }
            }
            _ => panic!("step on unvalidated machine: state {:?}", self.states[c.state]),
        };
        let mut counters = c.counters;
        if taken.op.is_inc() {
            counters[taken.op.counter()] += 1;
        } else if taken.op.is_dec() {
            counters[taken.op.counter()] -= 1;
        }
        StepResult::Next { config: CmConfig { state: taken.target, counters }, op: taken.op }
    }

    /// Iterates [`CounterMachine::step`] from `q_i(0,0)` at most `fuel` times.
    pub fn run_bounded(&self, fuel: usize) -> CmRunResult {
        let mut c = CmConfig { state: self.initial, counters: [0, 0] };
        let mut ops = Vec::new();
        for taken in 0..=fuel {
            match self.step(&c) {
                StepResult::Halted => return CmRunResult::Halted { steps: taken, ops },
                StepResult::Next { config, op } => {
                    if taken == fuel {
                        break;
                    }
                    c = config;
                    ops.push(op);
                }
            }
        }
        CmRunResult::Running { after: fuel }
    }

    /// The distinguishing word of the halting run: each operation letter,
    /// zero-tests doubled, a final `h`. `None` when the machine does not halt
    /// within `fuel` steps.
    pub fn halting_word(&self, fuel: usize) -> Option<Vec<String>> {
        match self.run_bounded(fuel) {
            CmRunResult::Halted { ops, .. } => {
                let mut word = Vec::new();
                for op in ops {
                    word.push(op.name().to_owned());
                    if op.is_zero_test() {
                        word.push(op.name().to_owned());
                    }
                }
                word.push("h".to_owned());
                Some(word)
            }
            CmRunResult::Running { .. } => None,
        }
    }

    /// Is the final state reachable from the initial one in the control graph,
    /// ignoring counters? Unreachability certifies non-halting.
    pub fn final_control_unreachable(&self) -> bool {
        let mut seen = vec![false; self.states.len()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(s) = stack.pop() {
            if s == self.final_ {
                return false;
            }
            for t in self.transitions.iter().filter(|t| t.source == s) {
                if !seen[t.target] {
                    seen[t.target] = true;
                    stack.push(t.target);
                }
            }
        }
        true
    }
}
