//! VASS semantics, the two-counter-machine reduction producing a
//! deterministic VASS A and a history-deterministic VASS B, bounded trace and
//! coverability language comparison with witnesses, Spoiler/Duplicator
//! simulation games at bounded depth, and the explicit resolver for B.
//!
//! All values are immutable after construction and all operations are pure
//! functions of their inputs, safe to call from multiple threads.

pub mod equivalence;
pub mod formats;
pub mod games;
pub mod reduction;
pub mod resolver;
pub mod twocm;
pub mod vass;

pub use equivalence::{
    containment_bounded, cover_equal_bounded, theorem_harness, trace_equal_bounded, ContainVerdict,
    EqVerdict, TheoremReport,
};
pub use games::{lemma_consistency, simulates_bounded, two_sided_bounded, GameVerdict};
pub use reduction::{build_a, build_b, build_n, zero_test_triples, ReductionOutput};
pub use resolver::{check_history_det_bounded, jancar_resolver, resolver_run, HdVerdict, Resolver};
pub use twocm::{CounterMachine, Op};
pub use vass::{Budget, Configuration, Run, Vass, VassBuilder, Word, DEFAULT_NODE_BUDGET};
