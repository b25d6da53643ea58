//! Property tests over seeded random instances. Each property draws a seed,
//! derives a machine or VASS deterministically from it, and compares the
//! library against a naive model, so shrinking works on the seed alone.

mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use vasseq::equivalence::{trace_equal_bounded, EqVerdict};
use vasseq::formats::{parse_cm, parse_vass, print_cm, print_vass};
use vasseq::reduction::build_b;
use vasseq::resolver::{jancar_resolver, resolver_run};
use vasseq::vass::{
    fire, Budget, Configuration, StateId, Transition, Word, DEFAULT_NODE_BUDGET,
};

use common::*;

fn vass_from_seed(seed: u64) -> vasseq::vass::Vass {
    let mut rng = StdRng::seed_from_u64(seed);
    realize(&random_raw_vass(&mut rng, 6))
}

proptest! {
    /// Firing never produces a negative counter, and is enabled exactly when
    /// plain vector addition stays nonnegative.
    #[test]
    fn fire_matches_vector_addition(
        counters in proptest::collection::vec(0i64..=5, 2),
        effect in proptest::collection::vec(-3i64..=3, 2),
    ) {
        let c = Configuration::new(StateId(0), counters.clone());
        let t = Transition {
            source: StateId(0),
            letter: vasseq::vass::LetterId(0),
            effect: effect.clone(),
            target: StateId(0),
        };
        let raw: Vec<i64> = counters.iter().zip(&effect).map(|(a, b)| a + b).collect();
        match fire(&c, &t) {
            Ok(succ) => {
                prop_assert!(raw.iter().all(|&x| x >= 0));
                prop_assert_eq!(&succ.counters, &raw);
            }
            Err(_) => prop_assert!(raw.iter().any(|&x| x < 0)),
        }
    }

    /// Firability is monotone: larger counters enable at least as much, and
    /// dominance survives firing the same transition.
    #[test]
    fn firability_is_monotone(
        counters in proptest::collection::vec(0i64..=5, 2),
        extra in proptest::collection::vec(0i64..=3, 2),
        effect in proptest::collection::vec(-3i64..=3, 2),
    ) {
        let c = Configuration::new(StateId(0), counters.clone());
        let bigger = Configuration::new(
            StateId(0),
            counters.iter().zip(&extra).map(|(a, b)| a + b).collect(),
        );
        let t = Transition {
            source: StateId(0),
            letter: vasseq::vass::LetterId(0),
            effect,
            target: StateId(0),
        };
        if let Ok(succ) = fire(&c, &t) {
            let succ_bigger = fire(&bigger, &t);
            prop_assert!(succ_bigger.is_ok());
            prop_assert!(succ_bigger.unwrap().dominates(&succ));
        }
    }

    /// Readability is monotone in the starting counters.
    #[test]
    fn readability_is_monotone(seed in any::<u64>(), d1 in 0i64..=2, d2 in 0i64..=2) {
        let v = vass_from_seed(seed);
        let from = v.initial().clone();
        let bigger = Configuration::new(
            from.state,
            vec![from.counters[0] + d1, from.counters[1] + d2],
        );
        for w in enumerate_words(&v, &from, 4) {
            prop_assert!(v.reads(&bigger, &w), "lost {:?} after raising counters", v.format_word(&w));
        }
    }

    /// The antichain-backed language matches exhaustive run enumeration.
    #[test]
    fn bounded_language_matches_naive_enumeration(seed in any::<u64>()) {
        let v = vass_from_seed(seed);
        let mut budget = Budget::new(DEFAULT_NODE_BUDGET);
        let pruned = v.bounded_trace_language(4, &mut budget).unwrap();
        let naive = enumerate_words(&v, v.initial(), 4);
        prop_assert_eq!(pruned.into_iter().collect::<std::collections::BTreeSet<_>>(), naive);
    }

    /// The trace language is prefix-closed and monotone in the bound.
    #[test]
    fn trace_language_is_prefix_closed(seed in any::<u64>()) {
        let v = vass_from_seed(seed);
        let mut budget = Budget::new(DEFAULT_NODE_BUDGET);
        let words = v.bounded_trace_language(5, &mut budget).unwrap();
        let set: std::collections::BTreeSet<&Word> = words.iter().collect();
        for w in &words {
            if !w.is_empty() {
                let prefix = Word(w.0[..w.len() - 1].to_vec());
                prop_assert!(set.contains(&prefix));
            }
        }
        let shorter = v.bounded_trace_language(3, &mut budget).unwrap();
        for w in &shorter {
            prop_assert!(set.contains(w), "word lost when the bound grew");
        }
    }

    /// A VASS is equal to itself at any bound; the product search agrees.
    #[test]
    fn trace_equality_is_reflexive(seed in any::<u64>(), maxlen in 0usize..=6) {
        let v = vass_from_seed(seed);
        let mut budget = Budget::new(DEFAULT_NODE_BUDGET);
        let verdict = trace_equal_bounded(&v, &v, maxlen, &mut budget).unwrap();
        prop_assert_eq!(verdict, EqVerdict::EqualUpTo(maxlen));
    }

    /// Text format round trip for VASSs: printing then parsing reproduces
    /// every component, including declaration order.
    #[test]
    fn vass_round_trips_through_text(seed in any::<u64>()) {
        let v = vass_from_seed(seed);
        let reparsed = parse_vass(&print_vass(&v)).unwrap();
        prop_assert_eq!(v.dimension(), reparsed.dimension());
        prop_assert_eq!(v.alphabet(), reparsed.alphabet());
        prop_assert_eq!(v.states(), reparsed.states());
        prop_assert_eq!(v.transitions(), reparsed.transitions());
        prop_assert_eq!(v.initial(), reparsed.initial());
        prop_assert_eq!(v.finals(), reparsed.finals());
    }

    /// Text format round trip for machines. The parser numbers states by
    /// first mention, so the invariant is on names and the canonical printed
    /// form, not on indices.
    #[test]
    fn machine_round_trips_through_text(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_machine(&mut rng, 8);
        let reparsed = parse_cm(&print_cm(&m)).unwrap();
        prop_assert_eq!(m.initial_name(), reparsed.initial_name());
        prop_assert_eq!(m.final_name(), reparsed.final_name());
        let by_name = |m: &vasseq::twocm::CounterMachine| {
            let mut ts: Vec<(String, String, String)> = m
                .transitions()
                .iter()
                .map(|t| (
                    m.state_name(t.source).to_owned(),
                    t.op.to_string(),
                    m.state_name(t.target).to_owned(),
                ))
                .collect();
            ts.sort();
            ts
        };
        prop_assert_eq!(by_name(&m), by_name(&reparsed));
        prop_assert_eq!(print_cm(&reparsed), print_cm(&parse_cm(&print_cm(&reparsed)).unwrap()));
    }

    /// The resolver never strands a word of B's bounded language, and its
    /// run replays to the word it was asked to follow.
    #[test]
    fn resolver_follows_bounded_language(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_machine(&mut rng, 6);
        let red = build_b(&m).unwrap();
        let r = jancar_resolver(&red);
        let mut budget = Budget::new(DEFAULT_NODE_BUDGET);
        for w in red.b.bounded_cover_language(5, &mut budget).unwrap() {
            let run = resolver_run(&red.b, &r, &w).unwrap();
            prop_assert_eq!(red.b.run_word(&run), w);
        }
    }
}
