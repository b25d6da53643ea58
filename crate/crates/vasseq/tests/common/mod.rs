//! Shared helpers for the integration suites: the shipped machines, seeded
//! random corpora, and naive enumeration oracles kept independent of the
//! antichain search paths they check.
//!
//! Each test binary compiles this module separately and uses a different
//! subset of it, hence the blanket dead-code allow.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use vasseq::formats::parse_cm;
use vasseq::twocm::{CounterMachine, Op};
use vasseq::vass::{fire, Configuration, Vass, VassBuilder, Word};

pub fn fig1() -> CounterMachine {
    parse_cm(include_str!("../../data/fig1.2cm")).unwrap()
}

pub fn loop_machine() -> CounterMachine {
    parse_cm(include_str!("../../data/loop.2cm")).unwrap()
}

/// A random valid 2CM: every non-final state carries either one increment or
/// a dec/z pair on one counter. The shape rules hold by construction.
pub fn random_machine(rng: &mut StdRng, max_states: usize) -> CounterMachine {
    let n = rng.gen_range(2..=max_states.max(2));
    let states: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let final_ = n - 1;
    let mut transitions = Vec::new();
    for i in 0..n {
        if i == final_ {
            continue;
        }
        let target = |rng: &mut StdRng| states[rng.gen_range(0..n)].clone();
        if rng.gen_bool(0.5) {
            let op = if rng.gen_bool(0.5) { Op::Inc1 } else { Op::Inc2 };
            transitions.push((states[i].clone(), op, target(rng)));
        } else {
            let (dec, z) = if rng.gen_bool(0.5) { (Op::Dec1, Op::Z1) } else { (Op::Dec2, Op::Z2) };
            transitions.push((states[i].clone(), dec, target(rng)));
            transitions.push((states[i].clone(), z, target(rng)));
        }
    }
    let m = CounterMachine::new(states, "s0", &format!("s{final_}"), transitions).unwrap();
    assert!(m.validate().is_empty());
    m
}

pub fn machine_corpus(seed: u64, count: usize, max_states: usize) -> Vec<CounterMachine> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count).map(|_| random_machine(&mut rng, max_states)).collect()
}

/// Raw description of a random 2-VASS, kept mutable for pair perturbation.
#[derive(Clone)]
pub struct RawVass {
    pub states: usize,
    pub transitions: Vec<(usize, usize, [i64; 2], usize)>,
}

pub const RAW_ALPHABET: [&str; 3] = ["a", "b", "c"];

pub fn random_raw_vass(rng: &mut StdRng, max_states: usize) -> RawVass {
    let states = rng.gen_range(1..=max_states);
    let count = rng.gen_range(1..=2 * max_states);
    let transitions = (0..count)
        .map(|_| {
            (
                rng.gen_range(0..states),
                rng.gen_range(0..RAW_ALPHABET.len()),
                [rng.gen_range(-2..=2), rng.gen_range(-2..=2)],
                rng.gen_range(0..states),
            )
        })
        .collect();
    RawVass { states, transitions }
}

/// A small random change: drop a transition or tweak one effect entry.
pub fn perturb(rng: &mut StdRng, raw: &RawVass) -> RawVass {
    let mut out = raw.clone();
    if out.transitions.is_empty() || rng.gen_bool(0.4) {
        out.transitions.push((
            rng.gen_range(0..out.states),
            rng.gen_range(0..RAW_ALPHABET.len()),
            [rng.gen_range(-2..=2), rng.gen_range(-2..=2)],
            rng.gen_range(0..out.states),
        ));
    } else if rng.gen_bool(0.5) {
        let i = rng.gen_range(0..out.transitions.len());
        out.transitions.remove(i);
    } else {
        let i = rng.gen_range(0..out.transitions.len());
        out.transitions[i].2[rng.gen_range(0..2)] += if rng.gen_bool(0.5) { 1 } else { -1 };
    }
    out
}

/// Realizes a raw VASS with trace semantics: initial `s0(0,0)`, every state
/// accepting at zero.
pub fn realize(raw: &RawVass) -> Vass {
    let mut builder = VassBuilder::new(2).letters(RAW_ALPHABET);
    for i in 0..raw.states {
        builder = builder.state(&format!("v{i}"));
    }
    for (src, letter, effect, tgt) in &raw.transitions {
        builder = builder.transition(
            &format!("v{src}"),
            RAW_ALPHABET[*letter],
            effect.to_vec(),
            &format!("v{tgt}"),
        );
    }
    builder = builder.initial("v0", vec![0, 0]);
    for i in 0..raw.states {
        builder = builder.final_config(&format!("v{i}"), vec![0, 0]);
    }
    builder.build().unwrap()
}

/// Naive oracle: every word readable from `from`, by exhaustive run
/// enumeration with no pruning. `Word` orders length-lexicographically, so
/// the set iterates in enumeration order.
pub fn enumerate_words(v: &Vass, from: &Configuration, maxlen: usize) -> BTreeSet<Word> {
    let mut words = BTreeSet::new();
    let mut stack = vec![(from.clone(), Vec::new())];
    while let Some((c, letters)) = stack.pop() {
        words.insert(Word(letters.clone()));
        if letters.len() == maxlen {
            continue;
        }
        for i in v.enabled_any(&c) {
            let t = &v.transitions()[i];
            let succ = fire(&c, t).unwrap();
            let mut next = letters.clone();
            next.push(t.letter);
            stack.push((succ, next));
        }
    }
    words
}

/// Naive oracle for accepted words under the VASS's own finals set.
pub fn enumerate_accepted_words(v: &Vass, maxlen: usize) -> BTreeSet<Word> {
    let mut words = BTreeSet::new();
    let mut stack = vec![(v.initial().clone(), Vec::new())];
    while let Some((c, letters)) = stack.pop() {
        if v.accepting(&c) {
            words.insert(Word(letters.clone()));
        }
        if letters.len() == maxlen {
            continue;
        }
        for i in v.enabled_any(&c) {
            let t = &v.transitions()[i];
            let succ = fire(&c, t).unwrap();
            let mut next = letters.clone();
            next.push(t.letter);
            stack.push((succ, next));
        }
    }
    words
}

/// Naive trace comparison: enumerate both bounded languages as explicit word
/// sets and take the least element of the symmetric difference.
pub fn naive_distinguishing_word(a: &Vass, b: &Vass, maxlen: usize) -> Option<(Word, bool)> {
    let words_a = enumerate_words(a, a.initial(), maxlen);
    let words_b = enumerate_words(b, b.initial(), maxlen);
    words_a
        .symmetric_difference(&words_b)
        .min()
        .cloned()
        .map(|w| {
            let in_first = words_a.contains(&w);
            (w, in_first)
        })
}
