//! Line-oriented text formats for counter machines and VASSs, plus the DOT
//! export. Printing is canonical; parse then print is the identity on
//! canonical documents.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::reduction::ProvenanceTag;
use crate::twocm::{CounterMachine, Op, Violation};
use crate::vass::{Vass, VassBuilder, VassBuildError};

#[derive(Debug, Clone, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("validation failed:\n{}", render_validation(.0))]
    Validation(Vec<(usize, Violation)>),
    #[error("line {line}: {source}")]
    Invariant { line: usize, source: VassBuildError },
}

fn render_validation(violations: &[(usize, Violation)]) -> String {
    violations
        .iter()
        .map(|(line, v)| format!("line {line}: {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

/// Parses the 2CM format: header `2cm <initial> <final>`, then one
/// `<source> <op> <target>` per line. The machine is validated; violations
/// carry the line where the offending state first appears.
pub fn parse_cm(text: &str) -> Result<CounterMachine, FormatError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| syntax(1, "empty document, expected a \"2cm\" header"))?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("2cm") {
        return Err(syntax(header_line, "header must start with \"2cm\""));
    }
    let initial = tokens
        .next()
        .ok_or_else(|| syntax(header_line, "header missing the initial state"))?;
    let final_ = tokens
        .next()
        .ok_or_else(|| syntax(header_line, "header missing the final state"))?;
    if tokens.next().is_some() {
        return Err(syntax(header_line, "trailing tokens after the header"));
    }

    let mut states: Vec<String> = vec![initial.to_owned()];
    if final_ != initial {
        states.push(final_.to_owned());
    }
    let mut first_line: BTreeMap<String, usize> = BTreeMap::new();
    first_line.insert(initial.to_owned(), header_line);
    first_line.entry(final_.to_owned()).or_insert(header_line);
    let mut transitions = Vec::new();
    for (lineno, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [source, op, target] = tokens.as_slice() else {
            return Err(syntax(lineno, "expected \"<source> <op> <target>\""));
        };
        let op = Op::parse(op).ok_or_else(|| syntax(lineno, format!("unknown operation {op:?}")))?;
        for s in [source, target] {
            if !states.iter().any(|known| known == s) {
                states.push((*s).to_owned());
            }
            first_line.entry((*s).to_owned()).or_insert(lineno);
        }
        transitions.push(((*source).to_owned(), op, (*target).to_owned()));
    }

    let machine = CounterMachine::new(states, initial, final_, transitions)
        .expect("every mentioned state was collected");
    let violations = machine.validate();
    if violations.is_empty() {
        Ok(machine)
    } else {
        Err(FormatError::Validation(
            violations
                .into_iter()
                .map(|v| (first_line.get(&v.state).copied().unwrap_or(0), v))
                .collect(),
        ))
    }
}

/// Canonical rendering: header, then transitions in declaration order.
pub fn print_cm(m: &CounterMachine) -> String {
    let mut out = format!("2cm {} {}\n", m.initial_name(), m.final_name());
    for t in m.transitions() {
        let _ = writeln!(out, "{} {} {}", m.state_name(t.source), t.op, m.state_name(t.target));
    }
    out
}

/// Parses the VASS document format. Canonical field order is dimension,
/// alphabet, states, transitions, initial, finals; the parser accepts the
/// fields in any order but each transition, initial and final line must
/// follow the declarations it references.
pub fn parse_vass(text: &str) -> Result<Vass, FormatError> {
    let mut lines = content_lines(text);
    let (first_line, first) = lines
        .next()
        .ok_or_else(|| syntax(1, "empty document, expected a \"dimension\" line"))?;
    let k: usize = match first.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["dimension", k] => k
            .parse()
            .ok()
            .filter(|&k| k > 0)
            .ok_or_else(|| syntax(first_line, format!("bad dimension {k:?}")))?,
        _ => return Err(syntax(first_line, "document must start with \"dimension <k>\"")),
    };
    let mut builder = VassBuilder::new(k);
    let mut last_line = first_line;

    let parse_vector = |lineno: usize, tokens: &[&str]| -> Result<Vec<i64>, FormatError> {
        if tokens.len() != k {
            return Err(syntax(lineno, format!("expected {k} counter entries, found {}", tokens.len())));
        }
        tokens
            .iter()
            .map(|t| t.parse().map_err(|_| syntax(lineno, format!("bad integer {t:?}"))))
            .collect()
    };

    for (lineno, line) in lines {
        last_line = lineno;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["alphabet", letters @ ..] => {
                builder = builder.letters(letters);
            }
            ["state", name] => {
                builder = builder.state(name);
            }
            ["transition", source, letter, rest @ ..] if rest.len() == k + 1 => {
                let effect = parse_vector(lineno, &rest[..k])?;
                builder = builder.transition(source, letter, effect, rest[k]);
            }
            ["transition", ..] => {
                return Err(syntax(lineno, format!("expected {k} effect entries and a target state")));
            }
            ["initial", state, rest @ ..] => {
                builder = builder.initial(state, parse_vector(lineno, rest)?);
            }
            ["final", state, rest @ ..] => {
                builder = builder.final_config(state, parse_vector(lineno, rest)?);
            }
            _ => return Err(syntax(lineno, format!("unrecognized line {line:?}"))),
        }
    }
    builder
        .build()
        .map_err(|source| FormatError::Invariant { line: last_line, source })
}

/// Canonical rendering in the fixed field order.
pub fn print_vass(v: &Vass) -> String {
    let mut out = format!("dimension {}\n", v.dimension());
    let _ = writeln!(out, "alphabet {}", v.alphabet().join(" "));
    for s in v.states() {
        let _ = writeln!(out, "state {s}");
    }
    let vector = |counters: &[i64]| {
        counters.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
    };
    for t in v.transitions() {
        let _ = writeln!(
            out,
            "transition {} {} {} {}",
            v.state_name(t.source),
            v.letter_name(t.letter),
            vector(&t.effect),
            v.state_name(t.target)
        );
    }
    let _ = writeln!(
        out,
        "initial {} {}",
        v.state_name(v.initial().state),
        vector(&v.initial().counters)
    );
    for f in v.finals() {
        let _ = writeln!(out, "final {} {}", v.state_name(f.state), vector(&f.counters));
    }
    out
}

/// Graphviz export; gadget, split and halt states are visually tagged when
/// provenance tags are supplied. One node per state.
pub fn export_dot(v: &Vass, tags: Option<&BTreeMap<String, ProvenanceTag>>) -> String {
    let mut out = String::from("digraph vass {\n  rankdir=TB;\n  node [shape=circle];\n");
    for s in v.states() {
        let mut attrs = Vec::new();
        match tags.and_then(|t| t.get(s)) {
            Some(ProvenanceTag::Gadget { .. }) => attrs.push("style=dashed".to_owned()),
            Some(ProvenanceTag::SplitState(_)) => attrs.push("shape=box".to_owned()),
            Some(ProvenanceTag::HaltState) => attrs.push("shape=doublecircle".to_owned()),
            _ => {}
        }
        if *s == v.state_name(v.initial().state) {
            attrs.push("penwidth=2".to_owned());
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  \"{s}\";");
        } else {
            let _ = writeln!(out, "  \"{s}\" [{}];", attrs.join(", "));
        }
    }
    for t in v.transitions() {
        let effect = t
            .effect
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{} / ({effect})\"];",
            v.state_name(t.source),
            v.state_name(t.target),
            v.letter_name(t.letter),
        );
    }
    out.push_str("}\n");
    out
}
