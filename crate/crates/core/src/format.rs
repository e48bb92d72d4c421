//! Text format for automata and transducers.
//!
//! ```text
//! @Transducer 0 2 * 0
//! 0 0 0 0
//! 0 1 @epsilon 1
//! ```
//!
//! The header names the object type, then the final states, `*`, and the
//! initial states. Each following line is one transition: `src sym dst` for
//! automata, `src in out dst` for transducers. `@epsilon` is the empty word.
//! Transducer labels may be words of several symbols. Blank lines and lines
//! starting with `#` are ignored.
//!
//! State tokens that are all non-negative integers are used as ids directly;
//! otherwise ids are assigned in order of first appearance. Serialization
//! writes integer ids, so `parse(serialize(x)) == x`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::alphabet::{Alphabet, Word};
use crate::automata::{Dfa, Nfa, StateId};
use crate::error::{Error, Result};
use crate::transducer::Transducer;

pub const EPSILON: &str = "@epsilon";

#[derive(Debug)]
enum Kind {
    Dfa,
    Nfa,
    Transducer,
}

struct Parsed {
    kind: Kind,
    num_states: usize,
    finals: Vec<StateId>,
    initials: Vec<StateId>,
    /// (line, src, labels, dst)
    lines: Vec<(usize, StateId, Vec<Word>, StateId)>,
}

fn parse_label(alphabet: &Alphabet, token: &str, line: usize) -> Result<Word> {
    if token == EPSILON {
        return Ok(Vec::new());
    }
    if token.starts_with('@') {
        return Err(Error::parse(line, format!("unknown directive {token}")));
    }
    alphabet
        .parse_word(token)
        .map_err(|e| Error::parse(line, e.to_string()))
}

fn parse_generic(text: &str, alphabet: &Alphabet) -> Result<Parsed> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header"))?;
    let mut tokens = header.split_whitespace();
    let kind = match tokens.next() {
        Some("@DFA") => Kind::Dfa,
        Some("@NFA") => Kind::Nfa,
        Some("@Transducer") => Kind::Transducer,
        Some(other) => {
            return Err(Error::parse(
                header_line,
                format!("unknown directive {other}"),
            ))
        }
        None => return Err(Error::parse(header_line, "missing header")),
    };
    let rest: Vec<&str> = tokens.collect();
    let star = rest
        .iter()
        .position(|&t| t == "*")
        .ok_or_else(|| Error::parse(header_line, "missing `*` separator in header"))?;
    let final_tokens = &rest[..star];
    let initial_tokens = &rest[star + 1..];

    let arity = match kind {
        Kind::Transducer => 4,
        _ => 3,
    };
    let mut raw = Vec::new();
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != arity {
            return Err(Error::parse(
                line,
                format!("expected {arity} fields, found {}", toks.len()),
            ));
        }
        raw.push((line, toks));
    }

    let all_states = final_tokens
        .iter()
        .chain(initial_tokens)
        .copied()
        .chain(raw.iter().flat_map(|(_, t)| [t[0], t[arity - 1]]));
    let numeric = all_states.clone().all(|t| t.parse::<usize>().is_ok());
    let mut names: HashMap<&str, StateId> = HashMap::new();
    let mut num_states = 0;
    for tok in all_states {
        if numeric {
            num_states = num_states.max(tok.parse::<usize>().unwrap() + 1);
        } else if !names.contains_key(tok) {
            names.insert(tok, num_states);
            num_states += 1;
        }
    }
    let id = |tok: &str| -> StateId {
        if numeric {
            tok.parse().unwrap()
        } else {
            names[tok]
        }
    };

    let mut parsed_lines = Vec::with_capacity(raw.len());
    for (line, toks) in &raw {
        let labels = toks[1..arity - 1]
            .iter()
            .map(|t| parse_label(alphabet, t, *line))
            .collect::<Result<Vec<_>>>()?;
        parsed_lines.push((*line, id(toks[0]), labels, id(toks[arity - 1])));
    }
    Ok(Parsed {
        kind,
        num_states,
        finals: final_tokens.iter().map(|t| id(t)).collect(),
        initials: initial_tokens.iter().map(|t| id(t)).collect(),
        lines: parsed_lines,
    })
}

fn expect_kind(parsed: &Parsed, ok: &[&str]) -> Result<()> {
    let name = match parsed.kind {
        Kind::Dfa => "@DFA",
        Kind::Nfa => "@NFA",
        Kind::Transducer => "@Transducer",
    };
    if ok.contains(&name) {
        Ok(())
    } else {
        Err(Error::parse(
            1,
            format!("expected {}, found {name}", ok.join(" or ")),
        ))
    }
}

/// Parses `@NFA` or `@DFA` text into an NFA.
pub fn parse_nfa(text: &str, alphabet: &Alphabet) -> Result<Nfa> {
    let p = parse_generic(text, alphabet)?;
    expect_kind(&p, &["@NFA", "@DFA"])?;
    let mut nfa = Nfa::new(alphabet.clone());
    for _ in 0..p.num_states {
        nfa.add_state(false);
    }
    for &f in &p.finals {
        nfa.set_final(f, true);
    }
    for &i in &p.initials {
        nfa.add_initial(i);
    }
    for (line, src, labels, dst) in &p.lines {
        let label = match labels[0].as_slice() {
            [] => None,
            [a] => Some(*a),
            _ => return Err(Error::parse(*line, "automaton labels must be one symbol")),
        };
        nfa.add_transition(*src, label, *dst);
    }
    Ok(nfa)
}

/// Parses `@DFA` text. Rejects ε-labels, nondeterminism, and anything other
/// than exactly one initial state.
pub fn parse_dfa(text: &str, alphabet: &Alphabet) -> Result<Dfa> {
    let p = parse_generic(text, alphabet)?;
    expect_kind(&p, &["@DFA"])?;
    let [initial] = p.initials[..] else {
        return Err(Error::parse(1, "a DFA needs exactly one initial state"));
    };
    let mut dfa = Dfa::new(alphabet.clone());
    for _ in 1..p.num_states.max(1) {
        dfa.add_state(false);
    }
    dfa.set_initial(initial);
    for &f in &p.finals {
        dfa.set_final(f, true);
    }
    for (line, src, labels, dst) in &p.lines {
        let [a] = labels[0][..] else {
            return Err(Error::parse(*line, "DFA labels must be exactly one symbol"));
        };
        if dfa.set_transition(*src, a, *dst).is_some() {
            return Err(Error::parse(*line, "nondeterministic transition"));
        }
    }
    Ok(dfa)
}

/// Parses `@Transducer` text.
pub fn parse_transducer(text: &str, alphabet: &Alphabet) -> Result<Transducer> {
    let p = parse_generic(text, alphabet)?;
    expect_kind(&p, &["@Transducer"])?;
    let mut t = Transducer::new(alphabet.clone());
    for _ in 0..p.num_states {
        t.add_state(false);
    }
    for &f in &p.finals {
        t.set_final(f, true);
    }
    for &i in &p.initials {
        t.add_initial(i);
    }
    for (_, src, labels, dst) in &p.lines {
        t.add_edge(*src, &labels[0], &labels[1], *dst);
    }
    Ok(t)
}

fn label_text(alphabet: &Alphabet, w: &[u8]) -> String {
    if w.is_empty() {
        EPSILON.to_string()
    } else {
        alphabet.format_word(w)
    }
}

fn header(kind: &str, finals: impl Iterator<Item = StateId>, initials: &[StateId]) -> String {
    let mut s = kind.to_string();
    for f in finals {
        write!(s, " {f}").unwrap();
    }
    s.push_str(" *");
    for i in initials {
        write!(s, " {i}").unwrap();
    }
    s.push('\n');
    s
}

pub fn nfa_to_text(nfa: &Nfa) -> String {
    let mut s = header("@NFA", nfa.finals(), nfa.initial());
    for (src, label, dst) in nfa.transitions() {
        let l = label.map_or(EPSILON.to_string(), |a| {
            nfa.alphabet().char_of(a).to_string()
        });
        writeln!(s, "{src} {l} {dst}").unwrap();
    }
    s
}

pub fn dfa_to_text(dfa: &Dfa) -> String {
    let mut s = header("@DFA", dfa.finals(), &[dfa.initial()]);
    for (src, sym, dst) in dfa.transitions() {
        writeln!(s, "{src} {} {dst}", dfa.alphabet().char_of(sym)).unwrap();
    }
    s
}

pub fn transducer_to_text(t: &Transducer) -> String {
    let mut s = header("@Transducer", t.finals(), t.initial());
    for e in t.edges() {
        writeln!(
            s,
            "{} {} {} {}",
            e.src,
            label_text(t.alphabet(), &e.input),
            label_text(t.alphabet(), &e.output),
            e.dst
        )
        .unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const DEL1: &str = "@Transducer 0 2 * 0\n0 0 0 0\n0 1 1 0\n0 0 @epsilon 1\n0 1 @epsilon 1\n1 0 0 1\n1 1 1 1\n1 @epsilon 0 2\n1 @epsilon 1 2\n";

    #[test]
    fn transducer_text_is_byte_exact() {
        let t = parse_transducer(DEL1, &Alphabet::binary()).unwrap();
        assert_eq!(t.num_states(), 3);
        assert_eq!(t.initial(), &[0]);
        assert_eq!(t.finals().collect::<Vec<_>>(), [0, 2]);
        assert_eq!(transducer_to_text(&t), DEL1);
    }

    #[test]
    fn symbolic_state_names() {
        let text = "@Transducer f * s\ns 0 1 f\nf 01 @epsilon s\n";
        let t = parse_transducer(text, &Alphabet::binary()).unwrap();
        // f, s in order of first appearance
        assert_eq!(t.initial(), &[1]);
        assert_eq!(t.edges()[1].input, vec![0, 1]);
        let again = parse_transducer(&transducer_to_text(&t), &Alphabet::binary()).unwrap();
        assert_eq!(again, t);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let a = Alphabet::binary();
        assert!(matches!(
            parse_transducer("@Transducer 0 2 0\n", &a),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_transducer("@Transducer 0 * 0\n0 0 0\n", &a),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_transducer("@Transducer 0 * 0\n\n0 @foo 0 0\n", &a),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_transducer("@Widget 0 * 0\n", &a),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_transducer("@Transducer 0 * 0\n0 2 0 0\n", &a),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn dfa_rejects_nondeterminism() {
        let a = Alphabet::binary();
        assert!(parse_dfa("@DFA 1 * 0\n0 0 1\n0 0 0\n", &a).is_err());
        assert!(parse_dfa("@DFA 1 * 0 1\n0 0 1\n", &a).is_err());
        assert!(parse_dfa("@DFA 1 * 0\n0 @epsilon 1\n", &a).is_err());
        let d = parse_dfa("@DFA 2 * 0\n0 0 1\n1 1 2\n", &a).unwrap();
        assert!(d.accepts_str("01").unwrap());
        assert_eq!(dfa_to_text(&d), "@DFA 2 * 0\n0 0 1\n1 1 2\n");
    }

    #[test]
    fn nfa_with_epsilon() {
        let a = Alphabet::binary();
        let text = "@NFA 2 * 0 1\n0 @epsilon 2\n1 1 2\n";
        let n = parse_nfa(text, &a).unwrap();
        assert!(n.accepts(&[]));
        assert!(n.accepts(&[1]));
        assert_eq!(nfa_to_text(&n), text);
    }

    fn arb_transducer() -> impl Strategy<Value = Transducer> {
        (1usize..5).prop_flat_map(|n| {
            let label = prop::collection::vec(0u8..2, 0..3);
            (
                prop::collection::vec((0..n, label.clone(), label, 0..n), 0..10),
                prop::collection::vec(any::<bool>(), n),
                prop::collection::vec(any::<bool>(), n),
            )
                .prop_map(move |(edges, finals, inits)| {
                    let mut t = Transducer::new(Alphabet::binary());
                    for f in finals {
                        t.add_state(f);
                    }
                    for (s, i) in inits.into_iter().enumerate() {
                        if i {
                            t.add_initial(s);
                        }
                    }
                    for (s, x, y, d) in edges {
                        t.add_edge(s, &x, &y, d);
                    }
                    t
                })
        })
    }

    proptest! {
        #[test]
        fn transducer_round_trip(t in arb_transducer()) {
            let text = transducer_to_text(&t);
            let back = parse_transducer(&text, &Alphabet::binary()).unwrap();
            prop_assert_eq!(transducer_to_text(&back), text);
            // states beyond the last mentioned id cannot be represented
            prop_assert_eq!(back.edges(), t.edges());
        }
    }
}
