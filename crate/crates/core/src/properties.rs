//! Exact decision procedures for error detection, error correction and
//! maximality of block codes given as trellises.
//!
//! A code `C` is σ-detecting when no codeword can be turned into a different
//! codeword by the channel, and σ-correcting when no two distinct codewords
//! share a possible output. Correction reduces to detection for the channel
//! `σ⁻¹ ∘ σ`. A word `w ∉ C` can be added to a σ-detecting code exactly when
//! `w ∉ (σ ∨ σ⁻¹)(C)`, which drives both the maximality checks here and the
//! randomized generator in [`crate::codegen`].

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_rational::Ratio;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::automata::{Label, Nfa, StateId, Trellis};
use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::transducer::{product, Transducer};

/// Evidence returned by the checks in this module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// The property holds.
    None,
    /// `u ≠ v` are codewords with `v ∈ σ(u)`.
    DetectViolation { u: Word, v: Word },
    /// `u ≠ v` are codewords with `z ∈ σ(u) ∩ σ(v)`.
    CorrectViolation { u: Word, v: Word, z: Word },
    /// `w` is not a codeword and can be added keeping the code σ-detecting.
    Addable(Word),
}

impl Witness {
    pub fn is_none(&self) -> bool {
        matches!(self, Witness::None)
    }

    /// Renders as `NONE`, `DETECT-VIOLATION u v`, `CORRECT-VIOLATION u v via z`
    /// or `ADDABLE w`.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        let f = |w: &Word| alphabet.format_word(w);
        match self {
            Witness::None => "NONE".to_string(),
            Witness::DetectViolation { u, v } => format!("DETECT-VIOLATION {} {}", f(u), f(v)),
            Witness::CorrectViolation { u, v, z } => {
                format!("CORRECT-VIOLATION {} {} via {}", f(u), f(v), f(z))
            }
            Witness::Addable(w) => format!("ADDABLE {}", f(w)),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Without an alphabet, symbols print as their indices.
        let digits = |w: &Word| w.iter().map(|s| s.to_string()).collect::<String>();
        match self {
            Witness::None => write!(f, "NONE"),
            Witness::DetectViolation { u, v } => {
                write!(f, "DETECT-VIOLATION {} {}", digits(u), digits(v))
            }
            Witness::CorrectViolation { u, v, z } => write!(
                f,
                "CORRECT-VIOLATION {} {} via {}",
                digits(u),
                digits(v),
                digits(z)
            ),
            Witness::Addable(w) => write!(f, "ADDABLE {}", digits(w)),
        }
    }
}

/// Alignment between the input and output word along a channel path.
///
/// Both words have the same length, so `u ≠ v` iff they differ at some
/// position. The search guesses that position when the first of the two words
/// reaches it and remembers the symbol until the other word gets there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Mark {
    Same,
    Input(usize, Symbol),
    Output(usize, Symbol),
    Differ,
}

type Node = (StateId, StateId, StateId, Mark);

/// Accessible part of the three-way product (input trellis, channel, output
/// trellis) with position marks. Edges carry the input and output labels.
struct ViolationGraph {
    edges: Vec<Vec<(Label, Label, usize)>>,
    initial: Vec<usize>,
    accepting: Vec<bool>,
}

impl ViolationGraph {
    fn build(input: &Trellis, channel: &Transducer, output: &Trellis) -> Self {
        debug_assert!(channel.is_standard());
        let in_depth = input.depths();
        let out_depth = output.depths();
        let mut by_src: Vec<Vec<(Label, Label, StateId)>> = vec![Vec::new(); channel.num_states()];
        for e in channel.edges() {
            by_src[e.src].push((e.input.first().copied(), e.output.first().copied(), e.dst));
        }
        let (din, dout) = (input.as_dfa(), output.as_dfa());

        let mut ids: HashMap<Node, usize> = HashMap::new();
        let mut nodes: Vec<Node> = Vec::new();
        let mut graph = ViolationGraph {
            edges: Vec::new(),
            initial: Vec::new(),
            accepting: Vec::new(),
        };
        let mut intern = |graph: &mut ViolationGraph, nodes: &mut Vec<Node>, node: Node| {
            *ids.entry(node).or_insert_with(|| {
                let (p, s, q, m) = node;
                graph.edges.push(Vec::new());
                graph.accepting.push(
                    m == Mark::Differ
                        && p == input.final_state()
                        && q == output.final_state()
                        && channel.is_final(s),
                );
                nodes.push(node);
                nodes.len() - 1
            })
        };
        for &s in channel.initial() {
            let id = intern(&mut graph, &mut nodes, (0, s, 0, Mark::Same));
            graph.initial.push(id);
        }
        let mut marks = Vec::with_capacity(3);
        let mut next = 0;
        while next < nodes.len() {
            let id = next;
            next += 1;
            let (p, s, q, mark) = nodes[id];
            let (dp, dq) = (in_depth[p], out_depth[q]);
            for &(x, y, s2) in &by_src[s] {
                let p2 = match x {
                    None => Some(p),
                    Some(a) => din.next(p, a),
                };
                let q2 = match y {
                    None => Some(q),
                    Some(b) => dout.next(q, b),
                };
                let (Some(p2), Some(q2)) = (p2, q2) else {
                    continue;
                };
                marks.clear();
                match mark {
                    Mark::Differ => marks.push(Mark::Differ),
                    Mark::Input(i, a) => match y {
                        Some(b) if dq == i => {
                            if a != b {
                                marks.push(Mark::Differ);
                            }
                        }
                        _ => marks.push(mark),
                    },
                    Mark::Output(i, b) => match x {
                        Some(a) if dp == i => {
                            if a != b {
                                marks.push(Mark::Differ);
                            }
                        }
                        _ => marks.push(mark),
                    },
                    Mark::Same => match (x, y) {
                        (Some(a), Some(b)) if dp == dq => {
                            marks.push(if a == b { Mark::Same } else { Mark::Differ });
                        }
                        _ => {
                            marks.push(Mark::Same);
                            if let Some(a) = x {
                                if dq + usize::from(y.is_some()) <= dp {
                                    marks.push(Mark::Input(dp, a));
                                }
                            }
                            if let Some(b) = y {
                                if dp + usize::from(x.is_some()) <= dq {
                                    marks.push(Mark::Output(dq, b));
                                }
                            }
                        }
                    },
                }
                for &m in &marks {
                    let dst = intern(&mut graph, &mut nodes, (p2, s2, q2, m));
                    graph.edges[id].push((x, y, dst));
                }
            }
        }
        graph
    }

    /// Projection onto the input (`input = true`) or output tape.
    fn projection(&self, alphabet: &Alphabet, input: bool) -> Nfa {
        let mut nfa = Nfa::new(alphabet.clone());
        for &acc in &self.accepting {
            nfa.add_state(acc);
        }
        for &i in &self.initial {
            nfa.add_initial(i);
        }
        for (src, edges) in self.edges.iter().enumerate() {
            for &(x, y, dst) in edges {
                nfa.add_transition(src, if input { x } else { y }, dst);
            }
        }
        nfa.trim()
    }
}

fn prepare(code: &Trellis, channel: &Channel) -> Result<()> {
    code.alphabet().ensure_same(channel.alphabet())
}

/// Returns the shortlex-least pair `(u, v)` with `u ≠ v`, both codewords and
/// `v ∈ σ(u)`: `u` is least among all violating inputs and `v` is least for
/// that `u`. Returns [`Witness::None`] iff the code is σ-detecting.
pub fn detection_witness(code: &Trellis, channel: &Channel) -> Result<Witness> {
    prepare(code, channel)?;
    let t = channel.transducer();
    let graph = ViolationGraph::build(code, t, code);
    let Some(u) = graph.projection(code.alphabet(), true).shortlex_least() else {
        return Ok(Witness::None);
    };
    let single = Trellis::from_words(code.alphabet(), code.len(), [u.clone()])?;
    let v = ViolationGraph::build(&single, t, code)
        .projection(code.alphabet(), false)
        .shortlex_least()
        .expect("u has a violating partner");
    Ok(Witness::DetectViolation { u, v })
}

pub fn is_detecting(code: &Trellis, channel: &Channel) -> Result<bool> {
    Ok(detection_witness(code, channel)?.is_none())
}

/// Returns `(u, v, z)` with `u ≠ v` codewords and `z` the shortlex-least
/// common output, or [`Witness::None`] iff the code is σ-correcting.
pub fn correction_witness(code: &Trellis, channel: &Channel) -> Result<Witness> {
    prepare(code, channel)?;
    let inner = channel.correction_channel()?;
    let (u, v) = match detection_witness(code, &inner)? {
        Witness::DetectViolation { u, v } => (u, v),
        _ => return Ok(Witness::None),
    };
    let t = channel.transducer();
    let z = t
        .image(&u)?
        .intersect(&t.image(&v)?)?
        .shortlex_least()
        .expect("u and v share an output");
    Ok(Witness::CorrectViolation { u, v, z })
}

pub fn is_correcting(code: &Trellis, channel: &Channel) -> Result<bool> {
    Ok(correction_witness(code, channel)?.is_none())
}

/// Automaton for `(σ ∨ σ⁻¹)(C)`: the words that cannot be added to `C`.
pub fn exclusion_automaton(code: &Trellis, channel: &Channel) -> Result<Nfa> {
    prepare(code, channel)?;
    product(&code.to_nfa(), channel.symmetric().transducer())
}

/// Subset simulation over an ε-free NFA.
struct Stepper {
    nfa: Nfa,
}

impl Stepper {
    fn new(nfa: &Nfa) -> Self {
        let nfa = if nfa.has_epsilon() {
            nfa.remove_epsilon().trim()
        } else {
            nfa.clone()
        };
        Self { nfa }
    }

    fn start(&self) -> Vec<StateId> {
        let mut s = self.nfa.initial().to_vec();
        s.sort_unstable();
        s.dedup();
        s
    }

    fn step(&self, set: &[StateId], sym: Symbol) -> Vec<StateId> {
        let mut out: Vec<StateId> = set
            .iter()
            .flat_map(|&s| self.nfa.transitions_from(s))
            .filter(|&&(l, _)| l == Some(sym))
            .map(|&(_, d)| d)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn accepting(&self, set: &[StateId]) -> bool {
        set.iter().any(|&s| self.nfa.is_final(s))
    }
}

/// Returns the lexicographically least word of `within` that is not a
/// codeword and can be added to the code keeping it σ-detecting, or
/// [`Witness::None`] if there is none. `within` defaults to `Σ^ℓ`.
///
/// The code is assumed σ-detecting; otherwise the answer concerns
/// `(σ ∨ σ⁻¹)(C)` only.
pub fn maximality_witness(
    code: &Trellis,
    channel: &Channel,
    within: Option<&Trellis>,
) -> Result<Witness> {
    let universe;
    let within = match within {
        Some(m) => {
            code.alphabet().ensure_same(m.alphabet())?;
            if m.len() != code.len() {
                return Err(Error::WrongLength {
                    expected: code.len(),
                    found: m.len(),
                });
            }
            m
        }
        None => {
            universe = Trellis::universe(code.alphabet(), code.len());
            &universe
        }
    };
    let stepper = Stepper::new(&exclusion_automaton(code, channel)?);
    let mut search = Search {
        within,
        code,
        stepper: &stepper,
        failed: HashSet::new(),
        word: Vec::with_capacity(code.len()),
    };
    let start = stepper.start();
    Ok(if search.run(0, Some(0), start) {
        Witness::Addable(search.word)
    } else {
        Witness::None
    })
}

struct Search<'a> {
    within: &'a Trellis,
    code: &'a Trellis,
    stepper: &'a Stepper,
    failed: HashSet<(StateId, Option<StateId>, Vec<StateId>)>,
    word: Word,
}

impl Search<'_> {
    fn run(&mut self, m: StateId, c: Option<StateId>, set: Vec<StateId>) -> bool {
        if m == self.within.final_state() {
            let in_code = c == Some(self.code.final_state());
            return !in_code && !self.stepper.accepting(&set);
        }
        let key = (m, c, set);
        if self.failed.contains(&key) {
            return false;
        }
        let (_, _, set) = &key;
        let moves: Vec<(Symbol, StateId)> = self.within.as_dfa().transitions_from(m).collect();
        for (sym, m2) in moves {
            let c2 = c.and_then(|c| self.code.as_dfa().next(c, sym));
            let set2 = self.stepper.step(set, sym);
            self.word.push(sym);
            if self.run(m2, c2, set2) {
                return true;
            }
            self.word.pop();
        }
        self.failed.insert(key);
        false
    }
}

/// `|Σ^ℓ ∩ (σ ∨ σ⁻¹)(C)| / |Σ^ℓ|`. Equals 1 iff no word can be added.
///
/// Fails with [`Error::NotDetecting`] if the code is not σ-detecting.
pub fn maximality_index(code: &Trellis, channel: &Channel) -> Result<Ratio<u128>> {
    let witness = detection_witness(code, channel)?;
    if !witness.is_none() {
        return Err(Error::NotDetecting {
            channel: channel.name().to_string(),
            witness: witness.render(code.alphabet()),
        });
    }
    let excluded = excluded_count(code, channel)?;
    let total = code.alphabet().block_size(code.len())?;
    Ok(Ratio::new(excluded, total))
}

/// `|Σ^ℓ ∩ (σ ∨ σ⁻¹)(C)|`.
pub fn excluded_count(code: &Trellis, channel: &Channel) -> Result<u128> {
    let b = exclusion_automaton(code, channel)?;
    let universe = Trellis::universe(code.alphabet(), code.len()).to_nfa();
    universe.intersect(&b)?.determinize().count_words()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{make_del1_insend, make_id, make_sub};

    fn bin() -> Alphabet {
        Alphabet::binary()
    }

    fn code(words: &[&str]) -> Trellis {
        Trellis::from_strs(&bin(), words).unwrap()
    }

    #[test]
    fn sub1_detection() {
        let sub1 = make_sub(1, &bin());
        let c = code(&["000", "011", "101", "110"]);
        assert_eq!(detection_witness(&c, &sub1).unwrap(), Witness::None);
        let c = code(&["000", "001", "111"]);
        let w = detection_witness(&c, &sub1).unwrap();
        assert_eq!(w.render(&bin()), "DETECT-VIOLATION 000 001");
    }

    #[test]
    fn correction_reports_common_output() {
        let sub1 = make_sub(1, &bin());
        let c = code(&["000", "011"]);
        let w = correction_witness(&c, &sub1).unwrap();
        assert_eq!(w.render(&bin()), "CORRECT-VIOLATION 000 011 via 001");
        let c = code(&["000", "111"]);
        assert!(is_correcting(&c, &sub1).unwrap());
    }

    #[test]
    fn shift_needs_two_edits() {
        let c = code(&["0101", "1010"]);
        assert!(is_detecting(&c, &make_id(1, &bin())).unwrap());
        let w = detection_witness(&c, &make_id(2, &bin())).unwrap();
        assert_eq!(w.render(&bin()), "DETECT-VIOLATION 0101 1010");
        assert!(is_detecting(&code(&["00", "11"]), &make_id(1, &bin())).unwrap());
    }

    #[test]
    fn maximal_code_has_index_one() {
        let sub1 = make_sub(1, &bin());
        let c = code(&["000", "011", "101", "110"]);
        assert_eq!(maximality_index(&c, &sub1).unwrap(), Ratio::from_integer(1));
        assert_eq!(maximality_witness(&c, &sub1, None).unwrap(), Witness::None);
    }

    #[test]
    fn addable_word_is_least() {
        let sub1 = make_sub(1, &bin());
        let c = code(&["000"]);
        let w = maximality_witness(&c, &sub1, None).unwrap();
        assert_eq!(w.render(&bin()), "ADDABLE 011");
        assert_eq!(maximality_index(&c, &sub1).unwrap(), Ratio::new(4, 8));
    }

    #[test]
    fn index_rejects_non_detecting() {
        let sub1 = make_sub(1, &bin());
        let c = code(&["000", "001"]);
        assert!(matches!(
            maximality_index(&c, &sub1),
            Err(Error::NotDetecting { .. })
        ));
    }

    #[test]
    fn del1_on_suffix_code() {
        let del1 = make_del1_insend(&bin());
        let c = code(&["0001", "1101"]);
        assert!(is_detecting(&c, &del1).unwrap());
    }
}
