//! Finite transducers realizing rational relations over one alphabet.
//!
//! A transducer reads an input word and writes an output word along a path of
//! transitions labeled `x/y`. `y ∈ T(x)` when some initial-to-final path reads
//! `x` and writes `y`. Channels (see [`crate::channels`]) are transducers that
//! always allow the input through unchanged.
//!
//! The operations here follow the usual constructions:
//!
//! - [`Transducer::standard_form`] splits long labels into single-symbol steps.
//! - [`Transducer::inverse`] swaps input and output.
//! - [`Transducer::union`] places two transducers side by side.
//! - [`compose`] chains two relations through a shared middle word.
//! - [`product`] pushes the language of an automaton through a transducer,
//!   giving an automaton for `T(L(A))`.

use std::collections::{HashMap, VecDeque};
use std::ops::Range;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::automata::{Label, Nfa, StateId};
use crate::error::Result;

/// A transition `(src, input/output, dst)`. Labels are words and may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: StateId,
    pub input: Word,
    pub output: Word,
    pub dst: StateId,
}

/// A transducer `(S, Σ, I, T, F)` with dense state ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    alphabet: Alphabet,
    num_states: usize,
    initial: Vec<StateId>,
    finals: Vec<bool>,
    edges: Vec<Edge>,
}

/// Where the states of each operand ended up after [`Transducer::union_parts`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnionParts {
    pub left: Range<StateId>,
    pub right: Range<StateId>,
}

impl Transducer {
    pub fn new(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            num_states: 0,
            initial: Vec::new(),
            finals: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// One state, initial and final, with `a/a` loops: the identity relation.
    pub fn identity(alphabet: Alphabet) -> Self {
        let mut t = Self::new(alphabet);
        let s = t.add_state(true);
        t.add_initial(s);
        for a in t.alphabet.symbols().collect::<Vec<_>>() {
            t.add_edge(s, &[a], &[a], s);
        }
        t
    }

    pub fn add_state(&mut self, is_final: bool) -> StateId {
        self.finals.push(is_final);
        self.num_states += 1;
        self.num_states - 1
    }

    pub fn add_initial(&mut self, state: StateId) {
        assert!(
            state < self.num_states,
            "initial state {state} not declared"
        );
        if let Err(pos) = self.initial.binary_search(&state) {
            self.initial.insert(pos, state);
        }
    }

    pub fn set_final(&mut self, state: StateId, is_final: bool) {
        self.finals[state] = is_final;
    }

    pub fn add_edge(&mut self, src: StateId, input: &[Symbol], output: &[Symbol], dst: StateId) {
        assert!(
            src < self.num_states && dst < self.num_states,
            "transition endpoint not declared"
        );
        let k = self.alphabet.len();
        assert!(
            input.iter().chain(output).all(|&s| usize::from(s) < k),
            "symbol out of range"
        );
        self.edges.push(Edge {
            src,
            input: input.to_vec(),
            output: output.to_vec(),
            dst,
        });
    }

    /// Adds a standard-form edge with optional single-symbol labels.
    pub fn add_step(&mut self, src: StateId, input: Label, output: Label, dst: StateId) {
        let i: Vec<Symbol> = input.into_iter().collect();
        let o: Vec<Symbol> = output.into_iter().collect();
        self.add_edge(src, &i, &o, dst);
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.finals[state]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.finals
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(s, _)| s)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// States plus, for each transition, 1 + input length + output length.
    pub fn size(&self) -> usize {
        self.num_states
            + self
                .edges
                .iter()
                .map(|e| 1 + e.input.len() + e.output.len())
                .sum::<usize>()
    }

    pub fn is_standard(&self) -> bool {
        self.edges
            .iter()
            .all(|e| e.input.len() <= 1 && e.output.len() <= 1)
    }

    pub fn has_epsilon_input(&self) -> bool {
        self.edges.iter().any(|e| e.input.is_empty())
    }

    /// An equivalent transducer whose labels are single symbols or ε. An edge
    /// `x/y` with `n = max(|x|, |y|) > 1` becomes a chain of `n` steps through
    /// fresh states, step `i` reading `x[i]` (or ε) and writing `y[i]` (or ε).
    pub fn standard_form(&self) -> Transducer {
        if self.is_standard() {
            return self.clone();
        }
        let mut out = Transducer {
            alphabet: self.alphabet.clone(),
            num_states: self.num_states,
            initial: self.initial.clone(),
            finals: self.finals.clone(),
            edges: Vec::with_capacity(self.edges.len()),
        };
        for e in &self.edges {
            let steps = e.input.len().max(e.output.len());
            if steps <= 1 {
                out.edges.push(e.clone());
                continue;
            }
            let mut from = e.src;
            for i in 0..steps {
                let to = if i + 1 == steps {
                    e.dst
                } else {
                    out.add_state(false)
                };
                out.add_step(from, e.input.get(i).copied(), e.output.get(i).copied(), to);
                from = to;
            }
        }
        out
    }

    /// The inverse transducer: every `x/y` becomes `y/x`.
    pub fn inverse(&self) -> Transducer {
        let mut out = self.clone();
        for e in &mut out.edges {
            std::mem::swap(&mut e.input, &mut e.output);
        }
        out
    }

    /// `T ∨ S`: both transducers side by side, `other`'s states shifted by
    /// `self.num_states()`.
    pub fn union(&self, other: &Transducer) -> Result<Transducer> {
        Ok(self.union_parts(other)?.0)
    }

    /// Like [`Transducer::union`], also reporting the state range of each operand.
    pub fn union_parts(&self, other: &Transducer) -> Result<(Transducer, UnionParts)> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let offset = self.num_states;
        let mut out = self.clone();
        out.num_states += other.num_states;
        out.finals.extend_from_slice(&other.finals);
        for &s in &other.initial {
            out.add_initial(s + offset);
        }
        out.edges.extend(other.edges.iter().map(|e| Edge {
            src: e.src + offset,
            input: e.input.clone(),
            output: e.output.clone(),
            dst: e.dst + offset,
        }));
        let parts = UnionParts {
            left: 0..offset,
            right: offset..offset + other.num_states,
        };
        Ok((out, parts))
    }

    /// Removes states not on any initial-to-final path.
    pub fn trim(&self) -> Transducer {
        let n = self.num_states;
        let mut fwd_adj = vec![Vec::new(); n];
        let mut bwd_adj = vec![Vec::new(); n];
        for e in &self.edges {
            fwd_adj[e.src].push(e.dst);
            bwd_adj[e.dst].push(e.src);
        }
        let fwd = reach(&fwd_adj, self.initial.iter().copied());
        let bwd = reach(&bwd_adj, self.finals());
        let mut map = vec![usize::MAX; n];
        let mut out = Transducer::new(self.alphabet.clone());
        for s in 0..n {
            if fwd[s] && bwd[s] {
                map[s] = out.add_state(self.finals[s]);
            }
        }
        for &s in &self.initial {
            if map[s] != usize::MAX {
                out.add_initial(map[s]);
            }
        }
        for e in &self.edges {
            if map[e.src] != usize::MAX && map[e.dst] != usize::MAX {
                out.edges.push(Edge {
                    src: map[e.src],
                    input: e.input.clone(),
                    output: e.output.clone(),
                    dst: map[e.dst],
                });
            }
        }
        out
    }

    /// Automaton accepting `T(x)`.
    pub fn image(&self, x: &[Symbol]) -> Result<Nfa> {
        product(&Nfa::from_word(self.alphabet.clone(), x), self)
    }

    pub fn image_str(&self, x: &str) -> Result<Nfa> {
        self.image(&self.alphabet.parse_word(x)?)
    }

    /// Bounded input-preservation check: every word `x` with `|x| ≤ max_len`
    /// in the domain satisfies `x ∈ T(x)`. Returns the first counterexample.
    pub fn input_preservation_counterexample(&self, max_len: usize) -> Result<Option<Word>> {
        for x in self.alphabet.words_up_to(max_len) {
            let image = self.image(&x)?;
            if !image.is_empty_language() && !image.accepts(&x) {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    pub fn is_input_preserving(&self, max_len: usize) -> Result<bool> {
        Ok(self.input_preservation_counterexample(max_len)?.is_none())
    }

    /// Edges of a standard-form transducer indexed by source state and input
    /// label (`0` for ε, `1 + a` for symbol `a`).
    fn step_index(&self) -> Vec<Vec<Vec<(Label, StateId)>>> {
        debug_assert!(self.is_standard());
        let k = self.alphabet.len();
        let mut index = vec![vec![Vec::new(); k + 1]; self.num_states];
        for e in &self.edges {
            let slot = e.input.first().map_or(0, |&a| 1 + usize::from(a));
            index[e.src][slot].push((e.output.first().copied(), e.dst));
        }
        index
    }
}

fn reach(adj: &[Vec<StateId>], start: impl Iterator<Item = StateId>) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack: Vec<StateId> = start.collect();
    for &s in &stack {
        seen[s] = true;
    }
    while let Some(s) = stack.pop() {
        for &d in &adj[s] {
            if !seen[d] {
                seen[d] = true;
                stack.push(d);
            }
        }
    }
    seen
}

/// The composition `s ∘ t`: `z ∈ (s ∘ t)(x)` iff `y ∈ t(x)` and `z ∈ s(y)` for
/// some `y`.
///
/// Works on standard forms. From a state pair `(p, q)`: an ε-output step of `t`
/// advances `t` alone, an ε-input step of `s` advances `s` alone, and a `t`
/// step writing `b` pairs with an `s` step reading `b`. Only accessible pairs
/// are built; the result is trimmed.
pub fn compose(s: &Transducer, t: &Transducer) -> Result<Transducer> {
    s.alphabet.ensure_same(&t.alphabet)?;
    let s = s.standard_form();
    let t = t.standard_form();
    let s_index = s.step_index();
    let mut out = Transducer::new(s.alphabet.clone());
    let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |out: &mut Transducer, queue: &mut VecDeque<_>, pair: (StateId, StateId)| {
        *ids.entry(pair).or_insert_with(|| {
            queue.push_back(pair);
            out.add_state(t.finals[pair.0] && s.finals[pair.1])
        })
    };
    for &p in &t.initial {
        for &q in &s.initial {
            let id = intern(&mut out, &mut queue, (p, q));
            out.add_initial(id);
        }
    }
    let mut t_out: Vec<Vec<&Edge>> = vec![Vec::new(); t.num_states];
    for e in &t.edges {
        t_out[e.src].push(e);
    }
    while let Some((p, q)) = queue.pop_front() {
        let src = intern(&mut out, &mut queue, (p, q));
        for e in &t_out[p] {
            match e.output.first() {
                None => {
                    let dst = intern(&mut out, &mut queue, (e.dst, q));
                    out.edges.push(Edge {
                        src,
                        input: e.input.clone(),
                        output: Vec::new(),
                        dst,
                    });
                }
                Some(&b) => {
                    for &(z, q2) in &s_index[q][1 + usize::from(b)] {
                        let dst = intern(&mut out, &mut queue, (e.dst, q2));
                        out.edges.push(Edge {
                            src,
                            input: e.input.clone(),
                            output: z.into_iter().collect(),
                            dst,
                        });
                    }
                }
            }
        }
        for &(z, q2) in &s_index[q][0] {
            let dst = intern(&mut out, &mut queue, (p, q2));
            out.edges.push(Edge {
                src,
                input: Vec::new(),
                output: z.into_iter().collect(),
                dst,
            });
        }
    }
    Ok(out.trim())
}

/// The automaton `A ⊳ T` accepting `T(L(A))`.
///
/// `a` is made ε-free first and `t` is put in standard form. If `t` reads ε
/// anywhere, every state of `a` implicitly carries an ε self-loop, so such
/// steps advance `t` alone. Pairs `((p₁,p₂), y, (q₁,q₂))` come from `(p₁,x,q₁)`
/// in `a` and `(p₂,x/y,q₂)` in `t`. Only accessible pairs are built and the
/// result is trimmed; size is `O(|a|·|t|)`.
pub fn product(a: &Nfa, t: &Transducer) -> Result<Nfa> {
    a.alphabet().ensure_same(&t.alphabet)?;
    let a = if a.has_epsilon() {
        a.remove_epsilon()
    } else {
        a.clone()
    };
    let t = t.standard_form();
    let index = t.step_index();
    let mut out = Nfa::new(a.alphabet().clone());
    let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |out: &mut Nfa, queue: &mut VecDeque<_>, pair: (StateId, StateId)| {
        *ids.entry(pair).or_insert_with(|| {
            queue.push_back(pair);
            out.add_state(a.is_final(pair.0) && t.finals[pair.1])
        })
    };
    for &p in a.initial() {
        for &q in &t.initial {
            let id = intern(&mut out, &mut queue, (p, q));
            out.add_initial(id);
        }
    }
    while let Some((p, q)) = queue.pop_front() {
        let src = intern(&mut out, &mut queue, (p, q));
        for &(y, q2) in &index[q][0] {
            let dst = intern(&mut out, &mut queue, (p, q2));
            out.add_transition(src, y, dst);
        }
        for &(label, p2) in a.transitions_from(p) {
            let x = label.expect("ε-free");
            for &(y, q2) in &index[q][1 + usize::from(x)] {
                let dst = intern(&mut out, &mut queue, (p2, q2));
                out.add_transition(src, y, dst);
            }
        }
    }
    Ok(out.trim())
}
