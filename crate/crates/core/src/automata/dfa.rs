use std::collections::{HashMap, VecDeque};

use rand::Rng;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::automata::count::PathCounts;
use crate::automata::{universe_dfa, Nfa, StateId};
use crate::error::Result;

/// A deterministic, ε-free, possibly partial automaton with one initial state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: StateId,
    finals: Vec<bool>,
    delta: Vec<Vec<Option<StateId>>>,
}

impl Dfa {
    /// A one-state automaton (state 0, initial, not final) accepting nothing.
    pub fn new(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Self {
            alphabet,
            initial: 0,
            finals: vec![false],
            delta: vec![vec![None; k]],
        }
    }

    pub fn add_state(&mut self, is_final: bool) -> StateId {
        self.finals.push(is_final);
        self.delta.push(vec![None; self.alphabet.len()]);
        self.finals.len() - 1
    }

    pub fn set_initial(&mut self, state: StateId) {
        assert!(state < self.num_states());
        self.initial = state;
    }

    pub fn set_final(&mut self, state: StateId, is_final: bool) {
        self.finals[state] = is_final;
    }

    /// Sets `δ(src, sym) = dst`, returning the previous target.
    pub fn set_transition(&mut self, src: StateId, sym: Symbol, dst: StateId) -> Option<StateId> {
        assert!(dst < self.num_states(), "transition target not declared");
        self.delta[src][usize::from(sym)].replace(dst)
    }

    pub fn clear_transition(&mut self, src: StateId, sym: Symbol) -> Option<StateId> {
        self.delta[src][usize::from(sym)].take()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.finals.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().flatten().filter(|t| t.is_some()).count()
    }

    pub fn size(&self) -> usize {
        self.num_states() + 2 * self.num_transitions()
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

    pub fn next(&self, state: StateId, sym: Symbol) -> Option<StateId> {
        self.delta[state][usize::from(sym)]
    }

    /// Outgoing transitions of `state` in symbol order.
    pub fn transitions_from(&self, state: StateId) -> impl Iterator<Item = (Symbol, StateId)> + '_ {
        self.delta[state]
            .iter()
            .enumerate()
            .filter_map(|(a, t)| t.map(|dst| (a as Symbol, dst)))
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Symbol, StateId)> + '_ {
        (0..self.num_states())
            .flat_map(move |s| self.transitions_from(s).map(move |(a, d)| (s, a, d)))
    }

    /// The state reached from the initial state on `w`, if any.
    pub fn run(&self, w: &[Symbol]) -> Option<StateId> {
        w.iter().try_fold(self.initial, |s, &sym| {
            self.delta[s].get(usize::from(sym)).copied().flatten()
        })
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        self.run(w).is_some_and(|s| self.finals[s])
    }

    pub fn accepts_str(&self, w: &str) -> Result<bool> {
        Ok(self.accepts(&self.alphabet.parse_word(w)?))
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut nfa = Nfa::new(self.alphabet.clone());
        for &f in &self.finals {
            nfa.add_state(f);
        }
        nfa.add_initial(self.initial);
        for (src, sym, dst) in self.transitions() {
            nfa.add_transition(src, Some(sym), dst);
        }
        nfa
    }

    /// Adds a non-final sink so that every `(state, symbol)` has a target.
    pub fn complete(&self) -> Dfa {
        if self.delta.iter().flatten().all(Option::is_some) {
            return self.clone();
        }
        let mut out = self.clone();
        let sink = out.add_state(false);
        for row in &mut out.delta {
            for t in row.iter_mut() {
                t.get_or_insert(sink);
            }
        }
        out
    }

    /// Complement within `Σ*`, or within `Σ^len` when a length is given.
    pub fn complement(&self, len: Option<usize>) -> Dfa {
        let mut flipped = self.complete();
        for f in &mut flipped.finals {
            *f = !*f;
        }
        match len {
            None => flipped,
            Some(len) => universe_dfa(&self.alphabet, len)
                .intersect(&flipped)
                .expect("same alphabet"),
        }
    }

    /// Accessible part of the product automaton for `L(self) ∩ L(other)`.
    pub fn intersect(&self, other: &Dfa) -> Result<Dfa> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let mut out = Dfa::new(self.alphabet.clone());
        let start = (self.initial, other.initial);
        out.set_final(0, self.finals[start.0] && other.finals[start.1]);
        let mut ids = HashMap::from([(start, 0)]);
        let mut queue = VecDeque::from([start]);
        while let Some((p, q)) = queue.pop_front() {
            let src = ids[&(p, q)];
            for sym in self.alphabet.symbols() {
                let (Some(p2), Some(q2)) = (self.next(p, sym), other.next(q, sym)) else {
                    continue;
                };
                let dst = *ids.entry((p2, q2)).or_insert_with(|| {
                    queue.push_back((p2, q2));
                    out.add_state(self.finals[p2] && other.finals[q2])
                });
                out.set_transition(src, sym, dst);
            }
        }
        Ok(out)
    }

    /// Keeps the initial state and all states on an initial-to-final path,
    /// renumbered breadth-first in symbol order.
    pub fn trim(&self) -> Dfa {
        let n = self.num_states();
        let mut reverse: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for (src, _, dst) in self.transitions() {
            reverse[dst].push(src);
        }
        let mut useful = self.finals.clone();
        let mut stack: Vec<StateId> = self.finals().collect();
        while let Some(s) = stack.pop() {
            for &src in &reverse[s] {
                if !useful[src] {
                    useful[src] = true;
                    stack.push(src);
                }
            }
        }
        let mut map = vec![usize::MAX; n];
        let mut order = vec![self.initial];
        map[self.initial] = 0;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for (_, dst) in self.transitions_from(s) {
                if useful[dst] && map[dst] == usize::MAX {
                    map[dst] = order.len();
                    order.push(dst);
                }
            }
            i += 1;
        }
        let mut out = Dfa::new(self.alphabet.clone());
        out.set_final(0, self.finals[self.initial]);
        for &s in &order[1..] {
            out.add_state(self.finals[s]);
        }
        for (new, &s) in order.iter().enumerate() {
            for (sym, dst) in self.transitions_from(s) {
                if map[dst] != usize::MAX {
                    out.set_transition(new, sym, map[dst]);
                }
            }
        }
        out
    }

    /// Whether the trimmed automaton has no cycle, i.e. the language is finite.
    pub fn is_acyclic(&self) -> bool {
        PathCounts::new(self).is_ok()
    }

    /// `|L(self)|` by path counting. Errors if the language is infinite.
    pub fn count_words(&self) -> Result<u128> {
        Ok(PathCounts::new(self)?.total())
    }

    /// A uniformly random accepted word. Errors on an empty or infinite
    /// language. Repeated sampling should go through [`PathCounts`] directly.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Word> {
        PathCounts::new(self)?.sample(self, rng)
    }
}
