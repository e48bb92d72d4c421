use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::automata::{Dfa, Label, StateId};
use crate::error::{Error, Result};

/// A nondeterministic finite automaton with ε-transitions.
///
/// States are dense indices `0..num_states()`. Transitions are kept per source
/// state in insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    initial: Vec<StateId>,
    finals: Vec<bool>,
    transitions: Vec<Vec<(Label, StateId)>>,
}

impl Nfa {
    /// An automaton with no states, accepting the empty language.
    pub fn new(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            initial: Vec::new(),
            finals: Vec::new(),
            transitions: Vec::new(),
        }
    }

    /// The single-word automaton accepting `{w}`.
    pub fn from_word(alphabet: Alphabet, w: &[Symbol]) -> Self {
        let mut nfa = Self::new(alphabet);
        let mut state = nfa.add_state(w.is_empty());
        nfa.add_initial(state);
        for (i, &sym) in w.iter().enumerate() {
            let next = nfa.add_state(i + 1 == w.len());
            nfa.add_transition(state, Some(sym), next);
            state = next;
        }
        nfa
    }

    pub fn add_state(&mut self, is_final: bool) -> StateId {
        self.finals.push(is_final);
        self.transitions.push(Vec::new());
        self.finals.len() - 1
    }

    pub fn add_initial(&mut self, state: StateId) {
        assert!(
            state < self.num_states(),
            "initial state {state} not declared"
        );
        if let Err(pos) = self.initial.binary_search(&state) {
            self.initial.insert(pos, state);
        }
    }

    pub fn set_final(&mut self, state: StateId, is_final: bool) {
        self.finals[state] = is_final;
    }

    pub fn add_transition(&mut self, src: StateId, label: Label, dst: StateId) {
        assert!(
            src < self.num_states() && dst < self.num_states(),
            "transition endpoint not declared"
        );
        if let Some(sym) = label {
            assert!(
                usize::from(sym) < self.alphabet.len(),
                "symbol out of range"
            );
        }
        self.transitions[src].push((label, dst));
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.finals.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    /// States plus the size of each transition (1 + label length).
    pub fn size(&self) -> usize {
        self.num_states()
            + self
                .transitions
                .iter()
                .flatten()
                .map(|(l, _)| 1 + usize::from(l.is_some()))
                .sum::<usize>()
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

    pub fn transitions_from(&self, state: StateId) -> &[(Label, StateId)] {
        &self.transitions[state]
    }

    /// All transitions as `(src, label, dst)`.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Label, StateId)> + '_ {
        self.transitions
            .iter()
            .enumerate()
            .flat_map(|(src, ts)| ts.iter().map(move |&(l, dst)| (src, l, dst)))
    }

    pub fn has_epsilon(&self) -> bool {
        self.transitions.iter().flatten().any(|(l, _)| l.is_none())
    }

    /// Extends `set` (a list of states, marked in `seen`) with its ε-closure.
    fn close(&self, set: &mut Vec<StateId>, seen: &mut [bool]) {
        let mut i = 0;
        while i < set.len() {
            let s = set[i];
            for &(label, dst) in &self.transitions[s] {
                if label.is_none() && !seen[dst] {
                    seen[dst] = true;
                    set.push(dst);
                }
            }
            i += 1;
        }
    }

    /// Sorted ε-closure of a set of states.
    pub fn epsilon_closure(&self, states: &[StateId]) -> Vec<StateId> {
        let mut seen = vec![false; self.num_states()];
        let mut set = Vec::new();
        for &s in states {
            if !seen[s] {
                seen[s] = true;
                set.push(s);
            }
        }
        self.close(&mut set, &mut seen);
        set.sort_unstable();
        set
    }

    fn step(&self, set: &[StateId], sym: Symbol) -> Vec<StateId> {
        let mut seen = vec![false; self.num_states()];
        let mut next = Vec::new();
        for &s in set {
            for &(label, dst) in &self.transitions[s] {
                if label == Some(sym) && !seen[dst] {
                    seen[dst] = true;
                    next.push(dst);
                }
            }
        }
        self.close(&mut next, &mut seen);
        next.sort_unstable();
        next
    }

    /// Membership by subset simulation with ε-closure.
    pub fn accepts(&self, w: &[Symbol]) -> bool {
        let mut current = self.epsilon_closure(&self.initial);
        for &sym in w {
            if current.is_empty() {
                return false;
            }
            current = self.step(&current, sym);
        }
        current.iter().any(|&s| self.finals[s])
    }

    /// Membership for a word given as a character string.
    pub fn accepts_str(&self, w: &str) -> Result<bool> {
        Ok(self.accepts(&self.alphabet.parse_word(w)?))
    }

    /// An equivalent automaton without ε-transitions, on the same states.
    pub fn remove_epsilon(&self) -> Nfa {
        if !self.has_epsilon() {
            return self.clone();
        }
        let n = self.num_states();
        let mut out = Nfa::new(self.alphabet.clone());
        for _ in 0..n {
            out.add_state(false);
        }
        for &s in &self.initial {
            out.add_initial(s);
        }
        let mut seen = vec![false; n];
        let mut closure = Vec::new();
        let mut dedup: Vec<(Symbol, StateId)> = Vec::new();
        for s in 0..n {
            closure.clear();
            closure.push(s);
            seen[s] = true;
            self.close(&mut closure, &mut seen);
            dedup.clear();
            for &q in &closure {
                seen[q] = false;
                if self.finals[q] {
                    out.finals[s] = true;
                }
                for &(label, dst) in &self.transitions[q] {
                    if let Some(sym) = label {
                        dedup.push((sym, dst));
                    }
                }
            }
            dedup.sort_unstable();
            dedup.dedup();
            out.transitions[s] = dedup.iter().map(|&(sym, dst)| (Some(sym), dst)).collect();
        }
        out
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<StateId> = self.initial.clone();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &(_, dst) in &self.transitions[s] {
                if !seen[dst] {
                    seen[dst] = true;
                    stack.push(dst);
                }
            }
        }
        seen
    }

    fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut reverse: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for (src, _, dst) in self.transitions() {
            reverse[dst].push(src);
        }
        let mut seen = self.finals.clone();
        let mut stack: Vec<StateId> = self.finals().collect();
        while let Some(s) = stack.pop() {
            for &src in &reverse[s] {
                if !seen[src] {
                    seen[src] = true;
                    stack.push(src);
                }
            }
        }
        seen
    }

    /// Keeps only states on some initial-to-final path, renumbered in
    /// increasing order of their old ids.
    pub fn trim(&self) -> Nfa {
        let fwd = self.reachable();
        let bwd = self.coreachable();
        self.restrict(|s| fwd[s] && bwd[s])
    }

    fn restrict(&self, keep: impl Fn(StateId) -> bool) -> Nfa {
        let mut map = vec![usize::MAX; self.num_states()];
        let mut out = Nfa::new(self.alphabet.clone());
        for (s, m) in map.iter_mut().enumerate() {
            if keep(s) {
                *m = out.add_state(self.finals[s]);
            }
        }
        for &s in &self.initial {
            if map[s] != usize::MAX {
                out.add_initial(map[s]);
            }
        }
        for (src, label, dst) in self.transitions() {
            if map[src] != usize::MAX && map[dst] != usize::MAX {
                out.transitions[map[src]].push((label, map[dst]));
            }
        }
        out
    }

    pub fn is_empty_language(&self) -> bool {
        !self
            .coreachable()
            .iter()
            .zip(self.reachable())
            .any(|(&b, f)| b && f)
    }

    /// Subset construction. The result is partial (no sink state); subsets are
    /// explored breadth-first in symbol order, so state ids are canonical.
    pub fn determinize(&self) -> Dfa {
        let start = self.epsilon_closure(&self.initial);
        let mut dfa = Dfa::new(self.alphabet.clone());
        dfa.set_final(0, start.iter().any(|&s| self.finals[s]));
        let mut ids: HashMap<Vec<StateId>, StateId> = HashMap::new();
        let mut queue = VecDeque::new();
        ids.insert(start.clone(), 0);
        queue.push_back(start);
        while let Some(set) = queue.pop_front() {
            let src = ids[&set];
            for sym in self.alphabet.symbols() {
                let next = self.step(&set, sym);
                if next.is_empty() {
                    continue;
                }
                let dst = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = dfa.add_state(next.iter().any(|&s| self.finals[s]));
                        ids.insert(next.clone(), id);
                        queue.push_back(next);
                        id
                    }
                };
                dfa.set_transition(src, sym, dst);
            }
        }
        dfa
    }

    /// Product automaton accepting `L(self) ∩ L(other)`. ε-moves advance one
    /// side at a time.
    pub fn intersect(&self, other: &Nfa) -> Result<Nfa> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let mut out = Nfa::new(self.alphabet.clone());
        let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut queue = VecDeque::new();
        for &p in &self.initial {
            for &q in &other.initial {
                let id = out.add_state(self.finals[p] && other.finals[q]);
                out.add_initial(id);
                ids.insert((p, q), id);
                queue.push_back((p, q));
            }
        }
        let mut intern = |out: &mut Nfa, queue: &mut VecDeque<_>, pair: (StateId, StateId)| {
            *ids.entry(pair).or_insert_with(|| {
                queue.push_back(pair);
                out.add_state(self.finals[pair.0] && other.finals[pair.1])
            })
        };
        while let Some((p, q)) = queue.pop_front() {
            let src = intern(&mut out, &mut queue, (p, q));
            for &(l1, p2) in &self.transitions[p] {
                match l1 {
                    None => {
                        let dst = intern(&mut out, &mut queue, (p2, q));
                        out.transitions[src].push((None, dst));
                    }
                    Some(a) => {
                        for &(l2, q2) in &other.transitions[q] {
                            if l2 == Some(a) {
                                let dst = intern(&mut out, &mut queue, (p2, q2));
                                out.transitions[src].push((Some(a), dst));
                            }
                        }
                    }
                }
            }
            for &(l2, q2) in &other.transitions[q] {
                if l2.is_none() {
                    let dst = intern(&mut out, &mut queue, (p, q2));
                    out.transitions[src].push((None, dst));
                }
            }
        }
        Ok(out.trim())
    }

    /// The shortest accepted word, lexicographically least among the shortest.
    pub fn shortlex_least(&self) -> Option<Word> {
        let start = self.epsilon_closure(&self.initial);
        let mut parent: HashMap<Vec<StateId>, Option<(Vec<StateId>, Symbol)>> = HashMap::new();
        let mut queue = VecDeque::new();
        parent.insert(start.clone(), None);
        queue.push_back(start);
        while let Some(set) = queue.pop_front() {
            if set.iter().any(|&s| self.finals[s]) {
                let mut word = Vec::new();
                let mut cur = set;
                while let Some(Some((prev, sym))) = parent.get(&cur) {
                    word.push(*sym);
                    cur = prev.clone();
                }
                word.reverse();
                return Some(word);
            }
            for sym in self.alphabet.symbols() {
                let next = self.step(&set, sym);
                if !next.is_empty() && !parent.contains_key(&next) {
                    parent.insert(next.clone(), Some((set.clone(), sym)));
                    queue.push_back(next);
                }
            }
        }
        None
    }

    /// All accepted words of length at most `max_len`.
    pub fn words_up_to(&self, max_len: usize) -> BTreeSet<Word> {
        let trimmed = self.trim();
        let mut out = BTreeSet::new();
        let mut stack = vec![(Vec::new(), trimmed.epsilon_closure(&trimmed.initial))];
        while let Some((word, set)) = stack.pop() {
            if set.is_empty() {
                continue;
            }
            if set.iter().any(|&s| trimmed.finals[s]) {
                out.insert(word.clone());
            }
            if word.len() == max_len {
                continue;
            }
            for sym in trimmed.alphabet.symbols() {
                let next = trimmed.step(&set, sym);
                if !next.is_empty() {
                    let mut w = word.clone();
                    w.push(sym);
                    stack.push((w, next));
                }
            }
        }
        out
    }

    /// A reusable membership tester.
    pub fn matcher(&self) -> Matcher {
        Matcher::new(self)
    }
}

/// Fast repeated membership queries on a fixed automaton.
///
/// Built from the ε-free, trimmed version of the automaton; successors are
/// stored per `(state, symbol)`.
#[derive(Clone, Debug)]
pub struct Matcher {
    k: usize,
    next: Vec<Vec<StateId>>,
    initial: Vec<StateId>,
    finals: Vec<bool>,
    mark: Vec<u32>,
    generation: u32,
    current: Vec<StateId>,
    scratch: Vec<StateId>,
}

impl Matcher {
    fn new(nfa: &Nfa) -> Self {
        let free = nfa.remove_epsilon().trim();
        let k = free.alphabet.len();
        let n = free.num_states();
        let mut next = vec![Vec::new(); n * k];
        for (src, label, dst) in free.transitions() {
            let sym = label.expect("ε-free");
            next[src * k + usize::from(sym)].push(dst);
        }
        Self {
            k,
            next,
            initial: free.initial.clone(),
            finals: free.finals.clone(),
            mark: vec![0; n],
            generation: 0,
            current: Vec::new(),
            scratch: Vec::new(),
        }
    }

    pub fn num_states(&self) -> usize {
        self.finals.len()
    }

    pub fn accepts(&mut self, w: &[Symbol]) -> bool {
        self.current.clear();
        self.current.extend_from_slice(&self.initial);
        for &sym in w {
            if self.current.is_empty() {
                return false;
            }
            self.generation = self.generation.wrapping_add(1);
            if self.generation == 0 {
                self.mark.iter_mut().for_each(|m| *m = 0);
                self.generation = 1;
            }
            self.scratch.clear();
            for &s in &self.current {
                for &dst in &self.next[s * self.k + usize::from(sym)] {
                    if self.mark[dst] != self.generation {
                        self.mark[dst] = self.generation;
                        self.scratch.push(dst);
                    }
                }
            }
            std::mem::swap(&mut self.current, &mut self.scratch);
        }
        self.current.iter().any(|&s| self.finals[s])
    }
}

/// Checks that `w` only uses symbols of `alphabet`.
pub(crate) fn check_word(alphabet: &Alphabet, w: &[Symbol]) -> Result<()> {
    match w.iter().find(|&&s| usize::from(s) >= alphabet.len()) {
        Some(&s) => Err(Error::InvalidParameter(format!(
            "symbol index {s} outside alphabet {alphabet}"
        ))),
        None => Ok(()),
    }
}
