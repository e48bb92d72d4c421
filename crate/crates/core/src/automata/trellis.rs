use rand::Rng;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::automata::count::PathCounts;
use crate::automata::nfa::check_word;
use crate::automata::{Dfa, Nfa, StateId};
use crate::error::{Error, Result};

/// A deterministic trellis: an acyclic DFA with one initial state (id 0) and
/// one final state, accepting a block code of words of length `len()`.
///
/// Path counts from every state to the final state are cached and kept up to
/// date by [`Trellis::add_word`], so uniform sampling and counting are cheap.
#[derive(Clone, Debug)]
pub struct Trellis {
    dfa: Dfa,
    len: usize,
    final_state: StateId,
    in_degree: Vec<u32>,
    paths: PathCounts,
}

impl PartialEq for Trellis {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.final_state == other.final_state && self.dfa == other.dfa
    }
}

impl Eq for Trellis {}

impl Trellis {
    /// The trellis of the empty code of word length `len`.
    pub fn empty(alphabet: &Alphabet, len: usize) -> Self {
        let mut dfa = Dfa::new(alphabet.clone());
        let final_state = dfa.add_state(true);
        Self {
            dfa,
            len,
            final_state,
            in_degree: vec![0, 0],
            paths: PathCounts::from_counts(vec![0, 1], 0),
        }
    }

    /// The trellis accepting every word of length `len`: a chain of `len + 1`
    /// states with every symbol on each step.
    pub fn universe(alphabet: &Alphabet, len: usize) -> Self {
        let mut dfa = Dfa::new(alphabet.clone());
        dfa.set_final(0, len == 0);
        for i in 1..=len {
            let s = dfa.add_state(i == len);
            for sym in alphabet.symbols() {
                dfa.set_transition(s - 1, sym, s);
            }
        }
        let k = alphabet.len() as u32;
        let mut in_degree = vec![k; len + 1];
        in_degree[0] = 0;
        Self::with_counts(dfa, len, len, in_degree)
    }

    fn with_counts(dfa: Dfa, len: usize, final_state: StateId, in_degree: Vec<u32>) -> Self {
        // Trellises built here are acyclic by construction.
        let paths = PathCounts::new(&dfa).expect("trellis is acyclic");
        Self {
            dfa,
            len,
            final_state,
            in_degree,
            paths,
        }
    }

    /// Prefix-tree trellis with a single shared final state accepting exactly
    /// `words`, all of which must have length `len`.
    pub fn from_words<I, W>(alphabet: &Alphabet, len: usize, words: I) -> Result<Self>
    where
        I: IntoIterator<Item = W>,
        W: AsRef<[Symbol]>,
    {
        let mut t = Self::empty(alphabet, len);
        for w in words {
            t.add_word(w.as_ref())?;
        }
        Ok(t)
    }

    /// Like [`Trellis::from_words`] for words written as strings; the length
    /// is taken from the first word.
    pub fn from_strs(alphabet: &Alphabet, words: &[&str]) -> Result<Self> {
        let parsed: Vec<Word> = words
            .iter()
            .map(|w| alphabet.parse_word(w))
            .collect::<Result<_>>()?;
        let len = parsed.first().map(Vec::len).ok_or_else(|| {
            Error::InvalidParameter("cannot infer word length from an empty code".into())
        })?;
        Self::from_words(alphabet, len, parsed)
    }

    /// Converts a DFA accepting a block code into a trellis. Final states are
    /// merged into one. `len` is required when the language is empty and must
    /// agree with the word length otherwise.
    pub fn from_dfa(dfa: &Dfa, len: Option<usize>) -> Result<Self> {
        let trimmed = dfa.trim();
        if trimmed.finals().next().is_none() {
            return len.map(|l| Self::empty(dfa.alphabet(), l)).ok_or_else(|| {
                Error::NotTrellis("empty language and no word length given".into())
            });
        }
        let n = trimmed.num_states();
        let mut depth = vec![usize::MAX; n];
        depth[0] = 0;
        let mut order = vec![0];
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for (_, dst) in trimmed.transitions_from(s) {
                if depth[dst] == usize::MAX {
                    depth[dst] = depth[s] + 1;
                    order.push(dst);
                } else if depth[dst] != depth[s] + 1 {
                    return Err(Error::NotTrellis(
                        "accepted words differ in length or the automaton has a cycle".into(),
                    ));
                }
            }
            i += 1;
        }
        let word_len = trimmed.finals().map(|f| depth[f]).next().unwrap();
        for f in trimmed.finals() {
            if depth[f] != word_len || trimmed.transitions_from(f).next().is_some() {
                return Err(Error::NotTrellis("accepted words differ in length".into()));
            }
        }
        if let Some(l) = len {
            if l != word_len {
                return Err(Error::WrongLength {
                    expected: l,
                    found: word_len,
                });
            }
        }
        if word_len == 0 {
            return Ok(Self::universe(dfa.alphabet(), 0));
        }
        let mut map = vec![usize::MAX; n];
        let mut out = Dfa::new(dfa.alphabet().clone());
        map[0] = 0;
        for &s in &order[1..] {
            if !trimmed.is_final(s) {
                map[s] = out.add_state(false);
            }
        }
        let final_state = out.add_state(true);
        for f in trimmed.finals() {
            map[f] = final_state;
        }
        let mut in_degree = vec![0u32; out.num_states()];
        for (src, sym, dst) in trimmed.transitions() {
            out.set_transition(map[src], sym, map[dst]);
            in_degree[map[dst]] += 1;
        }
        Ok(Self::with_counts(out, word_len, final_state, in_degree))
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.dfa.alphabet()
    }

    /// Block length of the code.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.count_words() == 0
    }

    pub fn as_dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn to_nfa(&self) -> Nfa {
        self.dfa.to_nfa()
    }

    pub fn final_state(&self) -> StateId {
        self.final_state
    }

    pub fn num_states(&self) -> usize {
        self.dfa.num_states()
    }

    pub fn size(&self) -> usize {
        self.dfa.size()
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        self.dfa.accepts(w)
    }

    pub fn accepts_str(&self, w: &str) -> Result<bool> {
        self.dfa.accepts_str(w)
    }

    /// Number of codewords, from the cached path counts.
    pub fn count_words(&self) -> u128 {
        self.paths.total()
    }

    /// All codewords in lexicographic order.
    pub fn words(&self) -> Vec<Word> {
        let mut out = Vec::new();
        let mut word = Vec::with_capacity(self.len);
        self.collect_words(0, &mut word, &mut out);
        out
    }

    fn collect_words(&self, state: StateId, word: &mut Word, out: &mut Vec<Word>) {
        if self.paths.count(state) == 0 {
            return;
        }
        if self.dfa.is_final(state) {
            out.push(word.clone());
        }
        for (sym, dst) in self.dfa.transitions_from(state) {
            word.push(sym);
            self.collect_words(dst, word, out);
            word.pop();
        }
    }

    /// Codewords rendered as strings, in lexicographic order.
    pub fn word_strings(&self) -> Vec<String> {
        self.words()
            .iter()
            .map(|w| self.alphabet().format_word(w))
            .collect()
    }

    /// Depth (distance from the initial state) of every state; unreachable
    /// states get `usize::MAX`.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![usize::MAX; self.num_states()];
        depth[0] = 0;
        let mut queue = vec![0];
        let mut i = 0;
        while i < queue.len() {
            let s = queue[i];
            for (_, dst) in self.dfa.transitions_from(s) {
                if depth[dst] == usize::MAX {
                    depth[dst] = depth[s] + 1;
                    queue.push(dst);
                }
            }
            i += 1;
        }
        depth
    }

    /// A uniformly random codeword.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Word> {
        self.paths.sample(&self.dfa, rng)
    }

    /// Adds `w` to the code. Returns `Ok(false)` if `w` was already a codeword.
    ///
    /// Follows the longest prefix of `w` already present, cloning any state
    /// with more than one incoming transition so that the new suffix is only
    /// reachable through `w`'s own prefix, then adds fresh states and sends the
    /// last symbol into the shared final state. Costs `O(len · |Σ|)`.
    pub fn add_word(&mut self, w: &[Symbol]) -> Result<bool> {
        if w.len() != self.len {
            return Err(Error::WrongLength {
                expected: self.len,
                found: w.len(),
            });
        }
        check_word(self.alphabet(), w)?;
        if self.accepts(w) {
            return Ok(false);
        }
        if self.len == 0 {
            *self = Self::universe(self.alphabet(), 0);
            return Ok(true);
        }
        let mut spine = Vec::with_capacity(self.len);
        let mut state = 0;
        for &sym in &w[..self.len - 1] {
            spine.push(state);
            let next = match self.dfa.next(state, sym) {
                Some(next) if self.in_degree[next] > 1 => {
                    let copy = self.clone_state(next);
                    self.in_degree[next] -= 1;
                    self.in_degree[copy] = 1;
                    self.dfa.set_transition(state, sym, copy);
                    copy
                }
                Some(next) => next,
                None => {
                    let fresh = self.push_state(0);
                    self.in_degree[fresh] = 1;
                    self.dfa.set_transition(state, sym, fresh);
                    fresh
                }
            };
            state = next;
        }
        spine.push(state);
        let last = w[self.len - 1];
        let previous = self.dfa.set_transition(state, last, self.final_state);
        debug_assert!(previous.is_none());
        self.in_degree[self.final_state] += 1;
        for s in spine {
            let c = self.paths.count(s).checked_add(1).ok_or(Error::Overflow)?;
            self.paths.set_count(s, c);
        }
        Ok(true)
    }

    /// A new trellis accepting `C ∪ {w}`.
    pub fn with_word(&self, w: &[Symbol]) -> Result<Trellis> {
        let mut t = self.clone();
        t.add_word(w)?;
        Ok(t)
    }

    fn push_state(&mut self, count: u128) -> StateId {
        let s = self.dfa.add_state(false);
        self.in_degree.push(0);
        self.paths.push_count(count);
        s
    }

    fn clone_state(&mut self, state: StateId) -> StateId {
        let copy = self.push_state(self.paths.count(state));
        let out: Vec<(Symbol, StateId)> = self.dfa.transitions_from(state).collect();
        for (sym, dst) in out {
            self.dfa.set_transition(copy, sym, dst);
            self.in_degree[dst] += 1;
        }
        copy
    }

    /// Checks the structural invariants; used by tests.
    pub fn check_invariants(&self) -> Result<()> {
        let rebuilt = Trellis::from_dfa(&self.dfa, Some(self.len))?;
        if rebuilt.count_words() != self.count_words() {
            return Err(Error::NotTrellis("cached path counts are stale".into()));
        }
        let fresh = PathCounts::new(&self.dfa)?;
        for s in 0..self.num_states() {
            if fresh.count(s) != self.paths.count(s) {
                return Err(Error::NotTrellis(format!("stale path count at state {s}")));
            }
        }
        let mut in_degree = vec![0u32; self.num_states()];
        for (_, _, dst) in self.dfa.transitions() {
            in_degree[dst] += 1;
        }
        if in_degree != self.in_degree {
            return Err(Error::NotTrellis("stale in-degrees".into()));
        }
        let finals: Vec<StateId> = self.dfa.finals().collect();
        if finals != [self.final_state] {
            return Err(Error::NotTrellis("expected exactly one final state".into()));
        }
        Ok(())
    }
}
