//! Path counting and uniform sampling over finite languages.

use rand::Rng;

use crate::alphabet::Word;
use crate::automata::{Dfa, StateId};
use crate::error::{Error, Result};

/// Number of accepting paths from each state of a DFA with a finite language.
///
/// Since the automaton is deterministic, paths and words coincide, so
/// `count(q)` is the number of words accepted from `q`.
#[derive(Clone, Debug)]
pub struct PathCounts {
    counts: Vec<u128>,
    initial: StateId,
}

impl PathCounts {
    /// Counts paths backwards from the final states. States that cannot reach a
    /// final state count zero; a cycle through counted states is an error.
    pub fn new(dfa: &Dfa) -> Result<Self> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Open,
            Done,
        }
        let n = dfa.num_states();
        let mut counts = vec![0u128; n];
        let mut mark = vec![Mark::New; n];
        // Iterative post-order DFS, rooted at every state in turn.
        let k = dfa.alphabet().len();
        let mut cycle_states = Vec::new();
        let mut stack: Vec<(StateId, usize)> = Vec::new();
        for root in std::iter::once(dfa.initial()).chain(0..n) {
            if mark[root] != Mark::New {
                continue;
            }
            mark[root] = Mark::Open;
            stack.push((root, 0));
            while let Some(&mut (s, ref mut next_sym)) = stack.last_mut() {
                if *next_sym < k {
                    let sym = *next_sym as u8;
                    *next_sym += 1;
                    if let Some(dst) = dfa.next(s, sym) {
                        match mark[dst] {
                            Mark::New => {
                                mark[dst] = Mark::Open;
                                stack.push((dst, 0));
                            }
                            Mark::Open => cycle_states.push(dst),
                            Mark::Done => {}
                        }
                    }
                    continue;
                }
                stack.pop();
                let mut c = u128::from(dfa.is_final(s));
                for (_, dst) in dfa.transitions_from(s) {
                    if mark[dst] == Mark::Done {
                        c = c.checked_add(counts[dst]).ok_or(Error::Overflow)?;
                    }
                }
                counts[s] = c;
                mark[s] = Mark::Done;
            }
        }
        // A back edge only matters if the cycle can reach a final state.
        if cycle_states.into_iter().any(|s| Self::coreachable(dfa, s)) {
            return Err(Error::Cyclic);
        }
        Ok(Self {
            counts,
            initial: dfa.initial(),
        })
    }

    fn coreachable(dfa: &Dfa, from: StateId) -> bool {
        let mut seen = vec![false; dfa.num_states()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(s) = stack.pop() {
            if dfa.is_final(s) {
                return true;
            }
            for (_, dst) in dfa.transitions_from(s) {
                if !seen[dst] {
                    seen[dst] = true;
                    stack.push(dst);
                }
            }
        }
        false
    }

    pub(crate) fn from_counts(counts: Vec<u128>, initial: StateId) -> Self {
        Self { counts, initial }
    }

    pub(crate) fn set_count(&mut self, state: StateId, count: u128) {
        self.counts[state] = count;
    }

    pub(crate) fn push_count(&mut self, count: u128) {
        self.counts.push(count);
    }

    pub fn total(&self) -> u128 {
        self.counts[self.initial]
    }

    pub fn count(&self, state: StateId) -> u128 {
        self.counts[state]
    }

    /// Draws a word with probability exactly `1 / total()` by choosing each
    /// transition proportionally to the number of completions behind it.
    pub fn sample<R: Rng + ?Sized>(&self, dfa: &Dfa, rng: &mut R) -> Result<Word> {
        let total = self.total();
        if total == 0 {
            return Err(Error::EmptyLanguage);
        }
        let mut r = rng.gen_range(0..total);
        let mut state = self.initial;
        let mut word = Vec::new();
        loop {
            if dfa.is_final(state) {
                if r == 0 {
                    return Ok(word);
                }
                r -= 1;
            }
            let mut moved = false;
            for (sym, dst) in dfa.transitions_from(state) {
                let c = self.counts[dst];
                if r < c {
                    word.push(sym);
                    state = dst;
                    moved = true;
                    break;
                }
                r -= c;
            }
            debug_assert!(moved, "path counts inconsistent with automaton");
            if !moved {
                return Err(Error::EmptyLanguage);
            }
        }
    }
}
