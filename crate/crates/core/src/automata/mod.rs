//! Finite automata over a fixed alphabet: NFAs with ε-transitions, partial
//! DFAs, and trellises for block codes.

mod count;
mod dfa;
mod nfa;
mod trellis;

pub use count::PathCounts;
pub use dfa::Dfa;
pub use nfa::{Matcher, Nfa};
pub use trellis::Trellis;

use crate::alphabet::{Alphabet, Symbol};

pub type StateId = usize;

/// A transition label; `None` is ε.
pub type Label = Option<Symbol>;

/// DFA accepting exactly `Σ^len`.
pub fn universe_dfa(alphabet: &Alphabet, len: usize) -> Dfa {
    Trellis::universe(alphabet, len).as_dfa().clone()
}
