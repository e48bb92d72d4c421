//! Alphabets and words.
//!
//! Symbols are single characters. Internally a word is a sequence of
//! [`Symbol`] indices into the alphabet, so every automaton built over the
//! same alphabet agrees on symbol order.

use std::fmt;

use crate::error::{Error, Result};

/// Index of a symbol within its [`Alphabet`].
pub type Symbol = u8;

/// A word as a sequence of symbol indices.
pub type Word = Vec<Symbol>;

/// An ordered, duplicate-free, non-empty set of single-character symbols.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    /// Builds an alphabet from the given symbols. The order is kept as given.
    pub fn new<I: IntoIterator<Item = char>>(symbols: I) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must not be empty".into()));
        }
        if symbols.len() > usize::from(Symbol::MAX) + 1 {
            return Err(Error::InvalidAlphabet(format!(
                "at most {} symbols are supported",
                usize::from(Symbol::MAX) + 1
            )));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol {c:?}")));
            }
            if c.is_whitespace() || *c == '@' || *c == '*' {
                return Err(Error::InvalidAlphabet(format!("reserved symbol {c:?}")));
            }
        }
        Ok(Self { symbols })
    }

    /// The binary alphabet `{0, 1}`.
    pub fn binary() -> Self {
        Self {
            symbols: vec!['0', '1'],
        }
    }

    /// Builds an alphabet from the characters of `s`, e.g. `"01"` or `"abc"`.
    pub fn from_chars(s: &str) -> Result<Self> {
        Self::new(s.chars())
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.symbols.len()).map(|i| i as Symbol)
    }

    pub fn chars(&self) -> &[char] {
        &self.symbols
    }

    pub fn char_of(&self, sym: Symbol) -> char {
        self.symbols[usize::from(sym)]
    }

    pub fn symbol_of(&self, c: char) -> Result<Symbol> {
        self.symbols
            .iter()
            .position(|&s| s == c)
            .map(|i| i as Symbol)
            .ok_or(Error::UnknownSymbol(c))
    }

    /// Parses a word written as a plain character string.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        s.chars().map(|c| self.symbol_of(c)).collect()
    }

    pub fn format_word(&self, w: &[Symbol]) -> String {
        w.iter().map(|&s| self.char_of(s)).collect()
    }

    /// All words of length exactly `len`, in lexicographic order.
    pub fn words_of_length(&self, len: usize) -> impl Iterator<Item = Word> + '_ {
        let k = self.len();
        let total = k.checked_pow(len as u32).unwrap_or(usize::MAX);
        (0..total).map(move |mut idx| {
            let mut w = vec![0; len];
            for slot in w.iter_mut().rev() {
                *slot = (idx % k) as Symbol;
                idx /= k;
            }
            w
        })
    }

    /// All words of length at most `max_len`, shortest first.
    pub fn words_up_to(&self, max_len: usize) -> impl Iterator<Item = Word> + '_ {
        (0..=max_len).flat_map(move |n| self.words_of_length(n))
    }

    /// `|Σ|^len`, if it fits.
    pub fn block_size(&self, len: usize) -> Result<u128> {
        (self.len() as u128)
            .checked_pow(len as u32)
            .ok_or(Error::Overflow)
    }

    pub(crate) fn ensure_same(&self, other: &Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Self::binary()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(Alphabet::from_chars("").is_err());
        assert!(Alphabet::from_chars("aba").is_err());
        assert!(Alphabet::from_chars("a b").is_err());
    }

    #[test]
    fn word_round_trip() {
        let a = Alphabet::from_chars("abc").unwrap();
        let w = a.parse_word("cab").unwrap();
        assert_eq!(w, vec![2, 0, 1]);
        assert_eq!(a.format_word(&w), "cab");
        assert!(matches!(
            a.parse_word("abd"),
            Err(Error::UnknownSymbol('d'))
        ));
    }

    #[test]
    fn enumerates_in_lex_order() {
        let a = Alphabet::binary();
        let words: Vec<String> = a.words_of_length(2).map(|w| a.format_word(&w)).collect();
        assert_eq!(words, ["00", "01", "10", "11"]);
        assert_eq!(a.words_up_to(3).count(), 1 + 2 + 4 + 8);
        assert_eq!(a.words_of_length(0).count(), 1);
    }
}
