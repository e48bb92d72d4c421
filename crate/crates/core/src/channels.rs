//! Channels: input-preserving transducers describing which corruptions of a
//! word are possible.
//!
//! The constructors here build the usual substitution, insertion/deletion,
//! bit-shift, segmented-deletion and overlap channels. [`Channel::from_name`]
//! resolves the registry names `sub:k`, `id:k`, `del1`, `ins1`, `bsid2`,
//! `segd:b` and `ov`.

use std::fmt;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::{Error, Result};
use crate::format::{parse_transducer, transducer_to_text};
use crate::transducer::{compose, Transducer};

/// Word length up to which input preservation is checked on construction.
pub const PRESERVATION_CHECK_LEN: usize = 6;

/// An error specification: a standard-form, input-preserving transducer with
/// a display name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Channel {
    name: String,
    params: Vec<(String, usize)>,
    transducer: Transducer,
}

impl Channel {
    /// Wraps a transducer, converting it to standard form and checking input
    /// preservation on all words up to [`PRESERVATION_CHECK_LEN`].
    pub fn new(name: impl Into<String>, transducer: Transducer) -> Result<Self> {
        let channel = Self::unchecked(name, transducer);
        if let Some(x) = channel.preservation_counterexample(PRESERVATION_CHECK_LEN)? {
            return Err(Error::InvalidParameter(format!(
                "{} is not input-preserving: {} is not in its own image",
                channel.name,
                channel.alphabet().format_word(&x)
            )));
        }
        Ok(channel)
    }

    fn unchecked(name: impl Into<String>, transducer: Transducer) -> Self {
        Self {
            name: name.into(),
            params: Vec::new(),
            transducer: transducer.standard_form(),
        }
    }

    fn with_param(mut self, key: &str, value: usize) -> Self {
        self.params.push((key.to_string(), value));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[(String, usize)] {
        &self.params
    }

    pub fn transducer(&self) -> &Transducer {
        &self.transducer
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.transducer.alphabet()
    }

    pub fn preservation_counterexample(&self, max_len: usize) -> Result<Option<Word>> {
        self.transducer.input_preservation_counterexample(max_len)
    }

    /// The inverse channel `σ⁻¹`.
    pub fn inverse(&self) -> Channel {
        Self::unchecked(format!("inv({})", self.name), self.transducer.inverse())
    }

    /// `σ₁ ∨ σ₂`. A code is detecting for the union iff it is detecting for both.
    pub fn union(&self, other: &Channel) -> Result<Channel> {
        Ok(Self::unchecked(
            format!("{}|{}", self.name, other.name),
            self.transducer.union(&other.transducer)?,
        ))
    }

    /// `σ ∨ σ⁻¹`, the channel whose image of a code is the set of words that
    /// cannot be added to it.
    pub fn symmetric(&self) -> Channel {
        let t = self
            .transducer
            .union(&self.transducer.inverse())
            .expect("same alphabet");
        Self::unchecked(format!("sym({})", self.name), t)
    }

    /// `σ⁻¹ ∘ σ`. A code is σ-correcting iff it is detecting for this channel.
    pub fn correction_channel(&self) -> Result<Channel> {
        let t = compose(&self.transducer.inverse(), &self.transducer)?;
        Ok(Self::unchecked(format!("inv({0})∘{0}", self.name), t))
    }

    /// Resolves a registry name over the given alphabet.
    pub fn from_name(name: &str, alphabet: &Alphabet) -> Result<Channel> {
        let (base, arg) = match name.split_once(':') {
            Some((b, a)) => {
                let n = a.parse::<usize>().map_err(|_| {
                    Error::InvalidParameter(format!("bad channel parameter in {name:?}"))
                })?;
                (b, Some(n))
            }
            None => (name, None),
        };
        let unknown = || Error::InvalidParameter(format!("unknown channel {name:?}"));
        match (base, arg) {
            ("sub", Some(k)) => Ok(make_sub(k, alphabet)),
            ("id", Some(k)) => Ok(make_id(k, alphabet)),
            ("segd", Some(b)) => make_segd(b, alphabet),
            ("del1", None) => Ok(make_del1_insend(alphabet)),
            ("ins1", None) => Ok(make_ins1_delend(alphabet)),
            ("bsid2", None) => make_bsid(alphabet),
            ("ov", None) => Ok(make_overlap(alphabet)),
            _ => Err(unknown()),
        }
    }

    /// Registry names with a one-line description.
    pub fn registry() -> &'static [(&'static str, &'static str)] {
        &[
            ("sub:k", "up to k substitutions"),
            ("id:k", "up to k insertions or deletions"),
            ("del1", "one deletion followed by one insertion at the end"),
            (
                "ins1",
                "one insertion followed by one deletion at the end (inverse of del1)",
            ),
            (
                "bsid2",
                "up to 2 deletions, insertions or adjacent bit swaps (binary)",
            ),
            ("segd:b", "at most one deletion in each length-b segment"),
            ("ov", "delete a prefix, then append any suffix"),
        ]
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn symbols(alphabet: &Alphabet) -> Vec<Symbol> {
    alphabet.symbols().collect()
}

fn identity_loops(t: &mut Transducer, state: usize, syms: &[Symbol]) {
    for &a in syms {
        t.add_step(state, Some(a), Some(a), state);
    }
}

/// `sub_k`: a chain `t₀ … t_k` (all final, `t₀` initial) with identity loops
/// and one substitution `a/b`, `a ≠ b`, per step along the chain.
pub fn make_sub(k: usize, alphabet: &Alphabet) -> Channel {
    let syms = symbols(alphabet);
    let mut t = Transducer::new(alphabet.clone());
    for _ in 0..=k {
        t.add_state(true);
    }
    t.add_initial(0);
    for s in 0..=k {
        identity_loops(&mut t, s, &syms);
        if s < k {
            for &a in &syms {
                for &b in &syms {
                    if a != b {
                        t.add_step(s, Some(a), Some(b), s + 1);
                    }
                }
            }
        }
    }
    Channel::unchecked(format!("sub:{k}"), t).with_param("k", k)
}

/// `id_k`: like `sub_k`, but each step is a deletion `a/ε` or insertion `ε/a`.
pub fn make_id(k: usize, alphabet: &Alphabet) -> Channel {
    let syms = symbols(alphabet);
    let mut t = Transducer::new(alphabet.clone());
    for _ in 0..=k {
        t.add_state(true);
    }
    t.add_initial(0);
    for s in 0..=k {
        identity_loops(&mut t, s, &syms);
        if s < k {
            for &a in &syms {
                t.add_step(s, Some(a), None, s + 1);
                t.add_step(s, None, Some(a), s + 1);
            }
        }
    }
    Channel::unchecked(format!("id:{k}"), t).with_param("k", k)
}

/// `del1`: either no error, or exactly one deletion followed by one symbol
/// inserted at the end. States `s = 0`, `r = 1`, `t = 2`; `s` and `t` final.
pub fn make_del1_insend(alphabet: &Alphabet) -> Channel {
    let syms = symbols(alphabet);
    let mut t = Transducer::new(alphabet.clone());
    let s = t.add_state(true);
    let r = t.add_state(false);
    let end = t.add_state(true);
    t.add_initial(s);
    identity_loops(&mut t, s, &syms);
    for &a in &syms {
        t.add_step(s, Some(a), None, r);
    }
    identity_loops(&mut t, r, &syms);
    for &a in &syms {
        t.add_step(r, None, Some(a), end);
    }
    Channel::unchecked("del1", t)
}

/// `ins1`, the inverse of `del1`: one insertion and then one deletion at the end.
pub fn make_ins1_delend(alphabet: &Alphabet) -> Channel {
    let del1 = make_del1_insend(alphabet);
    Channel::unchecked("ins1", del1.transducer.inverse())
}

/// `bsid2` over a two-symbol alphabet: up to two errors, each a deletion, an
/// insertion, or a shift turning `10` into `01` or `01` into `10`.
///
/// States in order: `0, 0a, 0b, 1, 1a, 1b, 2`; `0`, `1`, `2` are final and
/// `0` is initial. Each level `0 → 1 → 2` spends one error.
pub fn make_bsid(alphabet: &Alphabet) -> Result<Channel> {
    if alphabet.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "bsid2 needs a binary alphabet, got {alphabet}"
        )));
    }
    let syms = symbols(alphabet);
    let (zero, one) = (syms[0], syms[1]);
    let mut t = Transducer::new(alphabet.clone());
    let l0 = t.add_state(true);
    let l0a = t.add_state(false);
    let l0b = t.add_state(false);
    let l1 = t.add_state(true);
    let l1a = t.add_state(false);
    let l1b = t.add_state(false);
    let l2 = t.add_state(true);
    t.add_initial(l0);
    for (from, a_mid, b_mid, to) in [(l0, l0a, l0b, l1), (l1, l1a, l1b, l2)] {
        identity_loops(&mut t, from, &syms);
        for &a in &syms {
            t.add_step(from, None, Some(a), to);
            t.add_step(from, Some(a), None, to);
        }
        // 01 -> 10
        t.add_step(from, Some(zero), Some(one), a_mid);
        t.add_step(a_mid, Some(one), Some(zero), to);
        // 10 -> 01
        t.add_step(from, Some(one), Some(zero), b_mid);
        t.add_step(b_mid, Some(zero), Some(one), to);
    }
    identity_loops(&mut t, l2, &syms);
    Ok(Channel::unchecked("bsid2", t).with_param("k", 2))
}

/// `segd_b`: the input is read in segments of `b` symbols, each suffering at
/// most one deletion. Only words whose length is a positive multiple of `b`
/// are in the domain, since final states sit at segment boundaries.
///
/// States: `s₀` (initial), `s₁ … s_{b-1}` (no deletion yet in the segment),
/// `t₁ … t_{b-1}` (one deletion), and the final boundary states `f₀`, `f₁`,
/// which start the next segment like `s₀` does.
pub fn make_segd(b: usize, alphabet: &Alphabet) -> Result<Channel> {
    if b < 2 {
        return Err(Error::InvalidParameter(format!(
            "segd segment length must be at least 2, got {b}"
        )));
    }
    let syms = symbols(alphabet);
    let mut t = Transducer::new(alphabet.clone());
    let s0 = t.add_state(false);
    let s: Vec<usize> = (1..b).map(|_| t.add_state(false)).collect();
    let tt: Vec<usize> = (1..b).map(|_| t.add_state(false)).collect();
    let f0 = t.add_state(true);
    let f1 = t.add_state(true);
    t.add_initial(s0);
    // s[i] / tt[i] have read i + 1 symbols of the current segment
    for start in [s0, f0, f1] {
        for &a in &syms {
            t.add_step(start, Some(a), Some(a), s[0]);
            t.add_step(start, Some(a), None, tt[0]);
        }
    }
    for i in 0..b - 2 {
        for &a in &syms {
            t.add_step(s[i], Some(a), Some(a), s[i + 1]);
            t.add_step(s[i], Some(a), None, tt[i + 1]);
            t.add_step(tt[i], Some(a), Some(a), tt[i + 1]);
        }
    }
    for &a in &syms {
        t.add_step(s[b - 2], Some(a), Some(a), f0);
        t.add_step(s[b - 2], Some(a), None, f0);
        t.add_step(tt[b - 2], Some(a), Some(a), f1);
    }
    Ok(Channel::unchecked(format!("segd:{b}"), t).with_param("b", b))
}

/// `ov`: delete a possibly empty prefix, keep a nonempty remainder, then
/// append a possibly empty suffix. A block code of overlap-free words is
/// detecting for this channel exactly when it is a solid code.
pub fn make_overlap(alphabet: &Alphabet) -> Channel {
    let syms = symbols(alphabet);
    let mut t = Transducer::new(alphabet.clone());
    let drop = t.add_state(false);
    let keep = t.add_state(true);
    let tail = t.add_state(true);
    t.add_initial(drop);
    for &a in &syms {
        t.add_step(drop, Some(a), None, drop);
        t.add_step(drop, Some(a), Some(a), keep);
        t.add_step(keep, Some(a), Some(a), keep);
        t.add_step(keep, None, Some(a), tail);
        t.add_step(tail, None, Some(a), tail);
    }
    Channel::unchecked("ov", t)
}

/// Parses a channel from the transducer text format. A failed bounded
/// input-preservation check is logged as a warning, not an error.
pub fn parse_channel(name: &str, text: &str, alphabet: &Alphabet) -> Result<Channel> {
    let channel = Channel::unchecked(name, parse_transducer(text, alphabet)?);
    if let Some(x) = channel.preservation_counterexample(PRESERVATION_CHECK_LEN)? {
        log::warn!(
            "channel {name} is not input-preserving: {} is not in its own image",
            alphabet.format_word(&x)
        );
    }
    Ok(channel)
}

pub fn serialize_channel(channel: &Channel) -> String {
    transducer_to_text(&channel.transducer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn bin() -> Alphabet {
        Alphabet::binary()
    }

    fn image(c: &Channel, x: &str, max: usize) -> BTreeSet<String> {
        let a = c.alphabet();
        c.transducer()
            .image_str(x)
            .unwrap()
            .words_up_to(max)
            .iter()
            .map(|w| a.format_word(w))
            .collect()
    }

    fn set(words: &[&str]) -> BTreeSet<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn del1_serializes_to_reference_text() {
        let text = "@Transducer 0 2 * 0\n0 0 0 0\n0 1 1 0\n0 0 @epsilon 1\n0 1 @epsilon 1\n1 0 0 1\n1 1 1 1\n1 @epsilon 0 2\n1 @epsilon 1 2\n";
        assert_eq!(serialize_channel(&make_del1_insend(&bin())), text);
        let parsed = parse_channel("d1", text, &bin()).unwrap();
        assert_eq!(parsed.transducer(), make_del1_insend(&bin()).transducer());
    }

    #[test]
    fn sub_examples() {
        let sub2 = make_sub(2, &bin());
        assert!(image(&sub2, "00000", 5).contains("00101"));
        assert_eq!(image(&make_sub(1, &bin()), "000", 3).len(), 4);
        assert_eq!(image(&make_sub(0, &bin()), "0110", 6), set(&["0110"]));
    }

    #[test]
    fn id_examples() {
        assert_eq!(image(&make_id(0, &bin()), "01", 4), set(&["01"]));
        let all_short: BTreeSet<String> = bin()
            .words_up_to(2)
            .map(|w| bin().format_word(&w))
            .collect();
        assert_eq!(image(&make_id(2, &bin()), "", 5), all_short);
    }

    #[test]
    fn del1_preserves_length() {
        let del1 = make_del1_insend(&bin());
        assert_eq!(image(&del1, "01", 4), set(&["00", "01", "10", "11"]));
        for x in bin().words_of_length(4) {
            let img = del1.transducer().image(&x).unwrap();
            assert!(img.words_up_to(6).iter().all(|y| y.len() == 4));
        }
    }

    #[test]
    fn bsid_examples() {
        let c = make_bsid(&bin()).unwrap();
        let img = image(&c, "10", 4);
        for y in ["10", "01", "0", "1", "010", "100", "101", "110", ""] {
            assert!(img.contains(y), "{y}");
        }
        assert!(make_bsid(&Alphabet::from_chars("abc").unwrap()).is_err());
    }

    #[test]
    fn segd_examples() {
        let c = make_segd(2, &bin()).unwrap();
        let img = image(&c, "0101", 4);
        for y in ["101", "010", "11", "0101"] {
            assert!(img.contains(y), "{y}");
        }
        let c4 = make_segd(4, &bin()).unwrap();
        assert_eq!(c4.transducer().num_states(), 9);
        assert!(image(&c4, "0110", 4).contains("0110"));
        assert!(image(&c4, "01101", 8).is_empty());
        assert!(make_segd(1, &bin()).is_err());
    }

    #[test]
    fn overlap_examples() {
        let ov = make_overlap(&bin());
        assert!(image(&ov, "1001", 4).contains("0100"));
        assert_eq!(image(&ov, "0", 2), set(&["0", "00", "01"]));
    }

    #[test]
    fn registry_resolves_all_names() {
        for name in ["sub:2", "id:1", "del1", "ins1", "bsid2", "segd:4", "ov"] {
            let c = Channel::from_name(name, &bin()).unwrap();
            assert_eq!(c.name(), name);
        }
        assert!(Channel::from_name("sub", &bin()).is_err());
        assert!(Channel::from_name("sub:x", &bin()).is_err());
        assert!(Channel::from_name("foo", &bin()).is_err());
    }

    #[test]
    fn constructed_channels_preserve_input() {
        for name in [
            "sub:2", "id:2", "del1", "ins1", "bsid2", "segd:2", "segd:4", "ov",
        ] {
            let c = Channel::from_name(name, &bin()).unwrap();
            let checked = Channel::new(c.name(), c.transducer().clone());
            assert!(checked.is_ok(), "{name}");
        }
    }

    #[test]
    fn non_preserving_transducer_is_rejected_but_parses() {
        let text = "@Transducer 0 * 0\n0 0 1 0\n";
        let t = parse_transducer(text, &bin()).unwrap();
        assert!(Channel::new("flip", t).is_err());
        assert!(parse_channel("flip", text, &bin()).is_ok());
    }
}
