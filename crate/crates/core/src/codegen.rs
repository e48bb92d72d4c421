//! Randomized generation of error-detecting block codes.
//!
//! [`next_word`] samples up to `n = 1 + ⌊1/(4ε(1−f)²)⌋` words and returns the
//! first one that can be added to the code; if the code is not f-maximal it
//! fails with probability below ε. [`make_code`] repeats it until `N` words
//! are added or a call gives up.

use std::fmt::Write as _;
use std::time::Duration;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::automata::Trellis;
use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::properties::{detection_witness, exclusion_automaton};

/// Name of the generator behind [`rng_for`].
pub const RNG_NAME: &str = "ChaCha8";

/// Largest trial count accepted by [`trial_bound`].
pub const MAX_TRIALS: u64 = 1_000_000_000;

/// Deterministic generator for `(seed, stream)`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `1 + ⌊1/(4ε(1−f)²)⌋`, computed exactly.
pub fn trial_bound(f: Ratio<u64>, eps: Ratio<u64>) -> Result<u64> {
    if f >= Ratio::from_integer(1) {
        return Err(Error::InvalidParameter("f must be below 1".into()));
    }
    if eps == Ratio::from_integer(0) || eps > Ratio::from_integer(1) {
        return Err(Error::InvalidParameter("eps must lie in (0, 1]".into()));
    }
    let (a, b) = (u128::from(*f.numer()), u128::from(*f.denom()));
    let (c, d) = (u128::from(*eps.numer()), u128::from(*eps.denom()));
    // 1/(4·(c/d)·((b−a)/b)²) = d·b² / (4·c·(b−a)²)
    let gap = b - a;
    let num = b.checked_mul(b).and_then(|x| x.checked_mul(d));
    let den = gap
        .checked_mul(gap)
        .and_then(|x| x.checked_mul(c))
        .and_then(|x| x.checked_mul(4));
    let too_large = || Error::InvalidParameter(format!("trial bound exceeds {MAX_TRIALS}"));
    let (Some(num), Some(den)) = (num, den) else {
        return Err(too_large());
    };
    let n = 1 + num / den;
    if n > u128::from(MAX_TRIALS) {
        return Err(too_large());
    }
    Ok(n as u64)
}

/// Parses `0.95`, `19/20` or `1` into an exact rational.
pub fn parse_ratio(s: &str) -> Result<Ratio<u64>> {
    let bad = || Error::InvalidParameter(format!("not a non-negative number: {s:?}"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        let d: u64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if (int.is_empty() && frac.is_empty())
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
        || frac.len() > 18
    {
        return Err(bad());
    }
    let denom = 10u64.pow(frac.len() as u32);
    let int: u64 = if int.is_empty() {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let frac: u64 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    let numer = int
        .checked_mul(denom)
        .and_then(|x| x.checked_add(frac))
        .ok_or_else(bad)?;
    Ok(Ratio::new(numer, denom))
}

/// Decimal rendering when exact, `p/q` otherwise.
pub fn format_ratio<T>(r: &Ratio<T>) -> String
where
    T: Clone + num_integer::Integer + std::fmt::Display + From<u8>,
{
    let ten = T::from(10);
    let (mut d, mut twos, mut fives) = (r.denom().clone(), 0usize, 0usize);
    while d.is_multiple_of(&T::from(2)) {
        d = d / T::from(2);
        twos += 1;
    }
    while d.is_multiple_of(&T::from(5)) {
        d = d / T::from(5);
        fives += 1;
    }
    if d != T::from(1) {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let digits = twos.max(fives);
    let int = r.numer().clone() / r.denom().clone();
    if digits == 0 {
        return int.to_string();
    }
    let mut rem = r.numer().clone() % r.denom().clone();
    let mut out = format!("{int}.");
    for _ in 0..digits {
        rem = rem * ten.clone();
        out.push_str(&(rem.clone() / r.denom().clone()).to_string());
        rem = rem % r.denom().clone();
    }
    out
}

/// Inputs to [`make_code`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    /// Number of words to add.
    pub count: usize,
    pub f: Ratio<u64>,
    pub eps: Ratio<u64>,
    pub seed: u64,
    /// Stream of the generator; distinct streams give independent runs.
    pub stream: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            count: 100,
            f: Ratio::new(95, 100),
            eps: Ratio::new(5, 100),
            seed: 0,
            stream: 0,
        }
    }
}

impl GenParams {
    pub fn trial_bound(&self) -> Result<u64> {
        trial_bound(self.f, self.eps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NextWord {
    Found(Word),
    /// Every trial hit an excluded word.
    None,
    /// The sampling universe has no words.
    EmptyUniverse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NextWordOutcome {
    pub result: NextWord,
    /// Samples drawn, including the successful one.
    pub trials: u64,
}

/// Samples up to `bound` words from `universe` (all of `Σ^ℓ` if `None`) and
/// returns the first one outside `(σ ∨ σ⁻¹)(C)` and outside `C`.
///
/// `code` is assumed σ-detecting; this is not checked.
pub fn next_word<R: Rng + ?Sized>(
    channel: &Channel,
    code: &Trellis,
    universe: Option<&Trellis>,
    bound: u64,
    rng: &mut R,
) -> Result<NextWordOutcome> {
    let full;
    let universe = match universe {
        Some(u) => {
            check_universe(code, u)?;
            u
        }
        None => {
            full = Trellis::universe(code.alphabet(), code.len());
            &full
        }
    };
    if universe.is_empty() {
        return Ok(NextWordOutcome {
            result: NextWord::EmptyUniverse,
            trials: 0,
        });
    }
    let mut excluded = exclusion_automaton(code, channel)?.matcher();
    for trial in 1..=bound {
        let w = universe.sample_uniform(rng)?;
        if !excluded.accepts(&w) && !code.accepts(&w) {
            return Ok(NextWordOutcome {
                result: NextWord::Found(w),
                trials: trial,
            });
        }
    }
    Ok(NextWordOutcome {
        result: NextWord::None,
        trials: bound,
    })
}

fn check_universe(code: &Trellis, universe: &Trellis) -> Result<()> {
    code.alphabet().ensure_same(universe.alphabet())?;
    if universe.len() != code.len() {
        return Err(Error::WrongLength {
            expected: code.len(),
            found: universe.len(),
        });
    }
    Ok(())
}

/// Result of [`make_code`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenReport {
    pub channel: String,
    pub params: GenParams,
    /// Trials per NEXTWORD call.
    pub bound: u64,
    /// Final code: the seed code plus `words`.
    pub trellis: Trellis,
    /// Added words in order.
    pub words: Vec<Word>,
    /// Samples drawn for each added word.
    pub trials_per_word: Vec<u64>,
    /// Stopped before adding `count` words.
    pub exhausted: bool,
    /// Stopped because the universe is empty.
    pub empty_universe: bool,
    /// Sampling was restricted to a given universe.
    pub restricted: bool,
    pub rng: &'static str,
}

impl GenReport {
    pub fn size(&self) -> u128 {
        self.trellis.count_words()
    }

    /// Header, one added word per line, then a summary.
    pub fn to_text(&self, elapsed: Option<Duration>) -> String {
        let alphabet = self.trellis.alphabet();
        let p = &self.params;
        let mut out = String::new();
        let _ = writeln!(out, "# channel: {}", self.channel);
        let _ = writeln!(out, "# alphabet: {alphabet}");
        let _ = writeln!(out, "# length: {}", self.trellis.len());
        let _ = writeln!(out, "# N: {}", p.count);
        let _ = writeln!(out, "# f: {}", format_ratio(&p.f));
        let _ = writeln!(out, "# eps: {}", format_ratio(&p.eps));
        let _ = writeln!(out, "# seed: {}", p.seed);
        if p.stream != 0 {
            let _ = writeln!(out, "# stream: {}", p.stream);
        }
        let _ = writeln!(out, "# rng: {}", self.rng);
        let _ = writeln!(out, "# n: {}", self.bound);
        if self.restricted {
            let _ = writeln!(out, "# universe: restricted (maximality is relative to it)");
        }
        for w in &self.words {
            let _ = writeln!(out, "{}", alphabet.format_word(w));
        }
        let _ = writeln!(out, "# added: {}", self.words.len());
        let _ = writeln!(out, "# size: {}", self.size());
        let _ = writeln!(out, "# exhausted: {}", self.exhausted);
        if self.empty_universe {
            let _ = writeln!(out, "# empty universe");
        }
        if let Some(t) = elapsed {
            let _ = writeln!(out, "# time: {:.3}s", t.as_secs_f64());
        }
        out
    }
}

/// Grows a σ-detecting code by up to `params.count` words.
///
/// Starts from `seed_code` (empty if `None`), which must be σ-detecting.
/// Words are drawn from `universe` when given.
pub fn make_code(
    channel: &Channel,
    seed_code: Option<&Trellis>,
    alphabet: &Alphabet,
    len: usize,
    params: &GenParams,
    universe: Option<&Trellis>,
) -> Result<GenReport> {
    let mut rng = rng_for(params.seed, params.stream);
    make_code_with(
        channel, seed_code, alphabet, len, params, universe, &mut rng,
    )
}

/// [`make_code`] with a caller-supplied generator.
pub fn make_code_with<R: Rng + ?Sized>(
    channel: &Channel,
    seed_code: Option<&Trellis>,
    alphabet: &Alphabet,
    len: usize,
    params: &GenParams,
    universe: Option<&Trellis>,
    rng: &mut R,
) -> Result<GenReport> {
    alphabet.ensure_same(channel.alphabet())?;
    let bound = params.trial_bound()?;
    let mut trellis = match seed_code {
        Some(t) => {
            alphabet.ensure_same(t.alphabet())?;
            if t.len() != len {
                return Err(Error::WrongLength {
                    expected: len,
                    found: t.len(),
                });
            }
            let witness = detection_witness(t, channel)?;
            if !witness.is_none() {
                return Err(Error::NotDetecting {
                    channel: channel.name().to_string(),
                    witness: witness.render(alphabet),
                });
            }
            t.clone()
        }
        None => Trellis::empty(alphabet, len),
    };
    let mut report = GenReport {
        channel: channel.name().to_string(),
        params: params.clone(),
        bound,
        trellis: Trellis::empty(alphabet, len),
        words: Vec::new(),
        trials_per_word: Vec::new(),
        exhausted: false,
        empty_universe: false,
        restricted: universe.is_some(),
        rng: RNG_NAME,
    };
    while report.words.len() < params.count {
        let outcome = next_word(channel, &trellis, universe, bound, rng)?;
        match outcome.result {
            NextWord::Found(w) => {
                trellis.add_word(&w)?;
                log::debug!(
                    "added word {} after {} trials",
                    report.words.len() + 1,
                    outcome.trials
                );
                report.words.push(w);
                report.trials_per_word.push(outcome.trials);
            }
            NextWord::None => {
                report.exhausted = true;
                break;
            }
            NextWord::EmptyUniverse => {
                report.exhausted = true;
                report.empty_universe = true;
                break;
            }
        }
    }
    report.trellis = trellis;
    Ok(report)
}

/// True if no proper nonempty prefix of `w` is also a suffix.
pub fn is_overlap_free(w: &[Symbol]) -> bool {
    (1..w.len()).all(|k| w[..k] != w[w.len() - k..])
}

/// Largest block enumerated by [`overlap_free_trellis`].
const MAX_ENUMERATION: u128 = 1 << 24;

/// Trellis of all overlap-free words of length `len`.
pub fn overlap_free_trellis(alphabet: &Alphabet, len: usize) -> Result<Trellis> {
    if alphabet.block_size(len)? > MAX_ENUMERATION {
        return Err(Error::InvalidParameter(format!(
            "too many words of length {len} to enumerate"
        )));
    }
    let words = alphabet.words_of_length(len).filter(|w| is_overlap_free(w));
    Trellis::from_words(alphabet, len, words)
}

/// Trellis of the words of length `len` ending in `suffix`.
pub fn end_pattern_trellis(alphabet: &Alphabet, len: usize, suffix: &[Symbol]) -> Result<Trellis> {
    if suffix.len() > len {
        return Err(Error::InvalidParameter(format!(
            "suffix of length {} is longer than the words",
            suffix.len()
        )));
    }
    let mut dfa = Trellis::universe(alphabet, len - suffix.len())
        .as_dfa()
        .clone();
    let mut state = len - suffix.len();
    dfa.set_final(state, false);
    for &sym in suffix {
        let next = dfa.add_state(false);
        dfa.set_transition(state, sym, next);
        state = next;
    }
    dfa.set_final(state, true);
    Trellis::from_dfa(&dfa, Some(len))
}

/// Words accepted by both trellises.
pub fn intersect_universes(a: &Trellis, b: &Trellis) -> Result<Trellis> {
    check_universe(a, b)?;
    Trellis::from_dfa(&a.as_dfa().intersect(b.as_dfa())?, Some(a.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{make_del1_insend, make_sub};
    use crate::properties::is_detecting;

    fn r(s: &str) -> Ratio<u64> {
        parse_ratio(s).unwrap()
    }

    #[test]
    fn bounds() {
        assert_eq!(trial_bound(r("0.95"), r("0.05")).unwrap(), 2001);
        assert_eq!(trial_bound(r("0"), r("1")).unwrap(), 1);
        assert_eq!(trial_bound(r("0.5"), r("0.25")).unwrap(), 5);
        assert!(trial_bound(r("1"), r("0.05")).is_err());
        assert!(trial_bound(r("0.5"), r("0")).is_err());
        assert!(trial_bound(r("0.99999"), r("0.00001")).is_err());
    }

    #[test]
    fn ratios() {
        assert_eq!(r("0.95"), Ratio::new(19, 20));
        assert_eq!(r(".5"), Ratio::new(1, 2));
        assert_eq!(r("3/4"), Ratio::new(3, 4));
        assert!(parse_ratio("-1").is_err());
        assert!(parse_ratio("abc").is_err());
        assert_eq!(format_ratio(&Ratio::new(19u64, 20)), "0.95");
        assert_eq!(format_ratio(&Ratio::new(5u128, 16)), "0.3125");
        assert_eq!(format_ratio(&Ratio::new(1u64, 3)), "1/3");
        assert_eq!(format_ratio(&Ratio::from_integer(1u64)), "1");
    }

    #[test]
    fn empty_code_accepts_first_sample() {
        let a = Alphabet::binary();
        let code = Trellis::empty(&a, 4);
        let mut rng = rng_for(1, 0);
        let out = next_word(&make_sub(2, &a), &code, None, 2001, &mut rng).unwrap();
        assert_eq!(out.trials, 1);
        assert!(matches!(out.result, NextWord::Found(_)));
    }

    #[test]
    fn sub2_addable_words_are_far() {
        let a = Alphabet::binary();
        let code = Trellis::from_strs(&a, &["0000"]).unwrap();
        for seed in 0..20 {
            let mut rng = rng_for(seed, 0);
            let out = next_word(&make_sub(2, &a), &code, None, 2001, &mut rng).unwrap();
            let NextWord::Found(w) = out.result else {
                panic!("expected a word");
            };
            assert!(w.iter().filter(|&&s| s == 1).count() >= 3);
        }
    }

    #[test]
    fn generated_codes_detect() {
        let a = Alphabet::binary();
        let ch = make_del1_insend(&a);
        let params = GenParams {
            count: 30,
            seed: 3,
            ..GenParams::default()
        };
        let rep = make_code(&ch, None, &a, 6, &params, None).unwrap();
        assert!(is_detecting(&rep.trellis, &ch).unwrap());
        assert_eq!(rep.size() as usize, rep.words.len());
        let again = make_code(&ch, None, &a, 6, &params, None).unwrap();
        assert_eq!(rep, again);
    }

    #[test]
    fn zero_count_is_identity() {
        let a = Alphabet::binary();
        let seed = Trellis::from_strs(&a, &["0000", "1111"]).unwrap();
        let params = GenParams {
            count: 0,
            ..GenParams::default()
        };
        let rep = make_code(&make_sub(1, &a), Some(&seed), &a, 4, &params, None).unwrap();
        assert_eq!(rep.trellis, seed);
        assert!(rep.words.is_empty());
        assert!(!rep.exhausted);
    }

    #[test]
    fn non_detecting_seed_is_rejected() {
        let a = Alphabet::binary();
        let seed = Trellis::from_strs(&a, &["0000", "0001"]).unwrap();
        let err = make_code(
            &make_sub(1, &a),
            Some(&seed),
            &a,
            4,
            &GenParams::default(),
            None,
        );
        assert!(matches!(err, Err(Error::NotDetecting { .. })));
    }

    #[test]
    fn overlap_free_counts() {
        let a = Alphabet::binary();
        let counts: Vec<u128> = (1..=8)
            .map(|l| overlap_free_trellis(&a, l).unwrap().count_words())
            .collect();
        assert_eq!(counts, vec![2, 2, 4, 6, 12, 20, 40, 74]);
    }

    #[test]
    fn end_pattern_counts() {
        let a = Alphabet::binary();
        let t = end_pattern_trellis(&a, 8, &[0, 1]).unwrap();
        assert_eq!(t.count_words(), 64);
        assert!(t.accepts_str("11111101").unwrap());
        assert!(!t.accepts_str("11111110").unwrap());
        let both = intersect_universes(&t, &overlap_free_trellis(&a, 8).unwrap()).unwrap();
        assert!(both
            .words()
            .iter()
            .all(|w| is_overlap_free(w) && w.ends_with(&[0, 1])));
    }
}
