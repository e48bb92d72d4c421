//! Loading channels, codes and sampling universes from the command line.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use chancode::channels::parse_channel;
use chancode::codegen::{end_pattern_trellis, intersect_universes, overlap_free_trellis};
use chancode::format::parse_nfa;
use chancode::{Alphabet, Channel, Trellis};

/// Resolves one `--channel` value: a registry name, else a transducer file.
pub fn load_channel(spec: &str, alphabet: &Alphabet) -> Result<Channel> {
    if let Ok(ch) = Channel::from_name(spec, alphabet) {
        return Ok(ch);
    }
    let path = Path::new(spec);
    if !path.exists() {
        bail!("unknown channel {spec:?} (not a registry name or an existing file)");
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| spec.to_string());
    parse_channel(&name, &text, alphabet).with_context(|| format!("parsing channel file {spec}"))
}

/// Combines all `--channel` values with `∨`.
pub fn load_channels(specs: &[String], alphabet: &Alphabet) -> Result<Channel> {
    let mut iter = specs.iter();
    let Some(first) = iter.next() else {
        bail!("at least one --channel is required");
    };
    let mut ch = load_channel(first, alphabet)?;
    for spec in iter {
        ch = ch.union(&load_channel(spec, alphabet)?)?;
    }
    Ok(ch)
}

/// Reads a code file: one codeword per line (`#` starts a comment), or an
/// automaton in the text format if the first entry starts with `@`.
/// `len` is used for an empty code and checked otherwise.
pub fn load_code(path: &Path, alphabet: &Alphabet, len: Option<usize>) -> Result<Trellis> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_code(&text, alphabet, len).with_context(|| format!("in code file {}", path.display()))
}

pub fn parse_code(text: &str, alphabet: &Alphabet, len: Option<usize>) -> Result<Trellis> {
    let entries: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    if entries.first().is_some_and(|l| l.starts_with('@')) {
        let dfa = parse_nfa(text, alphabet)?.determinize();
        return Ok(Trellis::from_dfa(&dfa, len)?);
    }
    let mut words = Vec::with_capacity(entries.len());
    for (i, e) in entries.iter().enumerate() {
        let w = alphabet
            .parse_word(e)
            .with_context(|| format!("codeword {} ({e:?})", i + 1))?;
        words.push(w);
    }
    let word_len = match (words.first(), len) {
        (Some(w), Some(l)) if w.len() != l => {
            bail!("codewords have length {}, expected {l}", w.len())
        }
        (Some(w), _) => w.len(),
        (None, Some(l)) => l,
        (None, None) => 0,
    };
    if let Some(w) = words.iter().find(|w| w.len() != word_len) {
        bail!(
            "codeword {} has length {}, expected {word_len}",
            alphabet.format_word(w),
            w.len()
        );
    }
    Ok(Trellis::from_words(alphabet, word_len, &words)?)
}

/// Builds the sampling universe from `--universe` and `--end`. `None` means
/// all of `Σ^len`.
pub fn load_universe(
    spec: Option<&str>,
    end: Option<&str>,
    alphabet: &Alphabet,
    len: usize,
) -> Result<Option<Trellis>> {
    let base = match spec {
        None | Some("none") => None,
        Some("of") => Some(overlap_free_trellis(alphabet, len)?),
        Some(path) => Some(load_code(Path::new(path), alphabet, Some(len))?),
    };
    let end = match end {
        None => None,
        Some(p) => Some(end_pattern_trellis(
            alphabet,
            len,
            &alphabet.parse_word(p)?,
        )?),
    };
    Ok(match (base, end) {
        (Some(a), Some(b)) => Some(intersect_universes(&a, &b)?),
        (a, b) => a.or(b),
    })
}
