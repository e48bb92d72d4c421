//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use chancode::transducer::Transducer;
use chancode::{Alphabet, Channel, Symbol, Trellis, Word};

pub fn bin() -> Alphabet {
    Alphabet::binary()
}

pub fn w(s: &str) -> Word {
    bin().parse_word(s).unwrap()
}

pub fn ws(words: &[&str]) -> BTreeSet<Word> {
    words.iter().map(|s| w(s)).collect()
}

/// Every registry channel over the binary alphabet.
pub fn zoo() -> Vec<Channel> {
    [
        "sub:1", "sub:2", "id:1", "id:2", "del1", "ins1", "bsid2", "segd:2", "segd:4", "ov",
    ]
    .iter()
    .map(|n| Channel::from_name(n, &bin()).unwrap())
    .collect()
}

pub fn channel(name: &str) -> Channel {
    Channel::from_name(name, &bin()).unwrap()
}

/// Outputs of `t` on `x` of length at most `max_out`, by walking every path
/// over the raw edge list.
pub fn brute_image(t: &Transducer, x: &[Symbol], max_out: usize) -> BTreeSet<Word> {
    let mut seen = HashSet::new();
    let mut out = BTreeSet::new();
    let mut stack: Vec<(usize, usize, Word)> =
        t.initial().iter().map(|&s| (0, s, Vec::new())).collect();
    while let Some((i, s, y)) = stack.pop() {
        if !seen.insert((i, s, y.clone())) {
            continue;
        }
        if i == x.len() && t.is_final(s) {
            out.insert(y.clone());
        }
        for e in t.edges().iter().filter(|e| e.src == s) {
            if !x[i..].starts_with(&e.input) || y.len() + e.output.len() > max_out {
                continue;
            }
            let mut y2 = y.clone();
            y2.extend_from_slice(&e.output);
            stack.push((i + e.input.len(), e.dst, y2));
        }
    }
    out
}

/// Output bound large enough for every comparison made on block codes of
/// length `len` with the zoo channels.
pub fn out_bound(len: usize) -> usize {
    len + 2
}

/// Definition check: no codeword maps to a different codeword.
pub fn brute_detecting(code: &BTreeSet<Word>, ch: &Channel) -> bool {
    code.iter().all(|u| {
        let len = u.len();
        brute_image(ch.transducer(), u, len)
            .iter()
            .all(|v| v == u || !code.contains(v))
    })
}

/// Definition check: no two codewords share an output.
pub fn brute_correcting(code: &BTreeSet<Word>, ch: &Channel) -> bool {
    let images: Vec<BTreeSet<Word>> = code
        .iter()
        .map(|u| brute_image(ch.transducer(), u, out_bound(u.len())))
        .collect();
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if !images[i].is_disjoint(&images[j]) {
                return false;
            }
        }
    }
    true
}

pub fn hamming(u: &[Symbol], v: &[Symbol]) -> usize {
    u.iter().zip(v).filter(|(a, b)| a != b).count()
}

pub fn levenshtein(u: &[Symbol], v: &[Symbol]) -> usize {
    let mut prev: Vec<usize> = (0..=v.len()).collect();
    for (i, a) in u.iter().enumerate() {
        let mut cur = vec![i + 1; v.len() + 1];
        for (j, b) in v.iter().enumerate() {
            cur[j + 1] = (prev[j] + usize::from(a != b))
                .min(prev[j + 1] + 1)
                .min(cur[j] + 1);
        }
        prev = cur;
    }
    prev[v.len()]
}

pub fn has_border(w: &[Symbol]) -> bool {
    (1..w.len()).any(|k| w[..k] == w[w.len() - k..])
}

/// No proper nonempty prefix of a codeword is a suffix of a codeword, and all
/// codewords are unbordered.
pub fn brute_solid(code: &BTreeSet<Word>) -> bool {
    if code.iter().any(|u| has_border(u)) {
        return false;
    }
    for u in code {
        for v in code {
            for k in 1..u.len() {
                if u[..k] == v[v.len() - k..] {
                    return false;
                }
            }
        }
    }
    true
}

/// The 16 codewords of the [7,4] Hamming code, from its generator matrix.
pub fn hamming_7_4() -> BTreeSet<Word> {
    let g: [[u8; 7]; 4] = [
        [1, 0, 0, 0, 1, 1, 0],
        [0, 1, 0, 0, 1, 0, 1],
        [0, 0, 1, 0, 0, 1, 1],
        [0, 0, 0, 1, 1, 1, 1],
    ];
    (0..16u8)
        .map(|m| {
            (0..7)
                .map(|j| (0..4).fold(0, |acc, i| acc ^ (((m >> i) & 1) * g[i][j])))
                .collect()
        })
        .collect()
}

/// `{u·01 : u ∈ {0,1}⁶}`.
pub fn suffix01_code() -> BTreeSet<Word> {
    bin()
        .words_of_length(6)
        .map(|mut u| {
            u.extend([0, 1]);
            u
        })
        .collect()
}

pub fn trellis(code: &BTreeSet<Word>, len: usize) -> Trellis {
    Trellis::from_words(&bin(), len, code.iter()).unwrap()
}

/// All subsets of `words` with at most `max` elements.
pub fn small_subsets(words: &[Word], max: usize) -> Vec<BTreeSet<Word>> {
    let mut out = vec![BTreeSet::new()];
    let mut frontier = vec![(BTreeSet::new(), 0usize)];
    for _ in 0..max {
        let mut next = Vec::new();
        for (set, start) in frontier {
            for (i, x) in words.iter().enumerate().skip(start) {
                let mut s: BTreeSet<Word> = set.clone();
                s.insert(x.clone());
                out.push(s.clone());
                next.push((s, i + 1));
            }
        }
        frontier = next;
    }
    out
}
