mod common;

use std::collections::BTreeSet;

use chancode::channels::{make_segd, parse_channel, serialize_channel};
use chancode::transducer::compose;
use chancode::Word;
use common::*;
use proptest::prelude::*;

fn image(ch: &chancode::Channel, x: &[u8], max: usize) -> BTreeSet<Word> {
    ch.transducer().image(x).unwrap().words_up_to(max)
}

/// One error: delete a symbol, insert a symbol, or swap an adjacent `01`/`10`.
fn one_error(x: &[u8]) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for i in 0..x.len() {
        let mut y = x.to_vec();
        y.remove(i);
        out.insert(y);
    }
    for i in 0..=x.len() {
        for a in 0..2u8 {
            let mut y = x.to_vec();
            y.insert(i, a);
            out.insert(y);
        }
    }
    for i in 0..x.len().saturating_sub(1) {
        if x[i] != x[i + 1] {
            let mut y = x.to_vec();
            y.swap(i, i + 1);
            out.insert(y);
        }
    }
    out
}

#[test]
fn bsid2_matches_error_model() {
    let bsid = channel("bsid2");
    for x in bin().words_up_to(5) {
        let mut model: BTreeSet<Word> = BTreeSet::from([x.clone()]);
        let first = one_error(&x);
        for y in &first {
            model.extend(one_error(y));
        }
        model.extend(first);
        let got = brute_image(bsid.transducer(), &x, x.len() + 2);
        assert_eq!(got, model, "bsid2 on {:?}", bin().format_word(&x));
    }
}

#[test]
fn bit_shift_example() {
    let bsid = channel("bsid2");
    let img = image(&bsid, &w("10"), 4);
    for s in ["10", "01", "0", "1", "010", "100", "101", "110"] {
        assert!(img.contains(&w(s)), "{s}");
    }
}

/// Each length-`b` segment loses at most one symbol.
fn segd_model(x: &[u8], b: usize) -> BTreeSet<Word> {
    if x.is_empty() || !x.len().is_multiple_of(b) {
        return BTreeSet::new();
    }
    let mut out = BTreeSet::from([Vec::new()]);
    for seg in x.chunks(b) {
        let mut options = BTreeSet::from([seg.to_vec()]);
        for i in 0..b {
            let mut y = seg.to_vec();
            y.remove(i);
            options.insert(y);
        }
        out = out
            .iter()
            .flat_map(|p| options.iter().map(move |o| [p.clone(), o.clone()].concat()))
            .collect();
    }
    out
}

#[test]
fn segmented_deletion() {
    let segd2 = channel("segd:2");
    let img = image(&segd2, &w("0101"), 4);
    for s in ["0101", "101", "010", "11", "00", "01", "10"] {
        assert!(img.contains(&w(s)), "{s}");
    }
    assert!(img.iter().all(|y| y.len() >= 2));
    for b in [2, 3, 4] {
        let ch = make_segd(b, &bin()).unwrap();
        assert_eq!(ch.transducer().num_states(), 2 * b + 1);
        for x in bin().words_up_to(8) {
            assert_eq!(image(&ch, &x, 8), segd_model(&x, b), "segd:{b} on {x:?}");
        }
    }
}

#[test]
fn substitution_images_are_hamming_balls() {
    for k in 0..=3 {
        let ch = channel(&format!("sub:{k}"));
        for x in bin().words_up_to(5) {
            let expected: BTreeSet<Word> = bin()
                .words_of_length(x.len())
                .filter(|y| hamming(&x, y) <= k)
                .collect();
            assert_eq!(image(&ch, &x, 5), expected);
        }
    }
}

#[test]
fn insertion_deletion_images_are_within_distance() {
    for k in 1..=2 {
        let ch = channel(&format!("id:{k}"));
        for x in bin().words_up_to(4) {
            let got = image(&ch, &x, x.len() + k);
            for y in bin().words_up_to(x.len() + k) {
                // id_k mixes insertions and deletions freely, which is
                // Levenshtein distance without substitutions.
                let expected = indel_distance(&x, &y) <= k;
                assert_eq!(got.contains(&y), expected, "{x:?} -> {y:?}");
            }
        }
    }
}

fn indel_distance(u: &[u8], v: &[u8]) -> usize {
    let mut lcs = vec![vec![0usize; v.len() + 1]; u.len() + 1];
    for i in 0..u.len() {
        for j in 0..v.len() {
            lcs[i + 1][j + 1] = if u[i] == v[j] {
                lcs[i][j] + 1
            } else {
                lcs[i][j + 1].max(lcs[i + 1][j])
            };
        }
    }
    u.len() + v.len() - 2 * lcs[u.len()][v.len()]
}

#[test]
fn levenshtein_oracle_bounds_edit_channels() {
    let id1 = channel("id:1");
    for x in bin().words_up_to(4) {
        for y in image(&id1, &x, 5) {
            assert!(levenshtein(&x, &y) <= 1);
        }
    }
}

#[test]
fn del1_keeps_length() {
    let del1 = channel("del1");
    let x = w("0110");
    let img = image(&del1, &x, 6);
    assert!(img.iter().all(|y| y.len() == 4));
    assert!(img.contains(&w("1100")) && img.contains(&w("0111")) && img.contains(&x));
    let ins1 = channel("ins1");
    for x in bin().words_up_to(4) {
        for y in image(&del1, &x, 4) {
            assert!(image(&ins1, &y, 4).contains(&x));
        }
    }
}

#[test]
fn overlap_channel_shapes() {
    let ov = channel("ov");
    let img = image(&ov, &w("0100"), 4);
    assert!(img.contains(&w("1001")));
    assert!(img.contains(&w("0")));
    assert!(!img.contains(&w("11")));
}

#[test]
fn composition_matches_sequential_application() {
    let z = zoo();
    for s in z.iter().filter(|c| c.name() != "ov") {
        for t in z.iter().filter(|c| c.name() != "ov") {
            let st = compose(s.transducer(), t.transducer()).unwrap();
            for x in bin().words_up_to(3) {
                let max = x.len() + 4;
                let mut expected = BTreeSet::new();
                for y in brute_image(t.transducer(), &x, max) {
                    expected.extend(brute_image(s.transducer(), &y, max));
                }
                assert_eq!(
                    st.image(&x).unwrap().words_up_to(max),
                    expected,
                    "{} after {} on {x:?}",
                    s.name(),
                    t.name()
                );
            }
        }
    }
}

#[test]
fn union_and_inverse_match_oracle() {
    let z = zoo();
    for a in &z {
        let inv = a.inverse();
        for x in bin().words_up_to(4) {
            for y in bin().words_up_to(5) {
                let forward = brute_image(a.transducer(), &y, 5).contains(&x);
                assert_eq!(brute_image(inv.transducer(), &x, 5).contains(&y), forward);
            }
        }
        for b in &z {
            let u = a.union(b).unwrap();
            for x in bin().words_up_to(4) {
                let mut expected = brute_image(a.transducer(), &x, 6);
                expected.extend(brute_image(b.transducer(), &x, 6));
                assert_eq!(brute_image(u.transducer(), &x, 6), expected);
            }
        }
    }
}

#[test]
fn every_channel_round_trips_through_text() {
    for ch in zoo() {
        let text = serialize_channel(&ch);
        let back = parse_channel(ch.name(), &text, &bin()).unwrap();
        assert_eq!(serialize_channel(&back), text);
        for x in bin().words_up_to(4) {
            assert_eq!(image(&back, &x, 6), image(&ch, &x, 6));
        }
    }
}

#[test]
fn zoo_is_input_preserving() {
    for ch in zoo() {
        assert_eq!(
            ch.preservation_counterexample(6).unwrap(),
            None,
            "{}",
            ch.name()
        );
    }
}

proptest! {
    #[test]
    fn product_agrees_with_brute_image(
        idx in 0usize..10,
        x in proptest::collection::vec(0u8..2, 0..7),
    ) {
        let ch = &zoo()[idx];
        let max = x.len() + 3;
        prop_assert_eq!(image(ch, &x, max), brute_image(ch.transducer(), &x, max));
    }

    #[test]
    fn channels_contain_their_input(
        idx in 0usize..10,
        x in proptest::collection::vec(0u8..2, 1..9),
    ) {
        let ch = &zoo()[idx];
        let in_domain = !ch.name().starts_with("segd")
            || x.len() % ch.params()[0].1 == 0;
        prop_assume!(in_domain);
        prop_assert!(ch.transducer().image(&x).unwrap().accepts(&x));
    }
}
