mod common;

use common::*;
use proptest::prelude::*;
use tpcells::coxeter::Word;

#[test]
fn root_tracking_matches_brute_force_length() {
    for name in ["A3", "B3"] {
        let s = sys(name);
        for w in words_up_to(s.rank(), 6) {
            let (g, reduced) = s.evaluate_word(&Word(w.clone())).unwrap();
            let len = brute_length(&s, &g);
            assert_eq!(g.length(), len, "{name} {w:?}");
            assert_eq!(reduced, len == w.len(), "{name} {w:?}");
        }
    }
}

#[test]
fn bruhat_matches_exhaustive_subwords_in_s3_s4() {
    for name in ["A2", "A3"] {
        let s = sys(name);
        let els = s.elements();
        for u in &els {
            for w in &els {
                assert_eq!(s.bruhat_leq(u, w).unwrap(), bruhat_exhaustive(&s, u, w), "{name}");
            }
        }
    }
    let a2 = sys("A2");
    assert!(!a2.bruhat_leq(&a2.evaluate(&word("1,2")), &a2.evaluate(&word("2,1"))).unwrap());
}

#[test]
fn bruhat_independent_of_reduced_word() {
    let s = sys("A3");
    let els = s.elements();
    for w in &els {
        let words = s.reduced_words(w);
        for u in &els {
            let first = s.bruhat_leq_along(u, &words[0]);
            assert!(words.iter().all(|rw| s.bruhat_leq_along(u, rw) == first));
        }
    }
}

#[test]
fn intervals_are_graded_by_length() {
    let s = sys("B3");
    let w0 = s.longest_element();
    for u in s.elements().iter().step_by(5) {
        let iv = s.bruhat_interval(u, &w0).unwrap();
        for &(a, b) in iv.poset.covers() {
            assert_eq!(iv.poset.rank(b), iv.poset.rank(a) + 1);
        }
    }
}

#[test]
fn reduced_prefix_reflections_are_distinct() {
    for name in ["A3", "B3", "G2"] {
        let s = sys(name);
        for g in s.elements() {
            for w in s.reduced_words(&g).into_iter().take(3) {
                let r = s.prefix_reflections(&w).unwrap();
                for a in 0..r.len() {
                    assert!(r[a].length() % 2 == 1);
                    for b in a + 1..r.len() {
                        assert_ne!(r[a], r[b], "{name} {w}");
                    }
                }
            }
        }
    }
}

fn word_strategy(rank: usize, max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1..=rank, 0..=max)
}

proptest! {
    #[test]
    fn reduced_iff_length_matches(w in word_strategy(4, 10)) {
        let s = sys("B4");
        let (g, reduced) = s.evaluate_word(&Word(w.clone())).unwrap();
        prop_assert_eq!(reduced, g.length() == w.len());
        prop_assert_eq!(g.length(), s.inversion_count(g.matrix()));
    }

    #[test]
    fn reduced_word_roundtrip(w in word_strategy(4, 12)) {
        let s = sys("F4");
        let g = s.evaluate(&Word(w));
        let rw = s.reduced_word(&g);
        prop_assert_eq!(rw.len(), g.length());
        prop_assert_eq!(s.evaluate(&rw), g);
    }

    #[test]
    fn word_text_roundtrip(w in word_strategy(9, 12)) {
        let w = Word(w.into_iter().collect());
        prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
    }
}
