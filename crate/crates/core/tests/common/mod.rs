#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use tpcells::hecke::{self, Move};
use tpcells::poset::GradedPoset;
use tpcells::{CoxeterSystem, GroupElement, Word};

pub fn sys(name: &str) -> CoxeterSystem {
    CoxeterSystem::named(name).unwrap()
}

pub fn word(s: &str) -> Word {
    s.parse().unwrap()
}

/// All words of exactly length `len` over `1..=rank`.
pub fn words_of_len(rank: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (1..=rank).map(move |i| {
                    let mut v = w.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn words_up_to(rank: usize, max: usize) -> Vec<Vec<usize>> {
    (0..=max).flat_map(|l| words_of_len(rank, l)).collect()
}

/// Minimal length of a word evaluating to `g`, by breadth-first search over words.
pub fn brute_length(sys: &CoxeterSystem, g: &GroupElement) -> usize {
    let mut seen = HashSet::from([sys.identity()]);
    let mut frontier = vec![sys.identity()];
    let mut len = 0;
    loop {
        if frontier.contains(g) {
            return len;
        }
        let mut next = Vec::new();
        for x in &frontier {
            for i in 1..=sys.rank() {
                let y = sys.multiply(x, &sys.generator(i).unwrap()).unwrap();
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
        len += 1;
    }
}

/// `u ≤ w` iff some subword of a reduced word of `w` multiplies to `u`.
pub fn bruhat_exhaustive(sys: &CoxeterSystem, u: &GroupElement, w: &GroupElement) -> bool {
    let rw = sys.reduced_word(w);
    let d = rw.len();
    (0u32..1 << d).any(|mask| {
        let sub: Vec<usize> = (0..d).filter(|k| mask >> k & 1 == 1).map(|k| rw.letters()[k]).collect();
        sys.evaluate(&Word(sub)) == *u
    })
}

/// Applies a move to a plain letter sequence.
pub fn apply_move(letters: &[usize], mv: &Move) -> Vec<usize> {
    let mut v = letters.to_vec();
    match mv {
        Move::Commutation { at, .. } => v.swap(at - 1, *at),
        Move::LongBraid { at, tokens, letters: [a, b] } => {
            for t in 0..tokens.len() {
                v[at - 1 + t] = if t % 2 == 0 { *b } else { *a };
            }
        }
        Move::ModifiedNil { at, .. } => {
            v.remove(*at);
        }
    }
    v
}

/// The reduced words reachable from `letters` by braid, commutation and
/// modified nil-moves; their products are the possible Demazure outcomes.
pub fn script_outcomes(sys: &CoxeterSystem, letters: &[usize]) -> HashSet<GroupElement> {
    let mut seen: HashSet<Vec<usize>> = HashSet::from([letters.to_vec()]);
    let mut queue = VecDeque::from([letters.to_vec()]);
    let mut out = HashSet::new();
    while let Some(w) = queue.pop_front() {
        let (g, reduced) = sys.evaluate_word(&Word(w.clone())).unwrap();
        if reduced {
            out.insert(g);
        }
        for mv in hecke::applicable_moves(sys, &w) {
            let next = apply_move(&w, &mv);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    out
}

/// Möbius values by inverting the zeta matrix over the rationals-free
/// integer recursion `Z · M = I` solved column by column.
pub fn mobius_by_zeta(p: &GradedPoset) -> Vec<Vec<i64>> {
    let n = p.len();
    let order: Vec<usize> = p.linear_extension().to_vec();
    let mut m = vec![vec![0i64; n]; n];
    // M = Z^{-1}: Z is unitriangular in linear-extension order, back substitution
    for &v in &order {
        for &u in order.iter().rev() {
            if !p.leq(u, v) {
                continue;
            }
            let mut s: i64 = if u == v { 1 } else { 0 };
            for z in 0..n {
                if z != u && p.leq(u, z) {
                    s -= m[z][v];
                }
            }
            m[u][v] = s;
        }
    }
    m
}

/// Closure poset of the non-regular 2-complex: five vertices, six edges and
/// one 2-cell glued along the closed walk v1 v2 v3 v4 v5 v3 v1, bottom adjoined.
pub fn non_example_poset() -> GradedPoset {
    let labels: Vec<String> = ["0", "v1", "v2", "v3", "v4", "v5", "e12", "e23", "e13", "e34", "e45", "e35", "sigma"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let ranks = vec![0, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3];
    let mut covers: Vec<(usize, usize)> = (1..=5).map(|v| (0, v)).collect();
    for (e, (a, b)) in [(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (3, 5)].into_iter().enumerate() {
        covers.push((a, 6 + e));
        covers.push((b, 6 + e));
        covers.push((6 + e, 12));
    }
    GradedPoset::new(labels, ranks, covers).unwrap()
}

/// Boolean lattice on `k` atoms, labelled by subsets.
pub fn boolean_poset(k: usize) -> GradedPoset {
    let n = 1usize << k;
    let labels = (0..n).map(|i| format!("{i:0k$b}")).collect();
    let ranks = (0..n).map(|i| i.count_ones() as usize).collect();
    GradedPoset::from_relation(labels, ranks, |a, b| a & b == a).unwrap()
}
