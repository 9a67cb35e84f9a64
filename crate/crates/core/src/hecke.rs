//! 0-Hecke words: Demazure products, omittable and deletion pairs, and
//! move scripts built from commutations, long braids and modified nil-moves.
//!
//! Letters carry a *token*, the 1-based position in the base word they came
//! from. Moves permute tokens, so a script computed on a face can be replayed
//! on any subface that keeps the tokens it needs.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::coxeter::{CoxeterSystem, GroupElement, Word};
use crate::error::{Error, Result};

/// A base word together with an increasing subset of its positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct XExpression {
    base: Word,
    support: Vec<usize>,
}

impl XExpression {
    pub fn new(base: Word, mut support: Vec<usize>) -> Result<Self> {
        support.sort_unstable();
        support.dedup();
        if let Some(&p) = support.iter().find(|&&p| p == 0 || p > base.len()) {
            return Err(Error::PositionOutOfRange { pos: p, len: base.len() });
        }
        Ok(XExpression { base, support })
    }

    pub fn full(base: Word) -> Self {
        let support = (1..=base.len()).collect();
        XExpression { base, support }
    }

    pub fn base(&self) -> &Word {
        &self.base
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn letter(&self, pos: usize) -> usize {
        self.base.at(pos)
    }

    /// The induced subword.
    pub fn letters(&self) -> Vec<usize> {
        self.support.iter().map(|&p| self.base.at(p)).collect()
    }

    /// `(token, letter)` for every support position in `[from, to]`.
    fn segment(&self, from: usize, to: usize) -> Vec<(usize, usize)> {
        self.support
            .iter()
            .filter(|&&p| from <= p && p <= to)
            .map(|&p| (p, self.base.at(p)))
            .collect()
    }

    fn check_pair(&self, (l, r): (usize, usize)) -> Result<()> {
        for p in [l, r] {
            if !self.support.contains(&p) {
                return Err(Error::PositionOutOfRange { pos: p, len: self.base.len() });
            }
        }
        if l >= r {
            return Err(Error::NotDeletionPair(l, r));
        }
        Ok(())
    }
}

/// One rewriting step. `at` is the 1-based slot of the leftmost letter
/// affected; `tokens` are the tokens occupying the affected slots before the
/// move; `letters` are the two letters involved, in their order before the move.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Move {
    Commutation { at: usize, tokens: [usize; 2], letters: [usize; 2] },
    LongBraid { at: usize, tokens: Vec<usize>, letters: [usize; 2] },
    ModifiedNil { at: usize, tokens: [usize; 2], letter: usize },
}

impl Move {
    pub fn is_long_braid(&self) -> bool {
        matches!(self, Move::LongBraid { .. })
    }

    pub fn tokens(&self) -> &[usize] {
        match self {
            Move::Commutation { tokens, .. } | Move::ModifiedNil { tokens, .. } => tokens,
            Move::LongBraid { tokens, .. } => tokens,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct MoveScript(pub Vec<Move>);

impl MoveScript {
    pub fn moves(&self) -> &[Move] {
        &self.0
    }

    pub fn long_braids(&self) -> usize {
        self.0.iter().filter(|m| m.is_long_braid()).count()
    }

    /// Tokens that must be present for the script to act on a subface.
    pub fn long_braid_tokens(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.0.iter().filter(|m| m.is_long_braid()).flat_map(|m| m.tokens().to_vec()).collect();
        t.sort_unstable();
        t.dedup();
        t
    }
}

/// The Demazure product of a letter sequence.
pub fn demazure_word(sys: &CoxeterSystem, letters: &[usize]) -> GroupElement {
    letters.iter().fold(sys.identity(), |acc, &i| {
        if sys.has_right_descent(&acc, i) {
            acc
        } else {
            sys.mul_generator(&acc, i)
        }
    })
}

/// `δ(e)`, the 0-Hecke product of the induced subword.
pub fn demazure(sys: &CoxeterSystem, e: &XExpression) -> GroupElement {
    demazure_word(sys, &e.letters())
}

fn reduced(sys: &CoxeterSystem, letters: &[usize]) -> bool {
    demazure_word(sys, letters).length() == letters.len()
}

fn letters_of(seq: &[(usize, usize)]) -> Vec<usize> {
    seq.iter().map(|&(_, l)| l).collect()
}

/// Moves applicable to a plain letter sequence; tokens are slot numbers.
pub fn applicable_moves(sys: &CoxeterSystem, letters: &[usize]) -> Vec<Move> {
    let seq: Vec<(usize, usize)> = letters.iter().enumerate().map(|(k, &l)| (k + 1, l)).collect();
    let mut out = token_moves(sys, &seq, true);
    for k in 0..seq.len().saturating_sub(1) {
        if seq[k].1 == seq[k + 1].1 {
            out.push(Move::ModifiedNil { at: k + 1, tokens: [seq[k].0, seq[k + 1].0], letter: seq[k].1 });
        }
    }
    out
}

/// Commutations and (optionally) long braids available on a token sequence,
/// ordered by slot then kind.
fn token_moves(sys: &CoxeterSystem, seq: &[(usize, usize)], braids: bool) -> Vec<Move> {
    let mut out = Vec::new();
    for k in 0..seq.len().saturating_sub(1) {
        let (a, b) = (seq[k].1, seq[k + 1].1);
        if a == b {
            continue;
        }
        let m = sys.m(a, b) as usize;
        if m == 2 {
            out.push(Move::Commutation { at: k + 1, tokens: [seq[k].0, seq[k + 1].0], letters: [a, b] });
        } else if braids && k + m <= seq.len() && (0..m).all(|t| seq[k + t].1 == if t % 2 == 0 { a } else { b }) {
            out.push(Move::LongBraid { at: k + 1, tokens: seq[k..k + m].iter().map(|&(t, _)| t).collect(), letters: [a, b] });
        }
    }
    out
}

/// Applies a move to a token sequence at its recorded slot.
fn apply_at(seq: &mut [(usize, usize)], mv: &Move) {
    match mv {
        Move::Commutation { at, .. } => seq.swap(at - 1, *at),
        Move::LongBraid { at, letters: [a, b], tokens } => {
            for (t, slot) in seq[at - 1..at - 1 + tokens.len()].iter_mut().enumerate() {
                slot.1 = if t % 2 == 0 { *b } else { *a };
            }
        }
        Move::ModifiedNil { .. } => {}
    }
}

/// Replays a script on a token sequence that may lack some tokens: moves
/// touching an absent token are skipped, which is valid as long as every
/// long-braid token is present. Returns `None` if a move no longer applies.
pub fn replay(seq: &[(usize, usize)], script: &MoveScript) -> Option<Vec<(usize, usize)>> {
    let mut seq = seq.to_vec();
    let pos = |seq: &[(usize, usize)], t: usize| seq.iter().position(|&(x, _)| x == t);
    for mv in script.moves() {
        match mv {
            Move::Commutation { tokens: [x, y], .. } => {
                let (Some(i), Some(j)) = (pos(&seq, *x), pos(&seq, *y)) else { continue };
                if j != i + 1 {
                    return None;
                }
                seq.swap(i, j);
            }
            Move::LongBraid { tokens, letters: [a, b], .. } => {
                let i = pos(&seq, tokens[0])?;
                for (t, tok) in tokens.iter().enumerate() {
                    let want = if t % 2 == 0 { *a } else { *b };
                    if seq.get(i + t) != Some(&(*tok, want)) {
                        return None;
                    }
                }
                for t in 0..tokens.len() {
                    seq[i + t].1 = if t % 2 == 0 { *b } else { *a };
                }
            }
            Move::ModifiedNil { tokens: [x, y], .. } => {
                let (i, j) = (pos(&seq, *x)?, pos(&seq, *y)?);
                if j != i + 1 || seq[i].1 != seq[j].1 {
                    return None;
                }
            }
        }
    }
    Some(seq)
}

/// A commutation-only script bringing tokens `l` and `r` next to each other,
/// shortest by breadth-first search, ending with the modified nil-move.
pub fn commutation_script(sys: &CoxeterSystem, e: &XExpression, (l, r): (usize, usize)) -> Option<MoveScript> {
    if l >= r || e.letter(l) != e.letter(r) || !e.support.contains(&l) || !e.support.contains(&r) {
        return None;
    }
    let start = e.segment(l, r);
    let adjacent = |seq: &[(usize, usize)]| seq.windows(2).position(|w| w[0].0 == l && w[1].0 == r);
    let mut parent: HashMap<Vec<(usize, usize)>, Option<(Vec<(usize, usize)>, Move)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(seq) = queue.pop_front() {
        if let Some(k) = adjacent(&seq) {
            let mut moves = vec![Move::ModifiedNil { at: k + 1, tokens: [l, r], letter: e.letter(l) }];
            let mut cur = seq;
            while let Some(Some((prev, mv))) = parent.get(&cur) {
                moves.push(mv.clone());
                cur = prev.clone();
            }
            moves.reverse();
            return Some(MoveScript(moves));
        }
        for mv in token_moves(sys, &seq, false) {
            let mut next = seq.clone();
            apply_at(&mut next, &mv);
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((seq.clone(), mv)));
                queue.push_back(next);
            }
        }
    }
    None
}

/// Pairs `(l, r)` of support positions with equal letters that commutation
/// moves alone can make adjacent.
pub fn omittable_pairs(sys: &CoxeterSystem, e: &XExpression) -> Vec<(usize, usize)> {
    let s = e.support();
    let mut out = Vec::new();
    for (a, &l) in s.iter().enumerate() {
        for &r in &s[a + 1..] {
            if e.letter(l) == e.letter(r) && commutation_script(sys, e, (l, r)).is_some() {
                out.push((l, r));
            }
        }
    }
    out
}

fn is_deletion_pair(sys: &CoxeterSystem, e: &XExpression, (l, r): (usize, usize)) -> bool {
    let seg = letters_of(&e.segment(l, r));
    seg.len() >= 2 && !reduced(sys, &seg) && reduced(sys, &seg[1..]) && reduced(sys, &seg[..seg.len() - 1])
}

/// Pairs `(l, r)` whose segment is not reduced while both one-sided
/// deletions are.
pub fn deletion_pairs(sys: &CoxeterSystem, e: &XExpression) -> Vec<(usize, usize)> {
    let s = e.support();
    let mut out = Vec::new();
    for (a, &l) in s.iter().enumerate() {
        for &r in &s[a + 1..] {
            if is_deletion_pair(sys, e, (l, r)) {
                out.push((l, r));
            }
        }
    }
    out
}

/// A minimal script for a deletion pair: braid and commutation moves on the
/// segment `x_l ··· x_{r-1}` ending in the letter of `x_r`, followed by the
/// modified nil-move merging the last letter with `x_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StutterScript {
    pub long_braids: usize,
    pub stutter_token: usize,
    pub script: MoveScript,
}

type SearchKey = (usize, usize, Vec<(u8, usize)>);

/// Uniform-cost search over letter sequences: commutations cost 0, long
/// braids cost 1. Ties break by move count, then by the move list encoded
/// as `(kind, slot)` pairs compared lexicographically.
pub fn stutter_script(sys: &CoxeterSystem, e: &XExpression, pair: (usize, usize)) -> Result<StutterScript> {
    e.check_pair(pair)?;
    let (l, r) = pair;
    if !is_deletion_pair(sys, e, pair) {
        return Err(Error::NotDeletionPair(l, r));
    }
    let target = e.letter(r);
    let start = e.segment(l, r - 1);
    let mut heap: BinaryHeap<Reverse<(SearchKey, Vec<(usize, usize)>, Vec<Move>)>> = BinaryHeap::new();
    let mut settled: HashSet<Vec<usize>> = HashSet::new();
    heap.push(Reverse(((0, 0, Vec::new()), start, Vec::new())));
    while let Some(Reverse(((cost, count, code), seq, path))) = heap.pop() {
        if !settled.insert(letters_of(&seq)) {
            continue;
        }
        if seq.last().map(|&(_, x)| x) == Some(target) {
            let (stutter_token, _) = *seq.last().unwrap();
            let mut moves = path;
            moves.push(Move::ModifiedNil { at: seq.len(), tokens: [stutter_token, r], letter: target });
            return Ok(StutterScript { long_braids: cost, stutter_token, script: MoveScript(moves) });
        }
        for mv in token_moves(sys, &seq, true) {
            let mut next = seq.clone();
            apply_at(&mut next, &mv);
            if settled.contains(&letters_of(&next)) {
                continue;
            }
            let (kind, at) = match &mv {
                Move::Commutation { at, .. } => (0u8, *at),
                Move::LongBraid { at, .. } => (1u8, *at),
                Move::ModifiedNil { at, .. } => (2u8, *at),
            };
            let mut c = code.clone();
            c.push((kind, at));
            let mut p = path.clone();
            p.push(mv);
            heap.push(Reverse(((cost + kind as usize, count + 1, c), next, p)));
        }
    }
    // A deletion pair always admits such a script; reaching here means the
    // segment and target disagree with the exchange property.
    Err(Error::NotDeletionPair(l, r))
}

/// `c(F, l, r)`: the least number of long braid moves in a stutter script.
pub fn min_long_braids(sys: &CoxeterSystem, e: &XExpression, pair: (usize, usize)) -> Result<usize> {
    stutter_script(sys, e, pair).map(|s| s.long_braids)
}
