//! Prioritized face collapses on the subword simplex of a word.
//!
//! A face is a nonempty set of positions of the base word. Faces are glued
//! into classes by the identifications each collapse performs; a class is
//! either alive (an open cell of the quotient) or collapsed.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::coxeter::{CoxeterSystem, GroupElement, Word};
use crate::error::{Error, Result};
use crate::hecke::{self, MoveScript, XExpression};
use crate::poset::GradedPoset;

/// Longest base word accepted by the face enumeration.
pub const MAX_WORD_LEN: usize = 16;

/// A nonempty set of 1-based positions, stored as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Face(u64);

impl Face {
    pub fn from_positions(positions: &[usize]) -> Self {
        Face(positions.iter().fold(0u64, |m, &p| m | 1 << (p - 1)))
    }

    pub fn from_bits(bits: u64) -> Self {
        Face(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn positions(self) -> Vec<usize> {
        (0..64).filter(|k| self.0 >> k & 1 == 1).map(|k| k + 1).collect()
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn dim(self) -> usize {
        self.len().saturating_sub(1)
    }

    pub fn contains(self, p: usize) -> bool {
        self.0 >> (p - 1) & 1 == 1
    }

    pub fn without(self, p: usize) -> Face {
        Face(self.0 & !(1 << (p - 1)))
    }

    pub fn is_subset(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn expression(self, base: &Word) -> XExpression {
        XExpression::new(base.clone(), self.positions()).expect("face positions lie in the base word")
    }
}

/// Lexicographic order on the sorted position lists.
impl Ord for Face {
    fn cmp(&self, other: &Self) -> Ordering {
        self.positions().cmp(&other.positions())
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.positions().iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", p.join(","))
    }
}

impl Serialize for Face {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.positions().serialize(s)
    }
}

/// Faces ordered by decreasing dimension, then lexicographically.
fn by_dim_desc(a: &Face, b: &Face) -> Ordering {
    b.len().cmp(&a.len()).then_with(|| a.cmp(b))
}

fn check_len(w: &Word) -> Result<()> {
    if w.len() > MAX_WORD_LEN {
        return Err(Error::WordTooLong(w.len(), MAX_WORD_LEN));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct FaceInfo {
    pub face: Face,
    pub reduced: bool,
    pub element: GroupElement,
}

/// All `2^d − 1` nonempty faces, ordered by dimension then lexicographically.
pub fn enumerate_faces(sys: &CoxeterSystem, w: &Word) -> Result<Vec<FaceInfo>> {
    sys.check_word(w)?;
    check_len(w)?;
    let mut faces: Vec<Face> = (1..1u64 << w.len()).map(Face).collect();
    faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(faces
        .into_iter()
        .map(|face| {
            let letters: Vec<usize> = face.positions().iter().map(|&p| w.at(p)).collect();
            let element = hecke::demazure_word(sys, &letters);
            FaceInfo { face, reduced: element.length() == letters.len(), element }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    CommutationOnly,
    Full,
}

/// Priority of a face: smaller right endpoint first, then shorter span, then
/// fewer long braids, then higher dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CollapseKey {
    pub r: usize,
    pub span: usize,
    pub long_braids: usize,
    pub dim: usize,
}

impl CollapseKey {
    fn head(&self) -> (usize, usize, usize) {
        (self.r, self.span, self.long_braids)
    }
}

impl Ord for CollapseKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.head().cmp(&other.head()).then(other.dim.cmp(&self.dim))
    }
}

impl PartialOrd for CollapseKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
struct Choice {
    key: CollapseKey,
    pair: (usize, usize),
    stutter_token: usize,
    script: MoveScript,
}

impl Choice {
    /// Tokens a subface must keep for the step's script to act on it.
    fn required(&self, mode: Mode) -> Face {
        let mut tokens = vec![self.pair.0, self.pair.1];
        if mode == Mode::Full {
            tokens.push(self.stutter_token);
            tokens.extend(self.script.long_braid_tokens());
        }
        Face::from_positions(&tokens)
    }
}

fn best_choice(sys: &CoxeterSystem, w: &Word, f: Face, mode: Mode) -> Option<Choice> {
    let e = f.expression(w);
    let dim = f.dim();
    match mode {
        Mode::Full => hecke::deletion_pairs(sys, &e)
            .into_iter()
            .map(|(l, r)| {
                let s = hecke::stutter_script(sys, &e, (l, r)).expect("deletion pair admits a script");
                Choice {
                    key: CollapseKey { r, span: r - l, long_braids: s.long_braids, dim },
                    pair: (l, r),
                    stutter_token: s.stutter_token,
                    script: s.script,
                }
            })
            .min_by_key(|c| c.key),
        Mode::CommutationOnly => hecke::omittable_pairs(sys, &e)
            .into_iter()
            .map(|(l, r)| Choice {
                key: CollapseKey { r, span: r - l, long_braids: 0, dim },
                pair: (l, r),
                stutter_token: l,
                script: hecke::commutation_script(sys, &e, (l, r)).expect("omittable pair has a script"),
            })
            .min_by_key(|c| c.key),
    }
}

/// The full-mode key of a face's best deletion pair; `None` for reduced faces.
pub fn collapse_key(sys: &CoxeterSystem, w: &Word, f: Face) -> Option<CollapseKey> {
    best_choice(sys, w, f, Mode::Full).map(|c| c.key)
}

#[derive(Clone, Debug, Serialize)]
pub struct CollapseStep {
    pub index: usize,
    pub collapsed_face: Face,
    pub deletion_pair: (usize, usize),
    pub key: CollapseKey,
    pub long_braid_count: usize,
    pub stutter_token: usize,
    pub script: MoveScript,
    /// `(G1, G2)` per swept face `τ`: `G1 = τ \ {l}`, `G2 = τ \ {r}`.
    pub identified_pairs: Vec<(Face, Face)>,
    pub also_collapsed: Vec<Face>,
    /// Swept faces whose own key differs from this step's.
    pub early_swept: Vec<Face>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceClass {
    pub representative: Face,
    pub members: Vec<Face>,
    pub collapsed: bool,
    /// Reduced word of the Demazure product shared by all members.
    pub element: Word,
}

#[derive(Clone, Debug, Serialize)]
pub struct CollapseTrace {
    pub system: String,
    pub base: Word,
    pub mode: Mode,
    pub steps: Vec<CollapseStep>,
    pub classes: Vec<FaceClass>,
}

impl CollapseTrace {
    pub fn survivors(&self) -> impl Iterator<Item = &FaceClass> {
        self.classes.iter().filter(|c| !c.collapsed)
    }

    /// Class index of every face, indexed by bitmask.
    pub fn class_index(&self) -> Vec<usize> {
        let mut idx = vec![usize::MAX; 1 << self.base.len()];
        for (k, c) in self.classes.iter().enumerate() {
            for m in &c.members {
                idx[m.bits() as usize] = k;
            }
        }
        idx
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

/// Union-find over faces indexed by bitmask, with a collapsed flag per root.
#[derive(Clone, Debug)]
struct Cells {
    parent: Vec<u32>,
    collapsed: Vec<bool>,
}

impl Cells {
    fn new(d: usize) -> Self {
        let n = 1usize << d;
        Cells { parent: (0..n as u32).collect(), collapsed: vec![false; n] }
    }

    fn find(&mut self, x: u64) -> u64 {
        let mut r = x as usize;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut x = x as usize;
        while self.parent[x] as usize != r {
            let next = self.parent[x] as usize;
            self.parent[x] = r as u32;
            x = next;
        }
        r as u64
    }

    fn is_collapsed(&mut self, f: Face) -> bool {
        let r = self.find(f.0) as usize;
        self.collapsed[r]
    }

    fn collapse(&mut self, f: Face) {
        let r = self.find(f.0) as usize;
        self.collapsed[r] = true;
    }

    fn union(&mut self, a: Face, b: Face) {
        let (ra, rb) = (self.find(a.0) as usize, self.find(b.0) as usize);
        if ra == rb {
            return;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo as u32;
        self.collapsed[lo] |= self.collapsed[hi];
    }
}

/// Nonempty subsets of `f` containing `required`, `f` first.
fn sweep(f: Face, required: Face) -> Vec<Face> {
    let free = f.0 & !required.0;
    let mut out = Vec::new();
    let mut sub = free;
    loop {
        let t = Face(sub | required.0);
        if !t.is_empty() {
            out.push(t);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & free;
    }
    out.sort_by(by_dim_desc);
    out
}

/// Runs the collapsing procedure: faces with a collapsing pair are visited by
/// key, and each face whose class is still alive is collapsed together with
/// every alive subface its script acts on.
pub fn run_collapse(sys: &CoxeterSystem, w: &Word, mode: Mode) -> Result<CollapseTrace> {
    sys.check_word(w)?;
    check_len(w)?;
    let d = w.len();
    let mut agenda: Vec<(Face, Choice)> = (1..1u64 << d)
        .map(Face)
        .filter_map(|f| best_choice(sys, w, f, mode).map(|c| (f, c)))
        .collect();
    agenda.sort_by(|(fa, ca), (fb, cb)| ca.key.cmp(&cb.key).then_with(|| fa.cmp(fb)));
    let keys: BTreeMap<u64, CollapseKey> = agenda.iter().map(|(f, c)| (f.0, c.key)).collect();

    let mut cells = Cells::new(d);
    let mut steps = Vec::new();
    let mut alive_candidates = agenda.len();
    for (f, choice) in &agenda {
        if cells.is_collapsed(*f) {
            continue;
        }
        let (l, r) = choice.pair;
        let swept: Vec<Face> = sweep(*f, choice.required(mode)).into_iter().filter(|&t| !cells.is_collapsed(t)).collect();
        let identified_pairs: Vec<(Face, Face)> = swept.iter().map(|t| (t.without(l), t.without(r))).collect();
        let early_swept = swept[1..]
            .iter()
            .filter(|t| keys.get(&t.0).map(CollapseKey::head) != Some(choice.key.head()))
            .copied()
            .collect();
        for &t in &swept {
            cells.collapse(t);
        }
        for &(g1, g2) in &identified_pairs {
            cells.union(g1, g2);
        }
        let now_alive = agenda.iter().filter(|(g, _)| !cells.is_collapsed(*g)).count();
        assert!(now_alive < alive_candidates, "collapse step made no progress");
        alive_candidates = now_alive;
        steps.push(CollapseStep {
            index: steps.len() + 1,
            collapsed_face: *f,
            deletion_pair: choice.pair,
            key: choice.key,
            long_braid_count: choice.key.long_braids,
            stutter_token: choice.stutter_token,
            script: choice.script.clone(),
            identified_pairs,
            also_collapsed: swept[1..].to_vec(),
            early_swept,
        });
    }

    let mut groups: BTreeMap<u64, Vec<Face>> = BTreeMap::new();
    for m in 1..1u64 << d {
        groups.entry(cells.find(m)).or_default().push(Face(m));
    }
    let mut classes: Vec<FaceClass> = groups
        .into_iter()
        .map(|(root, mut members)| {
            members.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            let representative = members[0];
            let letters: Vec<usize> = representative.positions().iter().map(|&p| w.at(p)).collect();
            let element = sys.reduced_word(&hecke::demazure_word(sys, &letters));
            FaceClass { representative, members, collapsed: cells.collapsed[root as usize], element }
        })
        .collect();
    classes.sort_by(|a, b| {
        let (x, y) = (a.representative, b.representative);
        x.len().cmp(&y.len()).then_with(|| x.cmp(&y))
    });
    Ok(CollapseTrace { system: sys.name().to_string(), base: w.clone(), mode, steps, classes })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub step: usize,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub lub_ok: bool,
    pub lub_violations: Vec<Violation>,
    pub distinct_endpoints_ok: bool,
    pub distinct_endpoints_violations: Vec<Violation>,
    pub equidimensional_ok: bool,
    pub equidimensional_violations: Vec<Violation>,
    /// Swept faces whose own key would have scheduled them differently.
    pub early_swept: usize,
}

impl ConditionReport {
    pub fn all_ok(&self) -> bool {
        self.lub_ok && self.distinct_endpoints_ok && self.equidimensional_ok
    }
}

/// The closure order among the alive cells: `A ≤ B` iff some member of `A`
/// lies in some member of `B`, closed transitively. Returns the roots of the
/// alive cells and the order as a dense matrix over them.
fn closure_order(cells: &mut Cells, d: usize) -> (Vec<u64>, Vec<bool>) {
    let n = 1u64 << d;
    let mut roots: Vec<u64> = (1..n).filter_map(|m| (!cells.is_collapsed(Face(m))).then(|| cells.find(m))).collect();
    roots.sort_unstable();
    roots.dedup();
    let k = roots.len();
    let idx = |r: u64| roots.binary_search(&r).expect("alive root");
    let mut le = vec![false; k * k];
    for b in 1..n {
        if cells.is_collapsed(Face(b)) {
            continue;
        }
        let rb = idx(cells.find(b));
        let mut a = b;
        while a != 0 {
            if !cells.is_collapsed(Face(a)) {
                let ra = idx(cells.find(a));
                le[ra * k + rb] = true;
            }
            a = (a - 1) & b;
        }
    }
    for i in 0..k {
        le[i * k + i] = true;
    }
    for m in 0..k {
        for i in 0..k {
            if le[i * k + m] {
                for j in 0..k {
                    if le[m * k + j] {
                        le[i * k + j] = true;
                    }
                }
            }
        }
    }
    (roots, le)
}

/// Replays a trace and checks, at every step: minimal upper bounds of each
/// newly identified pair are collapsed by the step; the two endpoint faces of
/// the collapsed face lie in distinct alive cells; both have dimension
/// `dim F − 1`.
pub fn verify_conditions(trace: &CollapseTrace) -> ConditionReport {
    let d = trace.base.len();
    let mut cells = Cells::new(d);
    let mut rep = ConditionReport::default();
    for step in &trace.steps {
        let (l, r) = step.deletion_pair;
        let f = step.collapsed_face;
        let (roots, le) = closure_order(&mut cells, d);
        let k = roots.len();
        let cell = |cells: &mut Cells, g: Face| -> Option<usize> {
            if g.is_empty() || cells.is_collapsed(g) {
                return None;
            }
            roots.binary_search(&cells.find(g.0)).ok()
        };
        let swept: Vec<Face> = std::iter::once(f).chain(step.also_collapsed.iter().copied()).collect();
        let dying: Vec<usize> = swept.iter().filter_map(|&t| cell(&mut cells, t)).collect();

        let (g1, g2) = (f.without(l), f.without(r));
        match (cell(&mut cells, g1), cell(&mut cells, g2)) {
            (Some(a), Some(b)) if a == b => rep.distinct_endpoints_violations.push(Violation {
                step: step.index,
                detail: format!("{g1} and {g2} share a cell while collapsing {f}"),
            }),
            (Some(_), Some(_)) => {}
            _ => rep.equidimensional_violations.push(Violation {
                step: step.index,
                detail: format!("endpoint of {f} already collapsed"),
            }),
        }
        if g1.dim() + 1 != f.dim() || g2.dim() + 1 != f.dim() {
            rep.equidimensional_violations.push(Violation {
                step: step.index,
                detail: format!("endpoints {g1}, {g2} of {f} have wrong dimension"),
            });
        }

        for &(a, b) in &step.identified_pairs {
            let (Some(ca), Some(cb)) = (cell(&mut cells, a), cell(&mut cells, b)) else { continue };
            if ca == cb {
                continue;
            }
            let upper: Vec<usize> = (0..k).filter(|&c| le[ca * k + c] && le[cb * k + c]).collect();
            for &u in &upper {
                let minimal = !upper.iter().any(|&v| v != u && le[v * k + u]);
                if minimal && !dying.contains(&u) {
                    rep.lub_violations.push(Violation {
                        step: step.index,
                        detail: format!("{a} ~ {b}: minimal upper bound {} survives", Face(roots[u])),
                    });
                }
            }
        }

        for &t in &swept {
            cells.collapse(t);
        }
        for &(a, b) in &step.identified_pairs {
            cells.union(a, b);
        }
        rep.early_swept += step.early_swept.len();
    }
    rep.lub_ok = rep.lub_violations.is_empty();
    rep.distinct_endpoints_ok = rep.distinct_endpoints_violations.is_empty();
    rep.equidimensional_ok = rep.equidimensional_violations.is_empty();
    rep
}

/// The closure poset of the surviving cells with a bottom element adjoined
/// (id 0, label `e`). Cell ids follow the order of [`CollapseTrace::survivors`].
pub fn quotient_poset(trace: &CollapseTrace) -> Result<GradedPoset> {
    if trace.mode != Mode::Full {
        return Err(Error::NotFullMode);
    }
    let alive: Vec<&FaceClass> = trace.survivors().collect();
    let mut labels = vec!["e".to_string()];
    let mut ranks = vec![0];
    for c in &alive {
        labels.push(c.element.letters().iter().map(|i| format!("s{i}")).collect());
        ranks.push(c.representative.len());
    }
    let below = |a: &FaceClass, b: &FaceClass| a.members.iter().any(|x| b.members.iter().any(|y| x.is_subset(*y)));
    GradedPoset::from_relation(labels, ranks, |i, j| match (i, j) {
        (0, _) => true,
        (_, 0) => false,
        _ => below(alive[i - 1], alive[j - 1]),
    })
}

/// Compares the quotient poset with the Bruhat interval `[e, w]`, `w` the
/// Demazure product of the base word, through the class elements. Returns the
/// list of mismatches; empty means graded-isomorphic.
pub fn bruhat_mismatches(sys: &CoxeterSystem, trace: &CollapseTrace) -> Result<Vec<String>> {
    let q = quotient_poset(trace)?;
    let top = hecke::demazure_word(sys, trace.base.letters());
    let iv = sys.bruhat_interval(&sys.identity(), &top)?;
    let mut out = Vec::new();
    if q.len() != iv.elements.len() {
        out.push(format!("{} cells vs {} interval elements", q.len(), iv.elements.len()));
        return Ok(out);
    }
    let mut map = vec![iv.index_of(&sys.identity()).expect("identity in interval")];
    for c in trace.survivors() {
        match iv.index_of(&sys.evaluate(&c.element)) {
            Some(k) => map.push(k),
            None => {
                out.push(format!("class {} has element outside the interval", c.representative));
                return Ok(out);
            }
        }
    }
    let mut seen = map.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != map.len() {
        out.push("two cells share a group element".into());
        return Ok(out);
    }
    for a in 0..q.len() {
        if q.rank(a) != iv.poset.rank(map[a]) {
            out.push(format!("rank mismatch at {}", q.label(a)));
        }
        for b in 0..q.len() {
            if q.leq(a, b) != iv.poset.leq(map[a], map[b]) {
                out.push(format!("order mismatch between {} and {}", q.label(a), q.label(b)));
            }
        }
    }
    Ok(out)
}
