//! Exact type-A realization of the map `(t_1, ..., t_d) ↦ x_{i_1}(t_1)···x_{i_d}(t_d)`
//! with `x_i(t) = I + t E_{i,i+1}`, used to check collapse traces numerically.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::Serialize;

use crate::collapse::{CollapseTrace, Face};
use crate::coxeter::{CoxeterSystem, GroupElement, Word};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hecke::{self, Move};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Square matrix of exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<Q>,
}

impl RationalMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Q::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Q::one();
        }
        RationalMatrix { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::SizeMismatch("matrix rows must form a square".into()));
        }
        Ok(RationalMatrix { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Entry at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        let n = self.n;
        let mut entries = vec![Q::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if !b.is_zero() {
                        entries[i * n + j] += a * b;
                    }
                }
            }
        }
        RationalMatrix { n, entries }
    }

    /// Right multiplication by `x_i(t)`: adds `t` times column `i` to column `i+1`.
    fn mul_x(&mut self, i: usize, t: &Q) {
        if t.is_zero() {
            return;
        }
        let n = self.n;
        for row in 0..n {
            let v = &self.entries[row * n + (i - 1)] * t;
            self.entries[row * n + i] += v;
        }
    }

    pub fn is_unitriangular(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                let x = &self.entries[i * n + j];
                match i.cmp(&j) {
                    std::cmp::Ordering::Equal => x.is_one(),
                    std::cmp::Ordering::Greater => x.is_zero(),
                    std::cmp::Ordering::Less => true,
                }
            })
        })
    }

    /// Rank and determinant of the submatrix on the given 0-based rows/columns.
    fn sub_rank_det(&self, rows: &[usize], cols: &[usize]) -> (usize, Q) {
        let mut m: Vec<Vec<Q>> = rows.iter().map(|&r| cols.iter().map(|&c| self.entries[r * self.n + c].clone()).collect()).collect();
        let (h, w) = (rows.len(), cols.len());
        let mut det = Q::one();
        let mut rank = 0;
        for c in 0..w {
            let Some(p) = (rank..h).find(|&r| !m[r][c].is_zero()) else {
                det = Q::zero();
                continue;
            };
            if p != rank {
                m.swap(p, rank);
                det = -det;
            }
            let pivot = m[rank][c].clone();
            det *= &pivot;
            for r in rank + 1..h {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = &m[r][c] / &pivot;
                for k in c..w {
                    let v = &f * &m[rank][k];
                    m[r][k] -= v;
                }
            }
            rank += 1;
        }
        (rank, det)
    }

    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Q {
        self.sub_rank_det(rows, cols).1
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.entries[i * self.n + j].to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// `x_i(t)` of size `n`.
pub fn chevalley_x(n: usize, i: usize, t: Q) -> Result<RationalMatrix> {
    if i == 0 || i >= n {
        return Err(Error::LetterOutOfRange { letter: i, rank: n.saturating_sub(1) });
    }
    let mut m = RationalMatrix::identity(n);
    m.entries[(i - 1) * n + i] = t;
    Ok(m)
}

/// `x_{i_1}(t_1)···x_{i_d}(t_d)` of size `n`.
pub fn lusztig_eval(w: &Word, p: &[Q], n: usize) -> Result<RationalMatrix> {
    if w.len() != p.len() {
        return Err(Error::SizeMismatch(format!("word of length {} with {} parameters", w.len(), p.len())));
    }
    if let Some(&i) = w.letters().iter().find(|&&i| i == 0 || i >= n) {
        return Err(Error::LetterOutOfRange { letter: i, rank: n.saturating_sub(1) });
    }
    let mut m = RationalMatrix::identity(n);
    for (&i, t) in w.letters().iter().zip(p) {
        m.mul_x(i, t);
    }
    Ok(m)
}

/// Parameters for `x_i(t_1)x_j(t_2)x_i(t_3) = x_j(t_1')x_i(t_2')x_j(t_3')`.
pub fn braid3_transform(t1: &Q, t2: &Q, t3: &Q) -> Result<(Q, Q, Q)> {
    let s = t1 + t3;
    if s.is_zero() {
        return Err(Error::SingularBraid);
    }
    Ok((t2 * t3 / &s, s.clone(), t1 * t2 / &s))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// True iff every minor is nonnegative. Enumerates all minors, so it is only
/// meant for `n ≤ 6`.
pub fn is_tnn(m: &RationalMatrix) -> bool {
    (1..=m.n).all(|k| {
        let sets = subsets(m.n, k);
        sets.iter().all(|rows| sets.iter().all(|cols| !m.minor(rows, cols).is_negative()))
    })
}

/// The permutation `u` (one-line, 1-based) with `m ∈ B⁻uB⁻`, read off the
/// ranks of the northeast submatrices on rows `1..i`, columns `j..n`.
pub fn cell_of(m: &RationalMatrix) -> Result<Vec<usize>> {
    if !m.is_unitriangular() {
        return Err(Error::NotUnitriangular);
    }
    let n = m.n;
    // r[i][j] for i in 0..=n, j in 1..=n+1; zero on the borders
    let mut r = vec![vec![0usize; n + 2]; n + 1];
    for i in 1..=n {
        for j in 1..=n {
            let rows: Vec<usize> = (0..i).collect();
            let cols: Vec<usize> = (j - 1..n).collect();
            r[i][j] = m.sub_rank_det(&rows, &cols).0;
        }
    }
    let mut perm = vec![0; n];
    for i in 1..=n {
        for j in 1..=n {
            let p = r[i][j] + r[i - 1][j + 1];
            if p == r[i - 1][j] + r[i][j + 1] + 1 {
                perm[i - 1] = j;
            }
        }
    }
    Ok(perm)
}

/// A word for a permutation in one-line notation, using `s_i = (i, i+1)`.
pub fn permutation_word(perm: &[usize]) -> Word {
    let mut p = perm.to_vec();
    let mut letters = Vec::new();
    while let Some(i) = (0..p.len().saturating_sub(1)).find(|&i| p[i] > p[i + 1]) {
        p.swap(i, i + 1);
        letters.push(i + 1);
    }
    Word(letters)
}

/// [`cell_of`] as an element of the type-A system of rank `n − 1`.
pub fn cell_element(sys: &CoxeterSystem, m: &RationalMatrix) -> Result<GroupElement> {
    if !sys.is_type_a() || sys.rank() + 1 != m.n {
        return Err(Error::NotTypeA);
    }
    Ok(sys.evaluate(&permutation_word(&cell_of(m)?)))
}

/// Deterministic grid sampler: parameter tuples over `values` on a face's
/// support, enumerated in lexicographic order and thinned by a fixed stride
/// to at most `cap` points.
#[derive(Clone, Debug)]
pub struct Sampler {
    pub values: Vec<Q>,
    pub cap: usize,
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler { values: vec![q(1, 1), q(1, 2), q(2, 1), q(1, 3), q(3, 1)], cap: 25 }
    }
}

impl Sampler {
    /// Sample points (length `d`) with support exactly `face`.
    pub fn points(&self, face: Face, d: usize) -> Vec<Vec<Q>> {
        let pos = face.positions();
        let base = self.values.len();
        let total = base.checked_pow(pos.len() as u32).unwrap_or(usize::MAX);
        let stride = total.div_ceil(self.cap.max(1)).max(1);
        let mut out = Vec::new();
        let mut idx = 0usize;
        while idx < total && out.len() < self.cap {
            let mut p = vec![Q::zero(); d];
            let mut x = idx;
            for &k in pos.iter().rev() {
                p[k - 1] = self.values[x % base].clone();
                x /= base;
            }
            out.push(p);
            idx += stride;
        }
        out
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct StepFibers {
    pub index: usize,
    pub samples: usize,
    pub mismatches: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FiberReport {
    pub steps: Vec<StepFibers>,
    pub faces_checked: usize,
    pub cell_samples: usize,
    pub cell_mismatches: Vec<String>,
}

impl FiberReport {
    pub fn ok(&self) -> bool {
        self.cell_mismatches.is_empty() && self.steps.iter().all(|s| s.mismatches.is_empty())
    }
}

fn fmt_point(p: &[Q]) -> String {
    let v: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", v.join(","))
}

/// A token-labelled parameter state: `(token, letter, value)` per slot.
type State = Vec<(usize, usize, Q)>;

fn state_eval(s: &State, n: usize) -> RationalMatrix {
    let mut m = RationalMatrix::identity(n);
    for (_, i, t) in s {
        m.mul_x(*i, t);
    }
    m
}

fn slot(s: &State, token: usize) -> Option<usize> {
    s.iter().position(|&(t, _, _)| t == token)
}

/// Applies the non-nil moves of a script forwards or backwards. Moves on
/// absent tokens are skipped; commutations on adjacent tokens swap their
/// slots, long braids rewrite parameters in place.
fn run_moves(s: &mut State, moves: &[Move], backwards: bool) -> std::result::Result<(), String> {
    let order: Vec<&Move> = if backwards { moves.iter().rev().collect() } else { moves.iter().collect() };
    for mv in order {
        match mv {
            Move::Commutation { tokens: [x, y], .. } => {
                let (Some(i), Some(j)) = (slot(s, *x), slot(s, *y)) else { continue };
                if i.abs_diff(j) != 1 {
                    return Err(format!("tokens {x},{y} not adjacent"));
                }
                s.swap(i, j);
            }
            Move::LongBraid { tokens, letters: [a, b], .. } => {
                if tokens.len() != 3 {
                    return Err(format!("no parameter map for a braid of length {}", tokens.len()));
                }
                let i = slot(s, tokens[0]).ok_or("braid token missing")?;
                let (from, to) = if backwards { ([*b, *a, *b], [*a, *b, *a]) } else { ([*a, *b, *a], [*b, *a, *b]) };
                for k in 0..3 {
                    if s.get(i + k).map(|x| (x.0, x.1)) != Some((tokens[k], from[k])) {
                        return Err("braid window does not match".into());
                    }
                }
                let (u1, u2, u3) = braid3_transform(&s[i].2, &s[i + 1].2, &s[i + 2].2)
                    .map_err(|_| format!("singular braid at tokens {tokens:?}"))?;
                for (k, v) in [u1, u2, u3].into_iter().enumerate() {
                    s[i + k].1 = to[k];
                    s[i + k].2 = v;
                }
            }
            Move::ModifiedNil { .. } => {}
        }
    }
    Ok(())
}

fn to_point(s: &State, d: usize) -> Vec<Q> {
    let mut p = vec![Q::zero(); d];
    for (t, _, v) in s {
        p[t - 1] = v.clone();
    }
    p
}

fn support_of(p: &[Q]) -> Face {
    let pos: Vec<usize> = p.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, _)| k + 1).collect();
    Face::from_positions(&pos)
}

/// Checks one swept face `tau` of a step at one sample point: the two
/// endpoints of its level curve have the same image, lie on the two faces the
/// step identifies, and the forward script preserves the image.
fn check_point(
    base: &Word,
    n: usize,
    step: &crate::collapse::CollapseStep,
    tau: Face,
    p: &[Q],
) -> std::result::Result<(), String> {
    let d = base.len();
    let (l, r) = step.deletion_pair;
    let target = lusztig_eval(base, p, n).map_err(|e| e.to_string())?;
    let mut s: State = tau.positions().into_iter().map(|k| (k, base.at(k), p[k - 1].clone())).collect();
    let (nil, moves) = step.script.moves().split_last().ok_or("empty script")?;
    let Move::ModifiedNil { tokens: [a, b], .. } = nil else { return Err("script must end in a nil-move".into()) };
    run_moves(&mut s, moves, false)?;
    if state_eval(&s, n) != target {
        return Err(format!("script changes the image at {}", fmt_point(p)));
    }
    let (ia, ib) = (slot(&s, *a).ok_or("stutter token missing")?, slot(&s, *b).ok_or("right token missing")?);
    if ib != ia + 1 || s[ia].1 != s[ib].1 {
        return Err("nil-move tokens are not a stutter".into());
    }
    let sum = &s[ia].2 + &s[ib].2;
    let mut toward_a = s.clone();
    toward_a[ia].2 = sum.clone();
    toward_a[ib].2 = Q::zero();
    let mut toward_b = s;
    toward_b[ia].2 = Q::zero();
    toward_b[ib].2 = sum;
    for (mut end, face) in [(toward_a, tau.without(r)), (toward_b, tau.without(l))] {
        run_moves(&mut end, moves, true)?;
        let q = to_point(&end, d);
        if support_of(&q) != face {
            return Err(format!("endpoint {} of {} is not on {face}", fmt_point(&q), fmt_point(p)));
        }
        if lusztig_eval(base, &q, n).map_err(|e| e.to_string())? != target {
            return Err(format!("images differ at {} and {}", fmt_point(p), fmt_point(&q)));
        }
    }
    Ok(())
}

/// Samples every face swept by every step and checks the identified
/// endpoints numerically, then checks that every face's image lies in the
/// cell of its Demazure product.
pub fn verify_fibers(sys: &CoxeterSystem, trace: &CollapseTrace, sampler: &Sampler, exec: Exec) -> Result<FiberReport> {
    if !sys.is_type_a() {
        return Err(Error::NotTypeA);
    }
    let base = &trace.base;
    sys.check_word(base)?;
    let (n, d) = (sys.rank() + 1, base.len());
    let steps = exec.map(&trace.steps, |step| {
        let mut out = StepFibers { index: step.index, ..Default::default() };
        for tau in std::iter::once(step.collapsed_face).chain(step.also_collapsed.iter().copied()) {
            for p in sampler.points(tau, d) {
                out.samples += 1;
                if let Err(e) = check_point(base, n, step, tau, &p) {
                    out.mismatches.push(format!("face {tau}: {e}"));
                }
            }
        }
        out
    });
    let faces: Vec<Face> = (1..1u64 << d).map(Face::from_bits).collect();
    let cells = exec.map(&faces, |&f| {
        let letters: Vec<usize> = f.positions().iter().map(|&k| base.at(k)).collect();
        let want = hecke::demazure_word(sys, &letters);
        let mut bad = Vec::new();
        let pts = sampler.points(f, d);
        for p in &pts {
            let m = lusztig_eval(base, p, n).expect("sizes checked");
            match cell_element(sys, &m) {
                Ok(u) if u == want => {}
                Ok(u) => bad.push(format!("face {f} at {}: cell {} but Demazure {}", fmt_point(p), sys.label(&u), sys.label(&want))),
                Err(e) => bad.push(format!("face {f}: {e}")),
            }
        }
        (pts.len(), bad)
    });
    let mut report = FiberReport { steps, faces_checked: faces.len(), ..Default::default() };
    for (k, bad) in cells {
        report.cell_samples += k;
        report.cell_mismatches.extend(bad);
    }
    Ok(report)
}
