//! Finite posets with a rank function, Möbius values and the interval
//! conditions characterizing face posets of regular CW complexes.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;

/// A finite poset given by its cover relations and a rank function.
///
/// The rank function is not required to be compatible with the covers, so
/// that non-graded inputs can be diagnosed by [`check_cw_conditions`].
#[derive(Clone, Debug, Serialize)]
pub struct GradedPoset {
    labels: Vec<String>,
    ranks: Vec<usize>,
    covers: Vec<(usize, usize)>,
    #[serde(skip)]
    leq: Vec<bool>,
    #[serde(skip)]
    linear: Vec<usize>,
}

impl GradedPoset {
    /// Builds a poset from cover pairs `(lower, upper)`; the order is their
    /// reflexive-transitive closure. Covers implied by longer chains are dropped.
    pub fn new(labels: Vec<String>, ranks: Vec<usize>, covers: Vec<(usize, usize)>) -> Result<Self> {
        let n = labels.len();
        if ranks.len() != n {
            return Err(Error::InvalidPoset(format!("{} labels but {} ranks", n, ranks.len())));
        }
        let mut up = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in &covers {
            if a >= n || b >= n {
                return Err(Error::InvalidPoset(format!("cover ({a},{b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidPoset(format!("self-cover at {a}")));
            }
            up[a].push(b);
            indeg[b] += 1;
        }
        // Kahn's algorithm, smallest id first for determinism
        let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut linear = Vec::with_capacity(n);
        while let Some(&v) = ready.iter().next() {
            ready.remove(&v);
            linear.push(v);
            for &b in &up[v] {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    ready.insert(b);
                }
            }
        }
        if linear.len() != n {
            return Err(Error::InvalidPoset("cover relation has a cycle".into()));
        }
        let mut leq = vec![false; n * n];
        for &v in linear.iter().rev() {
            leq[v * n + v] = true;
            for &b in &up[v] {
                for x in 0..n {
                    if leq[b * n + x] {
                        leq[v * n + x] = true;
                    }
                }
            }
        }
        let mut p = GradedPoset { labels, ranks, covers: Vec::new(), leq, linear };
        p.covers = p.hasse();
        Ok(p)
    }

    /// Builds a poset from an arbitrary relation whose transitive closure is a
    /// partial order; covers are computed from the closure.
    pub fn from_relation(labels: Vec<String>, ranks: Vec<usize>, rel: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = labels.len();
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && rel(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        Self::new(labels, ranks, pairs)
    }

    fn hasse(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            // b covers a iff no earlier-found cover of a lies strictly below b
            let mut found: Vec<usize> = Vec::new();
            for &b in &self.linear {
                if self.lt(a, b) && !found.iter().any(|&c| self.lt(c, b)) {
                    found.push(b);
                }
            }
            found.sort_unstable();
            out.extend(found.into_iter().map(|b| (a, b)));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// A linear extension of the order.
    pub fn linear_extension(&self) -> &[usize] {
        &self.linear
    }

    /// Elements of the closed interval `[u, v]`.
    pub fn interval(&self, u: usize, v: usize) -> Vec<usize> {
        (0..self.len()).filter(|&z| self.leq(u, z) && self.leq(z, v)).collect()
    }

    /// The unique minimum, if any.
    pub fn bottom(&self) -> Option<usize> {
        (0..self.len()).find(|&b| (0..self.len()).all(|x| self.leq(b, x)))
    }

    /// Element ids keyed by label.
    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `μ(u, x)` for every `x`; `None` where `u ≰ x`.
    pub fn mobius_row(&self, u: usize) -> Vec<Option<i64>> {
        let n = self.len();
        let mut mu: Vec<Option<i64>> = vec![None; n];
        for &x in &self.linear {
            if !self.leq(u, x) {
                continue;
            }
            if x == u {
                mu[x] = Some(1);
                continue;
            }
            let s: i64 = (0..n).filter(|&z| z != x && self.leq(z, x)).filter_map(|z| mu[z]).sum();
            mu[x] = Some(-s);
        }
        mu
    }

    pub fn mobius(&self, u: usize, v: usize) -> Result<i64> {
        if u >= self.len() || v >= self.len() {
            return Err(Error::InvalidPoset(format!("element out of range: ({u},{v})")));
        }
        self.mobius_row(u)[v].ok_or(Error::Incomparable(u, v))
    }
}

/// Free-function form of [`GradedPoset::mobius`].
pub fn mobius(p: &GradedPoset, u: usize, v: usize) -> Result<i64> {
    p.mobius(u, v)
}

/// Outcome of one interval condition over all intervals of a poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalReport {
    pub condition: String,
    pub holds: bool,
    pub counterexamples: Vec<(usize, usize)>,
}

pub const CONDITIONS: [&str; 4] = ["graded", "thin", "eulerian", "connected"];

pub fn check_cw_conditions(p: &GradedPoset) -> Vec<IntervalReport> {
    check_cw_conditions_with(p, Exec::default())
}

/// Checks gradedness, thinness of rank-2 intervals, the Eulerian property
/// `μ(u, v) = (-1)^{rk v − rk u}` and connectivity of open intervals of
/// length greater than 2.
pub fn check_cw_conditions_with(p: &GradedPoset, exec: Exec) -> Vec<IntervalReport> {
    let ids: Vec<usize> = (0..p.len()).collect();
    let rows: Vec<[Vec<(usize, usize)>; 4]> = exec.map(&ids, |&u| interval_row(p, u));
    let mut found: [Vec<(usize, usize)>; 4] = Default::default();
    for row in rows {
        for (k, v) in row.into_iter().enumerate() {
            found[k].extend(v);
        }
    }
    CONDITIONS
        .iter()
        .zip(found)
        .map(|(c, counterexamples)| IntervalReport {
            condition: c.to_string(),
            holds: counterexamples.is_empty(),
            counterexamples,
        })
        .collect()
}

fn interval_row(p: &GradedPoset, u: usize) -> [Vec<(usize, usize)>; 4] {
    let mut graded = Vec::new();
    let mut thin = Vec::new();
    let mut eulerian = Vec::new();
    let mut connected = Vec::new();
    let mu = p.mobius_row(u);
    for v in 0..p.len() {
        let Some(m) = mu[v] else { continue };
        let (ru, rv) = (p.rank(u), p.rank(v));
        if p.covers().binary_search(&(u, v)).is_ok() && rv != ru + 1 {
            graded.push((u, v));
        }
        let gap = rv as i64 - ru as i64;
        if gap == 2 && p.interval(u, v).len() != 4 {
            thin.push((u, v));
        }
        let sign = if gap.rem_euclid(2) == 0 { 1 } else { -1 };
        if gap < 0 || m != sign {
            eulerian.push((u, v));
        }
        if gap > 2 && !open_interval_connected(p, u, v) {
            connected.push((u, v));
        }
    }
    [graded, thin, eulerian, connected]
}

fn open_interval_connected(p: &GradedPoset, u: usize, v: usize) -> bool {
    let inside: Vec<usize> = p.interval(u, v).into_iter().filter(|&z| z != u && z != v).collect();
    let Some(&start) = inside.first() else { return true };
    let mut seen = vec![false; p.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let mut reached = 1;
    while let Some(x) = queue.pop_front() {
        for &y in &inside {
            if !seen[y] && (p.covers().binary_search(&(x, y)).is_ok() || p.covers().binary_search(&(y, x)).is_ok()) {
                seen[y] = true;
                reached += 1;
                queue.push_back(y);
            }
        }
    }
    reached == inside.len()
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Hasse diagram in DOT, one `rank=same` group per rank. `labels` overrides
/// the poset's own labels.
pub fn export_dot(p: &GradedPoset, labels: Option<&[String]>) -> String {
    let labels = labels.unwrap_or(p.labels());
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    let max_rank = (0..p.len()).map(|i| p.rank(i)).max();
    if let Some(max_rank) = max_rank {
        for r in 0..=max_rank {
            let ids: Vec<usize> = (0..p.len()).filter(|&i| p.rank(i) == r).collect();
            if ids.is_empty() {
                continue;
            }
            let _ = write!(out, "  {{ rank=same;");
            for i in &ids {
                let _ = write!(out, " n{i};");
            }
            out.push_str(" }\n");
        }
    }
    for i in 0..p.len() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", dot_escape(&labels[i]));
    }
    for &(a, b) in p.covers() {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}
