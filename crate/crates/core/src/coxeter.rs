//! Exact arithmetic for finite crystallographic Coxeter groups.
//!
//! Group elements are integer matrices acting on the simple-root basis of the
//! root lattice: column `j` of an element's matrix holds the coordinates of
//! `w(α_j)`. Two elements are equal iff their matrices are equal, so matrices
//! double as canonical normal forms.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::GradedPoset;

/// Positive-root enumeration stops here and reports an infinite group.
const MAX_POSITIVE_ROOTS: usize = 4096;

/// A word `(i_1, ..., i_d)` of 1-based generator indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The letter at 1-based position `pos`.
    pub fn at(&self, pos: usize) -> usize {
        self.0[pos - 1]
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses comma-separated 1-based indices; the empty string is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(Word::default());
        }
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad letter {t:?} in word {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// An element of `W` with its cached Coxeter length.
#[derive(Clone, Debug)]
pub struct GroupElement {
    system: u64,
    rank: usize,
    matrix: Vec<i64>,
    length: usize,
}

impl GroupElement {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Row-major `rank × rank` matrix in the simple-root basis.
    pub fn matrix(&self) -> &[i64] {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    /// Coordinates of `w(α_i)` for a 1-based generator index.
    fn image_of_simple(&self, i: usize) -> impl Iterator<Item = i64> + '_ {
        let n = self.rank;
        (0..n).map(move |row| self.matrix[row * n + (i - 1)])
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.system == other.system && self.matrix == other.matrix
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.system.hash(state);
        self.matrix.hash(state);
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Deterministic total order: by length, then by matrix entries.
impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.length, &self.matrix).cmp(&(other.length, &other.matrix))
    }
}

/// A finite crystallographic Coxeter system `(W, S)`.
#[derive(Clone, Debug)]
pub struct CoxeterSystem {
    name: String,
    rank: usize,
    coxeter: Vec<u32>,
    cartan: Vec<i64>,
    positive_roots: Vec<Vec<i64>>,
    fingerprint: u64,
}

fn coxeter_from_product(p: i64) -> Option<u32> {
    match p {
        0 => Some(2),
        1 => Some(3),
        2 => Some(4),
        3 => Some(6),
        _ => None,
    }
}

impl CoxeterSystem {
    /// Builds a named type such as `A3`, `B3`, `D4`, `E6`, `F4` or `G2`.
    pub fn named(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let mut chars = spec.chars();
        let family = chars
            .next()
            .ok_or_else(|| Error::UnknownType(spec.to_string()))?
            .to_ascii_uppercase();
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::UnknownType(spec.to_string()))?;
        Self::from_type(family, rank)
    }

    /// Builds the standard Cartan matrix for a family letter and rank.
    pub fn from_type(family: char, rank: usize) -> Result<Self> {
        let family = family.to_ascii_uppercase();
        let bad = || Error::UnknownType(format!("{family}{rank}"));
        let valid = match family {
            'A' => rank >= 1,
            'B' | 'C' => rank >= 2,
            'D' => rank >= 4,
            'E' => (6..=8).contains(&rank),
            'F' => rank == 4,
            'G' => rank == 2,
            _ => false,
        };
        if !valid {
            return Err(bad());
        }
        let n = rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
            a[i - 1][j - 1] = aij;
            a[j - 1][i - 1] = aji;
        };
        match family {
            'A' => (1..n).for_each(|i| link(i, i + 1, -1, -1)),
            'B' => {
                (1..n - 1).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 1, n, -1, -2);
            }
            'C' => {
                (1..n - 1).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 1, n, -2, -1);
            }
            'D' => {
                (1..n - 1).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 2, n, -1, -1);
            }
            'E' => {
                link(1, 3, -1, -1);
                link(2, 4, -1, -1);
                (3..n).for_each(|i| link(i, i + 1, -1, -1));
            }
            'F' => {
                link(1, 2, -1, -1);
                link(2, 3, -1, -2);
                link(3, 4, -1, -1);
            }
            'G' => link(1, 2, -1, -3),
            _ => unreachable!(),
        }
        Self::from_cartan(&format!("{family}{rank}"), a)
    }

    /// Builds a system from an explicit Cartan matrix.
    pub fn from_cartan(name: &str, cartan: Vec<Vec<i64>>) -> Result<Self> {
        let n = cartan.len();
        if n == 0 {
            return Err(Error::BadCartan("empty matrix".into()));
        }
        let mut coxeter = vec![1u32; n * n];
        for i in 0..n {
            if cartan[i].len() != n {
                return Err(Error::BadCartan(format!("row {} has wrong length", i + 1)));
            }
            if cartan[i][i] != 2 {
                return Err(Error::BadCartan(format!("a({0},{0}) must be 2", i + 1)));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (aij, aji) = (cartan[i][j], cartan[j][i]);
                if aij > 0 || (aij == 0) != (aji == 0) {
                    return Err(Error::BadCartan(format!("bad entries at ({},{})", i + 1, j + 1)));
                }
                coxeter[i * n + j] = coxeter_from_product(aij * aji)
                    .ok_or_else(|| Error::BadCartan(format!("a({0},{1})·a({1},{0}) > 3", i + 1, j + 1)))?;
            }
        }
        let flat: Vec<i64> = cartan.into_iter().flatten().collect();
        Self::assemble(name.to_string(), n, coxeter, flat)
    }

    /// Builds a system from a Coxeter matrix, choosing a crystallographic
    /// Cartan realization (the longer-root side of a multiple bond is the
    /// lower index).
    pub fn from_coxeter_matrix(m: &[Vec<u32>]) -> Result<Self> {
        let n = m.len();
        if n == 0 {
            return Err(Error::Parse("empty Coxeter matrix".into()));
        }
        for (i, row) in m.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse(format!("row {} has {} entries, expected {n}", i + 1, row.len())));
            }
        }
        let mut cartan = vec![0i64; n * n];
        for i in 0..n {
            if m[i][i] != 1 {
                return Err(Error::BadDiagonal(i + 1));
            }
            cartan[i * n + i] = 2;
            for j in 0..n {
                if i == j {
                    continue;
                }
                if m[i][j] != m[j][i] {
                    return Err(Error::Asymmetric { i: i + 1, j: j + 1 });
                }
                let (near, far) = match m[i][j] {
                    2 => (0, 0),
                    3 => (-1, -1),
                    4 => (-2, -1),
                    6 => (-3, -1),
                    other => return Err(Error::NonCrystallographic { i: i + 1, j: j + 1, m: other }),
                };
                cartan[i * n + j] = if i < j { near } else { far };
            }
        }
        let coxeter: Vec<u32> = m.iter().flatten().copied().collect();
        Self::assemble(format!("matrix{n}"), n, coxeter, cartan)
    }

    /// Parses the plain-text Coxeter matrix format: first line `n`, then `n`
    /// whitespace-separated rows. `inf` or `0` denotes an infinite bond.
    pub fn parse_matrix_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("missing rank line".into()))?
            .parse()
            .map_err(|_| Error::Parse("first line must be the rank".into()))?;
        let mut rows = Vec::with_capacity(n);
        for r in 0..n {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {}", r + 1)))?;
            let row = line
                .split_whitespace()
                .map(|t| match t {
                    "inf" | "∞" => Ok(0),
                    _ => t.parse::<u32>().map_err(|_| Error::Parse(format!("bad entry {t:?}"))),
                })
                .collect::<Result<Vec<u32>>>()?;
            rows.push(row);
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing rows after matrix".into()));
        }
        Self::from_coxeter_matrix(&rows)
    }

    fn assemble(name: String, rank: usize, coxeter: Vec<u32>, cartan: Vec<i64>) -> Result<Self> {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        cartan.hash(&mut h);
        let mut sys = CoxeterSystem {
            name,
            rank,
            coxeter,
            cartan,
            positive_roots: Vec::new(),
            fingerprint: h.finish(),
        };
        sys.positive_roots = sys.enumerate_positive_roots()?;
        Ok(sys)
    }

    fn enumerate_positive_roots(&self) -> Result<Vec<Vec<i64>>> {
        let n = self.rank;
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        let mut roots = Vec::new();
        while let Some(beta) = queue.pop_front() {
            for i in 0..n {
                // s_i permutes the positive roots other than α_i
                if beta.iter().enumerate().all(|(k, &c)| if k == i { c == 1 } else { c == 0 }) {
                    continue;
                }
                let pairing: i64 = (0..n).map(|j| self.cartan[i * n + j] * beta[j]).sum();
                let mut gamma = beta.clone();
                gamma[i] -= pairing;
                if gamma.iter().any(|&c| c < 0) {
                    return Err(Error::InfiniteGroup(MAX_POSITIVE_ROOTS));
                }
                if seen.insert(gamma.clone()) {
                    if seen.len() > MAX_POSITIVE_ROOTS {
                        return Err(Error::InfiniteGroup(MAX_POSITIVE_ROOTS));
                    }
                    queue.push_back(gamma);
                }
            }
            roots.push(beta);
        }
        roots.sort();
        Ok(roots)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `m(i, j)` for 1-based indices.
    pub fn m(&self, i: usize, j: usize) -> u32 {
        self.coxeter[(i - 1) * self.rank + (j - 1)]
    }

    /// `a(i, j)` for 1-based indices.
    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        self.cartan[(i - 1) * self.rank + (j - 1)]
    }

    pub fn coxeter_matrix(&self) -> Vec<Vec<u32>> {
        self.coxeter.chunks(self.rank).map(<[u32]>::to_vec).collect()
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// True iff the Cartan matrix is the standard type `A_n` one.
    pub fn is_type_a(&self) -> bool {
        let n = self.rank;
        (1..=n).all(|i| {
            (1..=n).all(|j| {
                let expect = match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                };
                self.cartan(i, j) == expect
            })
        })
    }

    pub fn check_letter(&self, letter: usize) -> Result<()> {
        if letter == 0 || letter > self.rank {
            return Err(Error::LetterOutOfRange { letter, rank: self.rank });
        }
        Ok(())
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        w.letters().iter().try_for_each(|&l| self.check_letter(l))
    }

    fn check_same(&self, w: &GroupElement) -> Result<()> {
        if w.system != self.fingerprint {
            return Err(Error::MixedSystems);
        }
        Ok(())
    }

    pub fn identity(&self) -> GroupElement {
        let n = self.rank;
        let mut matrix = vec![0; n * n];
        for i in 0..n {
            matrix[i * n + i] = 1;
        }
        GroupElement { system: self.fingerprint, rank: n, matrix, length: 0 }
    }

    pub fn generator(&self, i: usize) -> Result<GroupElement> {
        self.check_letter(i)?;
        Ok(self.mul_generator(&self.identity(), i))
    }

    /// True iff `ℓ(w s_i) < ℓ(w)`, i.e. `w(α_i)` is a negative root.
    pub fn has_right_descent(&self, w: &GroupElement, i: usize) -> bool {
        w.image_of_simple(i).any(|c| c < 0)
    }

    pub fn has_left_descent(&self, w: &GroupElement, i: usize) -> bool {
        self.has_right_descent(&self.inverse(w), i)
    }

    /// `w · s_i`, with the length updated by the descent test.
    pub fn mul_generator(&self, w: &GroupElement, i: usize) -> GroupElement {
        let n = self.rank;
        let down = self.has_right_descent(w, i);
        let mut matrix = w.matrix.clone();
        // column j of w s_i is w(α_j) - a(i,j) w(α_i)
        for j in 0..n {
            let a = self.cartan[(i - 1) * n + j];
            if a == 0 || j == i - 1 {
                continue;
            }
            for row in 0..n {
                matrix[row * n + j] -= a * w.matrix[row * n + (i - 1)];
            }
        }
        for row in 0..n {
            matrix[row * n + (i - 1)] = -w.matrix[row * n + (i - 1)];
        }
        let length = if down { w.length - 1 } else { w.length + 1 };
        GroupElement { system: self.fingerprint, rank: n, matrix, length }
    }

    /// Number of positive roots sent to negative roots.
    pub fn inversion_count(&self, matrix: &[i64]) -> usize {
        let n = self.rank;
        self.positive_roots
            .iter()
            .filter(|beta| (0..n).any(|row| (0..n).map(|k| matrix[row * n + k] * beta[k]).sum::<i64>() < 0))
            .count()
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_same(a)?;
        self.check_same(b)?;
        let n = self.rank;
        let mut matrix = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a.matrix[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    matrix[i * n + j] += x * b.matrix[k * n + j];
                }
            }
        }
        let length = self.inversion_count(&matrix);
        Ok(GroupElement { system: self.fingerprint, rank: n, matrix, length })
    }

    pub fn inverse(&self, w: &GroupElement) -> GroupElement {
        self.evaluate(&self.reduced_word(w).reversed())
    }

    /// A reduced word for `w`: repeatedly strips the smallest right descent.
    pub fn reduced_word(&self, w: &GroupElement) -> Word {
        let mut letters = Vec::with_capacity(w.length);
        let mut cur = w.clone();
        while cur.length > 0 {
            let i = (1..=self.rank)
                .find(|&i| self.has_right_descent(&cur, i))
                .expect("nonidentity element has a right descent");
            letters.push(i);
            cur = self.mul_generator(&cur, i);
        }
        letters.reverse();
        Word(letters)
    }

    /// `s1s2s1`-style label; `e` for the identity.
    pub fn label(&self, w: &GroupElement) -> String {
        if w.is_identity() {
            return "e".into();
        }
        self.reduced_word(w).letters().iter().map(|i| format!("s{i}")).collect()
    }

    /// Evaluates `s_{i_1} ··· s_{i_d}`; assumes letters are in range.
    pub fn evaluate(&self, w: &Word) -> GroupElement {
        w.letters().iter().fold(self.identity(), |acc, &i| self.mul_generator(&acc, i))
    }

    /// Product of the word plus its reducedness, by positive-root tracking:
    /// the word is reduced iff no prefix sends the next simple root negative.
    pub fn evaluate_word(&self, w: &Word) -> Result<(GroupElement, bool)> {
        self.check_word(w)?;
        let mut acc = self.identity();
        let mut reduced = true;
        for &i in w.letters() {
            if self.has_right_descent(&acc, i) {
                reduced = false;
            }
            acc = self.mul_generator(&acc, i);
        }
        Ok((acc, reduced))
    }

    pub fn is_reduced(&self, w: &Word) -> Result<bool> {
        Ok(self.evaluate_word(w)?.1)
    }

    /// The reflections `R(x_{i_j}) = s_{i_1}···s_{i_{j-1}} s_{i_j} s_{i_{j-1}}···s_{i_1}`.
    ///
    /// Prefixes are taken in the 0-Hecke sense. A position whose letter is
    /// absorbed inherits the reflection of the largest `j' < j` with
    /// `s_{i_{j'}}···s_{i_{j-1}} = s_{i_{j'+1}}···s_{i_j}`.
    pub fn prefix_reflections(&self, w: &Word) -> Result<Vec<GroupElement>> {
        self.check_word(w)?;
        let letters = w.letters();
        let mut out: Vec<GroupElement> = Vec::with_capacity(letters.len());
        let mut prefix = self.identity();
        for (j, &i) in letters.iter().enumerate() {
            if !self.has_right_descent(&prefix, i) {
                let conj = self.mul_generator(&prefix, i);
                out.push(self.multiply(&conj, &self.inverse(&prefix))?);
                prefix = conj;
                continue;
            }
            let jp = (0..j)
                .rev()
                .find(|&jp| {
                    self.evaluate(&Word(letters[jp..j].to_vec())) == self.evaluate(&Word(letters[jp + 1..=j].to_vec()))
                })
                .ok_or(Error::UnresolvedReflection(j + 1))?;
            out.push(out[jp].clone());
        }
        Ok(out)
    }

    /// Bruhat order by the subword criterion, scanning a fixed reduced word of
    /// `w` from the right: strip each letter from `u` when it is a right descent.
    pub fn bruhat_leq(&self, u: &GroupElement, w: &GroupElement) -> Result<bool> {
        self.check_same(u)?;
        self.check_same(w)?;
        Ok(self.bruhat_leq_along(u, &self.reduced_word(w)))
    }

    /// Same test against a caller-chosen reduced word for the upper element.
    pub fn bruhat_leq_along(&self, u: &GroupElement, reduced_upper: &Word) -> bool {
        if u.length > reduced_upper.len() {
            return false;
        }
        let mut cur = u.clone();
        for &i in reduced_upper.letters().iter().rev() {
            if self.has_right_descent(&cur, i) {
                cur = self.mul_generator(&cur, i);
            }
        }
        cur.is_identity()
    }

    /// All elements `z ≤ w`, sorted.
    pub fn lower_interval(&self, w: &GroupElement) -> Vec<GroupElement> {
        let mut set: HashSet<GroupElement> = HashSet::from([self.identity()]);
        for &i in self.reduced_word(w).letters() {
            let extra: Vec<GroupElement> = set.iter().map(|z| self.mul_generator(z, i)).collect();
            set.extend(extra);
        }
        let mut v: Vec<GroupElement> = set.into_iter().collect();
        v.sort();
        v
    }

    /// The closed interval `[u, w]`, ranked by `ℓ(·) − ℓ(u)`.
    pub fn bruhat_interval(&self, u: &GroupElement, w: &GroupElement) -> Result<BruhatInterval> {
        if !self.bruhat_leq(u, w)? {
            return Err(Error::NotBelow);
        }
        let elements: Vec<GroupElement> = self
            .lower_interval(w)
            .into_iter()
            .filter(|z| self.bruhat_leq(u, z).unwrap_or(false))
            .collect();
        let reduced: Vec<Word> = elements.iter().map(|z| self.reduced_word(z)).collect();
        let mut covers = Vec::new();
        for (a, za) in elements.iter().enumerate() {
            for (b, zb) in elements.iter().enumerate() {
                if zb.length == za.length + 1 && self.bruhat_leq_along(za, &reduced[b]) {
                    covers.push((a, b));
                }
            }
        }
        let labels = elements.iter().map(|z| self.label(z)).collect();
        let ranks = elements.iter().map(|z| z.length - u.length).collect();
        let poset = GradedPoset::new(labels, ranks, covers)?;
        Ok(BruhatInterval { elements, poset })
    }

    /// Every element of `W`, sorted by length then matrix.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut seen: HashSet<GroupElement> = HashSet::from([self.identity()]);
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(w) = queue.pop_front() {
            for i in 1..=self.rank {
                let v = self.mul_generator(&w, i);
                if seen.insert(v.clone()) {
                    queue.push_back(v);
                }
            }
        }
        let mut v: Vec<GroupElement> = seen.into_iter().collect();
        v.sort();
        v
    }

    /// The longest element `w_0`: grow by ascents until none remain.
    pub fn longest_element(&self) -> GroupElement {
        let mut w = self.identity();
        while let Some(i) = (1..=self.rank).find(|&i| !self.has_right_descent(&w, i)) {
            w = self.mul_generator(&w, i);
        }
        w
    }

    /// All reduced words of `w`, in lexicographic order.
    pub fn reduced_words(&self, w: &GroupElement) -> Vec<Word> {
        fn go(sys: &CoxeterSystem, w: &GroupElement, memo: &mut HashMap<GroupElement, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
            if w.is_identity() {
                return vec![vec![]];
            }
            if let Some(v) = memo.get(w) {
                return v.clone();
            }
            let mut out = Vec::new();
            for i in 1..=sys.rank {
                if sys.has_right_descent(w, i) {
                    let shorter = sys.mul_generator(w, i);
                    for mut prefix in go(sys, &shorter, memo) {
                        prefix.push(i);
                        out.push(prefix);
                    }
                }
            }
            memo.insert(w.clone(), out.clone());
            out
        }
        let mut words: Vec<Word> = go(self, w, &mut HashMap::new()).into_iter().map(Word).collect();
        words.sort();
        words
    }
}

/// A Bruhat interval together with the group elements behind its poset ids.
#[derive(Clone, Debug)]
pub struct BruhatInterval {
    pub elements: Vec<GroupElement>,
    pub poset: GradedPoset,
}

impl BruhatInterval {
    pub fn index_of(&self, z: &GroupElement) -> Option<usize> {
        self.elements.iter().position(|x| x == z)
    }
}
