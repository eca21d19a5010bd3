//! ε-approximations of a set system under a probability measure on its columns.
//!
//! Everything is exact: measures are rational, errors are rational, and the
//! hot search loop compares integers after scaling by a common denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::distributions::WeightedIndex;
use rand::prelude::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitRow;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::setsystem::{sorted_distinct, SetSystem};

/// Upper bound on the number of multisets the exhaustive phase may visit.
pub const EXHAUSTIVE_CUTOFF: u128 = 2_000_000;

/// Upper bound on the number of multisets the brute-force oracle may visit.
pub const ORACLE_CUTOFF: u128 = 300_000;

const SAMPLES_PER_SIZE: usize = 64;

/// A probability measure on the columns of a system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Measure {
    weights: Vec<Rational>,
}

impl Measure {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::input("a measure needs at least one point"));
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::input("measure weights must be nonnegative"));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::input(format!(
                "measure weights sum to {}, expected 1",
                rational::format(&total)
            )));
        }
        Ok(Measure { weights })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        Measure {
            weights: vec![rational::ratio(1, n as i64); n],
        }
    }

    pub fn point_mass(n: usize, at: usize) -> Self {
        assert!(at < n);
        let mut weights = vec![Rational::zero(); n];
        weights[at] = Rational::one();
        Measure { weights }
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Indices with positive weight.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.weights[i].is_positive()).collect()
    }

    /// Measure of the set whose indicator is `set`.
    pub fn of_set(&self, set: &BitRow) -> Rational {
        set.ones_iter().map(|i| &self.weights[i]).sum()
    }
}

impl TryFrom<Vec<String>> for Measure {
    type Error = Error;

    fn try_from(v: Vec<String>) -> Result<Self> {
        Measure::new(v.iter().map(|s| rational::parse(s)).collect::<Result<_>>()?)
    }
}

impl From<Measure> for Vec<String> {
    fn from(m: Measure) -> Self {
        m.weights.iter().map(rational::format).collect()
    }
}

/// A finite multiset of indices, stored as sorted `(index, count)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, u64)>", into = "Vec<(usize, u64)>")]
pub struct Multiset {
    pairs: Vec<(usize, u64)>,
}

impl Multiset {
    /// Merges repeated indices and drops zero counts. The result must be nonempty.
    pub fn new(mut pairs: Vec<(usize, u64)>) -> Result<Self> {
        pairs.sort_unstable();
        let mut merged: Vec<(usize, u64)> = Vec::with_capacity(pairs.len());
        for (i, c) in pairs {
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 += c,
                _ => merged.push((i, c)),
            }
        }
        merged.retain(|&(_, c)| c > 0);
        if merged.is_empty() {
            return Err(Error::input("multiset must have total count at least 1"));
        }
        Ok(Multiset { pairs: merged })
    }

    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        Multiset::new(counts.iter().copied().enumerate().collect())
    }

    /// One copy of every index `0..n`.
    pub fn each_once(n: usize) -> Self {
        Multiset::new((0..n).map(|i| (i, 1)).collect()).expect("n > 0")
    }

    pub fn pairs(&self) -> &[(usize, u64)] {
        &self.pairs
    }

    pub fn size(&self) -> u64 {
        self.pairs.iter().map(|&(_, c)| c).sum()
    }

    pub fn support(&self) -> Vec<usize> {
        self.pairs.iter().map(|&(i, _)| i).collect()
    }

    pub fn max_index(&self) -> usize {
        self.pairs.last().map(|&(i, _)| i).unwrap_or(0)
    }

    /// Number of elements (with multiplicity) inside `set`.
    pub fn count_in(&self, set: &BitRow) -> u64 {
        self.pairs
            .iter()
            .filter(|&&(i, _)| set.get(i))
            .map(|&(_, c)| c)
            .sum()
    }

    /// Relabels every index through `map`.
    pub fn remap(&self, map: &[usize]) -> Multiset {
        Multiset::new(self.pairs.iter().map(|&(i, c)| (map[i], c)).collect())
            .expect("remapping keeps the multiset nonempty")
    }
}

impl TryFrom<Vec<(usize, u64)>> for Multiset {
    type Error = Error;

    fn try_from(v: Vec<(usize, u64)>) -> Result<Self> {
        Multiset::new(v)
    }
}

impl From<Multiset> for Vec<(usize, u64)> {
    fn from(m: Multiset) -> Self {
        m.pairs
    }
}

/// `|mu(set) - |Y ∩ set| / |Y||`.
pub fn deviation(mu: &Measure, y: &Multiset, set: &BitRow) -> Rational {
    let freq = Rational::new(BigInt::from(y.count_in(set)), BigInt::from(y.size()));
    (mu.of_set(set) - freq).abs()
}

fn check_shapes(s: &SetSystem, mu: &Measure, y: Option<&Multiset>) -> Result<()> {
    if mu.len() != s.n_columns() {
        return Err(Error::input(format!(
            "measure has {} weights for {} columns",
            mu.len(),
            s.n_columns()
        )));
    }
    if let Some(y) = y {
        if y.max_index() >= s.n_columns() {
            return Err(Error::input(format!(
                "multiset index {} out of range",
                y.max_index()
            )));
        }
    }
    Ok(())
}

/// Largest deviation over all rows of `s`, treating each row as a set of columns.
pub fn approx_error(s: &SetSystem, mu: &Measure, y: &Multiset) -> Result<Rational> {
    check_shapes(s, mu, Some(y))?;
    Ok(s.rows()
        .iter()
        .map(|r| deviation(mu, y, r))
        .max()
        .expect("systems have at least one row"))
}

/// Finds a multiset `Y` of size at most `budget` with `approx_error <= eps`.
///
/// Sizes are tried in increasing order exhaustively while the cumulative
/// number of candidates stays under [`EXHAUSTIVE_CUTOFF`]; beyond that, sizes
/// double up to `budget` and each size tries a largest-remainder rounding of
/// `mu` followed by seeded i.i.d. samples. Every returned multiset has been
/// checked exactly.
pub fn find_approximation(
    s: &SetSystem,
    mu: &Measure,
    eps: &Rational,
    budget: usize,
    seed: u64,
) -> Result<Multiset> {
    check_shapes(s, mu, None)?;
    if !rational::in_unit_interval(eps) {
        return Err(Error::input("eps must lie in [0, 1]"));
    }
    if budget == 0 {
        return Err(Error::input("budget must be at least 1"));
    }
    let search = Search::new(s, mu, eps, budget);

    let cols = s.n_columns() as u128;
    let mut visited: u128 = 0;
    let mut next_size = 1usize;
    while next_size <= budget {
        let space = multichoose(cols, next_size as u128);
        if visited.saturating_add(space) > EXHAUSTIVE_CUTOFF {
            break;
        }
        visited += space;
        if let Some(counts) = search.exhaustive(next_size) {
            return verified(s, mu, eps, &counts);
        }
        next_size += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = mu.weights().iter().map(rational::to_f64).collect();
    let sampler = WeightedIndex::new(&weights).ok();
    let mut size = next_size;
    while size <= budget {
        let rounded = largest_remainder(mu, size);
        if search.accepts(&rounded) {
            return verified(s, mu, eps, &rounded);
        }
        if let Some(sampler) = &sampler {
            for _ in 0..SAMPLES_PER_SIZE {
                let mut counts = vec![0u64; s.n_columns()];
                for _ in 0..size {
                    counts[sampler.sample(&mut rng)] += 1;
                }
                if search.accepts(&counts) {
                    return verified(s, mu, eps, &counts);
                }
            }
        }
        if size == budget {
            break;
        }
        size = (size * 2).min(budget);
    }
    Err(Error::NotFound { budget })
}

/// Re-checks an accepted count vector with the plain exact evaluator.
fn verified(s: &SetSystem, mu: &Measure, eps: &Rational, counts: &[u64]) -> Result<Multiset> {
    let y = Multiset::from_counts(counts)?;
    let err = approx_error(s, mu, &y)?;
    if &err > eps {
        return Err(Error::internal(format!(
            "search accepted a multiset with error {}",
            rational::format(&err)
        )));
    }
    Ok(y)
}

/// Exact minimum size of an ε-approximation, by brute-force enumeration of
/// every count vector. Independent of [`find_approximation`]'s search path.
pub fn min_approximation_size(s: &SetSystem, mu: &Measure, eps: &Rational) -> Result<usize> {
    check_shapes(s, mu, None)?;
    if !rational::in_unit_interval(eps) {
        return Err(Error::input("eps must lie in [0, 1]"));
    }
    let cols = s.n_columns();
    let mut visited: u128 = 0;
    for n in 1usize.. {
        visited = visited.saturating_add(multichoose(cols as u128, n as u128));
        if visited > ORACLE_CUTOFF {
            return Err(Error::Refused(format!(
                "more than {ORACLE_CUTOFF} candidate multisets over {cols} points"
            )));
        }
        let mut counts = vec![0u64; cols];
        if compositions(&mut counts, 0, n as u64, &mut |c| {
            let y = Multiset::from_counts(c).expect("size n >= 1");
            approx_error(s, mu, &y).expect("shapes checked") <= *eps
        }) {
            return Ok(n);
        }
    }
    unreachable!()
}

fn compositions(counts: &mut [u64], at: usize, left: u64, f: &mut dyn FnMut(&[u64]) -> bool) -> bool {
    if at + 1 == counts.len() {
        counts[at] = left;
        let hit = f(counts);
        counts[at] = 0;
        return hit;
    }
    for c in (0..=left).rev() {
        counts[at] = c;
        if compositions(counts, at + 1, left - c, f) {
            counts[at] = 0;
            return true;
        }
    }
    counts[at] = 0;
    false
}

/// `C(n + k - 1, k)`, saturating.
pub(crate) fn multichoose(n: u128, k: u128) -> u128 {
    if n == 0 {
        return if k == 0 { 1 } else { 0 };
    }
    binomial(n + k - 1, k)
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn largest_remainder(mu: &Measure, n: usize) -> Vec<u64> {
    let n_big = Rational::from_integer(BigInt::from(n));
    let mut counts = Vec::with_capacity(mu.len());
    let mut rems = Vec::with_capacity(mu.len());
    for (i, w) in mu.weights().iter().enumerate() {
        let q = w * &n_big;
        let fl = q.floor();
        counts.push(fl.to_integer().to_u64().unwrap_or(0));
        rems.push((q - fl, i));
    }
    let assigned: u64 = counts.iter().sum();
    let mut missing = (n as u64).saturating_sub(assigned);
    rems.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for (_, i) in rems {
        if missing == 0 {
            break;
        }
        counts[i] += 1;
        missing -= 1;
    }
    counts
}

enum Checker {
    /// All quantities scaled by the common denominator `d`: a row passes iff
    /// `|w_row * n - count_row * d| <= e * n`.
    Scaled { d: i128, e: i128, w: Vec<i128> },
    Exact { eps: Rational, w: Vec<Rational> },
}

impl Checker {
    fn ok(&self, row_counts: &[i64], n: i64) -> bool {
        match self {
            Checker::Scaled { d, e, w } => {
                let n = n as i128;
                let bound = e * n;
                w.iter()
                    .zip(row_counts)
                    .all(|(&wr, &c)| (wr * n - c as i128 * d).abs() <= bound)
            }
            Checker::Exact { eps, w } => {
                let n = BigInt::from(n);
                w.iter().zip(row_counts).all(|(wr, &c)| {
                    let freq = Rational::new(BigInt::from(c), n.clone());
                    (wr - freq).abs() <= *eps
                })
            }
        }
    }
}

struct Search {
    n_cols: usize,
    n_rows: usize,
    col_rows: Vec<Vec<usize>>,
    checker: Checker,
}

impl Search {
    fn new(s: &SetSystem, mu: &Measure, eps: &Rational, budget: usize) -> Self {
        let rows = sorted_distinct(s.rows().iter().cloned());
        let col_rows = (0..s.n_columns())
            .map(|c| (0..rows.len()).filter(|&r| rows[r].get(c)).collect())
            .collect();
        let exact_w: Vec<Rational> = rows.iter().map(|r| mu.of_set(r)).collect();

        let d = mu
            .weights()
            .iter()
            .fold(eps.denom().clone(), |acc, w| acc.lcm(w.denom()));
        let limit = BigInt::from(1u64 << 62);
        let checker = if d <= limit && budget < (1 << 30) {
            let scale = |r: &Rational| (r * &d).to_integer().to_i128().expect("fits by bound on d");
            Checker::Scaled {
                d: d.to_i128().expect("fits"),
                e: scale(eps),
                w: exact_w.iter().map(scale).collect(),
            }
        } else {
            Checker::Exact {
                eps: eps.clone(),
                w: exact_w,
            }
        };
        Search {
            n_cols: s.n_columns(),
            n_rows: rows.len(),
            col_rows,
            checker,
        }
    }

    fn accepts(&self, col_counts: &[u64]) -> bool {
        let n: u64 = col_counts.iter().sum();
        if n == 0 {
            return false;
        }
        let mut row_counts = vec![0i64; self.n_rows];
        for (c, &k) in col_counts.iter().enumerate() {
            if k > 0 {
                for &r in &self.col_rows[c] {
                    row_counts[r] += k as i64;
                }
            }
        }
        self.checker.ok(&row_counts, n as i64)
    }

    /// First multiset of size `n` (in lexicographic order of sorted index
    /// sequences) that passes.
    fn exhaustive(&self, n: usize) -> Option<Vec<u64>> {
        let mut col_counts = vec![0u64; self.n_cols];
        let mut row_counts = vec![0i64; self.n_rows];
        if self.dfs(0, n, n as i64, &mut col_counts, &mut row_counts) {
            Some(col_counts)
        } else {
            None
        }
    }

    fn dfs(
        &self,
        start: usize,
        left: usize,
        n: i64,
        col_counts: &mut [u64],
        row_counts: &mut [i64],
    ) -> bool {
        if left == 0 {
            return self.checker.ok(row_counts, n);
        }
        for c in start..self.n_cols {
            col_counts[c] += 1;
            for &r in &self.col_rows[c] {
                row_counts[r] += 1;
            }
            if self.dfs(c, left - 1, n, col_counts, row_counts) {
                return true;
            }
            col_counts[c] -= 1;
            for &r in &self.col_rows[c] {
                row_counts[r] -= 1;
            }
        }
        false
    }
}
