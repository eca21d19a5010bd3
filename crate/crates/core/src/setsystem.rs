//! Finite set systems as 0/1 concept matrices.
//!
//! Rows are concepts (traces of a concept on the parameter set), columns are
//! the points of the ground set. All dimension computations treat the row set
//! as a set: duplicates never change which point sets are shattered.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::bits::BitRow;
use crate::error::{Error, Result};

/// A finite concept matrix with labelled columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    columns: Vec<String>,
    rows: Vec<BitRow>,
    canonical: bool,
}

/// A duplicate-free, sorted set of column indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PointSet(Vec<usize>);

/// A realized type: a bit vector over the columns together with a row
/// that has exactly that trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeOverA {
    pub bits: BitRow,
    pub realizer: usize,
}

impl TryFrom<Vec<usize>> for PointSet {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        PointSet::new(v, usize::MAX)
    }
}

impl From<PointSet> for Vec<usize> {
    fn from(p: PointSet) -> Self {
        p.0
    }
}

impl PointSet {
    /// Sorts and validates; duplicates are an error, as are indices `>= n_columns`.
    pub fn new(mut indices: Vec<usize>, n_columns: usize) -> Result<Self> {
        indices.sort_unstable();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n_columns) {
            return Err(Error::input(format!(
                "point index {bad} out of range for {n_columns} columns"
            )));
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input("duplicate point index"));
        }
        Ok(PointSet(indices))
    }

    pub fn empty() -> Self {
        PointSet(Vec::new())
    }

    pub fn all(n_columns: usize) -> Self {
        PointSet((0..n_columns).collect())
    }

    pub(crate) fn from_sorted_unchecked(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        PointSet(indices)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut v: Vec<usize> = self.0.iter().chain(&other.0).copied().collect();
        v.sort_unstable();
        v.dedup();
        PointSet(v)
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    fn check_range(&self, n_columns: usize) -> Result<()> {
        match self.0.last() {
            Some(&last) if last >= n_columns => Err(Error::input(format!(
                "point index {last} out of range for {n_columns} columns"
            ))),
            _ => Ok(()),
        }
    }
}

impl SetSystem {
    pub fn new(columns: Vec<String>, rows: Vec<BitRow>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::input("a set system needs at least one column"));
        }
        if rows.is_empty() {
            return Err(Error::input("a set system needs at least one row"));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != columns.len()) {
            return Err(Error::input(format!(
                "row {i} has length {}, expected {}",
                r.len(),
                columns.len()
            )));
        }
        let canonical = rows.windows(2).all(|w| w[0] < w[1]);
        Ok(SetSystem {
            columns,
            rows,
            canonical,
        })
    }

    /// Builds a system with columns labelled `0..n`.
    pub fn from_rows(rows: Vec<BitRow>) -> Result<Self> {
        let n = rows.first().map(BitRow::len).unwrap_or(0);
        SetSystem::new(default_labels(n), rows)
    }

    /// Convenience constructor from `0`/`1` strings.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|s| BitRow::parse(s).ok_or_else(|| Error::input(format!("bad row {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        SetSystem::from_rows(parsed)
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitRow {
        &self.rows[i]
    }

    pub fn n_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Rows deduplicated and sorted.
    pub fn canonical(&self) -> SetSystem {
        if self.canonical {
            return self.clone();
        }
        SetSystem {
            columns: self.columns.clone(),
            rows: sorted_distinct(self.rows.iter().cloned()),
            canonical: true,
        }
    }

    pub fn distinct_row_count(&self) -> usize {
        if self.canonical {
            self.rows.len()
        } else {
            self.rows.iter().collect::<HashSet<_>>().len()
        }
    }

    /// Index of the first row equal to `bits`, if any.
    pub fn find_row(&self, bits: &BitRow) -> Option<usize> {
        self.rows.iter().position(|r| r == bits)
    }

    /// Wraps `bits` as a realized type, or fails if no row has that trace.
    pub fn type_of(&self, bits: &BitRow) -> Result<TypeOverA> {
        if bits.len() != self.n_columns() {
            return Err(Error::input(format!(
                "type has length {}, expected {}",
                bits.len(),
                self.n_columns()
            )));
        }
        let realizer = self
            .find_row(bits)
            .ok_or_else(|| Error::input(format!("type {bits} is not realized by any row")))?;
        Ok(TypeOverA {
            bits: bits.clone(),
            realizer,
        })
    }

    pub fn type_of_row(&self, i: usize) -> Result<TypeOverA> {
        let bits = self
            .rows
            .get(i)
            .ok_or_else(|| Error::input(format!("row {i} out of range")))?;
        self.type_of(bits)
    }

    /// Every distinct row as a realized type, in row order of first appearance.
    pub fn realized_types(&self) -> Vec<TypeOverA> {
        let mut seen = HashSet::new();
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| seen.insert(*r))
            .map(|(i, r)| TypeOverA {
                bits: r.clone(),
                realizer: i,
            })
            .collect()
    }

    /// True iff every sign pattern on `points` is the trace of some row.
    pub fn shatters(&self, points: &PointSet) -> Result<bool> {
        points.check_range(self.n_columns())?;
        Ok(shattered(&self.rows, points.as_slice()))
    }

    pub fn vc_dim(&self) -> usize {
        vc_dim_with_witness(&self.rows, self.n_columns()).0
    }

    /// A shattered set of maximum size.
    pub fn vc_witness(&self) -> PointSet {
        PointSet(vc_dim_with_witness(&self.rows, self.n_columns()).1)
    }

    /// Number of distinct row traces on `points`.
    pub fn trace_count(&self, points: &PointSet) -> Result<usize> {
        points.check_range(self.n_columns())?;
        Ok(distinct_traces(&self.rows, points.as_slice()))
    }

    /// The transposed system: points are the distinct rows of `self`, concepts
    /// are the columns. Canonicalized.
    pub fn dual(&self) -> SetSystem {
        let universe = sorted_distinct(self.rows.iter().cloned());
        let concepts = (0..self.n_columns())
            .map(|c| BitRow::from_bools(universe.iter().map(|r| r.get(c))));
        SetSystem {
            columns: (0..universe.len()).map(|i| format!("r{i}")).collect(),
            rows: sorted_distinct(concepts),
            canonical: true,
        }
    }

    /// `{r1 XOR r2}` over all pairs of rows, canonicalized.
    pub fn symmetric_difference_family(&self) -> SetSystem {
        let distinct = sorted_distinct(self.rows.iter().cloned());
        let mut out = HashSet::new();
        for (i, a) in distinct.iter().enumerate() {
            for b in &distinct[i..] {
                out.insert(a.xor(b));
            }
        }
        SetSystem {
            columns: self.columns.clone(),
            rows: sorted_distinct(out),
            canonical: true,
        }
    }

    /// Projects onto `points`, deduplicating rows.
    pub fn restrict(&self, points: &PointSet) -> Result<SetSystem> {
        if points.is_empty() {
            return Err(Error::input("cannot restrict to an empty point set"));
        }
        points.check_range(self.n_columns())?;
        let idx = points.as_slice();
        Ok(SetSystem {
            columns: idx.iter().map(|&i| self.columns[i].clone()).collect(),
            rows: sorted_distinct(self.rows.iter().map(|r| r.project(idx))),
            canonical: true,
        })
    }

    /// Keeps only the listed rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<SetSystem> {
        let rows = indices
            .iter()
            .map(|&i| {
                self.rows
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::input(format!("row {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        SetSystem::new(self.columns.clone(), rows)
    }
}

pub(crate) fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

pub(crate) fn sorted_distinct<I: IntoIterator<Item = BitRow>>(rows: I) -> Vec<BitRow> {
    let mut v: Vec<BitRow> = rows.into_iter().collect();
    v.sort();
    v.dedup();
    v
}

pub(crate) fn distinct_traces(rows: &[BitRow], points: &[usize]) -> usize {
    if points.len() < 64 && (1usize << points.len()) <= 4 * rows.len().max(1) {
        let mut seen = vec![false; 1 << points.len()];
        let mut count = 0;
        for r in rows {
            let key = r.trace(points) as usize;
            if !seen[key] {
                seen[key] = true;
                count += 1;
            }
        }
        count
    } else if points.len() <= 64 {
        rows.iter().map(|r| r.trace(points)).collect::<HashSet<_>>().len()
    } else {
        rows.iter().map(|r| r.project(points)).collect::<HashSet<_>>().len()
    }
}

pub(crate) fn shattered(rows: &[BitRow], points: &[usize]) -> bool {
    let d = points.len();
    if d == 0 {
        return !rows.is_empty();
    }
    if d >= usize::BITS as usize - 1 || (1usize << d) > rows.len() {
        return false;
    }
    distinct_traces(rows, points) == 1 << d
}

/// Exact VC dimension by level-wise search: a set of size `d + 1` is only
/// tried when all of its `d`-subsets are shattered. Returns one maximum
/// shattered set.
pub(crate) fn vc_dim_with_witness(rows: &[BitRow], n_columns: usize) -> (usize, Vec<usize>) {
    if rows.len() < 2 {
        return (0, Vec::new());
    }
    let max_d = (usize::BITS - 1 - rows.len().leading_zeros()) as usize;
    let singles: Vec<bool> = (0..n_columns).map(|c| shattered(rows, &[c])).collect();
    let mut level: Vec<Vec<usize>> = (0..n_columns).filter(|&c| singles[c]).map(|c| vec![c]).collect();
    if level.is_empty() {
        return (0, Vec::new());
    }
    let mut d = 1;
    while d < max_d {
        let known: HashSet<&[usize]> = level.iter().map(Vec::as_slice).collect();
        let mut next = Vec::new();
        let mut probe = Vec::with_capacity(d + 1);
        for s in &level {
            let last = *s.last().expect("nonempty level set");
            for (c, _) in singles.iter().enumerate().skip(last + 1).filter(|(_, &ok)| ok) {
                // every d-subset containing c must already be shattered
                let subsets_ok = (0..d).all(|skip| {
                    probe.clear();
                    probe.extend(s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x));
                    probe.push(c);
                    known.contains(probe.as_slice())
                });
                if !subsets_ok {
                    continue;
                }
                let mut cand = s.clone();
                cand.push(c);
                if shattered(rows, &cand) {
                    next.push(cand);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
        d += 1;
    }
    (d, level.swap_remove(0))
}
