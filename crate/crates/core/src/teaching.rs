//! Teaching sets by k-isolation.
//!
//! [`isolate`] runs the shrinking-subfamily recursion: with `n` the current
//! VC dimension and `k = 2^n (n - 1) + 1`, pick a `k`-set `b` and a pattern
//! `c` on it so that the rows tracing `c` on `b` form the smallest nonempty
//! subfamily, keep `b`, recurse. The accumulated points never exceed
//! [`t_budget`] of the starting dimension.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bits::BitRow;
use crate::error::{Error, Result};
use crate::setsystem::{vc_dim_with_witness, PointSet, SetSystem, TypeOverA};
use crate::signed::SignedTuple;

/// Largest column count [`min_teaching_set`] will enumerate.
pub const TEACHING_ORACLE_MAX_COLUMNS: usize = 24;

/// `t(0) = 0`, `t(n) = t(n-1) + 2^n (n-1) + 1`. Saturates at `u64::MAX`.
pub fn t_budget(n: usize) -> u64 {
    let mut t: u64 = 0;
    for i in 1..=n {
        t = t.saturating_add(level_size(i));
    }
    t
}

/// `k = 2^n (n - 1) + 1`, the size of the point set added at a level of VC
/// dimension `n >= 1`.
pub fn level_size(n: usize) -> u64 {
    debug_assert!(n >= 1);
    let pow = if n >= 64 { u64::MAX } else { 1u64 << n };
    pow.saturating_mul(n as u64 - 1).saturating_add(1)
}

/// `k(n, m) = t(2^(n+1) - 1) + m`.
pub fn k_budget(n: usize, m: usize) -> u64 {
    let dual_bound = if n + 1 >= usize::BITS as usize {
        usize::MAX
    } else {
        (1usize << (n + 1)) - 1
    };
    t_budget(dual_bound).saturating_add(m as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsolationBudget {
    pub n: usize,
    pub t_of_n: u64,
}

impl IsolationBudget {
    pub fn new(n: usize) -> Self {
        IsolationBudget { n, t_of_n: t_budget(n) }
    }
}

/// A row together with points on which no other row shares its trace
/// (unless it is equal to it everywhere).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeachingSet {
    pub concept: usize,
    pub points: PointSet,
}

impl TeachingSet {
    /// True iff every row agreeing with the concept on `points` equals it.
    pub fn is_valid_in(&self, rows: &[BitRow]) -> bool {
        let concept = &rows[self.concept];
        let pts = self.points.as_slice();
        rows.iter().all(|r| !r.agrees_on(concept, pts) || r == concept)
    }
}

/// Result of isolating within the rows satisfying a sign constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintIsolation {
    /// Full trace of the chosen row; it satisfies the constraint.
    pub p0: TypeOverA,
    /// Points whose trace determines `p0` among all rows.
    pub a0: PointSet,
    /// `k(n, m)` with `n` the dual VC dimension and `m` the constraint length.
    pub k_budget: u64,
    /// `t(VC of the constrained family) + m`, never larger than `k_budget`.
    pub sharp_budget: u64,
}

#[derive(Debug, Serialize)]
pub struct ConstraintIsolationDoc {
    pub p0: String,
    #[serde(rename = "A0")]
    pub a0: Vec<usize>,
    pub budget: u64,
}

impl ConstraintIsolation {
    pub fn to_doc(&self) -> ConstraintIsolationDoc {
        ConstraintIsolationDoc {
            p0: self.p0.bits.to_string(),
            a0: self.a0.as_slice().to_vec(),
            budget: self.k_budget,
        }
    }
}

/// Output of the recursion on a family of distinct rows.
pub(crate) struct FamilyIsolation {
    /// Index into the family slice.
    pub concept: usize,
    pub points: Vec<usize>,
    /// VC dimension of the family the recursion started from.
    pub vc: usize,
}

/// Runs the k-isolation recursion on distinct `rows` of width `n_cols`.
pub(crate) fn isolate_family(rows: &[BitRow], n_cols: usize) -> FamilyIsolation {
    assert!(!rows.is_empty(), "isolation needs a nonempty family");
    let mut family: Vec<usize> = (0..rows.len()).collect();
    let mut points: Vec<usize> = Vec::new();
    let mut start_vc = None;

    while family.len() > 1 {
        let sub: Vec<BitRow> = family.iter().map(|&i| rows[i].clone()).collect();
        let n = vc_dim_with_witness(&sub, n_cols).0;
        start_vc.get_or_insert(n);
        debug_assert!(n >= 1, "two distinct rows always shatter a point");
        let size = (level_size(n).min(n_cols as u64)) as usize;
        let (b, keep) = min_subfamily(&sub, n_cols, size);
        family = keep.into_iter().map(|j| family[j]).collect();
        points.extend(b);
    }
    points.sort_unstable();
    points.dedup();
    FamilyIsolation {
        concept: family[0],
        points,
        vc: start_vc.unwrap_or(0),
    }
}

/// Over all `size`-subsets `b` (lexicographic) and patterns `c` on `b`
/// (lexicographic as bit strings in the order of `b`), the smallest nonempty
/// `{r : r|b = c}`. Returns `b` and the member indices.
fn min_subfamily(rows: &[BitRow], n_cols: usize, size: usize) -> (Vec<usize>, Vec<usize>) {
    let mut best: Option<(usize, Vec<usize>, BitRow)> = None;
    let mut b: Vec<usize> = (0..size).collect();
    loop {
        let mut counts: HashMap<BitRow, usize> = HashMap::new();
        for r in rows {
            *counts.entry(r.project(&b)).or_default() += 1;
        }
        let (key, count) = counts
            .into_iter()
            .min_by(|x, y| x.1.cmp(&y.1).then_with(|| x.0.cmp(&y.0)))
            .expect("family is nonempty");
        if best.as_ref().is_none_or(|(c, _, _)| count < *c) {
            best = Some((count, b.clone(), key));
            if count == 1 {
                break;
            }
        }
        if !next_combination(&mut b, n_cols) {
            break;
        }
    }
    let (_, b, key) = best.expect("at least one subset");
    let keep = (0..rows.len()).filter(|&i| rows[i].project(&b) == key).collect();
    (b, keep)
}

/// Advances `comb` to the next `k`-combination of `0..n` in lexicographic
/// order. Returns false after the last one.
pub(crate) fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Distinct rows of `s` in first-appearance order, with their indices in `s`.
fn distinct_with_index(s: &SetSystem) -> (Vec<BitRow>, Vec<usize>) {
    let mut seen = HashMap::new();
    let mut rows = Vec::new();
    let mut idx = Vec::new();
    for (i, r) in s.rows().iter().enumerate() {
        if seen.insert(r, i).is_none() {
            rows.push(r.clone());
            idx.push(i);
        }
    }
    (rows, idx)
}

/// A row and a teaching set for it of size at most `t_budget(vc_dim(s))`.
/// The returned set is re-checked against every row.
pub fn isolate(s: &SetSystem) -> TeachingSet {
    let (rows, idx) = distinct_with_index(s);
    let iso = isolate_family(&rows, s.n_columns());
    let ts = TeachingSet {
        concept: idx[iso.concept],
        points: PointSet::from_sorted_unchecked(iso.points),
    };
    assert!(ts.is_valid_in(s.rows()), "isolation produced a non-teaching set");
    assert!(ts.points.len() as u64 <= t_budget(iso.vc), "isolation exceeded t(n)");
    ts
}

/// Brute-force minimum teaching set for `concept`.
pub fn min_teaching_set(s: &SetSystem, concept: usize) -> Result<PointSet> {
    let n = s.n_columns();
    if concept >= s.n_rows() {
        return Err(Error::input(format!("row {concept} out of range")));
    }
    if n > TEACHING_ORACLE_MAX_COLUMNS {
        return Err(Error::Refused(format!(
            "{n} columns exceeds the teaching-set oracle limit of {TEACHING_ORACLE_MAX_COLUMNS}"
        )));
    }
    let target = s.row(concept);
    let diffs: Vec<u64> = s
        .rows()
        .iter()
        .filter(|r| *r != target)
        .map(|r| {
            let x = r.xor(target);
            x.ones_iter().fold(0u64, |acc, i| acc | 1 << i)
        })
        .collect();
    for size in 0..=n {
        let mut comb: Vec<usize> = (0..size).collect();
        loop {
            let mask = comb.iter().fold(0u64, |acc, &i| acc | 1 << i);
            if diffs.iter().all(|&d| d & mask != 0) {
                return Ok(PointSet::from_sorted_unchecked(comb));
            }
            if !next_combination(&mut comb, n) {
                break;
            }
        }
    }
    unreachable!("all columns separate distinct rows")
}

/// Repeatedly isolates a row and removes it. Each teaching set is valid
/// relative to the rows not yet removed.
pub fn teaching_sequence(s: &SetSystem) -> Vec<TeachingSet> {
    let (mut rows, mut idx) = distinct_with_index(s);
    let mut out = Vec::with_capacity(rows.len());
    while !rows.is_empty() {
        let iso = isolate_family(&rows, s.n_columns());
        out.push(TeachingSet {
            concept: idx[iso.concept],
            points: PointSet::from_sorted_unchecked(iso.points),
        });
        rows.remove(iso.concept);
        idx.remove(iso.concept);
    }
    out
}

/// Isolation relative to a sign constraint, with the dual VC dimension of the
/// ambient system computed once.
#[derive(Debug, Clone)]
pub struct ConstraintIsolator<'a> {
    system: &'a SetSystem,
    dual_vc: usize,
}

impl<'a> ConstraintIsolator<'a> {
    pub fn new(system: &'a SetSystem) -> Self {
        ConstraintIsolator {
            system,
            dual_vc: system.dual().vc_dim(),
        }
    }

    pub fn system(&self) -> &'a SetSystem {
        self.system
    }

    pub fn dual_vc(&self) -> usize {
        self.dual_vc
    }

    /// Restricts to rows satisfying `chi`, projects them away from chi's
    /// columns, isolates one trace there, and returns that row's full trace
    /// with the isolating points plus chi's columns.
    pub fn isolate(&self, chi: &SignedTuple) -> Result<ConstraintIsolation> {
        let s = self.system;
        if chi.max_column().is_some_and(|c| c >= s.n_columns()) {
            return Err(Error::input("constraint column out of range"));
        }
        if chi.is_contradictory() {
            return Err(Error::Unsatisfiable);
        }
        let chi_cols = chi.columns();
        let rest: Vec<usize> = (0..s.n_columns())
            .filter(|c| chi_cols.binary_search(c).is_err())
            .collect();

        let mut seen = HashMap::new();
        let mut traces = Vec::new();
        let mut owners = Vec::new();
        for (i, r) in s.rows().iter().enumerate() {
            if chi.satisfied_by(r) {
                let t = r.project(&rest);
                if !seen.contains_key(&t) {
                    seen.insert(t.clone(), i);
                    traces.push(t);
                    owners.push(i);
                }
            }
        }
        if traces.is_empty() {
            return Err(Error::Unsatisfiable);
        }

        let iso = isolate_family(&traces, rest.len());
        let b = owners[iso.concept];
        let x0: Vec<usize> = iso.points.iter().map(|&j| rest[j]).collect();
        let a0 = PointSet::from_sorted_unchecked(chi_cols).union(&PointSet::from_sorted_unchecked(x0));
        let p0 = s.type_of_row(b)?;

        let k_budget = k_budget(self.dual_vc, chi.len());
        let sharp_budget = t_budget(iso.vc).saturating_add(chi.len() as u64);
        let result = ConstraintIsolation {
            p0,
            a0,
            k_budget,
            sharp_budget,
        };
        self.verify(chi, &result)?;
        Ok(result)
    }

    fn verify(&self, chi: &SignedTuple, iso: &ConstraintIsolation) -> Result<()> {
        let p0 = &iso.p0.bits;
        if !chi.satisfied_by(p0) {
            return Err(Error::internal("isolated row violates its constraint"));
        }
        if iso.a0.len() as u64 > iso.sharp_budget || iso.sharp_budget > iso.k_budget {
            return Err(Error::internal(format!(
                "|A0| = {} over budget (sharp {}, k {})",
                iso.a0.len(),
                iso.sharp_budget,
                iso.k_budget
            )));
        }
        let pts = iso.a0.as_slice();
        if let Some(r) = self
            .system
            .rows()
            .iter()
            .find(|r| r.agrees_on(p0, pts) && *r != p0)
        {
            return Err(Error::internal(format!(
                "row {r} agrees with {p0} on A0 but differs elsewhere"
            )));
        }
        Ok(())
    }
}

/// One-shot form of [`ConstraintIsolator::isolate`].
pub fn isolate_under_constraint(s: &SetSystem, chi: &SignedTuple) -> Result<ConstraintIsolation> {
    ConstraintIsolator::new(s).isolate(chi)
}
