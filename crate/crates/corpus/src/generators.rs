//! Deterministic benchmark families, registered by kind name.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use udtfs_core::{BitRow, Error, Result, SetSystem};

pub trait FamilyGenerator: Send + Sync {
    fn kind(&self) -> &'static str;
    /// Number of size parameters.
    fn arity(&self) -> usize;
    /// Inclusive `(min, max)` per parameter; checked before generation.
    fn ranges(&self) -> Vec<(usize, usize)>;
    fn build(&self, params: &[usize], seed: u64) -> SetSystem;
    /// Known VC dimension, when the family has one in closed form.
    fn expected_vc(&self, params: &[usize]) -> Option<usize>;
}

fn system(labels: Vec<String>, rows: Vec<BitRow>) -> SetSystem {
    SetSystem::new(labels, rows).expect("generators produce rectangular nonempty systems")
}

fn index_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

pub struct Powerset;

impl FamilyGenerator for Powerset {
    fn kind(&self) -> &'static str {
        "powerset"
    }
    fn arity(&self) -> usize {
        1
    }
    fn ranges(&self) -> Vec<(usize, usize)> {
        vec![(1, 12)]
    }
    fn build(&self, p: &[usize], _: u64) -> SetSystem {
        let n = p[0];
        let rows = (0..1u64 << n)
            .map(|m| BitRow::from_bools((0..n).map(|i| m >> i & 1 == 1)))
            .collect();
        system(index_labels(n), rows)
    }
    fn expected_vc(&self, p: &[usize]) -> Option<usize> {
        Some(p[0])
    }
}

/// Rows `{x : x < t}` for `t = 0..=n`.
pub struct Thresholds;

impl FamilyGenerator for Thresholds {
    fn kind(&self) -> &'static str {
        "thresholds"
    }
    fn arity(&self) -> usize {
        1
    }
    fn ranges(&self) -> Vec<(usize, usize)> {
        vec![(1, 256)]
    }
    fn build(&self, p: &[usize], _: u64) -> SetSystem {
        let n = p[0];
        let rows = (0..=n).map(|t| BitRow::from_bools((0..n).map(|x| x < t))).collect();
        system(index_labels(n), rows)
    }
    fn expected_vc(&self, _: &[usize]) -> Option<usize> {
        Some(1)
    }
}

/// The empty set and every `{i..=j}`.
pub struct Intervals;

impl FamilyGenerator for Intervals {
    fn kind(&self) -> &'static str {
        "intervals"
    }
    fn arity(&self) -> usize {
        1
    }
    fn ranges(&self) -> Vec<(usize, usize)> {
        vec![(1, 128)]
    }
    fn build(&self, p: &[usize], _: u64) -> SetSystem {
        let n = p[0];
        let mut rows = vec![BitRow::zeros(n)];
        for i in 0..n {
            for j in i..n {
                rows.push(BitRow::from_bools((0..n).map(|x| i <= x && x <= j)));
            }
        }
        system(index_labels(n), rows)
    }
    fn expected_vc(&self, p: &[usize]) -> Option<usize> {
        Some(p[0].min(2))
    }
}

/// Subsets of `0..n` made of at most `k` maximal runs.
pub struct IntervalUnions;

impl FamilyGenerator for IntervalUnions {
    fn kind(&self) -> &'static str {
        "k-interval-unions"
    }
    fn arity(&self) -> usize {
        2
    }
    fn ranges(&self) -> Vec<(usize, usize)> {
        vec![(1, 16), (1, 16)]
    }
    fn build(&self, p: &[usize], _: u64) -> SetSystem {
        let (n, k) = (p[0], p[1]);
        let rows = (0..1u64 << n)
            .filter(|&m| {
                let runs = (0..n).filter(|&i| m >> i & 1 == 1 && (i == 0 || m >> (i - 1) & 1 == 0)).count();
                runs <= k
            })
            .map(|m| BitRow::from_bools((0..n).map(|i| m >> i & 1 == 1)))
            .collect();
        system(index_labels(n), rows)
    }
    fn expected_vc(&self, p: &[usize]) -> Option<usize> {
        Some((2 * p[1]).min(p[0]))
    }
}

/// Traces of closed and open half-planes on a `w x h` integer grid.
///
/// For each ordered pair of points, take the strict left side of the line
/// through them and add every prefix and every suffix of the points on that
/// line, ordered along the direction. Together with the empty and full sets this is every
/// half-plane trace.
pub struct HalfplaneGrid;

impl FamilyGenerator for HalfplaneGrid {
    fn kind(&self) -> &'static str {
        "halfplane-grid"
    }
    fn arity(&self) -> usize {
        2
    }
    fn ranges(&self) -> Vec<(usize, usize)> {
        vec![(1, 8), (1, 8)]
    }
    fn build(&self, p: &[usize], _: u64) -> SetSystem {
        let (w, h) = (p[0], p[1]);
        let pts: Vec<(i64, i64)> = (0..h as i64)
            .flat_map(|y| (0..w as i64).map(move |x| (x, y)))
            .collect();
        let n = pts.len();
        let mut sets: BTreeSet<Vec<bool>> = BTreeSet::new();
        sets.insert(vec![false; n]);
        sets.insert(vec![true; n]);
        for (i, &a) in pts.iter().enumerate() {
            for (j, &b) in pts.iter().enumerate() {
                if i == j {
                    continue;
                }
                let d = (b.0 - a.0, b.1 - a.1);
                let cross = |q: (i64, i64)| d.0 * (q.1 - a.1) - d.1 * (q.0 - a.0);
                let base: Vec<bool> = pts.iter().map(|&q| cross(q) > 0).collect();
                let mut on_line: Vec<usize> = (0..n).filter(|&k| cross(pts[k]) == 0).collect();
                on_line.sort_by_key(|&k| d.0 * pts[k].0 + d.1 * pts[k].1);
                sets.insert(base.clone());
                for order in [on_line.clone(), on_line.into_iter().rev().collect()] {
                    let mut set = base.clone();
                    for k in order {
                        set[k] = true;
                        sets.insert(set.clone());
                    }
                }
            }
        }
        let labels = pts.iter().map(|(x, y)| format!("({x},{y})")).collect();
        system(labels, sets.into_iter().map(BitRow::from_bools).collect())
    }
    fn expected_vc(&self, p: &[usize]) -> Option<usize> {
        let (w, h) = (p[0], p[1]);
        Some(match (w.min(h), w.max(h)) {
            (1, 1) => 1,
            (1, _) => 2,
            _ => 3,
        })
    }
}

/// Residue classes `{x < n : x = r mod d}` for every modulus `d <= q`.
pub struct ModClasses;

impl FamilyGenerator for ModClasses {
    fn kind(&self) -> &'static str {
        "mod-classes"
    }
    fn arity(&self) -> usize {
        2
    }
    fn ranges(&self) -> Vec<(usize, usize)> {
        vec![(1, 64), (1, 64)]
    }
    fn build(&self, p: &[usize], _: u64) -> SetSystem {
        let (n, q) = (p[0], p[1]);
        let rows = (1..=q)
            .flat_map(|d| (0..d).map(move |r| (d, r)))
            .map(|(d, r)| BitRow::from_bools((0..n).map(|x| x % d == r)))
            .collect();
        system(index_labels(n), rows)
    }
    fn expected_vc(&self, _: &[usize]) -> Option<usize> {
        None
    }
}

/// Independent fair bits per cell from a seeded generator.
pub struct RandomMatrix;

impl FamilyGenerator for RandomMatrix {
    fn kind(&self) -> &'static str {
        "random"
    }
    fn arity(&self) -> usize {
        2
    }
    fn ranges(&self) -> Vec<(usize, usize)> {
        vec![(1, 4096), (1, 64)]
    }
    fn build(&self, p: &[usize], seed: u64) -> SetSystem {
        let (rows, cols) = (p[0], p[1]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = (0..rows)
            .map(|_| BitRow::from_bools((0..cols).map(|_| rng.gen_bool(0.5))))
            .collect();
        system(index_labels(cols), rows)
    }
    fn expected_vc(&self, _: &[usize]) -> Option<usize> {
        None
    }
}

static REGISTRY: &[&dyn FamilyGenerator] = &[
    &Powerset,
    &Thresholds,
    &Intervals,
    &IntervalUnions,
    &HalfplaneGrid,
    &ModClasses,
    &RandomMatrix,
];

pub fn generators() -> &'static [&'static dyn FamilyGenerator] {
    REGISTRY
}

pub fn generator(kind: &str) -> Result<&'static dyn FamilyGenerator> {
    REGISTRY.iter().copied().find(|g| g.kind() == kind).ok_or_else(|| {
        let known: Vec<_> = REGISTRY.iter().map(|g| g.kind()).collect();
        Error::Input(format!("unknown family {kind:?}; known: {}", known.join(", ")))
    })
}

pub(crate) fn check_params(g: &dyn FamilyGenerator, params: &[usize]) -> Result<()> {
    if params.len() != g.arity() {
        return Err(Error::Input(format!(
            "{} takes {} parameter(s), got {}",
            g.kind(),
            g.arity(),
            params.len()
        )));
    }
    for (i, (&v, (lo, hi))) in params.iter().zip(g.ranges()).enumerate() {
        if v < lo || v > hi {
            return Err(Error::Input(format!(
                "{} parameter {i} = {v} outside [{lo}, {hi}]",
                g.kind()
            )));
        }
    }
    Ok(())
}
