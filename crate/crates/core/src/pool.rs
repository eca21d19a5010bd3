//! Hypothesis pools: witnesses for the constraints a target type induces on
//! small point tuples, and the agreement matrix they play against.

use std::collections::HashMap;

use num_traits::Zero;

use crate::approx::{find_approximation, Measure};
use crate::bits::BitRow;
use crate::error::{Error, Result};
use crate::game::GameMatrix;
use crate::rational::{self, Rational};
use crate::setsystem::{SetSystem, TypeOverA};
use crate::signed::{induced_signs, SignedTuple};
use crate::skolem::{SkolemTable, Witness};
use crate::teaching::next_combination;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub row: usize,
    /// The constraint whose witness this is; the first one met in
    /// enumeration order (by tuple size, then lexicographic).
    pub provenance: SignedTuple,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisPool {
    pub hypotheses: Vec<Hypothesis>,
    /// Largest tuple size enumerated.
    pub n: usize,
}

impl HypothesisPool {
    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypotheses.is_empty()
    }

    pub fn rows(&self) -> Vec<usize> {
        self.hypotheses.iter().map(|h| h.row).collect()
    }

    /// `B[a][j] = 1` iff hypothesis `j` agrees with `p` at column `a`.
    pub fn agreement_matrix(&self, s: &SetSystem, p: &TypeOverA) -> Result<GameMatrix> {
        let rows = (0..s.n_columns())
            .map(|a| {
                BitRow::from_bools(
                    self.hypotheses
                        .iter()
                        .map(|h| s.row(h.row).get(a) == p.bits.get(a)),
                )
            })
            .collect();
        GameMatrix::new(rows)
    }
}

/// Witnesses for the signs `p`'s realizer induces on every column subset of
/// size at most `n`, deduplicated by row content.
pub fn build_pool(s: &SetSystem, p: &TypeOverA, table: &SkolemTable<'_>, n: usize) -> Result<HypothesisPool> {
    check_type(s, p)?;
    let cols = s.n_columns();
    let top = n.min(cols);
    let mut seen: HashMap<&BitRow, ()> = HashMap::new();
    let mut hypotheses = Vec::new();
    for size in 0..=top {
        let mut comb: Vec<usize> = (0..size).collect();
        loop {
            let chi = induced_signs(&comb, &p.bits);
            let witness = table.query(&chi)?;
            let row = witness.row;
            if seen.insert(s.row(row), ()).is_none() {
                hypotheses.push(Hypothesis {
                    row,
                    provenance: chi,
                    witness,
                });
            }
            if !next_combination(&mut comb, cols) {
                break;
            }
        }
    }
    Ok(HypothesisPool { hypotheses, n: top })
}

pub(crate) fn check_type(s: &SetSystem, p: &TypeOverA) -> Result<()> {
    if p.realizer >= s.n_rows() || s.row(p.realizer) != &p.bits {
        return Err(Error::input("type is not realized by its stated row"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimNResult {
    pub tuple: Vec<usize>,
    pub witness: usize,
    /// `mu({a : witness agrees with p at a})`, at least 2/3.
    pub agreement: Rational,
}

/// A 1/3-approximation of the symmetric-difference family under `mu`: the
/// witness for `p`'s signs on its support differs from `p` on a set of
/// measure at most 1/3.
pub fn claim_n_tuple(
    s: &SetSystem,
    p: &TypeOverA,
    mu: &Measure,
    table: &SkolemTable<'_>,
    budget: usize,
    seed: u64,
) -> Result<ClaimNResult> {
    check_type(s, p)?;
    let family = s.symmetric_difference_family();
    let y = find_approximation(&family, mu, &rational::ratio(1, 3), budget, seed)?;
    let tuple = y.support();
    let chi = induced_signs(&tuple, &p.bits);
    let witness = table.query(&chi)?.row;
    let h = s.row(witness);
    let agreement = (0..s.n_columns())
        .filter(|&a| h.get(a) == p.bits.get(a))
        .fold(Rational::zero(), |acc, a| acc + &mu.weights()[a]);
    if agreement < rational::ratio(2, 3) {
        return Err(Error::internal(format!(
            "witness agrees on measure {} < 2/3",
            rational::format(&agreement)
        )));
    }
    Ok(ClaimNResult {
        tuple,
        witness,
        agreement,
    })
}
