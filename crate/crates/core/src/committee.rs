//! Majority committees: a 1/8-approximation, under the column player's
//! optimal strategy, of the sets `{h : h agrees with p at a}`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::approx::{find_approximation, Measure, Multiset};
use crate::error::{Error, Result};
use crate::game::{GameMatrix, MixedStrategy};
use crate::pool::HypothesisPool;
use crate::rational::{self, Rational};
use crate::setsystem::SetSystem;

/// Starting multiset budget; doubled on failure up to [`MAX_COMMITTEE_BUDGET`].
pub const INITIAL_COMMITTEE_BUDGET: usize = 16;
pub const MAX_COMMITTEE_BUDGET: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Committee {
    /// `(pool index, count)`, sorted by pool index.
    pub members: Vec<(usize, u64)>,
    pub m: u64,
    /// `min_a |{t : member t agrees at a}| / m`, always above 1/2.
    pub margin: Rational,
}

#[derive(Debug, Serialize)]
pub struct CommitteeDoc {
    pub members: Vec<(usize, u64)>,
    pub m: u64,
}

impl Committee {
    /// Members as `(row of the ambient system, count)`.
    pub fn to_doc(&self, pool: &HypothesisPool) -> CommitteeDoc {
        CommitteeDoc {
            members: self
                .members
                .iter()
                .map(|&(j, c)| (pool.hypotheses[j].row, c))
                .collect(),
            m: self.m,
        }
    }

    /// Pool indices with multiplicity, in index order.
    pub fn expanded(&self) -> Vec<usize> {
        self.members
            .iter()
            .flat_map(|&(j, c)| std::iter::repeat_n(j, c as usize))
            .collect()
    }
}

/// Agreeing count per row of `b`.
fn agree_counts(b: &GameMatrix, y: &Multiset) -> Vec<u64> {
    b.rows().iter().map(|r| y.count_in(r)).collect()
}

/// Approximates `{h : B[a][h] = 1}` for every `a` within 1/8 under `nu`,
/// restricted to `nu`'s support, and checks strict majority at every row.
pub fn build_committee(b: &GameMatrix, nu: &MixedStrategy, seed: u64) -> Result<Committee> {
    if nu.len() != b.n_cols() {
        return Err(Error::input("strategy length does not match the matrix"));
    }
    let support = nu.support();
    let local_rows = b.rows().iter().map(|r| r.project(&support)).collect();
    let local = SetSystem::from_rows(local_rows)?;
    let local_nu = Measure::new(support.iter().map(|&j| nu.weights()[j].clone()).collect())?;
    let eps = rational::ratio(1, 8);

    let mut budget = INITIAL_COMMITTEE_BUDGET;
    let y = loop {
        match find_approximation(&local, &local_nu, &eps, budget, seed) {
            Ok(y) => break y.remap(&support),
            Err(Error::NotFound { .. }) if budget < MAX_COMMITTEE_BUDGET => budget *= 2,
            Err(e) => return Err(e),
        }
    };

    let m = y.size();
    let counts = agree_counts(b, &y);
    if let Some(a) = counts.iter().position(|&c| 2 * c <= m) {
        return Err(Error::internal(format!(
            "committee of size {m} has only {} agreeing at row {a}",
            counts[a]
        )));
    }
    let worst = *counts.iter().min().expect("nonempty");
    Ok(Committee {
        members: y.pairs().to_vec(),
        m,
        margin: Rational::new(BigInt::from(worst), BigInt::from(m)),
    })
}
