//! Zero-sum games on 0/1 agreement matrices.
//!
//! Rows are indexed by points `a`, columns by hypotheses `h`. The column
//! player picks `nu` over hypotheses and wants agreement high; the row player
//! picks `mu` over points and wants it low. A certified solution carries
//! `lower = min_i (B nu)_i` and `upper = max_j (mu^T B)_j`, so the value lies
//! in `[lower, upper]`. Exact solvers return `lower == upper`.

mod mwu;
mod simplex;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::approx::Measure;
use crate::bits::BitRow;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub use mwu::{MwuSolver, DEFAULT_TOLERANCE_DEN};
pub use simplex::ExactLpSolver;

/// Distributions over points or hypotheses.
pub type MixedStrategy = Measure;

/// Above this many rows or columns the `auto` solver switches to MWU.
pub const EXACT_CUTOFF: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameMatrix {
    rows: Vec<BitRow>,
    n_cols: usize,
}

impl GameMatrix {
    pub fn new(rows: Vec<BitRow>) -> Result<Self> {
        let n_cols = rows.first().map_or(0, BitRow::len);
        if rows.is_empty() || n_cols == 0 {
            return Err(Error::input("game matrix must have at least one row and one column"));
        }
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::input("ragged game matrix"));
        }
        Ok(GameMatrix { rows, n_cols })
    }

    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| BitRow::parse(r).ok_or_else(|| Error::input(format!("bad matrix row {r:?}"))))
            .collect::<Result<_>>()?;
        GameMatrix::new(rows)
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }

    /// `(B nu)_i` for every row.
    pub fn row_payoffs(&self, nu: &MixedStrategy) -> Vec<Rational> {
        self.rows.iter().map(|r| nu.of_set(r)).collect()
    }

    /// `(mu^T B)_j` for every column.
    pub fn col_payoffs(&self, mu: &MixedStrategy) -> Vec<Rational> {
        (0..self.n_cols)
            .map(|j| {
                self.rows
                    .iter()
                    .zip(mu.weights())
                    .filter(|(r, _)| r.get(j))
                    .fold(Rational::zero(), |acc, (_, w)| acc + w)
            })
            .collect()
    }

    /// `(min_i (B nu)_i, max_j (mu^T B)_j)`, exactly.
    pub fn bounds(&self, nu: &MixedStrategy, mu: &MixedStrategy) -> Result<(Rational, Rational)> {
        if nu.len() != self.n_cols || mu.len() != self.n_rows() {
            return Err(Error::input("strategy length does not match the matrix"));
        }
        let lower = self.row_payoffs(nu).into_iter().min().expect("nonempty");
        let upper = self.col_payoffs(mu).into_iter().max().expect("nonempty");
        Ok((lower, upper))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSolution {
    /// Certified lower bound on the value; the value itself when `exact`.
    pub value: Rational,
    pub lower: Rational,
    pub upper: Rational,
    pub nu: MixedStrategy,
    pub mu: MixedStrategy,
    pub exact: bool,
    pub solver: &'static str,
}

impl GameSolution {
    pub fn gap(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn to_doc(&self) -> GameSolutionDoc {
        GameSolutionDoc {
            value: rational::format(&self.value),
            nu: self.nu.weights().iter().map(rational::format).collect(),
            mu: self.mu.weights().iter().map(rational::format).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GameSolutionDoc {
    pub value: String,
    pub nu: Vec<String>,
    pub mu: Vec<String>,
}

pub trait GameSolver: Send + Sync {
    fn name(&self) -> &'static str;
    fn solve(&self, b: &GameMatrix) -> Result<GameSolution>;
}

/// Exact below [`EXACT_CUTOFF`] in both dimensions, MWU above.
pub struct AutoSolver {
    exact: ExactLpSolver,
    approx: MwuSolver,
}

impl AutoSolver {
    pub fn new(tolerance: Rational) -> Result<Self> {
        Ok(AutoSolver {
            exact: ExactLpSolver,
            approx: MwuSolver::new(tolerance)?,
        })
    }
}

impl GameSolver for AutoSolver {
    fn name(&self) -> &'static str {
        "auto"
    }

    fn solve(&self, b: &GameMatrix) -> Result<GameSolution> {
        if b.n_rows() <= EXACT_CUTOFF && b.n_cols() <= EXACT_CUTOFF {
            self.exact.solve(b)
        } else {
            self.approx.solve(b)
        }
    }
}

pub const SOLVER_NAMES: &[&str] = &["exact-lp", "approx-mwu", "auto"];

/// Looks up a solver by name. `tolerance` only affects approximate solvers.
pub fn solver_by_name(name: &str, tolerance: &Rational) -> Result<Box<dyn GameSolver>> {
    Ok(match name {
        "exact-lp" => Box::new(ExactLpSolver),
        "approx-mwu" => Box::new(MwuSolver::new(tolerance.clone())?),
        "auto" => Box::new(AutoSolver::new(tolerance.clone())?),
        other => {
            return Err(Error::input(format!(
                "unknown solver {other:?}; known: {}",
                SOLVER_NAMES.join(", ")
            )))
        }
    })
}

/// Exact value and optimal strategies.
pub fn game_value(b: &GameMatrix) -> Result<GameSolution> {
    ExactLpSolver.solve(b)
}

pub(crate) fn measure_from_counts(counts: &[u64]) -> Result<Measure> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::internal("empty strategy"));
    }
    Measure::new(
        counts
            .iter()
            .map(|&c| Rational::new(BigInt::from(c), BigInt::from(total)))
            .collect(),
    )
}
