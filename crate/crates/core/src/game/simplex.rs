//! Exact solution by the simplex method over rationals.
//!
//! With `G = B + 1` (entries in {1, 2}, so the value of `G` is at least 1),
//! solve `max sum(y)` subject to `G^T y <= 1`, `y >= 0`. The optimum is
//! `1 / v_G`; `mu = y v_G`, and the slack reduced costs times `v_G` give `nu`.
//! Bland's rule rules out cycling.

use num_traits::{One, Signed, Zero};

use super::{GameMatrix, GameSolution, GameSolver};
use crate::approx::Measure;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, Default)]
pub struct ExactLpSolver;

struct Tableau {
    /// Constraint rows, each `n_vars + 1` wide with the rhs last.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs; last entry is the objective value.
    obj: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &f * pv;
                    }
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs to optimality. The problem is bounded because every `y_i` is
    /// capped by any single constraint.
    fn optimize(&mut self) -> Result<()> {
        let width = self.obj.len() - 1;
        loop {
            let Some(c) = (0..width).find(|&j| self.obj[j].is_negative()) else {
                return Ok(());
            };
            let mut best: Option<(Rational, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[width] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((b, _, var)) => ratio < *b || (ratio == *b && self.basis[i] < *var),
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            let (_, r, _) = best.ok_or_else(|| Error::internal("game LP unbounded"))?;
            self.pivot(r, c);
        }
    }
}

impl GameSolver for ExactLpSolver {
    fn name(&self) -> &'static str {
        "exact-lp"
    }

    fn solve(&self, b: &GameMatrix) -> Result<GameSolution> {
        let n = b.n_rows();
        let m = b.n_cols();
        let width = n + m;
        let one = Rational::one();
        let two = &one + &one;

        let rows = (0..m)
            .map(|j| {
                let mut row = vec![Rational::zero(); width + 1];
                for (i, v) in row.iter_mut().take(n).enumerate() {
                    *v = if b.get(i, j) { two.clone() } else { one.clone() };
                }
                row[n + j] = one.clone();
                row[width] = one.clone();
                row
            })
            .collect();
        let mut obj = vec![Rational::zero(); width + 1];
        for v in obj.iter_mut().take(n) {
            *v = -one.clone();
        }
        let mut t = Tableau {
            rows,
            obj,
            basis: (n..width).collect(),
        };
        t.optimize()?;

        let total = t.obj[width].clone();
        if !total.is_positive() {
            return Err(Error::internal("game LP optimum is not positive"));
        }
        let v_g = one.clone() / &total;
        let mut y = vec![Rational::zero(); n];
        for (row, &var) in t.rows.iter().zip(&t.basis) {
            if var < n {
                y[var] = row[width].clone();
            }
        }
        let mu = Measure::new(y.into_iter().map(|v| v * &v_g).collect())
            .map_err(|e| Error::internal(format!("row strategy invalid: {e}")))?;
        let nu = Measure::new((0..m).map(|j| &t.obj[n + j] * &v_g).collect())
            .map_err(|e| Error::internal(format!("column strategy invalid: {e}")))?;
        let value = v_g - &one;

        let solution = GameSolution {
            lower: value.clone(),
            upper: value.clone(),
            value,
            nu,
            mu,
            exact: true,
            solver: self.name(),
        };
        verify_exact(b, &solution)?;
        Ok(solution)
    }
}

/// Zero duality gap and complementary slackness, in exact arithmetic.
fn verify_exact(b: &GameMatrix, sol: &GameSolution) -> Result<()> {
    let rows = b.row_payoffs(&sol.nu);
    let cols = b.col_payoffs(&sol.mu);
    let lower = rows.iter().min().expect("nonempty");
    let upper = cols.iter().max().expect("nonempty");
    if *lower != sol.value || *upper != sol.value {
        return Err(Error::internal(format!(
            "duality gap: lower {}, upper {}, value {}",
            rational::format(lower),
            rational::format(upper),
            rational::format(&sol.value)
        )));
    }
    let slack_ok = sol
        .nu
        .weights()
        .iter()
        .zip(&cols)
        .all(|(w, c)| w.is_zero() || *c == sol.value)
        && sol
            .mu
            .weights()
            .iter()
            .zip(&rows)
            .all(|(w, r)| w.is_zero() || *r == sol.value);
    if !slack_ok {
        return Err(Error::internal("complementary slackness fails"));
    }
    Ok(())
}
