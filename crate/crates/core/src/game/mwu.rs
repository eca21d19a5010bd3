//! Approximate solution by multiplicative weights.
//!
//! The point player runs Hedge against agreement, the hypothesis player
//! best-responds. The empirical hypothesis counts give `nu`; the averaged
//! point weights, rounded to a dyadic grid, give `mu`. Both are checked in
//! exact arithmetic and the solution is returned only if the certified gap
//! `upper - lower` is within the tolerance.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{measure_from_counts, GameMatrix, GameSolution, GameSolver};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// The default tolerance is `1 / DEFAULT_TOLERANCE_DEN`.
pub const DEFAULT_TOLERANCE_DEN: i64 = 48;

const CHECK_EVERY: usize = 512;
const MAX_ITERATIONS: usize = 400_000;
const MU_GRID_BITS: u32 = 24;

#[derive(Debug, Clone)]
pub struct MwuSolver {
    tolerance: Rational,
}

impl MwuSolver {
    /// `tolerance` must lie in `(0, 1/24)` so that `2/3 - tol - 1/8 > 1/2`.
    pub fn new(tolerance: Rational) -> Result<Self> {
        if !tolerance.is_positive() || tolerance >= rational::ratio(1, 24) {
            return Err(Error::input(format!(
                "tolerance must lie in (0, 1/24), got {}",
                rational::format(&tolerance)
            )));
        }
        Ok(MwuSolver { tolerance })
    }

    pub fn tolerance(&self) -> &Rational {
        &self.tolerance
    }

    fn certify(&self, b: &GameMatrix, counts: &[u64], mu_avg: &[f64]) -> Result<Option<GameSolution>> {
        let nu = measure_from_counts(counts)?;
        let scale = (1u64 << MU_GRID_BITS) as f64;
        let total: f64 = mu_avg.iter().sum();
        let mut grid: Vec<u64> = mu_avg.iter().map(|w| (w / total * scale).round() as u64).collect();
        if grid.iter().all(|&g| g == 0) {
            grid[0] = 1;
        }
        let mu = measure_from_counts(&grid)?;
        let (lower, upper) = b.bounds(&nu, &mu)?;
        if &upper - &lower > self.tolerance {
            return Ok(None);
        }
        Ok(Some(GameSolution {
            value: lower.clone(),
            lower,
            upper,
            nu,
            mu,
            exact: false,
            solver: self.name(),
        }))
    }
}

impl Default for MwuSolver {
    fn default() -> Self {
        MwuSolver {
            tolerance: Rational::new(BigInt::one(), BigInt::from(DEFAULT_TOLERANCE_DEN)),
        }
    }
}

impl GameSolver for MwuSolver {
    fn name(&self) -> &'static str {
        "approx-mwu"
    }

    fn solve(&self, b: &GameMatrix) -> Result<GameSolution> {
        let n = b.n_rows();
        let m = b.n_cols();
        let tol = rational::to_f64(&self.tolerance);
        let eta = tol / 2.0;
        let decay = (-eta).exp();

        let cells: Vec<Vec<usize>> = b.rows().iter().map(|r| r.ones_iter().collect()).collect();
        let mut w = vec![1.0f64; n];
        let mut mu_sum = vec![0.0f64; n];
        let mut counts = vec![0u64; m];
        let mut payoff = vec![0.0f64; m];

        for iter in 1..=MAX_ITERATIONS {
            let total: f64 = w.iter().sum();
            payoff.iter_mut().for_each(|p| *p = 0.0);
            for (i, cols) in cells.iter().enumerate() {
                let p = w[i] / total;
                mu_sum[i] += p;
                for &j in cols {
                    payoff[j] += p;
                }
            }
            let best = (0..m)
                .max_by(|&x, &y| payoff[x].total_cmp(&payoff[y]).then(y.cmp(&x)))
                .expect("nonempty");
            counts[best] += 1;
            for (i, wi) in w.iter_mut().enumerate() {
                if b.get(i, best) {
                    *wi *= decay;
                }
            }
            let max_w = w.iter().cloned().fold(0.0, f64::max);
            if max_w < 1e-100 {
                w.iter_mut().for_each(|x| *x /= max_w);
            }

            if iter % CHECK_EVERY == 0 || iter == MAX_ITERATIONS {
                if let Some(sol) = self.certify(b, &counts, &mu_sum)? {
                    return Ok(sol);
                }
            }
        }
        Err(Error::NotCertified(format!(
            "no certificate within tolerance {} after {MAX_ITERATIONS} iterations",
            rational::format(&self.tolerance)
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::game_value;
    use crate::rational::ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use crate::bits::BitRow;

    #[test]
    fn rejects_loose_tolerance() {
        assert!(MwuSolver::new(ratio(1, 24)).is_err());
        assert!(MwuSolver::new(ratio(0, 1)).is_err());
        assert!(MwuSolver::new(ratio(1, 25)).is_ok());
    }

    #[test]
    fn identity_within_tolerance() {
        let b = GameMatrix::from_strs(&["10", "01"]).unwrap();
        let s = MwuSolver::default().solve(&b).unwrap();
        assert!(s.gap() <= ratio(1, 48));
        assert!(s.lower <= ratio(1, 2) && ratio(1, 2) <= s.upper);
    }

    #[test]
    fn brackets_the_exact_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let rows: Vec<BitRow> = (0..rng.gen_range(2..8))
                .map(|_| BitRow::from_bools((0..6).map(|_| rng.gen_bool(0.6))))
                .collect();
            let b = GameMatrix::new(rows).unwrap();
            let exact = game_value(&b).unwrap().value;
            let s = MwuSolver::default().solve(&b).unwrap();
            assert!(s.lower <= exact && exact <= s.upper);
            assert!(s.gap() <= ratio(1, 48));
        }
    }
}
