//! Type compression: isolated-witness table, adaptive pool, game,
//! committee, certificate.

use crate::certificate::{decode_bits, Certificate};
use crate::committee::{build_committee, Committee};
use crate::error::{Error, Result};
use crate::game::{solver_by_name, GameSolution, GameSolver};
use crate::pool::{build_pool, check_type, HypothesisPool};
use crate::rational::{self, Rational};
use crate::setsystem::{SetSystem, TypeOverA};
use crate::signed::induced_signs;
use crate::skolem::{IsolatedWitness, SkolemTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    /// A name from [`crate::game::SOLVER_NAMES`].
    pub solver: String,
    /// Additive tolerance for approximate solvers.
    pub tolerance: Rational,
    /// Cap on the adaptive tuple size; the column count when `None`.
    pub max_n: Option<usize>,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            solver: "auto".into(),
            tolerance: rational::ratio(1, 48),
            max_n: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Compression {
    pub certificate: Certificate,
    pub n_used: usize,
    pub pool: HypothesisPool,
    pub game: GameSolution,
    pub committee: Committee,
    /// `k(n, m)` for each member, in member order.
    pub member_budgets: Vec<u64>,
}

impl Compression {
    pub fn pool_size(&self) -> usize {
        self.pool.len()
    }
}

/// Compresses every type of one system, sharing the witness table.
pub struct Compressor<'a> {
    system: &'a SetSystem,
    table: SkolemTable<'a>,
    solver: Box<dyn GameSolver>,
    config: PipelineConfig,
}

impl<'a> Compressor<'a> {
    pub fn new(system: &'a SetSystem, config: PipelineConfig) -> Result<Self> {
        if system.n_columns() < 2 {
            return Err(Error::input("compression needs at least two columns"));
        }
        let solver = solver_by_name(&config.solver, &config.tolerance)?;
        Ok(Compressor {
            system,
            table: SkolemTable::new(system, Box::new(IsolatedWitness)),
            solver,
            config,
        })
    }

    pub fn table(&self) -> &SkolemTable<'a> {
        &self.table
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    /// Value a solution must certify before a committee is drawn.
    fn accepts(&self, sol: &GameSolution) -> bool {
        let target = rational::ratio(2, 3);
        if sol.exact {
            sol.value >= target
        } else {
            &sol.lower + &self.config.tolerance >= target
        }
    }

    pub fn compress(&self, p: &TypeOverA) -> Result<Compression> {
        let s = self.system;
        check_type(s, p)?;
        let cap = self.config.max_n.unwrap_or(s.n_columns()).min(s.n_columns());
        let mut n = cap.min(1);
        let (pool, b, game) = loop {
            let pool = build_pool(s, p, &self.table, n)?;
            let b = pool.agreement_matrix(s, p)?;
            let game = self.solver.solve(&b)?;
            if self.accepts(&game) {
                break (pool, b, game);
            }
            if n >= cap {
                return Err(Error::internal(format!(
                    "tuple size reached the cap {cap} with game value {} < 2/3",
                    rational::format(&game.value)
                )));
            }
            n = (n * 2).min(cap);
        };

        let committee = build_committee(&b, &game.nu, self.config.seed)?;
        let mut members = Vec::with_capacity(committee.m as usize);
        let mut member_budgets = Vec::with_capacity(members.capacity());
        for j in committee.expanded() {
            let hyp = &pool.hypotheses[j];
            let iso = hyp
                .witness
                .isolation
                .as_ref()
                .ok_or_else(|| Error::internal("witness without isolation data"))?;
            members.push(induced_signs(iso.a0.as_slice(), s.row(hyp.row)));
            member_budgets.push(iso.k_budget);
        }
        let certificate = Certificate::new(s, members)
            .map_err(|e| Error::internal(format!("member failed re-verification: {e}")))?;

        for (t, j) in committee.expanded().into_iter().enumerate() {
            if &certificate.traces()[t] != s.row(pool.hypotheses[j].row) {
                return Err(Error::internal("member trace differs from its hypothesis"));
            }
            if certificate.members()[t].len() as u64 > member_budgets[t] {
                return Err(Error::internal("member constraint exceeds k(n, m)"));
            }
        }
        if decode_bits(s, &certificate) != p.bits {
            return Err(Error::internal("certificate does not decode to its type"));
        }
        Ok(Compression {
            certificate,
            n_used: n,
            pool,
            game,
            committee,
            member_budgets,
        })
    }
}

/// One-shot compression with the default configuration.
pub fn compress_type(s: &SetSystem, p: &TypeOverA) -> Result<Certificate> {
    Compressor::new(s, PipelineConfig::default())?
        .compress(p)
        .map(|c| c.certificate)
}

/// Per-system aggregate over all realized types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSummary {
    pub types: usize,
    pub max_n_used: usize,
    pub max_pool: usize,
    pub min_game_value: Rational,
    pub max_m: usize,
    pub max_k: usize,
    pub min_margin: Rational,
    pub certificates: Vec<Certificate>,
}

/// Compresses every realized type, stopping at the first failure.
pub fn compress_all(s: &SetSystem, config: PipelineConfig) -> Result<SystemSummary> {
    let compressor = Compressor::new(s, config)?;
    let types = s.realized_types();
    let mut summary = SystemSummary {
        types: types.len(),
        max_n_used: 0,
        max_pool: 0,
        min_game_value: rational::int(1),
        max_m: 0,
        max_k: 0,
        min_margin: rational::int(1),
        certificates: Vec::with_capacity(types.len()),
    };
    for p in &types {
        let c = compressor.compress(p)?;
        summary.max_n_used = summary.max_n_used.max(c.n_used);
        summary.max_pool = summary.max_pool.max(c.pool_size());
        summary.min_game_value = summary.min_game_value.clone().min(c.game.value.clone());
        summary.max_m = summary.max_m.max(c.certificate.m());
        summary.max_k = summary.max_k.max(c.certificate.k_max());
        summary.min_margin = summary.min_margin.clone().min(c.committee.margin.clone());
        summary.certificates.push(c.certificate);
    }
    Ok(summary)
}
