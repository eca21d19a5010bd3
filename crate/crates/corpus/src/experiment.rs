//! Batch runs: every realized type of every system through the pipeline and
//! the full verification suite, one record per system.

use std::io::{Read, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use udtfs_core::certificate::{decode_bits, eval_exists, eval_forall, votes_for};
use udtfs_core::rational::{self, Rational};
use udtfs_core::{
    count_types_check, isolate, make_template, t_budget, Compressor, Error, PipelineConfig, Result,
    SetSystem,
};

use crate::spec::FamilySpec;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExperimentConfig {
    pub pipeline: PipelineConfig,
    /// Record wall-clock time. Off by default so output is reproducible.
    pub timings: bool,
}

/// One CSV line. Pipeline fields are empty when the run failed before
/// producing them. `game_value` is the smallest value over the system's
/// types; `N_used`, `pool_size`, `m` and `k_max` are the largest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub family: String,
    #[serde(rename = "A")]
    pub columns: Option<usize>,
    pub rows: Option<usize>,
    pub vc: Option<usize>,
    pub dual_vc: Option<usize>,
    #[serde(rename = "N_used")]
    pub n_used: Option<usize>,
    pub pool_size: Option<usize>,
    pub game_value: Option<String>,
    pub m: Option<usize>,
    pub k_max: Option<usize>,
    #[serde(rename = "K")]
    pub k_param: Option<usize>,
    pub runtime_ms: Option<u64>,
    pub status: String,
    pub reason: String,
}

impl ExperimentRecord {
    fn empty(family: String) -> Self {
        ExperimentRecord {
            family,
            columns: None,
            rows: None,
            vc: None,
            dual_vc: None,
            n_used: None,
            pool_size: None,
            game_value: None,
            m: None,
            k_max: None,
            k_param: None,
            runtime_ms: None,
            status: "fail".into(),
            reason: String::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

fn fail(msg: impl Into<String>) -> Error {
    Error::NotCertified(msg.into())
}

fn run_system(s: &SetSystem, config: &PipelineConfig, rec: &mut ExperimentRecord) -> Result<()> {
    let vc = s.vc_dim();
    rec.columns = Some(s.n_columns());
    rec.rows = Some(s.n_rows());
    rec.vc = Some(vc);

    let ts = isolate(s);
    if ts.points.len() as u64 > t_budget(vc) {
        return Err(fail(format!("teaching set of size {} exceeds t({vc})", ts.points.len())));
    }

    let compressor = Compressor::new(s, config.clone())?;
    rec.dual_vc = Some(compressor.table().dual_vc());
    let margin_floor = if config.solver == "exact-lp" {
        None
    } else {
        Some(rational::ratio(2, 3) - &config.tolerance - rational::ratio(1, 8))
    };

    let mut certs = Vec::new();
    let mut min_value: Option<Rational> = None;
    let (mut n_used, mut pool, mut m, mut k) = (0, 0, 0, 0);
    for p in s.realized_types() {
        let c = compressor.compress(&p)?;
        let cert = &c.certificate;
        if decode_bits(s, cert) != p.bits {
            return Err(fail(format!("type {} did not round-trip", p.bits)));
        }
        for a in 0..s.n_columns() {
            if eval_exists(cert, a) != eval_forall(s, cert, a) {
                return Err(fail(format!("exists/forall disagree on type {} at {a}", p.bits)));
            }
            let agree = if p.bits.get(a) { votes_for(cert, a) } else { cert.m() - votes_for(cert, a) };
            if 2 * agree <= cert.m() {
                return Err(fail(format!("no strict majority on type {} at {a}", p.bits)));
            }
        }
        if !c.game.exact {
            if let Some(floor) = &margin_floor {
                if &c.committee.margin < floor {
                    return Err(fail(format!(
                        "margin {} below {}",
                        rational::format(&c.committee.margin),
                        rational::format(floor)
                    )));
                }
            }
        }
        n_used = n_used.max(c.n_used);
        pool = pool.max(c.pool_size());
        m = m.max(cert.m());
        k = k.max(cert.k_max());
        if min_value.as_ref().is_none_or(|v| c.game.value < *v) {
            min_value = Some(c.game.value.clone());
        }
        certs.push(c.certificate);
    }
    rec.n_used = Some(n_used);
    rec.pool_size = Some(pool);
    rec.m = Some(m);
    rec.k_max = Some(k);
    rec.game_value = min_value.as_ref().map(rational::format);

    let (template, padded) = make_template(s, &certs)?;
    rec.k_param = Some(template.k_param);
    for (p, cert) in padded.iter().zip(&certs) {
        if p.decode(s)? != decode_bits(s, cert) {
            return Err(fail("padded certificate decodes differently"));
        }
    }
    let report = count_types_check(s, template.k_param)?;
    if !report.holds() {
        return Err(fail(format!(
            "type counting fails: {} rows vs {}^{}",
            report.distinct_rows, report.columns, report.k_param
        )));
    }
    Ok(())
}

/// Runs one spec to a record; failures are recorded, never raised.
pub fn run_one(spec: &FamilySpec, config: &ExperimentConfig) -> ExperimentRecord {
    let start = Instant::now();
    let mut rec = ExperimentRecord::empty(spec.to_string());
    let outcome = spec.generate().and_then(|s| run_system(&s, &config.pipeline, &mut rec));
    match outcome {
        Ok(()) => rec.status = "pass".into(),
        Err(e) => rec.reason = e.to_string(),
    }
    if config.timings {
        rec.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    rec
}

/// Records in input order; instances run in parallel.
pub fn run_experiment(specs: &[FamilySpec], config: &ExperimentConfig) -> Vec<ExperimentRecord> {
    specs.par_iter().map(|s| run_one(s, config)).collect()
}

pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(|e| Error::Input(format!("csv write: {e}")))?;
    }
    w.flush().map_err(|e| Error::Input(format!("csv write: {e}")))?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ExperimentRecord>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(|e| Error::Input(format!("csv read: {e}"))))
        .collect()
}

pub fn to_csv_string(records: &[ExperimentRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}
