//! Skolem witness tables: a choice of satisfying row for each consistent
//! sign constraint, populated on demand.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::setsystem::{PointSet, SetSystem};
use crate::signed::SignedTuple;
use crate::teaching::{ConstraintIsolation, ConstraintIsolator};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub row: usize,
    /// Present in isolated-witness mode: points whose trace pins `row` down.
    pub a0: Option<PointSet>,
    pub isolation: Option<ConstraintIsolation>,
}

pub trait WitnessStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn witness(&self, isolator: &ConstraintIsolator<'_>, chi: &SignedTuple) -> Result<Witness>;
}

/// Least-index satisfying row.
#[derive(Debug, Clone, Copy, Default)]
pub struct FirstWitness;

impl WitnessStrategy for FirstWitness {
    fn name(&self) -> &'static str {
        "first-witness"
    }

    fn witness(&self, isolator: &ConstraintIsolator<'_>, chi: &SignedTuple) -> Result<Witness> {
        let s = isolator.system();
        if chi.max_column().is_some_and(|c| c >= s.n_columns()) {
            return Err(Error::input("constraint column out of range"));
        }
        let row = s
            .rows()
            .iter()
            .position(|r| chi.satisfied_by(r))
            .ok_or(Error::Unsatisfiable)?;
        Ok(Witness {
            row,
            a0: None,
            isolation: None,
        })
    }
}

/// Realizer of the constraint-relative isolated type.
#[derive(Debug, Clone, Copy, Default)]
pub struct IsolatedWitness;

impl WitnessStrategy for IsolatedWitness {
    fn name(&self) -> &'static str {
        "isolated-witness"
    }

    fn witness(&self, isolator: &ConstraintIsolator<'_>, chi: &SignedTuple) -> Result<Witness> {
        let iso = isolator.isolate(chi)?;
        Ok(Witness {
            row: iso.p0.realizer,
            a0: Some(iso.a0.clone()),
            isolation: Some(iso),
        })
    }
}

pub const WITNESS_MODES: &[&str] = &["first-witness", "isolated-witness"];

pub fn witness_strategy(name: &str) -> Result<Box<dyn WitnessStrategy>> {
    match name {
        "first-witness" => Ok(Box::new(FirstWitness)),
        "isolated-witness" => Ok(Box::new(IsolatedWitness)),
        other => Err(Error::input(format!(
            "unknown witness mode {other:?}; known: {}",
            WITNESS_MODES.join(", ")
        ))),
    }
}

/// Witness cache keyed by canonical constraint. Inserts are idempotent, so
/// concurrent queries behave as some sequential order of them.
pub struct SkolemTable<'a> {
    isolator: ConstraintIsolator<'a>,
    strategy: Box<dyn WitnessStrategy>,
    entries: Mutex<HashMap<SignedTuple, Result<Witness>>>,
}

impl<'a> SkolemTable<'a> {
    pub fn new(system: &'a SetSystem, strategy: Box<dyn WitnessStrategy>) -> Self {
        SkolemTable {
            isolator: ConstraintIsolator::new(system),
            strategy,
            entries: Mutex::new(HashMap::new()),
        }
    }

    pub fn system(&self) -> &'a SetSystem {
        self.isolator.system()
    }

    pub fn mode(&self) -> &'static str {
        self.strategy.name()
    }

    pub fn dual_vc(&self) -> usize {
        self.isolator.dual_vc()
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("table lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// A row satisfying `chi`, or [`Error::Unsatisfiable`].
    pub fn query(&self, chi: &SignedTuple) -> Result<Witness> {
        if let Some(hit) = self.entries.lock().expect("table lock").get(chi) {
            return hit.clone();
        }
        let computed = self.strategy.witness(&self.isolator, chi);
        if let Ok(w) = &computed {
            if !chi.satisfied_by(self.system().row(w.row)) {
                return Err(Error::internal(format!("witness {} violates {chi}", w.row)));
            }
        }
        if matches!(computed, Err(Error::Input(_))) {
            return computed;
        }
        let mut entries = self.entries.lock().expect("table lock");
        entries.entry(chi.clone()).or_insert(computed).clone()
    }
}

/// A table in the named mode.
pub fn build_skolem_table<'a>(system: &'a SetSystem, mode: &str) -> Result<SkolemTable<'a>> {
    Ok(SkolemTable::new(system, witness_strategy(mode)?))
}
