//! Defining certificates: `m` signed constraints, each pinning down one full
//! trace, read by strict majority.
//!
//! Quantifiers range over the rows of the ambient system.

use serde::{Deserialize, Serialize};

use crate::bits::BitRow;
use crate::error::{Error, Result};
use crate::setsystem::{SetSystem, TypeOverA};
use crate::signed::SignedTuple;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    members: Vec<SignedTuple>,
    k_max: usize,
    /// The unique full trace satisfying each member.
    traces: Vec<BitRow>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub members: Vec<SignedTuple>,
    pub m: usize,
    pub k_max: usize,
    pub traces: Vec<Vec<u8>>,
}

/// The unique trace of rows satisfying `chi`.
fn isolated_trace(s: &SetSystem, chi: &SignedTuple) -> Result<BitRow> {
    if chi.max_column().is_some_and(|c| c >= s.n_columns()) {
        return Err(Error::input(format!("member {chi} mentions a missing column")));
    }
    let mut sat = s.rows().iter().filter(|r| chi.satisfied_by(r));
    let first = sat.next().ok_or_else(|| Error::input(format!("member {chi} is unsatisfiable")))?;
    if let Some(other) = sat.find(|r| *r != first) {
        return Err(Error::input(format!(
            "member {chi} does not isolate a trace: {first} and {other} both satisfy it"
        )));
    }
    Ok(first.clone())
}

impl Certificate {
    /// Validates every member against `s` and derives its trace.
    pub fn new(s: &SetSystem, members: Vec<SignedTuple>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::input("a certificate needs at least one member"));
        }
        let traces = members
            .iter()
            .map(|chi| isolated_trace(s, chi))
            .collect::<Result<Vec<_>>>()?;
        let k_max = members.iter().map(SignedTuple::len).max().unwrap_or(0);
        Ok(Certificate {
            members,
            k_max,
            traces,
        })
    }

    pub fn members(&self) -> &[SignedTuple] {
        &self.members
    }

    pub fn m(&self) -> usize {
        self.members.len()
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn traces(&self) -> &[BitRow] {
        &self.traces
    }

    pub fn to_doc(&self) -> CertificateDoc {
        CertificateDoc {
            members: self.members.clone(),
            m: self.m(),
            k_max: self.k_max,
            traces: self
                .traces
                .iter()
                .map(|t| t.iter().map(u8::from).collect())
                .collect(),
        }
    }

    /// Rebuilds from a document, rejecting it unless the stored `m`, `k_max`
    /// and traces match what `s` derives.
    pub fn from_doc(s: &SetSystem, doc: CertificateDoc) -> Result<Self> {
        let cert = Certificate::new(s, doc.members)?;
        if doc.m != cert.m() || doc.k_max != cert.k_max {
            return Err(Error::input("stored m or k_max does not match the members"));
        }
        let stored: Vec<BitRow> = doc
            .traces
            .iter()
            .map(|t| BitRow::from_bools(t.iter().map(|&b| b == 1)))
            .collect();
        if stored != cert.traces {
            return Err(Error::input("stored traces are stale for this system"));
        }
        Ok(cert)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("certificate serializes")
    }

    pub fn from_json(s: &SetSystem, json: &str) -> Result<Self> {
        let doc: CertificateDoc =
            serde_json::from_str(json).map_err(|e| Error::input(format!("bad certificate json: {e}")))?;
        Certificate::from_doc(s, doc)
    }
}

/// Members whose isolated trace has bit 1 at `a`.
pub fn votes_for(cert: &Certificate, a: usize) -> usize {
    cert.traces.iter().filter(|t| t.get(a)).count()
}

/// Some choice of satisfying rows has a strict majority with bit 1 at `a`.
/// Each member's satisfying rows share one trace, so this is a vote count.
pub fn eval_exists(cert: &Certificate, a: usize) -> bool {
    2 * votes_for(cert, a) > cert.m()
}

/// Some strict-majority set of members has bit 1 at `a` for every choice of
/// satisfying rows. Scans the rows of `s` directly.
pub fn eval_forall(s: &SetSystem, cert: &Certificate, a: usize) -> bool {
    let forced = cert
        .members
        .iter()
        .filter(|chi| {
            let mut sat = s.rows().iter().filter(|r| chi.satisfied_by(r)).peekable();
            sat.peek().is_some() && sat.all(|r| r.get(a))
        })
        .count();
    2 * forced > cert.m()
}

pub fn decode_bits(s: &SetSystem, cert: &Certificate) -> BitRow {
    BitRow::from_bools((0..s.n_columns()).map(|a| eval_exists(cert, a)))
}

/// The decoded type, or [`Error::NotCertified`] if no row realizes it.
pub fn decode(s: &SetSystem, cert: &Certificate) -> Result<TypeOverA> {
    let bits = decode_bits(s, cert);
    s.type_of(&bits)
        .map_err(|_| Error::NotCertified(format!("decoded trace {bits} is not realized")))
}
