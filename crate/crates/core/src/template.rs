//! One fixed certificate shape for every type of a system, and the
//! type-counting check against it.
//!
//! Every certificate is padded to `J` member slots of `k` pairs. A short
//! member repeats its first pair, which leaves its constraint unchanged. A
//! short member list repeats the first member into the spare slots, and the
//! padded certificate keeps its original member count as a selector: the
//! vote is taken over the first `active` slots. Adding copies of one member
//! to a vote can flip a majority, so the spare slots never vote.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bits::BitRow;
use crate::certificate::{decode_bits, Certificate};
use crate::error::{Error, Result};
use crate::setsystem::{PointSet, SetSystem};
use crate::signed::{Sign, SignedTuple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformTemplate {
    #[serde(rename = "J_slots")]
    pub j_slots: usize,
    pub k_slots: usize,
    /// `J * k` parameter slots.
    #[serde(rename = "K")]
    pub k_param: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaddedCertificate {
    pub active: usize,
    /// Exactly `J` slots; each holds `k` pairs, or none for an empty member.
    pub slots: Vec<Vec<(usize, Sign)>>,
}

impl PaddedCertificate {
    fn member(slot: &[(usize, Sign)]) -> SignedTuple {
        SignedTuple::new(slot.to_vec())
    }

    /// Majority over the active slots.
    pub fn decode(&self, s: &SetSystem) -> Result<BitRow> {
        if self.active == 0 || self.active > self.slots.len() {
            return Err(Error::input("active member count out of range"));
        }
        let members = self.slots[..self.active].iter().map(|s| Self::member(s)).collect();
        Ok(decode_bits(s, &Certificate::new(s, members)?))
    }

    /// Majority over every slot, spare ones included.
    pub fn decode_all_slots(&self, s: &SetSystem) -> Result<BitRow> {
        let members = self.slots.iter().map(|s| Self::member(s)).collect();
        Ok(decode_bits(s, &Certificate::new(s, members)?))
    }
}

fn pad(cert: &Certificate, j: usize, k: usize) -> PaddedCertificate {
    let mut slots: Vec<Vec<(usize, Sign)>> = cert
        .members()
        .iter()
        .map(|m| {
            let mut pairs = m.pairs().to_vec();
            if let Some(&first) = pairs.first() {
                pairs.resize(k, first);
            }
            pairs
        })
        .collect();
    let first = slots[0].clone();
    slots.resize(j, first);
    PaddedCertificate {
        active: cert.m(),
        slots,
    }
}

/// Shapes every certificate to `J = max m` rounded up to odd and
/// `k = max k_max`, checking that each padded decode matches the original.
pub fn make_template(
    s: &SetSystem,
    certs: &[Certificate],
) -> Result<(UniformTemplate, Vec<PaddedCertificate>)> {
    if certs.is_empty() {
        return Err(Error::input("no certificates to template"));
    }
    let max_m = certs.iter().map(Certificate::m).max().expect("nonempty");
    let j_slots = if max_m % 2 == 0 { max_m + 1 } else { max_m };
    let k_slots = certs.iter().map(Certificate::k_max).max().expect("nonempty");
    let padded: Vec<PaddedCertificate> = certs.iter().map(|c| pad(c, j_slots, k_slots)).collect();
    for (c, p) in certs.iter().zip(&padded) {
        if p.decode(s)? != decode_bits(s, c) {
            return Err(Error::internal("padding changed a decode"));
        }
    }
    Ok((
        UniformTemplate {
            j_slots,
            k_slots,
            k_param: j_slots * k_slots,
        },
        padded,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeCountReport {
    pub distinct_rows: usize,
    pub columns: usize,
    pub k_param: usize,
    /// `|A|^K`.
    pub bound: BigUint,
    pub counting_holds: bool,
    pub vc: usize,
    pub witness: PointSet,
    /// Distinct traces on `witness`.
    pub witness_traces: usize,
    pub shatter_holds: bool,
}

impl TypeCountReport {
    pub fn holds(&self) -> bool {
        self.counting_holds && self.shatter_holds
    }
}

/// Distinct rows against `|A|^K`, and `2^d` traces on a shattered `d`-set.
pub fn count_types_check(s: &SetSystem, k_param: usize) -> Result<TypeCountReport> {
    if s.n_columns() < 2 {
        return Err(Error::input("type counting needs at least two columns"));
    }
    let distinct_rows = s.distinct_row_count();
    let exp = u32::try_from(k_param).map_err(|_| Error::input("K too large"))?;
    let bound = BigUint::from(s.n_columns()).pow(exp);
    let witness = s.vc_witness();
    let vc = witness.len();
    let witness_traces = s.trace_count(&witness)?;
    Ok(TypeCountReport {
        distinct_rows,
        columns: s.n_columns(),
        k_param,
        counting_holds: BigUint::from(distinct_rows) <= bound,
        bound,
        vc,
        witness,
        witness_traces,
        shatter_holds: vc < usize::BITS as usize && witness_traces == 1usize << vc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signed::induced_signs;

    fn thresholds(n: usize) -> SetSystem {
        let rows = (0..=n).map(|t| BitRow::from_bools((0..n).map(|x| x < t))).collect();
        SetSystem::from_rows(rows).unwrap()
    }

    fn full(s: &SetSystem, i: usize) -> SignedTuple {
        induced_signs(&(0..s.n_columns()).collect::<Vec<_>>(), s.row(i))
    }

    #[test]
    fn single_certificate_keeps_its_shape() {
        let s = thresholds(4);
        let c = Certificate::new(&s, vec![full(&s, 2)]).unwrap();
        let (t, padded) = make_template(&s, std::slice::from_ref(&c)).unwrap();
        assert_eq!((t.j_slots, t.k_slots, t.k_param), (1, 4, 4));
        assert_eq!(padded[0].decode(&s).unwrap(), decode_bits(&s, &c));
    }

    #[test]
    fn one_and_three_members() {
        let s = thresholds(4);
        let a = Certificate::new(&s, vec![full(&s, 1)]).unwrap();
        let b = Certificate::new(&s, vec![full(&s, 3), full(&s, 2), full(&s, 3)]).unwrap();
        let (t, padded) = make_template(&s, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(t.j_slots, 3);
        assert!(padded[0].slots.iter().all(|slot| slot == &padded[0].slots[0]));
        // a single member repeated keeps its vote
        assert_eq!(padded[0].decode_all_slots(&s).unwrap(), decode_bits(&s, &a));
        assert_eq!(padded[1].decode(&s).unwrap(), decode_bits(&s, &b));
    }

    #[test]
    fn spare_slots_do_not_vote() {
        // two of three members vote 1 at column 1; two extra copies of the
        // dissenting first member would outvote them
        let s = thresholds(4);
        let three = Certificate::new(&s, vec![full(&s, 1), full(&s, 2), full(&s, 3)]).unwrap();
        let big = Certificate::new(&s, vec![full(&s, 0); 5]).unwrap();
        let (_, padded) = make_template(&s, &[three.clone(), big]).unwrap();
        assert_eq!(padded[0].decode(&s).unwrap(), decode_bits(&s, &three));
        assert_ne!(padded[0].decode_all_slots(&s).unwrap(), decode_bits(&s, &three));
    }

    #[test]
    fn short_members_repeat_their_first_pair() {
        let s = thresholds(4);
        let short = SignedTuple::new(vec![(1, Sign::Pos), (2, Sign::Neg)]);
        let c = Certificate::new(&s, vec![short.clone(), full(&s, 2), short]).unwrap();
        let (t, padded) = make_template(&s, &[c]).unwrap();
        assert_eq!(t.k_slots, 4);
        assert!(padded[0].slots.iter().all(|slot| slot.len() == 4));
        assert_eq!(padded[0].slots[0][2], (1, Sign::Pos));
    }

    #[test]
    fn empty_list_rejected() {
        assert!(make_template(&thresholds(3), &[]).is_err());
    }

    #[test]
    fn counting_examples() {
        let single = SetSystem::from_strs(&["01"]).unwrap();
        let r = count_types_check(&single, 1).unwrap();
        assert!(r.holds());
        assert_eq!(r.bound, BigUint::from(2u32));

        let th = thresholds(6);
        let summary = crate::pipeline::compress_all(&th, Default::default()).unwrap();
        let (t, _) = make_template(&th, &summary.certificates).unwrap();
        let r = count_types_check(&th, t.k_param).unwrap();
        assert_eq!(r.distinct_rows, 7);
        assert!(r.counting_holds);
        // 7 rows cannot be coded by one parameter from 6 columns
        assert!(!count_types_check(&th, 1).unwrap().counting_holds);
        assert_eq!(r.witness_traces, 2);
    }
}
