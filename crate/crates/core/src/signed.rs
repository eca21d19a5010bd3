//! Sign constraints `⋀ φ(x, a_i)^{ε_i}` over columns.
//!
//! Sign `0` asks for the bit to be 1 (the positive literal), sign `1` asks
//! for it to be 0.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitRow;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Sign {
    /// `φ^0 = φ`: the bit is 1.
    Pos,
    /// `φ^1 = ¬φ`: the bit is 0.
    Neg,
}

impl Sign {
    pub fn for_bit(bit: bool) -> Sign {
        if bit {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn required_bit(self) -> bool {
        self == Sign::Pos
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Sign::Pos => 0,
            Sign::Neg => 1,
        }
    }
}

impl TryFrom<u8> for Sign {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Sign::Pos),
            1 => Ok(Sign::Neg),
            other => Err(Error::input(format!("sign must be 0 or 1, got {other}"))),
        }
    }
}

impl From<Sign> for u8 {
    fn from(s: Sign) -> u8 {
        s.as_u8()
    }
}

/// A canonical conjunction of signed column literals: sorted by column with
/// each column at most once. Conflicting signs on one column are merged
/// into a single entry and the tuple is flagged contradictory.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, Sign)>", into = "Vec<(usize, Sign)>")]
pub struct SignedTuple {
    pairs: Vec<(usize, Sign)>,
    /// First column that received both signs.
    conflict: Option<usize>,
}

impl SignedTuple {
    pub fn new(mut pairs: Vec<(usize, Sign)>) -> Self {
        pairs.sort_unstable();
        let mut conflict = None;
        let mut out: Vec<(usize, Sign)> = Vec::with_capacity(pairs.len());
        for (col, sign) in pairs {
            match out.last() {
                Some(&(c, s)) if c == col => {
                    if s != sign && conflict.is_none() {
                        conflict = Some(col);
                    }
                }
                _ => out.push((col, sign)),
            }
        }
        SignedTuple {
            pairs: out,
            conflict,
        }
    }

    pub fn empty() -> Self {
        SignedTuple::default()
    }

    pub fn pairs(&self) -> &[(usize, Sign)] {
        &self.pairs
    }

    pub fn columns(&self) -> Vec<usize> {
        self.pairs.iter().map(|&(c, _)| c).collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_contradictory(&self) -> bool {
        self.conflict.is_some()
    }

    pub fn max_column(&self) -> Option<usize> {
        self.pairs.last().map(|&(c, _)| c)
    }

    pub fn satisfied_by(&self, row: &BitRow) -> bool {
        self.conflict.is_none()
            && self
                .pairs
                .iter()
                .all(|&(c, s)| row.get(c) == s.required_bit())
    }
}

impl TryFrom<Vec<(usize, Sign)>> for SignedTuple {
    type Error = Error;

    fn try_from(v: Vec<(usize, Sign)>) -> Result<Self> {
        Ok(SignedTuple::new(v))
    }
}

/// A contradictory tuple serializes with its conflicting pair so that it
/// stays contradictory when read back.
impl From<SignedTuple> for Vec<(usize, Sign)> {
    fn from(t: SignedTuple) -> Self {
        let mut out = t.pairs;
        if let Some(col) = t.conflict {
            let pos = out.iter().position(|&(c, _)| c == col).expect("conflict column present");
            let flipped = match out[pos].1 {
                Sign::Pos => Sign::Neg,
                Sign::Neg => Sign::Pos,
            };
            out.insert(pos + 1, (col, flipped));
        }
        out
    }
}

impl fmt::Display for SignedTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (c, s)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}:{}", s.as_u8())?;
        }
        if self.is_contradictory() {
            f.write_str(" !")?;
        }
        f.write_str("}")
    }
}

/// The unique signs on `columns` that `row` satisfies.
pub fn induced_signs(columns: &[usize], row: &BitRow) -> SignedTuple {
    SignedTuple::new(columns.iter().map(|&c| (c, Sign::for_bit(row.get(c)))).collect())
}
