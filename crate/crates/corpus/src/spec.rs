//! Family specifications: `kind(p1,p2,...)` with an optional `@seed`.

use std::fmt;
use std::str::FromStr;

use udtfs_core::{Error, Result, SetSystem};

use crate::generators::{check_params, generator};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub kind: String,
    pub params: Vec<usize>,
    pub seed: u64,
}

impl FamilySpec {
    pub fn new(kind: &str, params: &[usize], seed: u64) -> Result<Self> {
        let spec = FamilySpec {
            kind: kind.to_string(),
            params: params.to_vec(),
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_params(generator(&self.kind)?, &self.params)
    }

    pub fn generate(&self) -> Result<SetSystem> {
        let g = generator(&self.kind)?;
        check_params(g, &self.params)?;
        Ok(g.build(&self.params, self.seed))
    }

    pub fn expected_vc(&self) -> Result<Option<usize>> {
        Ok(generator(&self.kind)?.expected_vc(&self.params))
    }
}

/// Shorthand for [`FamilySpec::generate`].
pub fn generate(spec: &FamilySpec) -> Result<SetSystem> {
    spec.generate()
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params.iter().map(usize::to_string).collect();
        write!(f, "{}({})", self.kind, params.join(","))?;
        if self.seed != 0 {
            write!(f, "@{}", self.seed)?;
        }
        Ok(())
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Input(format!("bad family spec {s:?}; expected kind(p1,...)[@seed]"));
        let (body, seed) = match s.rsplit_once('@') {
            Some((b, seed)) => (b.trim(), seed.trim().parse().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (kind, rest) = body.split_once('(').ok_or_else(bad)?;
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let params = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| bad()))
                .collect::<Result<Vec<usize>>>()?
        };
        FamilySpec::new(kind.trim(), &params, seed)
    }
}

/// One spec per line; blank lines and `#` comments are skipped.
pub fn parse_spec_list(text: &str) -> Result<Vec<FamilySpec>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::parse)
        .collect()
}

/// About fifteen systems with VC dimension at most 3, at most 14 columns and
/// at most 256 rows.
pub fn standard_corpus() -> Vec<FamilySpec> {
    [
        "powerset(2)",
        "powerset(3)",
        "thresholds(4)",
        "thresholds(6)",
        "thresholds(10)",
        "intervals(4)",
        "intervals(5)",
        "intervals(8)",
        "k-interval-unions(7,1)",
        "halfplane-grid(2,2)",
        "halfplane-grid(3,3)",
        "halfplane-grid(4,3)",
        "mod-classes(8,3)",
        "mod-classes(12,4)",
        "random(10,6)@1",
        "random(12,7)@2",
    ]
    .iter()
    .map(|s| s.parse().expect("standard specs are valid"))
    .collect()
}
