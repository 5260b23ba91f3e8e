use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An odd classical pretzel knot `P(a1, a2, a3)`.
///
/// Parameters are sorted ascending on construction; any permutation of the
/// three twist regions gives an isotopic knot. `k_j = (a_j - 1) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "KnotRepr", into = "KnotRepr")]
pub struct PretzelKnot {
    a: [u32; 3],
}

#[derive(Serialize, Deserialize)]
struct KnotRepr {
    a: [u32; 3],
    k: [u32; 3],
}

impl TryFrom<KnotRepr> for PretzelKnot {
    type Error = Error;

    fn try_from(repr: KnotRepr) -> Result<Self> {
        let knot = PretzelKnot::new(repr.a[0], repr.a[1], repr.a[2])?;
        if knot.k() != repr.k {
            return Err(Error::InvalidKnot(format!(
                "k values {:?} do not match a values {:?}",
                repr.k, repr.a
            )));
        }
        Ok(knot)
    }
}

impl From<PretzelKnot> for KnotRepr {
    fn from(knot: PretzelKnot) -> Self {
        KnotRepr {
            a: knot.a,
            k: knot.k(),
        }
    }
}

impl PretzelKnot {
    /// Builds and normalizes `P(a1, a2, a3)`.
    ///
    /// Every parameter must be a positive odd integer. Of the knots with a
    /// single crossing in some twist region only `P(1,1,1)` is accepted.
    pub fn new(a1: u32, a2: u32, a3: u32) -> Result<Self> {
        let mut a = [a1, a2, a3];
        if let Some(bad) = a.iter().find(|&&x| x == 0 || x % 2 == 0) {
            return Err(Error::InvalidKnot(format!(
                "parameter {bad} is not a positive odd integer"
            )));
        }
        a.sort_unstable();
        if a[0] == 1 && a[2] != 1 {
            return Err(Error::Unsupported {
                a1: a[0],
                a2: a[1],
                a3: a[2],
            });
        }
        Ok(PretzelKnot { a })
    }

    pub fn a(&self) -> [u32; 3] {
        self.a
    }

    pub fn k(&self) -> [u32; 3] {
        self.a.map(|x| (x - 1) / 2)
    }

    /// All three twist regions have the same number of crossings, so the
    /// locus is the diagonal `r1 = r2 = r3`.
    pub fn is_symmetric(&self) -> bool {
        self.a[0] == self.a[2]
    }

    /// `1 + a1 a2 + a2 a3 + a3 a1`.
    pub fn pair_sum(&self) -> u64 {
        let [a1, a2, a3] = self.a.map(u64::from);
        1 + a1 * a2 + a2 * a3 + a3 * a1
    }
}

impl fmt::Display for PretzelKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({},{},{})", self.a[0], self.a[1], self.a[2])
    }
}

impl FromStr for PretzelKnot {
    type Err = Error;

    /// Parses `"a1,a2,a3"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::InvalidKnot(format!(
                "expected three comma-separated integers, got {s:?}"
            )));
        }
        let mut a = [0u32; 3];
        for (slot, part) in a.iter_mut().zip(&parts) {
            let value: i64 = part
                .parse()
                .map_err(|_| Error::InvalidKnot(format!("{part:?} is not an integer")))?;
            if value <= 0 || value > u32::MAX as i64 {
                return Err(Error::InvalidKnot(format!(
                    "parameter {value} is not a positive odd integer"
                )));
            }
            *slot = value as u32;
        }
        PretzelKnot::new(a[0], a[1], a[2])
    }
}
