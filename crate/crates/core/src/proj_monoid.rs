//! Normal forms for the monoid of projection classes over `C(S_q^{2n+1})`.
//!
//! Every projection over the odd quantum sphere is equivalent to exactly one
//! basic class `P[j,k]`: either `k` stacked identities (`j = 0`, rank `k`)
//! or the rank-0 class `(P_1)^{j-1} (x) P_k (x) I^{n-j}` with `1 <= j <= n`,
//! `k >= 1`. The diagonal sum of two classes collapses to one of them, and
//! the vector of extended-natural invariants `rho_0..rho_n` separates classes.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of `Z_>= ∪ {∞}` with saturating addition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedNat {
    Finite(BigUint),
    Infinite,
}

impl ExtendedNat {
    pub fn zero() -> Self {
        ExtendedNat::Finite(BigUint::zero())
    }

    pub fn finite(v: impl Into<BigUint>) -> Self {
        ExtendedNat::Finite(v.into())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedNat::Infinite)
    }
}

impl Add for &ExtendedNat {
    type Output = ExtendedNat;

    fn add(self, rhs: &ExtendedNat) -> ExtendedNat {
        match (self, rhs) {
            (ExtendedNat::Finite(a), ExtendedNat::Finite(b)) => ExtendedNat::Finite(a + b),
            _ => ExtendedNat::Infinite,
        }
    }
}

impl Add for ExtendedNat {
    type Output = ExtendedNat;

    fn add(self, rhs: ExtendedNat) -> ExtendedNat {
        &self + &rhs
    }
}

impl PartialOrd for ExtendedNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtendedNat::Finite(a), ExtendedNat::Finite(b)) => a.cmp(b),
            (ExtendedNat::Finite(_), ExtendedNat::Infinite) => Ordering::Less,
            (ExtendedNat::Infinite, ExtendedNat::Finite(_)) => Ordering::Greater,
            (ExtendedNat::Infinite, ExtendedNat::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtendedNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedNat::Finite(v) => write!(f, "{v}"),
            ExtendedNat::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedNat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedNat::Finite(v) => crate::bigjson::uint::serialize(v, s),
            ExtendedNat::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedNat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) if s == "inf" => Ok(ExtendedNat::Infinite),
            serde_json::Value::Number(n) => n
                .to_string()
                .parse::<BigUint>()
                .map(ExtendedNat::Finite)
                .map_err(|_| D::Error::custom(format!("not a non-negative integer: {n}"))),
            other => Err(D::Error::custom(format!(
                "expected a non-negative integer or \"inf\", found {other}"
            ))),
        }
    }
}

/// The complete invariant `(rho_0, ..., rho_n)` of a projection class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RhoVector(pub Vec<ExtendedNat>);

impl RhoVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[ExtendedNat] {
        &self.0
    }

    /// Entrywise sum in `Z_>= ∪ {∞}`.
    pub fn add(&self, other: &RhoVector) -> Result<RhoVector> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(RhoVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }
}

impl fmt::Display for RhoVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// A basic projection class `P[j,k]` over `C(S_q^{2n+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawProjClass", into = "RawProjClass")]
pub struct ProjClass {
    n: u32,
    j: u32,
    k: BigUint,
}

#[derive(Serialize, Deserialize)]
struct RawProjClass {
    n: i64,
    j: i64,
    #[serde(with = "crate::bigjson::int")]
    k: BigInt,
}

impl TryFrom<RawProjClass> for ProjClass {
    type Error = Error;

    fn try_from(raw: RawProjClass) -> Result<Self> {
        ProjClass::validate(raw.n, raw.j, raw.k)
    }
}

impl From<ProjClass> for RawProjClass {
    fn from(p: ProjClass) -> Self {
        RawProjClass {
            n: p.n as i64,
            j: p.j as i64,
            k: BigInt::from(p.k),
        }
    }
}

impl ProjClass {
    /// Checks raw integers against the class invariants.
    pub fn validate(n: i64, j: i64, k: impl Into<BigInt>) -> Result<ProjClass> {
        let k: BigInt = k.into();
        let invalid = |reason| Error::InvalidClass {
            n,
            j,
            k: k.to_string(),
            reason,
        };
        if n < 0 {
            return Err(invalid("n must be non-negative"));
        }
        if n > u32::MAX as i64 {
            return Err(invalid("n is too large"));
        }
        if k.is_negative() {
            return Err(invalid("multiplicity k must be non-negative"));
        }
        if j < 0 || j > n {
            return Err(invalid("level j must satisfy 0 <= j <= n"));
        }
        if j >= 1 && k.is_zero() {
            return Err(invalid("classes with j >= 1 need k >= 1"));
        }
        Ok(ProjClass {
            n: n as u32,
            j: j as u32,
            k: k.magnitude().clone(),
        })
    }

    pub fn zero(n: u32) -> ProjClass {
        ProjClass {
            n,
            j: 0,
            k: BigUint::zero(),
        }
    }

    /// The free class of rank `k`: `k` stacked copies of the identity.
    pub fn trivial(n: u32, k: impl Into<BigUint>) -> ProjClass {
        ProjClass {
            n,
            j: 0,
            k: k.into(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn k(&self) -> &BigUint {
        &self.k
    }

    pub fn is_zero(&self) -> bool {
        self.k.is_zero()
    }

    fn same_dimension(&self, other: &ProjClass) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n as usize,
                right: other.n as usize,
            });
        }
        Ok(())
    }
}

impl fmt::Display for ProjClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P[{},{}]", self.j, self.k)
    }
}

/// Diagonal sum of two classes.
///
/// Equal levels add multiplicities; otherwise the lower level wins. In
/// particular any rank-positive class `P[0,k]` absorbs every rank-0 class.
pub fn boxplus(a: &ProjClass, b: &ProjClass) -> Result<ProjClass> {
    a.same_dimension(b)?;
    if a.is_zero() {
        return Ok(b.clone());
    }
    if b.is_zero() {
        return Ok(a.clone());
    }
    Ok(match a.j.cmp(&b.j) {
        Ordering::Equal => ProjClass {
            n: a.n,
            j: a.j,
            k: &a.k + &b.k,
        },
        Ordering::Less => a.clone(),
        Ordering::Greater => b.clone(),
    })
}

/// Left fold of [`boxplus`]; the empty sum is the zero class over `n`.
pub fn normalize(n: u32, terms: &[ProjClass]) -> Result<ProjClass> {
    terms
        .iter()
        .try_fold(ProjClass::zero(n), |acc, t| boxplus(&acc, t))
}

pub fn rho(p: &ProjClass) -> RhoVector {
    let entries = (0..=p.n)
        .map(|l| {
            if p.is_zero() || p.j > l {
                ExtendedNat::zero()
            } else if p.j == l {
                ExtendedNat::Finite(p.k.clone())
            } else {
                ExtendedNat::Infinite
            }
        })
        .collect();
    RhoVector(entries)
}

/// Rank of the image over the circle: `k` for `j = 0`, else 0.
pub fn rank(p: &ProjClass) -> BigUint {
    if p.j == 0 {
        p.k.clone()
    } else {
        BigUint::zero()
    }
}

/// Class in `K_0(C(S_q^{2n+1})) ≅ Z`.
pub fn k0_sphere_class(p: &ProjClass) -> BigInt {
    BigInt::from(rank(p))
}

pub fn is_equivalent(a: &ProjClass, b: &ProjClass) -> Result<bool> {
    a.same_dimension(b)?;
    Ok(a.j == b.j && a.k == b.k)
}

pub fn is_stably_equivalent(a: &ProjClass, b: &ProjClass) -> Result<bool> {
    a.same_dimension(b)?;
    Ok(k0_sphere_class(a) == k0_sphere_class(b))
}
