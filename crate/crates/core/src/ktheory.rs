//! `K_0(C(CP_q^n)) ≅ Z^{n+1}` in the basis of the classes `[P_{j,1}]`,
//! together with the two maps of the six-term sequence that touch it.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{hermite_basis, integer_kernel};

/// Coordinates in the basis `[P_{j,1}] = [(P_1)^{(x) j} (x) I^{(x)(n-j)}]`, `j = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawK0Vector")]
pub struct K0Vector {
    n: u32,
    #[serde(with = "crate::bigjson::int_vec")]
    coords: Vec<BigInt>,
}

#[derive(Deserialize)]
struct RawK0Vector {
    n: u32,
    #[serde(with = "crate::bigjson::int_vec")]
    coords: Vec<BigInt>,
}

impl TryFrom<RawK0Vector> for K0Vector {
    type Error = Error;

    fn try_from(raw: RawK0Vector) -> Result<Self> {
        K0Vector::new(raw.n, raw.coords)
    }
}

impl K0Vector {
    pub fn new(n: u32, coords: Vec<BigInt>) -> Result<K0Vector> {
        if coords.len() != n as usize + 1 {
            return Err(Error::DimensionMismatch {
                left: coords.len(),
                right: n as usize + 1,
            });
        }
        Ok(K0Vector { n, coords })
    }

    pub fn zero(n: u32) -> K0Vector {
        K0Vector {
            n,
            coords: vec![BigInt::zero(); n as usize + 1],
        }
    }

    pub fn from_i64(n: u32, coords: &[i64]) -> Result<K0Vector> {
        K0Vector::new(n, coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, m: &BigInt) -> K0Vector {
        K0Vector {
            n: self.n,
            coords: self.coords.iter().map(|c| c * m).collect(),
        }
    }

    pub fn checked_add(&self, other: &K0Vector) -> Result<K0Vector> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n as usize,
                right: other.n as usize,
            });
        }
        Ok(K0Vector {
            n: self.n,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

impl Add for &K0Vector {
    type Output = K0Vector;

    /// Panics on mismatched `n`; use [`K0Vector::checked_add`] otherwise.
    fn add(self, rhs: &K0Vector) -> K0Vector {
        self.checked_add(rhs).expect("K0 vectors over different n")
    }
}

impl Neg for &K0Vector {
    type Output = K0Vector;

    fn neg(self) -> K0Vector {
        self.scale(&-BigInt::one())
    }
}

impl Sub for &K0Vector {
    type Output = K0Vector;

    fn sub(self, rhs: &K0Vector) -> K0Vector {
        self + &(-rhs)
    }
}

impl fmt::Display for K0Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// The free generator `[P_{j,1}]`.
pub fn generator(n: u32, j: i64) -> Result<K0Vector> {
    if j < 0 || j > n as i64 {
        return Err(Error::IndexOutOfRange {
            index: j,
            max: n as i64,
        });
    }
    let mut v = K0Vector::zero(n);
    v.coords[j as usize] = BigInt::one();
    Ok(v)
}

/// Map induced by restricting to `CP_q^{n-1}`: keeps `[P_{j,1}]` for `j < n`
/// and kills `[P_{n,1}]`, which generates the compact ideal's `K_0`.
pub fn nu_star(v: &K0Vector) -> Result<K0Vector> {
    if v.n == 0 {
        return Err(Error::DimensionTooSmall);
    }
    Ok(K0Vector {
        n: v.n - 1,
        coords: v.coords[..v.n as usize].to_vec(),
    })
}

/// Image of `m` times the generator of `K_0` of the compact ideal.
pub fn iota_star(n: u32, m: impl Into<BigInt>) -> Result<K0Vector> {
    if n == 0 {
        return Err(Error::DimensionTooSmall);
    }
    let mut v = K0Vector::zero(n);
    v.coords[n as usize] = m.into();
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub n: u32,
    pub status: Status,
    /// Hermite basis of `ker(nu_*)`.
    pub kernel: Vec<Vec<String>>,
    /// Hermite basis of `im(iota_*)`.
    pub image: Vec<Vec<String>>,
    pub nu_surjective: bool,
    pub iota_injective: bool,
    pub composite_zero: bool,
}

fn stringify(rows: &[Vec<BigInt>]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

/// Checks `0 -> Z -> K_0(CP^n) -> K_0(CP^{n-1}) -> 0` at the middle and right
/// terms by computing both subgroups of `Z^{n+1}` from the maps themselves.
pub fn check_exactness(n: u32) -> ExactnessReport {
    if n == 0 {
        return ExactnessReport {
            n,
            status: Status::NotApplicable,
            kernel: vec![],
            image: vec![],
            nu_surjective: false,
            iota_injective: false,
            composite_zero: false,
        };
    }
    let nu_columns: Vec<Vec<BigInt>> = (0..=n as i64)
        .map(|j| {
            let g = generator(n, j).expect("j in range");
            nu_star(&g).expect("n >= 1").coords
        })
        .collect();
    let iota_gen = iota_star(n, 1).expect("n >= 1");

    let kernel = integer_kernel(&nu_columns);
    let image = hermite_basis(std::slice::from_ref(&iota_gen.coords));

    let identity: Vec<Vec<BigInt>> = (0..n as i64)
        .map(|j| generator(n - 1, j).expect("j in range").coords)
        .collect();
    let nu_surjective = hermite_basis(&nu_columns) == identity;
    // iota: Z -> Z^{n+1} is injective iff its single column is nonzero
    let iota_injective = !iota_gen.is_zero();
    let composite_zero = nu_star(&iota_gen).expect("n >= 1").is_zero();

    let pass = kernel == image && nu_surjective && iota_injective && composite_zero;
    ExactnessReport {
        n,
        status: if pass { Status::Pass } else { Status::Fail },
        kernel: stringify(&kernel),
        image: stringify(&image),
        nu_surjective,
        iota_injective,
        composite_zero,
    }
}
