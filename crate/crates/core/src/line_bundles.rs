//! Quantum line bundles `L_k` over `CP_q^n` as explicit projections.
//!
//! For `k <= 0`, `L_k` is the corner `P_{-|k|} (x) I^{(x)(n-1)}` (with
//! `P_{-0} = I`). For `k > 0` it is a diagonal sum with `C(k+j-1, j)` copies of
//! `(P_1)^{(x) j} (x) I^{(x)(n-j)}` for each `j = 0..=n`. The multiplicities are
//! produced two ways: the binomial closed form, and by expanding the
//! splitting rule
//!
//! ```text
//! (k, j) = (0, j) + sum_{l=1..k} (l, j+1)     for j < n
//! (l, n) = (0, n)
//! ```
//!
//! until only degree-0 terms remain.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ktheory::{generator, K0Vector};

/// Exact binomial coefficient `C(k, j)`.
pub fn binomial(k: i64, j: i64) -> Result<BigUint> {
    if j < 0 || j > k {
        return Err(Error::OutOfRange(format!("C({k},{j}) needs 0 <= j <= k")));
    }
    let j = j.min(k - j);
    let mut acc = BigUint::one();
    for i in 0..j {
        // acc = C(k, i) here, so the division is exact
        acc = acc * BigUint::from((k - i) as u64) / BigUint::from((i + 1) as u64);
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineBundleDecomposition {
    /// `P_{-m} (x) I^{(x)(n-1)}`; `m = 0` is the identity.
    Corner { m: u64 },
    /// `mult[j]` copies of `(P_1)^{(x) j} (x) I^{(x)(n-j)}`.
    Multiset { mult: Vec<BigUint> },
}

impl LineBundleDecomposition {
    pub fn multiplicities(&self) -> Option<&[BigUint]> {
        match self {
            LineBundleDecomposition::Multiset { mult } => Some(mult),
            LineBundleDecomposition::Corner { .. } => None,
        }
    }

    /// Number of elementary summands.
    pub fn term_count(&self) -> BigUint {
        match self {
            LineBundleDecomposition::Corner { .. } => BigUint::one(),
            LineBundleDecomposition::Multiset { mult } => mult.iter().sum(),
        }
    }
}

/// `L_k` over `CP_q^n` with its decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "WireLineBundle", try_from = "WireLineBundle")]
pub struct LineBundle {
    pub n: u32,
    pub k: i64,
    pub decomposition: LineBundleDecomposition,
}

#[derive(Serialize, Deserialize)]
struct WireLineBundle {
    n: u32,
    k: i64,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<u64>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::bigjson::opt_uint_vec"
    )]
    mult: Option<Vec<BigUint>>,
}

impl From<LineBundle> for WireLineBundle {
    fn from(b: LineBundle) -> Self {
        let (kind, m, mult) = match b.decomposition {
            LineBundleDecomposition::Corner { m } => ("corner", Some(m), None),
            LineBundleDecomposition::Multiset { mult } => ("multiset", None, Some(mult)),
        };
        WireLineBundle {
            n: b.n,
            k: b.k,
            kind: kind.to_string(),
            m,
            mult,
        }
    }
}

impl TryFrom<WireLineBundle> for LineBundle {
    type Error = String;

    fn try_from(w: WireLineBundle) -> std::result::Result<Self, String> {
        let decomposition = match (w.kind.as_str(), w.m, w.mult) {
            ("corner", Some(m), None) => LineBundleDecomposition::Corner { m },
            ("multiset", None, Some(mult)) => {
                if mult.len() != w.n as usize + 1 {
                    return Err(format!("mult must have {} entries", w.n + 1));
                }
                LineBundleDecomposition::Multiset { mult }
            }
            (kind, _, _) => return Err(format!("malformed line bundle of kind {kind:?}")),
        };
        Ok(LineBundle {
            n: w.n,
            k: w.k,
            decomposition,
        })
    }
}

impl fmt::Display for LineBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rest = self.n.saturating_sub(1) as usize;
        match &self.decomposition {
            LineBundleDecomposition::Corner { m } => {
                if *m == 0 {
                    write!(f, "I")?;
                } else {
                    write!(f, "P_-{m}")?;
                }
                for _ in 0..rest {
                    write!(f, " (x) I")?;
                }
                Ok(())
            }
            LineBundleDecomposition::Multiset { mult } => {
                for (j, c) in mult.iter().enumerate() {
                    if j > 0 {
                        f.write_str(" (+) ")?;
                    }
                    write!(f, "{c} x [P_1^{j} (x) I^{}]", self.n as usize - j)?;
                }
                Ok(())
            }
        }
    }
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::DimensionTooSmall);
    }
    Ok(())
}

/// Decomposition of `L_k` from the binomial formula.
pub fn closed_form(n: u32, k: i64) -> Result<LineBundle> {
    check_n(n)?;
    let decomposition = if k <= 0 {
        LineBundleDecomposition::Corner {
            m: k.unsigned_abs(),
        }
    } else {
        let mult = (0..=n as i64)
            .map(|j| binomial(k + j - 1, j))
            .collect::<Result<Vec<_>>>()?;
        LineBundleDecomposition::Multiset { mult }
    };
    Ok(LineBundle {
        n,
        k,
        decomposition,
    })
}

/// Memoized expansion of the splitting rule over `CP_q^n`.
///
/// Entries are keyed by `(degree, level)` and hold the multiplicity vector
/// reached from that term. One expander can serve many degrees for the same
/// `n`.
#[derive(Debug)]
pub struct RecursionExpander {
    n: u32,
    memo: HashMap<(u64, u32), Vec<BigUint>>,
}

impl RecursionExpander {
    pub fn new(n: u32) -> Result<RecursionExpander> {
        check_n(n)?;
        Ok(RecursionExpander {
            n,
            memo: HashMap::new(),
        })
    }

    fn unit(&self, level: u32) -> Vec<BigUint> {
        let mut v = vec![BigUint::zero(); self.n as usize + 1];
        v[level as usize] = BigUint::one();
        v
    }

    /// Multiplicities reached from the term `(degree, level)`.
    pub fn expand_term(&mut self, degree: u64, level: u32) -> Vec<BigUint> {
        if degree == 0 || level == self.n {
            return self.unit(level);
        }
        if let Some(hit) = self.memo.get(&(degree, level)) {
            return hit.clone();
        }
        let mut acc = self.unit(level);
        for l in 1..=degree {
            let sub = self.expand_term(l, level + 1);
            for (a, s) in acc.iter_mut().zip(sub) {
                *a += s;
            }
        }
        self.memo.insert((degree, level), acc.clone());
        acc
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }
}

/// Decomposition of `L_k`, `k >= 1`, by expanding the splitting rule from `(k, 0)`.
pub fn recursion_expand(n: u32, k: i64) -> Result<LineBundle> {
    if k < 1 {
        return Err(Error::OutOfRange(format!(
            "recursive expansion needs k >= 1, got {k}"
        )));
    }
    let mut ex = RecursionExpander::new(n)?;
    let mult = ex.expand_term(k as u64, 0);
    Ok(LineBundle {
        n,
        k,
        decomposition: LineBundleDecomposition::Multiset { mult },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftedSum {
    pub i: i64,
    #[serde(with = "crate::bigjson::uint")]
    pub lhs: BigUint,
    #[serde(with = "crate::bigjson::uint")]
    pub rhs: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HockeyStick {
    pub l: i64,
    pub k: i64,
    #[serde(with = "crate::bigjson::uint")]
    pub lhs: BigUint,
    #[serde(with = "crate::bigjson::uint")]
    pub rhs: BigUint,
    pub shifted: Vec<ShiftedSum>,
    pub equal: bool,
}

/// Evaluates both summation identities used in the inductive step:
///
/// ```text
/// sum_{m=1..k} C(k-m+l-2, l-2) = C(k+l-2, l-1)
/// sum_{m=i..k} C(k-m+l-2, l-2) = C(k-i+l-1, l-1)    for 1 <= i <= k
/// ```
pub fn hockey_stick(l: i64, k: i64) -> Result<HockeyStick> {
    if l < 2 || k < 1 {
        return Err(Error::OutOfRange(format!(
            "hockey-stick sums need l >= 2 and k >= 1, got l = {l}, k = {k}"
        )));
    }
    let tail_sum = |from: i64| -> Result<BigUint> {
        (from..=k)
            .map(|m| binomial(k - m + l - 2, l - 2))
            .sum::<Result<BigUint>>()
    };
    let lhs = tail_sum(1)?;
    let rhs = binomial(k + l - 2, l - 1)?;
    let shifted = (1..=k)
        .map(|i| {
            Ok(ShiftedSum {
                i,
                lhs: tail_sum(i)?,
                rhs: binomial(k - i + l - 1, l - 1)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let equal = lhs == rhs && shifted.iter().all(|s| s.lhs == s.rhs);
    Ok(HockeyStick {
        l,
        k,
        lhs,
        rhs,
        shifted,
        equal,
    })
}

/// Class of `L_k` in `K_0(C(CP_q^n))`, for `k >= -1`.
///
/// `L_{-1}` is the complement of `P_1 (x) I^{(x)(n-1)}` in the identity, so its
/// class is `e_0 - e_1`. Lower degrees would need `[P_m (x) I...]` for `m >= 2`
/// in the generator basis and are rejected.
pub fn k0_class(n: u32, k: i64) -> Result<K0Vector> {
    check_n(n)?;
    match k {
        k if k > 0 => {
            let mult = (0..=n as i64)
                .map(|j| binomial(k + j - 1, j).map(BigInt::from))
                .collect::<Result<Vec<_>>>()?;
            K0Vector::new(n, mult)
        }
        0 => generator(n, 0),
        -1 => Ok(&generator(n, 0)? - &generator(n, 1)?),
        _ => Err(Error::UnsupportedDegree(k)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    /// Row-by-row Pascal triangle, independent of the multiplicative formula.
    fn pascal(k: usize) -> Vec<BigUint> {
        let mut row = vec![BigUint::one()];
        for _ in 0..k {
            let mut next = vec![BigUint::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        row
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 2).unwrap(), BigUint::from(10u32));
        assert_eq!(binomial(7, 0).unwrap(), BigUint::one());
        // frozen from the Pascal oracle below
        assert_eq!(binomial(40, 20).unwrap().to_string(), "137846528820");
        assert!(binomial(3, 4).is_err());
        assert!(binomial(3, -1).is_err());
    }

    #[test]
    fn binomial_matches_pascal() {
        for k in 0..=60usize {
            let row = pascal(k);
            for (j, expected) in row.iter().enumerate() {
                assert_eq!(
                    &binomial(k as i64, j as i64).unwrap(),
                    expected,
                    "C({k},{j})"
                );
            }
        }
        assert_eq!(pascal(40)[20].to_string(), "137846528820");
    }

    #[test]
    fn closed_form_examples() {
        let b = closed_form(2, 1).unwrap();
        assert_eq!(
            b.decomposition.multiplicities().unwrap(),
            &ints(&[1, 1, 1])[..]
        );
        let b = closed_form(1, 2).unwrap();
        assert_eq!(
            b.decomposition.multiplicities().unwrap(),
            &ints(&[1, 2])[..]
        );
        assert_eq!(
            closed_form(3, -2).unwrap().decomposition,
            LineBundleDecomposition::Corner { m: 2 }
        );
        assert_eq!(
            closed_form(2, 0).unwrap().decomposition,
            LineBundleDecomposition::Corner { m: 0 }
        );
        assert_eq!(closed_form(3, -2).unwrap().to_string(), "P_-2 (x) I (x) I");
        assert_eq!(closed_form(2, 0).unwrap().to_string(), "I (x) I");
        assert_eq!(closed_form(0, 1), Err(Error::DimensionTooSmall));
    }

    #[test]
    fn recursion_examples() {
        let b = recursion_expand(1, 1).unwrap();
        assert_eq!(
            b.decomposition.multiplicities().unwrap(),
            &ints(&[1, 1])[..]
        );
        // hand expansion: (2,0) -> (0,0) + (1,1) + (2,1)
        //   (1,1) -> (0,1) + (1,2) -> (0,1) + (0,2)
        //   (2,1) -> (0,1) + (1,2) + (2,2) -> (0,1) + 2 (0,2)
        let b = recursion_expand(2, 2).unwrap();
        assert_eq!(
            b.decomposition.multiplicities().unwrap(),
            &ints(&[1, 2, 3])[..]
        );
        assert_eq!(
            recursion_expand(5, 25).unwrap(),
            closed_form(5, 25).unwrap()
        );
        assert!(recursion_expand(2, 0).is_err());
    }

    #[test]
    fn expander_memoizes() {
        let mut ex = RecursionExpander::new(3).unwrap();
        let first = ex.expand_term(6, 0);
        let filled = ex.memo_len();
        assert!(filled > 0);
        assert_eq!(ex.expand_term(6, 0), first);
        assert_eq!(ex.memo_len(), filled);
    }

    #[test]
    fn hockey_stick_examples() {
        let h = hockey_stick(3, 4).unwrap();
        assert_eq!(
            (h.lhs.clone(), h.rhs.clone()),
            (BigUint::from(10u32), BigUint::from(10u32))
        );
        assert!(h.equal);
        let h = hockey_stick(2, 1).unwrap();
        assert_eq!(h.lhs, BigUint::one());
        assert!(h.equal);
        assert!(hockey_stick(12, 40).unwrap().equal);
        assert!(hockey_stick(1, 3).is_err());
        assert!(hockey_stick(3, 0).is_err());
    }

    #[test]
    fn k0_examples() {
        assert_eq!(
            k0_class(2, 1).unwrap(),
            K0Vector::from_i64(2, &[1, 1, 1]).unwrap()
        );
        assert_eq!(
            k0_class(3, 0).unwrap(),
            K0Vector::from_i64(3, &[1, 0, 0, 0]).unwrap()
        );
        assert_eq!(
            k0_class(2, -1).unwrap(),
            K0Vector::from_i64(2, &[1, -1, 0]).unwrap()
        );
        assert_eq!(k0_class(2, -2), Err(Error::UnsupportedDegree(-2)));
    }

    #[test]
    fn json_forms() {
        let b = closed_form(2, 1).unwrap();
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"n":2,"k":1,"kind":"multiset","mult":[1,1,1]}"#);
        assert_eq!(serde_json::from_str::<LineBundle>(&s).unwrap(), b);
        let c = closed_form(3, -2).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"n":3,"k":-2,"kind":"corner","m":2}"#);
        assert_eq!(serde_json::from_str::<LineBundle>(&s).unwrap(), c);
        assert!(serde_json::from_str::<LineBundle>(r#"{"n":3,"k":1,"kind":"corner"}"#).is_err());
    }
}
