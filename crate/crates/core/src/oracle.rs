//! Basic projections as diagonal 0/1 patterns on truncated `l^2({0..N-1}^n)`.
//!
//! Ranks are exact products of per-axis counts; the face restriction
//! evaluates the last tensor factor at infinity. Invariants recovered here
//! never consult the symbolic table they are compared against.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::proj_monoid::{rho, ExtendedNat, ProjClass, RhoVector};
use crate::report::Report;

/// One tensor factor: identity, the projection onto the first `m` basis
/// vectors, or its complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    I,
    P(u64),
    Pc(u64),
}

impl Factor {
    /// Rank of the factor on `C^N`.
    pub fn rank_at(self, cutoff: u64) -> u64 {
        match self {
            Factor::I => cutoff,
            Factor::P(m) => m.min(cutoff),
            Factor::Pc(m) => cutoff.saturating_sub(m),
        }
    }

    /// Whether the basis vector `e_i` is in the range.
    pub fn keeps(self, i: u64) -> bool {
        match self {
            Factor::I => true,
            Factor::P(m) => i < m,
            Factor::Pc(m) => i >= m,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::I => f.write_str("I"),
            Factor::P(m) => write!(f, "P_{m}"),
            Factor::Pc(m) => write!(f, "P_-{m}"),
        }
    }
}

/// `copies` stacked copies of a tensor product of diagonal factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPattern")]
pub struct DiagonalPattern {
    factors: Vec<Factor>,
    #[serde(with = "crate::bigjson::uint")]
    copies: BigUint,
}

#[derive(Deserialize)]
struct RawPattern {
    factors: Vec<Factor>,
    #[serde(with = "crate::bigjson::uint")]
    copies: BigUint,
}

impl TryFrom<RawPattern> for DiagonalPattern {
    type Error = Error;

    fn try_from(r: RawPattern) -> Result<Self> {
        DiagonalPattern::new(r.factors, r.copies)
    }
}

/// Result of restricting to the face at infinity of the last axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Face<T> {
    Pattern(T),
    Annihilated,
}

impl DiagonalPattern {
    pub fn new(factors: Vec<Factor>, copies: impl Into<BigUint>) -> Result<DiagonalPattern> {
        if let Some(bad) = factors
            .iter()
            .find(|f| matches!(f, Factor::P(0) | Factor::Pc(0)))
        {
            return Err(Error::OutOfRange(format!("factor {bad} needs m >= 1")));
        }
        Ok(DiagonalPattern {
            factors,
            copies: copies.into(),
        })
    }

    /// Diagonal pattern of a basic class: `P_1^{j-1} (x) P_k (x) I^{n-j}` for
    /// `j >= 1`, and `k` stacked copies of `I^n` for `j = 0`.
    pub fn encode(p: &ProjClass) -> Result<DiagonalPattern> {
        let (n, j) = (p.n() as usize, p.j() as usize);
        if j == 0 {
            return DiagonalPattern::new(vec![Factor::I; n], p.k().clone());
        }
        let k = p
            .k()
            .to_u64()
            .ok_or_else(|| Error::OutOfRange(format!("k = {} does not fit a factor", p.k())))?;
        let mut factors = vec![Factor::P(1); j - 1];
        factors.push(Factor::P(k));
        factors.resize(n, Factor::I);
        DiagonalPattern::new(factors, 1u32)
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn copies(&self) -> &BigUint {
        &self.copies
    }

    pub fn is_zero(&self) -> bool {
        self.copies.is_zero()
    }

    pub fn rank_at(&self, cutoff: u64) -> BigUint {
        self.factors
            .iter()
            .fold(self.copies.clone(), |acc, f| acc * f.rank_at(cutoff))
    }

    pub fn face(&self) -> Result<Face<DiagonalPattern>> {
        match self.factors.last() {
            None => Err(Error::DimensionTooSmall),
            Some(Factor::P(_)) => Ok(Face::Annihilated),
            Some(Factor::I | Factor::Pc(_)) => Ok(Face::Pattern(DiagonalPattern {
                factors: self.factors[..self.n() - 1].to_vec(),
                copies: self.copies.clone(),
            })),
        }
    }
}

impl fmt::Display for DiagonalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.copies.is_one() {
            write!(f, "{} x ", self.copies)?;
        }
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, fac) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" (x) ")?;
            }
            write!(f, "{fac}")?;
        }
        Ok(())
    }
}

/// Counts the diagonal ones of a pattern by visiting every basis vector of
/// `C^{N^n}`. Independent of the product formula in [`DiagonalPattern::rank_at`].
pub fn rank_by_count(p: &DiagonalPattern, cutoff: u64) -> BigUint {
    let n = p.n();
    let mut idx = vec![0u64; n];
    let mut ones = 0u64;
    if cutoff == 0 && n > 0 {
        return BigUint::zero();
    }
    loop {
        if p.factors.iter().zip(&idx).all(|(f, &i)| f.keeps(i)) {
            ones += 1;
        }
        let mut m = n;
        loop {
            if m == 0 {
                return p.copies.clone() * ones;
            }
            m -= 1;
            idx[m] += 1;
            if idx[m] < cutoff {
                break;
            }
            idx[m] = 0;
        }
    }
}

/// A formal diagonal sum of patterns over the same number of axes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternStack {
    n: usize,
    patterns: Vec<DiagonalPattern>,
}

impl PatternStack {
    pub fn empty(n: usize) -> PatternStack {
        PatternStack {
            n,
            patterns: Vec::new(),
        }
    }

    pub fn single(p: DiagonalPattern) -> PatternStack {
        PatternStack {
            n: p.n(),
            patterns: vec![p],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn patterns(&self) -> &[DiagonalPattern] {
        &self.patterns
    }

    pub fn push(&mut self, p: DiagonalPattern) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: p.n(),
            });
        }
        self.patterns.push(p);
        Ok(())
    }

    pub fn rank_at(&self, cutoff: u64) -> BigUint {
        self.patterns.iter().map(|p| p.rank_at(cutoff)).sum()
    }

    /// Blockwise face; annihilated blocks disappear from the stack.
    pub fn face(&self) -> Result<PatternStack> {
        if self.n == 0 {
            return Err(Error::DimensionTooSmall);
        }
        let mut out = PatternStack::empty(self.n - 1);
        for p in &self.patterns {
            if let Face::Pattern(q) = p.face()? {
                out.patterns.push(q);
            }
        }
        Ok(out)
    }

    fn is_zero(&self) -> bool {
        self.patterns.iter().all(DiagonalPattern::is_zero)
    }
}

pub fn boxplus_patterns(a: &PatternStack, b: &PatternStack) -> Result<PatternStack> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            left: a.n,
            right: b.n,
        });
    }
    let mut out = a.clone();
    out.patterns.extend(b.patterns.iter().cloned());
    Ok(out)
}

/// Truncation levels used to tell stable ranks from growing ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cutoffs {
    pub n1: u64,
    pub n2: u64,
    pub guard: u64,
}

impl Default for Cutoffs {
    fn default() -> Self {
        Cutoffs {
            n1: 8,
            n2: 16,
            guard: 32,
        }
    }
}

impl Cutoffs {
    /// Guard defaults to `2 * n2`.
    pub fn new(n1: u64, n2: u64) -> Result<Cutoffs> {
        if n1 == 0 || n1 >= n2 {
            return Err(Error::OutOfRange(format!(
                "cutoffs need 1 <= N1 < N2, got ({n1}, {n2})"
            )));
        }
        Ok(Cutoffs {
            n1,
            n2,
            guard: 2 * n2,
        })
    }
}

fn stable_rank(stack: &PatternStack, cut: Cutoffs) -> Result<ExtendedNat> {
    if stack.is_zero() {
        return Ok(ExtendedNat::zero());
    }
    let (r1, r2) = (stack.rank_at(cut.n1), stack.rank_at(cut.n2));
    if r1 != r2 {
        return Ok(ExtendedNat::Infinite);
    }
    let r3 = stack.rank_at(cut.guard);
    if r3 != r2 {
        return Err(Error::OutOfRange(format!(
            "rank {r2} is equal at N1 = {} and N2 = {} but {r3} at guard {}; raise the cutoffs",
            cut.n1, cut.n2, cut.guard
        )));
    }
    Ok(ExtendedNat::Finite(r1))
}

/// `rho_l` is the rank of the `(n - l)`-fold face: 0 once annihilated, its
/// value when stable across the cutoffs, infinite when still growing.
pub fn rho_numeric(stack: &PatternStack, cut: Cutoffs) -> Result<RhoVector> {
    let mut entries = vec![ExtendedNat::zero(); stack.n() + 1];
    let mut current = stack.clone();
    for l in (0..=stack.n()).rev() {
        entries[l] = stable_rank(&current, cut)?;
        if l > 0 {
            current = current.face()?;
        }
    }
    Ok(RhoVector(entries))
}

/// Compares the numeric invariants of `P_{j,k}` with the symbolic table and
/// the product rank formula with direct counting.
pub fn verify_oracle(n: u32, j: u32, k: u64, cut: Cutoffs) -> Result<Report> {
    let class = ProjClass::validate(n as i64, j as i64, k)?;
    let mut report = Report::new(
        "oracle",
        json!({"n": n, "j": j, "k": k, "n1": cut.n1, "n2": cut.n2, "guard": cut.guard}),
    );
    let pattern = DiagonalPattern::encode(&class)?;
    let class_json = serde_json::to_value(&class).expect("class serializes");

    let mut stack = PatternStack::single(pattern);
    let mut level = n as usize;
    loop {
        for cutoff in [1, cut.n1, cut.n2, cut.guard] {
            report.domain_size += 1;
            let mut counted = BigUint::zero();
            for p in stack.patterns() {
                counted += rank_by_count(p, cutoff);
            }
            if stack.rank_at(cutoff) != counted {
                report.fail(
                    Some(class_json.clone()),
                    format!("rank formula disagrees with counting at level {level}, N = {cutoff}"),
                );
            }
        }
        if level == 0 {
            break;
        }
        stack = stack.face()?;
        level -= 1;
    }

    report.domain_size += 1;
    let numeric = rho_numeric(&PatternStack::single(DiagonalPattern::encode(&class)?), cut)?;
    let symbolic = rho(&class);
    report.image_size = 1;
    if numeric != symbolic {
        report.fail(
            Some(class_json),
            format!("numeric rho {numeric} differs from symbolic {symbolic}"),
        );
    }
    Ok(report)
}

fn random_pattern(rng: &mut ChaCha8Rng, n: usize) -> DiagonalPattern {
    let factors = (0..n)
        .map(|_| match rng.gen_range(0..3) {
            0 => Factor::I,
            1 => Factor::P(rng.gen_range(1..=12)),
            _ => Factor::Pc(rng.gen_range(1..=12)),
        })
        .collect();
    DiagonalPattern::new(factors, rng.gen_range(0..=5u32)).expect("factors have m >= 1")
}

/// Random stacks of patterns: product rank against direct counting,
/// monotonicity in the cutoff, additivity and faces of stacks.
pub fn sample_ranks(seed: u64, samples: usize) -> Report {
    let mut report = Report::new("rank_sampled", json!({"seed": seed, "samples": samples}));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let n = rng.gen_range(1..=4);
        let (a, b) = (random_pattern(&mut rng, n), random_pattern(&mut rng, n));
        let cutoff = rng.gen_range(1..=12);
        report.domain_size += 1;
        let pj = || Some(json!([a, b]));
        if a.rank_at(cutoff) != rank_by_count(&a, cutoff) {
            report.fail(
                pj(),
                format!("rank formula disagrees with counting at N = {cutoff}"),
            );
        }
        if a.rank_at(cutoff) > a.rank_at(cutoff + 1) {
            report.fail(pj(), "rank decreases with the cutoff");
        }
        let (sa, sb) = (
            PatternStack::single(a.clone()),
            PatternStack::single(b.clone()),
        );
        let s = boxplus_patterns(&sa, &sb).expect("same n");
        if s.rank_at(cutoff) != sa.rank_at(cutoff) + sb.rank_at(cutoff) {
            report.fail(pj(), "rank not additive over the stack");
        }
        let faces = boxplus_patterns(&sa.face().expect("n >= 1"), &sb.face().expect("n >= 1"));
        if s.face().ok() != faces.ok() {
            report.fail(pj(), "face does not commute with stacking");
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(n: i64, j: i64, k: i64) -> ProjClass {
        ProjClass::validate(n, j, k).unwrap()
    }

    fn enc(n: i64, j: i64, k: i64) -> DiagonalPattern {
        DiagonalPattern::encode(&class(n, j, k)).unwrap()
    }

    #[test]
    fn encodings() {
        assert_eq!(enc(2, 1, 2).factors(), &[Factor::P(2), Factor::I]);
        assert_eq!(enc(2, 2, 3).factors(), &[Factor::P(1), Factor::P(3)]);
        assert_eq!(
            enc(3, 3, 2).factors(),
            &[Factor::P(1), Factor::P(1), Factor::P(2)]
        );
        let p = enc(2, 0, 2);
        assert_eq!(p.factors(), &[Factor::I, Factor::I]);
        assert_eq!(p.copies(), &BigUint::from(2u32));
        assert!(enc(2, 0, 0).is_zero());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(enc(2, 1, 2).rank_at(5), BigUint::from(10u32));
        assert_eq!(enc(2, 2, 3).rank_at(5), BigUint::from(3u32));
        assert_eq!(enc(2, 0, 0).rank_at(5), BigUint::zero());
        for p in [enc(2, 1, 2), enc(3, 2, 4), enc(2, 0, 3)] {
            for cutoff in [1, 3, 7] {
                assert_eq!(p.rank_at(cutoff), rank_by_count(&p, cutoff));
            }
        }
        let pc = DiagonalPattern::new(vec![Factor::Pc(2), Factor::P(3)], 1u32).unwrap();
        assert_eq!(pc.rank_at(5), BigUint::from(9u32));
        assert_eq!(rank_by_count(&pc, 5), BigUint::from(9u32));
    }

    #[test]
    fn face_examples() {
        let p = DiagonalPattern::new(vec![Factor::P(2), Factor::I], 1u32).unwrap();
        assert_eq!(
            p.face().unwrap(),
            Face::Pattern(DiagonalPattern::new(vec![Factor::P(2)], 1u32).unwrap())
        );
        assert_eq!(enc(2, 2, 3).face().unwrap(), Face::Annihilated);
        let q = DiagonalPattern::new(vec![Factor::Pc(2), Factor::I], 1u32).unwrap();
        assert_eq!(
            q.face().unwrap(),
            Face::Pattern(DiagonalPattern::new(vec![Factor::Pc(2)], 1u32).unwrap())
        );
        assert!(DiagonalPattern::new(vec![], 1u32).unwrap().face().is_err());
    }

    #[test]
    fn rho_examples() {
        let cut = Cutoffs::default();
        let r = rho_numeric(&PatternStack::single(enc(2, 1, 2)), cut).unwrap();
        assert_eq!(r.to_string(), "(0, 2, inf)");
        let r = rho_numeric(&PatternStack::single(enc(2, 0, 2)), cut).unwrap();
        assert_eq!(r.to_string(), "(2, inf, inf)");
        let r = rho_numeric(&PatternStack::single(enc(2, 0, 0)), cut).unwrap();
        assert_eq!(r.to_string(), "(0, 0, 0)");
        assert_eq!(
            rho_numeric(&PatternStack::empty(2), cut)
                .unwrap()
                .to_string(),
            "(0, 0, 0)"
        );
    }

    #[test]
    fn guard_catches_late_growth() {
        // P_20 is still growing at both cutoffs
        let p = DiagonalPattern::new(vec![Factor::P(20)], 1u32).unwrap();
        let r = rho_numeric(&PatternStack::single(p), Cutoffs::default()).unwrap();
        assert_eq!(r.to_string(), "(0, inf)");
        let p = DiagonalPattern::new(vec![Factor::P(12)], 1u32).unwrap();
        let cut = Cutoffs::new(12, 13).unwrap();
        assert_eq!(
            rho_numeric(&PatternStack::single(p), cut)
                .unwrap()
                .to_string(),
            "(0, 12)"
        );
        // the complement of P_20 is empty below N = 20 and only the guard sees it
        let p = DiagonalPattern::new(vec![Factor::Pc(20)], 1u32).unwrap();
        assert!(rho_numeric(&PatternStack::single(p), Cutoffs::default()).is_err());
    }

    #[test]
    fn stacks() {
        let a = PatternStack::single(enc(2, 1, 2));
        let b = PatternStack::single(enc(2, 2, 3));
        let s = boxplus_patterns(&a, &b).unwrap();
        assert_eq!(s.rank_at(5), BigUint::from(13u32));
        assert!(boxplus_patterns(&a, &PatternStack::empty(3)).is_err());

        let cut = Cutoffs::default();
        let t = boxplus_patterns(&a, &PatternStack::single(enc(2, 0, 3))).unwrap();
        assert_eq!(rho_numeric(&t, cut).unwrap().to_string(), "(3, inf, inf)");

        let faced = s.face().unwrap();
        let separately = boxplus_patterns(&a.face().unwrap(), &b.face().unwrap()).unwrap();
        assert_eq!(faced, separately);
    }

    #[test]
    fn pattern_json() {
        let p = enc(2, 1, 2);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"factors":[{"P":2},"I"],"copies":1}"#);
        assert_eq!(serde_json::from_str::<DiagonalPattern>(&s).unwrap(), p);
        assert!(
            serde_json::from_str::<DiagonalPattern>(r#"{"factors":[{"Pc":0}],"copies":1}"#)
                .is_err()
        );
    }

    #[test]
    fn sampled_ranks() {
        let r = sample_ranks(11, 300);
        assert!(r.pass, "{r:?}");
        assert_eq!(r.domain_size, 300);
    }

    #[test]
    fn oracle_report() {
        let r = verify_oracle(2, 1, 3, Cutoffs::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(verify_oracle(2, 3, 1, Cutoffs::default()).is_err());
    }
}
