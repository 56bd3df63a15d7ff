//! Finite model of the groupoid behind `C(S_q^{2n+1})`.
//!
//! Elements are triples `(z, x, w)` with degree `z ∈ Z`, translation
//! `x ∈ Z^n` and source `w ∈ (Z_>= ∪ {∞})^n`; the target is `x + w` with `∞`
//! fixed by translation. An `∞` in `w` forces every later entry to `∞` (the
//! quotient) and pins `x` at that position:
//!
//! ```text
//! w_i = ∞  =>  x_i = -z - x_1 - ... - x_{i-1},  x_{i+1} = ... = x_n = 0
//! ```
//!
//! Values of [`GroupoidElement`] only exist in this canonical, validated form.
//! The two companion groupoids (the image of the degree-shifting isomorphism
//! and the degree-free model of `CP_q^n`) use the same triple shape with
//! their own constraint sets.

mod maps;
mod sample;
mod verify;
mod window;

pub use maps::{
    gamma_inverse, gamma_iso, in_corner_stratum, in_level_stratum, t_iso, theta_neg, theta_peel,
    theta_shift, theta_terminal,
};
pub use sample::sample_map;
pub use verify::{trace_line_bundle, verify_bijection, verify_partition, MapCheck, TraceReport};
pub use window::{AxisBox, BoxRegion, Window};

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Coords = SmallVec<[i64; 4]>;
pub type Cuts = SmallVec<[Ext; 4]>;

/// A point of `Z ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ext {
    Fin(i64),
    Inf,
}

impl Ext {
    pub fn is_inf(self) -> bool {
        self == Ext::Inf
    }

    /// Translation by an integer; `∞` is fixed.
    pub fn shift(self, by: i64) -> Ext {
        match self {
            Ext::Fin(v) => Ext::Fin(v + by),
            Ext::Inf => Ext::Inf,
        }
    }

    /// `self >= bound`, with `∞` above every integer.
    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Ext::Fin(v) => v >= bound,
            Ext::Inf => true,
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Fin(v) => write!(f, "{v}"),
            Ext::Inf => f.write_str("inf"),
        }
    }
}

impl Serialize for Ext {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ext::Fin(v) => s.serialize_i64(*v),
            Ext::Inf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Ext {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) if s == "inf" => Ok(Ext::Inf),
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(Ext::Fin)
                .ok_or_else(|| D::Error::custom(format!("not an i64: {n}"))),
            other => Err(D::Error::custom(format!(
                "expected an integer or \"inf\", found {other}"
            ))),
        }
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, xs: &[T]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// A canonical point of the unit space `(Z_>= ∪ {∞})^n / ~`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct UnitPoint(pub Cuts);

impl fmt::Display for UnitPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        write_list(f, &self.0)?;
        f.write_str(")")
    }
}

/// Replaces every entry after the first `∞` by `∞`; returns that index.
fn propagate_inf(w: &mut [Ext]) -> Option<usize> {
    let first = w.iter().position(|e| e.is_inf())?;
    w[first..].fill(Ext::Inf);
    Some(first)
}

/// Source and target must lie in the positive cone.
fn check_cone(x: &[i64], w: &[Ext]) -> Result<()> {
    for (m, (&xm, &wm)) in x.iter().zip(w).enumerate() {
        if let Ext::Fin(v) = wm {
            if v < 0 {
                return Err(Error::NotInGroupoid(format!("w_{} = {v} < 0", m + 1)));
            }
            if xm + v < 0 {
                return Err(Error::NotInGroupoid(format!(
                    "target entry x_{0} + w_{0} = {1} < 0",
                    m + 1,
                    xm + v
                )));
            }
        }
    }
    Ok(())
}

fn check_lengths(x: &[i64], w: &[Ext]) -> Result<()> {
    if x.len() != w.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: w.len(),
        });
    }
    Ok(())
}

/// `x_i` pinned to `pinned`, all later entries 0.
fn check_pinned(x: &[i64], i: usize, pinned: i64) -> Result<()> {
    if x[i] != pinned {
        return Err(Error::NotInGroupoid(format!(
            "w_{0} = inf needs x_{0} = {pinned}, found {1}",
            i + 1,
            x[i]
        )));
    }
    if let Some(m) = x[i + 1..].iter().position(|&v| v != 0) {
        return Err(Error::NotInGroupoid(format!(
            "w_{} = inf needs x_{} = 0",
            i + 1,
            i + m + 2
        )));
    }
    Ok(())
}

/// An element of the groupoid of the odd quantum sphere, in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawTriple")]
pub struct GroupoidElement {
    z: i64,
    x: Coords,
    w: Cuts,
}

#[derive(Deserialize)]
struct RawTriple {
    #[serde(default)]
    z: i64,
    x: Vec<i64>,
    w: Vec<Ext>,
}

impl TryFrom<RawTriple> for GroupoidElement {
    type Error = Error;

    fn try_from(r: RawTriple) -> Result<Self> {
        canonicalize(r.z, &r.x, &r.w)
    }
}

/// Applies the `∞`-tail quotient, then checks membership.
pub fn canonicalize(z: i64, x: &[i64], w: &[Ext]) -> Result<GroupoidElement> {
    check_lengths(x, w)?;
    let mut w: Cuts = w.iter().copied().collect();
    let first = propagate_inf(&mut w);
    check_cone(x, &w)?;
    if let Some(i) = first {
        let pinned = -z - x[..i].iter().sum::<i64>();
        check_pinned(x, i, pinned)?;
    }
    Ok(GroupoidElement {
        z,
        x: x.iter().copied().collect(),
        w,
    })
}

pub fn unit(w: &[Ext]) -> Result<GroupoidElement> {
    canonicalize(0, &vec![0; w.len()], w)
}

fn target_of(x: &[i64], w: &[Ext]) -> UnitPoint {
    UnitPoint(x.iter().zip(w).map(|(&xm, &wm)| wm.shift(xm)).collect())
}

impl GroupoidElement {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn z(&self) -> i64 {
        self.z
    }

    pub fn x(&self) -> &[i64] {
        &self.x
    }

    pub fn w(&self) -> &[Ext] {
        &self.w
    }

    pub fn source(&self) -> UnitPoint {
        UnitPoint(self.w.clone())
    }

    pub fn target(&self) -> UnitPoint {
        target_of(&self.x, &self.w)
    }

    pub fn is_unit(&self) -> bool {
        self.z == 0 && self.x.iter().all(|&v| v == 0)
    }

    pub fn inverse(&self) -> GroupoidElement {
        let neg: Coords = self.x.iter().map(|v| -v).collect();
        canonicalize(-self.z, &neg, &self.target().0).expect("inverse of a groupoid element")
    }
}

impl fmt::Display for GroupoidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[({}; ", self.z)?;
        write_list(f, &self.x)?;
        f.write_str("; ")?;
        write_list(f, &self.w)?;
        f.write_str(")]")
    }
}

/// Product `g h`, defined when `source(g) = target(h)`: degrees and
/// translations add, and the source is that of `h`.
pub fn compose(g: &GroupoidElement, h: &GroupoidElement) -> Result<GroupoidElement> {
    if g.n() != h.n() {
        return Err(Error::DimensionMismatch {
            left: g.n(),
            right: h.n(),
        });
    }
    if g.source() != h.target() {
        return Err(Error::NotComposable);
    }
    let x: Coords = g.x.iter().zip(&h.x).map(|(a, b)| a + b).collect();
    canonicalize(g.z + h.z, &x, &h.w)
}

/// Element of the image groupoid `(z, x, w) -> (z + x_1, x, w)`.
///
/// Constraints: `w_1 = ∞` forces `z = 0` and `x_2 = ... = 0`; `w_i = ∞` for
/// `i >= 2` forces `x_i = -z - x_2 - ... - x_{i-1}` and zeros after.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PrimedElement {
    z: i64,
    x: Coords,
    w: Cuts,
}

impl PrimedElement {
    pub fn canonicalize(z: i64, x: &[i64], w: &[Ext]) -> Result<PrimedElement> {
        check_lengths(x, w)?;
        let mut w: Cuts = w.iter().copied().collect();
        let first = propagate_inf(&mut w);
        check_cone(x, &w)?;
        match first {
            Some(0) => {
                if z != 0 {
                    return Err(Error::NotInGroupoid(format!(
                        "w_1 = inf needs degree 0, found {z}"
                    )));
                }
                check_pinned(x, 0, x[0])?;
            }
            Some(i) => {
                let pinned = -z - x[1..i].iter().sum::<i64>();
                check_pinned(x, i, pinned)?;
            }
            None => {}
        }
        Ok(PrimedElement {
            z,
            x: x.iter().copied().collect(),
            w,
        })
    }

    pub fn z(&self) -> i64 {
        self.z
    }

    pub fn x(&self) -> &[i64] {
        &self.x
    }

    pub fn w(&self) -> &[Ext] {
        &self.w
    }

    pub fn source(&self) -> UnitPoint {
        UnitPoint(self.w.clone())
    }

    pub fn target(&self) -> UnitPoint {
        target_of(&self.x, &self.w)
    }

    pub fn compose(&self, h: &PrimedElement) -> Result<PrimedElement> {
        if self.source() != h.target() {
            return Err(Error::NotComposable);
        }
        let x: Coords = self.x.iter().zip(&h.x).map(|(a, b)| a + b).collect();
        PrimedElement::canonicalize(self.z + h.z, &x, &h.w)
    }
}

/// Element of the degree-free groupoid modelling `CP_q^n`.
///
/// Constraint: `w_i = ∞` forces `x_i = -x_1 - ... - x_{i-1}` and zeros after.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TElement {
    x: Coords,
    w: Cuts,
}

impl TElement {
    pub fn canonicalize(x: &[i64], w: &[Ext]) -> Result<TElement> {
        check_lengths(x, w)?;
        let mut w: Cuts = w.iter().copied().collect();
        let first = propagate_inf(&mut w);
        check_cone(x, &w)?;
        if let Some(i) = first {
            check_pinned(x, i, -x[..i].iter().sum::<i64>())?;
        }
        Ok(TElement {
            x: x.iter().copied().collect(),
            w,
        })
    }

    pub fn x(&self) -> &[i64] {
        &self.x
    }

    pub fn w(&self) -> &[Ext] {
        &self.w
    }

    pub fn source(&self) -> UnitPoint {
        UnitPoint(self.w.clone())
    }

    pub fn target(&self) -> UnitPoint {
        target_of(&self.x, &self.w)
    }
}
