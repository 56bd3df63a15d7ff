//! The isomorphisms between the groupoid, its image groupoid and the
//! projective-space model, and the four target-preserving stratum maps used
//! to decompose line bundles.

use super::{canonicalize, Coords, Cuts, Ext, GroupoidElement, PrimedElement, TElement};
use crate::error::{Error, Result};

/// `z = k` and `w_1 = ... = w_j = 0`: the stratum `(F_n)_{k,j}`.
pub fn in_level_stratum(g: &GroupoidElement, k: i64, j: usize) -> bool {
    g.z() == k && j <= g.n() && g.w()[..j].iter().all(|&e| e == Ext::Fin(0))
}

/// Degree 0 with `w_1 >= m`: the codomain of [`theta_neg`] for `k = -m`.
pub fn in_corner_stratum(g: &GroupoidElement, m: i64) -> bool {
    g.z() == 0 && g.n() >= 1 && g.w()[0].at_least(m)
}

/// `(z, x, w) -> (z + x_1, x, w)`.
pub fn gamma_iso(g: &GroupoidElement) -> Result<PrimedElement> {
    let x1 = *g.x().first().ok_or(Error::DimensionTooSmall)?;
    PrimedElement::canonicalize(g.z() + x1, g.x(), g.w())
}

/// Inverse of [`gamma_iso`].
pub fn gamma_inverse(p: &PrimedElement) -> Result<GroupoidElement> {
    let x1 = *p.x().first().ok_or(Error::DimensionTooSmall)?;
    canonicalize(p.z() - x1, p.x(), p.w())
}

/// `(0, x, w) -> (x, w)` on the degree-0 part.
pub fn t_iso(g: &GroupoidElement) -> Result<TElement> {
    if g.z() != 0 {
        return Err(Error::DegreeNonZero(g.z()));
    }
    TElement::canonicalize(g.x(), g.w())
}

fn wrong(g: &GroupoidElement, what: String) -> Error {
    Error::WrongStratum(format!("{g} is not in {what}"))
}

/// Shifts `(x_i, w_i)` by `(+by, -by)`; an infinite `w_i` stays infinite.
fn slide(g: &GroupoidElement, i: usize, by: i64) -> (Coords, Cuts) {
    let mut x: Coords = g.x().into();
    let mut w: Cuts = g.w().into();
    x[i] += by;
    w[i] = w[i].shift(-by);
    (x, w)
}

/// For `k <= 0`: `(k, x, w) -> (0, x_1 + k, x_2.., w_1 - k, w_2..)`, landing
/// in degree 0 with `w_1 >= -k`.
pub fn theta_neg(g: &GroupoidElement, k: i64) -> Result<GroupoidElement> {
    if k > 0 {
        return Err(Error::OutOfRange(format!(
            "theta_neg needs k <= 0, got {k}"
        )));
    }
    if g.n() == 0 {
        return Err(Error::DimensionTooSmall);
    }
    if g.z() != k {
        return Err(wrong(g, format!("degree {k}")));
    }
    let (x, w) = slide(g, 0, k);
    canonicalize(0, &x, &w)
}

/// For `k > 0`, `j < n`: on `(F_n)_{k,j}` with `w_{j+1} >= k` (or infinite),
/// moves `k` from `w_{j+1}` into `x_{j+1}` and drops the degree to 0.
pub fn theta_shift(g: &GroupoidElement, k: i64, j: usize) -> Result<GroupoidElement> {
    if k <= 0 || j >= g.n() {
        return Err(Error::OutOfRange(format!(
            "theta_shift needs k > 0 and j < n, got k = {k}, j = {j}"
        )));
    }
    if !in_level_stratum(g, k, j) || !g.w()[j].at_least(k) {
        return Err(wrong(g, format!("(F_n)_({k},{j}) with w_{} >= {k}", j + 1)));
    }
    let (x, w) = slide(g, j, k);
    canonicalize(0, &x, &w)
}

/// For `0 <= l < k`, `j < n`: on `(F_n)_{k,j}` with `w_{j+1} = l`, moves `l`
/// into `x_{j+1}`, landing in `(F_n)_{k-l, j+1}`.
pub fn theta_peel(g: &GroupoidElement, k: i64, j: usize, l: i64) -> Result<GroupoidElement> {
    if !(0 <= l && l < k) || j >= g.n() {
        return Err(Error::OutOfRange(format!(
            "theta_peel needs 0 <= l < k and j < n, got k = {k}, j = {j}, l = {l}"
        )));
    }
    if !in_level_stratum(g, k, j) || g.w()[j] != Ext::Fin(l) {
        return Err(wrong(g, format!("(F_n)_({k},{j}) with w_{} = {l}", j + 1)));
    }
    let (x, w) = slide(g, j, l);
    canonicalize(k - l, &x, &w)
}

/// On `(F_n)_{l,n}`, where `w = 0`: resets the degree to 0.
pub fn theta_terminal(g: &GroupoidElement, l: i64) -> Result<GroupoidElement> {
    if !in_level_stratum(g, l, g.n()) {
        return Err(wrong(g, format!("(F_n)_({l},n)")));
    }
    canonicalize(0, g.x(), g.w())
}

#[cfg(test)]
mod tests {
    use super::*;
    use Ext::{Fin, Inf};

    fn el(z: i64, x: &[i64], w: &[Ext]) -> GroupoidElement {
        canonicalize(z, x, w).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let g = el(2, &[-2, 0], &[Inf, Inf]);
        let p = gamma_iso(&g).unwrap();
        assert_eq!(p.z(), 0);
        assert_eq!(p.x(), &[-2, 0]);
        assert_eq!(gamma_inverse(&p).unwrap(), g);

        let u = el(0, &[0, 0], &[Fin(3), Fin(1)]);
        let p = gamma_iso(&u).unwrap();
        assert_eq!((p.z(), p.x(), p.w()), (0, u.x(), u.w()));
    }

    #[test]
    fn t_iso_examples() {
        let g = el(0, &[1, -1], &[Fin(0), Inf]);
        let t = t_iso(&g).unwrap();
        assert_eq!(t.x(), &[1, -1]);
        assert_eq!(t.w(), &[Fin(0), Inf]);
        assert_eq!(t.target(), g.target());

        let g = el(1, &[0], &[Fin(0)]);
        assert_eq!(t_iso(&g), Err(Error::DegreeNonZero(1)));
    }

    #[test]
    fn theta_neg_example() {
        let g = el(-1, &[3], &[Fin(2)]);
        let h = theta_neg(&g, -1).unwrap();
        assert_eq!(h, el(0, &[2], &[Fin(3)]));
        assert_eq!(g.target(), h.target());
        assert!(in_corner_stratum(&h, 1));
        assert!(matches!(theta_neg(&g, -2), Err(Error::WrongStratum(_))));
    }

    #[test]
    fn theta_peel_example() {
        let g = el(2, &[4, -1], &[Fin(1), Fin(5)]);
        let h = theta_peel(&g, 2, 0, 1).unwrap();
        assert_eq!(h, el(1, &[5, -1], &[Fin(0), Fin(5)]));
        assert!(in_level_stratum(&h, 1, 1));
        assert_eq!(g.target(), h.target());
        assert!(matches!(
            theta_peel(&g, 2, 0, 0),
            Err(Error::WrongStratum(_))
        ));
    }

    #[test]
    fn theta_shift_and_terminal() {
        let g = el(2, &[0, 1, 0], &[Fin(0), Fin(3), Fin(0)]);
        let h = theta_shift(&g, 2, 1).unwrap();
        assert_eq!(h, el(0, &[0, 3, 0], &[Fin(0), Fin(1), Fin(0)]));
        assert_eq!(g.target(), h.target());

        let g = el(2, &[1, -3], &[Fin(0), Inf]);
        let h = theta_shift(&g, 2, 1).unwrap();
        assert_eq!(h, el(0, &[1, -1], &[Fin(0), Inf]));

        let g = el(3, &[1, 2], &[Fin(0), Fin(0)]);
        let h = theta_terminal(&g, 3).unwrap();
        assert_eq!(h, el(0, &[1, 2], &[Fin(0), Fin(0)]));
        assert_eq!(g.target(), h.target());
        assert!(theta_terminal(&g, 2).is_err());
    }
}
