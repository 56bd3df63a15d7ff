//! Exhaustive window checks of the stratum partition and of every map.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::maps::{
    gamma_iso, in_corner_stratum, in_level_stratum, t_iso, theta_neg, theta_peel, theta_shift,
    theta_terminal,
};
use super::window::{AxisBox, BoxRegion, Window};
use super::{canonicalize, Ext, GroupoidElement, PrimedElement, TElement};
use crate::error::{Error, Result};
use crate::report::Report;

/// Largest `n` whose triples fit a packed key.
const MAX_N: usize = 7;

fn lane(v: i64) -> Option<u128> {
    i8::try_from(v).ok().map(|b| b as u8 as u128)
}

fn cut_lane(e: Ext) -> Option<u128> {
    match e {
        Ext::Fin(v) if (0..255).contains(&v) => Some(v as u128),
        Ext::Fin(_) => None,
        Ext::Inf => Some(255),
    }
}

/// Packs a triple into 8-bit lanes: degree, then `x`, then `w`.
fn pack(z: i64, x: &[i64], w: &[Ext]) -> Option<u128> {
    let n = x.len();
    let mut key = lane(z)?;
    for (m, (&xm, &wm)) in x.iter().zip(w).enumerate() {
        key |= lane(xm)? << (8 * (1 + m));
        key |= cut_lane(wm)? << (8 * (1 + n + m));
    }
    Some(key)
}

fn pack_el(g: &GroupoidElement) -> Option<u128> {
    pack(g.z(), g.x(), g.w())
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("element serializes")
}

const TOO_WIDE: &str = "coordinates exceed the packed key range; shrink the window";

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::OutOfRange(format!(
            "n must be in 1..={MAX_N}, got {n}"
        )));
    }
    Ok(())
}

fn check_k(k: i64) -> Result<()> {
    if k.abs() > Window::MAX as i64 {
        return Err(Error::OutOfRange(format!(
            "|k| must be <= {}, got {k}",
            Window::MAX
        )));
    }
    Ok(())
}

/// The stratum `(F_n)_{k,j}` restricted to the window.
fn level_region(n: usize, k: i64, j: usize, window: Window) -> BoxRegion {
    let mut r = BoxRegion::standard(n, (k, k), window);
    for ax in &mut r.axes[..j] {
        *ax = ax.pinned(0);
    }
    r
}

/// Sorted packed keys of the elements of `region` accepted by `keep`.
fn collect(
    region: &BoxRegion,
    keep: impl Fn(&GroupoidElement) -> bool,
) -> std::result::Result<Vec<u128>, GroupoidElement> {
    let mut keys = Vec::new();
    let mut bad = None;
    region.for_each_triple(|z, x, w| {
        if bad.is_some() {
            return;
        }
        if let Ok(g) = canonicalize(z, x, w) {
            if keep(&g) {
                match pack_el(&g) {
                    Some(key) => keys.push(key),
                    None => bad = Some(g),
                }
            }
        }
    });
    match bad {
        Some(g) => Err(g),
        None => {
            keys.sort_unstable();
            Ok(keys)
        }
    }
}

fn first_duplicate(sorted: &[u128]) -> Option<usize> {
    sorted.windows(2).position(|p| p[0] == p[1])
}

type PartTest = dyn Fn(&GroupoidElement) -> bool;

/// Checks that `(F_n)_{k,j}` is the disjoint union of its part with
/// `w_{j+1} >= k` (or infinite) and its parts with `w_{j+1} = l`, `l < k`.
pub fn verify_partition(n: usize, k: i64, j: usize, window: Window) -> Result<Report> {
    check_n(n)?;
    check_k(k)?;
    if k < 1 || j >= n {
        return Err(Error::OutOfRange(format!(
            "partition needs k >= 1 and j < n, got k = {k}, j = {j}, n = {n}"
        )));
    }
    let mut report = Report::new(
        "partition",
        json!({"n": n, "k": k, "j": j, "window": window.get()}),
    );
    let stratum_ok = |g: &GroupoidElement| in_level_stratum(g, k, j);
    let whole = level_region(n, k, j, window);
    let stratum = match collect(&whole, stratum_ok) {
        Ok(s) => s,
        Err(g) => {
            report.fail(Some(to_json(&g)), TOO_WIDE);
            return Ok(report);
        }
    };
    report.domain_size = stratum.len() as u64;

    let mut parts: Vec<(BoxRegion, Box<PartTest>)> = Vec::new();
    let mut upper = whole.clone();
    upper.axes[j].w = (k, window.get());
    parts.push((upper, Box::new(move |g| g.w()[j].at_least(k))));
    for l in 0..k.min(window.get() + 1) {
        let mut region = whole.clone();
        region.axes[j] = region.axes[j].pinned(l);
        parts.push((region, Box::new(move |g| g.w()[j] == Ext::Fin(l))));
    }

    let mut union = Vec::with_capacity(stratum.len());
    for (region, belongs) in &parts {
        let mut stray = None;
        region.for_each_triple(|z, x, w| {
            if stray.is_some() {
                return;
            }
            if let Ok(g) = canonicalize(z, x, w) {
                if !stratum_ok(&g) || !belongs(&g) {
                    stray = Some(g);
                } else if let Some(key) = pack_el(&g) {
                    if stratum.binary_search(&key).is_err() {
                        stray = Some(g);
                    }
                    union.push(key);
                }
            }
        });
        if let Some(g) = stray {
            report.fail(Some(to_json(&g)), "part element outside the stratum");
        }
    }
    report.image_size = union.len() as u64;
    union.sort_unstable();
    if first_duplicate(&union).is_some() {
        report.fail(None, "parts overlap");
    }
    if union != stratum {
        report.fail(None, "parts do not cover the stratum");
    }
    Ok(report)
}

/// One of the maps checked by [`verify_bijection`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case")]
pub enum MapCheck {
    ThetaNeg { n: usize, k: i64 },
    ThetaShift { n: usize, k: i64, j: usize },
    ThetaPeel { n: usize, k: i64, j: usize, l: i64 },
    ThetaTerminal { n: usize, l: i64 },
    Gamma { n: usize },
    TIso { n: usize },
}

impl MapCheck {
    pub fn name(&self) -> &'static str {
        match self {
            MapCheck::ThetaNeg { .. } => "theta_neg",
            MapCheck::ThetaShift { .. } => "theta_shift",
            MapCheck::ThetaPeel { .. } => "theta_peel",
            MapCheck::ThetaTerminal { .. } => "theta_terminal",
            MapCheck::Gamma { .. } => "gamma",
            MapCheck::TIso { .. } => "t_iso",
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            MapCheck::ThetaNeg { n, .. }
            | MapCheck::ThetaShift { n, .. }
            | MapCheck::ThetaPeel { n, .. }
            | MapCheck::ThetaTerminal { n, .. }
            | MapCheck::Gamma { n }
            | MapCheck::TIso { n } => n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_n(self.n())?;
        let bad = |why: String| Err(Error::OutOfRange(why));
        match *self {
            MapCheck::ThetaNeg { k, .. } => {
                check_k(k)?;
                if k > 0 {
                    return bad(format!("theta_neg needs k <= 0, got {k}"));
                }
            }
            MapCheck::ThetaShift { n, k, j } => {
                check_k(k)?;
                if k < 1 || j >= n {
                    return bad(format!(
                        "theta_shift needs k >= 1 and j < n, got k = {k}, j = {j}"
                    ));
                }
            }
            MapCheck::ThetaPeel { n, k, j, l } => {
                check_k(k)?;
                if !(0 <= l && l < k) || j >= n {
                    return bad(format!(
                        "theta_peel needs 0 <= l < k and j < n, got k = {k}, j = {j}, l = {l}"
                    ));
                }
            }
            MapCheck::ThetaTerminal { l, .. } => check_k(l)?,
            MapCheck::Gamma { .. } | MapCheck::TIso { .. } => {}
        }
        Ok(())
    }
}

pub(super) type Pred<'a> = &'a dyn Fn(&GroupoidElement) -> bool;

struct MapSpec<'a> {
    domain: BoxRegion,
    in_domain: Pred<'a>,
    codomain: BoxRegion,
    in_codomain: Pred<'a>,
    map: &'a dyn Fn(&GroupoidElement) -> Result<GroupoidElement>,
}

fn check_map(report: &mut Report, spec: &MapSpec<'_>) {
    let mut images = Vec::new();
    spec.domain.for_each_triple(|z, x, w| {
        if !report.pass {
            return;
        }
        let Ok(g) = canonicalize(z, x, w) else { return };
        if !(spec.in_domain)(&g) {
            return;
        }
        report.domain_size += 1;
        let h = match (spec.map)(&g) {
            Ok(h) => h,
            Err(e) => return report.fail(Some(to_json(&g)), format!("map failed: {e}")),
        };
        if !(spec.in_codomain)(&h) || !spec.codomain.contains(h.z(), h.x(), h.w()) {
            return report.fail(Some(to_json(&g)), format!("image {h} outside the codomain"));
        }
        if g.target() != h.target() {
            return report.fail(Some(to_json(&g)), "target not preserved");
        }
        match pack_el(&h) {
            Some(key) => images.push(key),
            None => report.fail(Some(to_json(&h)), TOO_WIDE),
        }
    });
    if !report.pass {
        return;
    }
    images.sort_unstable();
    report.image_size = images.len() as u64;
    if let Some(i) = first_duplicate(&images) {
        let mut hit = None;
        let dup = images[i];
        spec.domain.for_each_triple(|z, x, w| {
            if let Ok(g) = canonicalize(z, x, w) {
                if hit.is_none() && (spec.in_domain)(&g) {
                    let h = (spec.map)(&g).expect("checked above");
                    if pack_el(&h) == Some(dup) {
                        hit = Some(h);
                    }
                }
            }
        });
        return report.fail(hit.map(|h| to_json(&h)), "map is not injective");
    }
    let mut missed = None;
    let mut codomain_size = 0u64;
    spec.codomain.for_each_triple(|z, x, w| {
        let Ok(h) = canonicalize(z, x, w) else { return };
        if !(spec.in_codomain)(&h) {
            return;
        }
        codomain_size += 1;
        let hit = pack_el(&h).is_some_and(|key| images.binary_search(&key).is_ok());
        if !hit && missed.is_none() {
            missed = Some(h);
        }
    });
    if let Some(h) = missed {
        report.fail(Some(to_json(&h)), "codomain element not reached");
    } else if codomain_size != report.image_size {
        report.fail(None, "image and codomain sizes differ");
    }
}

fn check_gamma(report: &mut Report, n: usize, window: Window) {
    let b = window.get();
    let region = BoxRegion::standard(n, (0, 0), window);
    region.for_each_pair(|x, w| {
        if !report.pass {
            return;
        }
        // the degree shifts by x_1, so this domain slice maps onto [-b, b]
        let mut degrees = Vec::new();
        for z in -b - x[0]..=b - x[0] {
            let Ok(g) = canonicalize(z, x, w) else {
                continue;
            };
            report.domain_size += 1;
            let p = match gamma_iso(&g) {
                Ok(p) => p,
                Err(e) => return report.fail(Some(to_json(&g)), format!("map failed: {e}")),
            };
            if p.x() != g.x() || p.w() != g.w() {
                return report.fail(Some(to_json(&g)), "translation or source changed");
            }
            if p.source() != g.source() || p.target() != g.target() {
                return report.fail(Some(to_json(&g)), "source or target not preserved");
            }
            if !(-b..=b).contains(&p.z()) {
                return report.fail(
                    Some(to_json(&g)),
                    format!("image {p:?} outside the codomain"),
                );
            }
            degrees.push(p.z());
        }
        degrees.sort_unstable();
        if degrees.windows(2).any(|d| d[0] == d[1]) {
            return report.fail(None, format!("map is not injective over x = {x:?}"));
        }
        for z in -b..=b {
            let Ok(p) = PrimedElement::canonicalize(z, x, w) else {
                continue;
            };
            report.image_size += 1;
            if degrees.binary_search(&z).is_err() {
                return report.fail(Some(to_json(&p)), "codomain element not reached");
            }
        }
    });
}

fn check_t_iso(report: &mut Report, n: usize, window: Window) {
    let region = BoxRegion::standard(n, (0, 0), window);
    region.for_each_pair(|x, w| {
        if !report.pass {
            return;
        }
        let image = TElement::canonicalize(x, w);
        match (canonicalize(0, x, w), image) {
            (Ok(g), Ok(t)) => {
                report.domain_size += 1;
                report.image_size += 1;
                match t_iso(&g) {
                    Ok(s) if s == t && s.target() == g.target() => {}
                    Ok(_) => report.fail(Some(to_json(&g)), "image differs from (x, w)"),
                    Err(e) => report.fail(Some(to_json(&g)), format!("map failed: {e}")),
                }
            }
            (Ok(g), Err(e)) => {
                report.domain_size += 1;
                report.fail(Some(to_json(&g)), format!("map failed: {e}"));
            }
            (Err(_), Ok(t)) => {
                report.image_size += 1;
                report.fail(Some(to_json(&t)), "codomain element not reached");
            }
            (Err(_), Err(_)) => {}
        }
    });
}

/// Exhaustively checks that a map is injective, onto the enumerated
/// codomain, constraint-preserving and target-preserving. Domain windows
/// are shifted so the image of the domain box is exactly the codomain box.
pub fn verify_bijection(map: MapCheck, window: Window) -> Result<Report> {
    map.validate()?;
    let mut params = to_json(&map);
    params["window"] = json!(window.get());
    let mut report = Report::new(map.name(), params);
    let b = window.get();
    match map {
        MapCheck::Gamma { n } => check_gamma(&mut report, n, window),
        MapCheck::TIso { n } => check_t_iso(&mut report, n, window),
        MapCheck::ThetaNeg { n, k } => {
            let m = -k;
            let mut codomain = BoxRegion::standard(n, (0, 0), window);
            codomain.axes[0] = AxisBox {
                x: (k - b, k + b),
                w: (m, m + b),
                inf: true,
            };
            check_map(
                &mut report,
                &MapSpec {
                    domain: BoxRegion::standard(n, (k, k), window),
                    in_domain: &|g| g.z() == k,
                    codomain,
                    in_codomain: &|h| in_corner_stratum(h, m),
                    map: &|g| theta_neg(g, k),
                },
            );
        }
        MapCheck::ThetaShift { n, k, j } => {
            let mut domain = level_region(n, k, j, window);
            domain.axes[j] = AxisBox {
                x: (-b - k, b - k),
                w: (k, k + b),
                inf: true,
            };
            check_map(
                &mut report,
                &MapSpec {
                    domain,
                    in_domain: &|g| in_level_stratum(g, k, j) && g.w()[j].at_least(k),
                    codomain: level_region(n, 0, j, window),
                    in_codomain: &|h| in_level_stratum(h, 0, j),
                    map: &|g| theta_shift(g, k, j),
                },
            );
        }
        MapCheck::ThetaPeel { n, k, j, l } => {
            let mut domain = level_region(n, k, j, window);
            domain.axes[j] = AxisBox {
                x: (-b - l, b - l),
                ..AxisBox::standard(window)
            }
            .pinned(l);
            check_map(
                &mut report,
                &MapSpec {
                    domain,
                    in_domain: &|g| in_level_stratum(g, k, j) && g.w()[j] == Ext::Fin(l),
                    codomain: level_region(n, k - l, j + 1, window),
                    in_codomain: &|h| in_level_stratum(h, k - l, j + 1),
                    map: &|g| theta_peel(g, k, j, l),
                },
            );
        }
        MapCheck::ThetaTerminal { n, l } => check_map(
            &mut report,
            &MapSpec {
                domain: level_region(n, l, n, window),
                in_domain: &|g| in_level_stratum(g, l, n),
                codomain: level_region(n, 0, n, window),
                in_codomain: &|h| in_level_stratum(h, 0, n),
                map: &|g| theta_terminal(g, l),
            },
        ),
    }
    Ok(report)
}

/// Result of routing every element of `(F_n)_{k,0}` through the stratum maps
/// down to degree 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub n: usize,
    pub k: i64,
    pub window: i64,
    pub domain_size: u64,
    /// Distinct peel sequences ending in the terminal stratum at each level `j`.
    pub reached: Vec<u64>,
    pub pass: bool,
    pub counterexample: Option<GroupoidElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Follows each element of `(F_n)_{k,0}` through shifts and peels until it
/// lands in degree 0, recording the sequence of peeled amounts. Each distinct
/// sequence ending at level `j` is one terminal `(0, j)` summand.
pub fn trace_line_bundle(n: usize, k: i64, window: Window) -> Result<TraceReport> {
    check_n(n)?;
    check_k(k)?;
    if k < 1 {
        return Err(Error::OutOfRange(format!("trace needs k >= 1, got {k}")));
    }
    let mut out = TraceReport {
        n,
        k,
        window: window.get(),
        domain_size: 0,
        reached: vec![0; n + 1],
        pass: true,
        counterexample: None,
        detail: None,
    };
    let mut labels: Vec<Vec<Vec<i64>>> = vec![Vec::new(); n + 1];
    let mut landings: Vec<(usize, Vec<i64>, u128)> = Vec::new();
    let mut failure: Option<(GroupoidElement, String)> = None;

    let region = level_region(n, k, 0, window);
    region.for_each_triple(|z, x, w| {
        if failure.is_some() {
            return;
        }
        let Ok(start) = canonicalize(z, x, w) else {
            return;
        };
        out.domain_size += 1;
        let mut g = start.clone();
        let (mut d, mut j, mut label) = (k, 0usize, Vec::new());
        let end = loop {
            let step = if j == n {
                theta_terminal(&g, d)
            } else if g.w()[j].at_least(d) {
                theta_shift(&g, d, j)
            } else {
                let Ext::Fin(l) = g.w()[j] else {
                    unreachable!()
                };
                label.push(l);
                let next = theta_peel(&g, d, j, l);
                d -= l;
                j += 1;
                match next {
                    Ok(h) => {
                        g = h;
                        continue;
                    }
                    Err(e) => Err(e),
                }
            };
            break step;
        };
        let end = match end {
            Ok(h) => h,
            Err(e) => return failure = Some((start, e.to_string())),
        };
        if end.target() != start.target() || end.z() != 0 {
            return failure = Some((start, "target not preserved".into()));
        }
        match pack_el(&end) {
            Some(key) => landings.push((j, label.clone(), key)),
            None => return failure = Some((start, TOO_WIDE.into())),
        }
        labels[j].push(label);
    });
    if let Some((g, why)) = failure {
        out.pass = false;
        out.counterexample = Some(g);
        out.detail = Some(why);
        return Ok(out);
    }
    for (j, mut seen) in labels.into_iter().enumerate() {
        seen.sort_unstable();
        seen.dedup();
        out.reached[j] = seen.len() as u64;
    }
    landings.sort_unstable();
    if landings.windows(2).any(|p| p[0] == p[1]) {
        out.pass = false;
        out.detail = Some("two elements land on the same summand element".into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn win(w: u32) -> Window {
        Window::new(w).unwrap()
    }

    #[test]
    fn pack_is_injective_on_small_triples() {
        let a = pack(1, &[-1, 0], &[Ext::Fin(2), Ext::Inf]).unwrap();
        let b = pack(1, &[0, -1], &[Ext::Fin(2), Ext::Inf]).unwrap();
        assert_ne!(a, b);
        assert!(pack(0, &[200], &[Ext::Fin(0)]).is_none());
    }

    #[test]
    fn partition_examples() {
        let r = verify_partition(2, 2, 0, win(6)).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.domain_size > 0);
        assert_eq!(r.domain_size, r.image_size);

        assert!(verify_partition(1, 1, 0, win(4)).unwrap().pass);
        assert!(verify_partition(3, 4, 2, win(1)).unwrap().pass);
        assert!(verify_partition(2, 0, 0, win(2)).is_err());
        assert!(verify_partition(2, 1, 2, win(2)).is_err());
    }

    #[test]
    fn bijection_examples() {
        for map in [
            MapCheck::ThetaNeg { n: 2, k: -2 },
            MapCheck::ThetaShift { n: 3, k: 2, j: 1 },
            MapCheck::ThetaTerminal { n: 2, l: 3 },
            MapCheck::ThetaPeel {
                n: 2,
                k: 2,
                j: 0,
                l: 1,
            },
            MapCheck::Gamma { n: 2 },
            MapCheck::TIso { n: 2 },
        ] {
            let w = if matches!(map, MapCheck::ThetaShift { .. }) {
                5
            } else {
                6
            };
            let r = verify_bijection(map, win(w)).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(r.domain_size > 0 && r.image_size > 0, "{r:?}");
        }
    }

    #[test]
    fn bijection_rejects_bad_params() {
        assert!(verify_bijection(MapCheck::ThetaNeg { n: 2, k: 1 }, win(2)).is_err());
        assert!(verify_bijection(
            MapCheck::ThetaPeel {
                n: 2,
                k: 2,
                j: 0,
                l: 2
            },
            win(2)
        )
        .is_err());
        assert!(verify_bijection(MapCheck::Gamma { n: 0 }, win(2)).is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = verify_bijection(MapCheck::ThetaTerminal { n: 1, l: 1 }, win(2)).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "check",
            "params",
            "domain_size",
            "image_size",
            "pass",
            "counterexample",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["counterexample"], Value::Null);
        assert_eq!(v["params"]["map"], "theta_terminal");
    }

    #[test]
    fn trace_counts_small() {
        // n = 1, k = 2: levels reached by 1 and 2 peel sequences
        let t = trace_line_bundle(1, 2, win(4)).unwrap();
        assert!(t.pass, "{t:?}");
        assert_eq!(t.reached, vec![1, 2]);
    }
}
