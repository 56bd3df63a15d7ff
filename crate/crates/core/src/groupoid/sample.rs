//! Seeded random elements far outside the enumeration windows.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::maps::{
    gamma_inverse, gamma_iso, in_corner_stratum, in_level_stratum, t_iso, theta_neg, theta_peel,
    theta_shift, theta_terminal,
};
use super::verify::{MapCheck, Pred};
use super::{canonicalize, Ext, GroupoidElement};
use crate::error::Result;
use crate::report::Report;

const SPAN: i64 = 1000;

fn random_cut(rng: &mut ChaCha8Rng, lo: i64) -> Ext {
    if rng.gen_bool(0.2) {
        Ext::Inf
    } else {
        Ext::Fin(rng.gen_range(lo..=lo + SPAN))
    }
}

/// Degree `z`, source `w`, target entries drawn from `[0, SPAN]`.
fn random_element(rng: &mut ChaCha8Rng, z: i64, w: &[Ext]) -> GroupoidElement {
    let mut x = vec![0; w.len()];
    let mut sum = 0;
    for (m, e) in w.iter().enumerate() {
        match *e {
            Ext::Fin(v) => x[m] = rng.gen_range(0..=SPAN) - v,
            Ext::Inf => {
                x[m] = -z - sum;
                break;
            }
        }
        sum += x[m];
    }
    canonicalize(z, &x, w).expect("constructed inside the groupoid")
}

fn domain_element(rng: &mut ChaCha8Rng, map: MapCheck) -> GroupoidElement {
    let n = map.n();
    let mut w: Vec<Ext> = (0..n).map(|_| random_cut(rng, 0)).collect();
    let z = match map {
        MapCheck::ThetaNeg { k, .. } => k,
        MapCheck::ThetaShift { k, j, .. } => {
            w[..j].fill(Ext::Fin(0));
            w[j] = random_cut(rng, k);
            k
        }
        MapCheck::ThetaPeel { k, j, l, .. } => {
            w[..j].fill(Ext::Fin(0));
            w[j] = Ext::Fin(l);
            k
        }
        MapCheck::ThetaTerminal { l, .. } => {
            w.fill(Ext::Fin(0));
            l
        }
        MapCheck::Gamma { .. } => rng.gen_range(-SPAN..=SPAN),
        MapCheck::TIso { .. } => 0,
    };
    random_element(rng, z, &w)
}

/// Applies `map` to random domain elements with coordinates up to 1000 and
/// checks stratum, target preservation and injectivity on the sample.
pub fn sample_map(map: MapCheck, seed: u64, samples: usize) -> Result<Report> {
    map.validate()?;
    let mut params = serde_json::to_value(map).expect("serializes");
    params["seed"] = json!(seed);
    params["samples"] = json!(samples);
    let mut report = Report::new(format!("{}_sampled", map.name()), params);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut domain = HashSet::new();
    let mut images = HashSet::new();
    for _ in 0..samples {
        let g = domain_element(&mut rng, map);
        let gj = || Some(serde_json::to_value(&g).expect("serializes"));
        let image = match map {
            MapCheck::Gamma { .. } => match gamma_iso(&g) {
                Ok(p) => {
                    if gamma_inverse(&p).as_ref() != Ok(&g) {
                        report.fail(gj(), "inverse does not recover the element");
                    }
                    Ok((p.target(), serde_json::to_string(&p).expect("serializes")))
                }
                Err(e) => Err(e),
            },
            MapCheck::TIso { .. } => {
                t_iso(&g).map(|t| (t.target(), serde_json::to_string(&t).expect("serializes")))
            }
            _ => {
                let (mapped, ok): (Result<GroupoidElement>, Pred<'_>) = match map {
                    MapCheck::ThetaNeg { k, .. } => {
                        (theta_neg(&g, k), &move |h| in_corner_stratum(h, -k))
                    }
                    MapCheck::ThetaShift { k, j, .. } => {
                        (theta_shift(&g, k, j), &move |h| in_level_stratum(h, 0, j))
                    }
                    MapCheck::ThetaPeel { k, j, l, .. } => (theta_peel(&g, k, j, l), &move |h| {
                        in_level_stratum(h, k - l, j + 1)
                    }),
                    MapCheck::ThetaTerminal { l, n } => {
                        (theta_terminal(&g, l), &move |h| in_level_stratum(h, 0, n))
                    }
                    MapCheck::Gamma { .. } | MapCheck::TIso { .. } => unreachable!(),
                };
                mapped.map(|h| {
                    if !ok(&h) {
                        report.fail(gj(), format!("image {h} outside the codomain"));
                    }
                    (h.target(), h.to_string())
                })
            }
        };
        match image {
            Ok((target, key)) => {
                if target != g.target() {
                    report.fail(gj(), "target not preserved");
                }
                if domain.insert(g.clone()) && !images.insert(key) {
                    report.fail(gj(), "two sampled elements share an image");
                }
            }
            Err(e) => report.fail(gj(), format!("map failed: {e}")),
        }
    }
    report.domain_size = domain.len() as u64;
    report.image_size = images.len() as u64;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_pass_and_are_reproducible() {
        for map in [
            MapCheck::ThetaNeg { n: 3, k: -3 },
            MapCheck::ThetaShift { n: 3, k: 2, j: 1 },
            MapCheck::ThetaPeel {
                n: 2,
                k: 3,
                j: 1,
                l: 2,
            },
            MapCheck::ThetaTerminal { n: 2, l: 5 },
            MapCheck::Gamma { n: 3 },
            MapCheck::TIso { n: 3 },
        ] {
            let a = sample_map(map, 7, 200).unwrap();
            assert!(a.pass, "{a:?}");
            assert_eq!(a, sample_map(map, 7, 200).unwrap());
        }
    }
}
