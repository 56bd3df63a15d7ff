use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use qproj_core::expr::parse_sum;
use qproj_core::groupoid::{
    canonicalize, compose, gamma_inverse, gamma_iso, in_level_stratum, t_iso, theta_neg,
    theta_peel, theta_shift, Ext, GroupoidElement,
};
use qproj_core::ktheory::{nu_star, K0Vector};
use qproj_core::line_bundles::{binomial, closed_form, recursion_expand, LineBundle};
use qproj_core::oracle::{boxplus_patterns, rank_by_count, DiagonalPattern, Factor, PatternStack};
use qproj_core::proj_monoid::{boxplus, normalize, rho, ProjClass};

fn class_strategy(n: u32) -> impl Strategy<Value = ProjClass> {
    (0..=n, any::<u128>(), any::<bool>()).prop_map(move |(j, k, zero)| {
        if zero && j == 0 {
            ProjClass::zero(n)
        } else {
            ProjClass::validate(n as i64, j as i64, BigUint::from(k) + 1u32).unwrap()
        }
    })
}

fn triple() -> impl Strategy<Value = (ProjClass, ProjClass, ProjClass)> {
    (0u32..=6).prop_flat_map(|n| (class_strategy(n), class_strategy(n), class_strategy(n)))
}

/// A canonical source vector: finite entries, then an optional infinite tail.
fn cuts(n: usize) -> impl Strategy<Value = Vec<Ext>> {
    (proptest::collection::vec(0i64..6, n), 0..=n + 2).prop_map(move |(fin, cut)| {
        fin.into_iter()
            .enumerate()
            .map(|(m, v)| if m >= cut { Ext::Inf } else { Ext::Fin(v) })
            .collect()
    })
}

/// The element of degree `z` with source `w` whose finite target entries are `ts`.
fn with_source(z: i64, ts: &[i64], w: &[Ext]) -> GroupoidElement {
    let mut x = vec![0; w.len()];
    let mut sum = 0;
    for (m, e) in w.iter().enumerate() {
        match *e {
            Ext::Fin(v) => x[m] = ts[m] - v,
            Ext::Inf => {
                x[m] = -z - sum;
                break;
            }
        }
        sum += x[m];
    }
    canonicalize(z, &x, w).unwrap()
}

fn element(n: usize) -> impl Strategy<Value = GroupoidElement> {
    (-5i64..=5, proptest::collection::vec(0i64..6, n), cuts(n))
        .prop_map(|(z, ts, w)| with_source(z, &ts, &w))
}

/// Three elements `g, h, f` with `g h` and `h f` defined.
fn chain(n: usize) -> impl Strategy<Value = (GroupoidElement, GroupoidElement, GroupoidElement)> {
    (
        element(n),
        -5i64..=5,
        proptest::collection::vec(0i64..6, n),
        -5i64..=5,
        proptest::collection::vec(0i64..6, n),
    )
        .prop_map(|(f, zh, th, zg, tg)| {
            let h = with_source(zh, &th, &f.target().0);
            let g = with_source(zg, &tg, &h.target().0);
            (g, h, f)
        })
}

fn factor() -> impl Strategy<Value = Factor> {
    prop_oneof![
        Just(Factor::I),
        (1u64..8).prop_map(Factor::P),
        (1u64..8).prop_map(Factor::Pc),
    ]
}

fn pattern(n: usize) -> impl Strategy<Value = DiagonalPattern> {
    (proptest::collection::vec(factor(), n), 0u32..4)
        .prop_map(|(f, c)| DiagonalPattern::new(f, c).unwrap())
}

proptest! {
    #[test]
    fn boxplus_is_a_commutative_monoid((a, b, c) in triple()) {
        let zero = ProjClass::zero(a.n());
        prop_assert_eq!(boxplus(&a, &zero).unwrap(), a.clone());
        prop_assert_eq!(boxplus(&a, &b).unwrap(), boxplus(&b, &a).unwrap());
        prop_assert_eq!(
            boxplus(&boxplus(&a, &b).unwrap(), &c).unwrap(),
            boxplus(&a, &boxplus(&b, &c).unwrap()).unwrap()
        );
        prop_assert_eq!(rho(&boxplus(&a, &b).unwrap()), rho(&a).add(&rho(&b)).unwrap());
    }

    #[test]
    fn normalized_sums_print_and_parse_back((a, b, c) in triple()) {
        let n = a.n();
        let s = normalize(n, &[a, b, c]).unwrap();
        let again = normalize(n, &parse_sum(n, &s.to_string()).unwrap()).unwrap();
        prop_assert_eq!(s, again);
    }

    #[test]
    fn class_json_round_trips((a, _, _) in triple()) {
        let s = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<ProjClass>(&s).unwrap(), a);
    }

    #[test]
    fn canonicalize_is_idempotent(g in (1usize..=4).prop_flat_map(element)) {
        prop_assert_eq!(canonicalize(g.z(), g.x(), g.w()).unwrap(), g.clone());
        let s = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<GroupoidElement>(&s).unwrap(), g);
    }

    #[test]
    fn groupoid_laws((g, h, f) in (1usize..=3).prop_flat_map(chain)) {
        let gh = compose(&g, &h).unwrap();
        prop_assert_eq!(gh.z(), g.z() + h.z());
        prop_assert_eq!(gh.source(), h.source());
        prop_assert_eq!(gh.target(), g.target());
        prop_assert_eq!(
            compose(&gh, &f).unwrap(),
            compose(&g, &compose(&h, &f).unwrap()).unwrap()
        );
        let inv = g.inverse();
        prop_assert_eq!(inv.inverse(), g.clone());
        prop_assert!(compose(&g, &inv).unwrap().is_unit());
        prop_assert!(compose(&inv, &g).unwrap().is_unit());
    }

    #[test]
    fn gamma_is_a_homomorphism((g, h, _) in (1usize..=3).prop_flat_map(chain)) {
        let (pg, ph) = (gamma_iso(&g).unwrap(), gamma_iso(&h).unwrap());
        prop_assert_eq!(gamma_iso(&compose(&g, &h).unwrap()).unwrap(), pg.compose(&ph).unwrap());
        prop_assert_eq!(gamma_inverse(&pg).unwrap(), g.clone());
        prop_assert_eq!(pg.source(), g.source());
        prop_assert_eq!(pg.target(), g.target());
    }

    #[test]
    fn t_iso_keeps_units(g in (1usize..=3).prop_flat_map(element)) {
        match t_iso(&g) {
            Ok(t) => {
                prop_assert_eq!(g.z(), 0);
                prop_assert_eq!(t.x(), g.x());
                prop_assert_eq!(t.target(), g.target());
            }
            Err(_) => prop_assert_ne!(g.z(), 0),
        }
    }

    #[test]
    fn stratum_maps_preserve_targets(
        n in 1usize..=3,
        k in 1i64..=4,
        ts in proptest::collection::vec(0i64..6, 3),
        w in cuts(3),
        j in 0usize..3,
    ) {
        let j = j % n;
        let mut w: Vec<Ext> = w[..n].to_vec();
        w[..j].fill(Ext::Fin(0));
        let g = with_source(k, &ts[..n], &w);
        prop_assert!(in_level_stratum(&g, k, j));
        let h = if g.w()[j].at_least(k) {
            theta_shift(&g, k, j).unwrap()
        } else {
            let Ext::Fin(l) = g.w()[j] else { unreachable!() };
            theta_peel(&g, k, j, l).unwrap()
        };
        prop_assert_eq!(h.target(), g.target());

        let neg = with_source(-k, &ts[..n], &w);
        let h = theta_neg(&neg, -k).unwrap();
        prop_assert_eq!(h.target(), neg.target());
        prop_assert_eq!(h.z(), 0);
    }

    #[test]
    fn rank_is_a_product_and_monotone(p in (0usize..=3).prop_flat_map(pattern), cut in 1u64..9) {
        prop_assert_eq!(p.rank_at(cut), rank_by_count(&p, cut));
        prop_assert!(p.rank_at(cut) <= p.rank_at(cut + 1));
    }

    #[test]
    fn stacks_add_and_commute_with_faces(
        (a, b) in (1usize..=3).prop_flat_map(|n| (pattern(n), pattern(n))),
        cut in 1u64..12,
    ) {
        let (sa, sb) = (PatternStack::single(a), PatternStack::single(b));
        let s = boxplus_patterns(&sa, &sb).unwrap();
        prop_assert_eq!(s.rank_at(cut), sa.rank_at(cut) + sb.rank_at(cut));
        prop_assert_eq!(
            s.face().unwrap(),
            boxplus_patterns(&sa.face().unwrap(), &sb.face().unwrap()).unwrap()
        );
    }

    #[test]
    fn nu_star_is_linear(
        a in proptest::collection::vec(-1000i64..1000, 4),
        b in proptest::collection::vec(-1000i64..1000, 4),
    ) {
        let (va, vb) = (K0Vector::from_i64(3, &a).unwrap(), K0Vector::from_i64(3, &b).unwrap());
        prop_assert_eq!(nu_star(&(&va + &vb)).unwrap(), &nu_star(&va).unwrap() + &nu_star(&vb).unwrap());
        prop_assert_eq!(nu_star(&va.scale(&BigInt::from(-3))).unwrap(), nu_star(&va).unwrap().scale(&BigInt::from(-3)));
    }

    #[test]
    fn recursion_matches_closed_form(n in 1u32..=6, k in 1i64..=30) {
        prop_assert_eq!(recursion_expand(n, k).unwrap(), closed_form(n, k).unwrap());
    }

    #[test]
    fn binomial_pascal_rule(k in 1i64..200, j in 1i64..200) {
        prop_assume!(j < k);
        prop_assert_eq!(
            binomial(k, j).unwrap(),
            binomial(k - 1, j - 1).unwrap() + binomial(k - 1, j).unwrap()
        );
        prop_assert_eq!(binomial(k, j).unwrap(), binomial(k, k - j).unwrap());
    }

    #[test]
    fn line_bundle_json_round_trips(n in 1u32..=5, k in -6i64..=12) {
        let lb = closed_form(n, k).unwrap();
        let s = serde_json::to_string(&lb).unwrap();
        prop_assert_eq!(serde_json::from_str::<LineBundle>(&s).unwrap(), lb);
    }
}
