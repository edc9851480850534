use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use zgunits_core::group::{compute_m, find_witnesses};
use zgunits_core::poly::{delta, is_hat_multiple, reduce_mod_cyclic, Poly};
use zgunits_core::units::{classify_order, PredictedOrder};
use zgunits_core::{GroupRing, GroupSpec, GroupTable, RingElement};

const SMALL: [&str; 8] = ["S3", "D4", "D5", "Q8", "A4", "C6", "D6", "S4"];

fn group(name: &str) -> GroupTable {
    GroupSpec::parse(name).unwrap().build().unwrap()
}

fn element(ring: &GroupRing<'_>, raw: &[(usize, i64)]) -> RingElement {
    let n = ring.group().order();
    ring.element(raw.iter().map(|&(g, c)| (g % n, c)))
}

fn raw_terms() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..1000, -20i64..20), 0..8)
}

/// Group-ring product computed directly on permutations, keyed by image vectors.
fn naive_mul(g: &GroupTable, x: &RingElement, y: &RingElement) -> BTreeMap<Vec<u32>, BigInt> {
    let mut out: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    for (&i, c) in x.terms() {
        for (&j, d) in y.terms() {
            let p = g.element(i).then(g.element(j));
            *out.entry(p.images().to_vec()).or_default() += c * d;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn keyed(g: &GroupTable, x: &RingElement) -> BTreeMap<Vec<u32>, BigInt> {
    x.terms()
        .iter()
        .map(|(&i, c)| (g.element(i).images().to_vec(), c.clone()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(name in prop::sample::select(SMALL.to_vec()), x in raw_terms(), y in raw_terms(), z in raw_terms()) {
        let g = group(name);
        let r = GroupRing::integral(&g);
        let (x, y, z) = (element(&r, &x), element(&r, &y), element(&r, &z));
        let xy = r.mul(&x, &y).unwrap();
        prop_assert_eq!(r.mul(&xy, &z).unwrap(), r.mul(&x, &r.mul(&y, &z).unwrap()).unwrap());
        prop_assert_eq!(
            r.mul(&x, &r.add(&y, &z).unwrap()).unwrap(),
            r.add(&xy, &r.mul(&x, &z).unwrap()).unwrap()
        );
        prop_assert_eq!(
            r.mul(&r.add(&x, &y).unwrap(), &z).unwrap(),
            r.add(&r.mul(&x, &z).unwrap(), &r.mul(&y, &z).unwrap()).unwrap()
        );
        prop_assert_eq!(r.mul(&r.one(), &x).unwrap(), x.clone());
        prop_assert_eq!(r.mul(&x, &r.one()).unwrap(), x.clone());
        prop_assert_eq!(keyed(&g, &xy), naive_mul(&g, &x, &y));
    }

    #[test]
    fn augmentation_and_trace(name in prop::sample::select(SMALL.to_vec()), x in raw_terms(), y in raw_terms()) {
        let g = group(name);
        let r = GroupRing::integral(&g);
        let (x, y) = (element(&r, &x), element(&r, &y));
        let xy = r.mul(&x, &y).unwrap();
        prop_assert_eq!(r.augmentation(&xy), r.augmentation(&x) * r.augmentation(&y));
        prop_assert_eq!(r.trace(&xy), r.trace(&r.mul(&y, &x).unwrap()));
    }

    #[test]
    fn conjugation_preserves_order(name in prop::sample::select(SMALL.to_vec()), g0 in 0usize..1000, h0 in 0usize..1000) {
        let g = group(name);
        let (x, h) = (g0 % g.order(), h0 % g.order());
        prop_assert_eq!(g.element_order(g.conjugate(x, h)), g.element_order(h));
    }

    #[test]
    fn classify_in_range(n in 2usize..=48, k0 in 0usize..1000, m0 in 0usize..1000) {
        let k = 1 + k0 % n;
        let m = 2 + m0 % (n - 1);
        let c = classify_order(n, k, m).unwrap();
        let g = num_integer::gcd(k, n);
        prop_assert_eq!(c.s_k, n / g);
        match c.order {
            PredictedOrder::Finite(d) => {
                prop_assert!(d == n || d == c.s_k);
                if n % m == 0 {
                    prop_assert!(c.t_k_integral());
                }
            }
            PredictedOrder::Infinite => {
                prop_assert!(g != 1);
                prop_assert!(num_integer::gcd(k, m) != 1 || m == n);
            }
        }
    }

    #[test]
    fn beta_test_is_coefficient_constancy(n in 1usize..12, coeffs in prop::collection::vec(-3i64..3, 0..30), beta in -3i64..3) {
        let p = reduce_mod_cyclic(&Poly::from_i64(&coeffs), n);
        let constant = p.is_zero() || (p.coeffs().len() == n && p.coeffs().iter().all(|c| *c == p.coeffs()[0]));
        prop_assert_eq!(is_hat_multiple(&p, n), constant);
        let hat = reduce_mod_cyclic(&Poly::geometric(n).scale(&BigInt::from(beta)), n);
        prop_assert!(is_hat_multiple(&hat, n));
    }

    #[test]
    fn telescoping(n in 2usize..30, k0 in 0usize..1000) {
        let k = 1 + k0 % (n - 1);
        let lhs = reduce_mod_cyclic(&delta(n, k as i64).unwrap().mul(&Poly::x_minus_one()), n);
        let rhs = reduce_mod_cyclic(&Poly::monomial(BigInt::one(), k).sub(&Poly::one()), n);
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn hat_kills_augmentation_ideal_of_cyclic() {
    for name in SMALL {
        let g = group(name);
        let r = GroupRing::integral(&g);
        for a in 0..g.order() {
            let hat = r.hat(a);
            let am1 = r.sub(&r.basis(a), &r.one()).unwrap();
            assert!(r.mul(&hat, &am1).unwrap().is_zero());
            assert!(r.mul(&am1, &hat).unwrap().is_zero());
            assert_eq!(r.augmentation(&hat), BigInt::from(g.element_order(a)));
        }
    }
}

#[test]
fn non_abelian_groups_have_non_commuting_pair() {
    for name in ["S3", "D4", "D5", "Q8", "A4", "S4"] {
        let g = group(name);
        let r = GroupRing::integral(&g);
        let pair = (0..g.order())
            .flat_map(|x| (0..g.order()).map(move |y| (x, y)))
            .find(|&(x, y)| g.mul(x, y) != g.mul(y, x))
            .unwrap();
        let (x, y) = (r.basis(pair.0), r.basis(pair.1));
        assert_ne!(r.mul(&x, &y).unwrap(), r.mul(&y, &x).unwrap(), "{name}");
    }
}

#[test]
fn normalizer_properties() {
    for name in SMALL {
        let g = group(name);
        for a in 0..g.order() {
            let h = g.cyclic_subgroup(a);
            let n = g.normalizer(&h).unwrap();
            assert!(h.is_subset(&n));
            assert!(g.is_subgroup(&n));
            assert_eq!(g.is_normal(&h).unwrap(), n == g.whole());
        }
    }
}

#[test]
fn witness_invariants() {
    for name in ["S3", "D4", "D5", "D6", "A4", "S4", "S3xS3"] {
        let g = group(name);
        let normalizes_power = |a: usize, b: usize, e: usize| {
            let c = g.pow(a, e as i64);
            let cyc = g.cyclic_subgroup(c);
            cyc.ones().all(|x| cyc.contains(g.conjugate(b, x)))
        };
        for w in find_witnesses(&g, false) {
            assert!(normalizes_power(w.a, w.b, w.m));
            assert!((2..w.m).all(|m| !normalizes_power(w.a, w.b, m)));
            assert_eq!(w.order_a % w.m, 0, "M divides |a|");
            assert_eq!(compute_m(&g, w.a, w.b).unwrap(), w.m);
            for &k in &w.valid_k {
                let c = g.pow(w.a, k as i64);
                let cyc = g.cyclic_subgroup(c);
                let inv_b = g.inv(w.b);
                assert!(!cyc.contains(g.conjugate(inv_b, c)) || !cyc.contains(g.conjugate(w.b, c)));
            }
        }
    }
    for name in ["C12", "Q8", "C6", "C4xC2"] {
        assert!(find_witnesses(&group(name), false).is_empty(), "{name}");
    }
}
