use proptest::prelude::*;

use ssp_core::finite::field::FiniteField;
use ssp_core::finite::orbit::orbit_classes_generated;
use ssp_core::finite::submodule::SubmoduleBasis;
use ssp_core::linalg::{q, Q};
use ssp_core::quaternion::{hilbert_by_search, hilbert_odd, hilbert_symbol, maximal_order, Place};
use ssp_core::FqElem;

fn prime_divisors(mut n: i64) -> Vec<u32> {
    n = n.abs();
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d as u32);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n as u32);
    }
    out
}

fn nonzero(r: i64) -> impl Strategy<Value = i64> {
    (-r..=r).prop_filter("nonzero", |x| *x != 0)
}

fn field() -> impl Strategy<Value = FiniteField> {
    prop_oneof![
        Just(FiniteField::prime(2).unwrap()),
        Just(FiniteField::prime(3).unwrap()),
        Just(FiniteField::prime(5).unwrap()),
        Just(FiniteField::quadratic(2).unwrap()),
        Just(FiniteField::quadratic(3).unwrap()),
        Just(FiniteField::with_modulus(2, &[1, 1, 0, 0, 1]).unwrap()),
    ]
}

fn elem(f: &FiniteField, i: usize) -> FqElem {
    f.elements().nth(i % f.order() as usize).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hilbert_product_formula(a in nonzero(300), b in nonzero(300)) {
        let mut places: Vec<Place> = prime_divisors(2 * a * b).into_iter().map(Place::Finite).collect();
        places.push(Place::Infinity);
        let prod: i8 = places.iter().map(|&v| hilbert_symbol(&q(a), &q(b), v).unwrap()).product();
        prop_assert_eq!(prod, 1);
    }

    #[test]
    fn hilbert_symmetric_and_bilinear(a in nonzero(60), b in nonzero(60), c in nonzero(60), p in prop::sample::select(vec![2u32, 3, 5, 7])) {
        let v = Place::Finite(p);
        let h = |x: i64, y: i64| hilbert_symbol(&q(x), &q(y), v).unwrap();
        prop_assert_eq!(h(a, b), h(b, a));
        prop_assert_eq!(h(a, b * c), h(a, b) * h(a, c));
        prop_assert_eq!(h(a, -a), 1);
        if a != 1 {
            prop_assert_eq!(h(a, 1 - a), 1);
        }
    }

    #[test]
    fn hilbert_rational_square_classes(a in nonzero(40), b in nonzero(40), d in 1i64..8) {
        let scaled: Q = q(a) / q(d * d);
        for v in [Place::Finite(2), Place::Finite(3), Place::Infinity] {
            prop_assert_eq!(hilbert_symbol(&scaled, &q(b), v).unwrap(), hilbert_symbol(&q(a), &q(b), v).unwrap());
        }
    }

    #[test]
    fn odd_formula_matches_search(a in nonzero(80), b in nonzero(80), p in prop::sample::select(vec![3u32, 5, 7])) {
        prop_assert_eq!(hilbert_odd(a, b, p), hilbert_by_search(a, b, p, 3).unwrap());
    }

    #[test]
    fn reduced_norm_is_multiplicative(p in prop::sample::select(vec![2u32, 3, 5, 7, 11]),
                                      x in prop::collection::vec(-6i64..=6, 4),
                                      y in prop::collection::vec(-6i64..=6, 4)) {
        let o = maximal_order(p).unwrap();
        let (a, b) = (o.order.element(&x), o.order.element(&y));
        let alg = o.algebra.algebra();
        let ab = alg.mul(&a, &b);
        let n = |z: &[Q]| o.algebra.reduced_norm(z);
        prop_assert_eq!(n(&ab), n(&a) * n(&b));
        prop_assert!(o.order.contains(&ab));
        prop_assert!(n(&a).is_integer() && o.algebra.reduced_trace(&a).is_integer());
        prop_assert_eq!(o.algebra.conj(&o.algebra.conj(&a)), a);
    }

    #[test]
    fn quaternion_multiplication_is_associative(p in prop::sample::select(vec![2u32, 3, 5]),
                                                x in prop::collection::vec(-4i64..=4, 4),
                                                y in prop::collection::vec(-4i64..=4, 4),
                                                z in prop::collection::vec(-4i64..=4, 4)) {
        let o = maximal_order(p).unwrap();
        let alg = o.algebra.algebra();
        let (a, b, c) = (o.order.element(&x), o.order.element(&y), o.order.element(&z));
        prop_assert_eq!(alg.mul(&alg.mul(&a, &b), &c), alg.mul(&a, &alg.mul(&b, &c)));
    }

    #[test]
    fn field_axioms(f in field(), i in 0usize..64, j in 0usize..64, k in 0usize..64) {
        let (a, b, c) = (elem(&f, i), elem(&f, j), elem(&f, k));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.pow(a, f.order() as u64), a);
        if a != f.zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            prop_assert_eq!((f.order() as u64 - 1) % f.multiplicative_order(a), 0);
        }
    }

    #[test]
    fn orbits_partition_the_lines(p in prop::sample::select(vec![2u32, 3, 5]),
                                  n in 2usize..=3,
                                  raw in prop::collection::vec(prop::collection::vec(0u32..5, 9), 1..3)) {
        let f = FiniteField::prime(p).unwrap();
        let gens: Vec<Vec<Vec<u32>>> = raw
            .iter()
            .map(|m| (0..n).map(|r| (0..n).map(|c| m[r * 3 + c] % p).collect()).collect())
            .filter(|m: &Vec<Vec<u32>>| SubmoduleBasis::span(&f, n, m).dim() == n)
            .collect();
        // every line of F_p^n, once each
        let mut lines: Vec<SubmoduleBasis> = (1..(p as usize).pow(n as u32))
            .map(|mut x| {
                let v: Vec<u32> = (0..n).map(|_| { let d = (x % p as usize) as u32; x /= p as usize; d }).collect();
                SubmoduleBasis::span(&f, n, &[v])
            })
            .collect();
        lines.sort();
        lines.dedup();
        let orbits = orbit_classes_generated(&f, &lines, &gens).unwrap();
        prop_assert_eq!(orbits.iter().map(|o| o.size).sum::<usize>(), lines.len());
        for o in &orbits {
            prop_assert!(lines.contains(&o.representative));
        }
        for w in orbits.windows(2) {
            prop_assert!(w[0].representative < w[1].representative);
        }
    }
}
