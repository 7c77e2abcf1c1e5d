use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use sunit_core::bounds::mu1_bound;
use sunit_core::padic::{hensel_lift_splitting, local_abs_with};
use sunit_core::presentation::presentation_generators;
use sunit_core::tree::{act, ball, distance};
use sunit_core::{AlgebraShape, BoundsEngine, Covolume, Generator, HurwitzElement, RatQuaternion, TreeVertex, Word};

fn rat() -> impl Strategy<Value = BigRational> {
    (-60i64..=60, 1i64..=45).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn quat() -> impl Strategy<Value = RatQuaternion> {
    (rat(), rat(), rat(), rat()).prop_map(|(w, x, y, z)| RatQuaternion::new(w, x, y, z))
}

fn nonzero_quat() -> impl Strategy<Value = RatQuaternion> {
    quat().prop_filter("nonzero", |q| !q.is_zero())
}

fn hurwitz() -> impl Strategy<Value = HurwitzElement> {
    (any::<bool>(), [-6i64..=6, -6i64..=6, -6i64..=6, -6i64..=6]).prop_map(|(half, c)| {
        let [a, b, cc, d] = c.map(|v| if half { 2 * v + 1 } else { 2 * v });
        HurwitzElement::new(a, b, cc, d).unwrap()
    })
}

fn nonzero_hurwitz() -> impl Strategy<Value = HurwitzElement> {
    hurwitz().prop_filter("nonzero", |h| h.norm() > 0)
}

fn odd_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11, 13])
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec((any::<bool>(), -3i64..=3), 0..6).prop_map(|v| {
        Word::from_syllables(v.into_iter().map(|(g, e)| (if g { Generator::A } else { Generator::B }, e)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn norm_is_multiplicative(a in quat(), b in quat()) {
        prop_assert_eq!((&a * &b).reduced_norm(), a.reduced_norm() * b.reduced_norm());
    }

    #[test]
    fn inverse_is_two_sided(a in nonzero_quat()) {
        let inv = a.inverse().unwrap();
        prop_assert!((&a * &inv).is_one());
        prop_assert!((&inv * &a).is_one());
    }

    #[test]
    fn conjugate_is_anti_homomorphism(a in quat(), b in quat()) {
        prop_assert_eq!((&a * &b).conjugate(), &b.conjugate() * &a.conjugate());
    }

    #[test]
    fn display_parse_round_trip(a in quat()) {
        let back: RatQuaternion = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn content_is_superadditive(a in nonzero_quat(), b in nonzero_quat(), p in odd_prime()) {
        let ab = &a * &b;
        let ea = a.content_valuation(p).unwrap();
        let eb = b.content_valuation(p).unwrap();
        prop_assert!(ab.content_valuation(p).unwrap() >= ea + eb);
    }

    #[test]
    fn hurwitz_closed_under_product(a in hurwitz(), b in hurwitz()) {
        let prod = a.to_rational() * b.to_rational();
        prop_assert_eq!(prod.to_hurwitz(), Some(a * b));
    }

    #[test]
    fn order_index_is_norm_squared(h in nonzero_hurwitz()) {
        let n = h.norm();
        prop_assert_eq!(h.order_index().unwrap(), num_bigint::BigUint::from(n * n));
    }

    #[test]
    fn height_of_integral_is_norm(h in nonzero_hurwitz()) {
        let q = h.to_rational();
        prop_assert_eq!(q.height().unwrap(), q.reduced_norm());
    }

    #[test]
    fn splitting_is_homomorphism(a in quat(), b in quat(), p in odd_prime()) {
        let split = hensel_lift_splitting(p, 12).unwrap();
        let lhs = split.apply(&(&a * &b));
        let rhs = split.apply(&a).mul(&split.apply(&b));
        prop_assert!(lhs.congruent(&rhs, lhs.precision().min(rhs.precision())));
        let sum = split.apply(&(&a + &b));
        let rsum = split.apply(&a).add(&split.apply(&b));
        prop_assert!(sum.congruent(&rsum, sum.precision().min(rsum.precision())));
    }

    #[test]
    fn splitting_determinant_is_norm(a in nonzero_quat(), p in odd_prime()) {
        let split = hensel_lift_splitting(p, 16).unwrap();
        let det = split.apply(&a).det();
        let norm = sunit_core::PAdic::from_rational(&a.reduced_norm(), p, det.precision());
        prop_assert!(det.sub(&norm).is_zero());
    }

    #[test]
    fn local_abs_matches_content(a in nonzero_quat(), p in odd_prime()) {
        let split = hensel_lift_splitting(p, 16).unwrap();
        let e = a.content_valuation(p).unwrap();
        let expected = if e >= 0 {
            BigRational::new(BigInt::one(), BigInt::from(p).pow(e as u32))
        } else {
            BigRational::from_integer(BigInt::from(p).pow((-e) as u32))
        };
        prop_assert_eq!(local_abs_with(&a, &split).unwrap(), expected);
    }

    #[test]
    fn action_is_isometry(h in nonzero_hurwitz(), p in prop::sample::select(vec![3u64, 5]), i in 0usize..200, j in 0usize..200) {
        let split = hensel_lift_splitting(p, 24).unwrap();
        let verts = ball(p, 2);
        let (u, v) = (&verts[i % verts.len()], &verts[j % verts.len()]);
        let g = h.to_rational();
        let gu = act(&g, u, &split).unwrap();
        let gv = act(&g, v, &split).unwrap();
        prop_assert_eq!(distance(&gu, &gv).unwrap(), distance(u, v).unwrap());
    }

    #[test]
    fn action_composes(g in nonzero_hurwitz(), h in nonzero_hurwitz(), i in 0usize..100) {
        let p = 3;
        let split = hensel_lift_splitting(p, 24).unwrap();
        let verts = ball(p, 2);
        let v = &verts[i % verts.len()];
        let (g, h) = (g.to_rational(), h.to_rational());
        let lhs = act(&(&g * &h), v, &split).unwrap();
        let rhs = act(&g, &act(&h, v, &split).unwrap(), &split).unwrap();
        prop_assert_eq!(lhs, rhs);
        let scalar = RatQuaternion::from_scalar(BigRational::new(9.into(), 7.into()));
        prop_assert_eq!(act(&scalar, v, &split).unwrap(), v.clone());
    }

    #[test]
    fn distance_is_symmetric(i in 0usize..200, j in 0usize..200) {
        let verts = ball(5, 2);
        let (u, v) = (&verts[i % verts.len()], &verts[j % verts.len()]);
        prop_assert_eq!(distance(u, v).unwrap(), distance(v, u).unwrap());
        prop_assert!(distance(u, v).unwrap() <= u.distance_to_base() + v.distance_to_base());
        prop_assert_eq!(distance(&TreeVertex::base(5), u).unwrap(), u.distance_to_base());
    }

    #[test]
    fn word_evaluation_is_homomorphism(u in word(), v in word()) {
        let (a, b) = presentation_generators();
        let lhs = u.concat(&v).evaluate(&a, &b).unwrap();
        let rhs = u.evaluate(&a, &b).unwrap() * v.evaluate(&a, &b).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!((u.concat(&u.inverse())).is_empty());
    }

    #[test]
    fn word_display_round_trip(u in word()) {
        let back: Word = u.to_string().parse().unwrap();
        prop_assert_eq!(back, u);
    }

    #[test]
    fn centrality_survives_conjugation(u in word(), v in word()) {
        // If w is central then u w u⁻¹ = w.
        let (a, b) = presentation_generators();
        let w = v.concat(&v.inverse());
        let conj = u.concat(&w).concat(&u.inverse());
        prop_assert!(conj.evaluate(&a, &b).unwrap().is_one());
        let x = v.evaluate(&a, &b).unwrap();
        let central = x.is_central();
        let ux = u.evaluate(&a, &b).unwrap();
        let c = &(&ux * &x) * &ux.inverse().unwrap();
        prop_assert_eq!(c.is_central(), central);
    }
}

fn shape_strategy() -> impl Strategy<Value = AlgebraShape> {
    (1u32..=6, 1u32..=4, 0u32..=3, 1u64..=400).prop_filter_map("valid shape", |(n, d, r2, cov)| {
        if 2 * r2 > n {
            return None;
        }
        let r1 = n - 2 * r2;
        let s = if d % 2 == 0 { r1.min(1) } else { 0 };
        AlgebraShape::new(n, d, s, r1, r2, Covolume::Rational(BigRational::from_integer(cov.into()))).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exponent_at_most_one(shape in shape_strategy()) {
        prop_assert!(shape.exponent_e() <= BigRational::one());
        prop_assert!(shape.exponent_e().is_positive());
        prop_assert!(!mu1_bound(&shape).is_zero());
    }

    #[test]
    fn c_is_homogeneous(shape in shape_strategy(), u in 2i64..=5) {
        let mut e = BoundsEngine::new(40).unwrap();
        let c0 = e.minkowski_c(&shape);
        let Covolume::Rational(cov) = &shape.covolume else { unreachable!() };
        let k = (shape.d * shape.d * (2 * shape.n - shape.s)) as usize;
        // With t = u², t^{d²(n − s/2)} = u^k is an integer.
        let factor = num_traits::pow(BigInt::from(u), k);
        let scaled = AlgebraShape { covolume: Covolume::Rational(cov * BigRational::from_integer(factor)), ..shape };
        let c1 = e.minkowski_c(&scaled);
        let want = e.mul(&c0, &e.int(u * u));
        let rel = e.abs(&e.div(&e.sub(&c1, &want), &want));
        let tol = e.powi(&e.int(10), -30);
        prop_assert_eq!(e.cmp(&rel, &tol), Ordering::Less);
    }

    #[test]
    fn final_bound_is_monotone(shape in shape_strategy(), extra in 1u64..50, q in prop::sample::select(vec![3u64, 5, 7, 11])) {
        let mut e = BoundsEngine::new(40).unwrap();
        let Covolume::Rational(cov) = &shape.covolume else { unreachable!() };
        let bigger = AlgebraShape { covolume: Covolume::Rational(cov + BigRational::from_integer(extra.into())), ..shape.clone() };
        let r0 = e.bound_report(&shape, &[q]).unwrap();
        let r1 = e.bound_report(&bigger, &[q]).unwrap();
        let r2 = e.bound_report(&shape, &[q, q + 2 * extra + 10]).unwrap();
        if let (Some(b0), Some(b1), Some(b2)) = (&r0.height_bound_thm51, &r1.height_bound_thm51, &r2.height_bound_thm51) {
            prop_assert_ne!(e.cmp(b1.value(), b0.value()), Ordering::Less);
            prop_assert_ne!(e.cmp(b2.value(), b0.value()), Ordering::Less);
        }
        prop_assert_ne!(e.cmp(r0.t1.value(), &e.int(1)), Ordering::Less);
        prop_assert_ne!(e.cmp(r0.t2.value(), &e.int(1)), Ordering::Less);
        prop_assert_ne!(e.cmp(r0.t5.value(), &e.int(1)), Ordering::Less);
        // Both sides can coincide exactly, so compare with a relative slack.
        let slack = e.sub(&e.int(1), &e.powi(&e.int(10), -30));
        let t6_lower = e.mul(r0.t6.value(), &slack);
        prop_assert_ne!(e.cmp(r0.t6_closed_form_bound.value(), &t6_lower), Ordering::Less);
    }

    #[test]
    fn coarse_m_x_dominates(r1 in 2u32..=4, r2 in 1u32..=2, d in prop::sample::select(vec![2u32, 4]), cov in 1u64..=10_000) {
        let n = r1 + 2 * r2;
        let shape = AlgebraShape::new(n, d, 1, r1, r2, Covolume::from_int(cov as i64)).unwrap();
        let mut e = BoundsEngine::new(40).unwrap();
        let c = e.minkowski_c(&shape);
        let tight = e.m_x_tight(&shape, &c);
        let coarse = e.m_x_paper(&shape, &c);
        prop_assert_ne!(e.cmp(&coarse, &tight), Ordering::Less);
    }
}
