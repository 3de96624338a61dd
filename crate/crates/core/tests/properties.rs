use num_rational::BigRational;
use proptest::prelude::*;
use twofloat::TwoFloat;
use wpvol::geometry::moments::moments_extended;
use wpvol::geometry::weight::{Atom, Weight};
use wpvol::jt::{gauss_glue, jt_partition, JtRequest, SlotPoly};
use wpvol::residue::{omega_from_t, t_from_omega};
use wpvol::ring::rational::rat;
use wpvol::ring::{MPoly, Ring, Symbol, TruncSeries};
use wpvol::volume::{Basis, VolumePoly};

const SYMBOLS: [Symbol; 4] = [Symbol::B(1), Symbol::B(2), Symbol::Q, Symbol::SmallM(1)];

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, q)| rat(p, q))
}

fn monomial_poly(exps: &[u32], c: BigRational) -> MPoly {
    let base = SYMBOLS.iter().zip(exps).fold(MPoly::one(), |acc, (&s, &e)| &acc * &MPoly::var_pow(s, e));
    base.scale(&c)
}

fn poly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec((rational(), prop::collection::vec(0u32..=3, 4)), 0..5)
        .prop_map(|terms| terms.iter().fold(MPoly::zero(), |acc, (c, e)| &acc + &monomial_poly(e, c.clone())))
}

fn series() -> impl Strategy<Value = TruncSeries<BigRational>> {
    (prop::collection::vec(rational(), 1..8), 0usize..8)
        .prop_map(|(c, order)| TruncSeries::new("x", c, order))
}

fn slot_poly(n: usize) -> impl Strategy<Value = SlotPoly> {
    prop::collection::vec((prop::collection::vec(0u32..=4, n), -2.0f64..2.0), 1..6).prop_map(move |terms| {
        let mut p = SlotPoly::new(n);
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    })
}

fn subcritical_weight() -> impl Strategy<Value = Weight> {
    prop::collection::vec((0.1f64..2.5, 1e-3f64..1e-2), 2)
        .prop_map(|a| Weight::atoms(a.into_iter().map(|(l, w)| Atom::geodesic(l, w)).collect()))
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn polynomial_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &MPoly::one(), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn even_integration_inverts_derivative(a in poly()) {
        prop_assert_eq!(a.integrate_even(1).derive_even(1), a.clone());
        prop_assert_eq!(a.integrate_even(2).derive_even(2), a);
    }
}

proptest! {
    #[test]
    fn series_reciprocal(s in series()) {
        prop_assume!(!Ring::is_zero(&s.coeff(0).unwrap()));
        let inv = s.recip().unwrap();
        let prod = s.mul_ref(&inv);
        prop_assert_eq!(prod.coeff(0).unwrap(), rat(1, 1));
        for k in 1..=s.order().unwrap() {
            prop_assert!(Ring::is_zero(&prod.coeff(k).unwrap()), "order {}", k);
        }
    }

    #[test]
    fn laplace_round_trip(a in poly()) {
        let t = VolumePoly::new(1, 2, Basis::Moments, a);
        prop_assert_eq!(t_from_omega(&omega_from_t(&t), Basis::Moments), t);
    }

    #[test]
    fn gluing_is_linear(p in slot_poly(2), q in slot_poly(2), s in -3.0f64..3.0,
                        b1 in 0.2f64..3.0, b2 in 0.2f64..3.0, r in -0.1f64..0.1) {
        let mut sum = SlotPoly::new(2);
        for (k, c) in &p.terms {
            sum.add_term(k.clone(), s * c);
        }
        for (k, c) in &q.terms {
            sum.add_term(k.clone(), *c);
        }
        let betas = [b1, b2];
        let lhs = gauss_glue(&sum, &betas, r).unwrap();
        let rhs = s * gauss_glue(&p, &betas, r).unwrap() + gauss_glue(&q, &betas, r).unwrap();
        let scale: f64 = [&p, &q].iter().map(|x| {
            let abs = SlotPoly { n: 2, terms: x.terms.iter().map(|(k, c)| (k.clone(), c.abs())).collect() };
            gauss_glue(&abs, &betas, r).unwrap()
        }).sum::<f64>() * (1.0 + s.abs());
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn gluing_factorizes_over_slots(p in slot_poly(1), q in slot_poly(1),
                                    b1 in 0.2f64..3.0, b2 in 0.2f64..3.0, r in -0.1f64..0.1) {
        let mut prod = SlotPoly::new(2);
        for (k1, c1) in &p.terms {
            for (k2, c2) in &q.terms {
                prod.add_term(vec![k1[0], k2[0]], c1 * c2);
            }
        }
        let lhs = gauss_glue(&prod, &[b1, b2], r).unwrap();
        let rhs = gauss_glue(&p, &[b1], r).unwrap() * gauss_glue(&q, &[b2], r).unwrap();
        let abs = |x: &SlotPoly, b: f64| {
            let a = SlotPoly { n: 1, terms: x.terms.iter().map(|(k, c)| (k.clone(), c.abs())).collect() };
            gauss_glue(&a, &[b], r).unwrap()
        };
        prop_assert!((lhs - rhs).abs() <= 1e-12 * abs(&p, b1) * abs(&q, b2), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn double_double_inverse(x in prop_oneof![1e-8f64..1e8, -1e8f64..-1e-8], lo in -1.0f64..1.0) {
        let v = TwoFloat::from_f64(x) + TwoFloat::from_f64(lo * x * 1e-17);
        let inv = v.try_inverse().unwrap();
        let err = v * inv - TwoFloat::from_f64(1.0);
        prop_assert!((err.hi() + err.lo()).abs() < 1e-30);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partition_function_is_symmetric(b in prop::collection::vec(0.2f64..3.0, 3), weight in subcritical_weight()) {
        let z = |betas: Vec<f64>| {
            jt_partition(&JtRequest { g: 0, betas, weight: weight.clone(), s0: 0.0 }).unwrap().value
        };
        let base = z(b.clone());
        for perm in [[1usize, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0]] {
            let v = z(perm.iter().map(|&i| b[i]).collect());
            prop_assert!(rel(v, base) < 1e-12, "{} vs {}", v, base);
        }
    }

    #[test]
    fn moment_identities_hold(weight in subcritical_weight()) {
        let (md, root) = moments_extended(&weight, 10).unwrap();
        prop_assert!(weight.z(root.r).unwrap().abs() <= 1e-12);
        for p in 0..=10 {
            let d = md.convolution_defect(p);
            prop_assert!((d.hi() + d.lo()).abs() <= 1e-10, "p={}: {:e}", p, d.hi());
        }
    }
}
