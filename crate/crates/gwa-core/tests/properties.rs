//! Property-based invariants over randomized inputs.

mod support;

use proptest::prelude::*;

use gwa_core::factored::{from_profile, omega_pairs, omega_size, profile_of, FactoredElement};
use gwa_core::gwa::{FactorSpec, GwaSpec};
use gwa_core::oracle::nf_mul;
use gwa_core::polyring::{FieldTag, Poly, Scalar, Sigma};
use gwa_core::rankn::{snf, PolyMatrix};

fn small_rational() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=6).prop_map(|(num, den)| Scalar::from_ratio(num, den))
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(small_rational(), 0..=max_deg + 1)
        .prop_map(|coeffs| Poly::new(FieldTag::Q, coeffs))
}

fn shift_spec(shift: i64) -> GwaSpec {
    GwaSpec::new(
        FieldTag::Q,
        Sigma::Classical {
            shift: Scalar::from_i64(FieldTag::Q, shift),
        },
        Scalar::one(FieldTag::Q),
        vec![FactorSpec::checked(
            Poly::from_int_coeffs(FieldTag::Q, &[0, 1]),
            1,
        )],
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in small_poly(5), b in small_poly(5), c in small_poly(5)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    }

    #[test]
    fn divmod_reconstructs(a in small_poly(7), b in small_poly(4)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.divmod(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        if !r.is_zero() {
            prop_assert!(r.degree().unwrap() < b.degree().unwrap());
        }
    }

    #[test]
    fn monic_normalization_idempotent(a in small_poly(6)) {
        prop_assume!(!a.is_zero());
        let (unit, monic) = a.normalize_monic().unwrap();
        prop_assert_eq!(&monic.scale(&unit), &a);
        let (unit2, monic2) = monic.normalize_monic().unwrap();
        prop_assert!(unit2.is_one());
        prop_assert_eq!(monic2, monic);
    }

    #[test]
    fn sigma_power_additivity(a in small_poly(5), j in -10i64..=10, k in -10i64..=10, c in 1i64..=3) {
        let sigma = Sigma::Classical { shift: Scalar::from_i64(FieldTag::Q, c) };
        prop_assert_eq!(sigma.apply(&sigma.apply(&a, j), k), sigma.apply(&a, j + k));
        let quantum = Sigma::Quantum { gamma: Scalar::from_ratio(2, 3) };
        prop_assert_eq!(quantum.apply(&quantum.apply(&a, j), k), quantum.apply(&a, j + k));
    }

    #[test]
    fn gcd_divides_both(a in small_poly(6), b in small_poly(6)) {
        let g = a.gcd(&b).unwrap();
        if g.is_zero() {
            prop_assert!(a.is_zero() && b.is_zero());
        } else {
            prop_assert!(g.divides(&a));
            prop_assert!(g.divides(&b));
            prop_assert!(g.is_monic());
        }
    }

    #[test]
    fn profile_round_trip(positions in prop::collection::btree_map(-8i64..=8, 1u32..=3, 1..5), c in 1i64..=2) {
        // build g as a product of shifted copies of h with the given profile
        let spec = shift_spec(c);
        let h = Poly::var(FieldTag::Q);
        let mut g = FactoredElement::one(FieldTag::Q);
        for (&k, &mult) in &positions {
            let factor = spec.sigma_pow(&h, k);
            g = g.mul(&FactoredElement::new(Scalar::one(FieldTag::Q), vec![(factor, mult)]).unwrap());
        }
        let profile = profile_of(&g, &h, &spec).unwrap();
        for (&k, &mult) in &positions {
            prop_assert_eq!(profile.value(k), mult);
        }
        let back = from_profile(&profile, &spec);
        prop_assert!(back.associate_eq(&g));
        // sigma shifts translate the profile one step right
        let shifted = profile_of(&g.apply_sigma(spec.sigma(), 1), &h, &spec).unwrap();
        for k in -10..=10 {
            prop_assert_eq!(shifted.value(k), profile.value(k - 1));
        }
        // forward differences telescope to zero on finite support
        let total: i64 = profile.delta().values.values().sum();
        prop_assert_eq!(total, 0);
    }

    #[test]
    fn omega_bounded_by_degrees(sel in prop::collection::vec(-4i64..=4, 1..4), c in 1i64..=2) {
        let spec = shift_spec(c);
        let h = Poly::var(FieldTag::Q);
        let mut p = FactoredElement::one(FieldTag::Q);
        let mut q = FactoredElement::one(FieldTag::Q);
        for (i, &k) in sel.iter().enumerate() {
            let factor = spec.sigma_pow(&h, k);
            let elem = FactoredElement::new(Scalar::one(FieldTag::Q), vec![(factor, 1)]).unwrap();
            if i % 2 == 0 {
                p = p.mul(&elem);
            } else {
                q = q.mul(&elem);
            }
        }
        let pairs = omega_pairs(&p, &q, &spec).unwrap();
        prop_assert!(omega_size(&pairs) <= p.irreducible_count() * q.irreducible_count());
        // every returned shift actually maps z onto w
        for pair in &pairs {
            let image = spec.sigma_pow(&pair.z, pair.shift).normalize_monic().unwrap().1;
            prop_assert_eq!(&image, &pair.w);
        }
    }

    #[test]
    fn snf_reconstruction(entries in prop::collection::vec(prop::collection::vec(-4i64..=4, 0..3), 9)) {
        let polys: Vec<Poly> = entries
            .iter()
            .map(|c| Poly::from_int_coeffs(FieldTag::Q, c))
            .collect();
        let m = PolyMatrix::new(3, polys).unwrap();
        let smith = snf(&m);
        prop_assert!(smith.verify(&m));
        // cross-check the invariant factors against the minor-gcd oracle
        let by_minors = support::minor_gcd_invariant_factors(&m);
        prop_assert_eq!(smith.invariant_factors(), by_minors);
    }

    #[test]
    fn normal_form_associativity(seed in 0u64..1000) {
        let spec = GwaSpec::new(
            FieldTag::Q,
            Sigma::Classical { shift: Scalar::from_i64(FieldTag::Q, 1) },
            Scalar::one(FieldTag::Q),
            vec![FactorSpec::checked(Poly::from_int_coeffs(FieldTag::Q, &[0, 1]), 1)],
        )
        .unwrap();
        let mut rng = gwa_core::sampling::Rng::new(seed);
        let u = gwa_core::oracle::random_element(&mut rng, FieldTag::Q, 3, 6);
        let v = gwa_core::oracle::random_element(&mut rng, FieldTag::Q, 3, 6);
        let w = gwa_core::oracle::random_element(&mut rng, FieldTag::Q, 3, 6);
        let left = nf_mul(&nf_mul(&u, &v, &spec).unwrap(), &w, &spec).unwrap();
        let right = nf_mul(&u, &nf_mul(&v, &w, &spec).unwrap(), &spec).unwrap();
        prop_assert_eq!(left, right);
    }
}
