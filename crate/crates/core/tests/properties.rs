//! Property tests for the algebraic laws the library relies on.

mod common;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use common::*;
use dp4::canon::{branch_form, canonical_quadrics, euler_traces, kummer_model, DeltaPrime};
use dp4::exact::{factor_fp, factor_q, hilbert_symbol, FpPoly, local_square, sqrt_in_etale, EtaleSqrt, LocalPlace, QMatrix, RatPoly};
use dp4::galois::galois_group_quintic;
use dp4::groupmod::{DeltaPoint, WreathElement};
use dp4::localarith::{padic_soluble, real_soluble, Verdict};
use dp4::pencil::{b_delta_group, delta_invariant, Pencil};
use dp4::selmersim::{
    descent_driver, make_system, make_system_with_selmer, random_lagrangian, relaxed_selmer, selmer, twist_at,
    verify_pt_duality, DriverMode,
};

fn small_poly(max_deg: usize) -> impl Strategy<Value = RatPoly> {
    prop::collection::vec((-9i64..=9, 1i64..=4), 1..=max_deg + 1)
        .prop_map(|c| RatPoly::new(c.into_iter().map(|(n, d)| Rat::new(n.into(), d.into())).collect()))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    (1i64..=5000, 1i64..=50, any::<bool>()).prop_map(|(n, d, neg)| Rat::new(BigInt::from(if neg { -n } else { n }), d.into()))
}

fn place() -> impl Strategy<Value = LocalPlace> {
    prop_oneof![Just(LocalPlace::Real), prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 97]).prop_map(LocalPlace::Prime)]
}

fn invertible_matrix() -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(-3i64..=3, 25)
        .prop_map(|v| {
            let rows: Vec<&[i64]> = v.chunks(5).collect();
            QMatrix::from_ints(&rows)
        })
        .prop_filter("invertible", |m| !m.det().is_zero())
}

fn smooth_pencil() -> impl Strategy<Value = Pencil> {
    any::<u64>().prop_map(|s| random_smooth_pencil(&mut rng(s), -5, 5))
}

const SAMPLES: [&str; 6] =
    ["t^5 - 110*t^3 - 55*t^2 + 2310*t + 979", "t^5 - 5*t + 12", "t^5 - 2", "t^5 + 20*t + 16", "t^5 - t + 1", "t^5 - 5*t^3 + 4*t"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn divrem_reconstructs(a in small_poly(7), d in small_poly(4)) {
        prop_assume!(!d.is_zero());
        let (q, r) = a.divrem(&d);
        prop_assert_eq!(&(&q * &d) + &r, a);
        prop_assert!(r.is_zero() || r.deg() < d.deg());
    }

    #[test]
    fn factor_q_remultiplies(a in small_poly(8)) {
        prop_assume!(!a.is_zero());
        let product = factor_q(&a).unwrap().iter().fold(RatPoly::one(), |acc, (f, e)| &acc * &f.pow(*e));
        prop_assert_eq!(product.scale(&a.lc()), a);
    }

    #[test]
    fn factor_fp_remultiplies(c in prop::collection::vec(0u64..101, 2..10)) {
        let f = FpPoly::new(101, c);
        prop_assume!(!f.is_zero());
        let product = factor_fp(&f).unwrap().iter().fold(FpPoly::one(101), |acc, (g, e)| (0..*e).fold(acc, |a, _| a.mul(g)));
        prop_assert_eq!(product.scale(f.lc()), f);
    }

    #[test]
    fn hilbert_symmetric_and_bimultiplicative(a in nonzero_rat(), b in nonzero_rat(), c in nonzero_rat(), v in place()) {
        let h = |x: &Rat, y: &Rat| hilbert_symbol(x, y, v).unwrap();
        prop_assert_eq!(h(&a, &b), h(&b, &a));
        prop_assert_eq!(h(&a, &(&b * &c)), h(&a, &b) * h(&a, &c));
    }

    #[test]
    fn squares_are_local_squares(a in nonzero_rat(), v in place()) {
        prop_assert!(local_square(&(&a * &a), v).unwrap());
    }

    #[test]
    fn etale_roots_square_back(d in small_poly(3), g in small_poly(2)) {
        let m = RatPoly::parse("t^3 - t - 1").unwrap();
        let sq = g.mul_mod(&g, &m);
        for target in [d.rem(&m), sq] {
            prop_assume!(!target.is_zero());
            if let EtaleSqrt::Root(y) = sqrt_in_etale(&target, &m).unwrap() {
                prop_assert_eq!(y.mul_mod(&y, &m), target);
            }
        }
    }

    #[test]
    fn wreath_action_law(g in 0usize..3840, h in 0usize..3840) {
        let all: Vec<WreathElement> = WreathElement::all().collect();
        let (g, h) = (all[g], all[h]);
        for x in DeltaPoint::all() {
            prop_assert_eq!(g.mul(&h).act(x), g.act(h.act(x)));
        }
    }

    #[test]
    fn euler_traces_match_series(seed in any::<u64>()) {
        let p = random_separable_quintic(&mut rng(seed));
        prop_assert_eq!(euler_traces(&p, 9).unwrap(), euler_trace_oracle(&p, 9));
    }

    #[test]
    fn branch_form_scales_to_gram3(k in 0usize..6, b in -7i64..=7) {
        let p = RatPoly::parse(SAMPLES[k]).unwrap();
        let b = q(b);
        prop_assume!(!p.eval(&b).is_zero());
        let m = kummer_model(&p, &DeltaPrime::one(), &b).unwrap();
        prop_assert_eq!(m.gram3, branch_form(&p, &DeltaPrime::one(), &b).unwrap().scale(&p.eval(&b)));
    }

    #[test]
    fn selmer_structure(seed in any::<u64>(), dims in prop::collection::vec(1usize..=3, 2..=5)) {
        let sys = make_system(seed, &dims);
        prop_assert!(sys.validate().is_ok());
        let s = selmer(&sys);
        for (v, place) in sys.places.iter().enumerate() {
            let relaxed = relaxed_selmer(&sys, v);
            prop_assert!(s.is_subspace_of(&relaxed));
            prop_assert!(relaxed.dim() - s.dim() <= place.d);
            prop_assert!(verify_pt_duality(&sys, v));
        }
    }

    #[test]
    fn twists_obey_laws(seed in any::<u64>(), v in 0usize..4) {
        let dims = [2, 2, 1, 3];
        let sys = make_system(seed, &dims);
        let new = random_lagrangian(dims[v], &mut rng(seed ^ 1));
        let (next, step) = twist_at(&sys, v, &new).unwrap();
        prop_assert!(next.validate().is_ok());
        prop_assert_eq!(step.new_dim, selmer(&next).dim());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pencil_json_roundtrip(p in smooth_pencil(), m in invertible_matrix()) {
        let moved = p.congruent(&m).scaled(&Rat::new(3.into(), 7.into()));
        prop_assert_eq!(Pencil::from_json(&moved.to_json()).unwrap(), moved);
    }

    #[test]
    fn congruence_scales_determinant(p in smooth_pencil(), m in invertible_matrix()) {
        let d = m.det();
        prop_assert_eq!(p.congruent(&m).det_poly(), p.det_poly().scale(&(&d * &d)));
    }

    #[test]
    fn delta_class_is_congruence_invariant(p in smooth_pencil(), m in invertible_matrix(), c in nonzero_rat()) {
        let base = delta_invariant(&p).unwrap();
        for other in [p.congruent(&m), p.scaled(&c)] {
            let inv = delta_invariant(&other).unwrap();
            prop_assert_eq!(&inv.square_flags, &base.square_flags);
            prop_assert_eq!(b_delta_group(&inv).unwrap().dimension, b_delta_group(&base).unwrap().dimension);
        }
    }

    #[test]
    fn real_solubility_is_congruence_invariant(p in smooth_pencil(), m in invertible_matrix()) {
        prop_assert_eq!(real_soluble(&p.congruent(&m)).verdict, real_soluble(&p).verdict);
        let swapped = Pencil::new(p.phi2().clone(), p.phi1().clone()).unwrap();
        prop_assert_eq!(real_soluble(&swapped).verdict, real_soluble(&p).verdict);
    }

    #[test]
    fn padic_soluble_is_stable_under_more_effort(p in smooth_pencil(), prime in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let forms = [p.phi1().clone(), p.phi2().clone()];
        let low = padic_soluble(&forms, prime, 2_000).verdict;
        let high = padic_soluble(&forms, prime, 200_000).verdict;
        prop_assert!(low == Verdict::Unknown || low == high);
    }

    #[test]
    fn galois_label_is_shift_invariant(k in 0usize..6, c in -6i64..=6) {
        let p = RatPoly::parse(SAMPLES[k]).unwrap();
        let label = galois_group_quintic(&p).unwrap().label;
        prop_assert_eq!(galois_group_quintic(&p.shift(&q(c))).unwrap().label, label);
    }

    #[test]
    fn canonical_identity_holds(seed in any::<u64>()) {
        let p = random_separable_quintic(&mut rng(seed));
        let m = canonical_quadrics(&p, &DeltaPrime::one()).unwrap();
        prop_assert!(m.pencil_identity_holds());
        prop_assert!(m.contains_lambda0());
        prop_assert_eq!(m.pencil_determinant().lc(), Rat::one());
    }

    #[test]
    fn mode_a_descent_drops_by_two(seed in 0u64..32) {
        if let Ok(sys) = make_system_with_selmer(seed, &[2, 2, 2, 2, 2, 2], 5) {
            if let Ok(t) = descent_driver(&sys, 0, DriverMode::A, seed) {
                prop_assert!(t.dims.windows(2).all(|w| w[1] <= w[0] && (w[0] - w[1]) % 2 == 0 && w[0] - w[1] <= 2));
            }
        }
    }
}
