//! Property tests for the arithmetic, Coxeter, Hecke and polynomial layers.

use std::sync::Arc;

use proptest::prelude::*;

use shl_core::coxeter::{enumerate_ideal, CoxeterSystem, Ideal, RepChoice};
use shl_core::hecke::{Hecke, HeckeElement, LaurentPoly};
use shl_core::invpoly::{demazure, poly_reflect, Mono, Poly};
use shl_core::numeric::{field_create, Rational};

fn system(m: &[Vec<u32>], rep: RepChoice) -> Arc<CoxeterSystem> {
    CoxeterSystem::new(m.to_vec(), rep).unwrap()
}

fn dihedral(m: u32) -> Arc<CoxeterSystem> {
    let rep = if m == 0 { RepChoice::Doubled } else { RepChoice::Geometric };
    system(&[vec![1, m], vec![m, 1]], rep)
}

fn a3() -> Arc<CoxeterSystem> {
    system(&[vec![1, 3, 2], vec![3, 1, 3], vec![2, 3, 1]], RepChoice::Geometric)
}

fn b3() -> Arc<CoxeterSystem> {
    system(&[vec![1, 4, 2], vec![4, 1, 3], vec![2, 3, 1]], RepChoice::Geometric)
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=9).prop_map(|(p, q)| Rational::new(p, q))
}

// numeric

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sign_agrees_with_floats(n in prop::sample::select(vec![4u32, 5, 6, 8, 10, 12]), p in small_rational(), q in small_rational()) {
        let f = field_create(n);
        let x = &f.from_rational(p.clone()) + &f.theta().scale(&q);
        let approx = p.to_f64() + q.to_f64() * f.theta().to_f64();
        if approx.abs() > 1e-6 {
            prop_assert_eq!(x.sign(), approx.signum() as i32);
        }
    }

    #[test]
    fn normalization_is_idempotent(n in prop::sample::select(vec![5u32, 7, 8, 12]), cs in prop::collection::vec(small_rational(), 1..8)) {
        let f = field_create(n);
        let x = f.from_power_coeffs(&cs);
        let again = f.from_power_coeffs(x.coeffs());
        prop_assert_eq!(&again, &x);
        prop_assert!(x.coeffs().len() <= f.degree());
    }

    #[test]
    fn field_operations_are_consistent(p in prop::collection::vec(small_rational(), 2), q in prop::collection::vec(small_rational(), 2)) {
        let f = field_create(5);
        let a = f.from_power_coeffs(&p);
        let b = f.from_power_coeffs(&q);
        prop_assert_eq!(&(&a * &b), &(&b * &a));
        if !b.is_zero() {
            let back = &(&a * &b) * &b.inverse().unwrap();
            prop_assert_eq!(back, a.clone());
        }
        prop_assert_eq!((&a - &a).sign(), 0);
    }
}

#[test]
fn embedded_cosines_square_correctly() {
    // (2cos(π/m))² = 2 + 2cos(2π/m), the right side read off the power basis independently
    let f = field_create(12);
    for m in [1u32, 2, 3, 4, 6, 12] {
        let c = f.embed(m).unwrap();
        let sq = &c * &c;
        let rhs = &f.from_int(2) + &f.two_cos_multiple(2 * 12 / m);
        assert_eq!(sq, rhs, "m = {m}");
        let exact = (std::f64::consts::PI / m as f64).cos() * 2.0;
        assert!((c.to_f64() - exact).abs() < 1e-9, "m = {m}");
    }
}

// coxeter

fn ideals() -> Vec<Ideal> {
    vec![
        enumerate_ideal(&a3(), 6).unwrap(),
        enumerate_ideal(&b3(), 5).unwrap(),
        enumerate_ideal(&dihedral(7), 7).unwrap(),
        enumerate_ideal(&dihedral(0), 6).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lengths_change_by_one(which in 0usize..4, seed in any::<u64>()) {
        let ideal = &ideals()[which];
        let w = (seed as usize) % ideal.len();
        for s in 0..ideal.system().rank() {
            if let Some(ws) = ideal.right_mul(w, s) {
                let (lw, lws) = (ideal.length(w) as i64, ideal.length(ws) as i64);
                prop_assert_eq!((lws - lw).abs(), 1);
                prop_assert_eq!(ideal.element(w).is_right_descent(s), lws < lw);
            }
            if let Some(sw) = ideal.left_mul(s, w) {
                prop_assert_eq!(ideal.element(w).is_left_descent(s), ideal.length(sw) < ideal.length(w));
            }
        }
    }
}

#[test]
fn bruhat_order_is_graded_with_minimum() {
    for ideal in ideals() {
        let e = ideal.index_of_word(&[]).unwrap();
        for x in 0..ideal.len() {
            assert!(ideal.bruhat_leq(e, x));
            for y in ideal.lower_set(x) {
                assert!(ideal.bruhat_leq(y, x));
                let gap = ideal.length(x) - ideal.length(y);
                if gap >= 2 {
                    // every interval of length ≥ 2 has an element one step below the top
                    let found = ideal
                        .of_length(ideal.length(x) - 1)
                        .any(|z| ideal.bruhat_leq(y, z) && ideal.bruhat_leq(z, x));
                    assert!(found);
                } else if gap == 0 {
                    assert_eq!(y, x);
                }
            }
        }
    }
}

#[test]
fn representation_is_faithful_on_ideals() {
    for ideal in ideals() {
        for a in 0..ideal.len() {
            for b in 0..a {
                assert_ne!(ideal.element(a).matrix, ideal.element(b).matrix);
            }
        }
    }
}

// hecke

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-2i32..=2, -3i64..=3), 0..3).prop_map(|t| {
        let mut p = LaurentPoly::zero();
        for (e, c) in t {
            p = &p + &LaurentPoly::monomial(c, e);
        }
        p
    })
}

fn hecke_element(n: usize) -> impl Strategy<Value = HeckeElement> {
    prop::collection::vec((0..n, laurent()), 1..4).prop_map(|terms| {
        let mut h = HeckeElement::zero();
        for (x, p) in terms {
            h.add(x, &p);
        }
        h
    })
}

fn a3_hecke() -> Hecke {
    Hecke::new(Arc::new(enumerate_ideal(&a3(), 6).unwrap())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pairing_is_adjoint_to_kl_generators(h in hecke_element(24), g in hecke_element(24), s in 0usize..3) {
        let hk = a3_hecke();
        let left = hk.pairing(&hk.mul_kl_s(&h, s).unwrap(), &g).unwrap();
        let right = hk.pairing(&h, &hk.mul_kl_s(&g, s).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiplication_is_associative(a in hecke_element(24), b in hecke_element(24), c in hecke_element(24)) {
        let hk = a3_hecke();
        let ab_c = hk.mul(&hk.mul(&a, &b).unwrap(), &c).unwrap();
        let a_bc = hk.mul(&a, &hk.mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
    }
}

#[test]
fn kl_basis_conditions_and_positivity_on_several_ideals() {
    for ideal in ideals() {
        let hk = Hecke::new(Arc::new(ideal)).unwrap();
        let ideal = hk.ideal().clone();
        for x in 0..ideal.len() {
            let b = hk.kl_basis(x);
            assert_eq!(hk.bar(b), *b);
            assert_eq!(b.coeff(x), LaurentPoly::one());
            for y in ideal.lower_set(x) {
                let h = hk.kl_poly(y, x);
                assert!(h.has_nonnegative_coeffs());
                if y != x {
                    assert!(h.in_v_z_v());
                }
            }
        }
    }
}

// invpoly

fn poly(nvars: usize, max_deg: u8) -> impl Strategy<Value = Vec<(Vec<u8>, i64, i64)>> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), -5i64..=5, 1i64..=4), 1..5)
}

fn build(sys: &CoxeterSystem, terms: &[(Vec<u8>, i64, i64)], max_total: u32) -> Poly {
    let f = sys.field();
    let n = sys.rep_dim();
    let mut p = Poly::zero(f, n);
    for (e, a, b) in terms {
        let mut m: Mono = [0; 8];
        let mut total = 0u32;
        for (i, &k) in e.iter().enumerate().take(n) {
            let k = k.min((max_total - total.min(max_total)) as u8);
            m[i] = k;
            total += k as u32;
        }
        p = p.add(&Poly::monomial(f, n, m, f.from_rational(Rational::new(*a, *b))));
    }
    p
}

fn systems() -> Vec<Arc<CoxeterSystem>> {
    vec![dihedral(3), dihedral(5), a3(), dihedral(0)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn demazure_squares_to_zero(which in 0usize..4, t in poly(4, 10)) {
        let sys = &systems()[which];
        let f = build(sys, &t, 10);
        for s in 0..sys.rank() {
            let d = demazure(sys, s, &f).unwrap();
            prop_assert!(demazure(sys, s, &d).unwrap().is_zero());
            prop_assert_eq!(poly_reflect(sys, s, &d), d);
        }
    }

    #[test]
    fn twisted_leibniz(which in 0usize..4, t in poly(4, 4), u in poly(4, 4)) {
        let sys = &systems()[which];
        let (f, g) = (build(sys, &t, 4), build(sys, &u, 4));
        for s in 0..sys.rank() {
            let lhs = demazure(sys, s, &f.mul(&g)).unwrap();
            let rhs = demazure(sys, s, &f).unwrap().mul(&g).add(&poly_reflect(sys, s, &f).mul(&demazure(sys, s, &g).unwrap()));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn braid_relation_on_cubics(t in poly(3, 3)) {
        let sys = a3();
        let f = build(&sys, &t, 3);
        let d = |s: usize, p: &Poly| demazure(&sys, s, p).unwrap();
        prop_assert_eq!(d(0, &d(1, &d(0, &f))), d(1, &d(0, &d(1, &f))));
        prop_assert_eq!(d(1, &d(2, &d(1, &f))), d(2, &d(1, &d(2, &f))));
        prop_assert_eq!(d(0, &d(2, &f)), d(2, &d(0, &f)));
    }
}
