use std::sync::Arc;

use super::*;
use crate::coxeter::{enumerate_ideal, CoxeterSystem, RepChoice, RhoChoice};
use crate::hecke::{Hecke, LaurentPoly};
use crate::hodge::longest_word;
use crate::invpoly::{poly_reflect, Poly};
use crate::linalg::Matrix;
use crate::numeric::{Rational, Scalar};
use crate::soergel::{hom_space, multiply_out, BsBimodule, Catalogue, FreeBimodule};

fn dihedral(m: u32) -> Arc<CoxeterSystem> {
    CoxeterSystem::new(vec![vec![1, m], vec![m, 1]], RepChoice::Geometric).unwrap()
}

fn full_catalogue(sys: &Arc<CoxeterSystem>) -> Catalogue {
    let (w0, _) = longest_word(sys, 1000).unwrap();
    let ideal = Arc::new(enumerate_ideal(sys, w0.len()).unwrap());
    Catalogue::build(Arc::new(Hecke::new(ideal).unwrap()), w0.len()).unwrap()
}

fn canonical(sys: &CoxeterSystem) -> Vec<Scalar> {
    sys.choose_rho(RhoChoice::Canonical).unwrap().rho
}

fn idx(cat: &Catalogue, w: &[usize]) -> usize {
    cat.ideal().index_of_word(w).unwrap()
}

fn labels(c: &SoergelComplex) -> Vec<Vec<String>> {
    c.terms.iter().map(|t| t.iter().map(|o| o.label.to_string()).collect()).collect()
}

fn sorted_labels(c: &SoergelComplex) -> Vec<Vec<String>> {
    labels(c)
        .into_iter()
        .map(|mut t| {
            t.sort();
            t
        })
        .collect()
}

fn tensor_word(sys: &Arc<CoxeterSystem>, word: &[usize]) -> SoergelComplex {
    word.iter().fold(SoergelComplex::unit(sys), |acc, &s| complex_tensor(&acc, &f_s(sys, s)).unwrap())
}

#[test]
fn f_s_is_multiplication() {
    let sys = dihedral(3);
    let (f, nv) = (sys.field(), sys.rep_dim());
    let c = f_s(&sys, 0);
    assert_eq!(labels(&c), vec![vec!["B_s0".to_string()], vec!["R(1)".to_string()]]);
    assert_eq!(c.term_degrees(0), vec![-1, 1]);
    assert_eq!(c.term_degrees(1), vec![-1]);
    let d = &c.diffs[0];
    assert_eq!(*d.get(0, 0), Poly::one(f, nv));
    let alpha = d.get(0, 1).clone();
    assert_eq!(poly_reflect(&sys, 0, &alpha), alpha.neg());
    assert_eq!(alpha.degree(), Some(1));
    assert!(c.d_squared_zero() && c.degree_zero() && c.bimodule_maps());
}

#[test]
fn tensor_of_two_f_s() {
    let sys = dihedral(3);
    let c = complex_tensor(&f_s(&sys, 0), &f_s(&sys, 1)).unwrap();
    assert_eq!(
        sorted_labels(&c),
        vec![vec!["B_s0 B_s1".to_string()], vec!["B_s0(1)".to_string(), "B_s1(1)".to_string()], vec!["R(2)".to_string()]]
    );
    assert!(c.d_squared_zero() && c.degree_zero() && c.bimodule_maps());
}

#[test]
fn tensor_with_unit() {
    let sys = dihedral(3);
    let fs = f_s(&sys, 0);
    for c in [complex_tensor(&fs, &SoergelComplex::unit(&sys)).unwrap(), complex_tensor(&SoergelComplex::unit(&sys), &fs).unwrap()] {
        assert_eq!(labels(&c), labels(&fs));
        assert_eq!(c.diffs, fs.diffs);
        assert_eq!(c.start, 0);
    }
}

#[test]
fn d_squared_for_sts() {
    let sys = dihedral(3);
    let c = tensor_word(&sys, &[0, 1, 0]);
    assert_eq!(c.terms.iter().map(|t| t.len()).collect::<Vec<_>>(), vec![1, 3, 3, 1]);
    assert!(c.d_squared_zero() && c.degree_zero() && c.bimodule_maps());
}

#[test]
fn first_differential_is_sum_of_multiplications() {
    // d⁰ of F_{s₁}⋯F_{s_m} lists BS(x̲ without slot m−1), …, BS(x̲ without slot 0)
    let sys = dihedral(4);
    for word in [vec![0, 1], vec![0, 1, 0], vec![1, 0, 1, 0]] {
        let c = tensor_word(&sys, &word);
        let bs = BsBimodule::build(&sys, &word);
        let f = sys.field();
        let mut stacked: Option<Matrix> = None;
        for i in (0..word.len()).rev() {
            let cols: Vec<Vec<Scalar>> =
                (0..bs.rank()).map(|e| multiply_out(&bs, e, i).iter().map(|p| p.constant_term()).collect()).collect();
            let m = Matrix::from_columns(f, bs.rank() / 2, &cols);
            stacked = Some(match stacked {
                None => m,
                Some(a) => a.vstack(&m),
            });
        }
        assert_eq!(c.diffs[0].constant_part(), stacked.unwrap(), "{word:?}");
    }
}

#[test]
fn minimalize_ss() {
    let sys = dihedral(3);
    let cat = full_catalogue(&sys);
    let c = decompose_terms(&cat, &complex_tensor(&f_s(&sys, 0), &f_s(&sys, 0)).unwrap()).unwrap();
    assert_eq!(
        sorted_labels(&c),
        vec![
            vec!["B_s0(-1)".to_string(), "B_s0(1)".to_string()],
            vec!["B_s0(1)".to_string(), "B_s0(1)".to_string()],
            vec!["R(2)".to_string()]
        ]
    );
    let m = minimalize(&c).unwrap();
    assert_eq!(labels(&m), vec![vec!["B_s0(-1)".to_string()], vec!["B_s0(1)".to_string()], vec!["R(2)".to_string()]]);
    assert!(m.d_squared_zero() && m.degree_zero());
    assert!(find_isomorphism(&m).is_none());
}

#[test]
fn minimalize_is_idempotent() {
    let sys = dihedral(3);
    let cat = full_catalogue(&sys);
    let fs = decompose_terms(&cat, &f_s(&sys, 0)).unwrap();
    let m = minimalize(&fs).unwrap();
    assert_eq!(labels(&m), labels(&fs));
    assert_eq!(m.diffs, fs.diffs);
    let twice = minimalize(&m).unwrap();
    assert_eq!(twice.diffs, m.diffs);
}

#[test]
fn cone_of_identity_is_contractible() {
    let sys = dihedral(3);
    let r = FreeBimodule::regular(&sys);
    let obj = Object { label: Label::new(vec![vec![0]], 0), module: r.induce(0) };
    let m = minimalize(&cone_of_identity(&sys, obj)).unwrap();
    assert!(m.is_empty());
}

#[test]
fn rouquier_f_s() {
    let sys = dihedral(3);
    let cat = full_catalogue(&sys);
    let rc = rouquier_complex(&cat, idx(&cat, &[0])).unwrap();
    assert_eq!(labels(&rc.complex), vec![vec!["B_s0".to_string()], vec!["R(1)".to_string()]]);
    let lin = verify_linearity(&cat, idx(&cat, &[0]), &rc.complex).unwrap();
    assert!(lin.pass);
    let coh = cohomology_check(&rc.complex, 1);
    assert_eq!(coh.groups, vec![(0, 1, 1)]);
    assert!(coh.pass);
}

#[test]
fn trivial_complex_cohomology() {
    let sys = dihedral(3);
    let c = SoergelComplex::unit(&sys);
    assert!(cohomology_check(&c, 0).pass);
}

#[test]
fn rouquier_st_in_a2() {
    let sys = dihedral(3);
    let cat = full_catalogue(&sys);
    let x = idx(&cat, &[0, 1]);
    let rc = rouquier_complex(&cat, x).unwrap();
    assert_eq!(
        sorted_labels(&rc.complex),
        vec![vec!["B_s0 s1".to_string()], vec!["B_s0(1)".to_string(), "B_s1(1)".to_string()], vec!["R(2)".to_string()]]
    );
    assert!(verify_linearity(&cat, x, &rc.complex).unwrap().pass);
    let table = MultiplicityTable::of(&cat, &rc.complex).unwrap();
    assert!(inverse_kl_check(&cat, x, &table).pass);
}

#[test]
fn rouquier_sts_in_a2() {
    let sys = dihedral(3);
    let cat = full_catalogue(&sys);
    let x = idx(&cat, &[0, 1, 0]);
    let rc = rouquier_complex(&cat, x).unwrap();
    assert!(rc.complex.d_squared_zero() && rc.complex.degree_zero());
    let table = MultiplicityTable::of(&cat, &rc.complex).unwrap();
    let g = table.euler_characteristic();
    // H_sts = H̄_sts − v(H̄_st + H̄_ts) + v²(H̄_s + H̄_t) − v³
    let expected = [
        (vec![0, 1, 0], LaurentPoly::one()),
        (vec![0, 1], LaurentPoly::monomial(-1, 1)),
        (vec![1, 0], LaurentPoly::monomial(-1, 1)),
        (vec![0], LaurentPoly::monomial(1, 2)),
        (vec![1], LaurentPoly::monomial(1, 2)),
        (vec![], LaurentPoly::monomial(-1, 3)),
    ];
    assert_eq!(g.len(), expected.len());
    for (w, p) in expected {
        assert_eq!(g[&idx(&cat, &w)], p, "{w:?}");
    }
    let rep = inverse_kl_check(&cat, x, &table);
    assert!(rep.agree && rep.sign_positive && rep.parity);
    assert!(verify_linearity(&cat, x, &rc.complex).unwrap().pass);
    assert!(cohomology_check(&rc.complex, 3).pass);
}

#[test]
fn word_independence_in_a2() {
    let sys = dihedral(3);
    let cat = full_catalogue(&sys);
    let a = rouquier_complex_for_word(&cat, &[0, 1, 0]).unwrap();
    let b = rouquier_complex_for_word(&cat, &[1, 0, 1]).unwrap();
    assert_eq!(MultiplicityTable::of(&cat, &a.complex).unwrap(), MultiplicityTable::of(&cat, &b.complex).unwrap());
}

#[test]
fn b2_linearity_parity_and_cohomology() {
    let sys = dihedral(4);
    let cat = full_catalogue(&sys);
    for x in 0..cat.len() {
        let rc = rouquier_complex(&cat, x).unwrap();
        let table = MultiplicityTable::of(&cat, &rc.complex).unwrap();
        let lin = verify_linearity(&cat, x, &rc.complex).unwrap();
        assert!(lin.pass, "{x}: {:?}", lin.offending);
        let inv = inverse_kl_check(&cat, x, &table);
        assert!(inv.pass, "{x}: {inv:?}");
        assert!(cohomology_check(&rc.complex, cat.ideal().length(x)).pass, "{x}");
        assert!(find_isomorphism(&rc.complex).is_none());
    }
}

#[test]
fn rejects_non_reduced_words() {
    let sys = dihedral(3);
    let cat = full_catalogue(&sys);
    assert!(matches!(rouquier_complex_for_word(&cat, &[0, 0]), Err(RouquierError::NotReduced)));
}

#[test]
fn perverse_hom_vanishing() {
    let sys = dihedral(4);
    let cat = full_catalogue(&sys);
    for y in 0..cat.len() {
        for z in 0..cat.len() {
            let b1 = &cat.entry(y).unwrap().module;
            let b2 = &cat.entry(z).unwrap().module;
            for i in 1..=2 {
                assert!(hom_space(b1, &b2.shifted(-i), 0).is_empty(), "({y}, {z}, {i})");
            }
        }
    }
}

#[test]
fn factored_single_reflection() {
    let sys = dihedral(3);
    let rho = canonical(&sys);
    let rep = factored_lefschetz_check(&sys, &[0], &rho).unwrap();
    assert_eq!(rep.gammas, vec![sys.eval_coroot(0, &rho)]);
    assert!(rep.identity && rep.pass);
}

#[test]
fn factored_st_and_longer_words() {
    let sys = dihedral(3);
    let rho = canonical(&sys);
    let rep = factored_lefschetz_check(&sys, &[0, 1], &rho).unwrap();
    assert!(rep.identity && rep.gammas_positive && rep.pass);
    assert!(rep.weak_lefschetz.injective_below && rep.weak_lefschetz.conclusion && rep.weak_lefschetz.w_hodge_riemann);
    let sys5 = dihedral(5);
    let rho5 = canonical(&sys5);
    for w in [vec![0, 1, 0], vec![1, 0, 1, 0]] {
        let rep = factored_lefschetz_check(&sys5, &w, &rho5).unwrap();
        assert!(rep.pass && rep.weak_lefschetz.conclusion, "{w:?}");
    }
}

#[test]
fn factored_zeta_variant() {
    let sys = dihedral(3);
    let rho = canonical(&sys);
    let f = sys.field();
    for zeta in [f.zero(), f.one(), f.from_rational(Rational::new(5, 2))] {
        // ascent: st·s, descent: s·s
        for (w, s) in [(vec![0, 1], 0), (vec![0], 0), (vec![0, 1], 1)] {
            let rep = factored_lefschetz_check_zeta(&sys, &w, s, &rho, &zeta).unwrap();
            assert!(rep.identity, "{w:?} {s} {zeta:?}");
        }
    }
    // a non-reduced x̲s with ζ = 0 has γ_{m+1} < 0
    let rep = factored_lefschetz_check_zeta(&sys, &[0], 0, &rho, &f.zero()).unwrap();
    assert!(!rep.gammas_positive);
}

#[test]
fn factored_rejects_non_reduced() {
    let sys = dihedral(3);
    let rho = canonical(&sys);
    assert!(matches!(factored_lefschetz_check(&sys, &[0, 0], &rho), Err(RouquierError::NotReduced)));
}

#[test]
fn reduced_terms_satisfy_hodge_riemann() {
    let sys = dihedral(4);
    let cat = full_catalogue(&sys);
    let rho = canonical(&sys);
    let f = sys.field();
    for x in 0..cat.len() {
        let rc = rouquier_complex(&cat, x).unwrap();
        for j in 0..rc.complex.len() {
            let n = rc.bs_words[j].len();
            for lambda in [vec![f.one(); n], (0..n).map(|k| f.from_rational(Rational::new(2 * k as i64 + 1, 3))).collect()] {
                let rep = reduced_term_hodge(&rc, j, &rho, &lambda).unwrap();
                assert!(rep.nondegenerate, "x={x} j={j}");
                assert!(rep.congruence.pass, "x={x} j={j}: {:?}", rep.congruence);
                assert!(rep.conventions_agree);
            }
        }
    }
}

#[test]
fn embedding_is_a_graded_split_injection() {
    let sys = dihedral(3);
    let cat = full_catalogue(&sys);
    let rc = rouquier_complex(&cat, idx(&cat, &[0, 1, 0])).unwrap();
    for j in 0..rc.complex.len() {
        let e = &rc.embedding[j];
        let bs_degs: Vec<i32> = rc.bs_words[j]
            .iter()
            .flat_map(|w| BsBimodule::build(&sys, w).module().degrees().to_vec())
            .map(|d| d - j as i32)
            .collect();
        assert!(e.is_graded(&bs_degs, &rc.complex.term_degrees(j), 0));
        assert_eq!(e.constant_part().rank(), rc.complex.term_rank(j));
    }
}
