//! Property tests for Bott–Samelson bimodules, Lefschetz data and Rouquier complexes.

use std::sync::Arc;

use proptest::prelude::*;

use shl_core::coxeter::{enumerate_ideal, CoxeterSystem, RepChoice, RhoChoice};
use shl_core::hecke::{Hecke, LaurentPoly};
use shl_core::hodge::{hodge_riemann_check, reduce, LefschetzDatum, SignConvention};
use shl_core::invpoly::monomial_count;
use shl_core::numeric::Scalar;
use shl_core::rouquier::{factored_lefschetz_check, find_isomorphism, inverse_kl_check, rouquier_complex, rouquier_complex_for_word, MultiplicityTable};
use shl_core::soergel::{
    breaking_lefschetz_check, bs_expected_dims, decompose_bs, hom_space, induced_form_check, BsBimodule, Catalogue,
};

fn dihedral(m: u32) -> Arc<CoxeterSystem> {
    CoxeterSystem::new(vec![vec![1, m], vec![m, 1]], RepChoice::Geometric).unwrap()
}

fn canonical(sys: &CoxeterSystem) -> Vec<Scalar> {
    sys.choose_rho(RhoChoice::Canonical).unwrap().rho
}

fn catalogue(sys: &Arc<CoxeterSystem>, len: usize) -> Catalogue {
    let ideal = Arc::new(enumerate_ideal(sys, len).unwrap());
    Catalogue::build(Arc::new(Hecke::new(ideal).unwrap()), len).unwrap()
}

fn word(rank: usize, max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..rank, 0..=max)
}

/// Independent count: dim Hom^d = Σ_j c_j · #monomials of degree (d − j)/2, from the graded rank Σ c_j v^{−j}.
fn predicted_dim(grk: &LaurentPoly, nvars: usize, d: i32) -> usize {
    grk.terms()
        .map(|(e, c)| {
            let j = -e;
            if (d - j) % 2 != 0 {
                return 0;
            }
            let n: i64 = c.try_into().unwrap();
            n as usize * monomial_count(nvars, ((d - j) / 2) as i64)
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bs_graded_dims_are_binomial(m in prop::sample::select(vec![3u32, 4, 5]), w in word(2, 5)) {
        let sys = dihedral(m);
        let bs = BsBimodule::build(&sys, &w);
        prop_assert_eq!(bs.module().graded_dims(), bs_expected_dims(w.len()));
    }

    #[test]
    fn breaking_lefschetz_identity(m in prop::sample::select(vec![3u32, 4]), w in word(2, 4)) {
        let sys = dihedral(m);
        let bs = BsBimodule::build(&sys, &w);
        prop_assert_eq!(breaking_lefschetz_check(&bs, &canonical(&sys)), Ok(()));
    }

    #[test]
    fn restricted_form_is_induced(m in prop::sample::select(vec![3u32, 4, 5]), w in word(2, 3), s in 0usize..2) {
        let sys = dihedral(m);
        let mut ws = w.clone();
        ws.push(s);
        let (b, bb) = (BsBimodule::build(&sys, &w), BsBimodule::build(&sys, &ws));
        prop_assert_eq!(induced_form_check(b.module(), bb.module(), s), Ok(()));
    }

    #[test]
    fn hom_ranks_match_the_hecke_pairing(m in prop::sample::select(vec![3u32, 4]), a in word(2, 2), b in word(2, 2), d in -2i32..=2) {
        let sys = dihedral(m);
        let hk = Hecke::new(Arc::new(enumerate_ideal(&sys, 4).unwrap())).unwrap();
        let (ma, mb) = (BsBimodule::build(&sys, &a), BsBimodule::build(&sys, &b));
        let grk = Hecke::hom_graded_rank(&hk.bs_character(&a).unwrap(), &hk.bs_character(&b).unwrap());
        prop_assert_eq!(hom_space(ma.module(), mb.module(), d).len(), predicted_dim(&grk, sys.rep_dim(), d));
    }

    #[test]
    fn lefschetz_operators_are_self_adjoint(m in prop::sample::select(vec![3u32, 5, 6]), w in word(2, 4)) {
        let sys = dihedral(m);
        let d = reduce(BsBimodule::build(&sys, &w).module(), &canonical(&sys)).unwrap();
        prop_assert!(d.is_lefschetz_operator());
        let (g, l) = (d.gram(), d.operator());
        prop_assert_eq!(g.mul(l), l.transpose().mul(g));
    }

    #[test]
    fn factored_identity_and_weak_lefschetz(m in prop::sample::select(vec![3u32, 4, 5]), w in word(2, 3)) {
        let sys = dihedral(m);
        prop_assume!(!w.is_empty() && sys.is_reduced(&w).unwrap());
        let r = factored_lefschetz_check(&sys, &w, &canonical(&sys)).unwrap();
        prop_assert!(r.identity && r.gammas_positive && r.pass);
        let wl = &r.weak_lefschetz;
        prop_assert!(wl.graded && wl.isometry && wl.conclusion);
    }
}

#[test]
fn bottom_degree_of_b_x_embeds_in_bs() {
    for m in [3u32, 4, 5] {
        let sys = dihedral(m);
        let cat = catalogue(&sys, m as usize);
        for e in cat.entries() {
            let bs = BsBimodule::build(&sys, &e.word);
            let low = -(e.word.len() as i32);
            let rows: Vec<usize> = (0..bs.rank()).filter(|&r| bs.module().degrees()[r] == low).collect();
            assert_eq!(rows.len(), 1);
            assert!(!e.incl.get(rows[0], e.bottom()).is_zero(), "{:?}", e.word);
        }
    }
}

/// Checks dim H^{−i} = Σ dim P^{−j} and that distinct primitive pieces are orthogonal.
fn check_primitive_decomposition(d: &LefschetzDatum) {
    let hr = hodge_riemann_check(d, SignConvention::Standard);
    for r in &hr.degrees {
        let sum: usize = hr.degrees.iter().filter(|q| q.i >= r.i && (q.i - r.i) % 2 == 0).map(|q| q.prim_dim).sum();
        assert_eq!(sum, r.dim);
    }
    let prim = |i: usize| d.power_block(i + 1, -(i as i32)).nullspace();
    let top = d.highest_degree().unwrap_or(0).max(0) as usize;
    for i in 0..=top {
        for j in (i + 2..=top).step_by(2) {
            let (p, q) = (prim(i), prim(j));
            if p.cols() == 0 || q.cols() == 0 {
                continue;
            }
            let k = (i + j) / 2;
            let pairing = p.transpose().mul(&d.gram_block(-(i as i32))).mul(&d.power_block(k, -(j as i32))).mul(&q);
            assert!(pairing.is_zero(), "P^-{i} and P^-{j} pair nontrivially");
        }
    }
}

#[test]
fn primitive_decompositions_are_orthogonal() {
    for m in [3u32, 4, 6] {
        let sys = dihedral(m);
        let rho = canonical(&sys);
        let cat = catalogue(&sys, m as usize);
        for e in cat.entries() {
            check_primitive_decomposition(&reduce(&e.module, &rho).unwrap());
        }
        for w in [vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 1, 0]] {
            check_primitive_decomposition(&reduce(BsBimodule::build(&sys, &w).module(), &rho).unwrap());
        }
    }
}

#[test]
fn hodge_riemann_survives_restriction_to_summands() {
    for m in [3u32, 4, 5] {
        let sys = dihedral(m);
        let rho = canonical(&sys);
        let cat = catalogue(&sys, m as usize);
        for w in [vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0, 1]] {
            if w.len() > m as usize {
                continue;
            }
            let bs = BsBimodule::build(&sys, &w);
            let full = reduce(bs.module(), &rho).unwrap();
            assert!(hodge_riemann_check(&full, SignConvention::Standard).pass);
            let (dec, top, _) = decompose_bs(&cat, &bs).unwrap();
            let sub = full.restrict(&top.incl.constant_part()).unwrap();
            assert!(hodge_riemann_check(&sub, SignConvention::Standard).pass);
            for p in &dec.pieces {
                let sub = full.restrict(&p.incl.constant_part()).unwrap();
                assert!(hodge_riemann_check(&sub, SignConvention::Anchored(w.len() as i32)).pass);
            }
        }
    }
}

#[test]
fn forms_from_two_reduced_words_are_proportional() {
    for m in [3u32, 4, 5, 6] {
        let sys = dihedral(m);
        let rho = canonical(&sys);
        let cat = catalogue(&sys, m as usize);
        let other: Vec<usize> = (0..m as usize).map(|k| (k + 1) % 2).collect();
        let w0 = cat.ideal().index_of_word(&other).unwrap();
        let entry = cat.entry(w0).unwrap();
        assert_ne!(entry.word, other);
        let b1 = &entry.module;
        let (_, top, _) = decompose_bs(&cat, &BsBimodule::build(&sys, &other)).unwrap();
        let iso = hom_space(b1, &top.module, 0);
        assert_eq!(iso.len(), 1);
        let phi = iso[0].constant_part();
        let g1 = reduce(b1, &rho).unwrap().gram().clone();
        let g2 = reduce(&top.module, &rho).unwrap().gram().clone();
        let pulled = phi.transpose().mul(&g2).mul(&phi);
        let bot = entry.bottom();
        let k = (0..b1.rank()).find(|&k| !g1[(bot, k)].is_zero()).unwrap();
        let c = &pulled[(bot, k)] * &g1[(bot, k)].inverse().unwrap();
        assert!(c.is_positive(), "m = {m}");
        assert_eq!(pulled, g1.scale(&c), "m = {m}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn rouquier_complexes_are_minimal_complexes(m in prop::sample::select(vec![3u32, 4, 5]), w in word(2, 4)) {
        let sys = dihedral(m);
        prop_assume!(w.len() <= m as usize && sys.is_reduced(&w).unwrap());
        let cat = catalogue(&sys, w.len());
        let rc = rouquier_complex_for_word(&cat, &w).unwrap();
        prop_assert!(rc.complex.d_squared_zero());
        prop_assert!(rc.complex.degree_zero());
        prop_assert!(find_isomorphism(&rc.complex).is_none());
    }

    #[test]
    fn inverse_kl_polynomials_have_sign_positive_coefficients(m in prop::sample::select(vec![3u32, 4, 5, 6]), seed in any::<u32>()) {
        let sys = dihedral(m);
        let cat = catalogue(&sys, m as usize);
        let x = seed as usize % cat.len();
        let rc = rouquier_complex(&cat, x).unwrap();
        let table = MultiplicityTable::of(&cat, &rc.complex).unwrap();
        let r = inverse_kl_check(&cat, x, &table);
        prop_assert!(r.sign_positive && r.agree);
    }

    #[test]
    fn perverse_homs_vanish_in_negative_degrees(m in prop::sample::select(vec![3u32, 4, 5]), a in any::<u32>(), b in any::<u32>(), i in 1i32..=2) {
        let sys = dihedral(m);
        let cat = catalogue(&sys, m as usize);
        let b1 = &cat.entry(a as usize % cat.len()).unwrap().module;
        let b2 = &cat.entry(b as usize % cat.len()).unwrap().module;
        prop_assert!(hom_space(b1, &b2.shifted(-i), 0).is_empty());
    }
}
