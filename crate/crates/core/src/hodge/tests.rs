use std::sync::Arc;

use super::*;
use crate::coxeter::{enumerate_ideal, CoxeterSystem, RepChoice, RhoChoice};
use crate::hecke::Hecke;
use crate::linalg::Matrix;
use crate::numeric::Rational;
use crate::soergel::{decompose_bs, hom_space, BsBimodule, Catalogue, FreeBimodule};

fn system(m: Vec<Vec<u32>>) -> Arc<CoxeterSystem> {
    CoxeterSystem::new(m, RepChoice::Geometric).unwrap()
}

fn dihedral(m: u32) -> Arc<CoxeterSystem> {
    system(vec![vec![1, m], vec![m, 1]])
}

fn full_catalogue(sys: &Arc<CoxeterSystem>) -> Catalogue {
    let (w0, _) = longest_word(sys, 1000).unwrap();
    let ideal = Arc::new(enumerate_ideal(sys, w0.len()).unwrap());
    Catalogue::build(Arc::new(Hecke::new(ideal).unwrap()), w0.len()).unwrap()
}

fn canonical(sys: &CoxeterSystem) -> Vec<crate::numeric::Scalar> {
    sys.choose_rho(RhoChoice::Canonical).unwrap().rho
}

fn idx(cat: &Catalogue, w: &[usize]) -> usize {
    cat.ideal().index_of_word(w).unwrap()
}

#[test]
fn reduction_of_b_s() {
    let sys = dihedral(3);
    let rho = canonical(&sys);
    let f = sys.field();
    let bs = BsBimodule::build(&sys, &[0]);
    let d = reduce(bs.module(), &rho).unwrap();
    assert_eq!(d.degrees(), &[-1, 1]);
    assert_eq!(d.operator()[(1, 0)], sys.eval_coroot(0, &rho));
    assert!(d.operator()[(0, 1)].is_zero());
    assert_eq!(d.gram()[(0, 1)], f.one());
    assert!(d.is_lefschetz_operator());
    let r = reduce(&FreeBimodule::regular(&sys), &rho).unwrap();
    assert_eq!(r.degrees(), &[0]);
    let hr = hodge_riemann_check(&d, SignConvention::Standard);
    assert!(hr.pass);
    assert_eq!(hr.degrees[0].signature, (1, 0, 0));
}

#[test]
fn gdim_doubles_under_induction() {
    let sys = dihedral(4);
    let cat = full_catalogue(&sys);
    for e in cat.entries() {
        for s in 0..2 {
            let v = e.module.induce(s).graded_dims();
            let w = e.module.graded_dims();
            let mut expect = std::collections::BTreeMap::new();
            for (d, n) in w {
                *expect.entry(d - 1).or_insert(0) += n;
                *expect.entry(d + 1).or_insert(0) += n;
            }
            assert_eq!(v, expect);
        }
    }
}

#[test]
fn signatures_of_small_forms() {
    let f = crate::numeric::field_create(1);
    let d = Matrix::from_rows(f, vec![vec![f.one(), f.zero()], vec![f.zero(), f.from_int(-1)]]);
    assert_eq!(signature(&d), (1, 1, 0));
    for a in [-3, 0, 5] {
        let h = Matrix::from_rows(f, vec![vec![f.zero(), f.one()], vec![f.one(), f.from_int(a)]]);
        assert_eq!(signature(&h), (1, 1, 0));
    }
    assert_eq!(signature(&Matrix::zeros(f, 3, 3)), (0, 0, 3));
}

#[test]
fn zero_operator_fails_hard_lefschetz() {
    let f = crate::numeric::field_create(1);
    let g = Matrix::from_rows(f, vec![vec![f.zero(), f.one()], vec![f.one(), f.zero()]]);
    let d = LefschetzDatum::new(f, vec![-1, 1], g, Matrix::zeros(f, 2, 2)).unwrap();
    let r = hard_lefschetz_check(&d);
    assert!(!r.pass);
    assert_eq!(r.failing, Some(-1));
}

#[test]
fn expected_signs() {
    assert_eq!(expected_sign(3, 3), 1);
    assert_eq!(expected_sign(3, 1), -1);
    assert_eq!(expected_sign(3, 2), 0);
    assert_eq!(expected_sign(4, 0), 1);
    assert_eq!(SignConvention::congruence(5, 1), SignConvention::Anchored(4));
}

#[test]
fn longest_element_of_a2() {
    let sys = dihedral(3);
    let rho = canonical(&sys);
    let cat = full_catalogue(&sys);
    let w0 = idx(&cat, &[0, 1, 0]);
    let d = reduce(&cat.entry(w0).unwrap().module, &rho).unwrap();
    assert_eq!(d.graded_dims().into_iter().collect::<Vec<_>>(), vec![(-3, 1), (-1, 2), (1, 2), (3, 1)]);
    assert!(hard_lefschetz_check(&d).pass);
    let hr = hodge_riemann_check(&d, SignConvention::Standard);
    assert!(hr.pass);
    let prim: Vec<(usize, usize, (usize, usize, usize))> = hr.degrees.iter().map(|r| (r.i, r.prim_dim, r.signature)).collect();
    assert_eq!(prim, vec![(3, 1, (1, 0, 0)), (1, 1, (0, 1, 0))]);
    assert_eq!(hr.signs(), vec![1, -1]);
}

#[test]
fn lowest_bs_class_is_positive() {
    let sys = dihedral(4);
    let rho = canonical(&sys);
    for word in [vec![0], vec![0, 1], vec![1, 0, 1], vec![0, 1, 0, 1]] {
        let bs = BsBimodule::build(&sys, &word);
        let d = reduce(bs.module(), &rho).unwrap();
        let form = d.lefschetz_form(word.len());
        assert_eq!(form.rows(), 1);
        assert!(form[(0, 0)].is_positive(), "{word:?}");
        let hr = hodge_riemann_check(&d, SignConvention::Standard);
        assert!(hr.pass, "{word:?}: {hr:?}");
    }
}

#[test]
fn zeta_zero_is_plain_multiplication() {
    let sys = dihedral(3);
    let rho = canonical(&sys);
    let f = sys.field();
    let bs = BsBimodule::build(&sys, &[0]);
    let z0 = lefschetz_zeta_module(bs.module(), 0, &rho, &f.zero()).unwrap();
    let plain = reduce(BsBimodule::build(&sys, &[0, 0]).module(), &rho).unwrap();
    assert_eq!(z0.operator(), plain.operator());
    assert_eq!(z0.gram(), plain.gram());
    // B_id B_s = B_s: ζ = 1 doubles the operator
    let r = FreeBimodule::regular(&sys);
    let z1 = lefschetz_zeta_module(&r, 0, &rho, &f.one()).unwrap();
    let bsd = reduce(bs.module(), &rho).unwrap();
    assert_eq!(z1.operator(), &bsd.operator().scale(&f.from_int(2)));
    assert!(matches!(lefschetz_zeta_module(&r, 0, &rho, &f.from_int(-1)), Err(HodgeError::NegativeZeta)));
}

#[test]
fn descent_split_block_form() {
    for sys in [dihedral(3), dihedral(4), dihedral(5)] {
        let rho = canonical(&sys);
        let f = sys.field();
        let cat = full_catalogue(&sys);
        for x in 1..cat.len() {
            for s in 0..2 {
                if !cat.ideal().element(x).is_right_descent(s) {
                    continue;
                }
                for z in [f.zero(), f.one(), f.from_int(10)] {
                    let d = descent_split(&cat, x, s, &rho, &z).unwrap();
                    assert!(d.cyclic);
                    assert!(d.off_diagonal_exact, "{x} {s}");
                    assert!(d.block_form, "{x} {s}");
                    assert!(d.projection_consistent, "{x} {s}");
                }
            }
        }
    }
}

#[test]
fn shifted_vanishing_on_descents() {
    let sys = dihedral(3);
    let rho = canonical(&sys);
    let cat = full_catalogue(&sys);
    let s = idx(&cat, &[0]);
    let v = shifted_vanishing_for(&cat, s, 0, &rho).unwrap();
    assert!(v.hypothesis && v.vanishes && v.shift == 1);
    let st = idx(&cat, &[0, 1]);
    let v = shifted_vanishing_for(&cat, st, 1, &rho).unwrap();
    assert!(v.hypothesis && v.vanishes);
    // unshifted datum: hypothesis fails
    let d = reduce(&cat.entry(s).unwrap().module, &rho).unwrap();
    let v = shifted_vanishing_check(&d);
    assert_eq!(v.shift, 0);
    assert!(!v.hypothesis);
    assert!(!v.vanishes);
}

#[test]
fn local_forms_in_a2() {
    let sys = dihedral(3);
    let rho = canonical(&sys);
    let cat = full_catalogue(&sys);
    let (id, s, st) = (0, idx(&cat, &[0]), idx(&cat, &[0, 1]));
    let r = local_intersection_form(&cat, id, s, 1).unwrap();
    assert_eq!(r.dim, 0);
    assert!(r.pass);
    let r = local_intersection_form(&cat, s, st, 0).unwrap();
    assert_eq!(r.dim, 1);
    assert_eq!(r.expected_sign, -1);
    assert_eq!(r.signature, (0, 1, 0));
    assert!(r.pass);
    let (_, e) = local_and_embedding(&cat, s, st, 0, &rho).unwrap();
    assert!(e.pass, "{e:?}");
    let (_, e) = local_and_embedding(&cat, id, s, 1, &rho).unwrap();
    assert!(e.n.is_one());
    assert!(matches!(local_intersection_form(&cat, id, s, 0), Err(HodgeError::NotAscent { .. })));
}

#[test]
fn local_forms_and_embeddings_everywhere_in_small_groups() {
    for sys in [dihedral(3), dihedral(4)] {
        let rho = canonical(&sys);
        let cat = full_catalogue(&sys);
        let ideal = cat.ideal().clone();
        for x in 0..cat.len() {
            for s in 0..2 {
                let Some(xs) = ideal.right_mul(x, s) else { continue };
                if ideal.length(xs) < ideal.length(x) {
                    continue;
                }
                for y in 0..cat.len() {
                    if y == xs || !ideal.bruhat_leq(y, xs) {
                        continue;
                    }
                    let (l, e) = local_and_embedding(&cat, y, x, s, &rho).unwrap();
                    assert!(l.pass, "{l:?}");
                    assert!(e.pass, "{e:?}");
                }
            }
        }
    }
}

#[test]
fn coinvariant_rings() {
    let a1 = system(vec![vec![1]]);
    let c = coinvariant_datum(&a1, &canonical(&a1), DEFAULT_DIMENSION_CAP).unwrap();
    assert_eq!(c.poincare, vec![1, 1]);
    assert_eq!(c.datum.degrees(), &[-1, 1]);
    for (m, expect) in [(3, vec![1, 2, 2, 1]), (4, vec![1, 2, 2, 2, 1])] {
        let sys = dihedral(m);
        let c = coinvariant_datum(&sys, &canonical(&sys), DEFAULT_DIMENSION_CAP).unwrap();
        assert_eq!(c.poincare, expect);
        assert!(c.datum.is_lefschetz_operator());
        assert!(hodge_riemann_check(&c.datum, SignConvention::Standard).pass);
    }
    let a3 = system(vec![vec![1, 3, 2], vec![3, 1, 3], vec![2, 3, 1]]);
    let c = coinvariant_datum(&a3, &canonical(&a3), DEFAULT_DIMENSION_CAP).unwrap();
    assert_eq!(c.poincare, vec![1, 3, 5, 6, 5, 3, 1]);
    assert_eq!(c.group_order, 24);
    assert!(hodge_riemann_check(&c.datum, SignConvention::Standard).pass);
    let inf = CoxeterSystem::new(vec![vec![1, 0], vec![0, 1]], RepChoice::Doubled).unwrap();
    assert!(matches!(coinvariant_datum(&inf, &canonical(&inf), 50), Err(HodgeError::Infinite)));
}

#[test]
fn zeta_scans() {
    let sys = dihedral(3);
    let rho = canonical(&sys);
    let cat = full_catalogue(&sys);
    let grid = default_grid();
    let scan = zeta_family_scan(&cat, 0, 0, &rho, &grid).unwrap();
    assert!(scan.pass);
    let s = idx(&cat, &[0]);
    let scan = zeta_family_scan(&cat, s, 0, &rho, &grid).unwrap();
    assert!(!scan.ascent && scan.pass);
    assert_eq!(scan.excluded, vec![Rational::zero()]);
    // the excluded point: hL fails for plain ρ on B̄_sB_s
    let d0 = lefschetz_zeta(&cat, s, 0, &rho, &sys.field().zero()).unwrap();
    assert!(!hard_lefschetz_check(&d0).pass);
    let st = idx(&cat, &[0, 1]);
    let scan = zeta_family_scan(&cat, st, 0, &rho, &grid).unwrap();
    assert!(scan.ascent && scan.pass && scan.constant_signatures && scan.hr_pass);
    assert_eq!(scan.retries, 0);
}

#[test]
fn lefschetz_symmetry_and_primitive_decomposition() {
    let sys = dihedral(5);
    let rho = canonical(&sys);
    let cat = full_catalogue(&sys);
    for e in cat.entries() {
        let d = reduce(&e.module, &rho).unwrap();
        assert!(d.is_lefschetz_operator());
        let hr = hodge_riemann_check(&d, SignConvention::Standard);
        assert!(hr.pass);
        // dim H^{−i} = Σ_{j ≥ i, j ≡ i} dim P^{−j}
        for r in &hr.degrees {
            let sum: usize = hr.degrees.iter().filter(|q| q.i >= r.i && (q.i - r.i) % 2 == 0).map(|q| q.prim_dim).sum();
            assert_eq!(sum, r.dim);
        }
        // both sign conventions agree on B̄_x
        let m = cat.ideal().length(e.element) as i32;
        assert_eq!(hodge_riemann_check(&d, SignConvention::congruence(m, 0)), hr);
    }
}

#[test]
fn restriction_to_summands_keeps_hodge_riemann() {
    let sys = dihedral(3);
    let rho = canonical(&sys);
    let cat = full_catalogue(&sys);
    let bs = BsBimodule::build(&sys, &[0, 1, 0]);
    let full = reduce(bs.module(), &rho).unwrap();
    assert!(hodge_riemann_check(&full, SignConvention::Standard).pass);
    let (dec, top, _) = decompose_bs(&cat, &bs).unwrap();
    let sub = full.restrict(&top.incl.constant_part()).unwrap();
    assert!(hodge_riemann_check(&sub, SignConvention::Standard).pass);
    for p in &dec.pieces {
        let sub = full.restrict(&p.incl.constant_part()).unwrap();
        assert!(hodge_riemann_check(&sub, SignConvention::Anchored(3)).pass);
    }
}

#[test]
fn embedding_independence_of_reduced_word() {
    let sys = dihedral(3);
    let rho = canonical(&sys);
    let cat = full_catalogue(&sys);
    let w0 = idx(&cat, &[0, 1, 0]);
    let b1 = &cat.entry(w0).unwrap().module;
    let (_, top, _) = decompose_bs(&cat, &BsBimodule::build(&sys, &[1, 0, 1])).unwrap();
    let b2 = &top.module;
    let iso = hom_space(b1, b2, 0);
    assert_eq!(iso.len(), 1);
    let phi = iso[0].constant_part();
    let g1 = reduce(b1, &rho).unwrap().gram().clone();
    let g2 = reduce(b2, &rho).unwrap().gram().clone();
    let pulled = phi.transpose().mul(&g2).mul(&phi);
    let bot = cat.entry(w0).unwrap().bottom();
    let top_i = (0..b1.rank()).find(|&k| !g1[(bot, k)].is_zero()).unwrap();
    let c = (&pulled[(bot, top_i)] * &g1[(bot, top_i)].inverse().unwrap()).clone();
    assert!(c.is_positive());
    assert_eq!(pulled, g1.scale(&c));
}

#[test]
fn weak_lefschetz_substitute_on_b_s() {
    let sys = dihedral(3);
    let rho = canonical(&sys);
    let f = sys.field();
    let v = reduce(BsBimodule::build(&sys, &[0]).module(), &rho).unwrap();
    let gamma = sys.eval_coroot(0, &rho);
    let w = LefschetzDatum::new(f, vec![0], Matrix::from_rows(f, vec![vec![gamma]]), Matrix::zeros(f, 1, 1)).unwrap();
    let phi = Matrix::from_rows(f, vec![vec![f.one(), f.zero()]]);
    let r = weak_lefschetz_substitute(&v, &w, &phi);
    assert!(r.graded && r.injective_below && r.isometry && r.w_hodge_riemann && r.conclusion);
}
