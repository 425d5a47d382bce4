//! Rouquier complexes F_x, with an embedding into F_{s₁}⋯F_{s_m}, and their checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::coxeter::CoxeterSystem;
use crate::hecke::LaurentPoly;
use crate::hodge::{hodge_riemann_check, LefschetzDatum, SignConvention, SignatureReport};
use crate::invpoly::Poly;
use crate::linalg::Matrix;
use crate::numeric::Scalar;
use crate::soergel::{BsBimodule, Catalogue, FreeBimodule, PolyMatrix};

use super::complex::{
    complex_tensor, decompose_terms, eliminate, find_isomorphism, tensor_map_left, Label, Object, SoergelComplex,
};
use super::RouquierError;

/// B_s in degree 0, R(1) in degree 1, d = multiplication: c_id ↦ 1, c_s ↦ α_s.
pub fn f_s(sys: &Arc<CoxeterSystem>, s: usize) -> SoergelComplex {
    let (f, nv) = (sys.field(), sys.rep_dim());
    let r = FreeBimodule::regular(sys);
    let b_s = Object { label: Label::new(vec![vec![s]], 0), module: r.induce(s) };
    let r1 = Object { label: Label::new(vec![], 1), module: r.shifted(1) };
    let mut d = PolyMatrix::zeros(f, nv, 1, 2);
    d.set(0, 0, Poly::one(f, nv));
    d.set(0, 1, Poly::linear(f, sys.root(s)));
    SoergelComplex::new(sys.clone(), 0, vec![vec![b_s], vec![r1]], vec![d]).expect("two-term complex")
}

/// A minimal complex F_x together with a split embedding into F_{s₁}⋯F_{s_m}.
///
/// Term j of the product is ⊕ BS(x̲′)(j) over the subexpressions x̲′ omitting j letters,
/// listed in `bs_words[j]`; `embedding[j]` maps term j of F_x into it.
#[derive(Clone, Debug)]
pub struct RouquierComplex {
    pub word: Vec<usize>,
    pub complex: SoergelComplex,
    pub bs_words: Vec<Vec<Vec<usize>>>,
    pub embedding: Vec<PolyMatrix>,
}

/// Row permutation taking (⊕_p M_p) ⊗ N in the layout j·rank + i to ⊕_p (M_p ⊗ N).
fn regroup(sizes: &[usize], rn: usize) -> Vec<usize> {
    let total: usize = sizes.iter().sum();
    let mut perm = Vec::with_capacity(total * rn);
    let mut off = 0;
    for &sz in sizes {
        for l in 0..rn {
            for i in 0..sz {
                perm.push(l * total + off + i);
            }
        }
        off += sz;
    }
    perm
}

fn tensor_embedding(e: &PolyMatrix, bs_sizes: &[usize], obj_sizes: &[usize], n: &FreeBimodule) -> PolyMatrix {
    let t = tensor_map_left(e, n);
    let rows = regroup(bs_sizes, n.rank());
    let cols = regroup(obj_sizes, n.rank());
    t.submatrix(&rows, &cols)
}

fn block_diag(f: &'static crate::numeric::FieldDescriptor, nv: usize, a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    PolyMatrix::blocks(
        f,
        nv,
        &[a.rows(), b.rows()],
        &[a.cols(), b.cols()],
        &[vec![Some(a.clone()), None], vec![None, Some(b.clone())]],
    )
}

/// Inclusion of the eliminated complex into the old one on term k: c ↦ (−λ⁻¹ d_{BC} c, c).
fn elimination_inclusion(c: &SoergelComplex, k: usize, a: usize, b: usize, lambda: &Scalar) -> PolyMatrix {
    let (ro, co) = (c.offsets(k + 1), c.offsets(k));
    let n = c.term_rank(k);
    let a_idx: Vec<usize> = (co[a]..co[a + 1]).collect();
    let c_idx: Vec<usize> = (0..n).filter(|i| !a_idx.contains(i)).collect();
    let b_idx: Vec<usize> = (ro[b]..ro[b + 1]).collect();
    let beta = c.diffs[k].submatrix(&b_idx, &c_idx);
    let corr = beta.scale(&-&lambda.inverse().expect("nonzero scalar"));
    let (f, nv) = (c.sys().field(), c.sys().rep_dim());
    let mut out = PolyMatrix::zeros(f, nv, n, c_idx.len());
    for (col, &ci) in c_idx.iter().enumerate() {
        out.set(ci, col, Poly::one(f, nv));
        for (r, &ai) in a_idx.iter().enumerate() {
            out.set(ai, col, corr.get(r, col).clone());
        }
    }
    out
}

fn tracked_minimalize(mut rc: RouquierComplex) -> Result<RouquierComplex, RouquierError> {
    while let Some((k, a, b, l)) = find_isomorphism(&rc.complex) {
        let j = elimination_inclusion(&rc.complex, k, a, b, &l);
        let ro = rc.complex.offsets(k + 1);
        let keep: Vec<usize> = (0..rc.complex.term_rank(k + 1)).filter(|&i| i < ro[b] || i >= ro[b + 1]).collect();
        rc.embedding[k] = rc.embedding[k].mul(&j);
        let e1 = &rc.embedding[k + 1];
        rc.embedding[k + 1] = e1.submatrix(&(0..e1.rows()).collect::<Vec<_>>(), &keep);
        rc.complex = eliminate(&rc.complex, k, a, b, &l);
        if !rc.complex.d_squared_zero() {
            return Err(RouquierError::NotAComplex(format!("after eliminating in degree {k}")));
        }
    }
    Ok(rc)
}

/// F_{s₁}⋯F_{s_m} built factor by factor, decomposing and minimalizing after every factor.
pub fn rouquier_complex_for_word(cat: &Catalogue, word: &[usize]) -> Result<RouquierComplex, RouquierError> {
    let sys = cat.sys().clone();
    if !sys.is_reduced(word)? {
        return Err(RouquierError::NotReduced);
    }
    if cat.ideal().index_of_word(word).is_none() {
        return Err(RouquierError::OutsideIdeal);
    }
    let (f, nv) = (sys.field(), sys.rep_dim());
    let mut rc = RouquierComplex {
        word: vec![],
        complex: SoergelComplex::unit(&sys),
        bs_words: vec![vec![vec![]]],
        embedding: vec![PolyMatrix::identity(f, nv, 1)],
    };
    let r = FreeBimodule::regular(&sys);
    for &s in word {
        let fs = f_s(&sys, s);
        let product = complex_tensor(&rc.complex, &fs)?;
        let b_s = r.induce(s);
        let n_old = rc.complex.len();
        let mut bs_words = Vec::with_capacity(n_old + 1);
        let mut embedding = Vec::with_capacity(n_old + 1);
        for t in 0..=n_old {
            // term t = (F^{t−1} ⊗ R(1)) ⊕ (F^t ⊗ B_s), in the order of complex_tensor
            let mut words = Vec::new();
            let mut blocks: Vec<PolyMatrix> = Vec::new();
            if t > 0 {
                blocks.push(rc.embedding[t - 1].clone());
                words.extend(rc.bs_words[t - 1].iter().cloned());
            }
            if t < n_old {
                let bs_sizes: Vec<usize> = rc.bs_words[t].iter().map(|w| 1usize << w.len()).collect();
                let obj_sizes: Vec<usize> = rc.complex.terms[t].iter().map(|o| o.module.rank()).collect();
                blocks.push(tensor_embedding(&rc.embedding[t], &bs_sizes, &obj_sizes, &b_s));
                words.extend(rc.bs_words[t].iter().map(|w| w.iter().copied().chain([s]).collect::<Vec<_>>()));
            }
            let e = match blocks.len() {
                1 => blocks.pop().unwrap(),
                _ => block_diag(f, nv, &blocks[0], &blocks[1]),
            };
            bs_words.push(words);
            embedding.push(e);
        }
        let decomposed = decompose_terms(cat, &product)?;
        // decompose_terms changed bases by a block-diagonal inclusion; recompute it termwise.
        for t in 0..decomposed.len() {
            embedding[t] = embedding[t].mul(&decomposition_inclusion(cat, &product, t)?);
        }
        let mut next = RouquierComplex { word: rc.word.clone(), complex: decomposed, bs_words, embedding };
        next.word.push(s);
        rc = tracked_minimalize(next)?;
    }
    rc.complex = trim_tracked(&mut rc);
    Ok(rc)
}

/// Inclusion of the decomposed term t into term t of `c`, as in [`decompose_terms`].
fn decomposition_inclusion(cat: &Catalogue, c: &SoergelComplex, t: usize) -> Result<PolyMatrix, RouquierError> {
    let sys = c.sys();
    let (f, nv) = (sys.field(), sys.rep_dim());
    let ideal = cat.ideal();
    let old_sizes: Vec<usize> = c.terms[t].iter().map(|o| o.module.rank()).collect();
    let mut grid_cols: Vec<(usize, PolyMatrix)> = Vec::new();
    for (a, o) in c.terms[t].iter().enumerate() {
        if o.label.is_indecomposable() {
            grid_cols.push((a, PolyMatrix::identity(f, nv, o.module.rank())));
            continue;
        }
        let z = ideal.index_of_word(&o.label.factors[0]).ok_or(RouquierError::OutsideIdeal)?;
        let pd = cat.product(z, o.label.factors[1][0])?;
        for p in &pd.pieces {
            grid_cols.push((a, p.incl.clone()));
        }
    }
    let new_sizes: Vec<usize> = grid_cols.iter().map(|(_, m)| m.cols()).collect();
    let mut grid: Vec<Vec<Option<PolyMatrix>>> = vec![vec![None; new_sizes.len()]; old_sizes.len()];
    for (col, (a, m)) in grid_cols.into_iter().enumerate() {
        grid[a][col] = Some(m);
    }
    Ok(PolyMatrix::blocks(f, nv, &old_sizes, &new_sizes, &grid))
}

fn trim_tracked(rc: &mut RouquierComplex) -> SoergelComplex {
    let mut c = rc.complex.clone();
    while c.terms.len() > 1 && c.terms.last().unwrap().is_empty() {
        c.terms.pop();
        c.diffs.pop();
        rc.embedding.pop();
        rc.bs_words.pop();
    }
    c
}

/// F_x for the shortlex reduced word of x.
pub fn rouquier_complex(cat: &Catalogue, x: usize) -> Result<RouquierComplex, RouquierError> {
    let word = cat.ideal().word(x).to_vec();
    rouquier_complex_for_word(cat, &word)
}

/// Graded multiplicities m_{z,i,k}: copies of B_z(k) in cohomological degree i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityTable {
    pub entries: BTreeMap<(usize, i32, i32), usize>,
}

impl MultiplicityTable {
    pub fn of(cat: &Catalogue, c: &SoergelComplex) -> Result<Self, RouquierError> {
        let mut entries = BTreeMap::new();
        for (k, term) in c.terms.iter().enumerate() {
            for o in term {
                let w = o.label.word().ok_or_else(|| RouquierError::NotDecomposable(o.label.to_string()))?;
                let z = cat.ideal().index_of_word(w).ok_or(RouquierError::OutsideIdeal)?;
                *entries.entry((z, c.start + k as i32, o.label.shift)).or_insert(0) += 1;
            }
        }
        Ok(MultiplicityTable { entries })
    }

    /// Σ_{i,k} (−1)^i m_{z,i,k} v^k for each z.
    pub fn euler_characteristic(&self) -> BTreeMap<usize, LaurentPoly> {
        let mut out: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
        for (&(z, i, k), &m) in &self.entries {
            let c = if i.rem_euclid(2) == 0 { BigInt::from(m) } else { -BigInt::from(m) };
            out.entry(z).or_insert_with(LaurentPoly::zero).add_term(k, &c);
        }
        out.retain(|_, p| !p.is_zero());
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearityReport {
    pub pass: bool,
    /// ^0F_x is a single copy of B_x without shift.
    pub degree_zero: bool,
    /// (i, summand) for every summand that is not B_z(i) with z < x.
    pub offending: Vec<(i32, String)>,
}

pub fn verify_linearity(cat: &Catalogue, x: usize, c: &SoergelComplex) -> Result<LinearityReport, RouquierError> {
    let ideal = cat.ideal();
    let mut degree_zero = false;
    let mut offending = Vec::new();
    for (k, term) in c.terms.iter().enumerate() {
        let i = c.start + k as i32;
        if i == 0 {
            degree_zero = term.len() == 1 && term[0].label.shift == 0 && term[0].label.word() == Some(ideal.word(x));
            if !degree_zero {
                offending.extend(term.iter().map(|o| (0, o.label.to_string())));
            }
            continue;
        }
        for o in term {
            let z = o.label.word().and_then(|w| ideal.index_of_word(w));
            let ok = i > 0 && o.label.shift == i && z.is_some_and(|z| z != x && ideal.bruhat_leq(z, x));
            if !ok {
                offending.push((i, o.label.to_string()));
            }
        }
    }
    Ok(LinearityReport { pass: degree_zero && offending.is_empty(), degree_zero, offending })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseKlReport {
    pub from_complex: BTreeMap<usize, LaurentPoly>,
    pub from_hecke: BTreeMap<usize, LaurentPoly>,
    pub agree: bool,
    /// (−1)^{ℓ(x)−ℓ(z)} g_{z,x} ∈ ℤ_{≥0}[v] for every z.
    pub sign_positive: bool,
    /// m_{z,i} = 0 unless i ≡ ℓ(x) − ℓ(z) mod 2.
    pub parity: bool,
    pub pass: bool,
}

pub fn inverse_kl_check(cat: &Catalogue, x: usize, table: &MultiplicityTable) -> InverseKlReport {
    let ideal = cat.ideal();
    let from_complex = table.euler_characteristic();
    let mut from_hecke = cat.hecke().inverse_kl(x);
    from_hecke.retain(|_, p| !p.is_zero());
    let agree = from_complex == from_hecke;
    let lx = ideal.length(x) as i64;
    let sign_positive = from_hecke.iter().all(|(&z, g)| {
        let g = if (lx - ideal.length(z) as i64).rem_euclid(2) == 0 { g.clone() } else { g.scale(&BigInt::from(-1)) };
        g.has_nonnegative_coeffs() && g.min_degree().is_none_or(|d| d >= 0)
    });
    let parity = table.entries.keys().all(|&(z, i, _)| (i as i64 - lx + ideal.length(z) as i64).rem_euclid(2) == 0);
    InverseKlReport { pass: agree && sign_positive && parity, from_complex, from_hecke, agree, sign_positive, parity }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    /// (cohomological degree, internal degree, dimension) of the nonzero groups.
    pub groups: Vec<(i32, i32, usize)>,
    pub expected_internal_degree: i32,
    pub pass: bool,
}

/// Exact cohomology of the termwise reduction; it must be one copy of ℝ(−ℓ(x)) in degree 0.
pub fn cohomology_check(c: &SoergelComplex, length: usize) -> CohomologyReport {
    let groups = c.reduced_cohomology();
    let e = length as i32;
    let pass = groups == vec![(0, e, 1)];
    CohomologyReport { groups, expected_internal_degree: e, pass }
}

/// The reduction of ^jF_x(−j) with the form pulled back from ⊕ λ_{x̲′}·BS(x̲′).
#[derive(Clone, Debug)]
pub struct TermHodgeReport {
    pub j: i32,
    pub dim: usize,
    pub nondegenerate: bool,
    /// Positive on primitives in degrees ≡ −m + j mod 4.
    pub congruence: SignatureReport,
    pub standard: SignatureReport,
    pub conventions_agree: bool,
}

pub fn reduced_term_hodge(rc: &RouquierComplex, j: usize, rho: &[Scalar], lambda: &[Scalar]) -> Result<TermHodgeReport, RouquierError> {
    let sys = rc.complex.sys().clone();
    let f = sys.field();
    let term = &rc.complex.terms[j];
    let words = &rc.bs_words[j];
    if lambda.len() != words.len() {
        return Err(RouquierError::Shape(format!("{} scalars for {} subexpressions", lambda.len(), words.len())));
    }
    let sizes: Vec<usize> = words.iter().map(|w| 1usize << w.len()).collect();
    let total: usize = sizes.iter().sum();
    let mut g = Matrix::zeros(f, total, total);
    let mut off = 0;
    for (w, l) in words.iter().zip(lambda) {
        let bs = BsBimodule::build(&sys, w);
        let gw = bs.module().reduced_gram().expect("trace form");
        for r in 0..gw.rows() {
            for c in 0..gw.cols() {
                g[(off + r, off + c)] = &gw[(r, c)] * l;
            }
        }
        off += gw.rows();
    }
    let e = rc.embedding[j].constant_part();
    let gram = e.transpose().mul(&g).mul(&e);
    let module = super::complex::direct_sum(&sys, term.iter().map(|o| &o.module)).shifted(-(j as i32));
    let datum = LefschetzDatum::new(f, module.degrees().to_vec(), gram, module.left_linear(rho).constant_part())?;
    let m = rc.word.len() as i32;
    let congruence = hodge_riemann_check(&datum, SignConvention::congruence(m, j as i32));
    let standard = hodge_riemann_check(&datum, SignConvention::Standard);
    let conventions_agree = congruence.pass == standard.pass;
    Ok(TermHodgeReport {
        j: rc.complex.start + j as i32,
        dim: datum.dim(),
        nondegenerate: datum.is_nondegenerate(),
        congruence,
        standard,
        conventions_agree,
    })
}
