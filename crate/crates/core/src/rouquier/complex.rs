//! Bounded complexes of free bimodules with labelled summands.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::coxeter::{word_string, CoxeterSystem};
use crate::invpoly::Poly;
use crate::linalg::Matrix;
use crate::soergel::{endomorphism_scalar, Catalogue, FreeBimodule, PolyMatrix};

use super::RouquierError;

/// B_{w₁}⋯B_{w_k}(shift), each factor given by its shortlex word; no factors means R.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub factors: Vec<Vec<usize>>,
    pub shift: i32,
}

impl Label {
    pub fn new(factors: Vec<Vec<usize>>, shift: i32) -> Self {
        Label { factors: factors.into_iter().filter(|w| !w.is_empty()).collect(), shift }
    }

    pub fn is_indecomposable(&self) -> bool {
        self.factors.len() <= 1
    }

    /// The word of an indecomposable label (empty for R).
    pub fn word(&self) -> Option<&[usize]> {
        match self.factors.len() {
            0 => Some(&[]),
            1 => Some(&self.factors[0]),
            _ => None,
        }
    }

    fn tensor(&self, other: &Label) -> Label {
        Label::new(self.factors.iter().chain(&other.factors).cloned().collect(), self.shift + other.shift)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            write!(f, "R")?;
        }
        for (k, w) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "B_{}", word_string(w))?;
        }
        if self.shift != 0 {
            write!(f, "({})", self.shift)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Object {
    pub label: Label,
    pub module: FreeBimodule,
}

/// Terms `terms[k]` sit in cohomological degree `start + k`; `diffs[k]` maps term k to term k + 1.
#[derive(Clone, Debug)]
pub struct SoergelComplex {
    sys: Arc<CoxeterSystem>,
    pub start: i32,
    pub terms: Vec<Vec<Object>>,
    pub diffs: Vec<PolyMatrix>,
}

impl SoergelComplex {
    pub fn new(sys: Arc<CoxeterSystem>, start: i32, terms: Vec<Vec<Object>>, diffs: Vec<PolyMatrix>) -> Result<Self, RouquierError> {
        let c = SoergelComplex { sys, start, terms, diffs };
        if c.diffs.len() + 1 != c.terms.len().max(1) {
            return Err(RouquierError::Shape("one differential between consecutive terms".into()));
        }
        for k in 0..c.diffs.len() {
            if c.diffs[k].rows() != c.term_rank(k + 1) || c.diffs[k].cols() != c.term_rank(k) {
                return Err(RouquierError::Shape(format!("differential {k} has the wrong size")));
            }
        }
        Ok(c)
    }

    /// R in degree 0.
    pub fn unit(sys: &Arc<CoxeterSystem>) -> Self {
        let obj = Object { label: Label::new(vec![], 0), module: FreeBimodule::regular(sys) };
        SoergelComplex { sys: sys.clone(), start: 0, terms: vec![vec![obj]], diffs: vec![] }
    }

    pub fn sys(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.iter().all(|t| t.is_empty())
    }

    pub fn term_rank(&self, k: usize) -> usize {
        self.terms[k].iter().map(|o| o.module.rank()).sum()
    }

    pub fn offsets(&self, k: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.terms[k].len() + 1);
        let mut acc = 0;
        out.push(0);
        for o in &self.terms[k] {
            acc += o.module.rank();
            out.push(acc);
        }
        out
    }

    pub fn term_degrees(&self, k: usize) -> Vec<i32> {
        self.terms[k].iter().flat_map(|o| o.module.degrees().iter().copied()).collect()
    }

    /// The component of diffs[k] from object a of term k to object b of term k + 1.
    pub fn block(&self, k: usize, b: usize, a: usize) -> PolyMatrix {
        let (ro, co) = (self.offsets(k + 1), self.offsets(k));
        let rows: Vec<usize> = (ro[b]..ro[b + 1]).collect();
        let cols: Vec<usize> = (co[a]..co[a + 1]).collect();
        self.diffs[k].submatrix(&rows, &cols)
    }

    pub fn d_squared_zero(&self) -> bool {
        self.diffs.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    /// Every differential is homogeneous of degree 0.
    pub fn degree_zero(&self) -> bool {
        (0..self.diffs.len()).all(|k| self.diffs[k].is_graded(&self.term_degrees(k + 1), &self.term_degrees(k), 0))
    }

    /// Every differential commutes with the left actions.
    pub fn bimodule_maps(&self) -> bool {
        (0..self.diffs.len()).all(|k| {
            let src = direct_sum(&self.sys, self.terms[k].iter().map(|o| &o.module));
            let tgt = direct_sum(&self.sys, self.terms[k + 1].iter().map(|o| &o.module));
            FreeBimodule::is_bimodule_map(&src, &tgt, &self.diffs[k], 0)
        })
    }

    /// Drops empty terms at both ends.
    pub fn trimmed(mut self) -> Self {
        while self.terms.len() > 1 && self.terms[0].is_empty() {
            self.terms.remove(0);
            self.diffs.remove(0);
            self.start += 1;
        }
        while self.terms.len() > 1 && self.terms.last().unwrap().is_empty() {
            self.terms.pop();
            self.diffs.pop();
        }
        self
    }

    /// Termwise reduction B ↦ B̄ as a complex of graded vector spaces.
    pub fn reduced_differentials(&self) -> Vec<Matrix> {
        self.diffs.iter().map(|d| d.constant_part()).collect()
    }

    /// dim H^k in each internal degree of the termwise reduction: (cohomological degree, internal degree, dim).
    pub fn reduced_cohomology(&self) -> Vec<(i32, i32, usize)> {
        let f = self.sys.field();
        let red = self.reduced_differentials();
        let mut out = Vec::new();
        for k in 0..self.terms.len() {
            let degs = self.term_degrees(k);
            let mut internal: Vec<i32> = degs.clone();
            internal.sort();
            internal.dedup();
            for e in internal {
                let cols: Vec<usize> = (0..degs.len()).filter(|&c| degs[c] == e).collect();
                let out_rank = if k < red.len() {
                    let nd = self.term_degrees(k + 1);
                    let rows: Vec<usize> = (0..nd.len()).filter(|&r| nd[r] == e).collect();
                    if rows.is_empty() { 0 } else { red[k].submatrix(&rows, &cols).rank() }
                } else {
                    0
                };
                let in_rank = if k > 0 {
                    let pd = self.term_degrees(k - 1);
                    let src: Vec<usize> = (0..pd.len()).filter(|&c| pd[c] == e).collect();
                    if src.is_empty() { 0 } else { red[k - 1].submatrix(&cols, &src).rank() }
                } else {
                    0
                };
                let h = cols.len() - out_rank - in_rank;
                if h > 0 {
                    out.push((self.start + k as i32, e, h));
                }
            }
        }
        let _ = f;
        out
    }
}

/// Direct sum of free bimodules without forms.
pub fn direct_sum<'a>(sys: &Arc<CoxeterSystem>, parts: impl Iterator<Item = &'a FreeBimodule>) -> FreeBimodule {
    let parts: Vec<&FreeBimodule> = parts.collect();
    let (f, nv) = (sys.field(), sys.rep_dim());
    let sizes: Vec<usize> = parts.iter().map(|p| p.rank()).collect();
    let degrees = parts.iter().flat_map(|p| p.degrees().iter().copied()).collect();
    let left = (0..nv)
        .map(|v| {
            let rows: Vec<Vec<Option<PolyMatrix>>> = (0..parts.len())
                .map(|i| (0..parts.len()).map(|j| (i == j).then(|| parts[i].left(v).clone())).collect())
                .collect();
            PolyMatrix::blocks(f, nv, &sizes, &sizes, &rows)
        })
        .collect();
    FreeBimodule::new(sys.clone(), degrees, left, None)
}

/// f ⊗ id_N for f : M → M′, in the bases e_i ⊗ n_j at index j·rank + i.
pub fn tensor_map_left(f: &PolyMatrix, n: &FreeBimodule) -> PolyMatrix {
    let (rm2, rm) = (f.rows(), f.cols());
    let rn = n.rank();
    let mut out = PolyMatrix::zeros(f.field(), f.nvars(), rm2 * rn, rm * rn);
    let mut cache: HashMap<Poly, PolyMatrix> = HashMap::new();
    for k in 0..rm2 {
        for i in 0..rm {
            let p = f.get(k, i);
            if p.is_zero() {
                continue;
            }
            let block = cache.entry(p.clone()).or_insert_with(|| n.left_poly(p)).clone();
            for l in 0..rn {
                for j in 0..rn {
                    let q = block.get(l, j);
                    if !q.is_zero() {
                        out.set(l * rm2 + k, j * rm + i, q.clone());
                    }
                }
            }
        }
    }
    out
}

/// id_M ⊗ g for g : N → N′.
pub fn tensor_map_right(m: &FreeBimodule, g: &PolyMatrix) -> PolyMatrix {
    let rm = m.rank();
    let (rn2, rn) = (g.rows(), g.cols());
    let mut out = PolyMatrix::zeros(g.field(), g.nvars(), rn2 * rm, rn * rm);
    for l in 0..rn2 {
        for j in 0..rn {
            let q = g.get(l, j);
            if q.is_zero() {
                continue;
            }
            for i in 0..rm {
                out.set(l * rm + i, j * rm + i, q.clone());
            }
        }
    }
    out
}

/// Total complex of F ⊗ G with d = d_F ⊗ id + (−1)^i id ⊗ d_G on F^i ⊗ G^j.
pub fn complex_tensor(a: &SoergelComplex, b: &SoergelComplex) -> Result<SoergelComplex, RouquierError> {
    let sys = a.sys.clone();
    let (f, nv) = (sys.field(), sys.rep_dim());
    let (na, nb) = (a.terms.len(), b.terms.len());
    let nt = na + nb - 1;
    // objects of total term t: (i, j, p, q) with i + j = t
    let mut index: Vec<Vec<(usize, usize, usize, usize)>> = vec![Vec::new(); nt];
    let mut terms: Vec<Vec<Object>> = vec![Vec::new(); nt];
    for i in 0..na {
        for j in 0..nb {
            for (p, op) in a.terms[i].iter().enumerate() {
                for (q, oq) in b.terms[j].iter().enumerate() {
                    index[i + j].push((i, j, p, q));
                    terms[i + j].push(Object { label: op.label.tensor(&oq.label), module: op.module.tensor(&oq.module) });
                }
            }
        }
    }
    let mut diffs = Vec::with_capacity(nt.saturating_sub(1));
    for t in 0..nt.saturating_sub(1) {
        let row_sizes: Vec<usize> = terms[t + 1].iter().map(|o| o.module.rank()).collect();
        let col_sizes: Vec<usize> = terms[t].iter().map(|o| o.module.rank()).collect();
        let mut grid: Vec<Vec<Option<PolyMatrix>>> = vec![vec![None; col_sizes.len()]; row_sizes.len()];
        for (c, &(i, j, p, q)) in index[t].iter().enumerate() {
            let sign = if (a.start + i as i32).rem_euclid(2) == 0 { 1 } else { -1 };
            for (r, &(i2, j2, p2, q2)) in index[t + 1].iter().enumerate() {
                if i2 == i + 1 && j2 == j && q2 == q {
                    let blk = a.block(i, p2, p);
                    if !blk.is_zero() {
                        grid[r][c] = Some(tensor_map_left(&blk, &b.terms[j][q].module));
                    }
                } else if i2 == i && j2 == j + 1 && p2 == p {
                    let blk = b.block(j, q2, q);
                    if !blk.is_zero() {
                        let m = tensor_map_right(&a.terms[i][p].module, &blk);
                        grid[r][c] = Some(if sign == 1 { m } else { m.scale(&f.from_int(-1)) });
                    }
                }
            }
        }
        diffs.push(PolyMatrix::blocks(f, nv, &row_sizes, &col_sizes, &grid));
    }
    let out = SoergelComplex::new(sys, a.start + b.start, terms, diffs)?;
    if !out.d_squared_zero() {
        return Err(RouquierError::NotAComplex("tensor product".into()));
    }
    Ok(out)
}

/// Replaces every object B_zB_s(k) by its catalogued summands ⊕ B_y(k + shift).
pub fn decompose_terms(cat: &Catalogue, c: &SoergelComplex) -> Result<SoergelComplex, RouquierError> {
    let sys = c.sys.clone();
    let ideal = cat.ideal();
    let (f, nv) = (sys.field(), sys.rep_dim());
    let mut terms = Vec::with_capacity(c.terms.len());
    // per term: (projection old → new, inclusion new → old)
    let mut maps: Vec<(PolyMatrix, PolyMatrix)> = Vec::with_capacity(c.terms.len());
    for term in &c.terms {
        let mut objs = Vec::new();
        let mut proj_blocks: Vec<Vec<PolyMatrix>> = Vec::new();
        let mut incl_blocks: Vec<Vec<PolyMatrix>> = Vec::new();
        for o in term {
            if o.label.is_indecomposable() {
                let w = o.label.word().unwrap();
                let y = ideal.index_of_word(w).ok_or(RouquierError::OutsideIdeal)?;
                let m = cat.entry(y)?.module.shifted(o.label.shift);
                if m.degrees() != o.module.degrees() {
                    return Err(RouquierError::Shape(format!("object {} is not the catalogued module", o.label)));
                }
                objs.push(Object { label: o.label.clone(), module: m });
                let id = PolyMatrix::identity(f, nv, o.module.rank());
                proj_blocks.push(vec![id.clone()]);
                incl_blocks.push(vec![id]);
                continue;
            }
            if o.label.factors.len() != 2 || o.label.factors[1].len() != 1 {
                return Err(RouquierError::NotDecomposable(o.label.to_string()));
            }
            let z = ideal.index_of_word(&o.label.factors[0]).ok_or(RouquierError::OutsideIdeal)?;
            let s = o.label.factors[1][0];
            let pd = cat.product(z, s)?;
            if pd.module.degrees().iter().map(|d| d - o.label.shift).collect::<Vec<_>>() != o.module.degrees() {
                return Err(RouquierError::Shape(format!("object {} does not match B_zB_s", o.label)));
            }
            let mut pb = Vec::new();
            let mut ib = Vec::new();
            for p in &pd.pieces {
                let shift = o.label.shift + p.shift;
                let m = cat.entry(p.element)?.module.shifted(shift);
                objs.push(Object { label: Label::new(vec![ideal.word(p.element).to_vec()], shift), module: m });
                pb.push(p.proj.clone());
                ib.push(p.incl.clone());
            }
            proj_blocks.push(pb);
            incl_blocks.push(ib);
        }
        // assemble block-diagonal (per old object) projection and inclusion
        let old_sizes: Vec<usize> = term.iter().map(|o| o.module.rank()).collect();
        let new_sizes: Vec<usize> = objs.iter().map(|o| o.module.rank()).collect();
        let mut pgrid: Vec<Vec<Option<PolyMatrix>>> = vec![vec![None; old_sizes.len()]; new_sizes.len()];
        let mut igrid: Vec<Vec<Option<PolyMatrix>>> = vec![vec![None; new_sizes.len()]; old_sizes.len()];
        let mut r = 0;
        for (a, (pb, ib)) in proj_blocks.into_iter().zip(incl_blocks).enumerate() {
            for (p, i) in pb.into_iter().zip(ib) {
                pgrid[r][a] = Some(p);
                igrid[a][r] = Some(i);
                r += 1;
            }
        }
        maps.push((
            PolyMatrix::blocks(f, nv, &new_sizes, &old_sizes, &pgrid),
            PolyMatrix::blocks(f, nv, &old_sizes, &new_sizes, &igrid),
        ));
        terms.push(objs);
    }
    let diffs = (0..c.diffs.len()).map(|k| maps[k + 1].0.mul(&c.diffs[k]).mul(&maps[k].1)).collect();
    let out = SoergelComplex::new(sys, c.start, terms, diffs)?;
    if !out.d_squared_zero() {
        return Err(RouquierError::NotAComplex("after decomposing terms".into()));
    }
    Ok(out)
}

/// First isomorphism component, scanning by cohomological degree, then source object, then target object.
pub fn find_isomorphism(c: &SoergelComplex) -> Option<(usize, usize, usize, crate::numeric::Scalar)> {
    for k in 0..c.diffs.len() {
        for a in 0..c.terms[k].len() {
            for b in 0..c.terms[k + 1].len() {
                let (la, lb) = (&c.terms[k][a].label, &c.terms[k + 1][b].label);
                if la != lb || !la.is_indecomposable() {
                    continue;
                }
                let blk = c.block(k, b, a);
                if blk.is_zero() {
                    continue;
                }
                if let Some(l) = endomorphism_scalar(&blk) {
                    if !l.is_zero() {
                        return Some((k, a, b, l));
                    }
                }
            }
        }
    }
    None
}

/// Cancels a contractible pair A → B with d_{BA} = λ·id: d_{DC} ← d_{DC} − d_{DA} λ⁻¹ d_{BC}.
pub fn eliminate(c: &SoergelComplex, k: usize, a: usize, b: usize, lambda: &crate::numeric::Scalar) -> SoergelComplex {
    let (ro, co) = (c.offsets(k + 1), c.offsets(k));
    let a_idx: Vec<usize> = (co[a]..co[a + 1]).collect();
    let c_idx: Vec<usize> = (0..c.term_rank(k)).filter(|i| !a_idx.contains(i)).collect();
    let b_idx: Vec<usize> = (ro[b]..ro[b + 1]).collect();
    let d_idx: Vec<usize> = (0..c.term_rank(k + 1)).filter(|i| !b_idx.contains(i)).collect();
    let d = &c.diffs[k];
    let inv = lambda.inverse().expect("nonzero scalar");
    let corr = d.submatrix(&d_idx, &a_idx).mul(&d.submatrix(&b_idx, &c_idx)).scale(&inv);
    let mut diffs = c.diffs.clone();
    diffs[k] = d.submatrix(&d_idx, &c_idx).sub(&corr);
    if k > 0 {
        let prev = &c.diffs[k - 1];
        diffs[k - 1] = prev.submatrix(&c_idx, &(0..prev.cols()).collect::<Vec<_>>());
    }
    if k + 1 < c.diffs.len() {
        let next = &c.diffs[k + 1];
        diffs[k + 1] = next.submatrix(&(0..next.rows()).collect::<Vec<_>>(), &d_idx);
    }
    let mut terms = c.terms.clone();
    terms[k].remove(a);
    terms[k + 1].remove(b);
    SoergelComplex { sys: c.sys.clone(), start: c.start, terms, diffs }
}

/// Gaussian elimination until no differential component is an isomorphism; d² = 0 is rechecked at each step.
pub fn minimalize(c: &SoergelComplex) -> Result<SoergelComplex, RouquierError> {
    let mut cur = c.clone();
    while let Some((k, a, b, l)) = find_isomorphism(&cur) {
        cur = eliminate(&cur, k, a, b, &l);
        if !cur.d_squared_zero() {
            return Err(RouquierError::NotAComplex(format!("after eliminating in degree {}", cur.start + k as i32)));
        }
    }
    Ok(cur.trimmed())
}

/// The cone of the identity of an object, in degrees −1 and 0.
pub fn cone_of_identity(sys: &Arc<CoxeterSystem>, obj: Object) -> SoergelComplex {
    let id = PolyMatrix::identity(sys.field(), sys.rep_dim(), obj.module.rank());
    SoergelComplex { sys: sys.clone(), start: -1, terms: vec![vec![obj.clone()], vec![obj]], diffs: vec![id] }
}
