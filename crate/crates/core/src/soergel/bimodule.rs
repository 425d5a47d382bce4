//! Graded R-bimodules that are free as right R-modules, with explicit left action and form.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::coxeter::CoxeterSystem;
use crate::invpoly::{demazure, Mono, Poly};
use crate::linalg::Matrix;
use crate::numeric::Scalar;

use super::polymatrix::{tensor_id_s, PolyMatrix};

/// A bimodule given by a homogeneous right basis e_0, …, e_{n−1}.
///
/// `left[v]` is the matrix of left multiplication by the coordinate x_v:
/// x_v·e_j = Σ_i e_i·left[v][i][j]. The optional Gram matrix holds ⟨e_i, e_j⟩ ∈ R.
#[derive(Clone)]
pub struct FreeBimodule {
    sys: Arc<CoxeterSystem>,
    degrees: Vec<i32>,
    left: Vec<PolyMatrix>,
    gram: Option<PolyMatrix>,
}

impl std::fmt::Debug for FreeBimodule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FreeBimodule(rank {}, degrees {:?})", self.rank(), self.degrees)
    }
}

impl FreeBimodule {
    pub fn new(sys: Arc<CoxeterSystem>, degrees: Vec<i32>, left: Vec<PolyMatrix>, gram: Option<PolyMatrix>) -> Self {
        assert_eq!(left.len(), sys.rep_dim());
        FreeBimodule { sys, degrees, left, gram }
    }

    /// R itself, with ⟨1, 1⟩ = 1.
    pub fn regular(sys: &Arc<CoxeterSystem>) -> Self {
        let (f, n) = (sys.field(), sys.rep_dim());
        let left = (0..n)
            .map(|v| {
                let mut m = PolyMatrix::zeros(f, n, 1, 1);
                m.set(0, 0, Poly::var(f, n, v));
                m
            })
            .collect();
        FreeBimodule::new(sys.clone(), vec![0], left, Some(PolyMatrix::identity(f, n, 1)))
    }

    /// The zero bimodule.
    pub fn zero(sys: &Arc<CoxeterSystem>) -> Self {
        let (f, n) = (sys.field(), sys.rep_dim());
        FreeBimodule::new(sys.clone(), vec![], vec![PolyMatrix::zeros(f, n, 0, 0); n], Some(PolyMatrix::zeros(f, n, 0, 0)))
    }

    pub fn sys(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn nvars(&self) -> usize {
        self.sys.rep_dim()
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn left(&self, v: usize) -> &PolyMatrix {
        &self.left[v]
    }

    pub fn gram(&self) -> Option<&PolyMatrix> {
        self.gram.as_ref()
    }

    pub fn with_gram(mut self, gram: Option<PolyMatrix>) -> Self {
        self.gram = gram;
        self
    }

    /// Left multiplication by the linear form Σ f_v x_v.
    pub fn left_linear(&self, f: &[Scalar]) -> PolyMatrix {
        let fd = self.sys.field();
        let mut out = PolyMatrix::zeros(fd, self.nvars(), self.rank(), self.rank());
        for (v, c) in f.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.left[v].scale(c));
            }
        }
        out
    }

    /// Left multiplication by an arbitrary polynomial.
    pub fn left_poly(&self, p: &Poly) -> PolyMatrix {
        let mut cache: HashMap<Mono, PolyMatrix> = HashMap::new();
        self.left_poly_cached(p, &mut cache)
    }

    pub(crate) fn left_poly_cached(&self, p: &Poly, cache: &mut HashMap<Mono, PolyMatrix>) -> PolyMatrix {
        let fd = self.sys.field();
        let n = self.rank();
        let mut out = PolyMatrix::zeros(fd, self.nvars(), n, n);
        for (m, c) in p.terms() {
            let mm = self.mono_matrix(m, cache);
            out = out.add(&mm.scale(c));
        }
        out
    }

    fn mono_matrix(&self, m: &Mono, cache: &mut HashMap<Mono, PolyMatrix>) -> PolyMatrix {
        if let Some(x) = cache.get(m) {
            return x.clone();
        }
        let out = match (0..self.nvars()).find(|&v| m[v] > 0) {
            None => PolyMatrix::identity(self.sys.field(), self.nvars(), self.rank()),
            Some(v) => {
                let mut rest = *m;
                rest[v] -= 1;
                self.left[v].mul(&self.mono_matrix(&rest, cache))
            }
        };
        cache.insert(*m, out.clone());
        out
    }

    /// B(k): the same module with every degree lowered by k.
    pub fn shifted(&self, k: i32) -> FreeBimodule {
        FreeBimodule { degrees: self.degrees.iter().map(|d| d - k).collect(), ..self.clone() }
    }

    /// B ⊗_R B_s in the basis α(e_i) = e_i ⊗ c_id, β(e_i) = e_i ⊗ c_s, with the induced form.
    pub fn induce(&self, s: usize) -> FreeBimodule {
        let sys = &self.sys;
        let degrees: Vec<i32> =
            self.degrees.iter().map(|d| d - 1).chain(self.degrees.iter().map(|d| d + 1)).collect();
        let left = self.left.iter().map(|a| tensor_id_s(sys, a, s)).collect();
        let gram = self.gram.as_ref().map(|g| induced_gram(sys, g, s));
        FreeBimodule::new(sys.clone(), degrees, left, gram)
    }

    /// M ⊗_R N with basis e_i ⊗ f_j at index j·rank(M) + i. No form is attached.
    pub fn tensor(&self, other: &FreeBimodule) -> FreeBimodule {
        let (rm, rn) = (self.rank(), other.rank());
        let fd = self.sys.field();
        let nv = self.nvars();
        let mut cache = HashMap::new();
        let mut left = Vec::with_capacity(nv);
        for v in 0..nv {
            let a = &self.left[v];
            let mut out = PolyMatrix::zeros(fd, nv, rm * rn, rm * rn);
            for k in 0..rm {
                for i in 0..rm {
                    let p = a.get(k, i);
                    if p.is_zero() {
                        continue;
                    }
                    let block = other.left_poly_cached(p, &mut cache);
                    for l in 0..rn {
                        for j in 0..rn {
                            let q = block.get(l, j);
                            if !q.is_zero() {
                                out.set(l * rm + k, j * rm + i, q.clone());
                            }
                        }
                    }
                }
            }
            left.push(out);
        }
        let mut degrees = Vec::with_capacity(rm * rn);
        for j in 0..rn {
            for i in 0..rm {
                degrees.push(self.degrees[i] + other.degrees[j]);
            }
        }
        FreeBimodule::new(self.sys.clone(), degrees, left, None)
    }

    /// Index of the unique basis element of minimal degree, if it is unique.
    pub fn bottom_index(&self) -> Option<usize> {
        let m = *self.degrees.iter().min()?;
        let idx: Vec<usize> = (0..self.rank()).filter(|&i| self.degrees[i] == m).collect();
        (idx.len() == 1).then(|| idx[0])
    }

    /// dim B̄^i for each degree i.
    pub fn graded_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for &d in &self.degrees {
            *out.entry(d).or_insert(0) += 1;
        }
        out
    }

    /// Constant part of the Gram matrix: the form on the reduction B̄.
    pub fn reduced_gram(&self) -> Option<Matrix> {
        self.gram.as_ref().map(|g| g.constant_part())
    }

    /// Checks commuting left actions, grading of every matrix, symmetry and invariance of the form.
    pub fn check_structure(&self) -> Result<(), String> {
        let d = &self.degrees;
        for (v, a) in self.left.iter().enumerate() {
            if !a.is_graded(d, d, 2) {
                return Err(format!("left action of x{v} is not homogeneous of degree 2"));
            }
            for (w, b) in self.left.iter().enumerate().skip(v + 1) {
                if a.mul(b) != b.mul(a) {
                    return Err(format!("left actions of x{v} and x{w} do not commute"));
                }
            }
        }
        if let Some(g) = &self.gram {
            let neg: Vec<i32> = d.iter().map(|x| -x).collect();
            if !g.is_graded(&neg, d, 0) {
                return Err("form is not graded".into());
            }
            if *g != g.transpose() {
                return Err("form is not symmetric".into());
            }
            for (v, a) in self.left.iter().enumerate() {
                if a.transpose().mul(g) != g.mul(a) {
                    return Err(format!("form is not invariant under x{v}"));
                }
            }
        }
        Ok(())
    }

    /// True if M commutes with the left actions and has the expected entry degrees.
    pub fn is_bimodule_map(src: &FreeBimodule, tgt: &FreeBimodule, m: &PolyMatrix, degree: i32) -> bool {
        if m.rows() != tgt.rank() || m.cols() != src.rank() {
            return false;
        }
        if !m.is_graded(tgt.degrees(), src.degrees(), degree) {
            return false;
        }
        (0..src.nvars()).all(|v| tgt.left[v].mul(m) == m.mul(&src.left[v]))
    }
}

/// Gram of B·B_s from that of B: ⟨α,α⟩ = ∂_s G, ⟨α,β⟩ = G, ⟨β,β⟩ = G·α_s.
pub fn induced_gram(sys: &CoxeterSystem, g: &PolyMatrix, s: usize) -> PolyMatrix {
    let n = g.rows();
    let alpha = Poly::var(sys.field(), sys.rep_dim(), s);
    PolyMatrix::blocks(
        g.field(),
        g.nvars(),
        &[n, n],
        &[n, n],
        &[vec![Some(g.demazure(sys, s)), Some(g.clone())], vec![Some(g.clone()), Some(g.scale_poly(&alpha))]],
    )
}

/// Element of BS(x̲): right coefficients on the c_ε basis.
pub type BsElement = Vec<Poly>;

/// The Bott–Samelson bimodule of a word, in the c_ε basis.
///
/// Index ε has bit i set when the i-th slot carries c_s. The last letter
/// is the top bit, so BS(x̲s) lists α(c_ε) before β(c_ε).
#[derive(Clone, Debug)]
pub struct BsBimodule {
    word: Vec<usize>,
    module: FreeBimodule,
    suffix_left: Vec<Vec<PolyMatrix>>,
}

impl BsBimodule {
    /// Left action by pushing linear forms through the slots; form by the trace.
    pub fn build(sys: &Arc<CoxeterSystem>, word: &[usize]) -> Self {
        let m = word.len();
        let suffix_left: Vec<Vec<PolyMatrix>> = (0..=m).map(|i| push_through_left(sys, &word[i..])).collect();
        let degrees = (0..1usize << m).map(|e| 2 * e.count_ones() as i32 - m as i32).collect();
        let module = FreeBimodule::new(sys.clone(), degrees, suffix_left[0].clone(), None);
        let mut bs = BsBimodule { word: word.to_vec(), module, suffix_left };
        let gram = bs.trace_gram();
        bs.module.gram = Some(gram);
        bs
    }

    /// The same bimodule obtained by iterating B ↦ B·B_s from R, with induced forms.
    pub fn iterated_induction(sys: &Arc<CoxeterSystem>, word: &[usize]) -> FreeBimodule {
        word.iter().fold(FreeBimodule::regular(sys), |b, &s| b.induce(s))
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn module(&self) -> &FreeBimodule {
        &self.module
    }

    pub fn sys(&self) -> &Arc<CoxeterSystem> {
        self.module.sys()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn rank(&self) -> usize {
        1 << self.word.len()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.rank() - 1
    }

    /// c_ε as an element.
    pub fn basis_element(&self, eps: usize) -> BsElement {
        let (f, n) = (self.sys().field(), self.sys().rep_dim());
        let mut v = vec![Poly::zero(f, n); self.rank()];
        v[eps] = Poly::one(f, n);
        v
    }

    /// Product c_ε·c_ε′ in the commutative ring R ⊗_{R^{s_1}} ⋯ ⊗ R.
    pub fn basis_product(&self, a: usize, b: usize) -> BsElement {
        let sys = self.sys().clone();
        let (f, n) = (sys.field(), sys.rep_dim());
        let m = self.word.len();
        let mut cur: Vec<Poly> = vec![Poly::one(f, n)];
        for i in (0..m).rev() {
            let (x, y) = (a >> i & 1, b >> i & 1);
            let inner = if x == 1 && y == 1 {
                let amat = &self.suffix_left[i + 1][self.word[i]];
                apply(amat, &cur)
            } else {
                cur
            };
            let bit = x | y;
            let mut next = vec![Poly::zero(f, n); inner.len() * 2];
            for (k, p) in inner.into_iter().enumerate() {
                next[(k << 1) | bit] = p;
            }
            cur = next;
        }
        cur
    }

    /// Product of two elements.
    pub fn multiply(&self, a: &BsElement, b: &BsElement) -> BsElement {
        let (f, n) = (self.sys().field(), self.sys().rep_dim());
        let mut out = vec![Poly::zero(f, n); self.rank()];
        for (i, p) in a.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (j, q) in b.iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                let pq = p.mul(q);
                for (k, r) in self.basis_product(i, j).iter().enumerate() {
                    if !r.is_zero() {
                        out[k] = out[k].add(&r.mul(&pq));
                    }
                }
            }
        }
        out
    }

    /// Coefficient of c_top.
    pub fn trace(&self, b: &BsElement) -> Poly {
        b[self.top()].clone()
    }

    /// ⟨a, b⟩ = Tr(a·b).
    pub fn intersection_form(&self, a: &BsElement, b: &BsElement) -> Poly {
        self.trace(&self.multiply(a, b))
    }

    /// Left multiplication of an element by a linear form.
    pub fn left_mul_linear(&self, f: &[Scalar], b: &BsElement) -> BsElement {
        apply(&self.module.left_linear(f), b)
    }

    fn trace_gram(&self) -> PolyMatrix {
        let (f, n) = (self.sys().field(), self.sys().rep_dim());
        let r = self.rank();
        let mut g = PolyMatrix::zeros(f, n, r, r);
        for a in 0..r {
            for b in a..r {
                let t = self.basis_product(a, b)[self.top()].clone();
                g.set(b, a, t.clone());
                g.set(a, b, t);
            }
        }
        g
    }
}

/// Matrix times a vector of right coefficients.
pub fn apply(m: &PolyMatrix, v: &[Poly]) -> Vec<Poly> {
    assert_eq!(m.cols(), v.len());
    (0..m.rows())
        .map(|r| {
            let mut acc = Poly::zero(m.field(), m.nvars());
            for (c, x) in v.iter().enumerate() {
                let a = m.get(r, c);
                if !a.is_zero() && !x.is_zero() {
                    acc = acc.add(&a.mul(x));
                }
            }
            acc
        })
        .collect()
}

/// Left action of each coordinate on BS(word), by pushing the linear form through the slots.
fn push_through_left(sys: &Arc<CoxeterSystem>, word: &[usize]) -> Vec<PolyMatrix> {
    let (f, n) = (sys.field(), sys.rep_dim());
    let m = word.len();
    let r = 1usize << m;
    (0..n)
        .map(|v| {
            let mut out = PolyMatrix::zeros(f, n, r, r);
            for eps in 0..r {
                let mut g: Vec<Scalar> = (0..n).map(|u| if u == v { f.one() } else { f.zero() }).collect();
                for (i, &s) in word.iter().enumerate() {
                    if eps >> i & 1 == 0 {
                        let c = sys.eval_coroot(s, &g);
                        if !c.is_zero() {
                            out.add_to(eps | 1 << i, eps, &Poly::constant(f, n, c));
                        }
                        g = sys.reflect(s, &g);
                    }
                }
                out.add_to(eps, eps, &Poly::linear(f, &g));
            }
            out
        })
        .collect()
}

/// The breaking-Lefschetz identity on a basis of BS(x̲):
/// ρ·b − b·(x^{−1}ρ) = Σ_i γ_i χ_i(φ_i(b)). Returns the first failing basis index.
pub fn breaking_lefschetz_check(bs: &BsBimodule, rho: &[Scalar]) -> Result<(), usize> {
    let sys = bs.sys().clone();
    let (f, n) = (sys.field(), sys.rep_dim());
    let word = bs.word();
    let m = word.len();
    // γ_i and x^{−1}ρ
    let mut gammas = Vec::with_capacity(m);
    let mut cur = rho.to_vec();
    for &s in word {
        gammas.push(sys.eval_coroot(s, &cur));
        cur = sys.reflect(s, &cur);
    }
    let xinv_rho = Poly::linear(f, &cur);
    let lrho = bs.module().left_linear(rho);
    for eps in 0..bs.rank() {
        let b = bs.basis_element(eps);
        let lhs: Vec<Poly> = apply(&lrho, &b).iter().zip(&b).map(|(p, q)| p.sub(&q.mul(&xinv_rho))).collect();
        let mut rhs = vec![Poly::zero(f, n); bs.rank()];
        for i in 0..m {
            // φ_i: multiply slot i out. On c_ε this deletes slot i (c_id ↦ 1, c_s ↦ ½α_s pushed right).
            let phi = multiply_out(bs, eps, i);
            // χ_i: reinsert c_{s_i} in slot i.
            for (k, p) in phi.into_iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                let low = k & ((1 << i) - 1);
                let high = k >> i;
                let idx = low | 1 << i | high << (i + 1);
                rhs[idx] = rhs[idx].add(&p.scale(&gammas[i]));
            }
        }
        if lhs != rhs {
            return Err(eps);
        }
    }
    Ok(())
}

/// φ_i(c_ε) in BS of the word with slot i deleted.
///
/// c_id = 1⊗1 ↦ 1 and c_s = ½(α_s⊗1 + 1⊗α_s) ↦ α_s; the α_s is moved to the right
/// through the later slots by the left action of the suffix.
pub fn multiply_out(bs: &BsBimodule, eps: usize, i: usize) -> BsElement {
    let sys = bs.sys().clone();
    let (f, n) = (sys.field(), sys.rep_dim());
    let word = bs.word();
    let s = word[i];
    let low = eps & ((1 << i) - 1);
    let high = eps >> (i + 1);
    let m2 = word.len() - 1;
    let mut out = vec![Poly::zero(f, n); 1 << m2];
    if eps >> i & 1 == 0 {
        out[low | high << i] = Poly::one(f, n);
        return out;
    }
    // α_s placed between slot i−1 and slot i+1: acts on the suffix word[i+1..] from the left.
    let suffix = &bs.suffix_left[i + 1][s];
    let mut sv = vec![Poly::zero(f, n); 1 << (word.len() - i - 1)];
    sv[high] = Poly::one(f, n);
    let moved = apply(suffix, &sv);
    for (h, p) in moved.into_iter().enumerate() {
        if !p.is_zero() {
            out[low | h << i] = p;
        }
    }
    out
}

/// Checks the induced-form relations between ⟨−,−⟩_{B·B_s} and ⟨−,−⟩_B; returns a witness pair on failure.
pub fn induced_form_check(b: &FreeBimodule, bbs: &FreeBimodule, s: usize) -> Result<(), (usize, usize)> {
    let sys = b.sys();
    let g = b.gram().expect("form on B");
    let h = bbs.gram().expect("form on B·B_s");
    let n = b.rank();
    let alpha = Poly::var(sys.field(), sys.rep_dim(), s);
    for i in 0..n {
        for j in 0..n {
            let gij = g.get(i, j);
            let d = demazure(sys, s, gij).map_err(|_| (i, j))?;
            if *h.get(i, j) != d || *h.get(i, n + j) != *gij || *h.get(n + i, n + j) != gij.mul(&alpha) {
                return Err((i, j));
            }
        }
    }
    Ok(())
}

/// Graded dimension of B̄ as a map degree ↦ dim, from (v+v^{−1})^m.
pub fn bs_expected_dims(m: usize) -> BTreeMap<i32, usize> {
    let mut out = BTreeMap::new();
    for k in 0..=m {
        let binom = (0..k).fold(1usize, |acc, j| acc * (m - j) / (j + 1));
        out.insert(2 * k as i32 - m as i32, binom);
    }
    out
}
