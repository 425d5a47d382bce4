//! Graded spaces with a symmetric form and a degree-2 operator.

use std::collections::BTreeMap;

use crate::linalg::{signature, Matrix};
use crate::numeric::{FieldDescriptor, Scalar};

use super::HodgeError;

/// A graded finite-dimensional space with a graded symmetric form and a degree-2 operator L.
///
/// The space is stored in one coordinate system; `degrees[k]` is the degree of basis vector k.
/// `gram[(a, b)]` vanishes unless the degrees of a and b sum to zero, and `l[(a, b)]`
/// vanishes unless deg a = deg b + 2.
#[derive(Clone, Debug)]
pub struct LefschetzDatum {
    field: &'static FieldDescriptor,
    degrees: Vec<i32>,
    gram: Matrix,
    l: Matrix,
}

/// Inertia triple (positive, negative, zero).
pub type Inertia = (usize, usize, usize);

impl LefschetzDatum {
    pub fn new(field: &'static FieldDescriptor, degrees: Vec<i32>, gram: Matrix, l: Matrix) -> Result<Self, HodgeError> {
        let n = degrees.len();
        if gram.rows() != n || gram.cols() != n || l.rows() != n || l.cols() != n {
            return Err(HodgeError::Shape(format!("{n} basis vectors, form {}x{}, operator {}x{}", gram.rows(), gram.cols(), l.rows(), l.cols())));
        }
        for a in 0..n {
            for b in 0..n {
                if !gram[(a, b)].is_zero() && degrees[a] + degrees[b] != 0 {
                    return Err(HodgeError::NotGraded(format!("form pairs degrees {} and {}", degrees[a], degrees[b])));
                }
                if !l[(a, b)].is_zero() && degrees[a] != degrees[b] + 2 {
                    return Err(HodgeError::NotGraded(format!("operator maps degree {} to {}", degrees[b], degrees[a])));
                }
            }
        }
        Ok(LefschetzDatum { field, degrees, gram, l })
    }

    pub fn field(&self) -> &'static FieldDescriptor {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn operator(&self) -> &Matrix {
        &self.l
    }

    /// The same space and form with another operator.
    pub fn with_operator(&self, l: Matrix) -> Result<Self, HodgeError> {
        LefschetzDatum::new(self.field, self.degrees.clone(), self.gram.clone(), l)
    }

    pub fn graded_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for &d in &self.degrees {
            *out.entry(d).or_insert(0) += 1;
        }
        out
    }

    pub fn indices(&self, deg: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.degrees[k] == deg).collect()
    }

    pub fn lowest_degree(&self) -> Option<i32> {
        self.degrees.iter().copied().min()
    }

    pub fn highest_degree(&self) -> Option<i32> {
        self.degrees.iter().copied().max()
    }

    pub fn betti_symmetric(&self) -> bool {
        let g = self.graded_dims();
        g.iter().all(|(d, n)| g.get(&-d) == Some(n))
    }

    /// ⟨Lh, h'⟩ = ⟨h, Lh'⟩ and symmetry of the form.
    pub fn is_lefschetz_operator(&self) -> bool {
        self.gram.is_symmetric() && self.l.transpose().mul(&self.gram) == self.gram.mul(&self.l)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.rank() == self.dim()
    }

    /// L restricted to degree `from` as a map into degree `from + 2`.
    fn l_block(&self, from: i32) -> Matrix {
        self.l.submatrix(&self.indices(from + 2), &self.indices(from))
    }

    /// L^i : H^{from} → H^{from + 2i} in the degree bases.
    pub fn power_block(&self, i: usize, from: i32) -> Matrix {
        let src = self.indices(from);
        let mut acc = Matrix::identity(self.field, src.len());
        let mut d = from;
        for _ in 0..i {
            acc = self.l_block(d).mul(&acc);
            d += 2;
        }
        acc
    }

    /// The pairing H^{a} × H^{−a} in the degree bases.
    pub fn gram_block(&self, a: i32) -> Matrix {
        self.gram.submatrix(&self.indices(a), &self.indices(-a))
    }

    /// Matrix of the Lefschetz form (h, h') = ⟨h, L^i h'⟩ on H^{−i}.
    pub fn lefschetz_form(&self, i: usize) -> Matrix {
        let d = -(i as i32);
        self.gram_block(d).mul(&self.power_block(i, d))
    }

    /// Inertia of every Lefschetz form on H^{−i}, i ≥ 0, for degrees present.
    pub fn lefschetz_signatures(&self) -> Vec<(usize, Inertia)> {
        let Some(low) = self.lowest_degree() else { return Vec::new() };
        (0..=(-low).max(0) as usize)
            .filter(|&i| !self.indices(-(i as i32)).is_empty())
            .map(|i| (i, signature(&self.lefschetz_form(i))))
            .collect()
    }

    /// Restriction to the span of the columns of `basis` (assumed homogeneous: each column in one degree).
    ///
    /// Fails if the span is not L-stable or a column is not homogeneous.
    pub fn restrict(&self, basis: &Matrix) -> Result<LefschetzDatum, HodgeError> {
        let f = self.field;
        let k = basis.cols();
        let mut degs = Vec::with_capacity(k);
        for c in 0..k {
            let col = basis.column(c);
            let ds: Vec<i32> = (0..self.dim()).filter(|&r| !col[r].is_zero()).map(|r| self.degrees[r]).collect();
            match ds.first() {
                Some(&d) if ds.iter().all(|&x| x == d) => degs.push(d),
                _ => return Err(HodgeError::NotGraded(format!("column {c} is zero or not homogeneous"))),
            }
        }
        let lb = self.l.mul(basis);
        let l = if k == 0 {
            Matrix::zeros(f, 0, 0)
        } else {
            basis.solve(&lb).ok_or(HodgeError::NotStable)?
        };
        let gram = basis.transpose().mul(&self.gram).mul(basis);
        LefschetzDatum::new(f, degs, gram, l)
    }

    /// Orthogonal direct sum with the form of `other` scaled by `lambda`.
    pub fn direct_sum(&self, other: &LefschetzDatum, lambda: &Scalar) -> LefschetzDatum {
        let f = self.field;
        let (a, b) = (self.dim(), other.dim());
        let mut gram = Matrix::zeros(f, a + b, a + b);
        let mut l = Matrix::zeros(f, a + b, a + b);
        for r in 0..a {
            for c in 0..a {
                gram[(r, c)] = self.gram[(r, c)].clone();
                l[(r, c)] = self.l[(r, c)].clone();
            }
        }
        for r in 0..b {
            for c in 0..b {
                gram[(a + r, a + c)] = &other.gram[(r, c)] * lambda;
                l[(a + r, a + c)] = other.l[(r, c)].clone();
            }
        }
        let degrees = self.degrees.iter().chain(&other.degrees).copied().collect();
        LefschetzDatum { field: f, degrees, gram, l }
    }

    /// The same datum with all degrees lowered by k.
    pub fn shifted(&self, k: i32) -> LefschetzDatum {
        LefschetzDatum { degrees: self.degrees.iter().map(|d| d - k).collect(), ..self.clone() }
    }
}

/// Rank of L^i : H^{−i} → H^{i} for each i ≥ 0 present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HardLefschetzReport {
    pub pass: bool,
    /// (i, dim H^{−i}, rank L^i)
    pub ranks: Vec<(usize, usize, usize)>,
    /// Degree −i of the first failure.
    pub failing: Option<i32>,
}

pub fn hard_lefschetz_check(d: &LefschetzDatum) -> HardLefschetzReport {
    let mut ranks = Vec::new();
    let mut failing = None;
    let symmetric = d.betti_symmetric();
    let top = d.highest_degree().unwrap_or(0).max(-d.lowest_degree().unwrap_or(0)).max(0) as usize;
    for i in 0..=top {
        let deg = -(i as i32);
        let dim = d.indices(deg).len();
        if dim == 0 && d.indices(-deg).is_empty() {
            continue;
        }
        let rank = if dim == 0 { 0 } else { d.power_block(i, deg).rank() };
        let ok = rank == dim && dim == d.indices(-deg).len();
        if !ok && failing.is_none() {
            failing = Some(deg);
        }
        ranks.push((i, dim, rank));
    }
    HardLefschetzReport { pass: symmetric && failing.is_none(), ranks, failing }
}

/// How the global sign of the Hodge–Riemann relations is fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignConvention {
    /// Positive on the lowest nonzero degree.
    Standard,
    /// Positive on degree −d; the sign on degree −i is (−1)^{(d−i)/2}.
    Anchored(i32),
}

impl SignConvention {
    /// Positive on primitive subspaces in degrees congruent to −m + j modulo 4.
    pub fn congruence(m: i32, j: i32) -> Self {
        SignConvention::Anchored(m - j)
    }

    fn anchor(self, d: &LefschetzDatum) -> i32 {
        match self {
            SignConvention::Standard => -d.lowest_degree().unwrap_or(0),
            SignConvention::Anchored(a) => a,
        }
    }
}

/// Expected definiteness on degree −i for anchor a: ±1, or 0 when the primitive space must vanish.
pub fn expected_sign(anchor: i32, i: i32) -> i32 {
    let diff = anchor - i;
    if diff.rem_euclid(2) != 0 {
        0
    } else if (diff / 2).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    /// The degree is −i.
    pub i: usize,
    pub dim: usize,
    pub rank: usize,
    pub prim_dim: usize,
    pub signature: Inertia,
    pub expected_sign: i32,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureReport {
    pub hl: bool,
    pub pass: bool,
    pub degrees: Vec<DegreeReport>,
}

impl SignatureReport {
    /// Signs observed on nonzero primitive spaces, lowest degree first.
    pub fn signs(&self) -> Vec<i32> {
        self.degrees
            .iter()
            .filter(|r| r.prim_dim > 0)
            .map(|r| if r.signature.1 == 0 && r.signature.2 == 0 { 1 } else if r.signature.0 == 0 && r.signature.2 == 0 { -1 } else { 0 })
            .collect()
    }
}

/// Restricts each Lefschetz form to P^{−i} = ker L^{i+1} ⊂ H^{−i} and compares with the expected signs.
pub fn hodge_riemann_check(d: &LefschetzDatum, conv: SignConvention) -> SignatureReport {
    let hl = hard_lefschetz_check(d);
    let anchor = conv.anchor(d);
    let mut degrees = Vec::new();
    for &(i, dim, rank) in &hl.ranks {
        let deg = -(i as i32);
        if dim == 0 {
            continue;
        }
        let next = d.power_block(i + 1, deg);
        let prim = if next.rows() == 0 { Matrix::identity(d.field(), dim) } else { next.nullspace() };
        let form = d.lefschetz_form(i);
        let restricted = prim.transpose().mul(&form).mul(&prim);
        let sig = signature(&restricted);
        let exp = expected_sign(anchor, i as i32);
        let pass = match exp {
            0 => prim.cols() == 0,
            1 => sig.1 == 0 && sig.2 == 0,
            _ => sig.0 == 0 && sig.2 == 0,
        };
        degrees.push(DegreeReport { i, dim, rank, prim_dim: prim.cols(), signature: sig, expected_sign: exp, pass });
    }
    degrees.sort_by_key(|r| std::cmp::Reverse(r.i));
    let pass = hl.pass && degrees.iter().all(|r| r.pass);
    SignatureReport { hl: hl.pass, pass, degrees }
}

/// Lowest i with the shifted hard Lefschetz property: L^k : H^{−d−k} → H^{−d+k} bijective for all k ≥ 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedVanishing {
    pub shift: i32,
    /// Shifted hard Lefschetz holds with d = shift > 0.
    pub hypothesis: bool,
    /// Every Lefschetz form on H^{−i}, i ≥ 0, vanishes.
    pub vanishes: bool,
}

pub fn shifted_vanishing_check(d: &LefschetzDatum) -> ShiftedVanishing {
    let (Some(lo), Some(hi)) = (d.lowest_degree(), d.highest_degree()) else {
        return ShiftedVanishing { shift: 0, hypothesis: false, vanishes: true };
    };
    let shift = -(lo + hi) / 2;
    let centered = (lo + hi) % 2 == 0;
    let mut iso = centered;
    if centered {
        for k in 0..=((hi - lo) / 2) {
            let from = -shift - k;
            let a = d.indices(from).len();
            let b = d.indices(-shift + k).len();
            if a != b || (a > 0 && d.power_block(k as usize, from).rank() != a) {
                iso = false;
            }
        }
    }
    let vanishes = (0..=(-lo).max(0) as usize).all(|i| d.indices(-(i as i32)).is_empty() || d.lefschetz_form(i).is_zero());
    ShiftedVanishing { shift, hypothesis: iso && shift > 0, vanishes }
}

/// Checks the hypotheses and conclusion of the weak Lefschetz substitute for φ : V → W(1).
///
/// `phi` has rows indexed by W and columns by V and must raise degree by one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakLefschetz {
    pub graded: bool,
    pub injective_below: bool,
    pub isometry: bool,
    pub w_hodge_riemann: bool,
    /// L^i : V^{−i} → V^{i} injective for all i ≥ 0.
    pub conclusion: bool,
}

pub fn weak_lefschetz_substitute(v: &LefschetzDatum, w: &LefschetzDatum, phi: &Matrix) -> WeakLefschetz {
    let mut graded = phi.rows() == w.dim() && phi.cols() == v.dim();
    if graded {
        for r in 0..phi.rows() {
            for c in 0..phi.cols() {
                if !phi[(r, c)].is_zero() && w.degrees()[r] != v.degrees()[c] + 1 {
                    graded = false;
                }
            }
        }
    }
    let mut injective_below = true;
    if graded {
        for deg in v.graded_dims().keys().copied().filter(|&d| d <= -1) {
            let cols = v.indices(deg);
            let rows = w.indices(deg + 1);
            if phi.submatrix(&rows, &cols).rank() != cols.len() {
                injective_below = false;
            }
        }
    }
    let isometry = graded && phi.transpose().mul(w.gram()).mul(phi) == v.gram().mul(v.operator());
    let w_hodge_riemann = hodge_riemann_check(w, SignConvention::Standard).pass;
    let low = v.lowest_degree().unwrap_or(0);
    let conclusion = (0..=(-low).max(0) as usize).all(|i| {
        let n = v.indices(-(i as i32)).len();
        n == 0 || v.power_block(i, -(i as i32)).rank() == n
    });
    WeakLefschetz { graded, injective_below, isometry, w_hodge_riemann, conclusion }
}
