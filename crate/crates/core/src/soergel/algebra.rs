//! Degree-zero endomorphism algebras, radicals, idempotents and their images.

use crate::linalg::{Matrix, RowBasis};
use crate::numeric::Scalar;

use super::bimodule::FreeBimodule;
use super::hom::{hom_space, MapSpace};
use super::polymatrix::{graded_inverse, PolyMatrix};
use super::SoergelError;

/// A direct summand realized as a free bimodule, with inclusion into and projection from an ambient module.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: FreeBimodule,
    /// ambient × rank
    pub incl: PolyMatrix,
    /// rank × ambient
    pub proj: PolyMatrix,
    /// (element, shift) once identified.
    pub label: Option<(usize, i32)>,
}

impl Summand {
    /// The whole module as a summand of itself.
    pub fn whole(b: &FreeBimodule) -> Self {
        let (f, nv) = (b.sys().field(), b.nvars());
        Summand {
            module: b.clone(),
            incl: PolyMatrix::identity(f, nv, b.rank()),
            proj: PolyMatrix::identity(f, nv, b.rank()),
            label: None,
        }
    }

    pub fn idempotent(&self) -> PolyMatrix {
        self.incl.mul(&self.proj)
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }
}

/// Realizes the image of a degree-0 idempotent e on B as a free bimodule.
///
/// The columns of e over pivot columns of its constant part form a right basis
/// of the image; a graded inverse on matching rows gives the projection.
pub fn realize_image(b: &FreeBimodule, e: &PolyMatrix) -> Result<Summand, SoergelError> {
    let sys = b.sys();
    let (f, nv) = (sys.field(), sys.rep_dim());
    let e0 = e.constant_part();
    let mut r = e0.clone();
    let cols = r.rref_in_place();
    if cols.is_empty() {
        return Ok(Summand {
            module: FreeBimodule::zero(sys),
            incl: PolyMatrix::zeros(f, nv, b.rank(), 0),
            proj: PolyMatrix::zeros(f, nv, 0, b.rank()),
            label: None,
        });
    }
    let sub = e0.submatrix(&(0..e0.rows()).collect::<Vec<_>>(), &cols);
    let mut t = sub.transpose();
    let rows = t.rref_in_place();
    let all: Vec<usize> = (0..b.rank()).collect();
    let incl = e.submatrix(&all, &cols);
    let q = e.submatrix(&rows, &cols);
    let qinv = graded_inverse(&q).ok_or_else(|| SoergelError::Internal("image basis is not invertible".into()))?;
    let proj = qinv.mul(&e.submatrix(&rows, &all));
    let degrees: Vec<i32> = cols.iter().map(|&c| b.degrees()[c]).collect();
    let left = (0..nv).map(|v| proj.mul(&b.left(v).mul(&incl))).collect();
    let gram = b.gram().map(|g| incl.transpose().mul(&g.mul(&incl)));
    let module = FreeBimodule::new(sys.clone(), degrees, left, gram);
    Ok(Summand { module, incl, proj, label: None })
}

/// Scalar λ with m = λ·id, or `None` if m is not scalar.
pub fn endomorphism_scalar(m: &PolyMatrix) -> Option<Scalar> {
    let n = m.rows();
    if n == 0 {
        return None;
    }
    let lambda = m.get(0, 0).constant_term();
    let id = PolyMatrix::identity(m.field(), m.nvars(), n).scale(&lambda);
    (*m == id).then_some(lambda)
}

/// The algebra End⁰(B) with its multiplication table.
pub struct EndAlgebra {
    pub space: MapSpace,
    /// mult[a][b] = coordinates of basis_a ∘ basis_b
    pub mult: Vec<Vec<Vec<Scalar>>>,
}

impl EndAlgebra {
    pub fn new(b: &FreeBimodule) -> Self {
        let f = b.sys().field();
        let space = MapSpace::new(f, hom_space(b, b, 0));
        let n = space.dim();
        let mult = (0..n)
            .map(|a| {
                (0..n)
                    .map(|c| {
                        let p = space.basis()[a].mul(&space.basis()[c]);
                        space.coords(&p).expect("End⁰ is closed under composition")
                    })
                    .collect()
            })
            .collect();
        EndAlgebra { space, mult }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let f = self.field();
        let n = self.dim();
        let mut out = vec![f.zero(); n];
        for a in 0..n {
            if x[a].is_zero() {
                continue;
            }
            for c in 0..n {
                if y[c].is_zero() {
                    continue;
                }
                let xy = &x[a] * &y[c];
                for k in 0..n {
                    if !self.mult[a][c][k].is_zero() {
                        out[k] = &out[k] + &(&xy * &self.mult[a][c][k]);
                    }
                }
            }
        }
        out
    }

    fn field(&self) -> &'static crate::numeric::FieldDescriptor {
        self.space.basis()[0].field()
    }

    /// Radical as the kernel of the trace form T(a, b) = tr(left multiplication by ab); columns are basis vectors.
    pub fn radical(&self) -> Matrix {
        let n = self.dim();
        let f = self.field();
        // tr(L_{e_k}) = Σ_c mult[k][c][c]
        let tr: Vec<Scalar> = (0..n)
            .map(|k| (0..n).fold(f.zero(), |acc, c| &acc + &self.mult[k][c][c]))
            .collect();
        let mut t = Matrix::zeros(f, n, n);
        for a in 0..n {
            for c in 0..n {
                let mut s = f.zero();
                for k in 0..n {
                    s = &s + &(&self.mult[a][c][k] * &tr[k]);
                }
                t[(a, c)] = s;
            }
        }
        t.nullspace()
    }

    /// Coordinates of the identity.
    pub fn unit(&self, b: &FreeBimodule) -> Vec<Scalar> {
        let id = PolyMatrix::identity(b.sys().field(), b.nvars(), b.rank());
        self.space.coords(&id).expect("identity is an endomorphism")
    }
}

/// Lifts an element x with x² − x in a nilpotent ideal to an idempotent by e ← 3e² − 2e³.
pub fn lift_idempotent(alg: &EndAlgebra, x: &[Scalar]) -> Result<Vec<Scalar>, SoergelError> {
    let f = alg.field();
    let mut e = x.to_vec();
    for _ in 0..64 {
        let e2 = alg.product(&e, &e);
        if e2 == e {
            return Ok(e);
        }
        let e3 = alg.product(&e2, &e);
        e = e2.iter().zip(&e3).map(|(a, b)| &(a * &f.from_int(3)) - &(b * &f.from_int(2))).collect();
    }
    Err(SoergelError::Internal("idempotent lifting did not terminate".into()))
}

/// The primitive idempotent of End⁰(B) that is the identity on the one-dimensional bottom degree.
pub fn split_top(b: &FreeBimodule) -> Result<Summand, SoergelError> {
    let bot = b.bottom_index().ok_or_else(|| SoergelError::Internal("bottom degree is not one-dimensional".into()))?;
    let alg = EndAlgebra::new(b);
    let f = b.sys().field();
    let n = alg.dim();
    // χ(a) = coefficient of e_bot in a(e_bot)
    let chi: Vec<Scalar> = alg.space.basis().iter().map(|m| m.get(bot, bot).constant_term()).collect();
    let rad = alg.radical();
    let mut rad_rows = RowBasis::new(f, n);
    for c in 0..rad.cols() {
        rad_rows.insert(&rad.column(c));
    }
    // annihilator functionals of rad: x ∈ rad ⇔ ⟨w, x⟩ = 0 for w in ann
    let ann = rad_rows.annihilator();
    let chi_m = Matrix::from_rows(f, vec![chi.clone()]);
    let ker_chi = chi_m.nullspace();
    // unknown x: χ(x) = 1, k·x ∈ rad, x·k ∈ rad for k ∈ ker χ
    let mut rows: Vec<Vec<Scalar>> = vec![chi.clone()];
    let mut rhs: Vec<Scalar> = vec![f.one()];
    for kc in 0..ker_chi.cols() {
        let k = ker_chi.column(kc);
        // linear maps x ↦ k·x and x ↦ x·k as n×n matrices
        let mut left_k = Matrix::zeros(f, n, n);
        let mut right_k = Matrix::zeros(f, n, n);
        for j in 0..n {
            let mut ej = vec![f.zero(); n];
            ej[j] = f.one();
            let kx = alg.product(&k, &ej);
            let xk = alg.product(&ej, &k);
            for i in 0..n {
                left_k[(i, j)] = kx[i].clone();
                right_k[(i, j)] = xk[i].clone();
            }
        }
        for w in 0..ann.cols() {
            let wv = ann.column(w);
            for m in [&left_k, &right_k] {
                let row: Vec<Scalar> = (0..n)
                    .map(|j| (0..n).fold(f.zero(), |acc, i| &acc + &(&wv[i] * &m[(i, j)])))
                    .collect();
                rows.push(row);
                rhs.push(f.zero());
            }
        }
    }
    let a = Matrix::from_rows(f, rows);
    let bm = Matrix::from_columns(f, rhs.len(), &[rhs]);
    let x = a.solve(&bm).ok_or_else(|| SoergelError::Internal("no central lift for the bottom character".into()))?;
    let e = lift_idempotent(&alg, &x.column(0))?;
    let em = alg.space.combine(&e);
    realize_image(b, &em)
}
