//! Dense matrices with polynomial entries, used for right-R-linear maps between free modules.

use std::fmt;

use crate::coxeter::CoxeterSystem;
use crate::invpoly::{demazure, poly_reflect, Poly};
use crate::linalg::Matrix;
use crate::numeric::{FieldDescriptor, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    field: &'static FieldDescriptor,
    nvars: usize,
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl PolyMatrix {
    pub fn zeros(field: &'static FieldDescriptor, nvars: usize, rows: usize, cols: usize) -> Self {
        PolyMatrix { field, nvars, rows, cols, data: vec![Poly::zero(field, nvars); rows * cols] }
    }

    pub fn identity(field: &'static FieldDescriptor, nvars: usize, n: usize) -> Self {
        let mut m = Self::zeros(field, nvars, n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(field, nvars));
        }
        m
    }

    /// Embeds a scalar matrix as constant polynomials.
    pub fn from_scalar(m: &Matrix, nvars: usize) -> Self {
        let f = m.field();
        let mut out = Self::zeros(f, nvars, m.rows(), m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                out.set(r, c, Poly::constant(f, nvars, m[(r, c)].clone()));
            }
        }
        out
    }

    pub fn field(&self) -> &'static FieldDescriptor {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Poly) {
        self.data[r * self.cols + c] = p;
    }

    pub fn add_to(&mut self, r: usize, c: usize, p: &Poly) {
        let i = r * self.cols + c;
        self.data[i] = self.data[i].add(p);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn column(&self, c: usize) -> Vec<Poly> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn mul(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch in PolyMatrix::mul");
        let mut out = Self::zeros(self.field, self.nvars, self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let b = o.get(k, c);
                    if !b.is_zero() {
                        out.add_to(r, c, &a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect();
        PolyMatrix { data, ..self.clone_shape() }
    }

    pub fn sub(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect();
        PolyMatrix { data, ..self.clone_shape() }
    }

    pub fn scale(&self, c: &Scalar) -> PolyMatrix {
        self.map(|p| p.scale(c))
    }

    /// Multiplies every entry by the polynomial p.
    pub fn scale_poly(&self, p: &Poly) -> PolyMatrix {
        self.map(|q| q.mul(p))
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        PolyMatrix { data: self.data.iter().map(f).collect(), ..self.clone_shape() }
    }

    fn clone_shape(&self) -> PolyMatrix {
        PolyMatrix { field: self.field, nvars: self.nvars, rows: self.rows, cols: self.cols, data: Vec::new() }
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = Self::zeros(self.field, self.nvars, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut out = Self::zeros(self.field, self.nvars, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn hstack(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.rows, o.rows);
        let mut out = Self::zeros(self.field, self.nvars, self.rows, self.cols + o.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..o.cols {
                out.set(r, self.cols + c, o.get(r, c).clone());
            }
        }
        out
    }

    pub fn vstack(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        PolyMatrix { data, rows: self.rows + o.rows, ..self.clone_shape() }
    }

    /// Block matrix from a grid of blocks; `None` entries are zero.
    pub fn blocks(
        field: &'static FieldDescriptor,
        nvars: usize,
        row_sizes: &[usize],
        col_sizes: &[usize],
        blocks: &[Vec<Option<PolyMatrix>>],
    ) -> PolyMatrix {
        let rows: usize = row_sizes.iter().sum();
        let cols: usize = col_sizes.iter().sum();
        let mut out = Self::zeros(field, nvars, rows, cols);
        let mut r0 = 0;
        for (bi, &rs) in row_sizes.iter().enumerate() {
            let mut c0 = 0;
            for (bj, &cs) in col_sizes.iter().enumerate() {
                if let Some(b) = &blocks[bi][bj] {
                    assert_eq!((b.rows, b.cols), (rs, cs), "block shape");
                    for r in 0..rs {
                        for c in 0..cs {
                            out.set(r0 + r, c0 + c, b.get(r, c).clone());
                        }
                    }
                }
                c0 += cs;
            }
            r0 += rs;
        }
        out
    }

    /// Matrix of constant terms.
    pub fn constant_part(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self.get(r, c).constant_term();
            }
        }
        out
    }

    /// Applies s to every entry.
    pub fn reflect(&self, sys: &CoxeterSystem, s: usize) -> PolyMatrix {
        self.map(|p| poly_reflect(sys, s, p))
    }

    /// Applies ∂_s to every entry.
    pub fn demazure(&self, sys: &CoxeterSystem, s: usize) -> PolyMatrix {
        self.map(|p| demazure(sys, s, p).expect("Demazure operators are exact on polynomials"))
    }

    /// True if entry (r, c) is homogeneous of degree (col_deg[c] + shift − row_deg[r]) / 2 or zero.
    pub fn is_graded(&self, row_deg: &[i32], col_deg: &[i32], shift: i32) -> bool {
        (0..self.rows).all(|r| {
            (0..self.cols).all(|c| {
                let p = self.get(r, c);
                if p.is_zero() {
                    return true;
                }
                let d = col_deg[c] + shift - row_deg[r];
                d >= 0 && d % 2 == 0 && p.is_homogeneous() && p.degree() == Some((d / 2) as u32)
            })
        })
    }
}

/// Inverse of a degree-0 graded isomorphism Q between free modules, by the terminating Neumann series.
///
/// Returns `None` if the constant part is singular or the series does not terminate.
pub fn graded_inverse(q: &PolyMatrix) -> Option<PolyMatrix> {
    assert_eq!(q.rows(), q.cols());
    let n = q.rows();
    let (f, nv) = (q.field(), q.nvars());
    let q0 = q.constant_part();
    let q0inv = PolyMatrix::from_scalar(&q0.inverse()?, nv);
    let x = q0inv.mul(&q.sub(&PolyMatrix::from_scalar(&q0, nv)));
    let mut term = PolyMatrix::identity(f, nv, n);
    let mut sum = PolyMatrix::identity(f, nv, n);
    for _ in 0..=2 * n + 2 {
        term = term.mul(&x).scale(&f.from_int(-1));
        if term.is_zero() {
            return Some(sum.mul(&q0inv));
        }
        sum = sum.add(&term);
    }
    None
}

/// Matrix of the map B ⊗ B_s → B′ ⊗ B_s induced by f: B → B′, in the α/β bases.
///
/// f(e_i) ⊗ c_id = Σ_j α(e′_j)·s(F_ji) + β(e′_j)·∂_s(F_ji), and f(e_i) ⊗ c_s = Σ_j β(e′_j)·F_ji.
pub fn tensor_id_s(sys: &CoxeterSystem, f: &PolyMatrix, s: usize) -> PolyMatrix {
    let (fd, nv) = (f.field(), f.nvars());
    let (r, c) = (f.rows(), f.cols());
    PolyMatrix::blocks(
        fd,
        nv,
        &[r, r],
        &[c, c],
        &[vec![Some(f.reflect(sys, s)), None], vec![Some(f.demazure(sys, s)), Some(f.clone())]],
    )
}
