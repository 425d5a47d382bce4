//! Dense exact linear algebra over ℚ(θ).

use std::fmt;

use crate::numeric::{FieldDescriptor, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: &'static FieldDescriptor,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::hash::Hash for Matrix {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

impl Matrix {
    pub fn zeros(field: &'static FieldDescriptor, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &'static FieldDescriptor, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(field: &'static FieldDescriptor, rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data: Vec<Scalar> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c, "ragged rows");
        Matrix { field, rows: r, cols: c, data }
    }

    pub fn from_columns(field: &'static FieldDescriptor, nrows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn field(&self) -> &'static FieldDescriptor {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        let t = a * b;
                        out[(i, j)] = &out[(i, j)] + &t;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m[(i, j)] = self[(r, c)].clone();
            }
        }
        m
    }

    pub fn hstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.rows, o.rows);
        let mut m = Matrix::zeros(self.field, self.rows, self.cols + o.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self[(r, c)].clone();
            }
            for c in 0..o.cols {
                m[(r, self.cols + c)] = o[(r, c)].clone();
            }
        }
        m
    }

    pub fn vstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix { field: self.field, rows: self.rows + o.rows, cols: self.cols, data }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].inverse().expect("nonzero pivot");
            for j in c..self.cols {
                if !self[(r, j)].is_zero() {
                    self[(r, j)] = &self[(r, j)] * &inv;
                }
            }
            let pivot_row: Vec<(usize, Scalar)> =
                (c..self.cols).filter(|&j| !self[(r, j)].is_zero()).map(|j| (j, self[(r, j)].clone())).collect();
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for (j, v) in &pivot_row {
                    let t = &f * v;
                    self[(i, *j)] = &self[(i, *j)] - &t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Basis of the right kernel {x : A x = 0}, as columns of the result.
    pub fn nullspace(&self) -> Matrix {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(self.field, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out[(fc, k)] = self.field.one();
            for (i, &pc) in pivots.iter().enumerate() {
                out[(pc, k)] = -&m[(i, fc)];
            }
        }
        out
    }

    /// Solves A X = B; `None` if inconsistent. Free variables are set to zero.
    pub fn solve(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, b.rows);
        let mut aug = self.hstack(b);
        let pivots = aug.rref_in_place();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(pc, j)] = aug[(i, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let x = self.solve(&Matrix::identity(self.field, self.rows))?;
        if self.rank() == self.rows {
            Some(x)
        } else {
            None
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }
}

/// Inertia (p, n, z) of a symmetric matrix by congruence pivoting.
///
/// A zero diagonal with a nonzero off-diagonal entry a_ij is handled by the
/// congruence e_i ← e_i + e_j, which puts 2a_ij on the diagonal.
pub fn signature(g: &Matrix) -> (usize, usize, usize) {
    assert!(g.is_symmetric(), "signature of a non-symmetric matrix");
    let n = g.rows();
    let mut a = g.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let (mut p, mut q) = (0, 0);
    while !active.is_empty() {
        let piv = active.iter().copied().find(|&i| !a[(i, i)].is_zero());
        let piv = match piv {
            Some(i) => i,
            None => {
                let mut found = None;
                'outer: for (x, &i) in active.iter().enumerate() {
                    for &j in &active[x + 1..] {
                        if !a[(i, j)].is_zero() {
                            found = Some((i, j));
                            break 'outer;
                        }
                    }
                }
                let Some((i, j)) = found else { break };
                for &k in &active {
                    let v = &a[(i, k)] + &a[(j, k)];
                    a[(i, k)] = v;
                }
                for &k in &active {
                    let v = &a[(k, i)] + &a[(k, j)];
                    a[(k, i)] = v;
                }
                i
            }
        };
        let d = a[(piv, piv)].clone();
        match d.sign() {
            1 => p += 1,
            -1 => q += 1,
            _ => unreachable!("pivot is nonzero"),
        }
        let inv = d.inverse().expect("nonzero pivot");
        active.retain(|&k| k != piv);
        let col: Vec<(usize, Scalar)> =
            active.iter().filter(|&&k| !a[(k, piv)].is_zero()).map(|&k| (k, a[(k, piv)].clone())).collect();
        for (x, (k, akp)) in col.iter().enumerate() {
            let f = akp * &inv;
            for (l, alp) in &col[x..] {
                let t = &f * alp;
                let v = &a[(*k, *l)] - &t;
                a[(*l, *k)] = v.clone();
                a[(*k, *l)] = v;
            }
        }
    }
    (p, q, n - p - q)
}

/// Incrementally maintained reduced row basis of a subspace of K^n.
#[derive(Clone)]
pub struct RowBasis {
    field: &'static FieldDescriptor,
    n: usize,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl RowBasis {
    pub fn new(field: &'static FieldDescriptor, n: usize) -> Self {
        RowBasis { field, n, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Reduces `v` against the basis, returning the residual.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    v[j] = &v[j] - &(&f * x);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns true if the dimension grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.n);
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inverse().unwrap();
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (j, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    row[j] = &row[j] - &(&f * x);
                }
            }
        }
        self.rows.push((p, r));
        true
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    pub fn basis(&self) -> Vec<Vec<Scalar>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }

    /// Right kernel of the span, i.e. vectors x with ⟨row, x⟩ = 0 for all rows.
    pub fn annihilator(&self) -> Matrix {
        if self.rows.is_empty() {
            return Matrix::identity(self.field, self.n);
        }
        Matrix::from_rows(self.field, self.basis()).nullspace()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::field_create;

    #[test]
    fn basic_signatures() {
        let f = field_create(5);
        let d = Matrix::from_rows(f, vec![vec![f.one(), f.zero()], vec![f.zero(), f.from_int(-1)]]);
        assert_eq!(signature(&d), (1, 1, 0));
        let h = Matrix::from_rows(f, vec![vec![f.zero(), f.one()], vec![f.one(), f.theta()]]);
        assert_eq!(signature(&h), (1, 1, 0));
        assert_eq!(signature(&Matrix::zeros(f, 3, 3)), (0, 0, 3));
    }

    #[test]
    fn kernel_and_solve() {
        let f = field_create(3);
        let i = |x: i64| f.from_int(x);
        let a = Matrix::from_rows(f, vec![vec![i(1), i(2), i(3)], vec![i(2), i(4), i(6)]]);
        let k = a.nullspace();
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());
        let b = Matrix::from_rows(f, vec![vec![i(1)], vec![i(3)]]);
        assert!(a.solve(&b).is_none());
    }
}
