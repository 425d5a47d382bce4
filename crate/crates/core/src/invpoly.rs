//! Polynomial functions on h with the W-action and Demazure operators.
//!
//! A polynomial of degree k in the coordinates has grading degree 2k.

use std::collections::BTreeMap;
use std::fmt;

use crate::coxeter::{CoxeterElement, CoxeterSystem, Ideal};
use crate::linalg::Matrix;
use crate::numeric::{FieldDescriptor, Rational, Scalar};

/// Exponent vector; at most eight variables.
pub type Mono = [u8; 8];

pub const MAX_VARS: usize = 8;

pub fn mono_degree(m: &Mono) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

pub fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out = [0u8; 8];
    for i in 0..8 {
        out[i] = a[i] + b[i];
    }
    out
}

/// All exponent vectors of total degree d in n variables, in increasing lexicographic order.
pub fn monomials(n: usize, d: u32) -> Vec<Mono> {
    fn rec(n: usize, i: usize, left: u32, cur: &mut Mono, out: &mut Vec<Mono>) {
        if i + 1 == n {
            cur[i] = left as u8;
            out.push(*cur);
            cur[i] = 0;
            return;
        }
        for e in 0..=left {
            cur[i] = e as u8;
            rec(n, i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push([0; 8]);
        }
        return out;
    }
    rec(n, 0, d, &mut [0; 8], &mut out);
    out.sort();
    out
}

/// Number of monomials of degree d in n variables.
pub fn monomial_count(n: usize, d: i64) -> usize {
    if d < 0 {
        return 0;
    }
    if n == 0 {
        return usize::from(d == 0);
    }
    // C(d + n − 1, n − 1)
    let (d, n) = (d as u128, n as u128);
    let mut num: u128 = 1;
    for k in 1..n {
        num = num * (d + k) / k;
    }
    num as usize
}

/// Sparse polynomial over ℚ(θ); terms sorted by exponent vector, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: &'static FieldDescriptor,
    nvars: usize,
    terms: Vec<(Mono, Scalar)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("Demazure division by the root of generator {0} is not exact")]
    InexactDivision(usize),
    #[error("the group is not finite on the enumerated ideal")]
    InfiniteGroup,
}

impl Poly {
    pub fn zero(field: &'static FieldDescriptor, nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS);
        Poly { field, nvars, terms: Vec::new() }
    }

    pub fn constant(field: &'static FieldDescriptor, nvars: usize, c: Scalar) -> Self {
        Self::monomial(field, nvars, [0; 8], c)
    }

    pub fn one(field: &'static FieldDescriptor, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn monomial(field: &'static FieldDescriptor, nvars: usize, m: Mono, c: Scalar) -> Self {
        let mut p = Self::zero(field, nvars);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    pub fn var(field: &'static FieldDescriptor, nvars: usize, i: usize) -> Self {
        let mut m = [0u8; 8];
        m[i] = 1;
        Self::monomial(field, nvars, m, field.one())
    }

    /// Σ c_i x_i.
    pub fn linear(field: &'static FieldDescriptor, coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        let mut terms: Vec<(Mono, Scalar)> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let mut m = [0u8; 8];
                m[i] = 1;
                (m, c.clone())
            })
            .collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Poly { field, nvars: n, terms }
    }

    pub fn from_map(field: &'static FieldDescriptor, nvars: usize, map: BTreeMap<Mono, Scalar>) -> Self {
        Poly { field, nvars, terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn field(&self) -> &'static FieldDescriptor {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Mono, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> Scalar {
        match self.terms.binary_search_by(|t| t.0.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&[0; 8])
    }

    /// Largest total degree of a term, None for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| mono_degree(m)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.iter().map(|(m, _)| mono_degree(m));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Terms of total degree d.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| mono_degree(m) == d).cloned().collect(),
        }
    }

    fn merge(&self, other: &Poly, sign: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let (m, c) = &other.terms[j];
                    out.push((*m, if sign { c.clone() } else { -c }));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if sign { &self.terms[i].1 + &other.terms[j].1 } else { &self.terms[i].1 - &other.terms[j].1 };
                    if !c.is_zero() {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly { field: self.field, nvars: self.nvars.max(other.nvars), terms: out }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn neg(&self) -> Poly {
        Poly { field: self.field, nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.field, self.nvars);
        }
        Poly { field: self.field, nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn scale_rational(&self, q: &Rational) -> Poly {
        self.scale(&self.field.from_rational(q.clone()))
    }

    pub fn mul_mono(&self, m: &Mono) -> Poly {
        Poly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(a, c)| (mono_mul(a, m), c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field, self.nvars.max(other.nvars));
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_mono(m).scale(c);
        }
        if self.terms.len() == 1 {
            return other.mul(self);
        }
        let mut acc: BTreeMap<Mono, Scalar> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let m = mono_mul(a, b);
                let p = x * y;
                match acc.get_mut(&m) {
                    Some(v) => *v = &*v + &p,
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        Poly::from_map(self.field, self.nvars.max(other.nvars), acc)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.field, self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Value at the point with coordinates x_i = point[i].
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate().take(self.nvars) {
                if e > 0 {
                    t = &t * &point[i].pow(e as u32);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Algebra map sending x_j to the linear form `images[j]`.
    pub fn substitute_linear(&self, images: &[Vec<Scalar>]) -> Poly {
        let lin: Vec<Poly> = images.iter().map(|c| Poly::linear(self.field, c)).collect();
        let mut powers: Vec<Vec<Poly>> = lin.iter().map(|l| vec![Poly::one(self.field, self.nvars), l.clone()]).collect();
        let mut out = Poly::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(self.field, self.nvars, c.clone());
            for j in 0..self.nvars {
                let e = m[j] as usize;
                if e == 0 {
                    continue;
                }
                while powers[j].len() <= e {
                    let next = powers[j].last().unwrap().mul(&lin[j]);
                    powers[j].push(next);
                }
                t = t.mul(&powers[j][e]);
            }
            out = out.add(&t);
        }
        out
    }

    /// Divides by x_i; fails unless every term contains x_i.
    pub fn div_var(&self, i: usize) -> Option<Poly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if m[i] == 0 {
                return None;
            }
            let mut m2 = *m;
            m2[i] -= 1;
            terms.push((m2, c.clone()));
        }
        Some(Poly { field: self.field, nvars: self.nvars, terms })
    }

    /// Coefficient vector over a list of monomials.
    pub fn coords(&self, basis: &[Mono]) -> Vec<Scalar> {
        basis.iter().map(|m| self.coeff(m)).collect()
    }

    pub fn from_coords(field: &'static FieldDescriptor, nvars: usize, basis: &[Mono], v: &[Scalar]) -> Poly {
        let map: BTreeMap<Mono, Scalar> = basis.iter().copied().zip(v.iter().cloned()).collect();
        Poly::from_map(field, nvars, map)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<String> = (0..self.nvars)
                    .filter(|&i| m[i] > 0)
                    .map(|i| if m[i] == 1 { format!("x{i}") } else { format!("x{i}^{}", m[i]) })
                    .collect();
                if vars.is_empty() {
                    format!("{c}")
                } else if c.is_one() {
                    vars.join("*")
                } else {
                    format!("{c}*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Images of the coordinate functions under w.
fn images_of(sys: &CoxeterSystem, matrix: &Matrix) -> Vec<Vec<Scalar>> {
    (0..sys.rep_dim()).map(|j| matrix.column(j)).collect()
}

/// w·f, extending the linear action multiplicatively.
pub fn poly_act(sys: &CoxeterSystem, w: &CoxeterElement, f: &Poly) -> Poly {
    f.substitute_linear(&images_of(sys, &w.matrix))
}

/// s·f for a simple reflection.
pub fn poly_reflect(sys: &CoxeterSystem, s: usize, f: &Poly) -> Poly {
    f.substitute_linear(&images_of(sys, sys.gen_matrix(s)))
}

/// ∂_s(f) = (f − s·f)/α_s.
pub fn demazure(sys: &CoxeterSystem, s: usize, f: &Poly) -> Result<Poly, PolyError> {
    let diff = f.sub(&poly_reflect(sys, s, f));
    diff.div_var(s).ok_or(PolyError::InexactDivision(s))
}

/// ∂ applied along a word, rightmost letter first.
pub fn demazure_word(sys: &CoxeterSystem, word: &[usize], f: &Poly) -> Result<Poly, PolyError> {
    let mut cur = f.clone();
    for &s in word.iter().rev() {
        cur = demazure(sys, s, &cur)?;
    }
    Ok(cur)
}

/// |W|^{-1} Σ_w w·f over a whole finite group.
pub fn reynolds_average(ideal: &Ideal, f: &Poly) -> Result<Poly, PolyError> {
    if !ideal.is_whole_group() {
        return Err(PolyError::InfiniteGroup);
    }
    let sys = ideal.system();
    let mut acc = Poly::zero(f.field(), f.nvars());
    for w in ideal.elements() {
        acc = acc.add(&poly_act(sys, w, f));
    }
    Ok(acc.scale_rational(&Rational::new(1, ideal.len() as i64)))
}

/// Matrix of f ↦ s·f − f on homogeneous polynomials of degree d, in the monomial basis.
fn reflection_minus_one(sys: &CoxeterSystem, s: usize, basis: &[Mono]) -> Matrix {
    let f = sys.field();
    let n = sys.rep_dim();
    let cols: Vec<Vec<Scalar>> = basis
        .iter()
        .map(|m| {
            let p = Poly::monomial(f, n, *m, f.one());
            poly_reflect(sys, s, &p).sub(&p).coords(basis)
        })
        .collect();
    Matrix::from_columns(f, basis.len(), &cols)
}

/// Basis of the W-invariant polynomials of degree d, as the joint kernel of s − 1 over generators.
pub fn invariants_of_degree(sys: &CoxeterSystem, d: u32) -> Vec<Poly> {
    let n = sys.rep_dim();
    let basis = monomials(n, d);
    let mut stacked: Option<Matrix> = None;
    for s in 0..sys.rank() {
        let m = reflection_minus_one(sys, s, &basis);
        stacked = Some(match stacked {
            None => m,
            Some(prev) => prev.vstack(&m),
        });
    }
    let ker = match stacked {
        Some(m) => m.nullspace(),
        None => Matrix::identity(sys.field(), basis.len()),
    };
    (0..ker.cols()).map(|c| Poly::from_coords(sys.field(), n, &basis, &ker.column(c))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{enumerate_ideal, RepChoice};

    #[test]
    fn counting() {
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomial_count(3, 2), 6);
        assert_eq!(monomial_count(2, 0), 1);
        assert_eq!(monomial_count(2, -1), 0);
    }

    #[test]
    fn demazure_basics() {
        let sys = CoxeterSystem::new(vec![vec![1, 3], vec![3, 1]], RepChoice::Geometric).unwrap();
        let f = sys.field();
        let one = Poly::one(f, 2);
        assert!(demazure(&sys, 0, &one).unwrap().is_zero());
        let a = Poly::var(f, 2, 0);
        assert_eq!(demazure(&sys, 0, &a).unwrap(), Poly::constant(f, 2, f.from_int(2)));
        let at = Poly::var(f, 2, 1);
        assert_eq!(poly_reflect(&sys, 0, &at), a.add(&at));
        assert_eq!(poly_reflect(&sys, 0, &a.mul(&a)), a.mul(&a));
    }

    #[test]
    fn invariants_a2() {
        let sys = CoxeterSystem::new(vec![vec![1, 3], vec![3, 1]], RepChoice::Geometric).unwrap();
        assert_eq!(invariants_of_degree(&sys, 1).len(), 0);
        assert_eq!(invariants_of_degree(&sys, 2).len(), 1);
        assert_eq!(invariants_of_degree(&sys, 3).len(), 1);
        let ideal = enumerate_ideal(&sys, 3).unwrap();
        let f = sys.field();
        let a = Poly::var(f, 2, 0);
        assert!(reynolds_average(&ideal, &a).unwrap().is_zero());
        let q = a.mul(&a);
        let r = reynolds_average(&ideal, &q).unwrap();
        assert_eq!(reynolds_average(&ideal, &r).unwrap(), r);
    }
}
