//! The Hecke algebra over ℤ[v^{±1}] on an enumerated ideal, with the Kazhdan–Lusztig basis.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::coxeter::{word_string, Ideal};

/// Finitely supported integer Laurent polynomial in v.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// c·v^e.
    pub fn monomial(c: i64, e: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(e, &BigInt::from(c));
        p
    }

    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    pub fn from_terms(terms: &[(i32, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, c) in terms {
            p.add_term(e, &BigInt::from(c));
        }
        p
    }

    pub fn add_term(&mut self, e: i32, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i32) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// p(v) ↦ p(v^{-1}).
    pub fn bar(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    /// v^k·p.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Value at v = 1.
    pub fn eval_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// True when every exponent is ≥ 1, i.e. p ∈ vℤ[v].
    pub fn in_v_z_v(&self) -> bool {
        self.terms.keys().all(|&e| e >= 1)
    }
}

impl std::ops::Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl std::ops::Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, &-c);
        }
        out
    }
}

impl std::ops::Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-BigInt::one())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let coeff = if a.is_one() && *e != 0 { String::new() } else { a.to_string() };
            match e {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{coeff}v")?,
                _ => write!(f, "{coeff}v^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeckeError {
    #[error("product leaves the enumerated ideal (max length {0})")]
    OutsideIdeal(usize),
    #[error("Kazhdan–Lusztig element for {0} failed its defining conditions")]
    KlCheckFailed(String),
}

/// Σ p_x H_x, indexed by positions in an [`Ideal`].
#[derive(Clone, PartialEq, Eq, Default)]
pub struct HeckeElement {
    pub coeffs: BTreeMap<usize, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The standard basis element H_x.
    pub fn standard(x: usize) -> Self {
        let mut h = Self::zero();
        h.add(x, &LaurentPoly::one());
        h
    }

    pub fn add(&mut self, x: usize, p: &LaurentPoly) {
        if p.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(x).or_default();
        *entry = &*entry + p;
        if entry.is_zero() {
            self.coeffs.remove(&x);
        }
    }

    pub fn add_scaled(&mut self, other: &HeckeElement, p: &LaurentPoly) {
        for (x, q) in &other.coeffs {
            self.add(*x, &(q * p));
        }
    }

    pub fn coeff(&self, x: usize) -> LaurentPoly {
        self.coeffs.get(&x).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, p: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, p);
        out
    }

    pub fn sum(&self, other: &HeckeElement) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &LaurentPoly::one());
        out
    }

    pub fn difference(&self, other: &HeckeElement) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &LaurentPoly::monomial(-1, 0));
        out
    }

    /// Applies p ↦ p̄ to every coefficient, without touching the basis.
    fn bar_coeffs(&self) -> Self {
        HeckeElement { coeffs: self.coeffs.iter().map(|(x, p)| (*x, p.bar())).collect() }
    }

    pub fn display(&self, ideal: &Ideal) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .rev()
            .map(|(x, p)| format!("({p})H[{}]", word_string(ideal.word(*x))))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

/// The Hecke algebra restricted to an enumerated ideal, with memoized bar images and KL basis.
pub struct Hecke {
    ideal: Arc<Ideal>,
    bar_std: Vec<HeckeElement>,
    kl: Vec<HeckeElement>,
}

impl Hecke {
    /// Builds the bar images of the standard basis and the KL basis of every element of the ideal.
    pub fn new(ideal: Arc<Ideal>) -> Result<Self, HeckeError> {
        let mut h = Hecke { ideal, bar_std: Vec::new(), kl: Vec::new() };
        let n = h.ideal.len();
        // bar(H_x) = bar(H_{xs})·(H_s + (v − v^{-1})) for s the last letter of x.
        h.bar_std.push(HeckeElement::standard(0));
        for x in 1..n {
            let s = *h.ideal.word(x).last().unwrap();
            let xs = h.ideal.right_mul(x, s).unwrap();
            let prev = h.bar_std[xs].clone();
            let mut out = h.mul_s_right(&prev, s)?;
            out.add_scaled(&prev, &LaurentPoly::from_terms(&[(1, 1), (-1, -1)]));
            h.bar_std.push(out);
        }
        h.kl.push(HeckeElement::standard(0));
        for x in 1..n {
            let word = h.ideal.word(x).to_vec();
            let s = *word.last().unwrap();
            let y = h.ideal.right_mul(x, s).unwrap();
            let mut c = h.mul_kl_s(&h.kl[y], s)?;
            // Subtract μ(z,y)·H̄_z for z < y with zs < z.
            for z in (0..y).rev() {
                if !h.ideal.element(z).is_right_descent(s) {
                    continue;
                }
                let mu = h.kl[y].coeff(z).coeff(1);
                if !mu.is_zero() {
                    let kz = h.kl[z].clone();
                    c.add_scaled(&kz, &LaurentPoly::monomial(1, 0).scale(&-mu));
                }
            }
            if !h.satisfies_kl_conditions(x, &c) {
                return Err(HeckeError::KlCheckFailed(word_string(&word)));
            }
            h.kl.push(c);
        }
        Ok(h)
    }

    pub fn ideal(&self) -> &Arc<Ideal> {
        &self.ideal
    }

    /// h·H_s.
    pub fn mul_s_right(&self, h: &HeckeElement, s: usize) -> Result<HeckeElement, HeckeError> {
        let mut out = HeckeElement::zero();
        let q = LaurentPoly::from_terms(&[(-1, 1), (1, -1)]);
        for (x, p) in &h.coeffs {
            let xs = self.ideal.right_mul(*x, s).ok_or(HeckeError::OutsideIdeal(self.ideal.max_length()))?;
            out.add(xs, p);
            if self.ideal.element(*x).is_right_descent(s) {
                out.add(*x, &(p * &q));
            }
        }
        Ok(out)
    }

    /// H_s·h.
    pub fn mul_s_left(&self, s: usize, h: &HeckeElement) -> Result<HeckeElement, HeckeError> {
        let mut out = HeckeElement::zero();
        let q = LaurentPoly::from_terms(&[(-1, 1), (1, -1)]);
        for (x, p) in &h.coeffs {
            let sx = self.ideal.left_mul(s, *x).ok_or(HeckeError::OutsideIdeal(self.ideal.max_length()))?;
            out.add(sx, p);
            if self.ideal.element(*x).is_left_descent(s) {
                out.add(*x, &(p * &q));
            }
        }
        Ok(out)
    }

    /// h·H̄_s = h·H_s + v·h.
    pub fn mul_kl_s(&self, h: &HeckeElement, s: usize) -> Result<HeckeElement, HeckeError> {
        let mut out = self.mul_s_right(h, s)?;
        out.add_scaled(h, &LaurentPoly::v());
        Ok(out)
    }

    /// The product a·b, expanding b through reduced words.
    pub fn mul(&self, a: &HeckeElement, b: &HeckeElement) -> Result<HeckeElement, HeckeError> {
        let mut out = HeckeElement::zero();
        for (y, q) in &b.coeffs {
            let mut cur = a.clone();
            for &s in self.ideal.word(*y) {
                cur = self.mul_s_right(&cur, s)?;
            }
            out.add_scaled(&cur, q);
        }
        Ok(out)
    }

    /// The ring involution with v ↦ v^{-1} and H_x ↦ H_{x^{-1}}^{-1}.
    pub fn bar(&self, h: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (x, p) in &h.coeffs {
            out.add_scaled(&self.bar_std[*x], &p.bar());
        }
        out
    }

    /// The anti-involution H_x ↦ H_{x^{-1}}, v ↦ v.
    pub fn anti(&self, h: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (x, p) in &h.coeffs {
            out.add(self.ideal.inverse(*x), p);
        }
        out
    }

    /// ε(H_w) = δ_{id,w}.
    pub fn epsilon(&self, h: &HeckeElement) -> LaurentPoly {
        h.coeff(0)
    }

    /// (h, h') = ε(a(h)·h'), evaluated literally in the algebra.
    pub fn pairing(&self, h: &HeckeElement, h2: &HeckeElement) -> Result<LaurentPoly, HeckeError> {
        Ok(self.epsilon(&self.mul(&self.anti(h), h2)?))
    }

    /// Σ_x p_x q_x, the closed form of the pairing in the standard basis.
    pub fn pairing_standard(h: &HeckeElement, h2: &HeckeElement) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (x, p) in &h.coeffs {
            if let Some(q) = h2.coeffs.get(x) {
                out = &out + &(p * q);
            }
        }
        out
    }

    pub fn kl_basis(&self, x: usize) -> &HeckeElement {
        &self.kl[x]
    }

    /// h_{y,x}, the coefficient of H_y in H̄_x.
    pub fn kl_poly(&self, y: usize, x: usize) -> LaurentPoly {
        self.kl[x].coeff(y)
    }

    /// Coefficient of v in h_{z,y}.
    pub fn mu(&self, z: usize, y: usize) -> BigInt {
        self.kl[y].coeff(z).coeff(1)
    }

    fn satisfies_kl_conditions(&self, x: usize, c: &HeckeElement) -> bool {
        if c.coeff(x) != LaurentPoly::one() {
            return false;
        }
        for (y, p) in &c.coeffs {
            if *y != x && (!p.in_v_z_v() || !self.ideal.bruhat_leq(*y, x)) {
                return false;
            }
        }
        self.bar(c) == *c
    }

    /// Re-checks both defining conditions of H̄_x.
    pub fn verify_kl(&self, x: usize) -> bool {
        self.satisfies_kl_conditions(x, &self.kl[x])
    }

    /// g_{z,x} with H_x = Σ_z g_{z,x} H̄_z.
    pub fn inverse_kl(&self, x: usize) -> BTreeMap<usize, LaurentPoly> {
        let mut rest = HeckeElement::standard(x);
        let mut out = BTreeMap::new();
        while let Some((&z, _)) = rest.coeffs.iter().next_back() {
            let c = rest.coeff(z);
            rest.add_scaled(&self.kl[z], &-&c);
            out.insert(z, c);
        }
        out
    }

    /// Expresses h in the KL basis (unitriangular inversion).
    pub fn to_kl_coords(&self, h: &HeckeElement) -> BTreeMap<usize, LaurentPoly> {
        let mut rest = h.clone();
        let mut out = BTreeMap::new();
        while let Some((&z, _)) = rest.coeffs.iter().next_back() {
            let c = rest.coeff(z);
            rest.add_scaled(&self.kl[z], &-&c);
            out.insert(z, c);
        }
        out
    }

    /// H̄_{s_1}⋯H̄_{s_m}.
    pub fn bs_character(&self, word: &[usize]) -> Result<HeckeElement, HeckeError> {
        let mut h = HeckeElement::standard(0);
        for &s in word {
            h = self.mul_kl_s(&h, s)?;
        }
        Ok(h)
    }

    /// Graded rank of Hom^•(B, B′) predicted from characters: the bar of their pairing.
    pub fn hom_graded_rank(ch: &HeckeElement, ch2: &HeckeElement) -> LaurentPoly {
        Self::pairing_standard(ch, ch2).bar()
    }

    pub fn bar_coefficients(h: &HeckeElement) -> HeckeElement {
        h.bar_coeffs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{enumerate_ideal, CoxeterSystem, RepChoice};

    fn hecke(m: Vec<Vec<u32>>, len: usize) -> Hecke {
        let sys = CoxeterSystem::new(m, RepChoice::Geometric).unwrap();
        Hecke::new(Arc::new(enumerate_ideal(&sys, len).unwrap())).unwrap()
    }

    #[test]
    fn quadratic_relation() {
        let h = hecke(vec![vec![1, 3], vec![3, 1]], 3);
        let s = h.ideal().index_of_word(&[0]).unwrap();
        let hs = HeckeElement::standard(s);
        let sq = h.mul(&hs, &hs).unwrap();
        let mut expect = HeckeElement::standard(0);
        expect.add(s, &LaurentPoly::from_terms(&[(-1, 1), (1, -1)]));
        assert_eq!(sq, expect);
        let t = h.ideal().index_of_word(&[1]).unwrap();
        let st = h.ideal().index_of_word(&[0, 1]).unwrap();
        assert_eq!(h.mul(&hs, &HeckeElement::standard(t)).unwrap(), HeckeElement::standard(st));
    }

    #[test]
    fn kl_dihedral() {
        let h = hecke(vec![vec![1, 3], vec![3, 1]], 3);
        let i = h.ideal();
        let sts = i.index_of_word(&[0, 1, 0]).unwrap();
        let kl = h.kl_basis(sts);
        assert_eq!(kl.coeff(0), LaurentPoly::monomial(1, 3));
        assert_eq!(kl.coeff(i.index_of_word(&[0, 1]).unwrap()), LaurentPoly::v());
        assert_eq!(kl.coeff(i.index_of_word(&[1]).unwrap()), LaurentPoly::monomial(1, 2));
        let s = i.index_of_word(&[0]).unwrap();
        assert_eq!(h.inverse_kl(s).get(&0), Some(&LaurentPoly::monomial(-1, 1)));
        assert_eq!(h.mu(0, s), BigInt::from(1));
    }

    #[test]
    fn bar_of_standard_generator() {
        let h = hecke(vec![vec![1, 3], vec![3, 1]], 3);
        let s = h.ideal().index_of_word(&[0]).unwrap();
        let b = h.bar(&HeckeElement::standard(s));
        assert_eq!(b.coeff(s), LaurentPoly::one());
        assert_eq!(b.coeff(0), LaurentPoly::from_terms(&[(1, 1), (-1, -1)]));
    }

    #[test]
    fn display_forms() {
        assert_eq!(LaurentPoly::from_terms(&[(0, 1), (2, 1)]).to_string(), "1 + v^2");
        assert_eq!(LaurentPoly::from_terms(&[(-1, 1), (1, -1)]).to_string(), "v^-1 - v");
    }
}
