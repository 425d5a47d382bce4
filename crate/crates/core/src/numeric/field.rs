use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use smallvec::SmallVec;

use super::upoly::{self, IntPoly, RatPoly};
use super::{NumericError, Rational};

type Coeffs = SmallVec<[Rational; 2]>;

/// The real field ℚ(θ) with θ = 2cos(π/N), embedded in ℝ.
pub struct FieldDescriptor {
    n: u32,
    minpoly: IntPoly,
    degree: usize,
    /// Power-basis expansions of θ^d, …, θ^{2d-2}.
    reduction: Vec<Vec<Rational>>,
    /// θ itself when the field is ℚ.
    rational_theta: Option<Rational>,
    isolating: (Rational, Rational),
    refined: RwLock<Refinement>,
}

struct Refinement {
    lo: Rational,
    hi: Rational,
    bits: u32,
}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(2cos(pi/{}))", self.n)
    }
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl Eq for FieldDescriptor {}

impl Hash for FieldDescriptor {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
    }
}

static REGISTRY: OnceLock<Mutex<HashMap<u32, &'static FieldDescriptor>>> = OnceLock::new();

/// Returns the shared descriptor of ℚ(2cos(π/N)).
///
/// Descriptors are interned for the lifetime of the process, so elements can
/// hold a plain `&'static` reference.
pub fn field_create(n: u32) -> &'static FieldDescriptor {
    assert!(n >= 1, "conductor must be positive");
    let reg = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = reg.lock().expect("field registry poisoned");
    if let Some(f) = guard.get(&n) {
        return f;
    }
    let f: &'static FieldDescriptor = Box::leak(Box::new(FieldDescriptor::build(n)));
    guard.insert(n, f);
    f
}

impl FieldDescriptor {
    fn build(n: u32) -> Self {
        let minpoly = upoly::minpoly_2cos(n);
        let degree = minpoly.len() - 1;
        let mp_rat = upoly::to_rat(&minpoly);
        if degree == 1 {
            let theta = -&mp_rat[0];
            return FieldDescriptor {
                n,
                minpoly,
                degree,
                reduction: vec![],
                rational_theta: Some(theta.clone()),
                isolating: (theta.clone(), theta.clone()),
                refined: RwLock::new(Refinement { lo: theta.clone(), hi: theta, bits: 0 }),
            };
        }
        // Largest root of the minimal polynomial is 2cos(π/N) ∈ (0, 2).
        let seq = upoly::sturm_sequence(&mp_rat);
        let mut lo = Rational::zero();
        let mut hi = Rational::from_int(2);
        let two = Rational::from_int(2);
        while upoly::count_roots(&seq, &lo, &hi) > 1 {
            let mid = &(&lo + &hi) / &two;
            if upoly::count_roots(&seq, &mid, &hi) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let isolating = (lo.clone(), hi.clone());
        let mut reduction = Vec::new();
        // θ^d = -Σ_{i<d} m_i θ^i, then multiply by θ repeatedly.
        let mut cur: Vec<Rational> = mp_rat[..degree].iter().map(|c| -c).collect();
        for _ in 0..degree.saturating_sub(1) {
            reduction.push(cur.clone());
            let mut next = vec![Rational::zero(); degree];
            let top = cur[degree - 1].clone();
            for i in (1..degree).rev() {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..degree {
                next[i] = &next[i] + &(&top * &-&mp_rat[i]);
            }
            cur = next;
        }
        let mut f = FieldDescriptor {
            n,
            minpoly,
            degree,
            reduction,
            rational_theta: None,
            isolating,
            refined: RwLock::new(Refinement { lo, hi, bits: 0 }),
        };
        f.refine_to(64);
        f
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Monic minimal polynomial of θ, constant term first.
    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    /// Rational interval isolating θ among the real roots of the minimal polynomial.
    pub fn isolating_interval(&self) -> (Rational, Rational) {
        self.isolating.clone()
    }

    /// Current refined enclosure of θ.
    pub fn enclosure(&self) -> (Rational, Rational) {
        let r = self.refined.read().expect("refinement lock");
        (r.lo.clone(), r.hi.clone())
    }

    fn refine_to(&mut self, bits: u32) {
        let r = self.refined.get_mut().expect("refinement lock");
        Self::bisect(&self.minpoly, r, bits);
    }

    fn bisect(minpoly: &IntPoly, r: &mut Refinement, bits: u32) {
        let mp: RatPoly = upoly::to_rat(minpoly);
        let two = Rational::from_int(2);
        let s_lo = upoly::rat_eval(&mp, &r.lo).signum();
        while r.bits < bits {
            let mid = &(&r.lo + &r.hi) / &two;
            let s = upoly::rat_eval(&mp, &mid).signum();
            if s == 0 {
                r.lo = mid.clone();
                r.hi = mid;
                r.bits = u32::MAX;
                return;
            }
            if s == s_lo {
                r.lo = mid;
            } else {
                r.hi = mid;
            }
            r.bits += 1;
        }
    }

    fn refine_more(&self) {
        let mut r = self.refined.write().expect("refinement lock");
        let target = (r.bits.max(32)).saturating_mul(2);
        Self::bisect(&self.minpoly, &mut r, target);
    }

    pub fn zero(&'static self) -> AlgebraicReal {
        AlgebraicReal { field: self, c: smallvec::smallvec![Rational::zero(); self.degree] }
    }

    pub fn one(&'static self) -> AlgebraicReal {
        self.from_rational(Rational::one())
    }

    pub fn from_int(&'static self, n: i64) -> AlgebraicReal {
        self.from_rational(Rational::from_int(n))
    }

    pub fn from_rational(&'static self, q: Rational) -> AlgebraicReal {
        let mut c: Coeffs = smallvec::smallvec![Rational::zero(); self.degree];
        c[0] = q;
        AlgebraicReal { field: self, c }
    }

    /// The generator θ = 2cos(π/N).
    pub fn theta(&'static self) -> AlgebraicReal {
        match &self.rational_theta {
            Some(t) => self.from_rational(t.clone()),
            None => {
                let mut c: Coeffs = smallvec::smallvec![Rational::zero(); self.degree];
                c[1] = Rational::one();
                AlgebraicReal { field: self, c }
            }
        }
    }

    /// Element from power-basis coefficients (reduced modulo the minimal polynomial).
    pub fn from_power_coeffs(&'static self, coeffs: &[Rational]) -> AlgebraicReal {
        let t = self.theta();
        let mut acc = self.zero();
        let mut pw = self.one();
        for c in coeffs {
            acc = &acc + &pw.scale(c);
            pw = &pw * &t;
        }
        acc
    }

    /// 2cos(π/m) as an element, for m ∈ {1, 2, 3} or m dividing N.
    pub fn embed(&'static self, m: u32) -> Result<AlgebraicReal, NumericError> {
        match m {
            0 => Err(NumericError::NotInField(m)),
            1 => Ok(self.from_int(-2)),
            2 => Ok(self.zero()),
            3 => Ok(self.one()),
            _ if self.n % m == 0 => Ok(self.two_cos_multiple(self.n / m)),
            _ => Err(NumericError::NotInField(m)),
        }
    }

    /// 2cos(kπ/N) via P_{k+1} = θP_k − P_{k−1}.
    pub fn two_cos_multiple(&'static self, k: u32) -> AlgebraicReal {
        let t = self.theta();
        let mut prev = self.from_int(2);
        if k == 0 {
            return prev;
        }
        let mut cur = t.clone();
        for _ in 1..k {
            let next = &(&t * &cur) - &prev;
            prev = cur;
            cur = next;
        }
        cur
    }
}

/// Element of ℚ(2cos(π/N)) in the power basis of θ.
#[derive(Clone)]
pub struct AlgebraicReal {
    field: &'static FieldDescriptor,
    c: Coeffs,
}

impl AlgebraicReal {
    pub fn field(&self) -> &'static FieldDescriptor {
        self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|x| x.is_zero())
    }

    /// The value as a rational number, if it lies in ℚ.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    pub fn scale(&self, q: &Rational) -> AlgebraicReal {
        AlgebraicReal { field: self.field, c: self.c.iter().map(|x| x * q).collect() }
    }

    fn check(&self, other: &AlgebraicReal) -> Result<(), NumericError> {
        if std::ptr::eq(self.field, other.field) {
            Ok(())
        } else {
            Err(NumericError::FieldMismatch(self.field.n, other.field.n))
        }
    }

    pub fn try_add(&self, o: &AlgebraicReal) -> Result<AlgebraicReal, NumericError> {
        self.check(o)?;
        Ok(AlgebraicReal {
            field: self.field,
            c: self.c.iter().zip(o.c.iter()).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, o: &AlgebraicReal) -> Result<AlgebraicReal, NumericError> {
        self.check(o)?;
        Ok(AlgebraicReal {
            field: self.field,
            c: self.c.iter().zip(o.c.iter()).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, o: &AlgebraicReal) -> Result<AlgebraicReal, NumericError> {
        self.check(o)?;
        let d = self.field.degree;
        if d == 1 {
            return Ok(AlgebraicReal { field: self.field, c: smallvec::smallvec![&self.c[0] * &o.c[0]] });
        }
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] = &prod[i + j] + &(a * b);
                }
            }
        }
        let mut c: Coeffs = prod[..d].iter().cloned().collect();
        for (k, high) in prod[d..].iter().enumerate() {
            if high.is_zero() {
                continue;
            }
            for (i, r) in self.field.reduction[k].iter().enumerate() {
                c[i] = &c[i] + &(high * r);
            }
        }
        Ok(AlgebraicReal { field: self.field, c })
    }

    pub fn inverse(&self) -> Result<AlgebraicReal, NumericError> {
        if self.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        let f = self.field;
        let d = f.degree;
        if d == 1 {
            return Ok(f.from_rational(self.c[0].recip().unwrap()));
        }
        // Solve (multiplication by self) · x = 1 in the power basis.
        let t = f.theta();
        let mut cols: Vec<AlgebraicReal> = Vec::with_capacity(d);
        let mut pw = self.clone();
        for _ in 0..d {
            cols.push(pw.clone());
            pw = &pw * &t;
        }
        let mut m: Vec<Vec<Rational>> =
            (0..d).map(|i| (0..d).map(|j| cols[j].c[i].clone()).collect()).collect();
        let mut rhs: Vec<Rational> = (0..d).map(|i| if i == 0 { Rational::one() } else { Rational::zero() }).collect();
        for col in 0..d {
            let p = (col..d).find(|&r| !m[r][col].is_zero()).ok_or(NumericError::DivisionByZero)?;
            m.swap(col, p);
            rhs.swap(col, p);
            let inv = m[col][col].recip().unwrap();
            for j in col..d {
                m[col][j] = &m[col][j] * &inv;
            }
            rhs[col] = &rhs[col] * &inv;
            for r in 0..d {
                if r != col && !m[r][col].is_zero() {
                    let fac = m[r][col].clone();
                    for j in col..d {
                        let t = &fac * &m[col][j];
                        m[r][j] = &m[r][j] - &t;
                    }
                    let t = &fac * &rhs[col];
                    rhs[r] = &rhs[r] - &t;
                }
            }
        }
        Ok(AlgebraicReal { field: f, c: rhs.into_iter().collect() })
    }

    pub fn try_div(&self, o: &AlgebraicReal) -> Result<AlgebraicReal, NumericError> {
        self.check(o)?;
        self.try_mul(&o.inverse()?)
    }

    pub fn pow(&self, e: u32) -> AlgebraicReal {
        let mut acc = self.field.one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Sign under the real embedding fixed by the isolating interval.
    pub fn sign(&self) -> i32 {
        if let Some(q) = self.as_rational() {
            return q.signum();
        }
        loop {
            let (lo, hi) = self.field.enclosure();
            let (a, b) = self.eval_interval(&lo, &hi);
            if a.signum() > 0 {
                return 1;
            }
            if b.signum() < 0 {
                return -1;
            }
            self.field.refine_more();
        }
    }

    /// Enclosure of the value for θ ∈ [lo, hi] with 0 < lo.
    fn eval_interval(&self, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
        debug_assert!(lo.signum() > 0);
        let mut plo = Rational::one();
        let mut phi = Rational::one();
        let mut a = Rational::zero();
        let mut b = Rational::zero();
        for c in self.c.iter() {
            if c.signum() > 0 {
                a = &a + &(c * &plo);
                b = &b + &(c * &phi);
            } else if c.signum() < 0 {
                a = &a + &(c * &phi);
                b = &b + &(c * &plo);
            }
            plo = &plo * lo;
            phi = &phi * hi;
        }
        (a, b)
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    /// Floating approximation, for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.field.enclosure();
        let t = (lo.to_f64() + hi.to_f64()) / 2.0;
        self.c.iter().rev().fold(0.0, |acc, c| acc * t + c.to_f64())
    }
}

impl PartialEq for AlgebraicReal {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field) && self.c == other.c
    }
}

impl Eq for AlgebraicReal {}

impl Hash for AlgebraicReal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.n.hash(state);
        for c in self.c.iter() {
            c.hash(state);
        }
    }
}

impl PartialOrd for AlgebraicReal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        if !std::ptr::eq(self.field, other.field) {
            return None;
        }
        Some((self - other).sign().cmp(&0))
    }
}

macro_rules! field_binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl<'a> $tr<&'a AlgebraicReal> for &'a AlgebraicReal {
            type Output = AlgebraicReal;
            fn $m(self, rhs: &AlgebraicReal) -> AlgebraicReal {
                self.$try(rhs).expect("field operation")
            }
        }
        impl $tr<AlgebraicReal> for AlgebraicReal {
            type Output = AlgebraicReal;
            fn $m(self, rhs: AlgebraicReal) -> AlgebraicReal {
                self.$try(&rhs).expect("field operation")
            }
        }
        impl<'a> $tr<&'a AlgebraicReal> for AlgebraicReal {
            type Output = AlgebraicReal;
            fn $m(self, rhs: &'a AlgebraicReal) -> AlgebraicReal {
                self.$try(rhs).expect("field operation")
            }
        }
    };
}
field_binop!(Add, add, try_add);
field_binop!(Sub, sub, try_sub);
field_binop!(Mul, mul, try_mul);
field_binop!(Div, div, try_div);

impl Neg for &AlgebraicReal {
    type Output = AlgebraicReal;
    fn neg(self) -> AlgebraicReal {
        AlgebraicReal { field: self.field, c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Neg for AlgebraicReal {
    type Output = AlgebraicReal;
    fn neg(self) -> AlgebraicReal {
        -&self
    }
}

impl fmt::Display for AlgebraicReal {
    /// Rationals print as `p/q`; otherwise `[c0, c1, …]` in the power basis of θ.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        write!(f, "[")?;
        for (i, c) in self.c.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_conductors_are_rational() {
        assert_eq!(field_create(3).theta(), field_create(3).one());
        assert!(field_create(2).theta().is_zero());
        assert_eq!(field_create(1).theta(), field_create(1).from_int(-2));
        for n in 1..=3 {
            assert_eq!(field_create(n).degree(), 1);
        }
    }

    #[test]
    fn golden_ratio() {
        let f = field_create(5);
        let t = f.theta();
        assert!((&(&(&t * &t) - &t) - &f.one()).is_zero());
        assert_eq!((&t - &f.one()).sign(), 1);
        assert_eq!((&t - &f.from_int(2)).sign(), -1);
        let inv = t.inverse().unwrap();
        assert_eq!(&inv, &(&t - &f.one()));
    }

    #[test]
    fn sign_needs_refinement() {
        // θ − p/q for a very close rational approximation of the golden ratio.
        let f = field_create(5);
        let t = f.theta();
        let fib = |n: usize| {
            let (mut a, mut b) = (BigInt::from(0), BigInt::from(1));
            for _ in 0..n {
                let c = &a + &b;
                a = b;
                b = c;
            }
            (a, b)
        };
        let (a, b) = fib(80);
        let approx = Rational::from_big(num_rational::BigRational::new(b, a));
        let diff = &t - &f.from_rational(approx);
        assert_ne!(diff.sign(), 0);
    }
}
