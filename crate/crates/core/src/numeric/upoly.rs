//! Univariate polynomials over ℤ and ℚ used to construct and isolate θ.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Rational;

/// Coefficients from the constant term upwards, no trailing zeros.
pub type IntPoly = Vec<BigInt>;
pub type RatPoly = Vec<Rational>;

fn trim_int(p: &mut IntPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn trim_rat(p: &mut RatPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn int_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_int(&mut out);
    out
}

pub fn int_add(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let n = a.len().max(b.len());
    let mut out: IntPoly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect();
    trim_int(&mut out);
    out
}

pub fn int_scale(a: &IntPoly, c: &BigInt) -> IntPoly {
    let mut out: IntPoly = a.iter().map(|x| x * c).collect();
    trim_int(&mut out);
    out
}

/// Exact division by a monic divisor; `None` if the remainder is nonzero.
pub fn int_div_exact(a: &IntPoly, b: &IntPoly) -> Option<IntPoly> {
    assert!(b.last().is_some_and(|c| c.is_one()), "divisor must be monic");
    let mut rem = a.clone();
    if rem.len() < b.len() {
        return if rem.is_empty() { Some(vec![]) } else { None };
    }
    let mut q = vec![BigInt::zero(); rem.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let c = rem[k + b.len() - 1].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    trim_int(&mut rem);
    if rem.is_empty() {
        trim_int(&mut q);
        Some(q)
    } else {
        None
    }
}

/// The cyclotomic polynomial Φ_n.
pub fn cyclotomic(n: u32) -> IntPoly {
    let mut num: IntPoly = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    let mut p = num;
    for d in 1..n {
        if n % d == 0 {
            p = int_div_exact(&p, &cyclotomic(d)).expect("cyclotomic division");
        }
    }
    p
}

/// The polynomials P_k with P_k(z + 1/z) = z^k + z^{-k}, i.e. P_k(2cos t) = 2cos(kt).
pub fn chebyshev_2cos(k: u32) -> IntPoly {
    let x: IntPoly = vec![BigInt::zero(), BigInt::one()];
    let mut prev: IntPoly = vec![BigInt::from(2)];
    if k == 0 {
        return prev;
    }
    let mut cur = x.clone();
    for _ in 1..k {
        let next = int_add(&int_mul(&x, &cur), &int_scale(&prev, &BigInt::from(-1)));
        prev = cur;
        cur = next;
    }
    cur
}

/// Minimal polynomial of 2cos(π/N) over ℚ.
///
/// For N ≥ 2 the cyclotomic polynomial Φ_{2N} is palindromic of even degree
/// 2d, so z^{-d}Φ_{2N}(z) is a polynomial in w = z + 1/z.
pub fn minpoly_2cos(n: u32) -> IntPoly {
    assert!(n >= 1);
    if n == 1 {
        return vec![BigInt::from(2), BigInt::one()];
    }
    let phi = cyclotomic(2 * n);
    let d = (phi.len() - 1) / 2;
    let mut out: IntPoly = vec![phi[d].clone()];
    for k in 1..=d {
        let a = &phi[d + k];
        if !a.is_zero() {
            out = int_add(&out, &int_scale(&chebyshev_2cos(k as u32), a));
        }
    }
    out
}

pub fn to_rat(p: &IntPoly) -> RatPoly {
    p.iter().map(|c| Rational::from_bigint(c.clone())).collect()
}

pub fn rat_eval(p: &RatPoly, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

pub fn rat_derivative(p: &RatPoly) -> RatPoly {
    let mut out: RatPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * &Rational::from_int(i as i64))
        .collect();
    trim_rat(&mut out);
    out
}

pub fn rat_rem(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut r = a.clone();
    trim_rat(&mut r);
    let lead = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            r[shift + j] = &r[shift + j] - &t;
        }
        r.pop();
        trim_rat(&mut r);
    }
    r
}

/// Sturm sequence of a squarefree polynomial.
pub fn sturm_sequence(p: &RatPoly) -> Vec<RatPoly> {
    let mut seq = vec![p.clone(), rat_derivative(p)];
    loop {
        let n = seq.len();
        let r = rat_rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn sign_changes(seq: &[RatPoly], x: &Rational) -> usize {
    let signs: Vec<i32> = seq
        .iter()
        .map(|p| rat_eval(p, x).signum())
        .filter(|s| *s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in the half-open interval (a, b].
pub fn count_roots(seq: &[RatPoly], a: &Rational, b: &Rational) -> usize {
    sign_changes(seq, a) - sign_changes(seq, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> IntPoly {
        v.iter().map(|x| BigInt::from(*x)).collect()
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic(10), ints(&[1, -1, 1, -1, 1]));
    }

    #[test]
    fn minpolys() {
        assert_eq!(minpoly_2cos(1), ints(&[2, 1]));
        assert_eq!(minpoly_2cos(2), ints(&[0, 1]));
        assert_eq!(minpoly_2cos(3), ints(&[-1, 1]));
        assert_eq!(minpoly_2cos(4), ints(&[-2, 0, 1]));
        assert_eq!(minpoly_2cos(5), ints(&[-1, -1, 1]));
        assert_eq!(minpoly_2cos(6), ints(&[-3, 0, 1]));
    }
}
