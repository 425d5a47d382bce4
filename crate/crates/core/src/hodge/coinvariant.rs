//! The coinvariant ring R/(R^W_+) of a finite Coxeter group as a Lefschetz datum.

use std::sync::Arc;

use crate::coxeter::{enumerate_ideal, CoxeterSystem};
use crate::invpoly::{demazure_word, invariants_of_degree, mono_mul, monomials, Mono, Poly};
use crate::linalg::{Matrix, RowBasis};
use crate::numeric::Scalar;

use super::datum::LefschetzDatum;
use super::HodgeError;

/// Default upper bound on the total dimension of a datum.
pub const DEFAULT_DIMENSION_CAP: usize = 4000;

#[derive(Clone, Debug)]
pub struct CoinvariantRing {
    pub datum: LefschetzDatum,
    /// Dimension of each polynomial degree 0..=ℓ(w₀).
    pub poincare: Vec<usize>,
    pub top_degree: usize,
    /// Standard monomials spanning each polynomial degree.
    pub basis: Vec<Vec<Mono>>,
    pub group_order: usize,
}

/// Longest element word and group order, or an error if W is infinite or larger than `cap`.
pub fn longest_word(sys: &Arc<CoxeterSystem>, cap: usize) -> Result<(Vec<usize>, usize), HodgeError> {
    let mut len = 8;
    loop {
        let ideal = enumerate_ideal(sys, len)?;
        if ideal.is_whole_group() {
            if ideal.len() > cap {
                return Err(HodgeError::TooLarge { dim: ideal.len(), cap });
            }
            let w0 = ideal.len() - 1;
            return Ok((ideal.word(w0).to_vec(), ideal.len()));
        }
        if ideal.len() > cap {
            return Err(HodgeError::Infinite);
        }
        len *= 2;
    }
}

/// Builds R/(R^W_+) with grading 2p − ℓ(w₀), the form ∂_{w₀}(fg) and L = multiplication by ρ.
///
/// The form is rescaled by ±1 so that it is positive on the class of 1.
pub fn coinvariant_datum(sys: &Arc<CoxeterSystem>, rho: &[Scalar], cap: usize) -> Result<CoinvariantRing, HodgeError> {
    let (w0, order) = longest_word(sys, cap)?;
    let top = w0.len();
    let (f, n) = (sys.field(), sys.rep_dim());
    // ideal components I_d = Σ_v x_v I_{d−1} + R^W_d, as reduced row bases over monomials
    let mut mons: Vec<Vec<Mono>> = Vec::with_capacity(top + 2);
    let mut ideals: Vec<RowBasis> = Vec::with_capacity(top + 2);
    for d in 0..=(top + 1) as u32 {
        let md = monomials(n, d);
        let pos: std::collections::HashMap<Mono, usize> = md.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut rb = RowBasis::new(f, md.len());
        if d > 0 {
            let prev = &ideals[d as usize - 1];
            let prev_m = &mons[d as usize - 1];
            'outer: for row in prev.basis() {
                for v in 0..n {
                    let mut e = [0u8; 8];
                    e[v] = 1;
                    let mut vec = vec![f.zero(); md.len()];
                    for (k, c) in row.iter().enumerate() {
                        if !c.is_zero() {
                            vec[pos[&mono_mul(&prev_m[k], &e)]] = c.clone();
                        }
                    }
                    rb.insert(&vec);
                    if rb.dim() == md.len() {
                        break 'outer;
                    }
                }
            }
            if rb.dim() < md.len() {
                for p in invariants_of_degree(sys, d) {
                    rb.insert(&p.coords(&md));
                }
            }
        }
        mons.push(md);
        ideals.push(rb);
    }
    if ideals[top + 1].dim() != mons[top + 1].len() {
        return Err(HodgeError::Internal("quotient does not vanish above the top degree".into()));
    }
    let basis: Vec<Vec<Mono>> = (0..=top)
        .map(|d| {
            let piv: std::collections::HashSet<usize> = ideals[d].pivots().into_iter().collect();
            (0..mons[d].len()).filter(|k| !piv.contains(k)).map(|k| mons[d][k]).collect()
        })
        .collect();
    let poincare: Vec<usize> = basis.iter().map(|b| b.len()).collect();
    let total: usize = poincare.iter().sum();
    if total > cap {
        return Err(HodgeError::TooLarge { dim: total, cap });
    }
    // ∂_{w₀} on monomials of the top degree
    let top_mons = &mons[top];
    let mut trace = std::collections::HashMap::new();
    for m in top_mons {
        let p = Poly::monomial(f, n, *m, f.one());
        let v = demazure_word(sys, &w0, &p).map_err(|e| HodgeError::Internal(e.to_string()))?;
        trace.insert(*m, v.constant_term());
    }
    let offsets: Vec<usize> = poincare.iter().scan(0, |acc, d| { let o = *acc; *acc += d; Some(o) }).collect();
    let mut degrees = Vec::with_capacity(total);
    for (p, b) in basis.iter().enumerate() {
        degrees.extend(std::iter::repeat(2 * p as i32 - top as i32).take(b.len()));
    }
    let mut gram = Matrix::zeros(f, total, total);
    for p in 0..=top {
        let q = top - p;
        for (a, ma) in basis[p].iter().enumerate() {
            for (b, mb) in basis[q].iter().enumerate() {
                gram[(offsets[p] + a, offsets[q] + b)] = trace[&mono_mul(ma, mb)].clone();
            }
        }
    }
    // L: multiplication by ρ followed by reduction modulo I_{p+1}
    let rho_p = Poly::linear(f, rho);
    let mut l = Matrix::zeros(f, total, total);
    for p in 0..top {
        let md = &mons[p + 1];
        let std_pos: std::collections::HashMap<Mono, usize> = basis[p + 1].iter().enumerate().map(|(i, m)| (*m, i)).collect();
        for (a, ma) in basis[p].iter().enumerate() {
            let prod = rho_p.mul_mono(ma);
            let red = ideals[p + 1].reduce(&prod.coords(md));
            for (k, c) in red.iter().enumerate() {
                if !c.is_zero() {
                    let b = std_pos[&md[k]];
                    l[(offsets[p + 1] + b, offsets[p] + a)] = c.clone();
                }
            }
        }
    }
    // sign: ⟨1, ρ^top · 1⟩ > 0
    let mut v = vec![f.zero(); total];
    v[0] = f.one();
    for _ in 0..top {
        v = l.mul_vec(&v);
    }
    let pairing = (0..total).fold(f.zero(), |acc, k| &acc + &(&gram[(0, k)] * &v[k]));
    if pairing.is_zero() {
        return Err(HodgeError::Internal("zero top pairing".into()));
    }
    if pairing.is_negative() {
        gram = gram.scale(&f.from_int(-1));
    }
    let datum = LefschetzDatum::new(f, degrees, gram, l)?;
    Ok(CoinvariantRing { datum, poincare, top_degree: top, basis, group_order: order })
}
