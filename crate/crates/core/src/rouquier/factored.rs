//! ⟨b, L b′⟩ = Σ γ_i ⟨φ_i b, φ_i b′⟩ on the reduction of BS(x̲), and its L_ζ variant on BS(x̲s).

use std::sync::Arc;

use crate::coxeter::CoxeterSystem;
use crate::hodge::{lefschetz_zeta_module, reduce_unchecked, weak_lefschetz_substitute, LefschetzDatum, WeakLefschetz};
use crate::linalg::Matrix;
use crate::numeric::Scalar;
use crate::soergel::{multiply_out, BsBimodule};

use super::RouquierError;

#[derive(Clone, Debug)]
pub struct FactoredReport {
    pub word: Vec<usize>,
    /// Trailing reflection and ζ of the L_ζ variant.
    pub trailing: Option<(usize, Scalar)>,
    pub gammas: Vec<Scalar>,
    pub gammas_positive: bool,
    /// Ḡ·L̄ = Σ γ_i φ̄_iᵀ Ḡ_i φ̄_i exactly.
    pub identity: bool,
    /// The weak Lefschetz substitute for φ̄ = (φ̄_i) into ⊕ γ_i·B̄S(x̲_î).
    pub weak_lefschetz: WeakLefschetz,
    pub pass: bool,
}

/// γ_i = (s_{i−1}⋯s₁ρ)(α_{s_i}^∨), and x^{−1}ρ.
fn gammas(sys: &CoxeterSystem, word: &[usize], rho: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
    let mut cur = rho.to_vec();
    let mut out = Vec::with_capacity(word.len());
    for &s in word {
        out.push(sys.eval_coroot(s, &cur));
        cur = sys.reflect(s, &cur);
    }
    (out, cur)
}

/// Constant part of φ_i on every basis vector of BS(word): a 2^{m−1} × 2^m matrix.
fn phi_bar(bs: &BsBimodule, i: usize) -> Matrix {
    let f = bs.sys().field();
    let cols: Vec<Vec<Scalar>> =
        (0..bs.rank()).map(|eps| multiply_out(bs, eps, i).iter().map(|p| p.constant_term()).collect()).collect();
    Matrix::from_columns(f, bs.rank() >> 1, &cols)
}

fn check(sys: &Arc<CoxeterSystem>, v: LefschetzDatum, full: &[usize], gammas: Vec<Scalar>, rho: &[Scalar], trailing: Option<(usize, Scalar)>, word: &[usize]) -> Result<FactoredReport, RouquierError> {
    let f = sys.field();
    let bs = BsBimodule::build(sys, full);
    let lhs = v.gram().mul(v.operator());
    let mut rhs = Matrix::zeros(f, bs.rank(), bs.rank());
    let mut w: Option<LefschetzDatum> = None;
    let mut phis: Option<Matrix> = None;
    for (i, g) in gammas.iter().enumerate() {
        let sub: Vec<usize> = full.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &s)| s).collect();
        let bsi = BsBimodule::build(sys, &sub);
        let di = reduce_unchecked(bsi.module(), rho)?;
        let phi = phi_bar(&bs, i);
        rhs = rhs.add(&phi.transpose().mul(di.gram()).mul(&phi).scale(g));
        w = Some(match w {
            None => LefschetzDatum::new(f, di.degrees().to_vec(), di.gram().scale(g), di.operator().clone())?,
            Some(acc) => acc.direct_sum(&di, g),
        });
        phis = Some(match phis {
            None => phi,
            Some(acc) => acc.vstack(&phi),
        });
    }
    let identity = lhs == rhs;
    let w = w.ok_or_else(|| RouquierError::Shape("empty word".into()))?;
    let weak_lefschetz = weak_lefschetz_substitute(&v, &w, &phis.expect("nonempty"));
    let gammas_positive = gammas.iter().all(|g| g.is_positive());
    let pass = identity && gammas_positive && weak_lefschetz.isometry && weak_lefschetz.graded;
    Ok(FactoredReport { word: word.to_vec(), trailing, gammas, gammas_positive, identity, weak_lefschetz, pass })
}

/// The identity for L = ρ· on B̄S(x̲), x̲ reduced.
pub fn factored_lefschetz_check(sys: &Arc<CoxeterSystem>, word: &[usize], rho: &[Scalar]) -> Result<FactoredReport, RouquierError> {
    if word.is_empty() {
        return Err(RouquierError::Shape("empty word".into()));
    }
    if !sys.is_reduced(word)? {
        return Err(RouquierError::NotReduced);
    }
    let bs = BsBimodule::build(sys, word);
    let v = reduce_unchecked(bs.module(), rho)?;
    let (g, _) = gammas(sys, word, rho);
    check(sys, v, word, g, rho, None, word)
}

/// The identity for L_ζ on B̄S(x̲)B_s, with γ_{m+1} = (x^{−1}ρ)(α_s^∨) + ζρ(α_s^∨).
pub fn factored_lefschetz_check_zeta(
    sys: &Arc<CoxeterSystem>,
    word: &[usize],
    s: usize,
    rho: &[Scalar],
    zeta: &Scalar,
) -> Result<FactoredReport, RouquierError> {
    if !sys.is_reduced(word)? {
        return Err(RouquierError::NotReduced);
    }
    let bs = BsBimodule::build(sys, word);
    let v = lefschetz_zeta_module(bs.module(), s, rho, zeta)?;
    let (mut g, xinv_rho) = gammas(sys, word, rho);
    g.push(&sys.eval_coroot(s, &xinv_rho) + &(zeta * &sys.eval_coroot(s, rho)));
    let full: Vec<usize> = word.iter().copied().chain([s]).collect();
    check(sys, v, &full, g, rho, Some((s, zeta.clone())), word)
}
