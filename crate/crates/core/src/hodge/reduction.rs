//! Reductions B̄ = B ⊗_R ℝ of bimodules with forms, and the deformed operators L_ζ on B̄_xB_s.

use crate::invpoly::Poly;
use crate::linalg::Matrix;
use crate::numeric::Scalar;
use crate::soergel::{hom_space, Catalogue, FreeBimodule, PolyMatrix};

use super::datum::{hard_lefschetz_check, shifted_vanishing_check, LefschetzDatum, ShiftedVanishing};
use super::HodgeError;

/// B̄ with L = left multiplication by ρ; the reduced form must be non-degenerate.
pub fn reduce(b: &FreeBimodule, rho: &[Scalar]) -> Result<LefschetzDatum, HodgeError> {
    let d = reduce_unchecked(b, rho)?;
    if !d.is_nondegenerate() {
        return Err(HodgeError::Degenerate);
    }
    Ok(d)
}

/// As [`reduce`] without the non-degeneracy requirement.
pub fn reduce_unchecked(b: &FreeBimodule, rho: &[Scalar]) -> Result<LefschetzDatum, HodgeError> {
    let gram = b.reduced_gram().ok_or(HodgeError::NoForm)?;
    let l = b.left_linear(rho).constant_part();
    LefschetzDatum::new(b.sys().field(), b.degrees().to_vec(), gram, l)
}

/// Reduction of B·B_s with L_ζ = (ρ·−)⊗id + id⊗(ζρ·−) and the induced form.
///
/// On the reduction, id⊗ρ sends ē⊗c_id to ρ(α_s^∨) ē⊗c_s and kills ē⊗c_s.
pub fn lefschetz_zeta_module(b: &FreeBimodule, s: usize, rho: &[Scalar], zeta: &Scalar) -> Result<LefschetzDatum, HodgeError> {
    if zeta.is_negative() {
        return Err(HodgeError::NegativeZeta);
    }
    let sys = b.sys().clone();
    let n = b.induce(s);
    let base = reduce_unchecked(&n, rho)?;
    let r = b.rank();
    let c = zeta * &sys.eval_coroot(s, rho);
    let mut l = base.operator().clone();
    if !c.is_zero() {
        for i in 0..r {
            l[(r + i, i)] = &l[(r + i, i)] + &c;
        }
    }
    base.with_operator(l)
}

/// [`lefschetz_zeta_module`] on the catalogued B_x.
pub fn lefschetz_zeta(cat: &Catalogue, x: usize, s: usize, rho: &[Scalar], zeta: &Scalar) -> Result<LefschetzDatum, HodgeError> {
    lefschetz_zeta_module(&cat.entry(x)?.module, s, rho, zeta)
}

/// The isomorphism B_xB_s ≅ B_x(1) ⊕ B_x(−1) for xs < x and the shape of L_ζ in it.
#[derive(Clone, Debug)]
pub struct DescentSplit {
    /// B_x(1) → B_xB_s, normalized on e_bot.
    pub i1: PolyMatrix,
    /// B_x(−1) → B_xB_s with e_bot ↦ β(e_bot) − ½α(e_bot)α_s.
    pub i2: PolyMatrix,
    /// B_xB_s → B_x(−1), normalized on β(e_bot).
    pub p2: PolyMatrix,
    /// p₂ ∘ (id⊗ρ) ∘ i₁ = ρ(α_s^∨)·id holds exactly.
    pub off_diagonal_exact: bool,
    /// After reduction, L_ζ = [[L, 0], [ζρ(α_s^∨), L]] in the basis [ī₁ | ī₂].
    pub block_form: bool,
    /// The reduced p₂ is the second row block of [ī₁ | ī₂]^{−1}.
    pub projection_consistent: bool,
    /// B_x is generated by e_bot, so i₂ is determined by its value there.
    pub cyclic: bool,
}

/// Coefficient vector of a column of polynomials, keyed by (row, monomial).
fn flatten(cols: &[Vec<Poly>]) -> (Vec<(usize, crate::invpoly::Mono)>, Vec<Vec<Scalar>>) {
    let mut keys = std::collections::BTreeSet::new();
    for col in cols {
        for (r, p) in col.iter().enumerate() {
            for (m, _) in p.terms() {
                keys.insert((r, *m));
            }
        }
    }
    let keys: Vec<_> = keys.into_iter().collect();
    let vecs = cols.iter().map(|col| keys.iter().map(|(r, m)| col[*r].coeff(m)).collect()).collect();
    (keys, vecs)
}

pub fn descent_split(cat: &Catalogue, x: usize, s: usize, rho: &[Scalar], zeta: &Scalar) -> Result<DescentSplit, HodgeError> {
    let sys = cat.sys().clone();
    let (f, nv) = (sys.field(), sys.rep_dim());
    let entry = cat.entry(x)?;
    let bx = &entry.module;
    let n = bx.induce(s);
    let r = bx.rank();
    let bot = entry.bottom();
    let internal = |m: &str| HodgeError::Internal(m.to_string());

    let i1s = hom_space(bx, &n, -1);
    if i1s.len() != 1 {
        return Err(internal("Hom(B_x(1), B_xB_s) is not one-dimensional"));
    }
    let c = i1s[0].get(bot, bot).constant_term();
    let i1 = i1s[0].scale(&c.inverse().map_err(|_| internal("i1 vanishes on e_bot"))?);

    let p2s = hom_space(&n, bx, -1);
    if p2s.len() != 1 {
        return Err(internal("Hom(B_xB_s, B_x(-1)) is not one-dimensional"));
    }
    let c = p2s[0].get(bot, r + bot).constant_term();
    let p2 = p2s[0].scale(&c.inverse().map_err(|_| internal("p2 vanishes on beta(e_bot)"))?);

    // i2 from its value on e_bot
    let mut target = vec![Poly::zero(f, nv); 2 * r];
    target[r + bot] = Poly::one(f, nv);
    target[bot] = Poly::var(f, nv, s).scale_rational(&crate::numeric::Rational::new(-1, 2));
    let h = hom_space(bx, &n, 1);
    let mut cols: Vec<Vec<Poly>> = h.iter().map(|m| m.column(bot)).collect();
    cols.push(target);
    let (keys, vecs) = flatten(&cols);
    let a = Matrix::from_columns(f, keys.len(), &vecs[..h.len()]);
    let b = Matrix::from_columns(f, keys.len(), &vecs[h.len()..]);
    let coeffs = a.solve(&b).ok_or_else(|| internal("no degree-one map with the prescribed value on e_bot"))?;
    let mut i2 = PolyMatrix::zeros(f, nv, 2 * r, r);
    for (k, m) in h.iter().enumerate() {
        let ck = coeffs[(k, 0)].clone();
        if !ck.is_zero() {
            i2 = i2.add(&m.scale(&ck));
        }
    }
    // cyclic: the value on e_bot determines the map, i.e. no nonzero map in h kills e_bot
    let kernel = a.nullspace();
    let cyclic = kernel.cols() == 0;

    // id ⊗ (ρ·−) on B_xB_s
    let rho_p = Poly::linear(f, rho);
    let srho = Poly::linear(f, &sys.reflect(s, rho));
    let rc = sys.eval_coroot(s, rho);
    let mut idrho = PolyMatrix::zeros(f, nv, 2 * r, 2 * r);
    for i in 0..r {
        idrho.set(i, i, srho.clone());
        idrho.set(r + i, i, Poly::constant(f, nv, rc.clone()));
        idrho.set(r + i, r + i, rho_p.clone());
    }
    let comp = p2.mul(&idrho).mul(&i1);
    let off_diagonal_exact = comp == PolyMatrix::identity(f, nv, r).scale(&rc);

    let ibar = i1.constant_part().hstack(&i2.constant_part());
    let inv = ibar.inverse().ok_or_else(|| internal("[i1 | i2] is not invertible after reduction"))?;
    let lz = lefschetz_zeta_module(bx, s, rho, zeta)?;
    let m = inv.mul(lz.operator()).mul(&ibar);
    let lx = bx.left_linear(rho).constant_part();
    let mut expected = Matrix::zeros(f, 2 * r, 2 * r);
    let zc = zeta * &rc;
    for a in 0..r {
        for b in 0..r {
            expected[(a, b)] = lx[(a, b)].clone();
            expected[(r + a, r + b)] = lx[(a, b)].clone();
        }
        expected[(r + a, a)] = zc.clone();
    }
    let block_form = m == expected;
    let rows2: Vec<usize> = (r..2 * r).collect();
    let all: Vec<usize> = (0..2 * r).collect();
    let projection_consistent = inv.submatrix(&rows2, &all) == p2.constant_part();
    Ok(DescentSplit { i1, i2, p2, off_diagonal_exact, block_form, projection_consistent, cyclic })
}

/// Lefschetz forms of L₀ = ρ on the B̄_z(1) component of B̄_zB_s for zs < z.
pub fn shifted_vanishing_for(cat: &Catalogue, z: usize, s: usize, rho: &[Scalar]) -> Result<ShiftedVanishing, HodgeError> {
    let split = descent_split(cat, z, s, rho, &cat.sys().field().zero())?;
    let full = lefschetz_zeta(cat, z, s, rho, &cat.sys().field().zero())?;
    let part = full.restrict(&split.i1.constant_part())?;
    Ok(shifted_vanishing_check(&part))
}

/// hL for the reduction of a catalogued B_x with ρ.
pub fn hard_lefschetz_for(cat: &Catalogue, x: usize, rho: &[Scalar]) -> Result<bool, HodgeError> {
    Ok(hard_lefschetz_check(&reduce(&cat.entry(x)?.module, rho)?).pass)
}
