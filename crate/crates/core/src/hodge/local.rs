//! Local intersection forms on Hom(B_y, B_xB_s) and the embedding into primitive classes.

use crate::linalg::{signature, Matrix};
use crate::numeric::Scalar;
use crate::soergel::{adjoint, endomorphism_scalar, hom_space, Catalogue, FreeBimodule, PolyMatrix};

use super::datum::{expected_sign, Inertia};
use super::reduction::reduce_unchecked;
use super::HodgeError;

#[derive(Clone, Debug)]
pub struct LocalFormReport {
    pub y: usize,
    pub x: usize,
    pub s: usize,
    pub dim: usize,
    pub gram: Matrix,
    pub signature: Inertia,
    /// (−1)^{(ℓ(x)+1−ℓ(y))/2}, or 0 when the space must vanish.
    pub expected_sign: i32,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct EmbeddingReport {
    pub y: usize,
    pub x: usize,
    pub s: usize,
    /// ⟨ρ^{ℓ(y)} c̄_bot, c̄_bot⟩ on B̄_y.
    pub n: Scalar,
    pub n_positive: bool,
    pub injective: bool,
    pub primitive: bool,
    pub isometry: bool,
    pub pass: bool,
}

struct LocalData {
    maps: Vec<PolyMatrix>,
    gram: Matrix,
    by: FreeBimodule,
    n: FreeBimodule,
}

fn local_data(cat: &Catalogue, y: usize, x: usize, s: usize) -> Result<LocalData, HodgeError> {
    let f = cat.sys().field();
    let by = cat.entry(y)?.module.clone();
    let n = cat.entry(x)?.module.induce(s);
    let maps = hom_space(&by, &n, 0);
    let stars: Vec<PolyMatrix> = maps.iter().map(|g| adjoint(&by, &n, g)).collect::<Result<_, _>>()?;
    let k = maps.len();
    let mut gram = Matrix::zeros(f, k, k);
    for a in 0..k {
        for b in 0..k {
            let comp = stars[b].mul(&maps[a]);
            gram[(a, b)] = endomorphism_scalar(&comp)
                .ok_or_else(|| HodgeError::Internal(format!("g*f is not a scalar endomorphism of B_{y}")))?;
        }
    }
    Ok(LocalData { maps, gram, by, n })
}

fn check_ascent(cat: &Catalogue, x: usize, s: usize) -> Result<(), HodgeError> {
    if cat.ideal().element(x).is_right_descent(s) {
        return Err(HodgeError::NotAscent { x, s });
    }
    Ok(())
}

fn local_report(cat: &Catalogue, y: usize, x: usize, s: usize, d: &LocalData) -> LocalFormReport {
    let ideal = cat.ideal();
    let exp = expected_sign(ideal.length(x) as i32 + 1, ideal.length(y) as i32);
    let sig = signature(&d.gram);
    let k = d.maps.len();
    let pass = match exp {
        0 => k == 0,
        1 => sig.1 == 0 && sig.2 == 0,
        _ => sig.0 == 0 && sig.2 == 0,
    };
    LocalFormReport { y, x, s, dim: k, gram: d.gram.clone(), signature: sig, expected_sign: exp, pass }
}

/// Gram matrix (f, g) = g*∘f ∈ End⁰(B_y) on a basis of Hom(B_y, B_xB_s), with its definiteness verdict.
pub fn local_intersection_form(cat: &Catalogue, y: usize, x: usize, s: usize) -> Result<LocalFormReport, HodgeError> {
    check_ascent(cat, x, s)?;
    let d = local_data(cat, y, x, s)?;
    Ok(local_report(cat, y, x, s, &d))
}

/// ι(f) = f(c̄_bot) into the primitive part of B̄_xB_s, compared with the local form.
pub fn embedding_isometry_check(cat: &Catalogue, y: usize, x: usize, s: usize, rho: &[Scalar]) -> Result<EmbeddingReport, HodgeError> {
    Ok(local_and_embedding(cat, y, x, s, rho)?.1)
}

/// Both reports from one Hom computation.
pub fn local_and_embedding(
    cat: &Catalogue,
    y: usize,
    x: usize,
    s: usize,
    rho: &[Scalar],
) -> Result<(LocalFormReport, EmbeddingReport), HodgeError> {
    check_ascent(cat, x, s)?;
    let d = local_data(cat, y, x, s)?;
    let local = local_report(cat, y, x, s, &d);
    let ly = cat.ideal().length(y);
    let bot = cat.entry(y)?.bottom();
    let dy = reduce_unchecked(&d.by, rho)?;
    let dn = reduce_unchecked(&d.n, rho)?;
    let f = cat.sys().field();
    // N = ⟨ρ^ℓ c̄_bot, c̄_bot⟩
    let lpow = matrix_power(dy.operator(), ly);
    let n_val = (0..dy.dim()).fold(f.zero(), |acc, a| &acc + &(&dy.gram()[(bot, a)] * &lpow[(a, bot)]));
    let iota = Matrix::from_columns(f, d.n.rank(), &d.maps.iter().map(|m| m.constant_part().column(bot)).collect::<Vec<_>>());
    let k = d.maps.len();
    let injective = iota.rank() == k;
    let lnp = matrix_power(dn.operator(), ly);
    let primitive = k == 0 || dn.operator().mul(&lnp).mul(&iota).is_zero();
    let lef = iota.transpose().mul(dn.gram()).mul(&lnp).mul(&iota);
    let isometry = lef == d.gram.scale(&n_val);
    let n_positive = n_val.is_positive();
    let pass = n_positive && injective && primitive && isometry;
    let emb = EmbeddingReport { y, x, s, n: n_val, n_positive, injective, primitive, isometry, pass };
    Ok((local, emb))
}

fn matrix_power(m: &Matrix, e: usize) -> Matrix {
    let mut acc = Matrix::identity(m.field(), m.rows());
    for _ in 0..e {
        acc = m.mul(&acc);
    }
    acc
}
