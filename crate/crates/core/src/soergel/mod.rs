//! Bott–Samelson bimodules, their forms and morphisms, and the indecomposables B_x.

mod algebra;
mod bimodule;
mod decompose;
mod hom;
mod polymatrix;

pub use algebra::{endomorphism_scalar, lift_idempotent, realize_image, split_top, EndAlgebra, Summand};
pub use bimodule::{
    apply, breaking_lefschetz_check, bs_expected_dims, induced_form_check, induced_gram, multiply_out, BsBimodule,
    BsElement, FreeBimodule,
};
pub use decompose::{
    candidates_from, composition_pairing, decompose_bs, gdim, graded_rank_matches, peel, Catalogue, CatalogueEntry,
    Decomposition, Peeled, ProductDecomposition,
};
pub use hom::{generator_count, hom_space, MapSpace};
pub use polymatrix::{graded_inverse, tensor_id_s, PolyMatrix};

use crate::hecke::{HeckeElement, HeckeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SoergelError {
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error("element {0} is not in the catalogue")]
    NotCatalogued(usize),
    #[error("internal error: {0}")]
    Internal(String),
}

/// ch(B_x) as recorded in the catalogue.
pub fn character(cat: &Catalogue, x: usize) -> Result<HeckeElement, SoergelError> {
    Ok(cat.entry(x)?.character.clone())
}

/// ch(B_x) == H̄_x.
pub fn verify_soergel(cat: &Catalogue, x: usize) -> Result<bool, SoergelError> {
    Ok(cat.entry(x)?.character == *cat.hecke().kl_basis(x))
}

/// Adjoint of f: src → tgt with respect to the forms: f* = G_src^{−1}·fᵀ·G_tgt.
pub fn adjoint(src: &FreeBimodule, tgt: &FreeBimodule, f: &PolyMatrix) -> Result<PolyMatrix, SoergelError> {
    let gs = src.gram().ok_or_else(|| SoergelError::Internal("source has no form".into()))?;
    let gt = tgt.gram().ok_or_else(|| SoergelError::Internal("target has no form".into()))?;
    let inv = graded_inverse(gs).ok_or_else(|| SoergelError::Internal("degenerate form on source".into()))?;
    Ok(inv.mul(&f.transpose().mul(gt)))
}

#[cfg(test)]
mod tests;
