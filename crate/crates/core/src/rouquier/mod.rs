//! Complexes of Soergel bimodules, minimal complexes and Rouquier complexes F_x.

mod complex;
mod complexes;
mod factored;

pub use complex::{
    complex_tensor, cone_of_identity, decompose_terms, direct_sum, eliminate, find_isomorphism, minimalize,
    tensor_map_left, tensor_map_right, Label, Object, SoergelComplex,
};
pub use complexes::{
    cohomology_check, f_s, inverse_kl_check, reduced_term_hodge, rouquier_complex, rouquier_complex_for_word,
    verify_linearity, CohomologyReport, InverseKlReport, LinearityReport, MultiplicityTable, RouquierComplex,
    TermHodgeReport,
};
pub use factored::{factored_lefschetz_check, factored_lefschetz_check_zeta, FactoredReport};

use crate::coxeter::CoxeterError;
use crate::hodge::HodgeError;
use crate::soergel::SoergelError;

#[derive(Debug, thiserror::Error)]
pub enum RouquierError {
    #[error(transparent)]
    Soergel(#[from] SoergelError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("d∘d ≠ 0 {0}")]
    NotAComplex(String),
    #[error("cannot decompose {0} with the catalogue")]
    NotDecomposable(String),
    #[error("word lies outside the catalogued ideal")]
    OutsideIdeal,
    #[error("word is not reduced")]
    NotReduced,
    #[error("γ_{0} is not positive")]
    NonPositiveGamma(usize),
}

#[cfg(test)]
mod tests;
