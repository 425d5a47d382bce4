//! Lefschetz linear algebra on reductions of Soergel bimodules and on coinvariant rings.

mod coinvariant;
mod datum;
mod local;
mod reduction;
mod zeta;

pub use coinvariant::{coinvariant_datum, longest_word, CoinvariantRing, DEFAULT_DIMENSION_CAP};
pub use datum::{
    expected_sign, hard_lefschetz_check, hodge_riemann_check, shifted_vanishing_check, weak_lefschetz_substitute,
    DegreeReport, HardLefschetzReport, Inertia, LefschetzDatum, ShiftedVanishing, SignConvention, SignatureReport,
    WeakLefschetz,
};
pub use local::{embedding_isometry_check, local_and_embedding, local_intersection_form, EmbeddingReport, LocalFormReport};
pub use reduction::{
    descent_split, hard_lefschetz_for, lefschetz_zeta, lefschetz_zeta_module, reduce, reduce_unchecked,
    shifted_vanishing_for, DescentSplit,
};
pub use zeta::{default_grid, zeta_family_scan, ZetaPoint, ZetaScan, MAX_RETRIES};

pub use crate::linalg::signature;

use crate::coxeter::CoxeterError;
use crate::soergel::SoergelError;

#[derive(Debug, thiserror::Error)]
pub enum HodgeError {
    #[error(transparent)]
    Soergel(#[from] SoergelError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not graded: {0}")]
    NotGraded(String),
    #[error("subspace is not stable under the operator")]
    NotStable,
    #[error("the reduced form is degenerate")]
    Degenerate,
    #[error("no form attached to the bimodule")]
    NoForm,
    #[error("zeta must be nonnegative")]
    NegativeZeta,
    #[error("s{s} is not an ascent of element {x}")]
    NotAscent { x: usize, s: usize },
    #[error("the group is infinite or exceeds the dimension cap")]
    Infinite,
    #[error("dimension {dim} exceeds the cap {cap}")]
    TooLarge { dim: usize, cap: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

#[cfg(test)]
mod tests;
