//! Exact verification of Hodge theoretic statements about Soergel bimodules.
//!
//! The crate builds Coxeter systems over real cyclotomic fields, Hecke algebras
//! with their Kazhdan–Lusztig bases, Bott–Samelson bimodules with their
//! intersection forms, indecomposable summands, Lefschetz data and Rouquier
//! complexes. Every decision (ranks, signs, definiteness) is made exactly.

pub mod coxeter;
pub mod hecke;
pub mod hodge;
pub mod invpoly;
pub mod linalg;
pub mod numeric;
pub mod rouquier;
pub mod soergel;
