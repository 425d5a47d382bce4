//! Certificate-producing verifier for the Soergel–Hodge ladder over a finite Bruhat ideal.

use std::path::PathBuf;

pub mod cache;
pub mod certificate;
pub mod certify;
pub mod config;
pub mod kl;
pub mod report;

pub use certificate::{Certificate, Verdict};
pub use certify::{run_certify, RunOptions};
pub use config::{Check, RunConfig};
pub use kl::{kl_table, KlTable};

#[derive(Debug, thiserror::Error)]
pub enum VerifierError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("{}: {1}", .0.display())]
    Io(PathBuf, std::io::Error),
    #[error(transparent)]
    Coxeter(#[from] shl_core::coxeter::CoxeterError),
    #[error(transparent)]
    Hecke(#[from] shl_core::hecke::HeckeError),
    #[error(transparent)]
    Soergel(#[from] shl_core::soergel::SoergelError),
    #[error(transparent)]
    Hodge(#[from] shl_core::hodge::HodgeError),
    #[error(transparent)]
    Rouquier(#[from] shl_core::rouquier::RouquierError),
    #[error("internal: {0}")]
    Internal(String),
}
