//! Octabasic Laguerre polynomials: exact multivariate Laurent polynomial
//! arithmetic, three-term recurrences and their moments, weighted Motzkin
//! paths, and the Mahonian permutation statistics read off from the moments.

pub mod cli;
pub mod families;
pub mod motzkin;
pub mod oddfamily;
pub mod orthopoly;
pub mod permstat;
pub mod polyring;
pub mod qseries;

pub use polyring::{Monomial, Poly, PolyError, Substitution, Var};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] polyring::PolyError),
    #[error(transparent)]
    Functional(#[from] orthopoly::FunctionalError),
    #[error(transparent)]
    Perm(#[from] permstat::PermError),
    #[error(transparent)]
    Profile(#[from] permstat::ProfileError),
    #[error(transparent)]
    Path(#[from] motzkin::PathError),
}
