//! Tensor products of C-finite recurrence operators and their inverse problem.
//!
//! A C-finite sequence is annihilated by a polynomial `p` acting through the
//! shift. Term-wise products of solutions of `p` and `q` are annihilated by
//! `p ⊗ q`, whose roots are the pairwise products of roots. This crate
//! computes such products exactly and searches for factorizations
//! `r = p ⊗ q` and decompositions `r = lcm(p₁ ⊗ q₁, p₂ ⊗ q₂)`.

pub mod cli;
pub mod error;
pub mod exactpoly;
pub mod gridsearch;
pub mod lincomb;
pub mod multiplicity;
pub mod oracle;
pub mod sequences;
pub mod tensor;

pub use error::{Error, Result};
