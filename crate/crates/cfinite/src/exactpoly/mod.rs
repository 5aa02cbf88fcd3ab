//! Exact rational scalars and univariate polynomials in two representations:
//! dense coefficient vectors and factored root/multiplicity lists.
//!
//! Recurrence operators are only meaningful up to a nonzero scalar, so every
//! public operation here returns monic results.
//!
//! A polynomial whose roots are all rational tensors into factors whose roots
//! are again rational once the gauge is fixed by a root equal to one: every
//! reconstructed root is then a ratio of two roots of the input.

mod dense;
mod factored;
mod roots;
mod scalar;

pub use dense::{
    gcd, is_squarefree, lcm, reverse, squarefree_decomposition, squarefree_part, DensePoly,
};
pub use factored::{expand, FactoredPoly};
pub use roots::rational_roots;
pub use scalar::{
    format_scalar, format_scalar_list, frac, height, int, parse_scalar, parse_scalar_list,
    ExactScalar,
};
