//! Exact linear algebra over ℚ and ℚ[x₁,…,xₙ].

pub mod complex;
pub mod graded;
pub mod matrix;
pub mod poly;
pub mod rat;
pub mod scalar;

pub use complex::{cone_defects, induced_rank, is_chain_map, CohomologyGroup, Complex};
pub use graded::{
    kernel_subspace, split_epi_section, split_mono_retraction, BasisElem, GradedMap,
    GradedSpace, Vector,
};
pub use matrix::{fmt_rat_matrix, Matrix, Rref};
pub use poly::{jacobian_at, symbolic_jacobian, Exponent, Poly, PolyRing};
pub use rat::{binomial, factorial, fmt_rat, int, parse_rat, rat, Rat};
pub use scalar::Scalar;
