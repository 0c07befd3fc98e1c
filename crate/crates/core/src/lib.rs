//! Exact symplectic cohomology of Lie-algebra complexes.
//!
//! Everything is computed over the Gaussian rationals with exact
//! arithmetic: Chevalley–Eilenberg complexes of Lie algebras given by
//! structure equations, the symplectic operators `L`, `Λ`, `⋆`, `d^Λ`, and
//! the de Rham, `d^Λ`, Bott–Chern and Aeppli cohomologies of bi-differential
//! complexes, including twisted and character-weighted variants.

pub mod cohomology;
pub mod complex;
pub mod exterior;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod presentation;
pub mod scalar;
pub mod symplectic;
pub mod twisted;
pub mod weights;

pub use cohomology::{verdicts, CohomologyKind, CohomologySpace, InducedMap, VerdictReport};
pub use complex::BiDifferentialComplex;
pub use exterior::{interior_product, wedge, Bivector, Form, GradedBasis, Monomial};
pub use linalg::{Matrix, Quotient, Subspace};
pub use presentation::{ce_differential, parse_structure, validate_presentation, LieAlgebraPresentation};
pub use scalar::Scalar;
pub use symplectic::{build_symplectic, SymplecticOperators, SymplecticStructure};
pub use twisted::{twisted_complex, TwistConnection};
pub use weights::{gamma_subcomplex, untwist, WeightedPresentation};
