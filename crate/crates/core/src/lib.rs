//! Numerical toolkit for planar harmonic mappings `f = h + conj(g)` on the
//! unit disk: the Bloch-type seminorm `β(f) = sup (1 − |z|²) √|J_f(z)|`,
//! structural transformations, univalence margins, schlicht radii and the
//! growth and coefficient inequalities of the class of Bloch-type mappings.

pub mod catalog;
pub mod error;
pub mod extremal;
pub mod geometry;
pub mod mapping;
pub mod report;
pub mod series;
pub mod suites;
pub mod transforms;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use mapping::{
    from_h_and_dilatation, hyperbolic_derivative, AnalyticPart, Dilatation, HarmonicMapping, Jet,
    NormClass,
};
pub use series::{coefficients_via_cauchy, TaylorSeries};
