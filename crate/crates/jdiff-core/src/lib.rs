//! Exact computer algebra for the differential algebra of the modular
//! j-function.
//!
//! The crate is organised in five layers, each usable on its own:
//!
//! * [`poly`] — sparse multivariate polynomials and rational functions over
//!   ℚ, with Groebner bases (Buchberger), elimination, Krull dimension,
//!   saturation, radical membership, resultants, and linear algebra over the
//!   rational-function field.
//! * [`oracle`] — arbitrary-precision evaluation of j(τ) and its first three
//!   derivatives from Eisenstein q-series, modular-polynomial interpolation
//!   with integer recognition, and numeric vanishing tests.  Every derived
//!   constant elsewhere in the crate is validated against this module.
//! * [`modular`] — the j-function's algebraic kernel: modular polynomials
//!   Φ_N, the order-3 ODE `f` (Schwarzian + R), the SL₂ transformation law
//!   for jets, the derived-relation system of modular equations, and the
//!   prolongation (total-derivative) operator.
//! * [`geometry`] / [`atypical`] — j-special, geodesic and D-special
//!   varieties: block decomposition, synthesis by prolongation +
//!   elimination, the four normality predicates, D-special closure, and
//!   dimension-of-intersection (atypicality) analysis.
//! * [`derivation`] — derivation spaces of function fields: Jacobian
//!   kernels, the Λ subspace, Lie brackets and closure, the E_{(z,J)}-
//!   Jacobian, minor stabilization, and the rank/descent lemma checks.

pub mod atypical;
pub mod derivation;
pub mod error;
pub mod geometry;
pub mod modular;
pub mod oracle;
pub mod poly;

pub use error::{Error, Result};
pub use poly::{
    Budget, FieldMatrix, Ideal, MonOrder, Point, Poly, Rat, RatFn, VarSet,
};
