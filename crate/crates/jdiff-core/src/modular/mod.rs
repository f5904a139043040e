//! The analytic-algebraic kernel of the j-function.
//!
//! Modular polynomials Φ_N (exact Φ₁, oracle-generated goldens beyond),
//! the order-3 algebraic ODE of j with its solved form, the Schwarzian
//! derivative, geodesic matrices in GL₂⁺(ℚ), the A3 jet-transformation
//! law, the A4 derived-relation system, the geodesic derived equation
//! (first and second prolongations of Φ along a matrix), and the general
//! prolongation operator on jet ambients.

mod geomatrix;
pub mod ode;
mod phi;
mod prolong;
mod transform;

pub use geomatrix::GeoMatrix;
pub use ode::{
    h_sym, h_sym_in, j_ode_f_exact, j_ode_f_sym, jet_vars, r_exact,
    r_of_y_sym, r_of_y_sym_in, schwarzian, solve_y3_exact, Jet, JET_VARS,
};
pub use phi::{
    bundled_levels, modular_polynomial, modular_polynomial_from_terms,
    phi_vars, ModularPoly, PHI_X, PHI_Y,
};
pub use prolong::{
    geodesic_derived_equation, prolong, prolong_ratfn, ProlongCtx, BASE_VAR,
};
pub use transform::{
    a3_formulas, a3_transform_exact, a3_vars, a4_formulas, a4_system_exact,
    a4_vars, A3_VARS, A4_VARS,
};
