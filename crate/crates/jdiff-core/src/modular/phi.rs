//! Modular polynomials Φ_N and their cached goldens.
//!
//! Φ₁ = X − Y is exact; every other supported level is loaded from a
//! golden file generated by the interpolation oracle and re-verified
//! against a fresh interpolation in tests.  Nothing here hard-codes a
//! modular polynomial.

use num_traits::One;

use crate::error::{Error, Result};
use crate::oracle::{
    interpolate_modular_polynomial, parse_golden, psi, ModTerm, PrecisionCtx,
};
use crate::poly::{poly_gcd, Poly, Rat, VarSet};

/// Variable names of the canonical two-variable ambient of Φ_N.
pub const PHI_X: &str = "X";
pub const PHI_Y: &str = "Y";

/// Golden files bundled with the crate.  Level 1 is exact and has none.
const GOLDEN_LEVELS: [(u32, &str); 4] = [
    (2, include_str!("../oracle/goldens/phi_2.txt")),
    (3, include_str!("../oracle/goldens/phi_3.txt")),
    (4, include_str!("../oracle/goldens/phi_4.txt")),
    (5, include_str!("../oracle/goldens/phi_5.txt")),
];

/// The levels with bundled goldens, in ascending order (not counting the
/// exact level 1).
pub fn bundled_levels() -> Vec<u32> {
    GOLDEN_LEVELS.iter().map(|(n, _)| *n).collect()
}

/// A modular polynomial Φ_N in the ambient (X, Y).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularPoly {
    level: u32,
    poly: Poly,
}

/// The canonical (X, Y) ambient.
pub fn phi_vars() -> VarSet {
    VarSet::new(&[PHI_X, PHI_Y]).expect("static variable names")
}

impl ModularPoly {
    /// Level N.
    pub fn level(&self) -> u32 {
        self.level
    }

    /// The polynomial in the ambient (X, Y).
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// The polynomial transplanted into `target`, with X ↦ `x`, Y ↦ `y`.
    pub fn poly_in(&self, target: &VarSet, x: &str, y: &str) -> Result<Poly> {
        let xi = target.index_or_err(x)?;
        let yi = target.index_or_err(y)?;
        if xi == yi {
            return Err(Error::InvalidArgument(format!(
                "Φ needs two distinct variables, got {x} twice"
            )));
        }
        Ok(Poly::from_terms(
            target,
            self.poly.terms().map(|(exp, c)| {
                let mut e = vec![0u32; target.len()];
                e[xi] = exp[0];
                e[yi] = exp[1];
                (e, c.clone())
            }),
        ))
    }

    /// Integer term list `(exp_X, exp_Y, coefficient)` sorted
    /// lexicographically, as used by the golden format.
    pub fn terms_integer(&self) -> Vec<ModTerm> {
        let mut out: Vec<ModTerm> = self
            .poly
            .terms()
            .map(|(exp, c)| {
                debug_assert!(c.denom().is_one(), "Φ coefficients are integers");
                (exp[0], exp[1], c.numer().clone())
            })
            .collect();
        out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out
    }

    /// Exact symmetry check Φ(X, Y) = Φ(Y, X).
    pub fn is_symmetric(&self) -> bool {
        let vars = self.poly.vars();
        let swapped = Poly::from_terms(
            vars,
            self.poly
                .terms()
                .map(|(exp, c)| (vec![exp[1], exp[0]], c.clone())),
        );
        swapped == self.poly
    }

    /// Structural invariants: integer coefficients; bidegree (ψ(N), ψ(N))
    /// and monicity in both variables for N ≥ 2 (which rules out factors
    /// of degree ≤ 1); symmetry for N ≥ 2; squarefreeness.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidInput(msg));
        for (_, c) in self.poly.terms() {
            if !c.denom().is_one() {
                return fail(format!(
                    "Φ_{} has a non-integer coefficient {c}",
                    self.level
                ));
            }
        }
        if self.level == 1 {
            let vars = self.poly.vars();
            let expect = Poly::var(vars, PHI_X)?.sub(&Poly::var(vars, PHI_Y)?);
            if self.poly != expect {
                return fail("Φ₁ must be X − Y".into());
            }
            return Ok(());
        }
        let deg = psi(self.level);
        for (i, name) in [PHI_X, PHI_Y].iter().enumerate() {
            if self.poly.degree_in_idx(i) != Some(deg) {
                return fail(format!(
                    "Φ_{} must have degree ψ = {deg} in {name}",
                    self.level
                ));
            }
            // Monic: the coefficient of name^ψ (the other variable absent).
            let mut exp = vec![0u32; 2];
            exp[i] = deg;
            if self.poly.coeff(&exp) != Rat::one() {
                return fail(format!(
                    "Φ_{} must be monic in {name}",
                    self.level
                ));
            }
            // No other term reaches degree ψ in this variable: together
            // with monicity this pins the leading form, so any factor has
            // positive degree in both variables; a degree-≤1 factor would
            // force ψ ≤ 1, which never happens for N ≥ 2.
            for (e, _) in self.poly.terms() {
                if e[i] == deg && e[1 - i] > 0 {
                    return fail(format!(
                        "Φ_{} has a mixed term at top {name}-degree",
                        self.level
                    ));
                }
            }
        }
        if !self.is_symmetric() {
            return fail(format!("Φ_{} is not symmetric", self.level));
        }
        let dx = self.poly.partial_derivative(PHI_X)?;
        if !poly_gcd(&self.poly, &dx).is_constant() {
            return fail(format!("Φ_{} is not squarefree", self.level));
        }
        Ok(())
    }

    /// Re-interpolate Φ_N from q-expansions and compare
    /// coefficient-for-coefficient with this polynomial.
    pub fn verify_against_oracle(&self, ctx: &PrecisionCtx) -> Result<()> {
        let fresh = interpolate_modular_polynomial(self.level, ctx)?;
        if fresh != self.terms_integer() {
            return Err(Error::InvalidInput(format!(
                "cached Φ_{} differs from a fresh interpolation",
                self.level
            )));
        }
        Ok(())
    }
}

/// Build a `ModularPoly` from an integer term list (e.g. a parsed golden
/// file or a fresh interpolation), validating the structural invariants.
pub fn modular_polynomial_from_terms(
    level: u32,
    terms: &[ModTerm],
) -> Result<ModularPoly> {
    let vars = phi_vars();
    let poly = Poly::from_terms(
        &vars,
        terms.iter().map(|(x, y, c)| {
            (vec![*x, *y], Rat::from_integer(c.clone()))
        }),
    );
    if poly.is_zero() {
        return Err(Error::InvalidInput(format!(
            "level-{level} term list is empty"
        )));
    }
    let out = ModularPoly { level, poly };
    out.check_invariants()?;
    Ok(out)
}

/// The modular polynomial Φ_N.
///
/// Level 1 is `X − Y` exactly; levels with bundled goldens are parsed from
/// the cached files; anything else is an unsupported level.
pub fn modular_polynomial(n: u32) -> Result<ModularPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "modular polynomial level must be positive".into(),
        ));
    }
    if n == 1 {
        let vars = phi_vars();
        let poly = Poly::var(&vars, PHI_X)?.sub(&Poly::var(&vars, PHI_Y)?);
        return Ok(ModularPoly { level: 1, poly });
    }
    for (level, text) in GOLDEN_LEVELS {
        if level == n {
            let (parsed_level, terms) = parse_golden(text)?;
            if parsed_level != n {
                return Err(Error::InvalidInput(format!(
                    "golden for Φ_{n} carries level {parsed_level}"
                )));
            }
            return modular_polynomial_from_terms(n, &terms);
        }
    }
    Err(Error::UnsupportedLevel(n))
}
