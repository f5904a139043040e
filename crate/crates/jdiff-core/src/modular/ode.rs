//! The order-3 algebraic ODE satisfied by the j-function.
//!
//! `f(Y₀,Y₁,Y₂,Y₃) = Y₃/Y₁ − (3/2)(Y₂/Y₁)² + R(Y₀)·Y₁²` with
//! `R(y) = (y² − 1968y + 2654208)/(2y²(y − 1728)²)`; f is linear in Y₃, so
//! the equation can be solved as `y‴ = h(y, y′, y″)`.  The first two
//! summands of f form the Schwarzian derivative of the inverse function.

use crate::error::{Error, Result};
use crate::poly::{rat, ratq, Poly, Rat, RatFn, VarSet};

/// Jet variable names: Y0 = y, Y1 = y′, Y2 = y″, Y3 = y‴.
pub const JET_VARS: [&str; 4] = ["Y0", "Y1", "Y2", "Y3"];

/// The four-variable jet ambient (Y0, Y1, Y2, Y3).
pub fn jet_vars() -> VarSet {
    VarSet::new(&JET_VARS).expect("static variable names")
}

/// A jet of a function at a point: optionally the point `z`, the value and
/// up to three derivatives.  `j3` is optional because the A3/A4 layer works
/// with order-2 jets and recovers the third derivative from the ODE.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet<T> {
    pub z: Option<T>,
    pub j: T,
    pub j1: T,
    pub j2: T,
    pub j3: Option<T>,
}

/// `R(Y0) = (Y0² − 1968·Y0 + 2654208) / (2·Y0²·(Y0 − 1728)²)` as a rational
/// function in the ambient `vars` with `y` naming Y0.
pub fn r_of_y_sym_in(vars: &VarSet, y: &str) -> Result<RatFn> {
    let y0 = Poly::var(vars, y)?;
    let num = y0
        .mul(&y0)
        .sub(&y0.scale(&rat(1968)))
        .add(&Poly::constant(vars, rat(2_654_208)));
    let shifted = y0.sub(&Poly::constant(vars, rat(1728)));
    let den = y0.mul(&y0).mul(&shifted.mul(&shifted)).scale(&rat(2));
    RatFn::new(num, den)
}

/// `R(Y0)` in the one-variable ambient (Y0).
pub fn r_of_y_sym() -> RatFn {
    let vars = VarSet::new(&["Y0"]).expect("static variable names");
    r_of_y_sym_in(&vars, "Y0").expect("R is well-formed")
}

/// The ODE left-hand side `f(Y0, Y1, Y2, Y3)` in the jet ambient.
pub fn j_ode_f_sym() -> RatFn {
    let vars = jet_vars();
    let y1 = RatFn::var(&vars, "Y1").expect("jet ambient");
    let y2 = RatFn::var(&vars, "Y2").expect("jet ambient");
    let y3 = RatFn::var(&vars, "Y3").expect("jet ambient");
    let r = r_of_y_sym_in(&vars, "Y0").expect("R is well-formed");
    let s = y2.div(&y1).expect("Y1 is not the zero function");
    y3.div(&y1)
        .expect("Y1 is not the zero function")
        .sub(&s.mul(&s).scale(&ratq(3, 2)))
        .add(&r.mul(&y1).mul(&y1))
}

/// The solved form `h(Y0, Y1, Y2)` with `f(Y0, Y1, Y2, h) ≡ 0`, i.e.
/// `h = (3/2)·Y2²/Y1 − R(Y0)·Y1³`, in the ambient `vars` with the given
/// names for (Y0, Y1, Y2).
pub fn h_sym_in(vars: &VarSet, y0: &str, y1: &str, y2: &str) -> Result<RatFn> {
    let r = r_of_y_sym_in(vars, y0)?;
    let y1 = RatFn::var(vars, y1)?;
    let y2 = RatFn::var(vars, y2)?;
    Ok(y2
        .mul(&y2)
        .scale(&ratq(3, 2))
        .div(&y1)?
        .sub(&r.mul(&y1).mul(&y1).mul(&y1)))
}

/// `h(Y0, Y1, Y2)` in the three-variable ambient (Y0, Y1, Y2).
pub fn h_sym() -> RatFn {
    let vars = VarSet::new(&["Y0", "Y1", "Y2"]).expect("static variable names");
    h_sym_in(&vars, "Y0", "Y1", "Y2").expect("h is well-formed")
}

fn check_jet_domain(j: &Rat, j1: &Rat) -> Result<()> {
    if j1 == &Rat::from_integer(0.into()) {
        return Err(Error::DegenerateJet(
            "j′ = 0: the ODE cannot be evaluated at an elliptic point".into(),
        ));
    }
    if j == &rat(0) || j == &rat(1728) {
        return Err(Error::PoleOfR(format!(
            "R has a pole at j = {j}"
        )));
    }
    Ok(())
}

/// `R(j)` at an exact rational point.
pub fn r_exact(j: &Rat) -> Result<Rat> {
    if j == &rat(0) || j == &rat(1728) {
        return Err(Error::PoleOfR(format!("R has a pole at j = {j}")));
    }
    let num = j * j - Rat::from_integer(1968.into()) * j
        + Rat::from_integer(2_654_208.into());
    let shifted = j - Rat::from_integer(1728.into());
    let den = Rat::from_integer(2.into()) * j * j * &shifted * &shifted;
    Ok(num / den)
}

/// `f(j, j1, j2, j3)` at an exact rational jet.
pub fn j_ode_f_exact(j: &Rat, j1: &Rat, j2: &Rat, j3: &Rat) -> Result<Rat> {
    check_jet_domain(j, j1)?;
    let s = j2 / j1;
    Ok(j3 / j1 - ratq(3, 2) * &s * &s + r_exact(j)? * j1 * j1)
}

/// The unique `j3` with `f(j, j1, j2, j3) = 0` at an exact rational jet.
pub fn solve_y3_exact(j: &Rat, j1: &Rat, j2: &Rat) -> Result<Rat> {
    check_jet_domain(j, j1)?;
    let s = j2 / j1;
    Ok((ratq(3, 2) * &s * &s - r_exact(j)? * j1 * j1) * j1)
}

/// The Schwarzian derivative `Sy = y‴/y′ − (3/2)(y″/y′)²` of a rational
/// function with respect to the variable `zname`.
pub fn schwarzian(y: &RatFn, zname: &str) -> Result<RatFn> {
    let y1 = y.partial_derivative(zname)?;
    if y1.is_zero() {
        return Err(Error::DegenerateJet(
            "constant function has no Schwarzian derivative".into(),
        ));
    }
    let y2 = y1.partial_derivative(zname)?;
    let y3 = y2.partial_derivative(zname)?;
    let s = y2.div(&y1)?;
    Ok(y3.div(&y1)?.sub(&s.mul(&s).scale(&ratq(3, 2))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{
        eval_j_jet, eval_ratfn_bigc, BigC, PrecisionCtx,
    };

    #[test]
    fn f_reduces_to_r_on_unit_speed_jets() {
        // f(y, 1, 0, 0) = R(y): the first two summands vanish.
        let j = ratq(7, 3);
        let f = j_ode_f_exact(&j, &rat(1), &rat(0), &rat(0)).unwrap();
        assert_eq!(f, r_exact(&j).unwrap());
        // And solve_y3(y, 1, 0) = −R(y).
        let s = solve_y3_exact(&j, &rat(1), &rat(0)).unwrap();
        assert_eq!(s, -r_exact(&j).unwrap());
    }

    #[test]
    fn solve_y3_round_trips_exactly() {
        let samples = [
            (rat(5), rat(2), rat(-3)),
            (ratq(1, 2), ratq(-4, 7), rat(11)),
            (rat(-100), rat(1), rat(0)),
        ];
        for (j, j1, j2) in samples {
            let j3 = solve_y3_exact(&j, &j1, &j2).unwrap();
            let f = j_ode_f_exact(&j, &j1, &j2, &j3).unwrap();
            assert_eq!(f, rat(0));
        }
    }

    #[test]
    fn symbolic_f_vanishes_on_symbolic_h() {
        // f(Y0, Y1, Y2, h(Y0, Y1, Y2)) ≡ 0 as a rational function.
        let vars = jet_vars();
        let f = j_ode_f_sym();
        let h = h_sym_in(&vars, "Y0", "Y1", "Y2").unwrap();
        let images = vec![
            RatFn::var(&vars, "Y0").unwrap(),
            RatFn::var(&vars, "Y1").unwrap(),
            RatFn::var(&vars, "Y2").unwrap(),
            h,
        ];
        let composed = f.substitute(&images).unwrap();
        assert!(composed.is_zero());
    }

    #[test]
    fn domain_guards_fire() {
        assert!(matches!(
            j_ode_f_exact(&rat(5), &rat(0), &rat(1), &rat(1)),
            Err(Error::DegenerateJet(_))
        ));
        assert!(matches!(
            j_ode_f_exact(&rat(0), &rat(1), &rat(1), &rat(1)),
            Err(Error::PoleOfR(_))
        ));
        assert!(matches!(
            solve_y3_exact(&rat(1728), &rat(1), &rat(1)),
            Err(Error::PoleOfR(_))
        ));
        assert!(matches!(r_exact(&rat(1728)), Err(Error::PoleOfR(_))));
    }

    #[test]
    fn oracle_jets_satisfy_f_and_solve_y3() {
        // |f(jet)| < 1e−25 at τ = 2i and solve_y3 reproduces j‴ at τ = 1+2i.
        let ctx = PrecisionCtx::new(128).unwrap();
        let f = j_ode_f_sym();
        let jet = eval_j_jet(&BigC::from_f64s(0.0, 2.0, &ctx), &ctx).unwrap();
        let point = vec![
            jet.j.clone(),
            jet.j1.clone(),
            jet.j2.clone(),
            jet.j3.clone(),
        ];
        let v = eval_ratfn_bigc(&f, &point, &ctx, 1e-30).unwrap();
        assert!(v.abs_f64(&ctx) < 1e-25, "f residual {:.3e}", v.abs_f64(&ctx));

        let h = h_sym();
        let jet = eval_j_jet(&BigC::from_f64s(1.0, 2.0, &ctx), &ctx).unwrap();
        let hv = eval_ratfn_bigc(
            &h,
            &[jet.j.clone(), jet.j1.clone(), jet.j2.clone()],
            &ctx,
            1e-30,
        )
        .unwrap();
        let err = hv.sub(&jet.j3, &ctx).abs_f64(&ctx);
        assert!(err < 1e-20, "solve_y3 error {err:.3e}");
    }

    #[test]
    fn schwarzian_examples() {
        let vars = VarSet::new(&["z"]).unwrap();
        // S(z) = 0.
        let z = RatFn::var(&vars, "z").unwrap();
        assert!(schwarzian(&z, "z").unwrap().is_zero());
        // Möbius functions have vanishing Schwarzian.
        let num = Poly::parse("3*z - 2", &vars).unwrap();
        let den = Poly::parse("z + 5", &vars).unwrap();
        let moebius = RatFn::new(num, den).unwrap();
        assert!(schwarzian(&moebius, "z").unwrap().is_zero());
        // S(z²) = −3/(2z²).
        let zsq = z.mul(&z);
        let s = schwarzian(&zsq, "z").unwrap();
        let expect = RatFn::new(
            Poly::constant(&vars, ratq(-3, 2)),
            Poly::parse("z^2", &vars).unwrap(),
        )
        .unwrap();
        assert_eq!(s, expect);
        // Constants are degenerate.
        let c = RatFn::constant(&vars, rat(4));
        assert!(matches!(
            schwarzian(&c, "z"),
            Err(Error::DegenerateJet(_))
        ));
    }

    #[test]
    fn schwarzian_of_j_matches_the_ode_head() {
        // For any non-Möbius y, Sy = f(y jets) − R(y)·y′², symbolically:
        // check on y = z³ in the (z) ambient.
        let vars = VarSet::new(&["z"]).unwrap();
        let y = RatFn::var(&vars, "z").unwrap().pow(3).unwrap();
        let y1 = y.partial_derivative("z").unwrap();
        let y2 = y1.partial_derivative("z").unwrap();
        let y3 = y2.partial_derivative("z").unwrap();
        let s = schwarzian(&y, "z").unwrap();
        let direct = y3
            .div(&y1)
            .unwrap()
            .sub(&y2.div(&y1).unwrap().pow(2).unwrap().scale(&ratq(3, 2)));
        assert_eq!(s, direct);
    }
}
