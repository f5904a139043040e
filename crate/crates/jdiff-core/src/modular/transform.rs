//! The A3 jet-transformation law and the A4 derived-relation system.
//!
//! A3 moves a jet of j along a geodesic matrix: if `w = gz` with
//! `F(z) = d(gz)/dz = det(g)/(cz + d)²`, the jet of j at w is expressed
//! through the jet at z by the chain rule,
//! `j₁* = j₁(cz+d)²/det`, `j₂* = j₂(cz+d)⁴/det² + 2c·j₁(cz+d)³/det²`.
//! For det = 1 this is the unimodular transformation law; the determinant
//! normalization keeps everything exact over ℚ for rational matrices.
//!
//! A4 determines the derivatives of j₂ along a modular relation
//! Φ(j₁, j₂) = 0 by implicit differentiation: the first derived equation
//! is linear in j₂′, the second in j₂″.

use crate::error::{Error, Result};
use crate::modular::{GeoMatrix, Jet, ModularPoly};
use crate::poly::{rat, Rat, RatFn, VarSet};

/// Ambient of the symbolic A3 law: the base point and an order-2 jet.
pub const A3_VARS: [&str; 4] = ["z", "Y0", "Y1", "Y2"];

/// The (z, Y0, Y1, Y2) ambient used by `a3_formulas`.
pub fn a3_vars() -> VarSet {
    VarSet::new(&A3_VARS).expect("static variable names")
}

/// Ambient of the symbolic A4 system: (X, X1, X2, Y) stand for
/// (j₁, j₁′, j₁″, j₂).
pub const A4_VARS: [&str; 4] = ["X", "X1", "X2", "Y"];

/// The (X, X1, X2, Y) ambient used by `a4_formulas`.
pub fn a4_vars() -> VarSet {
    VarSet::new(&A4_VARS).expect("static variable names")
}

/// The A3 transformation law as rational functions of (z, Y0, Y1, Y2):
/// returns the jet at gz expressed through the jet at z.
///
/// The transformed jet carries `z = gz` and no third derivative (it is
/// recovered from the ODE when needed).
pub fn a3_formulas(g: &GeoMatrix) -> Result<Jet<RatFn>> {
    if g.is_zero() {
        return Err(Error::UnlinkedPair(
            "the unlinked marker induces no jet transformation".into(),
        ));
    }
    let vars = a3_vars();
    let gz = g.moebius_ratfn(&vars, "z")?;
    let cocycle = RatFn::from_poly(g.cocycle_den(&vars, "z")?);
    let det = RatFn::constant(&vars, Rat::from_integer(g.det()));
    let c_entry = RatFn::constant(
        &vars,
        Rat::from_integer(g.entries()[2].clone()),
    );
    let y0 = RatFn::var(&vars, "Y0")?;
    let y1 = RatFn::var(&vars, "Y1")?;
    let y2 = RatFn::var(&vars, "Y2")?;

    let c2 = cocycle.mul(&cocycle);
    let j1_out = y1.mul(&c2).div(&det)?;
    let det2 = det.mul(&det);
    let j2_out = y2
        .mul(&c2)
        .mul(&c2)
        .div(&det2)?
        .add(
            &c_entry
                .scale(&rat(2))
                .mul(&y1)
                .mul(&c2)
                .mul(&cocycle)
                .div(&det2)?,
        );
    Ok(Jet { z: Some(gz), j: y0, j1: j1_out, j2: j2_out, j3: None })
}

/// Apply the A3 law to an exact rational jet.  The jet must carry its base
/// point `z`; a pole `cz + d = 0` is reported as such.
pub fn a3_transform_exact(g: &GeoMatrix, jet: &Jet<Rat>) -> Result<Jet<Rat>> {
    if g.is_zero() {
        return Err(Error::UnlinkedPair(
            "the unlinked marker induces no jet transformation".into(),
        ));
    }
    let z = jet.z.as_ref().ok_or_else(|| {
        Error::InvalidArgument("A3 needs a jet with a base point z".into())
    })?;
    let [a, b, c, d] = g.to_rats();
    let cocycle = &c * z + &d;
    if cocycle == rat(0) {
        return Err(Error::PoleAtPoint(format!(
            "cz + d = 0 at z = {z} under {g}"
        )));
    }
    let det = Rat::from_integer(g.det());
    let gz = (&a * z + &b) / &cocycle;
    let c2 = &cocycle * &cocycle;
    let j1 = &jet.j1 * &c2 / &det;
    let det2 = &det * &det;
    let j2 = &jet.j2 * &c2 * &c2 / &det2
        + rat(2) * &c * &jet.j1 * &c2 * &cocycle / &det2;
    Ok(Jet { z: Some(gz), j: jet.j.clone(), j1, j2, j3: None })
}

/// The A4 derived-relation system for Φ, solved symbolically: returns
/// (j₂′, j₂″) as rational functions of (X, X1, X2, Y) = (j₁, j₁′, j₁″, j₂),
/// valid where Φ(j₁, j₂) = 0 and ∂Φ/∂Y ≠ 0.
pub fn a4_formulas(phi: &ModularPoly) -> Result<(RatFn, RatFn)> {
    let vars = a4_vars();
    let p = phi.poly_in(&vars, "X", "Y")?;
    let px = RatFn::from_poly(p.partial_derivative("X")?);
    let py = RatFn::from_poly(p.partial_derivative("Y")?);
    let pxx = RatFn::from_poly(
        p.partial_derivative("X")?.partial_derivative("X")?,
    );
    let pxy = RatFn::from_poly(
        p.partial_derivative("X")?.partial_derivative("Y")?,
    );
    let pyy = RatFn::from_poly(
        p.partial_derivative("Y")?.partial_derivative("Y")?,
    );
    let x1 = RatFn::var(&vars, "X1")?;
    let x2 = RatFn::var(&vars, "X2")?;

    // First derived equation: Φ_X·j₁′ + Φ_Y·j₂′ = 0.
    let j2p = px.mul(&x1).div(&py)?.neg();
    // Second: Φ_XX·j₁′² + 2Φ_XY·j₁′j₂′ + Φ_YY·j₂′² + Φ_X·j₁″ + Φ_Y·j₂″ = 0.
    let j2pp = pxx
        .mul(&x1)
        .mul(&x1)
        .add(&pxy.scale(&rat(2)).mul(&x1).mul(&j2p))
        .add(&pyy.mul(&j2p).mul(&j2p))
        .add(&px.mul(&x2))
        .div(&py)?
        .neg();
    Ok((j2p, j2pp))
}

/// Solve the A4 system at an exact rational point.
///
/// Requires Φ(j₁, j₂) = 0 exactly; a vanishing ∂Φ/∂Y(j₁, j₂) is a singular
/// modular point.
pub fn a4_system_exact(
    phi: &ModularPoly,
    j1: &Rat,
    j1p: &Rat,
    j1pp: &Rat,
    j2: &Rat,
) -> Result<(Rat, Rat)> {
    let point = [j1.clone(), j2.clone()];
    if phi.poly().eval_rat(&point) != rat(0) {
        return Err(Error::PointNotOnVariety(format!(
            "Φ_{}({j1}, {j2}) ≠ 0",
            phi.level()
        )));
    }
    let px = phi.poly().partial_derivative("X")?.eval_rat(&point);
    let py = phi.poly().partial_derivative("Y")?.eval_rat(&point);
    if py == rat(0) {
        return Err(Error::SingularModularPoint(format!(
            "∂Φ_{}/∂Y vanishes at ({j1}, {j2})",
            phi.level()
        )));
    }
    let pxx = phi
        .poly()
        .partial_derivative("X")?
        .partial_derivative("X")?
        .eval_rat(&point);
    let pxy = phi
        .poly()
        .partial_derivative("X")?
        .partial_derivative("Y")?
        .eval_rat(&point);
    let pyy = phi
        .poly()
        .partial_derivative("Y")?
        .partial_derivative("Y")?
        .eval_rat(&point);
    let j2p = -(&px * j1p) / &py;
    let j2pp = -(&pxx * j1p * j1p
        + rat(2) * &pxy * j1p * &j2p
        + &pyy * &j2p * &j2p
        + &px * j1pp)
        / &py;
    Ok((j2p, j2pp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::modular_polynomial;
    use crate::oracle::{
        eval_j_jet, eval_ratfn_bigc, BigC, PrecisionCtx,
    };
    use crate::poly::ratq;

    #[test]
    fn a3_identity_is_the_identity() {
        let jet = Jet {
            z: Some(ratq(1, 3)),
            j: rat(5),
            j1: rat(7),
            j2: rat(-2),
            j3: None,
        };
        let out =
            a3_transform_exact(&GeoMatrix::identity(), &jet).unwrap();
        assert_eq!(out, jet);
    }

    #[test]
    fn a3_translation_shifts_only_the_base_point() {
        let g = GeoMatrix::from_integers(1, 1, 0, 1).unwrap();
        let jet = Jet {
            z: Some(ratq(1, 2)),
            j: rat(9),
            j1: rat(4),
            j2: rat(11),
            j3: None,
        };
        let out = a3_transform_exact(&g, &jet).unwrap();
        assert_eq!(out.z, Some(ratq(3, 2)));
        assert_eq!(out.j, rat(9));
        assert_eq!(out.j1, rat(4));
        assert_eq!(out.j2, rat(11));
    }

    #[test]
    fn a3_detects_the_pole() {
        let g = GeoMatrix::from_integers(0, -1, 1, 0).unwrap();
        let jet = Jet {
            z: Some(rat(0)),
            j: rat(1),
            j1: rat(1),
            j2: rat(1),
            j3: None,
        };
        assert!(matches!(
            a3_transform_exact(&g, &jet),
            Err(Error::PoleAtPoint(_))
        ));
        let no_base = Jet {
            z: None,
            j: rat(1),
            j1: rat(1),
            j2: rat(1),
            j3: None,
        };
        let h = GeoMatrix::identity();
        assert!(matches!(
            a3_transform_exact(&h, &no_base),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            a3_formulas(&GeoMatrix::zero()),
            Err(Error::UnlinkedPair(_))
        ));
    }

    #[test]
    fn a3_is_compositional_symbolically() {
        // a3(g·h) = a3(g) ∘ a3(h) as rational-function identities.
        let g = GeoMatrix::from_integers(2, 1, 1, 1).unwrap();
        let h = GeoMatrix::from_integers(1, -1, 2, 3).unwrap();
        let fg = a3_formulas(&g).unwrap();
        let fh = a3_formulas(&h).unwrap();
        let fgh = a3_formulas(&g.compose(&h)).unwrap();
        // Substitute the h-jet into the g-formulas.
        let images = vec![
            fh.z.clone().unwrap(),
            fh.j.clone(),
            fh.j1.clone(),
            fh.j2.clone(),
        ];
        let z = fg.z.unwrap().substitute(&images).unwrap();
        let j1 = fg.j1.substitute(&images).unwrap();
        let j2 = fg.j2.substitute(&images).unwrap();
        assert_eq!(z, fgh.z.unwrap());
        assert_eq!(j1, fgh.j1);
        assert_eq!(j2, fgh.j2);
    }

    #[test]
    fn a3_scaling_invariance() {
        // The law only depends on the projective class.
        let g = GeoMatrix::from_integers(2, 0, 0, 1).unwrap();
        let jet = Jet {
            z: Some(rat(3)),
            j: rat(1),
            j1: rat(1),
            j2: rat(0),
            j3: None,
        };
        let out = a3_transform_exact(&g, &jet).unwrap();
        // det = 2, cocycle = 1: j1 ↦ j1/2, j2 ↦ j2/4.
        assert_eq!(out.z, Some(rat(6)));
        assert_eq!(out.j1, ratq(1, 2));
        assert_eq!(out.j2, rat(0));
    }

    #[test]
    fn a3_matches_the_oracle_along_sl2() {
        // For g ∈ SL₂(ℤ), the transformed jet at τ equals the oracle jet
        // at gτ within 1e−20 (j is SL₂(ℤ)-invariant).
        let ctx = PrecisionCtx::new(128).unwrap();
        // Base points are chosen so gτ stays in the certified domain
        // Im ≥ 0.8 (for c ≠ 0, Im gτ = Im τ / |cτ + d|²).
        let cases = [
            (1i64, 1, 0, 1, 0.11, 1.02),
            (0, -1, 1, 0, 0.11, 1.02),
            (2, 1, 1, 1, -0.7, 1.0),
        ];
        for (a, b, c, d, re, im) in cases {
            let tau = BigC::from_f64s(re, im, &ctx);
            let jet = eval_j_jet(&tau, &ctx).unwrap();
            let g = GeoMatrix::from_integers(a, b, c, d).unwrap();
            let f = a3_formulas(&g).unwrap();
            let point = vec![
                tau.clone(),
                jet.j.clone(),
                jet.j1.clone(),
                jet.j2.clone(),
            ];
            let gz = eval_ratfn_bigc(
                f.z.as_ref().unwrap(),
                &point,
                &ctx,
                1e-30,
            )
            .unwrap();
            let target = eval_j_jet(&gz, &ctx).unwrap();
            for (formula, want) in
                [(&f.j, &target.j), (&f.j1, &target.j1), (&f.j2, &target.j2)]
            {
                let got =
                    eval_ratfn_bigc(formula, &point, &ctx, 1e-30).unwrap();
                let err = got.sub(want, &ctx).abs_f64(&ctx);
                assert!(
                    err < 1e-20,
                    "A3 mismatch {err:.3e} for [[{a},{b}],[{c},{d}]]"
                );
            }
        }
    }

    #[test]
    fn a4_along_phi1_echoes_the_first_jet() {
        let phi1 = modular_polynomial(1).unwrap();
        let (j2p, j2pp) = a4_system_exact(
            &phi1,
            &rat(17),
            &rat(3),
            &ratq(-5, 2),
            &rat(17),
        )
        .unwrap();
        assert_eq!(j2p, rat(3));
        assert_eq!(j2pp, ratq(-5, 2));
        // Symbolically: j₂′ = X1 and j₂″ = X2.
        let vars = a4_vars();
        let (sp, spp) = a4_formulas(&phi1).unwrap();
        assert_eq!(sp, RatFn::var(&vars, "X1").unwrap());
        assert_eq!(spp, RatFn::var(&vars, "X2").unwrap());
    }

    #[test]
    fn a4_rejects_off_curve_points_and_singular_points() {
        let phi1 = modular_polynomial(1).unwrap();
        assert!(matches!(
            a4_system_exact(&phi1, &rat(1), &rat(1), &rat(1), &rat(2)),
            Err(Error::PointNotOnVariety(_))
        ));
        // (−3375, −3375) is a node of Φ₂ = 0 (the discriminant −7 CM
        // point): the curve passes through it but both partials vanish.
        let phi2 = modular_polynomial(2).unwrap();
        assert!(matches!(
            a4_system_exact(&phi2, &rat(-3375), &rat(1), &rat(0), &rat(-3375)),
            Err(Error::SingularModularPoint(_))
        ));
    }

    #[test]
    fn a4_recovers_the_hecke_derivatives_numerically() {
        // Along Φ₂ at (j(τ), j(2τ)): j₂′ = 2j′(2τ), j₂″ = 4j″(2τ).
        let ctx = PrecisionCtx::new(192).unwrap();
        let phi2 = modular_polynomial(2).unwrap();
        let (j2p, j2pp) = a4_formulas(&phi2).unwrap();
        let tau = BigC::from_f64s(0.07, 1.13, &ctx);
        let two_tau = tau.add(&tau, &ctx);
        let jet1 = eval_j_jet(&tau, &ctx).unwrap();
        let jet2 = eval_j_jet(&two_tau, &ctx).unwrap();
        let point = vec![
            jet1.j.clone(),
            jet1.j1.clone(),
            jet1.j2.clone(),
            jet2.j.clone(),
        ];
        let got_p = eval_ratfn_bigc(&j2p, &point, &ctx, 1e-30).unwrap();
        let want_p = jet2.j1.scale_i64(2, &ctx);
        let err_p = got_p.sub(&want_p, &ctx).abs_f64(&ctx);
        assert!(err_p < 1e-18, "j₂′ error {err_p:.3e}");
        let got_pp = eval_ratfn_bigc(&j2pp, &point, &ctx, 1e-30).unwrap();
        let want_pp = jet2.j2.scale_i64(4, &ctx);
        let err_pp = got_pp.sub(&want_pp, &ctx).abs_f64(&ctx);
        assert!(err_pp < 1e-18, "j₂″ error {err_pp:.3e}");
    }
}
