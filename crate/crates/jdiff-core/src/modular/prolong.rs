//! Prolongation: the total derivative along a tuple of geodesic members.
//!
//! A prolongation context fixes a base variable z and a list of member
//! matrices g₁, …, g_n.  Member i carries jet coordinates
//! (y_i, y_i_1, y_i_2) for the values of j and its first two derivatives
//! at z_i = g_i(z), and the chain-rule factor
//! `F_i = dz_i/dz = det(g_i)/(c_i z + d_i)²`.  The total derivative acts by
//! `∂z = 1`, `∂y_i = y_i_1·F_i`, `∂y_i_1 = y_i_2·F_i`, and
//! `∂y_i_2 = h(y_i, y_i_1, y_i_2)·F_i`, where h is the solved third
//! derivative of the j-ODE — order-2 jets are closed under prolongation.
//!
//! `prolong_ratfn` is the exact derivation on the fraction field;
//! `prolong` clears denominators, which preserves the vanishing locus away
//! from the cocycle zeros and the ODE poles (downstream consumers saturate
//! those out).

use crate::error::{Error, Result};
use crate::modular::ode::h_sym_in;
use crate::modular::{GeoMatrix, ModularPoly};
use crate::poly::{Poly, RatFn, VarSet};

/// The base variable of every prolongation ambient.
pub const BASE_VAR: &str = "z";

/// A prolongation context: the jet ambient for a member tuple and the
/// per-member derivative factors.
#[derive(Clone, Debug)]
pub struct ProlongCtx {
    vars: VarSet,
    stems: Vec<String>,
    members: Vec<GeoMatrix>,
    factors: Vec<RatFn>,
}

impl ProlongCtx {
    /// Context for members named y1, …, yn linked by the given matrices.
    pub fn new(members: &[GeoMatrix]) -> Result<ProlongCtx> {
        let stems: Vec<String> =
            (1..=members.len()).map(|i| format!("y{i}")).collect();
        let stem_refs: Vec<&str> = stems.iter().map(|s| s.as_str()).collect();
        ProlongCtx::with_names(&stem_refs, members)
    }

    /// Context with explicit member stems: member i gets jet coordinates
    /// `<stem>`, `<stem>_1`, `<stem>_2` in an ambient
    /// (z, stems…, stems_1…, stems_2…).
    pub fn with_names(
        stems: &[&str],
        members: &[GeoMatrix],
    ) -> Result<ProlongCtx> {
        if stems.len() != members.len() {
            return Err(Error::InvalidArgument(format!(
                "{} member names for {} matrices",
                stems.len(),
                members.len()
            )));
        }
        if members.is_empty() {
            return Err(Error::InvalidArgument(
                "a prolongation context needs at least one member".into(),
            ));
        }
        for (s, g) in stems.iter().zip(members) {
            if g.is_zero() {
                return Err(Error::UnlinkedPair(format!(
                    "member {s} is linked by the zero marker"
                )));
            }
        }
        let mut names: Vec<String> = vec![BASE_VAR.to_string()];
        for order in 0..3u32 {
            for s in stems {
                names.push(match order {
                    0 => (*s).to_string(),
                    _ => format!("{s}_{order}"),
                });
            }
        }
        let vars = VarSet::new(&names)?;
        let factors = members
            .iter()
            .map(|g| g.derivative_factor(&vars, BASE_VAR))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProlongCtx {
            vars,
            stems: stems.iter().map(|s| (*s).to_string()).collect(),
            members: members.to_vec(),
            factors,
        })
    }

    /// The jet ambient (z, y…, y_1…, y_2…).
    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Whether the context has no members (never true for a built context).
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The member matrices.
    pub fn members(&self) -> &[GeoMatrix] {
        &self.members
    }

    /// The member stems.
    pub fn stems(&self) -> &[String] {
        &self.stems
    }

    /// The derivative factor `det(g_i)/(c_i z + d_i)²` of member `i`.
    pub fn factor(&self, i: usize) -> &RatFn {
        &self.factors[i]
    }

    /// Name of the order-`k` jet coordinate of member `i` (k ≤ 2).
    pub fn jet_name(&self, i: usize, k: u32) -> String {
        match k {
            0 => self.stems[i].clone(),
            _ => format!("{}_{k}", self.stems[i]),
        }
    }

    /// The product of all cocycle denominators `∏ᵢ(cᵢz + dᵢ)`, the factor
    /// that denominator clearing can introduce; synthesis saturates by it.
    pub fn cocycle_product(&self) -> Result<Poly> {
        let mut p = Poly::one(&self.vars);
        for g in &self.members {
            p = p.mul(&g.cocycle_den(&self.vars, BASE_VAR)?);
        }
        Ok(p)
    }
}

/// The exact total derivative of a rational function in the context's
/// ambient (a derivation on the fraction field).
pub fn prolong_ratfn(f: &RatFn, ctx: &ProlongCtx) -> Result<RatFn> {
    let f = if f.vars() == ctx.vars() {
        f.clone()
    } else {
        f.embed(ctx.vars())?
    };
    let mut total = f.partial_derivative(BASE_VAR)?;
    for i in 0..ctx.len() {
        let fac = ctx.factor(i);
        for k in 0..3u32 {
            let df = f.partial_derivative(&ctx.jet_name(i, k))?;
            if df.is_zero() {
                continue;
            }
            let rate = match k {
                0 | 1 => {
                    RatFn::var(ctx.vars(), &ctx.jet_name(i, k + 1))?
                }
                _ => h_sym_in(
                    ctx.vars(),
                    &ctx.jet_name(i, 0),
                    &ctx.jet_name(i, 1),
                    &ctx.jet_name(i, 2),
                )?,
            };
            total = total.add(&df.mul(&rate).mul(fac));
        }
    }
    Ok(total)
}

/// The total derivative of a polynomial with denominators cleared: the
/// integer-primitive numerator of `prolong_ratfn`.
pub fn prolong(p: &Poly, ctx: &ProlongCtx) -> Result<Poly> {
    let d = prolong_ratfn(&RatFn::from_poly(p.clone()), ctx)?;
    Ok(d.num().primitive())
}

/// The geodesic derived equation of Φ along g (Eq. 6.1) and its
/// prolongation, with denominators cleared.
///
/// The ambient is (z, y1, y2, y1_1, y2_1, y1_2, y2_2), member 1 linked by
/// the identity and member 2 by g.  The first polynomial is the cleared
/// form of `∂Φ/∂X(y₁,y₂)·y₁′ + F·∂Φ/∂Y(y₁,y₂)·y₂′` with
/// `F = det(g)/(cz + d)²`; the second is its prolongation.
pub fn geodesic_derived_equation(
    phi: &ModularPoly,
    g: &GeoMatrix,
) -> Result<(Poly, Poly)> {
    if g.is_zero() {
        return Err(Error::UnlinkedPair(
            "the coordinate pair is unlinked (zero marker)".into(),
        ));
    }
    let ctx = ProlongCtx::new(&[GeoMatrix::identity(), g.clone()])?;
    let p = phi.poly_in(ctx.vars(), "y1", "y2")?;
    let eq1 = prolong(&p, &ctx)?;
    let eq2 = prolong(&eq1, &ctx)?;
    Ok((eq1, eq2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::modular_polynomial;
    use crate::oracle::{
        eval_j_jet, eval_poly_bigc, BigC, PrecisionCtx,
    };
    use crate::poly::rat;

    fn trivial_ctx() -> ProlongCtx {
        ProlongCtx::new(&[GeoMatrix::identity()]).unwrap()
    }

    #[test]
    fn prolong_of_coordinates() {
        let ctx = trivial_ctx();
        let v = ctx.vars().clone();
        let y1 = Poly::var(&v, "y1").unwrap();
        assert_eq!(
            prolong(&y1, &ctx).unwrap(),
            Poly::var(&v, "y1_1").unwrap()
        );
        let z2 = Poly::parse("z^2", &v).unwrap();
        assert_eq!(prolong(&z2, &ctx).unwrap(), Poly::parse("z", &v).unwrap());
        // prolong clears content: D(z²) = 2z, primitive part z.
    }

    #[test]
    fn prolong_is_a_derivation_on_the_fraction_field() {
        let g = GeoMatrix::from_integers(1, -1, 1, 1).unwrap();
        let ctx =
            ProlongCtx::new(&[GeoMatrix::identity(), g]).unwrap();
        let v = ctx.vars().clone();
        let p = RatFn::from_poly(
            Poly::parse("z*y1 + y2_1", &v).unwrap(),
        );
        let q = RatFn::new(
            Poly::parse("y2 + z", &v).unwrap(),
            Poly::parse("y1_1 - 1", &v).unwrap(),
        )
        .unwrap();
        let lhs = prolong_ratfn(&p.mul(&q), &ctx).unwrap();
        let rhs = p
            .mul(&prolong_ratfn(&q, &ctx).unwrap())
            .add(&q.mul(&prolong_ratfn(&p, &ctx).unwrap()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_holds_through_the_h_substitution() {
        // p contains an order-2 jet, so D(p) routes through h.
        let ctx = trivial_ctx();
        let v = ctx.vars().clone();
        let p = RatFn::var(&v, "y1_2").unwrap();
        let q = RatFn::var(&v, "y1").unwrap();
        let lhs = prolong_ratfn(&p.mul(&q), &ctx).unwrap();
        let rhs = p
            .mul(&prolong_ratfn(&q, &ctx).unwrap())
            .add(&q.mul(&prolong_ratfn(&p, &ctx).unwrap()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn second_prolongation_closes_through_h() {
        // D(y1_2) = h(y1, y1_1, y1_2) for the identity member: check that
        // f(y1, y1_1, y1_2, D(y1_2)) = 0 symbolically.
        let ctx = trivial_ctx();
        let v = ctx.vars().clone();
        let y12 = RatFn::var(&v, "y1_2").unwrap();
        let d = prolong_ratfn(&y12, &ctx).unwrap();
        let f = crate::modular::j_ode_f_sym();
        let images = vec![
            RatFn::var(&v, "y1").unwrap(),
            RatFn::var(&v, "y1_1").unwrap(),
            RatFn::var(&v, "y1_2").unwrap(),
            d,
        ];
        assert!(f.substitute(&images).unwrap().is_zero());
    }

    #[test]
    fn derived_equation_for_phi1_identity() {
        let phi1 = modular_polynomial(1).unwrap();
        let (eq1, eq2) =
            geodesic_derived_equation(&phi1, &GeoMatrix::identity()).unwrap();
        let v = eq1.vars().clone();
        assert_eq!(eq1, Poly::parse("y1_1 - y2_1", &v).unwrap());
        assert_eq!(eq2, Poly::parse("y1_2 - y2_2", &v).unwrap());
    }

    #[test]
    fn derived_equation_is_z_free_iff_upper_triangular() {
        let phi2 = modular_polynomial(2).unwrap();
        // c = 0: z-free first equation Φ_X·y1_1 + 2·Φ_Y·y2_1.
        let hecke = GeoMatrix::from_integers(2, 0, 0, 1).unwrap();
        let (eq1, _) = geodesic_derived_equation(&phi2, &hecke).unwrap();
        assert_eq!(eq1.degree_in("z").unwrap(), Some(0));
        let v = eq1.vars();
        let px = phi2
            .poly_in(v, "y1", "y2")
            .unwrap()
            .partial_derivative("y1")
            .unwrap();
        let py = phi2
            .poly_in(v, "y1", "y2")
            .unwrap()
            .partial_derivative("y2")
            .unwrap();
        let expect = px
            .mul(&Poly::var(v, "y1_1").unwrap())
            .add(&py.mul(&Poly::var(v, "y2_1").unwrap()).scale(&rat(2)));
        assert_eq!(eq1, expect.primitive());

        // c ≠ 0: the equation keeps its z-dependence.
        let phi1 = modular_polynomial(1).unwrap();
        let s = GeoMatrix::from_integers(0, -1, 1, 0).unwrap();
        let (eq1s, _) = geodesic_derived_equation(&phi1, &s).unwrap();
        assert_eq!(eq1s.degree_in("z").unwrap(), Some(2));
        let vs = eq1s.vars().clone();
        assert_eq!(
            eq1s,
            Poly::parse("z^2*y1_1 - y2_1", &vs).unwrap()
        );
    }

    #[test]
    fn derived_equation_rejects_the_marker() {
        let phi1 = modular_polynomial(1).unwrap();
        assert!(matches!(
            geodesic_derived_equation(&phi1, &GeoMatrix::zero()),
            Err(Error::UnlinkedPair(_))
        ));
    }

    #[test]
    fn prolong_matches_the_derived_equation_by_definition() {
        let phi2 = modular_polynomial(2).unwrap();
        let g = GeoMatrix::from_integers(2, 1, 0, 2).unwrap();
        let ctx =
            ProlongCtx::new(&[GeoMatrix::identity(), g.clone()]).unwrap();
        let p = phi2.poly_in(ctx.vars(), "y1", "y2").unwrap();
        let direct = prolong(&p, &ctx).unwrap();
        let (eq1, _) = geodesic_derived_equation(&phi2, &g).unwrap();
        assert_eq!(direct, eq1);
    }

    #[test]
    fn oracle_jets_satisfy_the_derived_equations() {
        // Sample (τ, 2τ) jets and check both cleared equations vanish.
        let ctx_p = PrecisionCtx::new(192).unwrap();
        let phi2 = modular_polynomial(2).unwrap();
        let hecke = GeoMatrix::from_integers(2, 0, 0, 1).unwrap();
        let (eq1, eq2) = geodesic_derived_equation(&phi2, &hecke).unwrap();
        for s in 0..5 {
            let tau = BigC::from_f64s(0.045 + 0.013 * s as f64, 1.04, &ctx_p);
            let jet1 = eval_j_jet(&tau, &ctx_p).unwrap();
            let two_tau = tau.add(&tau, &ctx_p);
            let jet2 = eval_j_jet(&two_tau, &ctx_p).unwrap();
            // The jet coordinates are j's own derivatives at z_i = g_i(τ);
            // the chain-rule factors live inside the cleared equations.
            let point = vec![
                tau.clone(),
                jet1.j.clone(),
                jet2.j.clone(),
                jet1.j1.clone(),
                jet2.j1.clone(),
                jet1.j2.clone(),
                jet2.j2.clone(),
            ];
            for (eq, tol) in [(&eq1, 1e-18), (&eq2, 1e-10)] {
                let v = eval_poly_bigc(eq, &point, &ctx_p).unwrap();
                let r = v.abs_f64(&ctx_p);
                assert!(r < tol, "derived-equation residual {r:.3e}");
            }
        }
    }

    #[test]
    fn jet_tuple_variable_layout() {
        let g = GeoMatrix::from_integers(3, 0, 0, 1).unwrap();
        let ctx = ProlongCtx::with_names(
            &["u", "w"],
            &[GeoMatrix::identity(), g],
        )
        .unwrap();
        let names: Vec<&str> = ctx.vars().names().collect();
        assert_eq!(
            names,
            vec!["z", "u", "w", "u_1", "w_1", "u_2", "w_2"]
        );
        assert_eq!(ctx.jet_name(1, 2), "w_2");
        assert_eq!(ctx.factor(0), &RatFn::constant(ctx.vars(), rat(1)));
        assert_eq!(ctx.factor(1), &RatFn::constant(ctx.vars(), rat(3)));
        let cp = ctx.cocycle_product().unwrap();
        assert_eq!(cp, Poly::one(ctx.vars()));
        // Unlinked members are rejected at construction.
        assert!(matches!(
            ProlongCtx::new(&[GeoMatrix::zero()]),
            Err(Error::UnlinkedPair(_))
        ));
    }
}
