//! Arbitrary-precision analytic oracle for the modular j-function.
//!
//! Evaluates j and its first three τ-derivatives from the Eisenstein
//! q-expansions, interpolates modular polynomials with certified integer
//! recognition, samples numeric jet tuples along geodesic matrices, and
//! provides numeric vanishing tests for polynomials and rational functions
//! at big-complex points.  This module is the independent numeric
//! cross-check behind the symbolic machinery in the rest of the crate.

mod bigfloat;
mod interp;
mod series;

pub use bigfloat::{BigC, Jet4, PrecisionCtx};
pub use interp::{
    golden_text, interpolate_modular_polynomial, parse_golden, psi, ModTerm,
};

use astro_float::BigFloat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{Poly, Rat, RatFn};
use bigfloat::{bf_nearest_int, bf_to_f64, RM};

/// Lower boundary of the certified evaluation domain.
pub const IM_TAU_MIN: f64 = 0.8;

/// A numeric jet: τ together with j(τ) and its first three τ-derivatives.
#[derive(Clone, Debug)]
pub struct NumericJet {
    pub tau: BigC,
    pub j: BigC,
    pub j1: BigC,
    pub j2: BigC,
    pub j3: BigC,
}

impl NumericJet {
    /// The jet values (j, j′, j″, j‴) as machine complex numbers.
    pub fn values_c64(&self) -> [Complex64; 4] {
        [
            self.j.to_c64(),
            self.j1.to_c64(),
            self.j2.to_c64(),
            self.j3.to_c64(),
        ]
    }

    /// |f(j, j′, j″, j‴)| for the order-3 ODE of j,
    /// `f = Y₃/Y₁ − (3/2)(Y₂/Y₁)² + R(Y₀)·Y₁²` with
    /// `R(y) = (y² − 1968y + 2654208)/(2y²(y − 1728)²)`.
    pub fn ode_residual(&self, ctx: &PrecisionCtx) -> Result<f64> {
        if self.j1.abs_f64(ctx) < 1e-20 {
            return Err(Error::DegenerateJet(
                "j′ ≈ 0 (elliptic point); the ODE residual is undefined"
                    .into(),
            ));
        }
        let y = &self.j;
        let y2 = y.mul(y, ctx);
        let num = y2
            .sub(&y.scale_i64(1968, ctx), ctx)
            .add(&BigC::from_i64(2_654_208, ctx), ctx);
        let shifted = y.sub(&BigC::from_i64(1728, ctx), ctx);
        let den = y2.mul(&shifted.mul(&shifted, ctx), ctx).scale_i64(2, ctx);
        let r = num.div(&den, ctx);
        let s = self.j2.div(&self.j1, ctx);
        let three_half = BigC::from_rat(&Rat::new(3.into(), 2.into()), ctx);
        let val = self
            .j3
            .div(&self.j1, ctx)
            .sub(&s.mul(&s, ctx).mul(&three_half, ctx), ctx)
            .add(&r.mul(&self.j1.mul(&self.j1, ctx), ctx), ctx);
        Ok(val.abs_f64(ctx))
    }
}

/// Evaluate the jet of j at τ by the Eisenstein q-expansions.
///
/// `E₄ = 1 + 240·Σ σ₃(n)qⁿ`, `E₆ = 1 − 504·Σ σ₅(n)qⁿ`, `q = e^{2πiτ}`,
/// `j = 1728·E₄³/(E₄³ − E₆²)`; derivatives are taken term-wise with
/// `d/dτ qⁿ = 2πin·qⁿ`, and the dropped tail is certified below
/// `2^(−bits/2)` by the context's truncation order.
pub fn eval_j_jet(tau: &BigC, ctx: &PrecisionCtx) -> Result<NumericJet> {
    let im = bf_to_f64(&tau.im);
    if !(im >= IM_TAU_MIN) {
        return Err(Error::OutOfDomain(format!(
            "Im τ = {im} < {IM_TAU_MIN}"
        )));
    }
    let p = ctx.bits();
    let two_pi = ctx.pi().mul(&BigFloat::from_u64(2, p), p, RM);
    // q = exp(2πiτ)
    let q = BigC::new(
        tau.im.mul(&two_pi, p, RM).neg(),
        tau.re.mul(&two_pi, p, RM),
    )
    .exp(ctx);

    let m = ctx.truncation_order();
    let (s3, s5) = series::sigma_sieve(m);
    let one = Jet4::constant(BigC::one(ctx), ctx);
    let mut e4 = one.clone();
    let mut e6 = one;
    let mut qn = q.clone();
    for n in 1..=m {
        let w = BigC::new(
            BigFloat::from_u64(0, p),
            two_pi.mul(&BigFloat::from_u64(n as u64, p), p, RM),
        );
        let d1 = qn.mul(&w, ctx);
        let d2 = d1.mul(&w, ctx);
        let d3 = d2.mul(&w, ctx);
        let term = Jet4 { f: qn.clone(), d1, d2, d3 };
        e4 = e4.add(&term.scale_bf(&BigFloat::from_u64(240 * s3[n], p), ctx), ctx);
        e6 = e6.add(
            &term.scale_bf(&BigFloat::from_i64(-504 * s5[n] as i64, p), ctx),
            ctx,
        );
        qn = qn.mul(&q, ctx);
    }
    let e4cube = e4.mul(&e4, ctx).mul(&e4, ctx);
    let den = e4cube.sub(&e6.mul(&e6, ctx), ctx);
    let j = e4cube.div(&den, ctx).scale_i64(1728, ctx);
    Ok(NumericJet { tau: tau.clone(), j: j.f, j1: j.d1, j2: j.d2, j3: j.d3 })
}

/// Apply the Möbius transformation of a rational 2×2 matrix
/// `[a, b, c, d]` (row-major) to a big-complex point.
pub fn moebius(g: &[Rat; 4], z: &BigC, ctx: &PrecisionCtx) -> Result<BigC> {
    let a = BigC::from_rat(&g[0], ctx);
    let b = BigC::from_rat(&g[1], ctx);
    let c = BigC::from_rat(&g[2], ctx);
    let d = BigC::from_rat(&g[3], ctx);
    let den = c.mul(z, ctx).add(&d, ctx);
    if den.abs_f64(ctx) < 1e-12 {
        return Err(Error::PoleAtPoint("cz + d ≈ 0 in Möbius action".into()));
    }
    Ok(a.mul(z, ctx).add(&b, ctx).div(&den, ctx))
}

/// One sampled member coordinate: the point `z_i = g_i(τ)` and the jet of j
/// there.
#[derive(Clone, Debug)]
pub struct SampledMember {
    pub z: BigC,
    pub jet: NumericJet,
}

/// Sample `count` deterministic base points near `tau0` and push each
/// through the member matrices: sample `s`, member `i` carries
/// `z_i = g_i(τ_s)` and the jet of j at `z_i`.
///
/// Errors with out-of-domain if any mapped point leaves `Im z ≥ 0.8`.
pub fn sample_jet_tuples(
    mats: &[[Rat; 4]],
    tau0: Complex64,
    count: usize,
    ctx: &PrecisionCtx,
) -> Result<Vec<Vec<SampledMember>>> {
    let mut out = Vec::with_capacity(count);
    for s in 0..count {
        // Deterministic drift that raises Im τ, keeping samples generic.
        let tau = Complex64::new(
            tau0.re + 0.0131 * s as f64,
            tau0.im + 0.0077 * s as f64,
        );
        let base = BigC::from_c64(tau, ctx);
        let mut members = Vec::with_capacity(mats.len());
        for g in mats {
            let z = moebius(g, &base, ctx)?;
            let jet = eval_j_jet(&z, ctx)?;
            members.push(SampledMember { z, jet });
        }
        out.push(members);
    }
    Ok(out)
}

/// Evaluate a polynomial at a big-complex point (one value per ambient
/// variable, in order).
pub fn eval_poly_bigc(
    p: &Poly,
    point: &[BigC],
    ctx: &PrecisionCtx,
) -> Result<BigC> {
    if point.len() != p.vars().len() {
        return Err(Error::InvalidArgument(format!(
            "point has {} coordinates for {} variables",
            point.len(),
            p.vars().len()
        )));
    }
    // Per-variable power tables up to the needed degree.
    let nvars = point.len();
    let mut max_exp = vec![0u32; nvars];
    for (mono, _) in p.terms() {
        for (i, e) in mono.iter().enumerate() {
            max_exp[i] = max_exp[i].max(*e);
        }
    }
    let mut powers: Vec<Vec<BigC>> = Vec::with_capacity(nvars);
    for (i, x) in point.iter().enumerate() {
        let mut tab = Vec::with_capacity(max_exp[i] as usize + 1);
        tab.push(BigC::one(ctx));
        for k in 1..=max_exp[i] as usize {
            let prev = &tab[k - 1];
            tab.push(prev.mul(x, ctx));
        }
        powers.push(tab);
    }
    let mut acc = BigC::zero(ctx);
    for (mono, coeff) in p.terms() {
        let mut t = BigC::from_rat(coeff, ctx);
        for (i, e) in mono.iter().enumerate() {
            if *e > 0 {
                t = t.mul(&powers[i][*e as usize], ctx);
            }
        }
        acc = acc.add(&t, ctx);
    }
    Ok(acc)
}

/// Evaluate a rational function at a big-complex point; errors with
/// pole-proximity when the denominator's magnitude drops below `pole_tol`.
pub fn eval_ratfn_bigc(
    f: &RatFn,
    point: &[BigC],
    ctx: &PrecisionCtx,
    pole_tol: f64,
) -> Result<BigC> {
    let den = eval_poly_bigc(f.den(), point, ctx)?;
    let mag = den.abs_f64(ctx);
    if mag < pole_tol {
        return Err(Error::PoleProximity(format!(
            "denominator magnitude {mag:.3e} below {pole_tol:.3e}"
        )));
    }
    let num = eval_poly_bigc(f.num(), point, ctx)?;
    Ok(num.div(&den, ctx))
}

/// Numeric vanishing test for a polynomial: returns (vanishes, residual).
pub fn numeric_vanish_poly(
    p: &Poly,
    point: &[BigC],
    ctx: &PrecisionCtx,
    tol: f64,
) -> Result<(bool, f64)> {
    let v = eval_poly_bigc(p, point, ctx)?;
    let residual = v.abs_f64(ctx);
    Ok((residual < tol, residual))
}

/// Numeric vanishing test for a rational function: returns
/// (vanishes, residual); the denominator must stay above `tol` in
/// magnitude, else pole-proximity is reported.
pub fn numeric_vanish(
    f: &RatFn,
    point: &[BigC],
    ctx: &PrecisionCtx,
    tol: f64,
) -> Result<(bool, f64)> {
    let v = eval_ratfn_bigc(f, point, ctx, tol)?;
    let residual = v.abs_f64(ctx);
    Ok((residual < tol, residual))
}

/// Round a big-complex value to the nearest integer, returning the integer
/// and the distance to it (absolute value of the rounding error, including
/// the imaginary part).
pub fn recognize_integer(
    v: &BigC,
    ctx: &PrecisionCtx,
) -> (num_bigint::BigInt, f64) {
    let (int, err_re) = bf_nearest_int(&v.re, ctx.bits());
    let err_im = bf_to_f64(&v.im.abs());
    (int, err_re.hypot(err_im))
}
