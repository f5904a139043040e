//! Arbitrary-precision complex arithmetic and order-3 jets.
//!
//! Plumbing for the analytic oracle: exact conversions from the `num` tower
//! into binary big-floats, complex field operations at an explicit working
//! precision, jets carrying a value together with its first three
//! τ-derivatives, and the precision context with its certified series-tail
//! bound.

use std::f64::consts::{LN_2, PI};
use std::sync::Mutex;

use astro_float::{BigFloat, Consts, RoundingMode, Sign, WORD_BIT_SIZE};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Rat;

/// Rounding mode used by every oracle operation.
pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

/// Immutable precision context shared by all oracle evaluations.
///
/// Holds the working precision in bits, the q-series truncation order, the
/// certified tail bound, and the (internally synchronized) cache of
/// transcendental constants.
pub struct PrecisionCtx {
    bits: usize,
    trunc: usize,
    tail_log2: f64,
    consts: Mutex<Consts>,
}

impl PrecisionCtx {
    /// Create a context with the given working precision in bits.
    ///
    /// The series truncation order is chosen so that the certified tail of
    /// the Eisenstein q-series — including the jet factors `(2πn)^k` up to
    /// the third derivative — stays below `2^(−bits/2)` anywhere in the
    /// domain `Im τ ≥ 0.8`.
    pub fn new(bits: usize) -> Result<Self> {
        if !(64..=8192).contains(&bits) {
            return Err(Error::InvalidArgument(format!(
                "working precision must lie in 64..=8192 bits, got {bits}"
            )));
        }
        let (trunc, tail_log2) = truncation_order(bits)?;
        let consts = Consts::new().map_err(|e| {
            Error::ComputationAborted(format!(
                "constants cache initialization failed: {e:?}"
            ))
        })?;
        Ok(PrecisionCtx { bits, trunc, tail_log2, consts: Mutex::new(consts) })
    }

    /// Working precision in bits.
    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Series truncation order: q-series keep terms `n ≤ truncation_order`.
    pub fn truncation_order(&self) -> usize {
        self.trunc
    }

    /// log₂ of the certified tail bound at the domain floor `Im τ = 0.8`.
    pub fn tail_log2(&self) -> f64 {
        self.tail_log2
    }

    /// Run `f` with exclusive access to the constants cache.
    pub(crate) fn with_consts<T>(&self, f: impl FnOnce(&mut Consts) -> T) -> T {
        let mut cc = self.consts.lock().expect("constants cache mutex");
        f(&mut cc)
    }

    /// π at the working precision.
    pub fn pi(&self) -> BigFloat {
        self.with_consts(|cc| cc.pi(self.bits, RM))
    }
}

impl std::fmt::Debug for PrecisionCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PrecisionCtx")
            .field("bits", &self.bits)
            .field("trunc", &self.trunc)
            .field("tail_log2", &self.tail_log2)
            .finish()
    }
}

/// Smallest truncation order `M` whose dropped tail is certified below
/// `2^(−bits/2)` at `Im τ = 0.8`.
///
/// Dropped terms are bounded by `504·σ₅(n)·(2πn)³·|q|ⁿ ≤ C·n⁹·|q|ⁿ` with
/// `C = 504·(2π)³` (σ₅(n) ≤ n⁶, jet factor ≤ (2πn)³); the sum over `n > M`
/// is bounded by the ratio test with ratio `ρ = (1 + 1/(M+1))⁹·|q|`.
fn truncation_order(bits: usize) -> Result<(usize, f64)> {
    let lq = -2.0 * PI * 0.8 / LN_2; // log₂|q| at the domain floor
    let lc = (504.0 * (2.0 * PI).powi(3)).log2();
    let target = -(bits as f64) / 2.0;
    for m in 1usize..100_000 {
        let mp1 = (m + 1) as f64;
        let rho = (1.0 + 1.0 / mp1).powi(9) * lq.exp2();
        if rho >= 1.0 {
            continue;
        }
        let bound = lc + 9.0 * mp1.log2() + mp1 * lq - (1.0 - rho).log2();
        if bound <= target {
            return Ok((m, bound));
        }
    }
    Err(Error::BudgetExceeded(
        "no series truncation order satisfies the tail target".into(),
    ))
}

/// Exact conversion `BigInt → BigFloat` (rounded only to the final `p`).
pub(crate) fn bigint_to_bf(n: &BigInt, p: usize) -> BigFloat {
    if n.is_zero() {
        return BigFloat::from_u64(0, p);
    }
    let digits: Vec<u64> = n.magnitude().iter_u64_digits().collect();
    // Work at a precision that holds the full integer, round once at the end.
    let pe = p.max(64 * digits.len() + 64);
    let base = BigFloat::from_u128(1u128 << 64, pe);
    let mut acc = BigFloat::from_u64(0, pe);
    for d in digits.iter().rev() {
        acc = acc.mul(&base, pe, RM).add(&BigFloat::from_u64(*d, pe), pe, RM);
    }
    if n.is_negative() {
        acc = acc.neg();
    }
    acc.set_precision(p, RM).expect("precision change");
    acc
}

/// `Rat → BigFloat` at precision `p` (correctly rounded quotient).
pub(crate) fn rat_to_bf(r: &Rat, p: usize) -> BigFloat {
    let num = bigint_to_bf(r.numer(), p + 64);
    let den = bigint_to_bf(r.denom(), p + 64);
    let mut q = num.div(&den, p + 64, RM);
    q.set_precision(p, RM).expect("precision change");
    q
}

/// Lossy conversion to `f64` (top mantissa words; saturates on overflow).
pub(crate) fn bf_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let (words, _nbits, sign, e, _inexact) =
        x.as_raw_parts().expect("finite big-float has raw parts");
    // Value = (Σ wordᵢ·2^(W·i))·2^(e − W·len); the top two words carry
    // more than a f64 mantissa regardless of the word size W.
    let len = words.len() as i64;
    let wb = WORD_BIT_SIZE as i64;
    let mut v = 0.0f64;
    for (i, w) in words.iter().enumerate().rev().take(2) {
        v += (*w as f64) * (((e as i64) + wb * (i as i64 - len)) as f64).exp2();
    }
    if matches!(sign, Sign::Neg) {
        -v
    } else {
        v
    }
}

/// Exact conversion of an integer-valued `BigFloat` to `BigInt`.
fn integer_bf_to_bigint(n: &BigFloat) -> BigInt {
    if n.is_zero() {
        return BigInt::zero();
    }
    let (words, _nbits, sign, e, _inexact) =
        n.as_raw_parts().expect("finite big-float has raw parts");
    let mut m = BigInt::zero();
    for w in words.iter().rev() {
        m = (m << WORD_BIT_SIZE) + BigInt::from(*w);
    }
    let shift = e as i64 - (words.len() * WORD_BIT_SIZE) as i64;
    let mut v = if shift >= 0 { m << shift } else { m >> (-shift) };
    if matches!(sign, Sign::Neg) {
        v = -v;
    }
    v
}

/// Nearest integer to `x` together with the absolute rounding error.
pub(crate) fn bf_nearest_int(x: &BigFloat, p: usize) -> (BigInt, f64) {
    let half = BigFloat::from_f64(0.5, p);
    let fl = x.add(&half, p, RM).floor();
    let err = bf_to_f64(&x.sub(&fl, p, RM).abs());
    (integer_bf_to_bigint(&fl), err)
}

/// Complex number at an explicit working precision.
#[derive(Clone, Debug)]
pub struct BigC {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigC {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigC { re, im }
    }

    pub fn zero(ctx: &PrecisionCtx) -> Self {
        let z = BigFloat::from_u64(0, ctx.bits);
        BigC { re: z.clone(), im: z }
    }

    pub fn one(ctx: &PrecisionCtx) -> Self {
        BigC {
            re: BigFloat::from_u64(1, ctx.bits),
            im: BigFloat::from_u64(0, ctx.bits),
        }
    }

    pub fn from_f64s(re: f64, im: f64, ctx: &PrecisionCtx) -> Self {
        BigC {
            re: BigFloat::from_f64(re, ctx.bits),
            im: BigFloat::from_f64(im, ctx.bits),
        }
    }

    pub fn from_c64(z: Complex64, ctx: &PrecisionCtx) -> Self {
        Self::from_f64s(z.re, z.im, ctx)
    }

    pub fn from_bigint(n: &BigInt, ctx: &PrecisionCtx) -> Self {
        BigC {
            re: bigint_to_bf(n, ctx.bits),
            im: BigFloat::from_u64(0, ctx.bits),
        }
    }

    pub fn from_rat(r: &Rat, ctx: &PrecisionCtx) -> Self {
        BigC { re: rat_to_bf(r, ctx.bits), im: BigFloat::from_u64(0, ctx.bits) }
    }

    pub fn from_i64(n: i64, ctx: &PrecisionCtx) -> Self {
        BigC {
            re: BigFloat::from_i64(n, ctx.bits),
            im: BigFloat::from_u64(0, ctx.bits),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self, ctx: &PrecisionCtx) -> Self {
        let p = ctx.bits;
        BigC { re: self.re.add(&o.re, p, RM), im: self.im.add(&o.im, p, RM) }
    }

    pub fn sub(&self, o: &Self, ctx: &PrecisionCtx) -> Self {
        let p = ctx.bits;
        BigC { re: self.re.sub(&o.re, p, RM), im: self.im.sub(&o.im, p, RM) }
    }

    pub fn neg(&self) -> Self {
        BigC { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        BigC { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Self, ctx: &PrecisionCtx) -> Self {
        let p = ctx.bits;
        let re = self
            .re
            .mul(&o.re, p, RM)
            .sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self
            .re
            .mul(&o.im, p, RM)
            .add(&self.im.mul(&o.re, p, RM), p, RM);
        BigC { re, im }
    }

    pub fn scale_bf(&self, s: &BigFloat, ctx: &PrecisionCtx) -> Self {
        let p = ctx.bits;
        BigC { re: self.re.mul(s, p, RM), im: self.im.mul(s, p, RM) }
    }

    pub fn scale_i64(&self, k: i64, ctx: &PrecisionCtx) -> Self {
        self.scale_bf(&BigFloat::from_i64(k, ctx.bits), ctx)
    }

    /// |self|² as a `BigFloat`.
    pub fn abs2(&self, ctx: &PrecisionCtx) -> BigFloat {
        let p = ctx.bits;
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    /// |self| as an `f64` (computed in big-float, converted at the end, so
    /// it is meaningful even when |self|² would overflow an `f64`).
    pub fn abs_f64(&self, ctx: &PrecisionCtx) -> f64 {
        bf_to_f64(&self.abs2(ctx).sqrt(ctx.bits, RM))
    }

    pub fn recip(&self, ctx: &PrecisionCtx) -> Self {
        let p = ctx.bits;
        let n = self.abs2(ctx);
        BigC { re: self.re.div(&n, p, RM), im: self.im.neg().div(&n, p, RM) }
    }

    pub fn div(&self, o: &Self, ctx: &PrecisionCtx) -> Self {
        self.mul(&o.recip(ctx), ctx)
    }

    /// Complex exponential `e^self = e^re·(cos im + i·sin im)`.
    pub fn exp(&self, ctx: &PrecisionCtx) -> Self {
        let p = ctx.bits;
        ctx.with_consts(|cc| {
            let r = self.re.exp(p, RM, cc);
            let c = self.im.cos(p, RM, cc);
            let s = self.im.sin(p, RM, cc);
            BigC { re: r.mul(&c, p, RM), im: r.mul(&s, p, RM) }
        })
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(bf_to_f64(&self.re), bf_to_f64(&self.im))
    }
}

/// Order-3 jet: a value and its first three derivatives with respect to τ.
#[derive(Clone, Debug)]
pub struct Jet4 {
    pub f: BigC,
    pub d1: BigC,
    pub d2: BigC,
    pub d3: BigC,
}

impl Jet4 {
    pub fn constant(c: BigC, ctx: &PrecisionCtx) -> Self {
        Jet4 {
            f: c,
            d1: BigC::zero(ctx),
            d2: BigC::zero(ctx),
            d3: BigC::zero(ctx),
        }
    }

    pub fn add(&self, o: &Self, ctx: &PrecisionCtx) -> Self {
        Jet4 {
            f: self.f.add(&o.f, ctx),
            d1: self.d1.add(&o.d1, ctx),
            d2: self.d2.add(&o.d2, ctx),
            d3: self.d3.add(&o.d3, ctx),
        }
    }

    pub fn sub(&self, o: &Self, ctx: &PrecisionCtx) -> Self {
        Jet4 {
            f: self.f.sub(&o.f, ctx),
            d1: self.d1.sub(&o.d1, ctx),
            d2: self.d2.sub(&o.d2, ctx),
            d3: self.d3.sub(&o.d3, ctx),
        }
    }

    /// Leibniz product up to the third derivative.
    pub fn mul(&self, o: &Self, ctx: &PrecisionCtx) -> Self {
        let f = self.f.mul(&o.f, ctx);
        let d1 = self.d1.mul(&o.f, ctx).add(&self.f.mul(&o.d1, ctx), ctx);
        let d2 = self
            .d2
            .mul(&o.f, ctx)
            .add(&self.d1.mul(&o.d1, ctx).scale_i64(2, ctx), ctx)
            .add(&self.f.mul(&o.d2, ctx), ctx);
        let d3 = self
            .d3
            .mul(&o.f, ctx)
            .add(&self.d2.mul(&o.d1, ctx).scale_i64(3, ctx), ctx)
            .add(&self.d1.mul(&o.d2, ctx).scale_i64(3, ctx), ctx)
            .add(&self.f.mul(&o.d3, ctx), ctx);
        Jet4 { f, d1, d2, d3 }
    }

    /// Reciprocal jet, solved from `g·r = 1` order by order.
    pub fn recip(&self, ctx: &PrecisionCtx) -> Self {
        let g = &self.f;
        let r = g.recip(ctx);
        // g′r + g r′ = 0
        let r1 = self.d1.mul(&r, ctx).div(g, ctx).neg();
        // g″r + 2g′r′ + g r″ = 0
        let r2 = self
            .d2
            .mul(&r, ctx)
            .add(&self.d1.mul(&r1, ctx).scale_i64(2, ctx), ctx)
            .div(g, ctx)
            .neg();
        // g‴r + 3g″r′ + 3g′r″ + g r‴ = 0
        let r3 = self
            .d3
            .mul(&r, ctx)
            .add(&self.d2.mul(&r1, ctx).scale_i64(3, ctx), ctx)
            .add(&self.d1.mul(&r2, ctx).scale_i64(3, ctx), ctx)
            .div(g, ctx)
            .neg();
        Jet4 { f: r, d1: r1, d2: r2, d3: r3 }
    }

    pub fn div(&self, o: &Self, ctx: &PrecisionCtx) -> Self {
        self.mul(&o.recip(ctx), ctx)
    }

    pub fn scale_bf(&self, s: &BigFloat, ctx: &PrecisionCtx) -> Self {
        Jet4 {
            f: self.f.scale_bf(s, ctx),
            d1: self.d1.scale_bf(s, ctx),
            d2: self.d2.scale_bf(s, ctx),
            d3: self.d3.scale_bf(s, ctx),
        }
    }

    pub fn scale_i64(&self, k: i64, ctx: &PrecisionCtx) -> Self {
        Jet4 {
            f: self.f.scale_i64(k, ctx),
            d1: self.d1.scale_i64(k, ctx),
            d2: self.d2.scale_i64(k, ctx),
            d3: self.d3.scale_i64(k, ctx),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(bits: usize) -> PrecisionCtx {
        PrecisionCtx::new(bits).unwrap()
    }

    #[test]
    fn truncation_tail_is_certified() {
        let c = ctx(128);
        assert!(c.tail_log2() <= -64.0, "tail {}", c.tail_log2());
        assert!(c.truncation_order() >= 8);
        let c2 = ctx(512);
        assert!(c2.tail_log2() <= -256.0);
        assert!(c2.truncation_order() > c.truncation_order());
    }

    #[test]
    fn bigint_round_trips_through_bigfloat() {
        let c = ctx(256);
        let n: BigInt = BigInt::from(3u8).pow(77) * BigInt::from(-1);
        let x = bigint_to_bf(&n, c.bits());
        let (back, err) = bf_nearest_int(&x, c.bits());
        assert_eq!(back, n);
        assert!(err < 1e-30);
        // f64 view of a large number keeps ~15 significant digits.
        let f = bf_to_f64(&x);
        let expect = -(3.0f64.powi(77));
        assert!((f - expect).abs() <= 1e-12 * expect.abs());
    }

    #[test]
    fn rational_conversion_is_correctly_rounded() {
        let c = ctx(128);
        let r = Rat::new(BigInt::from(1), BigInt::from(3));
        let x = rat_to_bf(&r, c.bits());
        let three = BigFloat::from_u64(3, c.bits());
        let back = x.mul(&three, c.bits(), RM);
        let one = BigFloat::from_u64(1, c.bits());
        let err = bf_to_f64(&back.sub(&one, c.bits(), RM).abs());
        assert!(err < 1e-36, "err {err}");
    }

    #[test]
    fn complex_field_identities() {
        let c = ctx(128);
        let z = BigC::from_f64s(0.3, -1.7, &c);
        let w = BigC::from_f64s(-2.25, 0.5, &c);
        let lhs = z.mul(&w, &c).div(&w, &c);
        let err = lhs.sub(&z, &c).abs_f64(&c);
        assert!(err < 1e-35, "err {err}");
        // exp(iπ) = −1
        let ipi = BigC::new(BigFloat::from_u64(0, c.bits()), c.pi());
        let e = ipi.exp(&c);
        let target = BigC::from_i64(-1, &c);
        assert!(e.sub(&target, &c).abs_f64(&c) < 1e-36);
    }

    #[test]
    fn jet_reciprocal_matches_analytic_derivatives() {
        // g(τ) = τ at τ = 2: 1/g has derivatives −1/4, 2/8, −6/16.
        let c = ctx(128);
        let g = Jet4 {
            f: BigC::from_i64(2, &c),
            d1: BigC::one(&c),
            d2: BigC::zero(&c),
            d3: BigC::zero(&c),
        };
        let r = g.recip(&c);
        let expect = [0.5, -0.25, 0.25, -0.375];
        for (got, want) in
            [&r.f, &r.d1, &r.d2, &r.d3].iter().zip(expect.iter())
        {
            let e = got.sub(&BigC::from_f64s(*want, 0.0, &c), &c).abs_f64(&c);
            assert!(e < 1e-36, "err {e}");
        }
        // recip ∘ recip is the identity on jets.
        let back = r.recip(&c);
        for (got, want) in [
            (&back.f, &g.f),
            (&back.d1, &g.d1),
            (&back.d2, &g.d2),
            (&back.d3, &g.d3),
        ] {
            assert!(got.sub(want, &c).abs_f64(&c) < 1e-34);
        }
    }

    #[test]
    fn jet_product_rule() {
        // f = τ², g = τ³ at τ = 1.5: (fg) = τ⁵ jets must match.
        let c = ctx(128);
        let t = 1.5f64;
        let f = Jet4 {
            f: BigC::from_f64s(t * t, 0.0, &c),
            d1: BigC::from_f64s(2.0 * t, 0.0, &c),
            d2: BigC::from_f64s(2.0, 0.0, &c),
            d3: BigC::zero(&c),
        };
        let g = Jet4 {
            f: BigC::from_f64s(t * t * t, 0.0, &c),
            d1: BigC::from_f64s(3.0 * t * t, 0.0, &c),
            d2: BigC::from_f64s(6.0 * t, 0.0, &c),
            d3: BigC::from_f64s(6.0, 0.0, &c),
        };
        let h = f.mul(&g, &c);
        let expect = [
            t.powi(5),
            5.0 * t.powi(4),
            20.0 * t.powi(3),
            60.0 * t.powi(2),
        ];
        for (got, want) in
            [&h.f, &h.d1, &h.d2, &h.d3].iter().zip(expect.iter())
        {
            let e = got.sub(&BigC::from_f64s(*want, 0.0, &c), &c).abs_f64(&c);
            assert!(e < 1e-30, "err {e}");
        }
    }
}
