//! Rational functions `num/den` over ℚ[x̄], kept in canonical form.
//!
//! Canonical form: `gcd(num, den) = 1`, and the denominator is
//! integer-coefficient, content 1, with positive leading coefficient under
//! grevlex (the rational scale lives in the numerator).  Equality of
//! canonical forms is therefore structural equality.

use super::gcd::{div_exact, poly_gcd};
use super::{rat_to_f64, Poly, Rat, VarSet};
use crate::error::{Error, Result};
use num_complex::Complex64;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    /// Build `num/den`, canonicalizing.  Errors on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Result<RatFn> {
        if den.is_zero() {
            return Err(Error::InvalidArgument(
                "zero denominator in rational function".into(),
            ));
        }
        assert!(
            num.vars() == den.vars(),
            "RatFn requires a shared ambient (use embed)"
        );
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> RatFn {
        let vars = num.vars().clone();
        if num.is_zero() {
            return RatFn { num, den: Poly::one(&vars) };
        }
        let mut num = num;
        let mut den = den;
        if !den.is_constant() {
            let g = poly_gcd(&num, &den);
            if !g.is_constant() {
                num = div_exact(&num, &g).expect("gcd divides");
                den = div_exact(&den, &g).expect("gcd divides");
            }
        }
        // Denominator: integer primitive with positive leading coefficient;
        // fold the remaining rational factor into the numerator.
        let (factor, den_prim) = den.to_integer_primitive();
        let num = num.scale(&factor.recip());
        RatFn { num, den: den_prim }
    }

    pub fn from_poly(p: Poly) -> RatFn {
        let one = Poly::one(p.vars());
        RatFn { num: p, den: one }
    }

    pub fn zero(vars: &VarSet) -> RatFn {
        RatFn::from_poly(Poly::zero(vars))
    }

    pub fn one(vars: &VarSet) -> RatFn {
        RatFn::from_poly(Poly::one(vars))
    }

    pub fn constant(vars: &VarSet, c: Rat) -> RatFn {
        RatFn::from_poly(Poly::constant(vars, c))
    }

    pub fn var(vars: &VarSet, name: &str) -> Result<RatFn> {
        Ok(RatFn::from_poly(Poly::var(vars, name)?))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn vars(&self) -> &VarSet {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is the constant 1.
    pub fn is_polynomial(&self) -> bool {
        self.den.constant_value().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, other: &RatFn) -> RatFn {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::normalized(num, den)
    }

    pub fn sub(&self, other: &RatFn) -> RatFn {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &RatFn) -> Result<RatFn> {
        if other.is_zero() {
            return Err(Error::InvalidArgument(
                "division by the zero rational function".into(),
            ));
        }
        Ok(Self::normalized(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn inv(&self) -> Result<RatFn> {
        RatFn::one(self.vars()).div(self)
    }

    pub fn scale(&self, c: &Rat) -> RatFn {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, n: i32) -> Result<RatFn> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatFn::one(self.vars());
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Quotient rule: `(n/d)' = (n'd − nd')/d²`.
    pub fn partial_derivative(&self, name: &str) -> Result<RatFn> {
        let i = self.vars().index_or_err(name)?;
        Ok(self.partial_derivative_idx(i))
    }

    pub fn partial_derivative_idx(&self, i: usize) -> RatFn {
        let n = self.num.partial_derivative_idx(i);
        let d = self.den.partial_derivative_idx(i);
        if d.is_zero() {
            return Self::normalized(n, self.den.clone());
        }
        let num = n.mul(&self.den).sub(&self.num.mul(&d));
        let den = self.den.mul(&self.den);
        Self::normalized(num, den)
    }

    pub fn eval_rat(&self, point: &[Rat]) -> Result<Rat> {
        let d = self.den.eval_rat(point);
        if d.is_zero() {
            return Err(Error::PoleAtPoint(format!(
                "denominator {} vanishes at the evaluation point",
                self.den
            )));
        }
        Ok(self.num.eval_rat(point) / d)
    }

    /// `f64`-complex evaluation; denominators with modulus below
    /// `pole_tol` raise `PoleProximity`.
    pub fn eval_complex(
        &self,
        point: &[Complex64],
        pole_tol: f64,
    ) -> Result<Complex64> {
        let d = self.den.eval_complex(point);
        if d.norm() <= pole_tol {
            return Err(Error::PoleProximity(format!(
                "denominator modulus {:.3e} at evaluation point",
                d.norm()
            )));
        }
        Ok(self.num.eval_complex(point) / d)
    }

    /// Substitute rational functions for the variables.
    pub fn substitute(&self, images: &[RatFn]) -> Result<RatFn> {
        assert_eq!(images.len(), self.vars().len(), "image arity mismatch");
        let target = if images.is_empty() {
            self.vars().clone()
        } else {
            images[0].vars().clone()
        };
        let eval = |p: &Poly| -> RatFn {
            let mut acc = RatFn::zero(&target);
            for (e, c) in p.terms() {
                let mut t = RatFn::constant(&target, c.clone());
                for (i, &k) in e.iter().enumerate() {
                    for _ in 0..k {
                        t = t.mul(&images[i]);
                    }
                }
                acc = acc.add(&t);
            }
            acc
        };
        eval(&self.num).div(&eval(&self.den))
    }

    pub fn embed(&self, target: &VarSet) -> Result<RatFn> {
        Ok(RatFn {
            num: self.num.embed(target)?,
            den: self.den.embed(target)?,
        })
    }

    /// Approximate `f64` value of a constant rational function made of
    /// rational constants (for report formatting).
    pub fn constant_f64(&self) -> Option<f64> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(rat_to_f64(&n) / rat_to_f64(&d))
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({self})")
    }
}

impl std::ops::Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        RatFn::add(self, rhs)
    }
}
impl std::ops::Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        RatFn::sub(self, rhs)
    }
}
impl std::ops::Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        RatFn::mul(self, rhs)
    }
}
impl std::ops::Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn::neg(self)
    }
}
