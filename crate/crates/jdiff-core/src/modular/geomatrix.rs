//! Geodesic matrices: elements of GL₂⁺(ℚ) stored projectively.
//!
//! A geodesic matrix acts on the upper half plane by
//! `gz = (az + b)/(cz + d)`.  Matrices are stored up to scaling as coprime
//! integer quadruples with positive determinant; the zero matrix is kept as
//! a distinct "unlinked" marker.  Because the Möbius action and every
//! derived-equation factor `det(g)/(cz + d)²` are invariant under scaling
//! (including sign flips), the canonical form also fixes the sign: the
//! first nonzero entry is positive.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, Rat, RatFn, VarSet};

/// A geodesic matrix `[[a, b], [c, d]]` over ℚ with `det > 0`, stored as
/// the canonical coprime-integer representative, or the zero marker.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeoMatrix {
    e: [BigInt; 4],
}

impl GeoMatrix {
    /// The zero matrix: the marker for an unlinked coordinate pair.
    pub fn zero() -> GeoMatrix {
        GeoMatrix { e: [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()] }
    }

    /// The identity matrix.
    pub fn identity() -> GeoMatrix {
        GeoMatrix {
            e: [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()],
        }
    }

    /// Build from rational entries `[[a, b], [c, d]]`.
    ///
    /// The all-zero matrix yields the unlinked marker; any other matrix
    /// must have positive determinant.
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Result<GeoMatrix> {
        if a.is_zero() && b.is_zero() && c.is_zero() && d.is_zero() {
            return Ok(GeoMatrix::zero());
        }
        let det = &a * &d - &b * &c;
        if !det.is_positive() {
            return Err(Error::InvalidGeodesic(format!(
                "determinant {det} is not positive"
            )));
        }
        // Clear denominators, then divide by the gcd of the entries.
        let mut scale = BigInt::one();
        for r in [&a, &b, &c, &d] {
            scale = scale.lcm(r.denom());
        }
        let mut ints: Vec<BigInt> = [&a, &b, &c, &d]
            .iter()
            .map(|r| r.numer() * (&scale / r.denom()))
            .collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = g.gcd(v);
        }
        for v in &mut ints {
            *v = &*v / &g;
        }
        if ints.iter().find(|v| !v.is_zero()).unwrap().is_negative() {
            for v in &mut ints {
                *v = -&*v;
            }
        }
        Ok(GeoMatrix {
            e: [
                ints[0].clone(),
                ints[1].clone(),
                ints[2].clone(),
                ints[3].clone(),
            ],
        })
    }

    /// Build from machine-integer entries.
    pub fn from_integers(a: i64, b: i64, c: i64, d: i64) -> Result<GeoMatrix> {
        GeoMatrix::new(
            Rat::from_integer(a.into()),
            Rat::from_integer(b.into()),
            Rat::from_integer(c.into()),
            Rat::from_integer(d.into()),
        )
    }

    /// Whether this is the unlinked marker.
    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|v| v.is_zero())
    }

    /// Canonical integer entries `[a, b, c, d]`.
    pub fn entries(&self) -> &[BigInt; 4] {
        &self.e
    }

    /// Entries as rationals, for numeric sampling.
    pub fn to_rats(&self) -> [Rat; 4] {
        [
            Rat::from_integer(self.e[0].clone()),
            Rat::from_integer(self.e[1].clone()),
            Rat::from_integer(self.e[2].clone()),
            Rat::from_integer(self.e[3].clone()),
        ]
    }

    /// Determinant of the canonical representative (zero for the marker).
    pub fn det(&self) -> BigInt {
        &self.e[0] * &self.e[3] - &self.e[1] * &self.e[2]
    }

    /// Whether the normalized matrix is upper triangular (`c = 0`).
    ///
    /// The unlinked marker is not considered triangular.
    pub fn is_upper_triangular(&self) -> bool {
        !self.is_zero() && self.e[2].is_zero()
    }

    /// Matrix product `self · other`, canonicalized.  A product with the
    /// unlinked marker is the unlinked marker.
    pub fn compose(&self, other: &GeoMatrix) -> GeoMatrix {
        if self.is_zero() || other.is_zero() {
            return GeoMatrix::zero();
        }
        let [a1, b1, c1, d1] = &self.e;
        let [a2, b2, c2, d2] = &other.e;
        GeoMatrix::new(
            Rat::from_integer(a1 * a2 + b1 * c2),
            Rat::from_integer(a1 * b2 + b1 * d2),
            Rat::from_integer(c1 * a2 + d1 * c2),
            Rat::from_integer(c1 * b2 + d1 * d2),
        )
        .expect("product of positive-determinant matrices")
    }

    /// Projective inverse (the adjugate), canonicalized.
    pub fn inverse(&self) -> Result<GeoMatrix> {
        if self.is_zero() {
            return Err(Error::UnlinkedPair(
                "the unlinked marker has no inverse".into(),
            ));
        }
        let [a, b, c, d] = &self.e;
        GeoMatrix::new(
            Rat::from_integer(d.clone()),
            Rat::from_integer(-b),
            Rat::from_integer(-c),
            Rat::from_integer(a.clone()),
        )
    }

    /// The Möbius image `(az + b)/(cz + d)` as a rational function of the
    /// variable `zname` in the ambient `vars`.
    pub fn moebius_ratfn(&self, vars: &VarSet, zname: &str) -> Result<RatFn> {
        if self.is_zero() {
            return Err(Error::UnlinkedPair(
                "the unlinked marker has no Möbius action".into(),
            ));
        }
        let z = Poly::var(vars, zname)?;
        let [a, b, c, d] = self.to_rats();
        let num = z.scale(&a).add(&Poly::constant(vars, b));
        let den = z.scale(&c).add(&Poly::constant(vars, d));
        RatFn::new(num, den)
    }

    /// The cocycle denominator `cz + d` as a polynomial in `zname`.
    pub fn cocycle_den(&self, vars: &VarSet, zname: &str) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::UnlinkedPair(
                "the unlinked marker has no cocycle".into(),
            ));
        }
        let z = Poly::var(vars, zname)?;
        let [_, _, c, d] = self.to_rats();
        Ok(z.scale(&c).add(&Poly::constant(vars, d)))
    }

    /// The derivative factor `d(gz)/dz = det(g)/(cz + d)²` as a rational
    /// function of `zname`.
    pub fn derivative_factor(&self, vars: &VarSet, zname: &str) -> Result<RatFn> {
        if self.is_zero() {
            return Err(Error::UnlinkedPair(
                "the unlinked marker has no derivative factor".into(),
            ));
        }
        let den = self.cocycle_den(vars, zname)?;
        let num = Poly::constant(vars, Rat::from_integer(self.det()));
        RatFn::new(num, den.mul(&den))
    }
}

impl std::fmt::Display for GeoMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.e[0], self.e[1], self.e[2], self.e[3]
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratq;

    #[test]
    fn canonicalization_scales_and_fixes_sign() {
        let g = GeoMatrix::new(ratq(1, 2), ratq(0, 1), ratq(0, 1), ratq(3, 2))
            .unwrap();
        let h = GeoMatrix::from_integers(1, 0, 0, 3).unwrap();
        assert_eq!(g, h);
        // The sign flip lands on the same representative.
        let n = GeoMatrix::new(ratq(-1, 1), ratq(0, 1), ratq(0, 1), ratq(-3, 1))
            .unwrap();
        assert_eq!(n, h);
        assert_eq!(h.det(), BigInt::from(3));
        assert!(h.is_upper_triangular());
        assert_eq!(h.to_string(), "[[1, 0], [0, 3]]");
    }

    #[test]
    fn non_positive_determinants_are_rejected() {
        assert!(matches!(
            GeoMatrix::from_integers(1, 0, 0, -1),
            Err(Error::InvalidGeodesic(_))
        ));
        assert!(matches!(
            GeoMatrix::from_integers(1, 2, 2, 4),
            Err(Error::InvalidGeodesic(_))
        ));
        // All-zero input is the marker, not an error.
        let z = GeoMatrix::from_integers(0, 0, 0, 0).unwrap();
        assert!(z.is_zero());
        assert!(!z.is_upper_triangular());
    }

    #[test]
    fn compose_and_inverse_are_projective_group_ops() {
        let g = GeoMatrix::from_integers(2, 1, 1, 1).unwrap();
        let h = GeoMatrix::from_integers(1, -1, 1, 1).unwrap();
        let gh = g.compose(&h);
        assert_eq!(gh, GeoMatrix::from_integers(3, -1, 2, 0).unwrap());
        let ginv = g.inverse().unwrap();
        assert_eq!(g.compose(&ginv), GeoMatrix::identity());
        // Markers absorb composition and refuse inversion.
        let z = GeoMatrix::zero();
        assert!(g.compose(&z).is_zero());
        assert!(matches!(z.inverse(), Err(Error::UnlinkedPair(_))));
        // Scaled inputs compose to the same canonical product.
        let g2 = GeoMatrix::from_integers(4, 2, 2, 2).unwrap();
        assert_eq!(g2, g);
        assert_eq!(g2.compose(&h), gh);
    }

    #[test]
    fn moebius_and_derivative_factor() {
        let vars = VarSet::new(&["z"]).unwrap();
        let g = GeoMatrix::from_integers(2, 0, 0, 1).unwrap();
        let m = g.moebius_ratfn(&vars, "z").unwrap();
        assert_eq!(m.to_string(), "2*z");
        let f = g.derivative_factor(&vars, "z").unwrap();
        assert_eq!(f.to_string(), "2");
        let s = GeoMatrix::from_integers(0, -1, 1, 0).unwrap();
        let ms = s.moebius_ratfn(&vars, "z").unwrap();
        // Canonical form flips the sign: [[0, 1], [-1, 0]] acts identically.
        let back = ms.substitute(&[ms.clone()]).unwrap();
        assert_eq!(back, RatFn::var(&vars, "z").unwrap());
        let fs = s.derivative_factor(&vars, "z").unwrap();
        let expect = RatFn::new(
            Poly::one(&vars),
            Poly::var(&vars, "z").unwrap().pow(2),
        )
        .unwrap();
        assert_eq!(fs, expect);
    }
}
