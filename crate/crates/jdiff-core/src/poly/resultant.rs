//! Sylvester resultants, evaluated by fraction-free Bareiss elimination
//! on the matrix of coefficient polynomials.
//!
//! `res_v(p, q)` is the determinant of the Sylvester matrix of `p` and
//! `q` viewed as univariate polynomials in `v`; it vanishes exactly at
//! specializations of the remaining variables where `p` and `q` acquire a
//! common root (or both leading coefficients vanish).  Bareiss's
//! algorithm (Bareiss 1968, *Sylvester's identity and multistep
//! integer-preserving Gaussian elimination*) keeps every intermediate
//! entry a minor of the original matrix, so each division is exact.

use super::gcd::{coeffs_in, div_exact};
use super::{Poly, VarSet};
use crate::error::{Error, Result};

/// Sylvester resultant of `p` and `q` with respect to `v`.  Both inputs
/// must have positive degree in `v`.
pub fn resultant(p: &Poly, q: &Poly, v: &str) -> Result<Poly> {
    assert!(
        p.vars() == q.vars(),
        "resultant requires a shared ambient (use Poly::embed)"
    );
    let vi = p.vars().index_or_err(v)?;
    let m = p.degree_in_idx(vi).unwrap_or(0) as usize;
    let n = q.degree_in_idx(vi).unwrap_or(0) as usize;
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "resultant in {v} requires positive degree in {v} for both \
             arguments (degrees {m} and {n})"
        )));
    }
    let vars = p.vars().clone();
    let a = coeffs_in(p, vi); // a[k] multiplies v^k, len m+1
    let b = coeffs_in(q, vi);
    let size = m + n;
    let mut mat = vec![vec![Poly::zero(&vars); size]; size];
    // n rows of shifted p-coefficients (descending), then m rows of q's.
    for i in 0..n {
        for (k, ak) in a.iter().enumerate() {
            mat[i][i + (m - k)] = ak.clone();
        }
    }
    for i in 0..m {
        for (k, bk) in b.iter().enumerate() {
            mat[n + i][i + (n - k)] = bk.clone();
        }
    }
    Ok(bareiss_det(mat, &vars))
}

/// Determinant of a square polynomial matrix by fraction-free Bareiss
/// elimination with row pivoting.  Consumes the matrix.
pub(super) fn bareiss_det(mut m: Vec<Vec<Poly>>, vars: &VarSet) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(vars);
    }
    debug_assert!(m.iter().all(|row| row.len() == n));
    let mut sign_neg = false;
    let mut prev = Poly::one(vars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Poly::zero(vars);
            };
            m.swap(k, r);
            sign_neg = !sign_neg;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = div_exact(&t, &prev)
                    .expect("Bareiss division is exact by Sylvester's identity");
            }
            m[i][k] = Poly::zero(vars);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_neg {
        det.neg()
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::super::{same_radical, Ideal, MonOrder};
    use super::*;

    fn vs(names: &[&str]) -> VarSet {
        VarSet::new(names).unwrap()
    }

    fn p(src: &str, v: &VarSet) -> Poly {
        Poly::parse(src, v).unwrap()
    }

    #[test]
    fn linear_example() {
        let v = vs(&["x", "a", "b"]);
        let r = resultant(&p("x - a", &v), &p("x - b", &v), "x").unwrap();
        assert_eq!(r, p("a - b", &v));
    }

    #[test]
    fn square_against_shifted_line() {
        let v = vs(&["x", "y"]);
        let r = resultant(&p("x^2", &v), &p("x + y", &v), "x").unwrap();
        assert_eq!(r, p("y^2", &v));
    }

    #[test]
    fn vanishes_iff_common_factor() {
        let v = vs(&["x", "y"]);
        let r = resultant(&p("x*y", &v), &p("x", &v), "x").unwrap();
        assert!(r.is_zero());
        let s = resultant(&p("x*y + 1", &v), &p("x", &v), "x").unwrap();
        assert!(!s.is_zero());
    }

    #[test]
    fn multiplicative_in_first_argument() {
        let v = vs(&["x", "y"]);
        let f = p("x - y", &v);
        let g = p("x^2 + 1", &v);
        let h = p("x + y^2", &v);
        let lhs = resultant(&f.mul(&g), &h, "x").unwrap();
        let rhs = resultant(&f, &h, "x").unwrap().mul(&resultant(&g, &h, "x").unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn degree_zero_is_rejected() {
        let v = vs(&["x", "y"]);
        assert!(matches!(
            resultant(&p("y", &v), &p("x", &v), "x"),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            resultant(&p("x", &v), &p("x", &v), "w"),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn agrees_with_elimination_up_to_radical() {
        // Bivariate: eliminating x from (p, q) and the principal ideal of
        // res_x(p, q) cut out the same locus.
        let v = vs(&["x", "y"]);
        let f = p("x^2 + y^2 - 1", &v);
        let g = p("x - y", &v);
        let r = resultant(&f, &g, "x").unwrap();
        assert_eq!(r, p("2*y^2 - 1", &v));

        let elim = Ideal::new(&v, &[f, g]).unwrap().eliminate(&["x"]).unwrap();
        let yonly = elim.vars().clone();
        let r_small = r.embed(&yonly).unwrap();
        let principal = Ideal::new(&yonly, &[r_small]).unwrap();
        assert!(same_radical(&elim, &principal).unwrap());
        assert_eq!(
            elim.groebner(MonOrder::GrevLex).unwrap().as_slice(),
            &[p("2*y^2 - 1", &yonly)]
        );
    }

    #[test]
    fn bareiss_handles_zero_pivots() {
        // det [[0, 1], [1, 0]] = -1 via a row swap.
        let v = vs(&["x"]);
        let z = Poly::zero(&v);
        let o = Poly::one(&v);
        let d = bareiss_det(
            vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]],
            &v,
        );
        assert_eq!(d, o.neg());
        // Singular matrix.
        let d0 = bareiss_det(
            vec![vec![o.clone(), o.clone()], vec![o.clone(), o.clone()]],
            &v,
        );
        assert!(d0.is_zero());
    }
}
