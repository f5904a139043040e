//! Matrices over the rational-function field ℚ(x̄): generic rank,
//! evaluated rank at exact or numeric points, minors in deterministic
//! order, and Jacobians of polynomial systems.
//!
//! Generic rank clears denominators row by row and runs fraction-free
//! Bareiss elimination with full pivoting on the resulting polynomial
//! matrix — every division is exact, no rational-function arithmetic
//! occurs in the inner loop.

use super::gcd::{div_exact, poly_lcm};
use super::resultant::bareiss_det;
use super::{Poly, Rat, RatFn, VarSet};
use crate::error::{Error, Result};
use num_complex::Complex64;
use num_traits::Zero;

/// An evaluation point for rank computations.
#[derive(Clone, Debug)]
pub enum Point {
    /// Exact rational coordinates, one per ambient variable.
    Exact(Vec<Rat>),
    /// Complex floating coordinates plus the tolerance below which a
    /// pivot (after per-row max normalization) counts as zero; also used
    /// as the pole-proximity threshold for denominators.
    Numeric(Vec<Complex64>, f64),
}

impl Point {
    pub fn len(&self) -> usize {
        match self {
            Point::Exact(v) => v.len(),
            Point::Numeric(v, _) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A dense `rows × cols` matrix of rational functions over one ambient.
#[derive(Clone, Debug)]
pub struct FieldMatrix {
    vars: VarSet,
    rows: usize,
    cols: usize,
    entries: Vec<RatFn>, // row-major
}

impl FieldMatrix {
    pub fn new(
        vars: &VarSet,
        rows: usize,
        cols: usize,
        entries: Vec<RatFn>,
    ) -> Result<FieldMatrix> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "matrix shape {rows}×{cols} needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        for e in &entries {
            if e.vars() != vars {
                return Err(Error::InvalidArgument(
                    "matrix entries must share the ambient variable set".into(),
                ));
            }
        }
        Ok(FieldMatrix { vars: vars.clone(), rows, cols, entries })
    }

    pub fn from_rows(vars: &VarSet, rows: Vec<Vec<RatFn>>) -> Result<FieldMatrix> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        FieldMatrix::new(vars, r, c, rows.into_iter().flatten().collect())
    }

    /// Jacobian of a polynomial system: row `k` is the gradient of
    /// `gens[k]` with respect to every ambient variable in order.
    pub fn jacobian(vars: &VarSet, gens: &[Poly]) -> Result<FieldMatrix> {
        let mut entries = Vec::with_capacity(gens.len() * vars.len());
        for g in gens {
            let g = if g.vars() == vars { g.clone() } else { g.embed(vars)? };
            for i in 0..vars.len() {
                entries.push(RatFn::from_poly(g.partial_derivative_idx(i)));
            }
        }
        FieldMatrix::new(vars, gens.len(), vars.len(), entries)
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &RatFn {
        &self.entries[i * self.cols + j]
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.entry(i, j).clone());
            }
        }
        FieldMatrix {
            vars: self.vars.clone(),
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Rank over ℚ(x̄) (generic rank) or, when `at` is given, the rank of
    /// the evaluated matrix at that point.
    pub fn rank(&self, at: Option<&Point>) -> Result<usize> {
        match at {
            None => Ok(self.generic_rank()),
            Some(p) => self.rank_at(p),
        }
    }

    /// Rank over the rational-function field.
    pub fn generic_rank(&self) -> usize {
        // Clear denominators row-wise: scaling a row by a nonzero
        // rational function does not change the rank.
        let mut m: Vec<Vec<Poly>> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut l = Poly::one(&self.vars);
            for j in 0..self.cols {
                l = poly_lcm(&l, self.entry(i, j).den());
            }
            let row: Vec<Poly> = (0..self.cols)
                .map(|j| {
                    let e = self.entry(i, j);
                    let cof = div_exact(&l, e.den()).expect("lcm is divisible");
                    e.num().mul(&cof)
                })
                .collect();
            m.push(row);
        }
        bareiss_rank(m, &self.vars)
    }

    /// Rank of the matrix evaluated at a point.
    pub fn rank_at(&self, at: &Point) -> Result<usize> {
        if at.len() != self.vars.len() {
            return Err(Error::InvalidArgument(format!(
                "point has {} coordinates, ambient has {}",
                at.len(),
                self.vars.len()
            )));
        }
        match at {
            Point::Exact(coords) => {
                let mut m = Vec::with_capacity(self.rows);
                for i in 0..self.rows {
                    let mut row = Vec::with_capacity(self.cols);
                    for j in 0..self.cols {
                        row.push(self.entry(i, j).eval_rat(coords)?);
                    }
                    m.push(row);
                }
                Ok(rational_rank(m))
            }
            Point::Numeric(coords, tol) => {
                let mut m = Vec::with_capacity(self.rows);
                for i in 0..self.rows {
                    let mut row = Vec::with_capacity(self.cols);
                    for j in 0..self.cols {
                        row.push(self.entry(i, j).eval_complex(coords, *tol)?);
                    }
                    m.push(row);
                }
                Ok(numeric_rank(m, *tol))
            }
        }
    }

    /// All `size × size` minors, in lexicographic order of (row set,
    /// column set).  Small minors expand directly; larger ones clear
    /// denominators and run fraction-free Bareiss.
    pub fn minors(&self, size: usize) -> Result<Vec<RatFn>> {
        if size == 0 || size > self.rows.min(self.cols) {
            return Err(Error::InvalidArgument(format!(
                "minor size {size} out of range for a {}×{} matrix",
                self.rows, self.cols
            )));
        }
        let row_sets = combinations(self.rows, size);
        let col_sets = combinations(self.cols, size);
        let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
        for rs in &row_sets {
            for cs in &col_sets {
                out.push(self.submatrix_det(rs, cs)?);
            }
        }
        Ok(out)
    }

    fn submatrix_det(&self, rs: &[usize], cs: &[usize]) -> Result<RatFn> {
        let k = rs.len();
        let e = |a: usize, b: usize| self.entry(rs[a], cs[b]);
        match k {
            1 => Ok(e(0, 0).clone()),
            2 => Ok(e(0, 0).mul(e(1, 1)).sub(&e(0, 1).mul(e(1, 0)))),
            3 => {
                let m00 = e(1, 1).mul(e(2, 2)).sub(&e(1, 2).mul(e(2, 1)));
                let m01 = e(1, 0).mul(e(2, 2)).sub(&e(1, 2).mul(e(2, 0)));
                let m02 = e(1, 0).mul(e(2, 1)).sub(&e(1, 1).mul(e(2, 0)));
                Ok(e(0, 0)
                    .mul(&m00)
                    .sub(&e(0, 1).mul(&m01))
                    .add(&e(0, 2).mul(&m02)))
            }
            _ => {
                // Clear denominators row by row; det scales by the product.
                let mut cleared = Vec::with_capacity(k);
                let mut scale = Poly::one(&self.vars);
                for &i in rs {
                    let mut l = Poly::one(&self.vars);
                    for &j in cs {
                        l = poly_lcm(&l, self.entry(i, j).den());
                    }
                    let row: Vec<Poly> = cs
                        .iter()
                        .map(|&j| {
                            let en = self.entry(i, j);
                            let cof = div_exact(&l, en.den())
                                .expect("lcm is divisible");
                            en.num().mul(&cof)
                        })
                        .collect();
                    scale = scale.mul(&l);
                    cleared.push(row);
                }
                let det = bareiss_det(cleared, &self.vars);
                RatFn::new(det, scale)
            }
        }
    }
}

/// Rank of a polynomial matrix by fraction-free Bareiss elimination with
/// full pivoting; the pivot is the nonzero candidate with the fewest
/// terms (ties broken by position) to limit intermediate growth.
fn bareiss_rank(mut m: Vec<Vec<Poly>>, vars: &VarSet) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut prev = Poly::one(vars);
    let steps = rows.min(cols);
    for k in 0..steps {
        // Full pivot search.
        let mut pivot: Option<(usize, usize, usize)> = None; // (terms, i, j)
        for i in k..rows {
            for j in k..cols {
                if m[i][j].is_zero() {
                    continue;
                }
                let t = m[i][j].num_terms();
                if pivot.map(|(pt, _, _)| t < pt).unwrap_or(true) {
                    pivot = Some((t, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = pivot else {
            return k;
        };
        m.swap(k, pi);
        if pj != k {
            for row in &mut m {
                row.swap(k, pj);
            }
        }
        for i in k + 1..rows {
            for j in k + 1..cols {
                let t = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = div_exact(&t, &prev)
                    .expect("Bareiss division is exact by Sylvester's identity");
            }
            m[i][k] = Poly::zero(vars);
        }
        prev = m[k][k].clone();
    }
    steps
}

/// Exact rank of a rational matrix by Gaussian elimination.
fn rational_rank(mut m: Vec<Vec<Rat>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone() / m[r][c].clone();
            for j in c..cols {
                let s = m[r][j].clone() * f.clone();
                m[i][j] -= s;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Floating rank with per-row max normalization (each nonzero row is
/// scale-free) and full pivoting; pivots with modulus ≤ `tol` end the
/// elimination.
fn numeric_rank(mut m: Vec<Vec<Complex64>>, tol: f64) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    for row in &mut m {
        let mx = row.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        if mx > 0.0 {
            for z in row.iter_mut() {
                *z /= mx;
            }
        }
    }
    let steps = rows.min(cols);
    for k in 0..steps {
        let mut best = (0.0f64, k, k);
        for i in k..rows {
            for j in k..cols {
                let a = m[i][j].norm();
                if a > best.0 {
                    best = (a, i, j);
                }
            }
        }
        if best.0 <= tol {
            return k;
        }
        let (_, pi, pj) = best;
        m.swap(k, pi);
        if pj != k {
            for row in &mut m {
                row.swap(k, pj);
            }
        }
        for i in k + 1..rows {
            let f = m[i][k] / m[k][k];
            for j in k..cols {
                let s = m[k][j] * f;
                m[i][j] -= s;
            }
        }
    }
    steps
}

/// All `k`-element subsets of `{0, …, n−1}` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // Rightmost position that can still be incremented.
        let mut i = k;
        while i > 0 && cur[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}
