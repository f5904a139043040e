//! Exact sparse multivariate polynomial arithmetic over ℚ.
//!
//! A [`Poly`] is a map from exponent vectors to nonzero rational
//! coefficients over a fixed, ordered list of variables (a [`VarSet`]).
//! Two polynomials interoperate only when they share a variable set;
//! cross-ambient use requires an explicit [`Poly::embed`].  This rules out
//! silent variable capture during elimination.
//!
//! Submodules provide monomial orders, parsing/printing, GCD, rational
//! functions, Gröbner bases, ideal operations, resultants, and linear
//! algebra over the fraction field.

mod gcd;
mod groebner;
mod ideal;
mod matrix;
mod modp;
mod order;
mod parse;
mod ratfn;
mod resultant;

pub use gcd::{div_exact, poly_gcd, squarefree_part, squarefree_split};
pub use groebner::{groebner_basis, normal_form, Budget};

/// Diagnostic-only (to be removed): the reduced mod-p GB shape of the
/// ideal generated by `gens` under `ord`.
pub fn debug_modp_shape(
    gens: &[Poly],
    ord: MonOrder,
    budget: &Budget,
) -> Option<Vec<(Vec<u32>, u64, usize)>> {
    let ipolys: Vec<Vec<(Vec<u32>, num_bigint::BigInt)>> = gens
        .iter()
        .filter_map(|g| {
            let prim = g.primitive();
            if prim.is_zero() {
                return None;
            }
            let mut terms: Vec<(Vec<u32>, num_bigint::BigInt)> = prim
                .terms()
                .map(|(e, c)| (e.clone(), c.numer().clone()))
                .collect();
            terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
            Some(terms)
        })
        .collect();
    let refs: Vec<&[(Vec<u32>, num_bigint::BigInt)]> =
        ipolys.iter().map(|v| v.as_slice()).collect();
    modp::modp_reduced_shape(&refs, ord, budget)
}
pub use ideal::{same_radical, Ideal};
pub use matrix::{FieldMatrix, Point};
pub use order::MonOrder;
pub use ratfn::RatFn;
pub use resultant::resultant;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// Exact rational scalar used for every coefficient in the crate.
pub type Rat = num_rational::BigRational;

/// Construct a `Rat` from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Construct a `Rat` from a fraction `n/d`.
pub fn ratq(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn is_valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An interned, ordered list of distinct variable identifiers.
///
/// The position of a name in the list is the index used by exponent
/// vectors.  Cloning is cheap (shared storage).
#[derive(Clone, Debug, PartialOrd, Ord)]
pub struct VarSet(Arc<Vec<String>>);

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for VarSet {}

impl std::hash::Hash for VarSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl VarSet {
    /// Build a variable set, validating identifier syntax and uniqueness.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<VarSet> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if !is_valid_ident(n) {
                return Err(Error::InvalidArgument(format!(
                    "invalid variable identifier `{n}`"
                )));
            }
            if !seen.insert(n.to_string()) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate variable `{n}`"
                )));
            }
            out.push(n.to_string());
        }
        Ok(VarSet(Arc::new(out)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|s| s.as_str())
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn index_or_err(&self, name: &str) -> Result<usize> {
        self.index(name).ok_or_else(|| {
            Error::InvalidArgument(format!("unknown variable `{name}`"))
        })
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index(name).is_some()
    }

    /// New set with `names` appended at the end.
    pub fn with_appended<S: AsRef<str>>(&self, names: &[S]) -> Result<VarSet> {
        let mut all: Vec<String> = self.0.as_ref().clone();
        all.extend(names.iter().map(|s| s.as_ref().to_string()));
        VarSet::new(&all)
    }

    /// New set with `names` prepended at the front.
    pub fn with_prepended<S: AsRef<str>>(&self, names: &[S]) -> Result<VarSet> {
        let mut all: Vec<String> =
            names.iter().map(|s| s.as_ref().to_string()).collect();
        all.extend(self.0.iter().cloned());
        VarSet::new(&all)
    }

    /// New set with the given names removed, preserving order of the rest.
    pub fn without(&self, names: &[&str]) -> Result<VarSet> {
        for n in names {
            self.index_or_err(n)?;
        }
        let keep: Vec<&String> =
            self.0.iter().filter(|v| !names.contains(&v.as_str())).collect();
        VarSet::new(&keep)
    }

    /// A name of the form `stem`, `stem_1`, `stem_2`, … not already present.
    pub fn fresh_name(&self, stem: &str) -> String {
        if !self.contains(stem) {
            return stem.to_string();
        }
        for k in 1u32.. {
            let cand = format!("{stem}_{k}");
            if !self.contains(&cand) {
                return cand;
            }
        }
        unreachable!()
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Invariants: no stored zero coefficients; every exponent vector has
/// length equal to the variable count.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: VarSet,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero(vars: &VarSet) -> Poly {
        Poly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &VarSet) -> Poly {
        Poly::constant(vars, Rat::one())
    }

    pub fn constant(vars: &VarSet, c: Rat) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0u32; vars.len()], c);
        }
        Poly { vars: vars.clone(), terms }
    }

    pub fn var(vars: &VarSet, name: &str) -> Result<Poly> {
        let i = vars.index_or_err(name)?;
        let mut exp = vec![0u32; vars.len()];
        exp[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exp, Rat::one());
        Ok(Poly { vars: vars.clone(), terms })
    }

    /// Build from `(exponent vector, coefficient)` pairs; accumulates
    /// duplicates and drops zeros.
    pub fn from_terms<I>(vars: &VarSet, it: I) -> Poly
    where
        I: IntoIterator<Item = (Vec<u32>, Rat)>,
    {
        let mut terms: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (e, c) in it {
            assert_eq!(e.len(), vars.len(), "exponent vector length mismatch");
            if c.is_zero() {
                continue;
            }
            match terms.entry(e) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let s = o.get().clone() + c;
                    if s.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = s;
                    }
                }
            }
        }
        Poly { vars: vars.clone(), terms }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1
                && self.terms.keys().next().unwrap().iter().all(|&e| e == 0))
    }

    /// `Some(c)` when the polynomial is the constant `c` (zero included).
    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    /// Terms sorted descending under `ord`.
    pub fn sorted_terms(&self, ord: MonOrder) -> Vec<(&Vec<u32>, &Rat)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ord.cmp(b.0, a.0));
        v
    }

    /// Leading `(monomial, coefficient)` under `ord`; `None` for zero.
    pub fn leading(&self, ord: MonOrder) -> Option<(&Vec<u32>, &Rat)> {
        self.terms
            .iter()
            .max_by(|a, b| ord.cmp(a.0, b.0))
    }

    pub fn coeff(&self, exp: &[u32]) -> Rat {
        self.terms.get(exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
    }

    pub fn degree_in_idx(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn degree_in(&self, name: &str) -> Result<Option<u32>> {
        Ok(self.degree_in_idx(self.vars.index_or_err(name)?))
    }

    /// Indices of variables that occur with a positive exponent.
    pub fn support_vars(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for e in self.terms.keys() {
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    s.insert(i);
                }
            }
        }
        s
    }

    fn assert_same_vars(&self, other: &Poly, op: &str) {
        assert!(
            self.vars == other.vars,
            "variable sets differ in `{op}`: [{}] vs [{}] (use Poly::embed)",
            self.vars.0.join(","),
            other.vars.0.join(","),
        );
    }

    pub fn neg(&self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.assert_same_vars(other, "add");
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            match terms.entry(e.clone()) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let s = o.get().clone() + c.clone();
                    if s.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = s;
                    }
                }
            }
        }
        Poly { vars: self.vars.clone(), terms }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    /// Multiply by the single term `coeff · x^exp`.
    pub fn mul_term(&self, exp: &[u32], coeff: &Rat) -> Poly {
        assert_eq!(exp.len(), self.vars.len());
        if coeff.is_zero() {
            return Poly::zero(&self.vars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let ne: Vec<u32> =
                    e.iter().zip(exp).map(|(a, b)| a + b).collect();
                (ne, c * coeff)
            })
            .collect();
        Poly { vars: self.vars.clone(), terms }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.assert_same_vars(other, "mul");
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.vars);
        }
        // Accumulate into a map; iterate over the smaller operand outside.
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (e1, c1) in &small.terms {
            for (e2, c2) in &large.terms {
                let e: Vec<u32> =
                    e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = c1 * c2;
                match acc.entry(e) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let s = o.get().clone() + c;
                        if s.is_zero() {
                            o.remove();
                        } else {
                            *o.get_mut() = s;
                        }
                    }
                }
            }
        }
        Poly { vars: self.vars.clone(), terms: acc }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.clone(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn partial_derivative(&self, name: &str) -> Result<Poly> {
        Ok(self.partial_derivative_idx(self.vars.index_or_err(name)?))
    }

    pub fn partial_derivative_idx(&self, i: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] > 0)
            .map(|(e, c)| {
                let mut ne = e.clone();
                let k = ne[i];
                ne[i] -= 1;
                (ne, c * Rat::from_integer(BigInt::from(k)))
            })
            .collect();
        Poly { vars: self.vars.clone(), terms }
    }

    pub fn eval_rat(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.vars.len(), "point arity mismatch");
        // Per-variable power cache.
        let mut pows: Vec<Vec<Rat>> = Vec::with_capacity(point.len());
        for (i, v) in point.iter().enumerate() {
            let d = self.degree_in_idx(i).unwrap_or(0) as usize;
            let mut p = Vec::with_capacity(d + 1);
            p.push(Rat::one());
            for k in 1..=d {
                let prev = p[k - 1].clone();
                p.push(prev * v);
            }
            pows.push(p);
        }
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= &pows[i][k as usize];
                }
            }
            acc += t;
        }
        acc
    }

    /// Evaluate with `f64` complex arithmetic (for numeric rank work).
    pub fn eval_complex(
        &self,
        point: &[num_complex::Complex64],
    ) -> num_complex::Complex64 {
        assert_eq!(point.len(), self.vars.len(), "point arity mismatch");
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let cf = rat_to_f64(c);
            let mut t = num_complex::Complex64::new(cf, 0.0);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= point[i].powu(k);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitute `images[i]` for variable `i`.  All images must share a
    /// common variable set, which becomes the result's ambient.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.vars.len(), "image arity mismatch");
        let target = if images.is_empty() {
            self.vars.clone()
        } else {
            images[0].vars.clone()
        };
        for im in images {
            assert!(im.vars == target, "images must share one variable set");
        }
        let mut pows: Vec<Vec<Poly>> = Vec::with_capacity(images.len());
        for (i, im) in images.iter().enumerate() {
            let d = self.degree_in_idx(i).unwrap_or(0) as usize;
            let mut p = Vec::with_capacity(d + 1);
            p.push(Poly::one(&target));
            for k in 1..=d {
                let prev = p[k - 1].clone();
                p.push(prev.mul(im));
            }
            pows.push(p);
        }
        let mut acc = Poly::zero(&target);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&pows[i][k as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Move to another variable set containing every variable in this
    /// polynomial's support (matched by name).
    pub fn embed(&self, target: &VarSet) -> Result<Poly> {
        if self.vars == *target {
            return Ok(self.clone());
        }
        // Map old index -> new index for support variables.
        let mut map: Vec<Option<usize>> = vec![None; self.vars.len()];
        for i in self.support_vars() {
            let name = self.vars.name(i);
            map[i] = Some(target.index(name).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "variable `{name}` missing from target ambient"
                ))
            })?);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = vec![0u32; target.len()];
                for (i, &x) in e.iter().enumerate() {
                    if x > 0 {
                        ne[map[i].unwrap()] = x;
                    }
                }
                (ne, c.clone())
            })
            .collect();
        Ok(Poly { vars: target.clone(), terms })
    }

    /// Content `c > 0` and sign such that `self = factor · prim` with
    /// `prim` integer-coefficient, content 1, and positive leading
    /// coefficient under grevlex.  Zero returns `(0, 0)`.
    pub fn to_integer_primitive(&self) -> (Rat, Poly) {
        if self.is_zero() {
            return (Rat::zero(), self.clone());
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut factor = Rat::new(num_gcd, den_lcm);
        let inv = factor.recip();
        let mut prim = self.scale(&inv);
        let lc_neg = prim
            .leading(MonOrder::GrevLex)
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false);
        if lc_neg {
            prim = prim.neg();
            factor = -factor;
        }
        (factor, prim)
    }

    /// The integer-primitive, positive-leading-coefficient normalization.
    pub fn primitive(&self) -> Poly {
        self.to_integer_primitive().1
    }
}

pub(crate) fn rat_to_f64(c: &Rat) -> f64 {
    // Scale down large numerator/denominator pairs to stay in f64 range.
    use num_traits::ToPrimitive;
    let n = c.numer();
    let d = c.denom();
    match (n.to_f64(), d.to_f64()) {
        (Some(nf), Some(df)) if nf.is_finite() && df.is_finite() && df != 0.0 => {
            nf / df
        }
        _ => {
            let shift = (n.bits().max(d.bits()) as i64 - 512).max(0) as u64;
            let n2 = n >> shift;
            let d2 = d >> shift;
            let nf = n2.to_f64().unwrap_or(f64::MAX);
            let df = d2.to_f64().unwrap_or(f64::MAX);
            nf / df
        }
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::add(self, rhs)
    }
}
impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly::sub(self, rhs)
    }
}
impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}
impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}
