//! Ideals of ℚ[x̄] with cached Gröbner data: elimination, saturation,
//! radical membership (Rabinovich's trick), and Krull dimension via
//! maximal independent variable sets of the leading-term ideal.

use super::groebner::{groebner_basis, normal_form, Budget};
use super::{MonOrder, Poly, VarSet};
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// A finitely generated ideal.  Immutable after construction; Gröbner
/// bases are computed on demand, cached per monomial order, and shared.
/// Derived ideals (elimination, saturation) inherit the budget.
pub struct Ideal {
    vars: VarSet,
    gens: Vec<Poly>,
    budget: Budget,
    cache: Mutex<HashMap<MonOrder, Arc<Vec<Poly>>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            vars: self.vars.clone(),
            gens: self.gens.clone(),
            budget: self.budget.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Ideal(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

impl Ideal {
    /// Ideal generated by `gens` in the ambient `vars`.  Generators over a
    /// sub-ambient are embedded; zero generators are dropped.
    pub fn new(vars: &VarSet, gens: &[Poly]) -> Result<Ideal> {
        let mut out = Vec::with_capacity(gens.len());
        for g in gens {
            let g = if g.vars() == vars { g.clone() } else { g.embed(vars)? };
            if !g.is_zero() {
                out.push(g);
            }
        }
        Ok(Ideal {
            vars: vars.clone(),
            gens: out,
            budget: Budget::default(),
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn zero(vars: &VarSet) -> Ideal {
        Ideal::new(vars, &[]).expect("no generators to embed")
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    /// Replace the resource budget (cache is kept: canonical results do
    /// not depend on the budget, it only bounds the search).
    pub fn with_budget(mut self, budget: Budget) -> Ideal {
        self.budget = budget;
        self
    }

    /// The ideal `self + (extra)` in the same ambient.
    pub fn with_extra_gens(&self, extra: &[Poly]) -> Result<Ideal> {
        let mut gens = self.gens.clone();
        for g in extra {
            gens.push(if g.vars() == &self.vars {
                g.clone()
            } else {
                g.embed(&self.vars)?
            });
        }
        Ideal::new(&self.vars, &gens).map(|i| i.with_budget(self.budget.clone()))
    }

    /// Reduced Gröbner basis under `ord` (cached).
    pub fn groebner(&self, ord: MonOrder) -> Result<Arc<Vec<Poly>>> {
        if let Some(b) = self.cache.lock().unwrap().get(&ord) {
            return Ok(b.clone());
        }
        let basis = Arc::new(groebner_basis(&self.gens, ord, &self.budget)?);
        // Last-writer-wins is fine: results are canonical.
        self.cache.lock().unwrap().insert(ord, basis.clone());
        Ok(basis)
    }

    /// Normal form of `p` modulo the ideal under `ord`.
    pub fn normal_form(&self, p: &Poly, ord: MonOrder) -> Result<Poly> {
        let p = if p.vars() == &self.vars { p.clone() } else { p.embed(&self.vars)? };
        let basis = self.groebner(ord)?;
        Ok(normal_form(&p, &basis, ord))
    }

    /// Ideal membership `p ∈ I`.
    pub fn contains(&self, p: &Poly) -> Result<bool> {
        Ok(self.normal_form(p, MonOrder::GrevLex)?.is_zero())
    }

    /// Is this the unit ideal (empty variety)?
    pub fn is_unit(&self) -> Result<bool> {
        let basis = self.groebner(MonOrder::GrevLex)?;
        Ok(basis.len() == 1 && basis[0].is_constant())
    }

    /// Is this the zero ideal?
    pub fn is_zero_ideal(&self) -> Result<bool> {
        Ok(self.groebner(MonOrder::GrevLex)?.is_empty())
    }

    /// Elimination ideal `I ∩ ℚ[vars ∖ drop]`, returned in the smaller
    /// ambient (original relative order of the kept variables).
    pub fn eliminate(&self, drop: &[&str]) -> Result<Ideal> {
        for d in drop {
            if !self.vars.contains(d) {
                return Err(Error::InvalidArgument(format!(
                    "cannot eliminate {d}: not an ambient variable"
                )));
            }
        }
        if drop.is_empty() {
            return Ok(self.clone());
        }
        let dropped: Vec<&str> =
            self.vars.names().filter(|n| drop.contains(n)).collect();
        let kept: Vec<&str> =
            self.vars.names().filter(|n| !drop.contains(n)).collect();
        let mut reordered: Vec<&str> = dropped.clone();
        reordered.extend(&kept);
        let ext = VarSet::new(&reordered)?;
        let kept_vars = VarSet::new(&kept)?;

        let gens: Vec<Poly> =
            self.gens.iter().map(|g| g.embed(&ext)).collect::<Result<_>>()?;
        let ord = MonOrder::Block { front: dropped.len() };
        let basis = groebner_basis(&gens, ord, &self.budget)?;
        let nd = dropped.len();
        let mut out = Vec::new();
        for b in &basis {
            if b.support_vars().iter().all(|&i| i >= nd) {
                out.push(b.embed(&kept_vars)?);
            }
        }
        Ideal::new(&kept_vars, &out).map(|i| i.with_budget(self.budget.clone()))
    }

    /// Saturation `I : p^∞` by the extra-variable method: adjoin `t`, add
    /// `1 − t·p`, eliminate `t`.
    pub fn saturate(&self, p: &Poly) -> Result<Ideal> {
        let (ext_ideal, t) = self.rabinovich(p)?;
        let sat = ext_ideal.eliminate(&[&t])?;
        // Same ambient as self (kept variables = all of them, same order).
        debug_assert!(sat.vars() == &self.vars);
        Ok(sat)
    }

    /// Saturate by `p` and eliminate `drop` in a single block Gröbner
    /// computation: `(I : p^∞) ∩ ℚ[vars ∖ drop]` equals
    /// `(I + (1 − t·p)) ∩ ℚ[vars ∖ ({t} ∪ drop)]`.
    pub fn saturate_eliminate(&self, p: &Poly, drop: &[&str]) -> Result<Ideal> {
        let (ext_ideal, t) = self.rabinovich(p)?;
        let mut all_drop: Vec<&str> = vec![&t];
        all_drop.extend(drop);
        ext_ideal.eliminate(&all_drop)
    }

    /// `I + (1 − t·p)` over the ambient with a fresh `t` prepended.
    fn rabinovich(&self, p: &Poly) -> Result<(Ideal, String)> {
        let p = if p.vars() == &self.vars { p.clone() } else { p.embed(&self.vars)? };
        if p.is_zero() {
            return Err(Error::InvalidArgument(
                "saturation/radical witness must be nonzero".into(),
            ));
        }
        let t = self.vars.fresh_name("t");
        let ext = self.vars.with_prepended(&[&t])?;
        let mut gens: Vec<Poly> =
            self.gens.iter().map(|g| g.embed(&ext)).collect::<Result<_>>()?;
        let tp = Poly::var(&ext, &t)?.mul(&p.embed(&ext)?);
        gens.push(Poly::one(&ext).sub(&tp));
        let ideal = Ideal::new(&ext, &gens)?.with_budget(self.budget.clone());
        Ok((ideal, t))
    }

    /// Rabinovich's trick: `p` vanishes on `V(I)` iff
    /// `1 ∈ I + (1 − t·p)`.  The zero polynomial vanishes vacuously.
    pub fn radical_membership(&self, p: &Poly) -> Result<bool> {
        let p = if p.vars() == &self.vars { p.clone() } else { p.embed(&self.vars)? };
        if p.is_zero() {
            return Ok(true);
        }
        let (ext_ideal, _) = self.rabinovich(&p)?;
        ext_ideal.is_unit()
    }

    /// Krull dimension of `V(I)` (−1 for the unit ideal), from the maximal
    /// variable sets independent modulo the leading-term ideal
    /// (Kredel–Weispfenning).  A set `S` is independent when no leading
    /// monomial lies in `ℚ[S]`; equivalently its complement hits every
    /// leading-monomial support, so `dim = n − (minimum hitting set)`.
    pub fn dimension(&self) -> Result<i64> {
        let n = self.vars.len();
        let basis = self.groebner(MonOrder::GrevLex)?;
        if basis.is_empty() {
            return Ok(n as i64);
        }
        if basis.len() == 1 && basis[0].is_constant() {
            return Ok(-1);
        }
        if n > 64 {
            return Err(Error::BudgetExceeded(format!(
                "dimension computation supports at most 64 variables, got {n}"
            )));
        }
        let mut masks: Vec<u64> = Vec::new();
        for b in basis.iter() {
            let (lm, _) = b.leading(MonOrder::GrevLex).expect("nonzero");
            let mut m = 0u64;
            for (i, &e) in lm.iter().enumerate() {
                if e > 0 {
                    m |= 1 << i;
                }
            }
            masks.push(m);
        }
        masks.sort_by_key(|m| m.count_ones());
        masks.dedup();
        // Remove supersets: hitting a subset implies hitting the superset.
        let mut minimal: Vec<u64> = Vec::new();
        for &m in &masks {
            if !minimal.iter().any(|&s| s & m == s) {
                minimal.push(m);
            }
        }
        let mut best = n as u32;
        let mut nodes: u64 = 0;
        min_hitting(&minimal, 0, 0, &mut best, &mut nodes)?;
        Ok(n as i64 - best as i64)
    }
}

const HITTING_NODE_CAP: u64 = 20_000_000;

fn min_hitting(
    masks: &[u64],
    chosen: u64,
    count: u32,
    best: &mut u32,
    nodes: &mut u64,
) -> Result<()> {
    *nodes += 1;
    if *nodes > HITTING_NODE_CAP {
        return Err(Error::BudgetExceeded(
            "dimension search exceeded the node budget".into(),
        ));
    }
    if count >= *best {
        return Ok(());
    }
    let Some(&m) = masks.iter().find(|&&m| m & chosen == 0) else {
        *best = count;
        return Ok(());
    };
    let mut rest = m;
    while rest != 0 {
        let v = rest.trailing_zeros();
        rest &= rest - 1;
        min_hitting(masks, chosen | (1 << v), count + 1, best, nodes)?;
    }
    Ok(())
}

impl PartialEq for Ideal {
    /// Generator-list equality in the same ambient (not ideal equality).
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.gens == other.gens
    }
}

/// Do the two ideals have the same radical?  Decided by mutual radical
/// membership of the generators.
pub fn same_radical(a: &Ideal, b: &Ideal) -> Result<bool> {
    for g in b.gens() {
        if !a.radical_membership(g)? {
            return Ok(false);
        }
    }
    for g in a.gens() {
        if !b.radical_membership(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}
