//! Buchberger's algorithm with the Gebauer–Möller pair criteria and the
//! sugar selection strategy.
//!
//! All arithmetic is fraction-free over ℤ: polynomials are scaled to
//! integer coefficients with content 1, S-polynomials and reduction steps
//! use gcd-scaled integer multipliers, and contents are stripped as they
//! appear.  The returned basis is the *reduced* Gröbner basis up to
//! positive rational scaling — each element is integer-primitive with a
//! positive leading coefficient (divide each element by its leading
//! coefficient to obtain the monic reduced basis).
//!
//! Pair management follows Gebauer & Möller, *On an installation of
//! Buchberger's algorithm* (J. Symbolic Comput. 6, 1988): new pairs are
//! filtered by the lcm-divisibility (chain) criterion, exactly one pair is
//! kept per lcm class, and coprime leading monomials (Buchberger's first
//! criterion) both prune other pairs and are then dropped themselves.
//! Selection is the normal strategy — smallest pair lcm under the active
//! order — with the *sugar* degree and then the pair indices as tie
//! breakers (Giovini et al., *"One sugar cube, please"*, ISSAC 1991).

use super::modp::{groebner_trace, TraceStep};
use super::{MonOrder, Poly, Rat, VarSet};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

pub(crate) fn gb_log() -> bool {
    static ON: std::sync::OnceLock<bool> = std::sync::OnceLock::new();
    *ON.get_or_init(|| std::env::var("JDIFF_GB_LOG").is_ok())
}

/// Resource limits for Gröbner-basis computations.  Exceeding any limit
/// aborts with [`Error::ComputationAborted`] carrying diagnostics; it never
/// silently returns a partial basis.
#[derive(Clone, Debug)]
pub struct Budget {
    /// Maximum number of basis elements retained at any point.
    pub max_basis: usize,
    /// Maximum total degree of any basis element or S-pair lcm.
    pub max_degree: u32,
    /// Maximum number of S-pairs processed.
    pub max_pairs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_basis: 3000,
            max_degree: 100,
            max_pairs: 500_000,
        }
    }
}

// ---------------------------------------------------------------------
// Monomial helpers (exponent vectors of a fixed shared length).
// ---------------------------------------------------------------------

pub(crate) type Mono = Vec<u32>;

/// The empty slice is the identity multiplier (used by reduction, where
/// the partial remainder is never shifted).
pub(crate) fn mono_mul(a: &[u32], b: &[u32]) -> Mono {
    if b.is_empty() {
        return a.to_vec();
    }
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `a / b`; caller guarantees `b | a`.
pub(crate) fn mono_div(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Does `a` divide `b`?
pub(crate) fn mono_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub(crate) fn mono_lcm(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub(crate) fn mono_coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

pub(crate) fn mono_deg(a: &[u32]) -> u64 {
    a.iter().map(|&x| x as u64).sum()
}

// ---------------------------------------------------------------------
// Integer-primitive polynomials with order-sorted term lists.
// ---------------------------------------------------------------------

/// Terms sorted strictly descending under the active order; nonempty term
/// lists keep content 1 and a positive leading coefficient.
#[derive(Clone, Debug)]
struct IPoly {
    terms: Vec<(Mono, BigInt)>,
}

impl IPoly {
    fn lm(&self) -> &Mono {
        &self.terms[0].0
    }

    fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn total_degree(&self) -> u64 {
        self.terms.iter().map(|(e, _)| mono_deg(e)).max().unwrap_or(0)
    }

    /// Strip the content and force a positive leading coefficient.
    fn normalize(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        let mut content = BigInt::zero();
        for (_, c) in &self.terms {
            content = content.gcd(c);
            if content.is_one() {
                break;
            }
        }
        if self.terms[0].1.is_negative() {
            content = -content;
        }
        if !content.is_one() {
            for (_, c) in &mut self.terms {
                *c = &*c / &content;
            }
        }
    }
}

fn ipoly_from(p: &Poly, ord: MonOrder) -> Option<IPoly> {
    let prim = p.primitive();
    if prim.is_zero() {
        return None;
    }
    let mut terms: Vec<(Mono, BigInt)> = prim
        .terms()
        .map(|(e, c)| (e.clone(), c.numer().clone()))
        .collect();
    terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
    let mut ip = IPoly { terms };
    // `primitive` normalizes the sign under grevlex; re-normalize for `ord`.
    if ip.lc().is_negative() {
        for (_, c) in &mut ip.terms {
            *c = -&*c;
        }
    }
    Some(ip)
}

fn ipoly_to_poly(ip: &IPoly, vars: &VarSet) -> Poly {
    Poly::from_terms(
        vars,
        ip.terms.iter().map(|(e, c)| (e.clone(), Rat::from(c.clone()))),
    )
}

/// `ca·x^ma·a + cb·x^mb·b`, merging the two sorted term lists.
/// Monomial orders are multiplicative, so shifting by `ma`/`mb` preserves
/// the descending sort.
fn combine(
    ca: &BigInt,
    ma: &[u32],
    a: &[(Mono, BigInt)],
    cb: &BigInt,
    mb: &[u32],
    b: &[(Mono, BigInt)],
    ord: MonOrder,
) -> Vec<(Mono, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut j = 0;
    while i < a.len() && j < b.len() {
        let ea = mono_mul(&a[i].0, ma);
        let eb = mono_mul(&b[j].0, mb);
        match ord.cmp(&ea, &eb) {
            Ordering::Greater => {
                out.push((ea, ca * &a[i].1));
                i += 1;
            }
            Ordering::Less => {
                out.push((eb, cb * &b[j].1));
                j += 1;
            }
            Ordering::Equal => {
                let c = ca * &a[i].1 + cb * &b[j].1;
                if !c.is_zero() {
                    out.push((ea, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    while i < a.len() {
        out.push((mono_mul(&a[i].0, ma), ca * &a[i].1));
        i += 1;
    }
    while j < b.len() {
        out.push((mono_mul(&b[j].0, mb), cb * &b[j].1));
        j += 1;
    }
    out
}

// ---------------------------------------------------------------------
// Reduction.
// ---------------------------------------------------------------------

/// Outcome of a full fraction-free reduction: `scale · input ≡ remainder`
/// modulo the reductors, with `remainder` in descending term order.
struct Reduced {
    remainder: Vec<(Mono, BigInt)>,
    scale: Rat,
    sugar: u64,
}

/// Fully reduce `work` against `basis` (skipping indices where
/// `active[i]` is false, when provided).  Every step multiplies the
/// partial remainder by an integer, so the exact rational remainder of
/// the input is `remainder / scale`.
fn reduce_full(
    mut work: Vec<(Mono, BigInt)>,
    mut sugar: u64,
    basis: &[IPoly],
    sugars: &[u64],
    active: Option<&[bool]>,
    ord: MonOrder,
) -> Reduced {
    let mut acc: Vec<(Mono, BigInt)> = Vec::new();
    let mut scale = Rat::one();
    let no_mono: Mono = Vec::new();
    'outer: while let Some((lm, lc)) = work.first().cloned() {
        for (gi, g) in basis.iter().enumerate() {
            if let Some(mask) = active {
                if !mask[gi] {
                    continue;
                }
            }
            if g.is_zero() || !mono_divides(g.lm(), &lm) {
                continue;
            }
            let m = mono_div(&lm, g.lm());
            let d = lc.gcd(g.lc());
            let mult = g.lc() / &d; // > 0: basis elements keep lc > 0
            let gmul = -(&lc / &d);
            work = combine(&mult, &no_mono, &work, &gmul, &m, &g.terms, ord);
            debug_assert!(work.first().map(|(e, _)| ord.cmp(e, &lm)) != Some(Ordering::Equal));
            sugar = sugar.max(sugars.get(gi).copied().unwrap_or(0) + mono_deg(&m));
            if !mult.is_one() {
                for (_, c) in &mut acc {
                    *c = &*c * &mult;
                }
                scale *= Rat::from(mult);
            }
            // Joint content strip keeps coefficients small; fold the
            // stripped factor into `scale` to stay exact.
            let mut content = BigInt::zero();
            for (_, c) in acc.iter().chain(work.iter()) {
                content = content.gcd(c);
                if content.is_one() {
                    break;
                }
            }
            if !content.is_zero() && !content.is_one() {
                for (_, c) in acc.iter_mut().chain(work.iter_mut()) {
                    *c = &*c / &content;
                }
                scale /= Rat::from(content);
            }
            continue 'outer;
        }
        // Leading monomial irreducible: move it to the remainder.
        acc.push(work.remove(0));
    }
    Reduced { remainder: acc, scale, sugar }
}

/// Remainder of `p` on division by `basis` under `ord` — the normal form
/// when `basis` is a Gröbner basis for `ord`.  Exact over ℚ.
pub fn normal_form(p: &Poly, basis: &[Poly], ord: MonOrder) -> Poly {
    let vars = p.vars().clone();
    for g in basis {
        assert!(
            g.vars() == &vars,
            "normal_form requires a shared ambient (use Poly::embed)"
        );
    }
    let Some(ip) = ipoly_from(p, ord) else {
        return Poly::zero(&vars);
    };
    let (factor, _) = p.to_integer_primitive();
    let ibasis: Vec<IPoly> = basis
        .iter()
        .filter_map(|g| ipoly_from(g, ord))
        .collect();
    let sugars = vec![0u64; ibasis.len()];
    let red = reduce_full(ip.terms, 0, &ibasis, &sugars, None, ord);
    let unscale = factor / red.scale;
    Poly::from_terms(
        &vars,
        red.remainder
            .into_iter()
            .map(|(e, c)| (e, Rat::from(c) * &unscale)),
    )
}

// ---------------------------------------------------------------------
// Pair management.
// ---------------------------------------------------------------------

/// Heap entry; `Ord` is "worst first" so the `BinaryHeap` pops the pair
/// with the smallest lcm (then sugar, then indices).
#[derive(PartialEq, Eq)]
struct PairKey {
    lcm: Mono,
    sugar: u64,
    i: u32,
    j: u32,
    ord: MonOrder,
}

impl Ord for PairKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ord
            .cmp(&self.lcm, &other.lcm)
            .then_with(|| self.sugar.cmp(&other.sugar))
            .then_with(|| self.i.cmp(&other.i))
            .then_with(|| self.j.cmp(&other.j))
            .reverse()
    }
}

impl PartialOrd for PairKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct State {
    ord: MonOrder,
    basis: Vec<IPoly>,
    sugars: Vec<u64>,
    heap: BinaryHeap<PairKey>,
    /// Pairs not yet discarded by the chain criterion, with their lcms.
    alive: HashMap<(u32, u32), Mono>,
}

impl State {
    /// Gebauer–Möller UPDATE: install basis element `t` (already pushed)
    /// and rebuild the pair set.
    fn update(&mut self, t: usize) {
        let lm_t = self.basis[t].lm().clone();

        // Candidate new pairs (k, t), in ascending k for determinism.
        struct Cand {
            k: u32,
            lcm: Mono,
            coprime: bool,
        }
        let mut cands: Vec<Cand> = Vec::with_capacity(t);
        for k in 0..t {
            if self.basis[k].is_zero() {
                continue;
            }
            let lm_k = self.basis[k].lm();
            cands.push(Cand {
                k: k as u32,
                lcm: mono_lcm(lm_k, &lm_t),
                coprime: mono_coprime(lm_k, &lm_t),
            });
        }

        // Chain criterion within the new pairs: keep a candidate iff its
        // leading monomials are coprime or no other candidate's lcm
        // divides its lcm (strictly among the unprocessed ones, so exactly
        // one survivor is kept per lcm class).
        let mut kept: Vec<Cand> = Vec::new();
        for idx in 0..cands.len() {
            let c = &cands[idx];
            let killed = !c.coprime
                && (kept.iter().any(|d| mono_divides(&d.lcm, &c.lcm))
                    || cands[idx + 1..].iter().any(|d| {
                        d.lcm != c.lcm && mono_divides(&d.lcm, &c.lcm)
                    }));
            if !killed {
                kept.push(Cand {
                    k: c.k,
                    lcm: c.lcm.clone(),
                    coprime: c.coprime,
                });
            }
        }

        // Prune old pairs by the chain criterion through lm(t).
        let drop: Vec<(u32, u32)> = self
            .alive
            .iter()
            .filter(|((i, j), lcm)| {
                mono_divides(&lm_t, lcm)
                    && mono_lcm(self.basis[*i as usize].lm(), &lm_t) != **lcm
                    && mono_lcm(self.basis[*j as usize].lm(), &lm_t) != **lcm
            })
            .map(|(k, _)| *k)
            .collect();
        for k in drop {
            self.alive.remove(&k);
        }

        // Buchberger's first criterion: coprime survivors are discarded.
        for c in kept {
            if c.coprime {
                continue;
            }
            let k = c.k as usize;
            let sugar = (self.sugars[k] + mono_deg(&mono_div(&c.lcm, self.basis[k].lm())))
                .max(self.sugars[t] + mono_deg(&mono_div(&c.lcm, &lm_t)));
            self.alive.insert((c.k, t as u32), c.lcm.clone());
            self.heap.push(PairKey {
                lcm: c.lcm,
                sugar,
                i: c.k,
                j: t as u32,
                ord: self.ord,
            });
        }
    }
}

// ---------------------------------------------------------------------
// The main algorithm.
// ---------------------------------------------------------------------

/// Gröbner basis of the ideal generated by `gens` under `ord`.
///
/// Returns the reduced basis up to positive scaling (integer-primitive
/// elements, positive leading coefficients), sorted ascending by leading
/// monomial.  The zero ideal yields an empty basis; a unit ideal yields
/// `[1]`.
pub fn groebner_basis(
    gens: &[Poly],
    ord: MonOrder,
    budget: &Budget,
) -> Result<Vec<Poly>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let vars = first.vars().clone();
    for g in gens {
        assert!(
            g.vars() == &vars,
            "groebner_basis requires a shared ambient (use Poly::embed)"
        );
    }

    let mut inputs: Vec<IPoly> =
        gens.iter().filter_map(|g| ipoly_from(g, ord)).collect();
    if inputs.is_empty() {
        return Ok(Vec::new());
    }
    // Smallest leading monomials first: cheaper early reductions.
    inputs.sort_by(|a, b| {
        ord.cmp(a.lm(), b.lm())
            .then_with(|| a.terms.len().cmp(&b.terms.len()))
    });

    let mut st = State {
        ord,
        basis: Vec::new(),
        sugars: Vec::new(),
        heap: BinaryHeap::new(),
        alive: HashMap::new(),
    };
    let mut pairs_processed: usize = 0;

    let abort = |st: &State, pairs: usize, what: &str| -> Error {
        Error::ComputationAborted(format!(
            "Gröbner budget exceeded ({what}): {} basis elements, {} pairs \
             processed",
            st.basis.len(),
            pairs
        ))
    };

    let install = |st: &mut State,
                   red: Reduced,
                   pairs_processed: usize|
     -> Result<bool> {
        if red.remainder.is_empty() {
            return Ok(false);
        }
        let mut h = IPoly { terms: red.remainder };
        h.normalize();
        if mono_deg(h.lm()) == 0 {
            // Unit ideal; signal with an empty basis slot.
            st.basis.clear();
            st.sugars.clear();
            st.heap.clear();
            st.alive.clear();
            st.basis.push(h);
            st.sugars.push(0);
            return Ok(true);
        }
        if h.total_degree() > budget.max_degree as u64 {
            return Err(abort(st, pairs_processed, "element degree"));
        }
        if st.basis.len() + 1 > budget.max_basis {
            return Err(abort(st, pairs_processed, "basis size"));
        }
        st.basis.push(h);
        st.sugars.push(red.sugar);
        let t = st.basis.len() - 1;
        st.update(t);
        Ok(false)
    };

    // Fast path: schedule the run over GF(p) and replay only the pairs
    // that install new elements, with exact arithmetic (see `modp`).
    // Every element the replay produces is an honest ℚ normal form of an
    // S-polynomial chain, and the replayed basis is verified against the
    // full Buchberger criterion, so an unlucky prime can only cause a
    // fallback to the plain algorithm below — never a wrong basis.
    if let Some(out) = try_traced(&inputs, &vars, ord, budget) {
        return Ok(out);
    }

    // Seed the basis, inter-reducing the inputs as they arrive.
    for ip in inputs {
        let sugar = ip.total_degree();
        let red = reduce_full(ip.terms, sugar, &st.basis, &st.sugars, None, ord);
        if install(&mut st, red, pairs_processed)? {
            return Ok(vec![Poly::one(&vars)]);
        }
    }

    // Main loop.
    while let Some(key) = st.heap.pop() {
        if st.alive.remove(&(key.i, key.j)).is_none() {
            continue; // discarded by the chain criterion
        }
        pairs_processed += 1;
        if pairs_processed > budget.max_pairs {
            return Err(abort(&st, pairs_processed, "pair count"));
        }
        if mono_deg(&key.lcm) > budget.max_degree as u64 {
            return Err(abort(&st, pairs_processed, "pair lcm degree"));
        }

        let (f, g) = (&st.basis[key.i as usize], &st.basis[key.j as usize]);
        let d = f.lc().gcd(g.lc());
        let mf = mono_div(&key.lcm, f.lm());
        let mg = mono_div(&key.lcm, g.lm());
        let spoly = combine(
            &(g.lc() / &d),
            &mf,
            &f.terms,
            &(-(f.lc() / &d)),
            &mg,
            &g.terms,
            ord,
        );
        let red = reduce_full(spoly, key.sugar, &st.basis, &st.sugars, None, ord);
        if install(&mut st, red, pairs_processed)? {
            return Ok(vec![Poly::one(&vars)]);
        }
    }

    let reduced = finalize_ipolys(st.basis, ord);
    Ok(reduced.iter().map(|ip| ipoly_to_poly(ip, &vars)).collect())
}

/// Minimize (drop elements whose leading monomial another element's
/// divides) and tail-reduce, yielding the reduced basis sorted ascending
/// by leading monomial.
fn finalize_ipolys(basis: Vec<IPoly>, ord: MonOrder) -> Vec<IPoly> {
    // Ascending order puts divisors first.
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by(|&a, &b| ord.cmp(basis[a].lm(), basis[b].lm()));
    let mut keep: Vec<usize> = Vec::new();
    for idx in order {
        if !keep
            .iter()
            .any(|&k| mono_divides(basis[k].lm(), basis[idx].lm()))
        {
            keep.push(idx);
        }
    }

    // Tail-reduce each kept element against the others; leading terms are
    // pairwise irreducible, so one pass yields the reduced basis.
    let mut reduced: Vec<IPoly> =
        keep.iter().map(|&k| basis[k].clone()).collect();
    let zeros = vec![0u64; reduced.len()];
    for i in 0..reduced.len() {
        let mut mask = vec![true; reduced.len()];
        mask[i] = false;
        let red = reduce_full(
            reduced[i].terms.clone(),
            0,
            &reduced,
            &zeros,
            Some(&mask),
            ord,
        );
        let mut h = IPoly { terms: red.remainder };
        h.normalize();
        reduced[i] = h;
    }
    reduced.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    reduced
}

/// The traced fast path: schedule over GF(p), replay exactly, verify.
/// `None` means "use the plain algorithm" (no trace, a divergence, a
/// budget violation mid-replay, or a failed verification).
fn try_traced(
    inputs: &[IPoly],
    vars: &VarSet,
    ord: MonOrder,
    budget: &Budget,
) -> Option<Vec<Poly>> {
    if inputs.is_empty() {
        return None;
    }
    let refs: Vec<&[(Mono, BigInt)]> =
        inputs.iter().map(|ip| ip.terms.as_slice()).collect();
    let t_trace = std::time::Instant::now();
    let trace = groebner_trace(&refs, ord, budget)?;
    if gb_log() {
        eprintln!(
            "[gb] trace: {} steps in {:?}",
            trace.steps.len(),
            t_trace.elapsed()
        );
    }

    let mut basis: Vec<IPoly> = Vec::new();
    let mut sugars: Vec<u64> = Vec::new();
    for step in &trace.steps {
        let (work, sugar) = match *step {
            TraceStep::Seed(idx) => {
                let ip = inputs.get(idx)?;
                (ip.terms.clone(), ip.total_degree())
            }
            TraceStep::Pair(i, j) => {
                let (i, j) = (i as usize, j as usize);
                if i >= basis.len() || j >= basis.len() {
                    return None;
                }
                let (f, g) = (&basis[i], &basis[j]);
                let lcm = mono_lcm(f.lm(), g.lm());
                let d = f.lc().gcd(g.lc());
                let mf = mono_div(&lcm, f.lm());
                let mg = mono_div(&lcm, g.lm());
                let spoly = combine(
                    &(g.lc() / &d),
                    &mf,
                    &f.terms,
                    &(-(f.lc() / &d)),
                    &mg,
                    &g.terms,
                    ord,
                );
                let sugar = (sugars[i] + mono_deg(&mf))
                    .max(sugars[j] + mono_deg(&mg));
                (spoly, sugar)
            }
        };
        let red = reduce_full(work, sugar, &basis, &sugars, None, ord);
        if red.remainder.is_empty() {
            return None; // the schedule diverged: fall back
        }
        let mut h = IPoly { terms: red.remainder };
        h.normalize();
        if mono_deg(h.lm()) == 0 {
            // A unit reached by exact arithmetic: 1 ∈ I, soundly.
            return Some(vec![Poly::one(vars)]);
        }
        if h.total_degree() > budget.max_degree as u64
            || basis.len() + 1 > budget.max_basis
        {
            // Let the plain path enforce (and report) the budget.
            return None;
        }
        if gb_log() {
            eprintln!(
                "[gb] replay install {}: deg {} terms {} lc-digits {}",
                basis.len(),
                h.total_degree(),
                h.terms.len(),
                h.lc().to_string().len()
            );
        }
        basis.push(h);
        sugars.push(red.sugar);
    }
    if trace.unit || basis.is_empty() {
        return None;
    }

    let t_fin = std::time::Instant::now();
    let reduced = finalize_ipolys(basis, ord);
    if gb_log() {
        eprintln!(
            "[gb] finalized {} elements in {:?}; verifying",
            reduced.len(),
            t_fin.elapsed()
        );
    }

    // Verification, all exact: (a) every input reduces to zero, so
    // I ⊆ (reduced); with the replay giving (reduced) ⊆ I this pins the
    // ideal.  (b) the Buchberger criterion (coprime pairs skipped by the
    // first criterion), so `reduced` is a Gröbner basis.  Both must hold
    // for the fast path to return; otherwise the plain run decides.
    let zeros = vec![0u64; reduced.len()];
    for ip in inputs {
        let red =
            reduce_full(ip.terms.clone(), 0, &reduced, &zeros, None, ord);
        if !red.remainder.is_empty() {
            return None;
        }
    }
    for i in 0..reduced.len() {
        for j in i + 1..reduced.len() {
            let (f, g) = (&reduced[i], &reduced[j]);
            if mono_coprime(f.lm(), g.lm()) {
                continue;
            }
            let lcm = mono_lcm(f.lm(), g.lm());
            let d = f.lc().gcd(g.lc());
            let spoly = combine(
                &(g.lc() / &d),
                &mono_div(&lcm, f.lm()),
                &f.terms,
                &(-(f.lc() / &d)),
                &mono_div(&lcm, g.lm()),
                &g.terms,
                ord,
            );
            let red = reduce_full(spoly, 0, &reduced, &zeros, None, ord);
            if !red.remainder.is_empty() {
                return None;
            }
        }
    }
    Some(reduced.iter().map(|ip| ipoly_to_poly(ip, vars)).collect())
}

#[cfg(test)]
mod tests {
    use super::super::rat;
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn vs(names: &[&str]) -> VarSet {
        VarSet::new(names).unwrap()
    }

    fn p(src: &str, v: &VarSet) -> Poly {
        Poly::parse(src, v).unwrap()
    }

    fn gb(gens: &[Poly], ord: MonOrder) -> Vec<Poly> {
        groebner_basis(gens, ord, &Budget::default()).unwrap()
    }

    /// S-polynomial over ℚ, for closure checks.
    fn spoly(f: &Poly, g: &Poly, ord: MonOrder) -> Poly {
        let (lmf, lcf) = f.leading(ord).unwrap();
        let (lmg, lcg) = g.leading(ord).unwrap();
        let l = mono_lcm(lmf, lmg);
        let a = f.mul_term(&mono_div(&l, lmf), &lcf.clone().recip());
        let b = g.mul_term(&mono_div(&l, lmg), &lcg.clone().recip());
        a.sub(&b)
    }

    fn assert_is_groebner(basis: &[Poly], gens: &[Poly], ord: MonOrder) {
        for g in gens {
            assert!(
                normal_form(g, basis, ord).is_zero(),
                "generator {g} does not reduce to zero"
            );
        }
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let s = spoly(&basis[i], &basis[j], ord);
                assert!(
                    normal_form(&s, basis, ord).is_zero(),
                    "S-poly of elements {i},{j} does not reduce to zero"
                );
            }
        }
    }

    #[test]
    fn lex_basis_of_twisted_example() {
        let v = vs(&["x", "y"]);
        let gens = [p("x^2 - y", &v), p("x*y - x", &v)];
        let basis = gb(&gens, MonOrder::Lex);
        assert_eq!(
            basis,
            vec![p("y^2 - y", &v), p("x*y - x", &v), p("x^2 - y", &v)]
        );
        assert_is_groebner(&basis, &gens, MonOrder::Lex);
        // Elimination of x falls out of the lex basis.
        let elim: Vec<&Poly> = basis
            .iter()
            .filter(|q| !q.support_vars().contains(&0))
            .collect();
        assert_eq!(elim, vec![&p("y^2 - y", &v)]);
    }

    #[test]
    fn unit_and_zero_ideals() {
        let v = vs(&["x", "y"]);
        assert!(gb(&[], MonOrder::GrevLex).is_empty());
        assert!(gb(&[Poly::zero(&v)], MonOrder::GrevLex).is_empty());
        assert_eq!(gb(&[p("7", &v)], MonOrder::Lex), vec![Poly::one(&v)]);
        // x and x+1 generate the unit ideal.
        assert_eq!(
            gb(&[p("x", &v), p("x + 1", &v)], MonOrder::GrevLex),
            vec![Poly::one(&v)]
        );
    }

    #[test]
    fn cyclic3_grevlex_closure() {
        let v = vs(&["x", "y", "z"]);
        let gens = [
            p("x + y + z", &v),
            p("x*y + y*z + z*x", &v),
            p("x*y*z - 1", &v),
        ];
        let basis = gb(&gens, MonOrder::GrevLex);
        assert_is_groebner(&basis, &gens, MonOrder::GrevLex);
        // z^3 - 1 must appear: the ideal is radical with 6 points on z^3=1.
        assert!(basis.contains(&p("z^3 - 1", &v)), "basis: {basis:?}");
    }

    #[test]
    fn normal_form_examples() {
        let v = vs(&["x", "y"]);
        let basis = gb(
            &[p("x^2 - y", &v), p("x*y - x", &v)],
            MonOrder::Lex,
        );
        // x^2 y -> y·(x^2) ≡ y·y ≡ y² ≡ y.
        assert_eq!(normal_form(&p("x^2*y", &v), &basis, MonOrder::Lex), p("y", &v));
        // NF is idempotent and ℚ-linear in the remainder.
        let q = p("x^3 + 2*x*y^2 - 1/3", &v);
        let r = normal_form(&q, &basis, MonOrder::Lex);
        assert_eq!(normal_form(&r, &basis, MonOrder::Lex), r);
        assert_eq!(
            normal_form(&q.scale(&rat(6)), &basis, MonOrder::Lex),
            r.scale(&rat(6))
        );
        // Against an empty basis, NF is the identity.
        assert_eq!(normal_form(&q, &[], MonOrder::Lex), q);
    }

    #[test]
    fn block_order_eliminates_front() {
        let v = vs(&["x", "y"]);
        let basis = gb(
            &[p("x^2 - y", &v), p("x*y - x", &v)],
            MonOrder::Block { front: 1 },
        );
        let elim: Vec<&Poly> = basis
            .iter()
            .filter(|q| !q.support_vars().contains(&0))
            .collect();
        assert_eq!(elim, vec![&p("y^2 - y", &v)]);
    }

    #[test]
    fn budget_aborts_with_diagnostics() {
        let v = vs(&["x", "y", "z"]);
        // Leading monomials x² and xy collide, so at least one S-pair
        // survives the criteria and must be processed.
        let colliding = [p("x^2 - y", &v), p("x*y - x", &v)];
        let tiny = Budget { max_basis: 3000, max_degree: 100, max_pairs: 0 };
        match groebner_basis(&colliding, MonOrder::Lex, &tiny) {
            Err(Error::ComputationAborted(msg)) => {
                assert!(msg.contains("pair"), "message: {msg}");
            }
            other => panic!("expected ComputationAborted, got {other:?}"),
        }
        let gens = [
            p("x + y + z", &v),
            p("x*y + y*z + z*x", &v),
            p("x*y*z - 1", &v),
        ];
        let shallow = Budget { max_basis: 1, max_degree: 100, max_pairs: 500_000 };
        assert!(matches!(
            groebner_basis(&gens, MonOrder::Lex, &shallow),
            Err(Error::ComputationAborted(_))
        ));
        let flat = Budget { max_basis: 3000, max_degree: 1, max_pairs: 500_000 };
        match groebner_basis(&gens, MonOrder::Lex, &flat) {
            Err(Error::ComputationAborted(msg)) => {
                assert!(msg.contains("degree"), "message: {msg}");
            }
            other => panic!("expected ComputationAborted, got {other:?}"),
        }
        // Cyclic-3 under lex: every initial S-pair has coprime leading
        // monomials, so the basis completes without processing any pair.
        let none = Budget { max_basis: 3000, max_degree: 100, max_pairs: 0 };
        let basis = groebner_basis(&gens, MonOrder::Lex, &none).unwrap();
        assert_is_groebner(&basis, &gens, MonOrder::Lex);
    }

    #[test]
    fn output_is_canonical() {
        let v = vs(&["x", "y"]);
        // Rational and rescaled generators give the identical basis.
        let a = gb(&[p("1/2*x^2 - 1/2*y", &v), p("3*x*y - 3*x", &v)], MonOrder::Lex);
        let b = gb(&[p("x^2 - y", &v), p("x*y - x", &v)], MonOrder::Lex);
        assert_eq!(a, b);
        for q in &a {
            let (f, prim) = q.to_integer_primitive();
            assert_eq!(&prim, q);
            assert_eq!(f, rat(1));
        }
    }

    /// Certify that every element of the production basis lies in the
    /// input ideal by reconstructing explicit cofactors `q_i` with
    /// `element = Σ q_i · gen_i`, via a plain division-tracking
    /// Buchberger run over ℚ (test-only, no optimizations).
    #[test]
    fn basis_membership_certified_by_cofactors() {
        #[derive(Clone)]
        struct Ext {
            p: Poly,
            cof: Vec<Poly>,
        }

        // Divide p by `elems`; returns (remainder, cofactors over gens)
        // with p = remainder + Σ cof_i · gen_i.
        fn ext_reduce(p: &Poly, elems: &[Ext], ngens: usize, ord: MonOrder) -> Ext {
            let vars = p.vars().clone();
            let mut work = p.clone();
            let mut rem = Poly::zero(&vars);
            let mut cof = vec![Poly::zero(&vars); ngens];
            'outer: while let Some((lm, lc)) = work
                .leading(ord)
                .map(|(e, c)| (e.clone(), c.clone()))
            {
                for b in elems {
                    let (blm, blc) = b.p.leading(ord).unwrap();
                    if mono_divides(blm, &lm) {
                        let m = mono_div(&lm, blm);
                        let c = lc.clone() / blc.clone();
                        work = work.sub(&b.p.mul_term(&m, &c));
                        for (acc, q) in cof.iter_mut().zip(&b.cof) {
                            *acc = acc.add(&q.mul_term(&m, &c));
                        }
                        continue 'outer;
                    }
                }
                let mono = Poly::from_terms(&vars, [(lm.clone(), lc.clone())]);
                rem = rem.add(&mono);
                work = work.sub(&mono);
            }
            Ext { p: rem, cof }
        }

        fn ext_buchberger(gens: &[Poly], ord: MonOrder) -> Vec<Ext> {
            let vars = gens[0].vars().clone();
            let n = gens.len();
            let mut elems: Vec<Ext> = Vec::new();
            for (i, g) in gens.iter().enumerate() {
                let mut cof = vec![Poly::zero(&vars); n];
                cof[i] = Poly::one(&vars);
                elems.push(Ext { p: g.clone(), cof });
            }
            let mut pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            while let Some((i, j)) = pairs.pop() {
                let (fi, fj) = (&elems[i], &elems[j]);
                let (lmi, lci) = fi.p.leading(ord).unwrap();
                let (lmj, lcj) = fj.p.leading(ord).unwrap();
                let l = mono_lcm(lmi, lmj);
                let (mi, ci) = (mono_div(&l, lmi), lci.clone().recip());
                let (mj, cj) = (mono_div(&l, lmj), lcj.clone().recip());
                let s = fi.p.mul_term(&mi, &ci).sub(&fj.p.mul_term(&mj, &cj));
                let mut scof = vec![Poly::zero(&vars); n];
                for (k, acc) in scof.iter_mut().enumerate() {
                    *acc = fi.cof[k]
                        .mul_term(&mi, &ci)
                        .sub(&fj.cof[k].mul_term(&mj, &cj));
                }
                let red = ext_reduce(&s, &elems, n, ord);
                let rem = red.p;
                if !rem.is_zero() {
                    let cof: Vec<Poly> = scof
                        .iter()
                        .zip(&red.cof)
                        .map(|(a, b)| a.sub(b))
                        .collect();
                    let t = elems.len();
                    elems.push(Ext { p: rem, cof });
                    for i in 0..t {
                        pairs.push((i, t));
                    }
                }
            }
            elems
        }

        let v = vs(&["x", "y"]);
        let cases: Vec<Vec<Poly>> = vec![
            vec![p("x^2 - y", &v), p("x*y - x", &v)],
            vec![p("x^2 + y^2 - 1", &v), p("x - y^2", &v)],
        ];
        for gens in cases {
            for ord in [MonOrder::Lex, MonOrder::GrevLex] {
                let ext = ext_buchberger(&gens, ord);
                // Sanity: the certified elements really carry cofactors.
                for e in &ext {
                    let mut sum = Poly::zero(&v);
                    for (q, g) in e.cof.iter().zip(&gens) {
                        sum = sum.add(&q.mul(g));
                    }
                    assert_eq!(sum, e.p, "cofactor identity broken");
                }
                // Certify each production-basis element.
                let basis = gb(&gens, ord);
                for b in &basis {
                    let red = ext_reduce(b, &ext, gens.len(), ord);
                    assert!(red.p.is_zero(), "{b} not certified in the ideal");
                    let mut sum = Poly::zero(&v);
                    for (q, g) in red.cof.iter().zip(&gens) {
                        sum = sum.add(&q.mul(g));
                    }
                    assert_eq!(sum, *b, "reconstructed cofactors disagree");
                }
            }
        }
    }

    #[test]
    fn random_ideals_yield_groebner_bases() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let v = vs(&["x", "y", "z"]);
        for _ in 0..12 {
            let mut gens = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                let mut q = Poly::zero(&v);
                for _ in 0..rng.gen_range(1..=4) {
                    let e = vec![
                        rng.gen_range(0..=2u32),
                        rng.gen_range(0..=2u32),
                        rng.gen_range(0..=1u32),
                    ];
                    let c = rat(rng.gen_range(-4..=4i64));
                    q = q.add(&Poly::from_terms(&v, [(e, c)]));
                }
                if !q.is_zero() {
                    gens.push(q);
                }
            }
            if gens.is_empty() {
                continue;
            }
            for ord in [MonOrder::GrevLex, MonOrder::Lex, MonOrder::Block { front: 2 }] {
                let basis = gb(&gens, ord);
                if basis.is_empty() {
                    continue;
                }
                assert_is_groebner(&basis, &gens, ord);
            }
        }
    }
}
