//! Buchberger's algorithm over GF(p), p = 2⁶¹ − 1, used as a *scheduling
//! oracle* for the exact engine (a Gröbner trace in the sense of
//! Traverso): the mod-p run records which S-pairs produced new basis
//! elements, and the exact engine replays only those pairs over ℚ.
//!
//! Nothing computed here enters an exact result directly — an unlucky
//! prime can only send the exact replay into a divergence that the
//! caller detects (a replayed pair reducing to zero, or the final
//! Buchberger-criterion verification failing), after which the caller
//! falls back to the plain exact algorithm.  The pair-management logic
//! (Gebauer–Möller + sugar) mirrors `groebner.rs` so that the recorded
//! schedule transfers position-for-position.

use super::groebner::{
    mono_coprime, mono_deg, mono_div, mono_divides, mono_lcm, mono_mul,
    Budget, Mono,
};
use super::MonOrder;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

/// The tracing prime (Mersenne, fits products in u128).
pub(crate) const TRACE_P: u64 = (1 << 61) - 1;

fn fadd(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= TRACE_P {
        s - TRACE_P
    } else {
        s
    }
}

fn fsub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + TRACE_P - b
    }
}

fn fmul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % TRACE_P as u128) as u64
}

fn fpow(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = fmul(acc, b);
        }
        b = fmul(b, b);
        e >>= 1;
    }
    acc
}

fn finv(a: u64) -> u64 {
    fpow(a, TRACE_P - 2)
}

fn fp_of(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(TRACE_P))
        .to_u64()
        .expect("reduced residue fits u64")
}

/// Monic polynomial over GF(p): terms strictly descending under the
/// active order, leading coefficient 1.
#[derive(Clone, Debug)]
struct FPoly {
    terms: Vec<(Mono, u64)>,
}

impl FPoly {
    fn lm(&self) -> &Mono {
        &self.terms[0].0
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn total_degree(&self) -> u64 {
        self.terms.iter().map(|(e, _)| mono_deg(e)).max().unwrap_or(0)
    }

    fn monicize(&mut self) {
        if let Some((_, lc)) = self.terms.first() {
            if *lc != 1 {
                let inv = finv(*lc);
                for (_, c) in &mut self.terms {
                    *c = fmul(*c, inv);
                }
            }
        }
    }
}

/// Reduce integer terms (already strictly descending under the caller's order)
/// mod p.  Returns `None` if the leading coefficient vanishes mod p — a
/// bad prime for this input, since the mod-p leading monomial would
/// differ from the exact one and the schedule would not transfer.
fn fpoly_from_sorted_int_terms(terms: &[(Mono, BigInt)]) -> Option<FPoly> {
    let mut out = Vec::with_capacity(terms.len());
    for (e, c) in terms {
        let r = fp_of(c);
        if r != 0 {
            out.push((e.clone(), r));
        }
    }
    if out.is_empty() || out[0].0 != terms[0].0 {
        return None;
    }
    let mut f = FPoly { terms: out };
    f.monicize();
    Some(f)
}

/// `a + c·x^m·b` over GF(p), merging sorted term lists.
fn combine_fp(
    a: &[(Mono, u64)],
    c: u64,
    m: &[u32],
    b: &[(Mono, u64)],
    ord: MonOrder,
) -> Vec<(Mono, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut j = 0;
    while i < a.len() && j < b.len() {
        let eb = mono_mul(&b[j].0, m);
        match ord.cmp(&a[i].0, &eb) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((eb, fmul(c, b[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let v = fadd(a[i].1, fmul(c, b[j].1));
                if v != 0 {
                    out.push((eb, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    while j < b.len() {
        out.push((mono_mul(&b[j].0, m), fmul(c, b[j].1)));
        j += 1;
    }
    out
}

/// Full normal form against the (monic) basis; mirrors the exact
/// engine's reductor choice (first basis index whose lm divides).
fn reduce_full_fp(
    mut work: Vec<(Mono, u64)>,
    mut sugar: u64,
    basis: &[FPoly],
    sugars: &[u64],
    ord: MonOrder,
) -> (Vec<(Mono, u64)>, u64) {
    let mut acc: Vec<(Mono, u64)> = Vec::new();
    'outer: while let Some((lm, lc)) = work.first().cloned() {
        for (gi, g) in basis.iter().enumerate() {
            if g.is_zero() || !mono_divides(g.lm(), &lm) {
                continue;
            }
            let m = mono_div(&lm, g.lm());
            work = combine_fp(&work, fsub(0, lc), &m, &g.terms, ord);
            sugar = sugar.max(sugars.get(gi).copied().unwrap_or(0) + mono_deg(&m));
            continue 'outer;
        }
        acc.push(work.remove(0));
    }
    (acc, sugar)
}

/// One step of the recorded schedule: install the seed input with the
/// given position in the caller's sorted input list, or the S-pair of
/// the basis elements at the given positions.
#[derive(Clone, Copy, Debug)]
pub(crate) enum TraceStep {
    Seed(usize),
    Pair(u32, u32),
}

/// The recorded schedule of a completed mod-p run.
#[derive(Debug)]
pub(crate) struct Trace {
    pub steps: Vec<TraceStep>,
    /// True if the run ended by discovering a unit (the final step's
    /// normal form was a nonzero constant).
    pub unit: bool,
}

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
    basis: Vec<FPoly>,
    sugars: Vec<u64>,
    heap: BinaryHeap<PairKey>,
    alive: HashMap<(u32, u32), Mono>,
}

impl State {
    /// Gebauer–Möller UPDATE, mirroring `groebner.rs::State::update`.
    fn update(&mut self, t: usize) {
        let lm_t = self.basis[t].lm().clone();

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

        for c in kept {
            if c.coprime {
                continue;
            }
            let k = c.k as usize;
            let sugar = (self.sugars[k]
                + mono_deg(&mono_div(&c.lcm, self.basis[k].lm())))
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

/// Run Buchberger over GF(p) on the given integer term lists (each
/// strictly descending under `ord`, as produced by the exact engine's
/// input normalization) and record the install schedule.
///
/// Returns `None` when the run cannot produce a transferable schedule:
/// a leading coefficient vanishing mod p, or the budget being exceeded.
pub(crate) fn groebner_trace(
    inputs: &[&[(Mono, BigInt)]],
    ord: MonOrder,
    budget: &Budget,
) -> Option<Trace> {
    let mut st = State {
        ord,
        basis: Vec::new(),
        sugars: Vec::new(),
        heap: BinaryHeap::new(),
        alive: HashMap::new(),
    };
    let mut steps: Vec<TraceStep> = Vec::new();
    let mut pairs_processed: usize = 0;

    // Install a fully reduced nonzero normal form; `Some(true)` means a
    // unit was found.
    fn install(
        st: &mut State,
        remainder: Vec<(Mono, u64)>,
        sugar: u64,
        budget: &Budget,
    ) -> Option<bool> {
        let mut h = FPoly { terms: remainder };
        h.monicize();
        if mono_deg(h.lm()) == 0 {
            return Some(true);
        }
        if h.total_degree() > budget.max_degree as u64 {
            return None;
        }
        if st.basis.len() + 1 > budget.max_basis {
            return None;
        }
        st.basis.push(h);
        st.sugars.push(sugar);
        let t = st.basis.len() - 1;
        st.update(t);
        Some(false)
    }

    for (idx, terms) in inputs.iter().enumerate() {
        let f = fpoly_from_sorted_int_terms(terms)?;
        let sugar = f.total_degree();
        let (rem, sugar) =
            reduce_full_fp(f.terms, sugar, &st.basis, &st.sugars, ord);
        if rem.is_empty() {
            continue;
        }
        steps.push(TraceStep::Seed(idx));
        match install(&mut st, rem, sugar, budget)? {
            true => return Some(Trace { steps, unit: true }),
            false => {}
        }
    }

    while let Some(key) = st.heap.pop() {
        if st.alive.remove(&(key.i, key.j)).is_none() {
            continue;
        }
        pairs_processed += 1;
        if super::groebner::gb_log() && pairs_processed % 5000 == 0 {
            eprintln!(
                "[gb-p] {} pairs, {} basis elements",
                pairs_processed,
                st.basis.len()
            );
        }
        if pairs_processed > budget.max_pairs {
            return None;
        }
        if mono_deg(&key.lcm) > budget.max_degree as u64 {
            return None;
        }
        let (f, g) = (&st.basis[key.i as usize], &st.basis[key.j as usize]);
        // Monic basis: S = x^(lcm−lm f)·f − x^(lcm−lm g)·g.
        let mf = mono_div(&key.lcm, f.lm());
        let mg = mono_div(&key.lcm, g.lm());
        let shifted: Vec<(Mono, u64)> = f
            .terms
            .iter()
            .map(|(e, c)| (mono_mul(e, &mf), *c))
            .collect();
        let spoly = combine_fp(&shifted, TRACE_P - 1, &mg, &g.terms, ord);
        let (rem, sugar) =
            reduce_full_fp(spoly, key.sugar, &st.basis, &st.sugars, ord);
        if rem.is_empty() {
            continue;
        }
        steps.push(TraceStep::Pair(key.i, key.j));
        match install(&mut st, rem, sugar, budget)? {
            true => return Some(Trace { steps, unit: true }),
            false => {}
        }
    }

    if super::groebner::gb_log() {
        let mut degs: Vec<u64> =
            st.basis.iter().map(|b| b.total_degree()).collect();
        degs.sort_unstable();
        let terms: usize =
            st.basis.iter().map(|b| b.terms.len()).max().unwrap_or(0);
        eprintln!(
            "[gb-p] done: {} pairs, {} installs, degs {:?}.. max-terms {}",
            pairs_processed,
            st.basis.len(),
            &degs[degs.len().saturating_sub(8)..],
            terms
        );
    }
    Some(Trace { steps, unit: false })
}

/// Diagnostic-only: complete the mod-p run and return the reduced basis
/// as (exponent-vector, degree, term-count) triples — used to gauge the
/// true shape of a hard basis before exact work is attempted.
pub(crate) fn modp_reduced_shape(
    inputs: &[&[(Mono, BigInt)]],
    ord: MonOrder,
    budget: &Budget,
) -> Option<Vec<(Mono, u64, usize)>> {
    let mut st = State {
        ord,
        basis: Vec::new(),
        sugars: Vec::new(),
        heap: BinaryHeap::new(),
        alive: HashMap::new(),
    };
    let mut pairs_processed: usize = 0;
    for terms in inputs.iter() {
        let f = fpoly_from_sorted_int_terms(terms)?;
        let sugar = f.total_degree();
        let (rem, sugar) =
            reduce_full_fp(f.terms, sugar, &st.basis, &st.sugars, ord);
        if rem.is_empty() {
            continue;
        }
        let mut h = FPoly { terms: rem };
        h.monicize();
        if mono_deg(h.lm()) == 0 {
            return Some(vec![(h.lm().clone(), 0, 1)]);
        }
        st.basis.push(h);
        st.sugars.push(sugar);
        let t = st.basis.len() - 1;
        st.update(t);
    }
    while let Some(key) = st.heap.pop() {
        if st.alive.remove(&(key.i, key.j)).is_none() {
            continue;
        }
        pairs_processed += 1;
        if pairs_processed > budget.max_pairs {
            return None;
        }
        let (f, g) = (&st.basis[key.i as usize], &st.basis[key.j as usize]);
        let mf = mono_div(&key.lcm, f.lm());
        let mg = mono_div(&key.lcm, g.lm());
        let shifted: Vec<(Mono, u64)> = f
            .terms
            .iter()
            .map(|(e, c)| (mono_mul(e, &mf), *c))
            .collect();
        let spoly = combine_fp(&shifted, TRACE_P - 1, &mg, &g.terms, ord);
        let (rem, sugar) =
            reduce_full_fp(spoly, key.sugar, &st.basis, &st.sugars, ord);
        if rem.is_empty() {
            continue;
        }
        let mut h = FPoly { terms: rem };
        h.monicize();
        if mono_deg(h.lm()) == 0 {
            return Some(vec![(h.lm().clone(), 0, 1)]);
        }
        st.basis.push(h);
        st.sugars.push(sugar);
        let t = st.basis.len() - 1;
        st.update(t);
    }
    // Minimize + tail-reduce mod p.
    let mut order: Vec<usize> = (0..st.basis.len()).collect();
    order.sort_by(|&a, &b| ord.cmp(st.basis[a].lm(), st.basis[b].lm()));
    let mut keep: Vec<usize> = Vec::new();
    for idx in order {
        if !keep
            .iter()
            .any(|&k| mono_divides(st.basis[k].lm(), st.basis[idx].lm()))
        {
            keep.push(idx);
        }
    }
    let kept: Vec<FPoly> = keep.iter().map(|&k| st.basis[k].clone()).collect();
    let zeros = vec![0u64; kept.len()];
    let mut out = Vec::new();
    for i in 0..kept.len() {
        let mut others: Vec<FPoly> = Vec::new();
        for (j, f) in kept.iter().enumerate() {
            if j != i {
                others.push(f.clone());
            }
        }
        let (rem, _) =
            reduce_full_fp(kept[i].terms.clone(), 0, &others, &zeros, ord);
        if rem.is_empty() {
            continue;
        }
        let h = FPoly { terms: rem };
        out.push((h.lm().clone(), h.total_degree(), h.terms.len()));
    }
    Some(out)
}
