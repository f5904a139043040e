//! Multivariate polynomial GCD over ℚ via the primitive PRS algorithm,
//! exact division, and square-free utilities.
//!
//! GCDs are unit-normalized: the result is integer-coefficient, content 1,
//! with positive leading coefficient under grevlex.  The classical theory
//! (Gauss's lemma over the UFD ℚ[x̄] viewed through ℤ[x̄] primitives) makes
//! `gcd = gcd(contents) · pp(last nonzero primitive remainder)` exact.

use super::{MonOrder, Poly, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

/// Exact division: `Some(q)` with `p = q·d` when `d` divides `p`, else
/// `None`.  Leading-term recursion under grevlex: if `d | p` then the
/// leading term of `d` divides the leading term of `p`, and the remainder
/// after cancelling it is again divisible by `d`.
pub fn div_exact(p: &Poly, d: &Poly) -> Option<Poly> {
    assert!(!d.is_zero(), "division by the zero polynomial");
    let vars = p.vars().clone();
    assert!(vars == *d.vars(), "div_exact requires a shared ambient");
    let ord = MonOrder::GrevLex;
    let (de, dc) = {
        let (e, c) = d.leading(ord)?;
        (e.clone(), c.clone())
    };
    let mut rem = p.clone();
    let mut quo = Poly::zero(&vars);
    while !rem.is_zero() {
        let (re, rc) = {
            let (e, c) = rem.leading(ord).unwrap();
            (e.clone(), c.clone())
        };
        // Componentwise divisibility of the leading monomials.
        if re.iter().zip(&de).any(|(a, b)| a < b) {
            return None;
        }
        let qe: Vec<u32> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
        let qc = rc / dc.clone();
        let qt = Poly::from_terms(&vars, [(qe.clone(), qc.clone())]);
        quo = quo.add(&qt);
        rem = rem.sub(&d.mul_term(&qe, &qc));
    }
    Some(quo)
}

/// Coefficients of `p` viewed as a univariate polynomial in variable `v`
/// (by index), from degree 0 upward; each coefficient stays in the full
/// ambient with `v`-exponent zero.
pub(super) fn coeffs_in(p: &Poly, v: usize) -> Vec<Poly> {
    let d = p.degree_in_idx(v).unwrap_or(0) as usize;
    let vars = p.vars().clone();
    let mut out = vec![Poly::zero(&vars); d + 1];
    for (e, c) in p.terms() {
        let k = e[v] as usize;
        let mut ne = e.clone();
        ne[v] = 0;
        out[k] = out[k].add(&Poly::from_terms(&vars, [(ne, c.clone())]));
    }
    out
}

fn gcd_list(polys: &[Poly]) -> Poly {
    let mut acc: Option<Poly> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.primitive(),
            Some(g) => {
                if g.is_constant() {
                    return g; // unit already
                }
                poly_gcd(&g, p)
            }
        });
    }
    acc.unwrap_or_else(|| Poly::zero(polys[0].vars()))
}

/// Content of `p` with respect to variable `v`: the GCD of its
/// `v`-coefficients.
fn content_in(p: &Poly, v: usize) -> Poly {
    gcd_list(&coeffs_in(p, v))
}

/// Modulus for the coprimality fast path: the Mersenne prime 2⁶¹ − 1.
const FP: u64 = (1 << 61) - 1;

fn fp_mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % FP as u128) as u64
}

fn fp_pow(mut base: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mul(acc, base);
        }
        base = fp_mul(base, base);
        e >>= 1;
    }
    acc
}

fn fp_inv(a: u64) -> u64 {
    fp_pow(a, FP - 2)
}

fn fp_of_bigint(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(FP))
        .to_u64()
        .expect("residue fits in u64")
}

/// Univariate image of `f` in variable `v` over GF(p), with every other
/// variable specialised at `pts`.  `None` when a coefficient denominator
/// vanishes mod p or the leading `v`-coefficient image vanishes (the
/// specialisation dropped the degree, so it certifies nothing).
fn fp_univariate_image(f: &Poly, v: usize, pts: &[u64]) -> Option<Vec<u64>> {
    let deg = f.degree_in_idx(v).expect("nonzero polynomial") as usize;
    let mut img = vec![0u64; deg + 1];
    for (e, c) in f.terms() {
        let den = fp_of_bigint(c.denom());
        if den == 0 {
            return None;
        }
        let mut t = fp_mul(fp_of_bigint(c.numer()), fp_inv(den));
        for (i, &a) in pts.iter().enumerate() {
            if i != v && e[i] > 0 {
                t = fp_mul(t, fp_pow(a, e[i] as u64));
            }
        }
        img[e[v] as usize] = (img[e[v] as usize] + t) % FP;
    }
    if img[deg] == 0 {
        return None;
    }
    Some(img)
}

/// Whether gcd(a, b) over GF(p) is a nonzero constant (degree 0).
/// Coefficient slices are indexed by degree.
fn fp_gcd_degree_zero(a: &[u64], b: &[u64]) -> bool {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    let mut u = a.to_vec();
    let mut w = b.to_vec();
    trim(&mut u);
    trim(&mut w);
    if u.is_empty() {
        return w.len() == 1;
    }
    while !w.is_empty() {
        if w.len() == 1 {
            return true;
        }
        let inv = fp_inv(*w.last().unwrap());
        for x in w.iter_mut() {
            *x = fp_mul(*x, inv);
        }
        // u ← u mod w.
        while u.len() >= w.len() {
            let lead = *u.last().unwrap();
            if lead != 0 {
                let off = u.len() - w.len();
                for (i, &wx) in w.iter().enumerate() {
                    u[off + i] = (u[off + i] + FP - fp_mul(lead, wx)) % FP;
                }
            }
            u.pop();
            trim(&mut u);
            if u.is_empty() {
                return w.len() == 1; // gcd is w itself
            }
        }
        std::mem::swap(&mut u, &mut w);
    }
    true
}

/// One-sided certificate that gcd(p, q) is constant.  For each shared
/// variable `v`, specialise the others at pseudo-random points over GF(p):
/// if the leading `v`-degree of `p` survives and the univariate gcd is
/// constant, then gcd(p, q) has `v`-degree 0 — a nonconstant gcd `d` would
/// keep its degree (`lc_v(d)` divides `lc_v(p)`) and divide both images.
/// Degree 0 in every shared variable means the gcd is constant, since the
/// gcd's support lies in the intersection.  Inconclusive specialisations
/// are retried; `false` means "not certified", never "nonconstant".
fn certify_coprime(p: &Poly, q: &Poly, common: &[usize]) -> bool {
    let nv = p.vars().len();
    'vars: for &v in common {
        let mut s = 0x9e37_79b9_7f4a_7c15u64 ^ (v as u64);
        for _ in 0..3 {
            let mut pts = vec![0u64; nv];
            for (i, slot) in pts.iter_mut().enumerate() {
                if i == v {
                    continue;
                }
                s = s
                    .wrapping_mul(6_364_136_223_846_793_005)
                    .wrapping_add(1_442_695_040_888_963_407);
                *slot = (s >> 17) % 65_521 + 2;
            }
            let (Some(a), Some(b)) = (
                fp_univariate_image(p, v, &pts),
                fp_univariate_image(q, v, &pts),
            ) else {
                continue;
            };
            if fp_gcd_degree_zero(&a, &b) {
                continue 'vars;
            }
        }
        return false;
    }
    true
}

/// Pseudo-remainder of `a` by `b` in variable `v` (`deg_v b ≥ 1`).
/// Multiplies `a` by powers of `lc_v(b)` as needed; exactness is restored
/// by the caller's primitive-part normalization.
fn prem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in_idx(v).unwrap_or(0);
    debug_assert!(db >= 1);
    let bc = coeffs_in(b, v);
    let lb = bc[db as usize].clone();
    let vars = a.vars().clone();
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let dr = r.degree_in_idx(v).unwrap_or(0);
        if dr < db {
            return r;
        }
        let rc = coeffs_in(&r, v);
        let lr = rc[dr as usize].clone();
        // r <- lb·r − lr·v^(dr−db)·b
        let mut shift = vec![0u32; vars.len()];
        shift[v] = dr - db;
        r = r.mul(&lb).sub(&b.mul_term(&shift, &Rat::one()).mul(&lr));
    }
}

/// Unit-normalized GCD in ℚ[x̄] (integer-primitive, positive leading
/// coefficient under grevlex).  `gcd(0, q) = normalize(q)`; `gcd(0,0) = 0`.
pub fn poly_gcd(p: &Poly, q: &Poly) -> Poly {
    assert!(p.vars() == q.vars(), "poly_gcd requires a shared ambient");
    if p.is_zero() {
        return q.primitive();
    }
    if q.is_zero() {
        return p.primitive();
    }
    if p.is_constant() || q.is_constant() {
        return Poly::one(p.vars());
    }
    // Main variable: one occurring in both supports, preferring the last
    // such index (tends to keep coefficient recursion shallow).
    let sp = p.support_vars();
    let sq = q.support_vars();
    let common: Vec<usize> = sp.intersection(&sq).cloned().collect();
    let v = match common.last() {
        Some(&v) => v,
        None => return Poly::one(p.vars()),
    };
    // Fast paths: a mod-p coprimality certificate, then trial division
    // (which settles the case where one argument divides the other).
    // Both sidestep the pseudo-remainder sequence, whose content
    // recursion is expensive on large coprime inputs.
    if certify_coprime(p, q, &common) {
        return Poly::one(p.vars());
    }
    if div_exact(p, q).is_some() {
        return q.primitive();
    }
    if div_exact(q, p).is_some() {
        return p.primitive();
    }
    let cp = content_in(p, v);
    let cq = content_in(q, v);
    let c = poly_gcd(&cp, &cq);
    let mut a = div_exact(p, &cp).expect("content divides").primitive();
    let mut b = div_exact(q, &cq).expect("content divides").primitive();
    if a.degree_in_idx(v).unwrap_or(0) < b.degree_in_idx(v).unwrap_or(0) {
        std::mem::swap(&mut a, &mut b);
    }
    // Primitive PRS.
    loop {
        let r = prem(&a, &b, v);
        if r.is_zero() {
            break;
        }
        // Primitive part with respect to v (strip polynomial content and
        // rational content).
        let cr = content_in(&r, v);
        let r = div_exact(&r, &cr).expect("content divides").primitive();
        a = b;
        b = r;
        if b.degree_in_idx(v).unwrap_or(0) == 0 {
            // Coprime primitive parts.
            return c;
        }
    }
    let ppg = {
        let cb = content_in(&b, v);
        div_exact(&b, &cb).expect("content divides").primitive()
    };
    c.mul(&ppg).primitive()
}

/// Least common multiple, unit-normalized (`p·q / gcd`).
pub fn poly_lcm(p: &Poly, q: &Poly) -> Poly {
    if p.is_zero() || q.is_zero() {
        return Poly::zero(p.vars());
    }
    let g = poly_gcd(p, q);
    let pq = p.mul(q);
    div_exact(&pq, &g).expect("gcd divides product").primitive()
}

/// Joint GCD of `p` with all of its partial derivatives.  Writing
/// `p = ∏ fᵢ^i` with the `fᵢ` square-free and pairwise coprime, this is
/// `∏ fᵢ^{i−1}` in characteristic 0.
fn repeated_part(p: &Poly) -> Poly {
    let mut g = p.primitive();
    for v in p.support_vars() {
        let dv = p.partial_derivative_idx(v);
        if !dv.is_zero() {
            g = poly_gcd(&g, &dv);
        }
    }
    g
}

/// Square-free part: `p` with repeated factors collapsed to multiplicity 1
/// (unit-normalized).  Computed as `p / gcd(p, ∂p/∂v₁, …, ∂p/∂vₙ)` — valid
/// in characteristic 0.
pub fn squarefree_part(p: &Poly) -> Poly {
    if p.is_zero() || p.is_constant() {
        return p.primitive();
    }
    let a = p.primitive();
    let rep = repeated_part(&a);
    div_exact(&a, &rep).expect("gcd divides").primitive()
}

/// Split `p` into pairwise-coprime non-constant factors (not necessarily
/// irreducible): multiplicity splitting (Musser's square-free decomposition)
/// plus content splitting along each variable, then a pairwise GCD
/// refinement.  Product of the returned factors equals the square-free part
/// of `p` up to a unit.
pub fn squarefree_split(p: &Poly) -> Vec<Poly> {
    if p.is_zero() || p.is_constant() {
        return Vec::new();
    }
    // Musser's decomposition: with p = ∏ fᵢ^i as in `repeated_part`,
    // peel gcd(cof, rep) off cof = ∏ fᵢ one multiplicity class at a time.
    // Factors of distinct multiplicity land in distinct parts.
    let a = p.primitive();
    let mut rep = repeated_part(&a);
    let mut cof = div_exact(&a, &rep).expect("gcd divides").primitive();
    let mut work = Vec::new();
    while !cof.is_constant() {
        let next = poly_gcd(&cof, &rep);
        let part = div_exact(&cof, &next).expect("gcd divides").primitive();
        if !part.is_constant() {
            work.push(part);
        }
        rep = div_exact(&rep, &next).expect("gcd divides").primitive();
        cof = next;
    }
    // Content splitting along each variable separates factors that do not
    // share all variables.
    let mut split = Vec::new();
    while let Some(f) = work.pop() {
        if f.is_constant() {
            continue;
        }
        let mut done = true;
        for v in f.support_vars() {
            let c = content_in(&f, v);
            if !c.is_constant() {
                let rest = div_exact(&f, &c).expect("content divides");
                work.push(c);
                work.push(rest.primitive());
                done = false;
                break;
            }
        }
        if done {
            split.push(f);
        }
    }
    // Pairwise coprime refinement to a fixpoint.  Each replacement
    // strictly lowers the total degree sum, so this terminates.
    let mut out: Vec<Poly> = split;
    let mut changed = true;
    while changed {
        changed = false;
        'outer: for i in 0..out.len() {
            for j in (i + 1)..out.len() {
                let g = poly_gcd(&out[i], &out[j]);
                if !g.is_constant() {
                    let a =
                        div_exact(&out[i], &g).expect("gcd divides").primitive();
                    let b =
                        div_exact(&out[j], &g).expect("gcd divides").primitive();
                    out.remove(j);
                    out.remove(i);
                    for part in [g, a, b] {
                        if !part.is_constant() {
                            out.push(part);
                        }
                    }
                    changed = true;
                    break 'outer;
                }
            }
        }
    }
    out.sort_by(|a, b| {
        a.num_terms()
            .cmp(&b.num_terms())
            .then_with(|| a.to_string().cmp(&b.to_string()))
    });
    out
}
