//! Modular-polynomial interpolation from q-expansions.
//!
//! Φ_N(X, Y) is assembled as the product over the N-isogeny coset
//! representatives `(aτ + b)/d` (with `ad = N`, `0 ≤ b < d`,
//! `gcd(a,b,d) = 1`) of `X − j((aτ + b)/d)`.  The coefficients of the
//! product are Laurent series in `u = q^(1/N)` with big-float complex
//! coefficients built from the exact integer j-coefficients; each one is
//! rewritten as an integer polynomial in `Y = j(τ)` by peeling the leading
//! `J(u)`-power, where the subtracted `J`-powers are exact integer series.
//! Every recognized coefficient must be within 1e−6 of an integer, else the
//! run aborts as precision-insufficient.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::bigfloat::{bf_nearest_int, bigint_to_bf, BigC, PrecisionCtx, RM};
use super::series::j_coefficients;
use crate::error::{Error, Result};

/// One term of a modular polynomial: (exponent of X, exponent of Y,
/// integer coefficient).
pub type ModTerm = (u32, u32, BigInt);

/// Absolute tolerance for integer recognition and residual vanishing.
const RECOGNITION_TOL: f64 = 1e-6;

/// ψ(N) = N·∏_{p|N}(1 + 1/p), the number of isogeny cosets (and the degree
/// of Φ_N in each variable).
pub fn psi(n: u32) -> u32 {
    assert!(n >= 1);
    let mut num = n;
    let mut den = 1;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            num *= p + 1;
            den *= p;
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        num *= m + 1;
        den *= m;
    }
    num / den
}

/// Coset representatives (a, b, d): `ad = N`, `0 ≤ b < d`, `gcd(a,b,d) = 1`.
fn cosets(n: u32) -> Vec<(u32, u32, u32)> {
    let mut reps = Vec::new();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let a = n / d;
        for b in 0..d {
            if gcd3(a, b, d) == 1 {
                reps.push((a, b, d));
            }
        }
    }
    assert_eq!(reps.len() as u32, psi(n), "coset count must be ψ(N)");
    reps
}

fn gcd3(a: u32, b: u32, c: u32) -> u32 {
    a.gcd(&b).gcd(&c)
}

/// Multiply two Laurent series sharing the window `[lo, lo + len)`,
/// truncating products that fall outside it.
fn window_mul(a: &[BigC], b: &[BigC], lo: i64, ctx: &PrecisionCtx) -> Vec<BigC> {
    let len = a.len();
    let mut out = vec![BigC::zero(ctx); len];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            // exponent (lo+i) + (lo+j) sits at index i + j + lo
            let k = i as i64 + j as i64 + lo;
            if (0..len as i64).contains(&k) {
                out[k as usize] = out[k as usize].add(&ai.mul(bj, ctx), ctx);
            }
        }
    }
    out
}

/// Interpolate Φ_N from q-expansions.  Returns the terms sorted
/// lexicographically by (exponent of X, exponent of Y).
pub fn interpolate_modular_polynomial(
    n: u32,
    ctx: &PrecisionCtx,
) -> Result<Vec<ModTerm>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "modular polynomial level must be positive".into(),
        ));
    }
    if n == 1 {
        // Φ₁ = X − Y, exactly.
        return Ok(vec![
            (0, 1, BigInt::from(-1)),
            (1, 0, BigInt::one()),
        ]);
    }
    if n > 10 {
        return Err(Error::UnsupportedLevel(n));
    }

    let reps = cosets(n);
    let deg = reps.len(); // ψ(N)
    // Window [−A, A + N] with A = Σ a² = N·ψ(N): wide enough that every
    // intermediate product is exact on the final read window [−A, N].
    let a_total: i64 = reps.iter().map(|&(a, _, _)| (a as i64) * (a as i64)).sum();
    debug_assert_eq!(a_total, (n as i64) * deg as i64);
    let lo = -a_total;
    let hi = a_total + n as i64;
    let len = (hi - lo + 1) as usize;
    let read_hi = n as i64; // coefficients are only accurate up to u^N

    // Exact integer j-coefficients c(−1)..c(hi).
    let cj = j_coefficients(hi as usize);
    let c_of = |nn: i64| -> &BigInt { &cj[(nn + 1) as usize] };

    // Roots of unity ζ_d^k for every divisor d of N.
    let mut roots: Vec<Vec<BigC>> = Vec::with_capacity(n as usize + 1);
    let two_pi = ctx.pi().mul(&astro_float::BigFloat::from_u64(2, ctx.bits()), ctx.bits(), RM);
    for d in 0..=n {
        if d == 0 || n % d != 0 {
            roots.push(Vec::new());
            continue;
        }
        let mut table = Vec::with_capacity(d as usize);
        for k in 0..d {
            let ang = two_pi
                .mul(&astro_float::BigFloat::from_u64(k as u64, ctx.bits()), ctx.bits(), RM)
                .div(&astro_float::BigFloat::from_u64(d as u64, ctx.bits()), ctx.bits(), RM);
            let (c, s) = ctx.with_consts(|cc| {
                (ang.cos(ctx.bits(), RM, cc), ang.sin(ctx.bits(), RM, cc))
            });
            table.push(BigC::new(c, s));
        }
        roots.push(table);
    }

    // Series S_rep(u) = Σ_{n ≥ −1} c(n)·ζ_d^{bn}·u^{a²n} on the window.
    let rep_series: Vec<Vec<BigC>> = reps
        .iter()
        .map(|&(a, b, d)| {
            let mut s = vec![BigC::zero(ctx); len];
            let a2 = (a as i64) * (a as i64);
            let mut nn = -1i64;
            while a2 * nn <= hi {
                let e = a2 * nn;
                if e >= lo {
                    let k = ((b as i64 * nn).rem_euclid(d as i64)) as usize;
                    let coeff = BigC::from_bigint(c_of(nn), ctx)
                        .mul(&roots[d as usize][k], ctx);
                    let idx = (e - lo) as usize;
                    s[idx] = s[idx].add(&coeff, ctx);
                }
                nn += 1;
            }
            s
        })
        .collect();

    // P(X) = ∏ (X − S_rep): coefficients of X^t as window series.
    let mut coeffs: Vec<Vec<BigC>> = vec![Vec::new(); deg + 1];
    // Represent the constant polynomial 1: series with u⁰ ↦ 1.
    let mut one_series = vec![BigC::zero(ctx); len];
    one_series[(-lo) as usize] = BigC::one(ctx);
    coeffs[0] = one_series;
    let mut cur_deg = 0usize;
    for s in &rep_series {
        let mut next: Vec<Vec<BigC>> = vec![vec![BigC::zero(ctx); len]; cur_deg + 2];
        for t in 0..=cur_deg {
            // X·coeffs[t] contributes to next[t+1].
            let shifted = std::mem::take(&mut next[t + 1]);
            next[t + 1] = add_series(&shifted, &coeffs[t], ctx);
            // −S·coeffs[t] contributes to next[t].
            let prod = window_mul(&coeffs[t], s, lo, ctx);
            next[t] = sub_series(&next[t], &prod, ctx);
        }
        cur_deg += 1;
        coeffs = next;
    }
    debug_assert_eq!(cur_deg, deg);

    // Exact integer Laurent series of J(u)^m on the window.
    let jpowers = exact_j_powers(&cj, deg, n as i64, lo, len);

    // Peel each X^t coefficient into an integer polynomial in Y.
    let mut terms: Vec<ModTerm> = Vec::new();
    for (t, series) in coeffs.iter().enumerate() {
        let mut cur = series.clone();
        for m in (0..=deg).rev() {
            let e = -(n as i64) * m as i64;
            let idx = (e - lo) as usize;
            let coeff = &cur[idx];
            let (int, err) = bf_nearest_int(&coeff.re, ctx.bits());
            let im = super::bigfloat::bf_to_f64(&coeff.im.abs());
            if err > RECOGNITION_TOL || im > RECOGNITION_TOL {
                return Err(Error::PrecisionInsufficient(format!(
                    "Φ_{n}: X^{t}·Y^{m} coefficient off integer by \
                     {err:.3e} (imaginary {im:.3e}) at {} bits",
                    ctx.bits()
                )));
            }
            if !int.is_zero() {
                // Subtract int·J^m exactly (converted coefficient-wise).
                for (k, jc) in jpowers[m].iter().enumerate() {
                    if jc.is_zero() {
                        continue;
                    }
                    let sub = bigint_to_bf(&(&int * jc), ctx.bits());
                    cur[k].re = cur[k].re.sub(&sub, ctx.bits(), RM);
                }
                terms.push((t as u32, m as u32, int));
            }
        }
        // Everything on the accurate part of the window must now vanish.
        for (k, c) in cur.iter().enumerate() {
            if lo + k as i64 > read_hi {
                break;
            }
            let mag = c.abs_f64(ctx);
            if mag > RECOGNITION_TOL {
                return Err(Error::PrecisionInsufficient(format!(
                    "Φ_{n}: residual {mag:.3e} at u^{} in X^{t} coefficient",
                    lo + k as i64
                )));
            }
        }
    }

    terms.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

    // Symmetry Φ_N(X,Y) = Φ_N(Y,X) must hold for N ≥ 2; a violation means
    // the recognition went wrong somewhere.
    let mut flipped: Vec<ModTerm> =
        terms.iter().map(|(x, y, c)| (*y, *x, c.clone())).collect();
    flipped.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    if flipped != terms {
        return Err(Error::PrecisionInsufficient(format!(
            "Φ_{n}: interpolated polynomial is not symmetric"
        )));
    }
    Ok(terms)
}

fn add_series(a: &[BigC], b: &[BigC], ctx: &PrecisionCtx) -> Vec<BigC> {
    a.iter().zip(b).map(|(x, y)| x.add(y, ctx)).collect()
}

fn sub_series(a: &[BigC], b: &[BigC], ctx: &PrecisionCtx) -> Vec<BigC> {
    a.iter().zip(b).map(|(x, y)| x.sub(y, ctx)).collect()
}

/// Exact integer window series of J(u)^m for m = 0..=deg, where
/// `J(u) = Σ c(n)·u^(N·n)`.
fn exact_j_powers(
    cj: &[BigInt],
    deg: usize,
    n: i64,
    lo: i64,
    len: usize,
) -> Vec<Vec<BigInt>> {
    let mut j = vec![BigInt::zero(); len];
    let mut nn = -1i64;
    while n * nn <= lo + len as i64 - 1 {
        let e = n * nn;
        if e >= lo {
            j[(e - lo) as usize] = cj[(nn + 1) as usize].clone();
        }
        nn += 1;
    }
    let mut one = vec![BigInt::zero(); len];
    one[(-lo) as usize] = BigInt::one();
    let mut powers = vec![one];
    for _ in 1..=deg {
        let prev = powers.last().expect("at least J^0");
        let mut next = vec![BigInt::zero(); len];
        for (i, ai) in prev.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (k, bk) in j.iter().enumerate() {
                if bk.is_zero() {
                    continue;
                }
                let idx = i as i64 + k as i64 + lo;
                if (0..len as i64).contains(&idx) {
                    next[idx as usize] += ai * bk;
                }
            }
        }
        powers.push(next);
    }
    powers
}

/// Serialize a modular polynomial in the golden text format: header
/// `PHI N=<level>`, then one line `<expX> <expY> <coefficient>` per term,
/// sorted lexicographically by exponents.
pub fn golden_text(level: u32, terms: &[ModTerm]) -> String {
    let mut sorted: Vec<&ModTerm> = terms.iter().collect();
    sorted.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    let mut out = format!("PHI N={level}\n");
    for (x, y, c) in sorted {
        out.push_str(&format!("{x} {y} {c}\n"));
    }
    out
}

/// Parse the golden text format.  Requires strictly increasing exponent
/// pairs so that serialization round-trips bit-exactly.
pub fn parse_golden(text: &str) -> Result<(u32, Vec<ModTerm>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty golden file".into()))?;
    let level: u32 = header
        .strip_prefix("PHI N=")
        .ok_or_else(|| {
            Error::Parse(format!("expected `PHI N=<level>`, got `{header}`"))
        })?
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad level: {e}")))?;
    let mut terms: Vec<ModTerm> = Vec::new();
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let (x, y, c) = (it.next(), it.next(), it.next());
        let (Some(x), Some(y), Some(c)) = (x, y, c) else {
            return Err(Error::Parse(format!("malformed term line `{line}`")));
        };
        if it.next().is_some() {
            return Err(Error::Parse(format!("trailing fields in `{line}`")));
        }
        let x: u32 =
            x.parse().map_err(|e| Error::Parse(format!("bad exponent: {e}")))?;
        let y: u32 =
            y.parse().map_err(|e| Error::Parse(format!("bad exponent: {e}")))?;
        let c: BigInt = c
            .parse()
            .map_err(|e| Error::Parse(format!("bad coefficient: {e}")))?;
        if c.is_zero() {
            return Err(Error::Parse(format!("zero coefficient in `{line}`")));
        }
        if let Some(last) = terms.last() {
            if (last.0, last.1) >= (x, y) {
                return Err(Error::Parse(format!(
                    "terms out of order at `{line}`"
                )));
            }
        }
        terms.push((x, y, c));
    }
    if terms.is_empty() {
        return Err(Error::Parse("golden file has no terms".into()));
    }
    Ok((level, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_and_coset_counts() {
        assert_eq!(psi(1), 1);
        assert_eq!(psi(2), 3);
        assert_eq!(psi(3), 4);
        assert_eq!(psi(4), 6);
        assert_eq!(psi(5), 6);
        assert_eq!(psi(6), 12);
        assert_eq!(cosets(4).len(), 6);
        assert!(cosets(4).contains(&(2, 1, 2)));
        assert!(!cosets(4).contains(&(2, 0, 2)));
    }

    #[test]
    fn level_one_short_circuits() {
        let ctx = PrecisionCtx::new(128).unwrap();
        let t = interpolate_modular_polynomial(1, &ctx).unwrap();
        assert_eq!(
            t,
            vec![(0, 1, BigInt::from(-1)), (1, 0, BigInt::from(1))]
        );
    }

    /// The classical level-2 modular polynomial, used purely as an
    /// independent cross-check of the interpolation pipeline.
    fn classical_phi2() -> Vec<ModTerm> {
        let c = |s: &str| s.parse::<BigInt>().unwrap();
        let mut t = vec![
            (3u32, 0u32, c("1")),
            (0, 3, c("1")),
            (2, 2, c("-1")),
            (2, 1, c("1488")),
            (1, 2, c("1488")),
            (2, 0, c("-162000")),
            (0, 2, c("-162000")),
            (1, 1, c("40773375")),
            (1, 0, c("8748000000")),
            (0, 1, c("8748000000")),
            (0, 0, c("-157464000000000")),
        ];
        t.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        t
    }

    #[test]
    fn phi2_matches_the_classical_polynomial() {
        let ctx = PrecisionCtx::new(512).unwrap();
        let t = interpolate_modular_polynomial(2, &ctx).unwrap();
        assert_eq!(t, classical_phi2());
    }

    #[test]
    fn phi3_is_symmetric_of_degree_four() {
        let ctx = PrecisionCtx::new(512).unwrap();
        let t = interpolate_modular_polynomial(3, &ctx).unwrap();
        let dx = t.iter().map(|q| q.0).max().unwrap();
        let dy = t.iter().map(|q| q.1).max().unwrap();
        assert_eq!((dx, dy), (4, 4));
        // X⁴ and Y⁴ appear with coefficient 1; X³Y³ with −1.
        assert!(t.contains(&(4, 0, BigInt::one())));
        assert!(t.contains(&(0, 4, BigInt::one())));
        assert!(t.contains(&(3, 3, BigInt::from(-1))));
    }

    #[test]
    fn interpolation_is_precision_independent() {
        let a = interpolate_modular_polynomial(
            2,
            &PrecisionCtx::new(512).unwrap(),
        )
        .unwrap();
        let b = interpolate_modular_polynomial(
            2,
            &PrecisionCtx::new(640).unwrap(),
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn golden_format_round_trips() {
        let terms = classical_phi2();
        let text = golden_text(2, &terms);
        let (level, parsed) = parse_golden(&text).unwrap();
        assert_eq!(level, 2);
        assert_eq!(parsed, terms);
        assert_eq!(golden_text(level, &parsed), text);
        assert!(matches!(
            parse_golden("PHI N=2\n1 1 0\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(parse_golden("nope"), Err(Error::Parse(_))));
    }

    #[test]
    fn insufficient_precision_is_reported() {
        // 64 bits cannot hold the Φ₂ window magnitudes.
        let ctx = PrecisionCtx::new(64).unwrap();
        match interpolate_modular_polynomial(2, &ctx) {
            Err(Error::PrecisionInsufficient(_)) => {}
            other => panic!("expected PrecisionInsufficient, got {other:?}"),
        }
    }

    #[test]
    fn unsupported_levels_are_rejected() {
        let ctx = PrecisionCtx::new(128).unwrap();
        assert!(matches!(
            interpolate_modular_polynomial(11, &ctx),
            Err(Error::UnsupportedLevel(11))
        ));
        assert!(matches!(
            interpolate_modular_polynomial(0, &ctx),
            Err(Error::InvalidArgument(_))
        ));
    }
}
