//! Exact integer q-expansions: Eisenstein series, the discriminant, and the
//! coefficients of the modular j-function.
//!
//! Everything in this file is exact `BigInt` arithmetic.  The j-coefficients
//! `c(n)` (with `j = Σ_{n ≥ −1} c(n)qⁿ`) are derived from the closed-form
//! divisor sums of E₄ and E₆ via `j = E₄³/Δ`, `Δ = (E₄³ − E₆²)/1728` — no
//! numeric value enters the computation.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Divisor-power sums σ₃(n) and σ₅(n) for 1 ≤ n ≤ `n_max` (index 0 unused).
pub(crate) fn sigma_sieve(n_max: usize) -> (Vec<u64>, Vec<u64>) {
    assert!(n_max <= 10_000, "sigma sieve overflows u64 far beyond this");
    let mut s3 = vec![0u64; n_max + 1];
    let mut s5 = vec![0u64; n_max + 1];
    for d in 1..=n_max {
        let d3 = (d as u64).pow(3);
        let d5 = (d as u64).pow(5);
        let mut m = d;
        while m <= n_max {
            s3[m] += d3;
            s5[m] += d5;
            m += d;
        }
    }
    (s3, s5)
}

/// Truncated product of two power series (coefficients `0..=n_max`).
fn series_mul(a: &[BigInt], b: &[BigInt], n_max: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n_max + 1];
    for (i, ai) in a.iter().enumerate().take(n_max + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n_max + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Coefficients 0..=`n_max` of E₄ = 1 + 240·Σ σ₃(n)qⁿ and
/// E₆ = 1 − 504·Σ σ₅(n)qⁿ.
pub(crate) fn eisenstein_coefficients(
    n_max: usize,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let (s3, s5) = sigma_sieve(n_max);
    let mut e4 = vec![BigInt::zero(); n_max + 1];
    let mut e6 = vec![BigInt::zero(); n_max + 1];
    e4[0] = BigInt::one();
    e6[0] = BigInt::one();
    for n in 1..=n_max {
        e4[n] = BigInt::from(240u32) * BigInt::from(s3[n]);
        e6[n] = BigInt::from(-504i32) * BigInt::from(s5[n]);
    }
    (e4, e6)
}

/// Coefficients `c(−1), c(0), …, c(n_max)` of `j = Σ_{n ≥ −1} c(n)qⁿ`,
/// indexed so that the returned vector's entry `k` is `c(k − 1)`.
///
/// Computed as `j = E₄³/Δ` with `Δ = (E₄³ − E₆²)/1728 = q·D(q)` and `D` a
/// unit power series; both the division by 1728 and the unit-series division
/// are exact over the integers, which cross-checks the Eisenstein data.
pub(crate) fn j_coefficients(n_max: usize) -> Vec<BigInt> {
    let len = n_max + 2; // need E₄³ and Δ through q^(n_max + 1)
    let (e4, e6) = eisenstein_coefficients(len);
    let e4sq = series_mul(&e4, &e4, len);
    let e4cube = series_mul(&e4sq, &e4, len);
    let e6sq = series_mul(&e6, &e6, len);
    // Δ = (E₄³ − E₆²)/1728, exactly divisible.
    let mut delta = Vec::with_capacity(len + 1);
    for k in 0..=len {
        let num = &e4cube[k] - &e6sq[k];
        let (q, r) = num_integer::Integer::div_rem(&num, &BigInt::from(1728));
        assert!(r.is_zero(), "E₄³ − E₆² must be divisible by 1728");
        delta.push(q);
    }
    assert!(delta[0].is_zero() && delta[1].is_one(), "Δ = q − 24q² + …");
    // D(q) = Δ/q is a unit series; U = E₄³/D gives c(n) = U[n + 1], and the
    // returned entries 0..=n_max+1 are exactly c(−1)..c(n_max).
    let d: Vec<BigInt> = delta[1..].to_vec();
    let mut u = vec![BigInt::zero(); len];
    for k in 0..len {
        let mut acc = e4cube[k].clone();
        for i in 1..=k {
            acc -= &d[i] * &u[k - i];
        }
        u[k] = acc; // division by D[0] = 1
    }
    u
}
