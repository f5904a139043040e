//! Monomial orders: lex, graded reverse lex, and block elimination.
//!
//! `Block { front }` compares the first `front` exponents under grevlex
//! first and the remaining exponents under grevlex on ties.  It is an
//! elimination order for the front block: any monomial containing a front
//! variable is larger than every monomial free of them, so a Gröbner basis
//! element whose leading monomial avoids the front block lies entirely in
//! the back-variable subring.

use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonOrder {
    /// Pure lexicographic, first variable most significant.
    Lex,
    /// Graded reverse lexicographic.
    GrevLex,
    /// Elimination order: grevlex on the first `front` variables, then
    /// grevlex on the rest.
    Block { front: usize },
}

fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {
            for i in (0..a.len()).rev() {
                match a[i].cmp(&b[i]) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {}
                }
            }
            Ordering::Equal
        }
        other => other,
    }
}

impl MonOrder {
    /// Compare exponent vectors; `Greater` means `a` is the larger monomial.
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        debug_assert_eq!(a.len(), b.len());
        match *self {
            MonOrder::Lex => {
                for i in 0..a.len() {
                    match a[i].cmp(&b[i]) {
                        Ordering::Equal => {}
                        other => return other,
                    }
                }
                Ordering::Equal
            }
            MonOrder::GrevLex => grevlex_cmp(a, b),
            MonOrder::Block { front } => {
                let f = front.min(a.len());
                match grevlex_cmp(&a[..f], &b[..f]) {
                    Ordering::Equal => grevlex_cmp(&a[f..], &b[f..]),
                    other => other,
                }
            }
        }
    }

    /// True when the order eliminates the first `front` variables: leading
    /// monomials free of them certify membership in the back subring.
    pub fn eliminates(&self, front: usize) -> bool {
        match *self {
            MonOrder::Lex => true,
            MonOrder::GrevLex => front == 0,
            MonOrder::Block { front: f } => f >= front,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_mono(rng: &mut impl Rng, n: usize) -> Vec<u32> {
        (0..n).map(|_| rng.gen_range(0..6u32)).collect()
    }

    fn orders(n: usize) -> Vec<MonOrder> {
        vec![
            MonOrder::Lex,
            MonOrder::GrevLex,
            MonOrder::Block { front: n / 2 },
            MonOrder::Block { front: 1 },
        ]
    }

    /// Validity on random monomial triples: totality/antisymmetry,
    /// multiplicativity, and well-foundedness (1 is minimal).
    #[test]
    fn order_axioms_on_random_triples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let n = rng.gen_range(1..6usize);
            for ord in orders(n) {
                let a = random_mono(&mut rng, n);
                let b = random_mono(&mut rng, n);
                let c = random_mono(&mut rng, n);
                // Antisymmetry / totality.
                assert_eq!(ord.cmp(&a, &b), ord.cmp(&b, &a).reverse());
                assert_eq!(ord.cmp(&a, &b) == Ordering::Equal, a == b);
                // Multiplicativity: cmp(a,b) = cmp(a+c, b+c).
                let ac: Vec<u32> = a.iter().zip(&c).map(|(x, y)| x + y).collect();
                let bc: Vec<u32> = b.iter().zip(&c).map(|(x, y)| x + y).collect();
                assert_eq!(ord.cmp(&a, &b), ord.cmp(&ac, &bc));
                // Well-founded: the unit monomial is minimal.
                let one = vec![0u32; n];
                assert_ne!(ord.cmp(&a, &one), Ordering::Less);
                // Transitivity spot check.
                if ord.cmp(&a, &b) != Ordering::Greater
                    && ord.cmp(&b, &c) != Ordering::Greater
                {
                    assert_ne!(ord.cmp(&a, &c), Ordering::Greater);
                }
            }
        }
    }

    #[test]
    fn grevlex_classic_disambiguation() {
        // x^2 y z vs x y^3: degrees 4 vs 4; last nonzero of a-b decides.
        let ord = MonOrder::GrevLex;
        let a = vec![2, 1, 1];
        let b = vec![1, 3, 0];
        // a - b = (1, -2, 1): last nonzero is +1 at z, so a has MORE of the
        // least variable => a < b under grevlex.
        assert_eq!(ord.cmp(&a, &b), Ordering::Less);
    }

    #[test]
    fn block_order_eliminates_front() {
        let ord = MonOrder::Block { front: 1 };
        // Any monomial with the front variable beats any without it.
        let with = vec![1, 0, 0];
        let without = vec![0, 9, 9];
        assert_eq!(ord.cmp(&with, &without), Ordering::Greater);
        assert!(ord.eliminates(1));
        assert!(!ord.eliminates(2));
        assert!(MonOrder::Lex.eliminates(2));
    }
}
