//! Seeded random polynomial generation for harnesses and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::Poly;
use crate::scalar::Scalar;

/// All exponent tuples of total degree ≤ `n`, in graded lexicographic
/// order.
pub fn monomials_up_to<const D: usize>(n: u32) -> Vec<[u32; D]> {
    let mut out = Vec::new();
    let mut exp = [0u32; D];
    loop {
        out.push(exp);
        // Advance odometer-style within the degree bound.
        let mut carried = false;
        for d in (0..D).rev() {
            let total: u32 = exp.iter().sum();
            if total < n {
                exp[d] += 1;
                carried = true;
                break;
            } else {
                exp[d] = 0;
            }
        }
        if !carried {
            break;
        }
    }
    out.sort_by_key(|e| (e.iter().sum::<u32>(), *e));
    out.dedup();
    out
}

/// Uniform random integer coefficients in `[−coeff_bound, coeff_bound]`
/// over every monomial of degree ≤ `n`; deterministic per seed.
pub fn random_poly<const D: usize>(n: u32, seed: u64, coeff_bound: u32) -> Poly<D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = coeff_bound as i64;
    let mut p = Poly::zero();
    for exp in monomials_up_to::<D>(n) {
        let c = rng.gen_range(-bound..=bound);
        p.add_term(exp, Scalar::from_int(c));
    }
    p
}

/// Per-sample seed derived from a base seed; SplitMix64 step.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        // C(n + D, D) slots.
        assert_eq!(monomials_up_to::<3>(3).len(), 20);
        assert_eq!(monomials_up_to::<2>(4).len(), 15);
        assert_eq!(monomials_up_to::<3>(0).len(), 1);
    }

    #[test]
    fn deterministic_per_seed() {
        let a: Poly<3> = random_poly(3, 99, 9);
        let b: Poly<3> = random_poly(3, 99, 9);
        assert_eq!(a, b);
        let c: Poly<3> = random_poly(3, 100, 9);
        assert_ne!(a, c);
    }

    #[test]
    fn degree_zero_draws_a_constant() {
        let p: Poly<2> = random_poly(0, 5, 9);
        assert!(p.degree().unwrap_or(0) == 0);
    }

    #[test]
    fn respects_degree_bound() {
        let p: Poly<3> = random_poly(4, 17, 3);
        assert!(p.degree().unwrap_or(0) <= 4);
    }
}
