//! Polynomial bump functions on the reference triangle and their moments.
//!
//! The bump `b = c_m (y₁ y₂ (1−y₁−y₂))^m` vanishes to order `m` on the
//! boundary and is normalized so `∫_T b = 1`. On polynomial data the
//! convolution lifts are determined entirely by the monomial moments
//! `μ_α = ∫_T b·y^α`, which are exact rationals.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Bump of smoothness power `m` (grows one continuous derivative per unit
/// of `m`; `m = 0` is the indicator).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BumpSpec {
    m: u32,
}

impl Default for BumpSpec {
    fn default() -> Self {
        BumpSpec { m: 2 }
    }
}

impl BumpSpec {
    pub fn new(m: u32) -> Self {
        BumpSpec { m }
    }

    pub fn smoothness_power(&self) -> u32 {
        self.m
    }

    /// Normalization constant `c_m = (3m+2)! / (m!)³`.
    pub fn normalization(&self) -> BigRational {
        let m = self.m as u64;
        let num = factorial(3 * m + 2);
        let den = factorial(m).pow(3);
        BigRational::new(num, den)
    }

    /// Exact moment `μ_α = ∫_T b·y₁^α₁ y₂^α₂`.
    pub fn moment(&self, alpha: [u32; 2]) -> BigRational {
        type MomentTable = Mutex<HashMap<(u32, u32, u32), BigRational>>;
        static MEMO: OnceLock<MomentTable> = OnceLock::new();
        let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
        let key = (self.m, alpha[0], alpha[1]);
        if let Some(v) = memo.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = self.normalization()
            * simplex_monomial_integral(alpha[0] + self.m, alpha[1] + self.m, self.m);
        memo.lock().unwrap().insert(key, v.clone());
        v
    }
}

/// `∫_T y₁^a y₂^b (1−y₁−y₂)^c = a! b! c! / (a+b+c+2)!` over the reference
/// triangle.
pub fn simplex_monomial_integral(a: u32, b: u32, c: u32) -> BigRational {
    let num = factorial(a as u64) * factorial(b as u64) * factorial(c as u64);
    let den = factorial((a + b + c) as u64 + 2);
    BigRational::new(num, den)
}

/// `∫_K x^a y^b z^c (1−x−y−z)^d = a! b! c! d! / (a+b+c+d+3)!` over the
/// reference tetrahedron.
pub fn tet_monomial_integral(a: u32, b: u32, c: u32, d: u32) -> BigRational {
    let num =
        factorial(a as u64) * factorial(b as u64) * factorial(c as u64) * factorial(d as u64);
    let den = factorial((a + b + c + d) as u64 + 3);
    BigRational::new(num, den)
}

fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;
    use num_traits::{ToPrimitive, Zero};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn triangle_monomial_integrals() {
        assert_eq!(simplex_monomial_integral(0, 0, 0), rat(1, 2));
        assert_eq!(simplex_monomial_integral(1, 0, 0), rat(1, 6));
        assert_eq!(simplex_monomial_integral(1, 1, 1), rat(1, 120));
    }

    #[test]
    fn triangle_integrals_match_quadrature() {
        // Independent numeric check of the closed form.
        for (a, b, c) in [(0, 0, 0), (1, 0, 0), (2, 1, 0), (1, 1, 1), (3, 2, 1)] {
            let rule = quad::triangle_rule(12);
            let numeric: f64 = rule
                .iter()
                .map(|(p, w)| {
                    p[0].powi(a) * p[1].powi(b) * (1.0 - p[0] - p[1]).powi(c) * w
                })
                .sum();
            let exact = simplex_monomial_integral(a as u32, b as u32, c as u32)
                .to_f64()
                .unwrap();
            assert!((numeric - exact).abs() < 1e-12, "({a},{b},{c}): {numeric} vs {exact}");
        }
    }

    #[test]
    fn normalization_constants() {
        assert_eq!(BumpSpec::new(1).normalization(), rat(120, 1));
        assert_eq!(BumpSpec::new(2).normalization(), rat(5040, 1));
    }

    #[test]
    fn moment_examples() {
        for m in 0..4 {
            assert_eq!(BumpSpec::new(m).moment([0, 0]), rat(1, 1));
        }
        assert_eq!(BumpSpec::new(1).moment([1, 0]), rat(1, 3));
        assert_eq!(BumpSpec::new(1).moment([2, 0]), rat(1, 7));
    }

    #[test]
    fn moment_symmetry_and_sum_rule() {
        for m in 0..4 {
            let spec = BumpSpec::new(m);
            for a in 0..5u32 {
                for b in 0..5u32 {
                    assert_eq!(spec.moment([a, b]), spec.moment([b, a]));
                }
            }
            // μ_(1,0) + μ_(0,1) + ∫ b·(1−y₁−y₂) = ∫ b = 1.
            let third = spec.normalization()
                * simplex_monomial_integral(m, m, m + 1);
            let total = spec.moment([1, 0]) + spec.moment([0, 1]) + third;
            assert_eq!(total, rat(1, 1));
        }
    }

    #[test]
    fn moments_decay_with_order() {
        let spec = BumpSpec::new(2);
        let mut prev = spec.moment([0, 0]);
        for k in 1..8u32 {
            let cur = spec.moment([k, 0]);
            assert!(cur < prev && cur > BigRational::zero());
            prev = cur;
        }
    }
}
