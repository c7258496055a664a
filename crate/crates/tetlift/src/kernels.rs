//! Single-face lifting operators, evaluated exactly on polynomials.
//!
//! The base operator takes chart data `f` on the bottom face to
//!
//! ```text
//! E_k(f)(x, z) = ((−z)^k / k!) · Σ_β z^{|β|} μ_β (D^β f)(x) / β!
//! ```
//!
//! where `μ_β` are the bump moments: the Taylor expansion of the averaged
//! shift `∫ b(y) f(x + z·y) dy`. Its normal-derivative traces on the bottom
//! face are `δ_{mk} f` for `m ≤ k`, and it raises degree by at most `k`.
//! The weighted variants divide the datum by vanishing-edge weights before
//! lifting and multiply the matching ambient weights back afterwards, which
//! forces zero traces on the other faces; mapped versions transport each
//! operator to its home face through the self-maps of the tetrahedron.

use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;

use crate::bump::BumpSpec;
use crate::geometry::volumetric_map;
use crate::poly::{NotDivisible, Poly2, Poly3, Weight};
use crate::scalar::Scalar;

/// A bump together with a monomial weight multiplier.
///
/// Weighting by `ω_axis` shifts every moment index by one in that axis and
/// intentionally breaks the unit-integral normalization; it realizes the
/// bracketed bumps appearing in the operator recursions.
#[derive(Clone, Copy, Debug)]
pub struct BumpKernel {
    spec: BumpSpec,
    shift: [u32; 2],
}

impl BumpKernel {
    pub fn new(spec: BumpSpec) -> Self {
        BumpKernel { spec, shift: [0, 0] }
    }

    /// Multiplies the bump by the coordinate weight `ω_{axis+1}`.
    pub fn weighted(mut self, axis: usize) -> Self {
        assert!(axis < 2);
        self.shift[axis] += 1;
        self
    }

    pub fn moment(&self, alpha: [u32; 2]) -> BigRational {
        self.spec
            .moment([alpha[0] + self.shift[0], alpha[1] + self.shift[1]])
    }
}

/// Division by an edge weight failed: the datum does not vanish to the
/// required order on that edge.
#[derive(Clone, Debug)]
pub struct KernelError {
    pub weight: Weight,
    pub power: u32,
    pub remainder: Poly2,
}

impl fmt::Display for KernelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lift datum is not divisible by {}^{}",
            self.weight, self.power
        )
    }
}

impl std::error::Error for KernelError {}

impl From<NotDivisible<2>> for KernelError {
    fn from(e: NotDivisible<2>) -> Self {
        KernelError { weight: e.weight, power: e.power, remainder: e.remainder }
    }
}

fn factorial_rat(n: u32) -> BigRational {
    let mut acc = BigRational::from_integer(1.into());
    for i in 2..=n as u64 {
        acc *= BigRational::from_integer(i.into());
    }
    acc
}

/// Base lift from the bottom face: degree ≤ `deg f + k`, traces
/// `∂ₙᵐ ·|_{z=0} = δ_{mk} μ₀₀ f` for `m ≤ k`.
pub fn lift_e(f: &Poly2, k: u32, bump: &BumpKernel) -> Poly3 {
    let mut acc = Poly3::zero();
    let Some(deg) = f.degree() else {
        return acc;
    };
    let k_fact = factorial_rat(k);
    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
    for b1 in 0..=deg {
        let row = f.deriv_multi(&[b1, 0]);
        if row.is_zero() {
            continue;
        }
        let mut d = row;
        for b2 in 0..=(deg - b1) {
            if b2 > 0 {
                d = d.partial_deriv(1);
                if d.is_zero() {
                    break;
                }
            }
            let coeff = taylor_coeff(&k_fact, sign, bump.moment([b1, b2]), b1, b2);
            if coeff.is_zero() {
                continue;
            }
            let lifted = d.inject::<3>([0, 1]);
            acc += lifted
                .scale(&Scalar::from_rational(coeff))
                * Poly3::monomial([0, 0, k + b1 + b2], Scalar::from_int(1));
        }
    }
    acc
}

fn taylor_coeff(k_fact: &BigRational, sign: i64, moment: BigRational, b1: u32, b2: u32) -> BigRational {
    BigRational::from_integer(sign.into()) * moment
        / (k_fact * factorial_rat(b1) * factorial_rat(b2))
}

/// Bottom-face lift vanishing to order `r` on the front face
/// (`y = 0`): datum must vanish to order `r` on the shared edge.
pub fn lift_m1(f: &Poly2, k: u32, r: u32, bump: &BumpKernel) -> Result<Poly3, KernelError> {
    let quotient = f.exact_divide(Weight::Var(1), r)?;
    Ok(Poly3::monomial([0, r, 0], Scalar::from_int(1)) * lift_e(&quotient, k, bump))
}

/// Front-face (`Γ₂`) lift vanishing to order `r` on the bottom face.
pub fn lift_m2(f: &Poly2, k: u32, r: u32, bump: &BumpKernel) -> Result<Poly3, KernelError> {
    Ok(volumetric_map(2).pull_poly(&lift_m1(f, k, r, bump)?))
}

/// Two-weight lift vanishing to order `r` on both coordinate side faces;
/// `face` is 1 (bottom) or 3 (the `x = 0` face).
pub fn lift_s(f: &Poly2, k: u32, r: u32, bump: &BumpKernel, face: usize) -> Result<Poly3, KernelError> {
    lift_s_krq_on_face(f, k, r, r, bump, face)
}

/// Three-parameter variant with independent vanishing orders on the two
/// side faces.
pub fn lift_s_krq(
    f: &Poly2,
    k: u32,
    r: u32,
    q: u32,
    bump: &BumpKernel,
) -> Result<Poly3, KernelError> {
    lift_s_krq_on_face(f, k, r, q, bump, 1)
}

fn lift_s_krq_on_face(
    f: &Poly2,
    k: u32,
    r: u32,
    q: u32,
    bump: &BumpKernel,
    face: usize,
) -> Result<Poly3, KernelError> {
    assert!(face == 1 || face == 3, "two-weight lift is based on faces 1 or 3");
    let quotient = f
        .exact_divide(Weight::Var(0), q)?
        .exact_divide(Weight::Var(1), r)?;
    let base = Poly3::monomial([q, r, 0], Scalar::from_int(1)) * lift_e(&quotient, k, bump);
    Ok(match face {
        1 => base,
        _ => volumetric_map(3).pull_poly(&base),
    })
}

/// Three-weight lift vanishing to order `r` on every other face; `face` is
/// 1 (bottom) or 4 (the oblique face). The oblique variant carries the
/// exact factor `3^{−k/2}` compensating the normal scaling of the
/// reflection map.
pub fn lift_r(f: &Poly2, k: u32, r: u32, bump: &BumpKernel, face: usize) -> Result<Poly3, KernelError> {
    assert!(face == 1 || face == 4, "three-weight lift is based on faces 1 or 4");
    let quotient = f
        .exact_divide(Weight::Var(0), r)?
        .exact_divide(Weight::Var(1), r)?
        .exact_divide(Weight::OneMinusSum, r)?;
    // Ambient weight x₁·x₂·(1 − x₁ − x₂ − z), applied after the lift.
    let ambient = Poly3::monomial([1, 1, 0], Scalar::from_int(1)) * Poly3::one_minus_sum();
    let base = ambient.pow(r) * lift_e(&quotient, k, bump);
    Ok(match face {
        1 => base,
        _ => volumetric_map(4)
            .pull_poly(&base)
            .scale(&Scalar::sqrt3_pow(-(k as i32))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bump::BumpSpec;
    use crate::sample::random_poly;
    use crate::trace::normal_trace_on_face;

    fn kernel(m: u32) -> BumpKernel {
        BumpKernel::new(BumpSpec::new(m))
    }

    fn x() -> Poly2 {
        Poly2::var(0)
    }

    fn y() -> Poly2 {
        Poly2::var(1)
    }

    #[test]
    fn constant_lifts_to_itself_at_order_zero() {
        for m in 0..3 {
            assert_eq!(lift_e(&Poly2::one(), 0, &kernel(m)), Poly3::one());
        }
    }

    #[test]
    fn linear_data_frozen_values() {
        let b = kernel(1);
        // E₀(x₁) = x₁ + z/3 and E₁(x₁) = −z·x₁ − z²/3 for the m = 1 bump.
        let e0 = lift_e(&x(), 0, &b);
        let expected0 = Poly3::var(0) + Poly3::monomial([0, 0, 1], Scalar::ratio(1, 3));
        assert_eq!(e0, expected0);

        let e1 = lift_e(&x(), 1, &b);
        let expected1 = Poly3::monomial([1, 0, 1], Scalar::from_int(-1))
            + Poly3::monomial([0, 0, 2], Scalar::ratio(-1, 3));
        assert_eq!(e1, expected1);
    }

    #[test]
    fn quadratic_datum_matches_symbolic_integration() {
        // E₂(x₁²x₂) for the m = 1 bump, frozen from direct symbolic
        // integration of the defining convolution:
        // x₁²x₂z²/2 + x₁²z³/6 + x₁x₂z³/3 + 2x₁z⁴/21 + x₂z⁴/14 + z⁵/56.
        let f = x().pow(2) * y();
        let lift = lift_e(&f, 2, &kernel(1));
        let mut expected = Poly3::zero();
        for (exp, num, den) in [
            ([2, 1, 2], 1, 2),
            ([2, 0, 3], 1, 6),
            ([1, 1, 3], 1, 3),
            ([1, 0, 4], 2, 21),
            ([0, 1, 4], 1, 14),
            ([0, 0, 5], 1, 56),
        ] {
            expected.add_term(exp, Scalar::ratio(num, den));
        }
        assert_eq!(lift, expected);
    }

    #[test]
    fn trace_interpolation_identities() {
        for seed in 0..25u64 {
            let f: Poly2 = random_poly(3, seed, 5);
            for k in 0..=2u32 {
                let lift = lift_e(&f, k, &kernel(2));
                for m in 0..=k {
                    let tr = normal_trace_on_face(&lift, 1, m);
                    if m == k {
                        assert_eq!(tr, f, "seed {seed} k {k}");
                    } else {
                        assert!(tr.is_zero(), "seed {seed} k {k} m {m}");
                    }
                }
                assert!(lift.degree() <= f.degree().map(|d| d + k));
            }
        }
    }

    #[test]
    fn m_lift_small_cases() {
        let b = kernel(2);
        // f = x₂ with r = 1 factors as x₂·E₀(1) = x₂.
        let lifted = lift_m1(&y(), 0, 1, &b).unwrap();
        assert_eq!(lifted, Poly3::var(1));
        // x₂ is not divisible by x₂².
        assert!(lift_m1(&y(), 0, 2, &b).is_err());
        // r = 0 reduces to the base lift.
        let f: Poly2 = random_poly(3, 11, 5);
        assert_eq!(lift_m1(&f, 1, 0, &b).unwrap(), lift_e(&f, 1, &b));
    }

    #[test]
    fn s_lift_small_cases() {
        let b = kernel(2);
        let f = x() * y();
        assert_eq!(lift_s(&f, 0, 1, &b, 1).unwrap(), Poly3::var(0) * Poly3::var(1));
        // q = r collapses the three-parameter variant.
        let g = x().pow(2) * y().pow(2);
        assert_eq!(
            lift_s_krq(&g, 1, 2, 2, &b).unwrap(),
            lift_s(&g, 1, 2, &b, 1).unwrap()
        );
        let h: Poly2 = random_poly(2, 3, 4);
        assert_eq!(lift_s(&h, 2, 0, &b, 1).unwrap(), lift_e(&h, 2, &b));
    }

    #[test]
    fn r_lift_small_cases() {
        let b = kernel(2);
        let f = x() * y() * Poly2::one_minus_sum();
        let expected = Poly3::var(0) * Poly3::var(1) * Poly3::one_minus_sum();
        assert_eq!(lift_r(&f, 0, 1, &b, 1).unwrap(), expected);
        // The oblique-face factor is 3⁰ = 1 at k = 0.
        let on4 = lift_r(&f, 0, 1, &b, 4).unwrap();
        assert_eq!(on4, volumetric_map(4).pull_poly(&expected));
        let h: Poly2 = random_poly(2, 5, 4);
        assert_eq!(lift_r(&h, 1, 0, &b, 1).unwrap(), lift_e(&h, 1, &b));
    }

    #[test]
    fn weighted_lifts_interpolate_and_vanish() {
        // Trace δ_{mk} f on the home face; normal traces of order < r vanish
        // on the faces the prefactor kills.
        let b = kernel(2);
        for seed in 0..10u64 {
            for k in 0..=2u32 {
                for r in 1..=3u32 {
                    let h: Poly2 = random_poly(2, seed * 7 + k as u64, 3);

                    let fm = h.clone() * Poly2::var(1).pow(r);
                    let lm = lift_m1(&fm, k, r, &b).unwrap();
                    for m in 0..=k {
                        let tr = normal_trace_on_face(&lm, 1, m);
                        if m == k {
                            assert_eq!(tr, fm);
                        } else {
                            assert!(tr.is_zero());
                        }
                    }
                    for j in 0..r {
                        assert!(normal_trace_on_face(&lm, 2, j).is_zero());
                    }

                    let fs = h.clone() * (x() * y()).pow(r);
                    let ls = lift_s(&fs, k, r, &b, 1).unwrap();
                    for j in 0..r {
                        assert!(normal_trace_on_face(&ls, 2, j).is_zero());
                        assert!(normal_trace_on_face(&ls, 3, j).is_zero());
                    }
                    assert_eq!(normal_trace_on_face(&ls, 1, k), fs);

                    let fr = h.clone() * (x() * y() * Poly2::one_minus_sum()).pow(r);
                    let lr = lift_r(&fr, k, r, &b, 1).unwrap();
                    for j in 0..r {
                        assert!(normal_trace_on_face(&lr, 2, j).is_zero());
                        assert!(normal_trace_on_face(&lr, 3, j).is_zero());
                        assert!(normal_trace_on_face(&lr, 4, j).is_zero());
                    }
                    assert_eq!(normal_trace_on_face(&lr, 1, k), fr);
                }
            }
        }
    }

    #[test]
    fn mapped_lifts_interpolate_on_their_faces() {
        let b = kernel(2);
        for seed in 0..8u64 {
            for k in 0..=2u32 {
                let r = k + 1;
                let h: Poly2 = random_poly(2, seed + 1, 3);

                let f2 = h.clone() * Poly2::var(1).pow(r);
                let l2 = lift_m2(&f2, k, r, &b).unwrap();
                assert_eq!(normal_trace_on_face(&l2, 2, k), f2);
                for j in 0..r {
                    assert!(normal_trace_on_face(&l2, 1, j).is_zero());
                    if j < k {
                        assert!(normal_trace_on_face(&l2, 2, j).is_zero());
                    }
                }

                let f3 = h.clone() * (x() * y()).pow(r);
                let l3 = lift_s(&f3, k, r, &b, 3).unwrap();
                assert_eq!(normal_trace_on_face(&l3, 3, k), f3);
                for j in 0..r {
                    assert!(normal_trace_on_face(&l3, 1, j).is_zero());
                    assert!(normal_trace_on_face(&l3, 2, j).is_zero());
                }

                let f4 = h.clone() * (x() * y() * Poly2::one_minus_sum()).pow(r);
                let l4 = lift_r(&f4, k, r, &b, 4).unwrap();
                assert_eq!(normal_trace_on_face(&l4, 4, k), f4);
                for j in 0..r {
                    assert!(normal_trace_on_face(&l4, 1, j).is_zero());
                    assert!(normal_trace_on_face(&l4, 2, j).is_zero());
                    assert!(normal_trace_on_face(&l4, 3, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn degree_law_on_divisible_inputs() {
        let b = kernel(1);
        for seed in 0..10u64 {
            let h: Poly2 = random_poly(3, seed, 4);
            for k in 0..=2u32 {
                for r in 0..=2u32 {
                    let fm = h.clone() * Poly2::var(1).pow(r);
                    let deg = fm.degree();
                    let lm = lift_m1(&fm, k, r, &b).unwrap();
                    assert!(lm.degree() <= deg.map(|d| d + k));
                }
            }
        }
    }

    #[test]
    fn kernels_are_linear_in_the_datum() {
        let b = kernel(2);
        let c = Scalar::ratio(3, 2);
        for seed in 0..10u64 {
            let f: Poly2 = random_poly(3, seed, 5);
            let g: Poly2 = random_poly(3, seed + 50, 5);
            for k in 0..=2u32 {
                let combo = lift_e(&(f.scale(&c) + &g), k, &b);
                let split = lift_e(&f, k, &b).scale(&c) + lift_e(&g, k, &b);
                assert_eq!(combo, split);
            }
        }
        // The weighted kernels inherit linearity on divisible data.
        for seed in 0..6u64 {
            let h1: Poly2 = random_poly(2, seed, 5);
            let h2: Poly2 = random_poly(2, seed + 31, 5);
            let wm = Poly2::var(1).pow(2);
            let ws = (x() * y()).pow(2);
            let wr = (x() * y() * Poly2::one_minus_sum()).pow(2);
            for (w, liftf) in [
                (wm, (|f: &Poly2| lift_m1(f, 1, 2, &kernel(2)).unwrap()) as fn(&Poly2) -> Poly3),
                (ws, |f: &Poly2| lift_s(f, 1, 2, &kernel(2), 3).unwrap()),
                (wr, |f: &Poly2| lift_r(f, 1, 2, &kernel(2), 4).unwrap()),
            ] {
                let f = &h1 * &w;
                let g = &h2 * &w;
                let combo = liftf(&(f.scale(&c) + &g));
                let split = liftf(&f).scale(&c) + liftf(&g);
                assert_eq!(combo, split, "seed {seed}");
            }
        }
    }

    #[test]
    fn moment_shift_recursion_for_weighted_lift() {
        // x₂-weighted recursion: lowering the vanishing power by one costs
        // one extra derivative order against the ω₂-weighted bump.
        let spec = BumpSpec::new(2);
        let plain = BumpKernel::new(spec);
        let shifted = BumpKernel::new(spec).weighted(1);
        for seed in 0..10u64 {
            for k in 0..=2u32 {
                for r in 0..=2u32 {
                    let h: Poly2 = random_poly(2, seed * 3 + 2, 4);
                    let f = h * Poly2::var(1).pow(r + 1);
                    let lhs = lift_m1(&f, k, r + 1, &plain).unwrap();
                    let inner = f.exact_divide(Weight::Var(1), 1).unwrap();
                    let rhs = lift_m1(&inner, k + 1, r, &shifted)
                        .unwrap()
                        .scale(&Scalar::from_int(k as i64 + 1))
                        + lift_m1(&f, k, r, &plain).unwrap();
                    assert_eq!(lhs, rhs, "seed {seed} k {k} r {r}");
                }
            }
        }
    }

    #[test]
    fn moment_shift_recursion_for_two_weight_lift() {
        let spec = BumpSpec::new(2);
        let plain = BumpKernel::new(spec);
        let shifted = BumpKernel::new(spec).weighted(0);
        for seed in 0..6u64 {
            for k in 0..=2u32 {
                for r in 0..=2u32 {
                    for q in 0..=2u32 {
                        let h: Poly2 = random_poly(2, seed + 9, 3);
                        let f = h * Poly2::var(0).pow(q + 1) * Poly2::var(1).pow(r);
                        let lhs = lift_s_krq_gen(&f, k, r, q + 1, &plain);
                        let inner = f.exact_divide(Weight::Var(0), 1).unwrap();
                        let rhs = lift_s_krq_gen(&inner, k + 1, r, q, &shifted)
                            .scale(&Scalar::from_int(k as i64 + 1))
                            + lift_s_krq_gen(&f, k, r, q, &plain);
                        assert_eq!(lhs, rhs, "seed {seed} k {k} r {r} q {q}");
                    }
                }
            }
        }
    }

    fn lift_s_krq_gen(f: &Poly2, k: u32, r: u32, q: u32, bump: &BumpKernel) -> Poly3 {
        lift_s_krq(f, k, r, q, bump).unwrap()
    }
}
