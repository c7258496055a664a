//! Averaging operator, weight inverses, partial fractions, and the edge
//! kernel.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::poly::{NotDivisible, Poly2, Weight};
use crate::scalar::Scalar;

/// Averaging along the first coordinate:
/// `H₁(f)(x) = (1/x₁) ∫₀^{x₁} f(u, x₂) du`, i.e. the monomial action
/// `x₁^a x₂^b ↦ x₁^a x₂^b / (a + 1)`.
///
/// Degree-preserving and linear; satisfies `x₁·H₁(∂₁f) = f − f(0, ·)`.
pub fn hardy_average(f: &Poly2) -> Poly2 {
    let mut out = Poly2::zero();
    for (exp, coeff) in f.terms() {
        out.add_term(*exp, coeff * Scalar::ratio(1, exp[0] as i64 + 1));
    }
    out
}

/// Exact quotient `f / ω_i` for `i ∈ {1, 2}` (the coordinate weights);
/// defined when `f` vanishes on the corresponding edge.
pub fn omega_inverse(f: &Poly2, i: usize) -> Result<Poly2, NotDivisible<2>> {
    assert!(i == 1 || i == 2, "coordinate weight index must be 1 or 2");
    f.exact_divide(Weight::Var(i - 1), 1)
}

/// One term `c / (ω_{w₁}^{e₁} ω_{w₂}^{e₂})` of a partial-fraction
/// decomposition; weight ids are 1-based and `w₁ < w₂`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PartialFractionTerm {
    pub weights: (usize, usize),
    pub exponents: (u32, u32),
    pub coefficient: u64,
}

impl fmt::Display for PartialFractionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} / (w{}^{} * w{}^{})",
            self.coefficient, self.weights.0, self.exponents.0, self.weights.1, self.exponents.1
        )
    }
}

/// Decomposes `1 / (ω₁^{β₁} ω₂^{β₂} ω₃^{β₃})` into two-weight terms with
/// positive integer constants, using `ω₁ + ω₂ + ω₃ = 1` to split one
/// balanced factor per recursion step.
///
/// Requires `|β| ≥ 2`.
pub fn partial_fraction_decompose(beta: [u32; 3]) -> Vec<PartialFractionTerm> {
    assert!(beta.iter().sum::<u32>() >= 2, "total weight power must be at least 2");
    let mut table: BTreeMap<(usize, usize, u32, u32), u64> = BTreeMap::new();
    accumulate(beta, 1, &mut table);
    table
        .into_iter()
        .map(|((w1, w2, e1, e2), c)| PartialFractionTerm {
            weights: (w1, w2),
            exponents: (e1, e2),
            coefficient: c,
        })
        .collect()
}

fn accumulate(beta: [u32; 3], mult: u64, table: &mut BTreeMap<(usize, usize, u32, u32), u64>) {
    if beta[2] == 0 {
        *table.entry((1, 2, beta[0], beta[1])).or_insert(0) += mult;
    } else if beta[1] == 0 {
        *table.entry((1, 3, beta[0], beta[2])).or_insert(0) += mult;
    } else if beta[0] == 0 {
        *table.entry((2, 3, beta[1], beta[2])).or_insert(0) += mult;
    } else {
        // 1/(ω₁ω₂ω₃) = 1/(ω₁ω₂) + 1/(ω₁ω₃) + 1/(ω₂ω₃) on the simplex.
        accumulate([beta[0], beta[1], beta[2] - 1], mult, table);
        accumulate([beta[0], beta[1] - 1, beta[2]], mult, table);
        accumulate([beta[0] - 1, beta[1], beta[2]], mult, table);
    }
}

/// Restores the polynomial identity behind a decomposition: multiplies
/// every term by `ω^β` over the common denominator and checks the result
/// equals one. Exact.
pub fn partial_fractions_identity_holds(beta: [u32; 3], terms: &[PartialFractionTerm]) -> bool {
    let omega = |i: usize| -> Poly2 {
        match i {
            1 => Poly2::var(0),
            2 => Poly2::var(1),
            3 => Poly2::one_minus_sum(),
            _ => unreachable!(),
        }
    };
    let mut total = Poly2::zero();
    for term in terms {
        let (w1, w2) = term.weights;
        let (e1, e2) = term.exponents;
        let mut exps = [beta[0], beta[1], beta[2]];
        if exps[w1 - 1] < e1 || exps[w2 - 1] < e2 {
            return false;
        }
        exps[w1 - 1] -= e1;
        exps[w2 - 1] -= e2;
        let prod = omega(1).pow(exps[0]) * omega(2).pow(exps[1]) * omega(3).pow(exps[2]);
        total += prod.scale(&Scalar::from_int(term.coefficient as i64));
    }
    total == Poly2::one()
}

/// Domain error for [`edge_kernel_closed_form`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutsideTriangle;

impl fmt::Display for OutsideTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "point must lie strictly inside the reference triangle")
    }
}

impl std::error::Error for OutsideTriangle {}

/// Closed form of the edge kernel
/// `A(x) = ∫_T x₂ / |x_r − y|³ dy` with `x_r = (x₁, −x₂)`:
///
/// ```text
/// A(x) = [ x₁ √(x₂² + (1−x₁)²) + (1−x₁+x₂) √(x₁² + x₂²)
///          − x₂ √((1+x₂)² + x₁²) ] / ( x₁ (1−x₁+x₂) )
/// ```
///
/// Tends to 2 as `x₂ → 0⁺` for interior `x₁`.
pub fn edge_kernel_closed_form(x1: f64, x2: f64) -> Result<f64, OutsideTriangle> {
    if !(x1 > 0.0 && x2 > 0.0 && x1 + x2 < 1.0) {
        return Err(OutsideTriangle);
    }
    let t1 = x1 * (x2 * x2 + (1.0 - x1) * (1.0 - x1)).sqrt();
    let t2 = (1.0 - x1 + x2) * (x1 * x1 + x2 * x2).sqrt();
    let t3 = x2 * ((1.0 + x2) * (1.0 + x2) + x1 * x1).sqrt();
    Ok((t1 + t2 - t3) / (x1 * (1.0 - x1 + x2)))
}
