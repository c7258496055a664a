//! Sobolev norms on the reference domains and the empirical stability
//! harness.
//!
//! Integer-order norms only. At `p = 2` every norm is computed exactly via
//! monomial integrals and rooted at the end; other exponents go through
//! collapsed-coordinate Gauss quadrature whose order adapts to the
//! integrand degree. The trace-side quantity used by the stability
//! experiment is a surrogate built from integer-order face norms plus the
//! singular-weight edge integrals, labeled as such in every report.

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bump::{simplex_monomial_integral, tet_monomial_integral};
use crate::geometry::{face_frame, EDGES};
use crate::pipeline::lift_l4;
use crate::poly::{NotDivisible, Poly2, Poly3};
use crate::quad::{tet_rule, triangle_rule};
use crate::sample::{derive_seed, random_poly};
use crate::scalar::Scalar;
use crate::trace::{chart_dir_deriv, edge_mismatch_factor, normal_trace_tuple, SymTensorPoly, TraceTuple};
use crate::BumpSpec;

/// Integration domain of a norm.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Domain {
    Triangle,
    Tetrahedron,
    /// A face of the tetrahedron, with surface measure and surface
    /// derivatives taken in its tangent frame.
    Face(usize),
}

/// Integer Sobolev order `s`, exponent `p > 1`, and domain.
#[derive(Clone, Copy, Debug)]
pub struct NormSpec {
    pub s: u32,
    pub p: f64,
    pub domain: Domain,
}

/// Quadrature limits.
#[derive(Clone, Copy, Debug)]
pub struct QuadOpts {
    pub max_order: usize,
}

impl Default for QuadOpts {
    fn default() -> Self {
        QuadOpts { max_order: 48 }
    }
}

impl QuadOpts {
    /// Points per axis so the collapsed rule is exact for `|poly|^p` with
    /// even integer `p`; `jac_degree` is the degree the collapsed-map
    /// Jacobian adds (1 on the triangle, 2 on the tetrahedron).
    fn order_for(&self, p: f64, degree: u32, jac_degree: u32) -> usize {
        let raw = ((p * degree as f64 + jac_degree as f64 + 1.0) / 2.0).ceil() as usize;
        raw.clamp(2, self.max_order)
    }
}

/// Exact `∫_T f` for chart polynomials.
pub fn integrate_exact_tri(f: &Poly2) -> Scalar {
    let mut acc = Scalar::zero();
    for (exp, coeff) in f.terms() {
        acc += coeff * Scalar::from_rational(simplex_monomial_integral(exp[0], exp[1], 0));
    }
    acc
}

/// Exact `∫_K u`.
pub fn integrate_exact_tet(u: &Poly3) -> Scalar {
    let mut acc = Scalar::zero();
    for (exp, coeff) in u.terms() {
        acc += coeff * Scalar::from_rational(tet_monomial_integral(exp[0], exp[1], exp[2], 0));
    }
    acc
}

fn face_area_scale(face: usize) -> Scalar {
    // Charts of the coordinate faces are isometries; the oblique face
    // carries surface measure √3 per unit chart area.
    if face == 4 {
        Scalar::sqrt3()
    } else {
        Scalar::from_int(1)
    }
}

/// All 2-variable multi-indices of total order `n`.
fn multi_indices_2(n: u32) -> Vec<[u32; 2]> {
    (0..=n).map(|a| [a, n - a]).collect()
}

/// All 3-variable multi-indices of total order `n`.
fn multi_indices_3(n: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=(n - a) {
            out.push([a, b, n - a - b]);
        }
    }
    out
}

/// Derivatives entering the order-`n` seminorm on the given 2-D domain.
fn seminorm_derivatives_2d(f: &Poly2, domain: Domain, n: u32) -> Vec<Poly2> {
    match domain {
        Domain::Triangle => multi_indices_2(n).iter().map(|a| f.deriv_multi(a)).collect(),
        Domain::Face(face) => {
            let frame = face_frame(face);
            multi_indices_2(n)
                .iter()
                .map(|a| {
                    let mut g = f.clone();
                    for _ in 0..a[0] {
                        g = chart_dir_deriv(face, &g, &frame.tau1);
                    }
                    for _ in 0..a[1] {
                        g = chart_dir_deriv(face, &g, &frame.tau2);
                    }
                    g
                })
                .collect()
        }
        Domain::Tetrahedron => panic!("2-D data on a 3-D domain"),
    }
}

/// Exact squared Sobolev norm (`p = 2`): `Σ_{n ≤ s} Σ_{|α| = n} ∫ |D^α|²`.
pub fn sobolev_norm_sq_exact_2d(f: &Poly2, s: u32, domain: Domain) -> Scalar {
    let scale = match domain {
        Domain::Face(face) => face_area_scale(face),
        _ => Scalar::from_int(1),
    };
    let mut acc = Scalar::zero();
    for n in 0..=s {
        for d in seminorm_derivatives_2d(f, domain, n) {
            acc += integrate_exact_tri(&(&d * &d)) * &scale;
        }
    }
    acc
}

pub fn sobolev_norm_sq_exact_3d(u: &Poly3, s: u32) -> Scalar {
    let mut acc = Scalar::zero();
    for n in 0..=s {
        for alpha in multi_indices_3(n) {
            let d = u.deriv_multi(&alpha);
            acc += integrate_exact_tet(&(&d * &d));
        }
    }
    acc
}

/// Quadrature path of the 2-D norm for arbitrary `p`.
pub fn sobolev_norm_2d_quadrature(f: &Poly2, spec: &NormSpec, opts: &QuadOpts) -> f64 {
    let scale = match spec.domain {
        Domain::Face(face) => face_area_scale(face).to_f64(),
        _ => 1.0,
    };
    let mut acc = 0.0;
    for n in 0..=spec.s {
        for d in seminorm_derivatives_2d(f, spec.domain, n) {
            let deg = d.degree().unwrap_or(0);
            let rule = triangle_rule(opts.order_for(spec.p, deg, 1));
            let integral: f64 = rule
                .iter()
                .map(|(pt, w)| d.eval_f64(pt).abs().powf(spec.p) * w)
                .sum();
            acc += integral * scale;
        }
    }
    acc.powf(1.0 / spec.p)
}

pub fn sobolev_norm_3d_quadrature(u: &Poly3, spec: &NormSpec, opts: &QuadOpts) -> f64 {
    assert!(matches!(spec.domain, Domain::Tetrahedron));
    let mut acc = 0.0;
    for n in 0..=spec.s {
        for alpha in multi_indices_3(n) {
            let d = u.deriv_multi(&alpha);
            let deg = d.degree().unwrap_or(0);
            let rule = tet_rule(opts.order_for(spec.p, deg, 2));
            let integral: f64 = rule
                .iter()
                .map(|(pt, w)| d.eval_f64(pt).abs().powf(spec.p) * w)
                .sum();
            acc += integral;
        }
    }
    acc.powf(1.0 / spec.p)
}

/// Sobolev norm of 2-D data; exact rational path at `p = 2`.
pub fn sobolev_norm_2d(f: &Poly2, spec: &NormSpec, opts: &QuadOpts) -> f64 {
    if spec.p == 2.0 {
        sobolev_norm_sq_exact_2d(f, spec.s, spec.domain).to_f64().sqrt()
    } else {
        sobolev_norm_2d_quadrature(f, spec, opts)
    }
}

/// Sobolev norm on the tetrahedron; exact rational path at `p = 2`.
pub fn sobolev_norm_3d(u: &Poly3, spec: &NormSpec, opts: &QuadOpts) -> f64 {
    if spec.p == 2.0 {
        sobolev_norm_sq_exact_3d(u, spec.s).to_f64().sqrt()
    } else {
        sobolev_norm_3d_quadrature(u, spec, opts)
    }
}

/// Singular-weight edge integral of the cross-face mismatch at orders
/// `(l, n)`:
///
/// ```text
/// ∫_T |∂ₓ₁ⁿ H|ᵖ dx / x₂  =  ∫_T |∂ₓ₁ⁿ G|ᵖ x₂^{p−1} dx,   H = x₂ G,
/// ```
///
/// where `H` is the `l`-fold contracted difference of the top-order
/// boundary tensors pulled back to the reference triangle, and `|·|` is the
/// Frobenius norm over the remaining slots. Zero iff the mismatch vanishes
/// identically; fails if the edge condition itself is violated.
pub fn edge_integral(
    tuple: &TraceTuple,
    i: usize,
    j: usize,
    n: u32,
    l: u32,
    p: f64,
    opts: &QuadOpts,
) -> Result<f64, NotDivisible<2>> {
    let g = edge_mismatch_factor(tuple, i, j, l, tuple.order(), n)?;
    Ok(frobenius_weighted_integral(&g, p, opts))
}

fn frobenius_weighted_integral(g: &SymTensorPoly, p: f64, opts: &QuadOpts) -> f64 {
    let entries: Vec<(f64, &Poly2)> = g
        .entries()
        .map(|(word, poly)| (SymTensorPoly::multiplicity(word) as f64, poly))
        .collect();
    let deg = entries
        .iter()
        .map(|(_, poly)| poly.degree().unwrap_or(0))
        .max()
        .unwrap_or(0);
    let rule = triangle_rule(opts.order_for(p, deg + 1, 1));
    rule.iter()
        .map(|(pt, w)| {
            let sumsq: f64 = entries
                .iter()
                .map(|(mult, poly)| {
                    let v = poly.eval_f64(pt);
                    mult * v * v
                })
                .sum();
            sumsq.powf(p / 2.0) * pt[1].powf(p - 1.0) * w
        })
        .sum()
}

/// Surrogate trace-side norm: integer-order face norms of every datum plus
/// the edge integrals at the indices where the scaling `(s−k−l−n)p = 2`
/// admits them (only `p = 2` with integer data produces any).
pub fn surrogate_trace_norm(
    tuple: &TraceTuple,
    s: u32,
    p: f64,
    opts: &QuadOpts,
) -> Result<f64, NotDivisible<2>> {
    let k = tuple.order();
    assert!(s > k, "stability experiments need s ≥ k + 1");
    let mut acc = 0.0;
    for face in 1..=4 {
        for m in 0..=k {
            let spec = NormSpec { s: s - m, p, domain: Domain::Face(face) };
            acc += sobolev_norm_2d(tuple.datum(face, m), &spec, opts).powf(p);
        }
    }
    if p == 2.0 {
        for l in 0..=k.min(s - k - 1) {
            let n = s - k - 1 - l;
            for &(i, j) in &EDGES {
                acc += edge_integral(tuple, i, j, n, l, p, opts)?;
            }
        }
    }
    Ok(acc.powf(1.0 / p))
}

/// One row of the stability table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilityRow {
    pub sample: u64,
    pub lift_norm: f64,
    pub trace_surrogate: f64,
    /// `None` when the sample drew identically zero data (0/0 excluded).
    pub ratio: Option<f64>,
}

/// Observational ratio table produced by [`stability_experiment`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilityTable {
    pub schema_version: u32,
    pub degree: u32,
    pub order: u32,
    pub s: u32,
    pub p: f64,
    pub seed: u64,
    pub rows: Vec<StabilityRow>,
}

impl StabilityTable {
    pub fn max_ratio(&self) -> Option<f64> {
        self.rows
            .iter()
            .filter_map(|r| r.ratio)
            .fold(None, |acc, r| Some(acc.map_or(r, |a: f64| a.max(r))))
    }

    /// Deterministic CSV rendering: `sample,lift_norm,trace_surrogate,ratio`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sample,lift_norm,trace_surrogate,ratio\n");
        for row in &self.rows {
            let ratio = row.ratio.map(|r| r.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{}\n",
                row.sample, row.lift_norm, row.trace_surrogate, ratio
            ));
        }
        out
    }
}

/// Lifts seeded random trace data and reports the ratio of the lift's
/// volumetric norm to the surrogate trace norm, sample by sample.
///
/// The ratios are observational: the surrogate uses integer-order face
/// norms, not the full trace-space norm, so no acceptance threshold is
/// attached to them.
#[allow(clippy::too_many_arguments)]
pub fn stability_experiment(
    degree: u32,
    k: u32,
    samples: u64,
    s: u32,
    p: f64,
    seed: u64,
    coeff_bound: u32,
    bump: &BumpSpec,
    opts: &QuadOpts,
) -> StabilityTable {
    let rows: Vec<StabilityRow> = (0..samples)
        .into_par_iter()
        .map(|idx| {
            let u: Poly3 = random_poly(degree, derive_seed(seed, idx), coeff_bound);
            let tuple = normal_trace_tuple(&u, k);
            if tuple.is_zero() {
                return StabilityRow {
                    sample: idx,
                    lift_norm: 0.0,
                    trace_surrogate: 0.0,
                    ratio: None,
                };
            }
            let lift = lift_l4(&tuple, bump).expect("traces of a polynomial are compatible");
            let lift_norm =
                sobolev_norm_3d(&lift, &NormSpec { s, p, domain: Domain::Tetrahedron }, opts);
            let trace_surrogate = surrogate_trace_norm(&tuple, s, p, opts)
                .expect("traces of a polynomial admit the edge reduction");
            let ratio = if trace_surrogate > 0.0 {
                Some(lift_norm / trace_surrogate)
            } else {
                None
            };
            StabilityRow { sample: idx, lift_norm, trace_surrogate, ratio }
        })
        .collect();
    StabilityTable {
        schema_version: 1,
        degree,
        order: k,
        s,
        p,
        seed,
        rows,
    }
}
