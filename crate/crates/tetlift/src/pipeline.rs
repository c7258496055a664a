//! Four-stage trace lifting and its randomized round-trip harness.
//!
//! Stage 1 interpolates the bottom-face data with base lifts; each later
//! stage subtracts the running lift's traces from the target face's data
//! and lifts the corrections with weighted kernels that vanish to order
//! `k + 1` on the faces already settled, so previously matched traces stay
//! matched. On compatible polynomial data every correction is divisible by
//! the required weight powers and the result has the same degree bound as
//! the data; divisibility failures abort with the offending face, edge, and
//! order instead of repairing the input.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bump::BumpSpec;
use crate::geometry::edge_for_chart_weight;
use crate::kernels::{lift_e, lift_m2, lift_r, lift_s, BumpKernel, KernelError};
use crate::poly::{Poly2, Poly3};
use crate::sample::{derive_seed, random_poly};
use crate::trace::{normal_trace_on_face, normal_trace_tuple, TraceTuple};

/// A stage correction was not divisible by its vanishing weight: the input
/// tuple is not the trace of a polynomial.
#[derive(Clone, Debug)]
pub struct IncompatibleTraces {
    pub face: usize,
    pub edge: (usize, usize),
    pub order: u32,
    pub remainder: Poly2,
}

impl fmt::Display for IncompatibleTraces {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "trace data incompatible on edge ({}, {}): order-{} correction on face {} does not vanish there",
            self.edge.0, self.edge.1, self.order, self.face
        )
    }
}

impl std::error::Error for IncompatibleTraces {}

fn stage_error(face: usize, order: u32, e: KernelError) -> IncompatibleTraces {
    IncompatibleTraces {
        face,
        edge: edge_for_chart_weight(face, e.weight),
        order,
        remainder: e.remainder,
    }
}

/// Interpolates the bottom face: `∂ₙᵐ ·|_{Γ₁} = f₁ᵐ` for `m ≤ k`.
pub fn lift_l1(tuple: &TraceTuple, bump: &BumpSpec) -> Poly3 {
    let kernel = BumpKernel::new(*bump);
    let mut u = Poly3::zero();
    for m in 0..=tuple.order() {
        let g = tuple.datum(1, m) - normal_trace_on_face(&u, 1, m);
        u += lift_e(&g, m, &kernel);
    }
    u
}

fn correct_face(
    u: &mut Poly3,
    tuple: &TraceTuple,
    face: usize,
    mut lift: impl FnMut(&Poly2, u32) -> Result<Poly3, KernelError>,
) -> Result<(), IncompatibleTraces> {
    for m in 0..=tuple.order() {
        let g = tuple.datum(face, m) - normal_trace_on_face(u, face, m);
        *u += lift(&g, m).map_err(|e| stage_error(face, m, e))?;
    }
    Ok(())
}

/// Stages 1–2: faces 1 and 2 interpolated.
pub fn lift_l2(tuple: &TraceTuple, bump: &BumpSpec) -> Result<Poly3, IncompatibleTraces> {
    let kernel = BumpKernel::new(*bump);
    let r = tuple.order() + 1;
    let mut u = lift_l1(tuple, bump);
    correct_face(&mut u, tuple, 2, |g, m| lift_m2(g, m, r, &kernel))?;
    Ok(u)
}

/// Stages 1–3: faces 1–3 interpolated.
pub fn lift_l3(tuple: &TraceTuple, bump: &BumpSpec) -> Result<Poly3, IncompatibleTraces> {
    let kernel = BumpKernel::new(*bump);
    let r = tuple.order() + 1;
    let mut u = lift_l2(tuple, bump)?;
    correct_face(&mut u, tuple, 3, |g, m| lift_s(g, m, r, &kernel, 3))?;
    Ok(u)
}

/// The full lifting: all four faces interpolated, degree preserved.
pub fn lift_l4(tuple: &TraceTuple, bump: &BumpSpec) -> Result<Poly3, IncompatibleTraces> {
    let kernel = BumpKernel::new(*bump);
    let r = tuple.order() + 1;
    let mut u = lift_l3(tuple, bump)?;
    correct_face(&mut u, tuple, 4, |g, m| lift_r(g, m, r, &kernel, 4))?;
    Ok(u)
}

/// One failed round-trip sample.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RoundtripFailure {
    pub sample: u64,
    pub reason: String,
}

/// Outcome of [`verify_roundtrip`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RoundtripReport {
    pub schema_version: u32,
    pub degree: u32,
    pub order: u32,
    pub samples: u64,
    pub passes: u64,
    pub failures: Vec<RoundtripFailure>,
    /// Largest term count seen in any lifted polynomial.
    pub max_lift_terms: usize,
    /// Largest coefficient bit size seen; tracks intermediate growth.
    pub max_coeff_bits: u64,
    pub max_sample_ms: u128,
    pub total_ms: u128,
}

impl RoundtripReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.passes == self.samples
    }
}

/// Draws seeded random polynomials of degree ≤ `degree`, takes their
/// traces to order `order`, lifts, and demands exact trace recovery and
/// degree preservation.
pub fn verify_roundtrip(
    degree: u32,
    order: u32,
    samples: u64,
    seed: u64,
    coeff_bound: u32,
    bump: &BumpSpec,
) -> RoundtripReport {
    let start = Instant::now();
    let outcomes: Vec<(Option<RoundtripFailure>, usize, u64, u128)> = (0..samples)
        .into_par_iter()
        .map(|idx| {
            let t0 = Instant::now();
            let u: Poly3 = random_poly(degree, derive_seed(seed, idx), coeff_bound);
            let tuple = normal_trace_tuple(&u, order);
            let outcome = run_sample(&u, &tuple, bump);
            let (terms, bits) = match &outcome {
                Ok(lift) => (lift.num_terms(), lift.max_coeff_bits()),
                Err(_) => (0, 0),
            };
            let failure = outcome.err().map(|reason| RoundtripFailure { sample: idx, reason });
            (failure, terms, bits, t0.elapsed().as_millis())
        })
        .collect();

    let mut report = RoundtripReport {
        schema_version: 1,
        degree,
        order,
        samples,
        passes: 0,
        failures: Vec::new(),
        max_lift_terms: 0,
        max_coeff_bits: 0,
        max_sample_ms: 0,
        total_ms: 0,
    };
    for (failure, terms, bits, ms) in outcomes {
        match failure {
            None => report.passes += 1,
            Some(f) => report.failures.push(f),
        }
        report.max_lift_terms = report.max_lift_terms.max(terms);
        report.max_coeff_bits = report.max_coeff_bits.max(bits);
        report.max_sample_ms = report.max_sample_ms.max(ms);
    }
    report.total_ms = start.elapsed().as_millis();
    report
}

fn run_sample(u: &Poly3, tuple: &TraceTuple, bump: &BumpSpec) -> Result<Poly3, String> {
    let lift = lift_l4(tuple, bump).map_err(|e| e.to_string())?;
    for face in 1..=4 {
        for m in 0..=tuple.order() {
            if normal_trace_on_face(&lift, face, m) != *tuple.datum(face, m) {
                return Err(format!("trace mismatch on face {face} at order {m}"));
            }
        }
    }
    let (du, dl) = (u.degree(), lift.degree());
    if dl > du {
        return Err(format!("degree grew from {du:?} to {dl:?}"));
    }
    Ok(lift)
}
