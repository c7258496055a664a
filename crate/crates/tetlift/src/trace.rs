//! Traces, boundary-derivative tensors, and edge compatibility.
//!
//! A [`TraceTuple`] stores, for each face and each order `l ≤ k`, the
//! chart-coordinate polynomial `(∂ₙˡ u) ∘ chartᵢ`. From a tuple the
//! boundary-derivative tensor of any order `m ≤ k` can be reconstructed on
//! a face: it is the unique symmetric tensor whose tangential–normal
//! components match the tangential derivatives of the data, and for tuples
//! that really are traces it coincides with the full derivative tensor
//! `D^m u` restricted to the face. Compatibility of data across an edge is
//! expressed through contractions of these tensors against the edge frame,
//! which makes every check independent of the per-face tangent frames.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::geometry::{
    self, chart_inverse, edge_chart_maps, edge_frame, face_chart, face_normal, AffineMap,
    FaceFrame, FrameSet, Vec3, EDGES,
};
use crate::poly::{NotDivisible, Poly2, Poly3, Weight};
use crate::scalar::Scalar;

/// Boundary data `(f⁰, …, f^k)` on all four faces, in chart coordinates.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "TraceTupleRepr")]
pub struct TraceTuple {
    schema_version: u32,
    k: u32,
    degree_bound: u32,
    /// `faces[i][l]` is the order-`l` datum on face `i + 1`.
    faces: [Vec<Poly2>; 4],
}

#[derive(Deserialize)]
struct TraceTupleRepr {
    #[serde(default = "default_schema_version")]
    schema_version: u32,
    k: u32,
    degree_bound: u32,
    faces: [Vec<Poly2>; 4],
}

fn default_schema_version() -> u32 {
    1
}

impl TryFrom<TraceTupleRepr> for TraceTuple {
    type Error = String;

    fn try_from(repr: TraceTupleRepr) -> Result<Self, String> {
        if repr.schema_version != 1 {
            return Err(format!("unsupported schema_version {}", repr.schema_version));
        }
        for (i, data) in repr.faces.iter().enumerate() {
            if data.len() as u32 != repr.k + 1 {
                return Err(format!(
                    "face {} carries {} data entries, expected k + 1 = {}",
                    i + 1,
                    data.len(),
                    repr.k + 1
                ));
            }
        }
        Ok(TraceTuple {
            schema_version: repr.schema_version,
            k: repr.k,
            degree_bound: repr.degree_bound,
            faces: repr.faces,
        })
    }
}

impl TraceTuple {
    pub fn new(k: u32, degree_bound: u32, faces: [Vec<Poly2>; 4]) -> Self {
        for data in &faces {
            assert_eq!(data.len() as u32, k + 1, "each face needs k+1 data entries");
        }
        TraceTuple { schema_version: 1, k, degree_bound, faces }
    }

    pub fn zero(k: u32, degree_bound: u32) -> Self {
        TraceTuple::new(
            k,
            degree_bound,
            std::array::from_fn(|_| vec![Poly2::zero(); k as usize + 1]),
        )
    }

    pub fn order(&self) -> u32 {
        self.k
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    /// Datum `f_face^l` in chart coordinates.
    pub fn datum(&self, face: usize, l: u32) -> &Poly2 {
        &self.faces[face - 1][l as usize]
    }

    pub fn datum_mut(&mut self, face: usize, l: u32) -> &mut Poly2 {
        &mut self.faces[face - 1][l as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.faces.iter().all(|d| d.iter().all(|p| p.is_zero()))
    }

    /// Entrywise difference; orders must agree.
    pub fn sub(&self, other: &TraceTuple) -> TraceTuple {
        assert_eq!(self.k, other.k);
        TraceTuple::new(
            self.k,
            self.degree_bound.max(other.degree_bound),
            std::array::from_fn(|f| {
                (0..=self.k as usize)
                    .map(|l| &self.faces[f][l] - &other.faces[f][l])
                    .collect()
            }),
        )
    }

    pub fn scale(&self, c: &Scalar) -> TraceTuple {
        TraceTuple::new(
            self.k,
            self.degree_bound,
            std::array::from_fn(|f| self.faces[f].iter().map(|p| p.scale(c)).collect()),
        )
    }
}

/// `(∂ₙᵐ u) ∘ chart_face` for the outward normal of the face.
pub fn normal_trace_on_face(u: &Poly3, face: usize, m: u32) -> Poly2 {
    let n = face_normal(face);
    let mut d = u.clone();
    for _ in 0..m {
        d = d.deriv_dir(&n);
    }
    face_chart(face).pull_poly(&d)
}

/// Traces of `u` and its first `k` outward normal derivatives.
pub fn normal_trace_tuple(u: &Poly3, k: u32) -> TraceTuple {
    let n = u.degree().unwrap_or(0);
    let faces = std::array::from_fn(|f| {
        let face = f + 1;
        let normal = face_normal(face);
        let chart = face_chart(face);
        let mut d = u.clone();
        let mut out = Vec::with_capacity(k as usize + 1);
        for l in 0..=k {
            out.push(chart.pull_poly(&d));
            if l < k {
                d = d.deriv_dir(&normal);
            }
        }
        out
    });
    TraceTuple::new(k, n, faces)
}

/// Symmetric tensor with polynomial entries, stored on sorted index words
/// over `{0, 1, 2}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymTensorPoly {
    order: u32,
    entries: BTreeMap<Vec<u8>, Poly2>,
}

impl SymTensorPoly {
    pub fn from_fn(order: u32, mut f: impl FnMut(&[u8]) -> Poly2) -> Self {
        let mut entries = BTreeMap::new();
        for word in sorted_words(order) {
            let val = f(&word);
            entries.insert(word, val);
        }
        SymTensorPoly { order, entries }
    }

    pub fn zero(order: u32) -> Self {
        SymTensorPoly::from_fn(order, |_| Poly2::zero())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Entry lookup; any permutation of the indices returns the same value.
    pub fn get(&self, indices: &[u8]) -> &Poly2 {
        assert_eq!(indices.len() as u32, self.order);
        let mut key = indices.to_vec();
        key.sort_unstable();
        &self.entries[&key]
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u8>, &Poly2)> {
        self.entries.iter()
    }

    pub fn map(&self, mut f: impl FnMut(&Poly2) -> Poly2) -> Self {
        SymTensorPoly {
            order: self.order,
            entries: self.entries.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
        }
    }

    pub fn sub(&self, other: &SymTensorPoly) -> SymTensorPoly {
        assert_eq!(self.order, other.order);
        SymTensorPoly {
            order: self.order,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), v - &other.entries[k]))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|p| p.is_zero())
    }

    /// Contracts the first slot with `v`.
    pub fn contract(&self, v: &Vec3) -> SymTensorPoly {
        assert!(self.order >= 1);
        SymTensorPoly::from_fn(self.order - 1, |word| {
            let mut acc = Poly2::zero();
            for i in 0..3u8 {
                if v[i as usize].is_zero() {
                    continue;
                }
                let mut key = Vec::with_capacity(word.len() + 1);
                key.push(i);
                key.extend_from_slice(word);
                acc += self.get(&key).scale(&v[i as usize]);
            }
            acc
        })
    }

    pub fn contract_pow(&self, v: &Vec3, l: u32) -> SymTensorPoly {
        let mut out = self.clone();
        for _ in 0..l {
            out = out.contract(v);
        }
        out
    }

    /// Number of distinct permutations of a sorted index word; the weight
    /// of the stored entry in full-tensor sums.
    pub fn multiplicity(word: &[u8]) -> u64 {
        let mut counts = [0u64; 3];
        for &i in word {
            counts[i as usize] += 1;
        }
        let fact = |n: u64| (1..=n).product::<u64>().max(1);
        fact(word.len() as u64) / (fact(counts[0]) * fact(counts[1]) * fact(counts[2]))
    }
}

fn sorted_words(order: u32) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut word = vec![0u8; order as usize];
    loop {
        out.push(word.clone());
        // Next nondecreasing word over {0,1,2}.
        let mut pos = None;
        for i in (0..word.len()).rev() {
            if word[i] < 2 {
                pos = Some(i);
                break;
            }
        }
        match pos {
            None => break,
            Some(i) => {
                let v = word[i] + 1;
                for w in word.iter_mut().skip(i) {
                    *w = v;
                }
            }
        }
        if word.is_empty() {
            break;
        }
    }
    if order == 0 {
        out.truncate(1);
    }
    out
}

/// Derivative of a chart polynomial along an ambient vector tangent to the
/// face.
pub fn chart_dir_deriv(face: usize, g: &Poly2, v: &Vec3) -> Poly2 {
    let t = geometry::tangent_in_chart(face, v);
    g.partial_deriv(0).scale(&t[0]) + g.partial_deriv(1).scale(&t[1])
}

/// Boundary-derivative tensor of order `m` on a face, from the trace data.
///
/// Entry `(j₁…j_m)` is `Σ_α ∂^{α₁+α₂} f^{α₃} / ∂τ₁^{α₁} ∂τ₂^{α₂}` times the
/// symmetrized products of the frame vectors with multiplicities `α`; the
/// products are read off a generating polynomial in three formal variables.
pub fn boundary_derivative_tensor_with_frame(
    tuple: &TraceTuple,
    frame: &FaceFrame,
    m: u32,
) -> SymTensorPoly {
    assert!(m <= tuple.order(), "tensor order exceeds trace order");
    let face = frame.face;
    // Tangential-derivative table d[(a1, a2)][l] = ∂τ₁^{a1} ∂τ₂^{a2} f^l.
    let mut dtau: BTreeMap<(u32, u32), Vec<Poly2>> = BTreeMap::new();
    let base: Vec<Poly2> = (0..=m).map(|l| tuple.datum(face, l).clone()).collect();
    dtau.insert((0, 0), base);
    for total in 1..=m {
        for a1 in 0..=total {
            let a2 = total - a1;
            let (prev, v) = if a1 > 0 {
                ((a1 - 1, a2), &frame.tau1)
            } else {
                ((a1, a2 - 1), &frame.tau2)
            };
            let prev_row = dtau[&prev].clone();
            let row: Vec<Poly2> = prev_row
                .iter()
                .map(|g| chart_dir_deriv(face, g, v))
                .collect();
            dtau.insert((a1, a2), row);
        }
    }
    SymTensorPoly::from_fn(m, |word| {
        // Coefficient of (a1, a2) in Π_t (τ₁[j_t]·A + τ₂[j_t]·B + n[j_t]·C).
        let mut gen: BTreeMap<(u32, u32), Scalar> = BTreeMap::new();
        gen.insert((0, 0), Scalar::from_int(1));
        for &j in word {
            let mut next: BTreeMap<(u32, u32), Scalar> = BTreeMap::new();
            for ((a1, a2), c) in &gen {
                let mut bump = |key: (u32, u32), v: &Scalar| {
                    if v.is_zero() {
                        return;
                    }
                    let entry = next.entry(key).or_insert_with(Scalar::zero);
                    *entry += c * v;
                };
                bump((a1 + 1, *a2), &frame.tau1[j as usize]);
                bump((*a1, a2 + 1), &frame.tau2[j as usize]);
                bump((*a1, *a2), &frame.normal[j as usize]);
            }
            gen = next;
        }
        let mut acc = Poly2::zero();
        for ((a1, a2), c) in &gen {
            if a1 + a2 > m {
                continue;
            }
            let l = m - a1 - a2;
            acc += dtau[&(*a1, *a2)][l as usize].scale(c);
        }
        acc
    })
}

pub fn boundary_derivative_tensor(tuple: &TraceTuple, face: usize, m: u32) -> SymTensorPoly {
    boundary_derivative_tensor_with_frame(tuple, &geometry::face_frame(face), m)
}

/// The two sides of the order-`(l, m)` edge condition on `γᵢⱼ`, pulled back
/// to the reference triangle, and their difference.
///
/// The left side is `b_ji^{⊗l} · ∂ˡ 𝒯ᵢ / ∂b_ij^l ∘ F_ij` for the order-`m`
/// boundary tensor `𝒯ᵢ` of face `i`; the right side swaps the roles of the
/// faces. Both parametrizations agree on `x₂ = 0`, so compatible data make
/// the difference vanish there.
pub fn edge_mismatch_tensor_with_frames(
    tuple: &TraceTuple,
    frames: &FrameSet,
    i: usize,
    j: usize,
    l: u32,
    m: u32,
) -> SymTensorPoly {
    assert!(i < j, "edges are indexed with i < j");
    assert!(l <= m, "cannot contract {l} slots of an order-{m} tensor");
    let ef = edge_frame(i, j);
    let (map_i, map_j) = edge_chart_maps(i, j);
    let side = |face: usize, deriv_dir: &Vec3, contract_dir: &Vec3, map: &AffineMap<2, 2>| {
        let mut tensor = boundary_derivative_tensor_with_frame(tuple, frames.frame(face), m);
        for _ in 0..l {
            tensor = tensor.map(|g| chart_dir_deriv(face, g, deriv_dir));
        }
        tensor.contract_pow(contract_dir, l).map(|g| map.pull_poly(g))
    };
    let lhs = side(i, &ef.b_left, &ef.b_right, &map_i);
    let rhs = side(j, &ef.b_right, &ef.b_left, &map_j);
    lhs.sub(&rhs)
}

fn restricts_to_zero_on_edge(t: &SymTensorPoly) -> bool {
    let restrict = AffineMap::<1, 2>::new(
        [[Scalar::from_int(1)], [Scalar::from_int(0)]],
        [Scalar::from_int(0), Scalar::from_int(0)],
    );
    t.entries().all(|(_, p)| restrict.pull_poly(p).is_zero())
}

/// A violated trace-space condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompatViolation {
    /// `deg f_face^l` exceeds `N − l`.
    DegreeBound { face: usize, order: u32, degree: u32 },
    /// Order-`m` boundary tensors of the two faces differ on the edge.
    EdgeTensorMismatch { faces: (usize, usize), order: u32 },
    /// The `l`-fold contracted derivative condition fails on the edge.
    EdgeContractionMismatch { faces: (usize, usize), contraction: u32 },
}

impl fmt::Display for CompatViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompatViolation::DegreeBound { face, order, degree } => write!(
                f,
                "face {face}: order-{order} datum has degree {degree} above the bound"
            ),
            CompatViolation::EdgeTensorMismatch { faces, order } => write!(
                f,
                "edge ({}, {}): order-{order} boundary tensors disagree",
                faces.0, faces.1
            ),
            CompatViolation::EdgeContractionMismatch { faces, contraction } => write!(
                f,
                "edge ({}, {}): contracted derivative condition fails at l = {contraction}",
                faces.0, faces.1
            ),
        }
    }
}

/// Report from [`check_polynomial_compatibility`]; empty iff the tuple is a
/// valid polynomial trace candidate.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CompatReport {
    pub schema_version: u32,
    pub violations: Vec<CompatViolation>,
}

impl CompatReport {
    pub fn is_compatible(&self) -> bool {
        self.violations.is_empty()
    }

    /// Violations touching a given edge.
    pub fn edge_flagged(&self, i: usize, j: usize) -> bool {
        self.violations.iter().any(|v| match v {
            CompatViolation::EdgeTensorMismatch { faces, .. }
            | CompatViolation::EdgeContractionMismatch { faces, .. } => *faces == (i, j),
            _ => false,
        })
    }
}

/// Checks the polynomial trace conditions: per-face degree bounds, equality
/// of boundary tensors across every edge at each order `m ≤ k`, and the
/// contracted top-order conditions for `l ≤ k`.
pub fn check_polynomial_compatibility_with_frames(
    tuple: &TraceTuple,
    frames: &FrameSet,
) -> CompatReport {
    let mut violations = Vec::new();
    let k = tuple.order();
    let n = tuple.degree_bound();
    for face in 1..=4 {
        for l in 0..=k {
            if let Some(d) = tuple.datum(face, l).degree() {
                if l + d > n {
                    violations.push(CompatViolation::DegreeBound { face, order: l, degree: d });
                }
            }
        }
    }
    for &(i, j) in &EDGES {
        for m in 0..=k {
            let h = edge_mismatch_tensor_with_frames(tuple, frames, i, j, 0, m);
            if !restricts_to_zero_on_edge(&h) {
                violations.push(CompatViolation::EdgeTensorMismatch { faces: (i, j), order: m });
            }
        }
        for l in 1..=k {
            let h = edge_mismatch_tensor_with_frames(tuple, frames, i, j, l, k);
            if !restricts_to_zero_on_edge(&h) {
                violations.push(CompatViolation::EdgeContractionMismatch {
                    faces: (i, j),
                    contraction: l,
                });
            }
        }
    }
    CompatReport { schema_version: 1, violations }
}

pub fn check_polynomial_compatibility(tuple: &TraceTuple) -> CompatReport {
    check_polynomial_compatibility_with_frames(tuple, &FrameSet::standard())
}

/// Factors the pulled-back edge mismatch as `x₂ · G` and returns `G`.
///
/// `n` tangential derivatives (`∂ₓ₁ⁿ` after pullback) are applied to the
/// mismatch first. Fails with the nonzero remainder when the order-`(l, m)`
/// condition does not hold on the edge, i.e. when the data are not a
/// polynomial trace.
pub fn edge_mismatch_factor(
    tuple: &TraceTuple,
    i: usize,
    j: usize,
    l: u32,
    m: u32,
    n: u32,
) -> Result<SymTensorPoly, NotDivisible<2>> {
    let h = edge_mismatch_tensor_with_frames(tuple, &FrameSet::standard(), i, j, l, m);
    let mut out = BTreeMap::new();
    for (word, entry) in h.entries() {
        let dn = entry.deriv_multi(&[n, 0]);
        out.insert(word.clone(), dn.exact_divide(Weight::Var(1), 1)?);
    }
    Ok(SymTensorPoly { order: h.order(), entries: out })
}

/// Ambient-indexed restriction of `D^m u` to a face, in chart coordinates;
/// the independent reference for the boundary tensor reconstruction.
pub fn derivative_tensor_on_face(u: &Poly3, face: usize, m: u32) -> SymTensorPoly {
    let chart = face_chart(face);
    SymTensorPoly::from_fn(m, |word| {
        let mut d = u.clone();
        for &axis in word {
            d = d.partial_deriv(axis as usize);
        }
        chart.pull_poly(&d)
    })
}

/// Chart-coordinate datum of a face function given in ambient form.
pub fn to_chart(face: usize, ambient: &Poly3) -> Poly2 {
    face_chart(face).pull_poly(ambient)
}

/// Inverse of [`to_chart`] up to the face plane: extends chart data to the
/// ambient polynomial constant in the normal direction of the chart.
pub fn from_chart(face: usize, chart_poly: &Poly2) -> Poly3 {
    chart_inverse(face).pull_poly(chart_poly)
}
