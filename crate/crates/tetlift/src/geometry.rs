//! Reference tetrahedron combinatorics: vertices, faces, edges, charts,
//! frames, and the affine maps that tie them together.
//!
//! The reference tetrahedron `K` has vertices `v₁ = e₃`, `v₂ = e₂`,
//! `v₃ = e₁`, `v₄ = 0`; face `Γᵢ` is opposite vertex `vᵢ`, so
//! `Γ₁ = {z = 0}`, `Γ₂ = {y = 0}`, `Γ₃ = {x = 0}`, and
//! `Γ₄ = {x + y + z = 1}`. Each face carries a fixed chart from the
//! reference triangle `T` and an orthonormal tangent frame; all frame data
//! stay inside Q(√3).

use num_traits::Zero;

use crate::poly::{Poly, Poly2, Poly3, Weight};
use crate::scalar::Scalar;

pub type Vec3 = [Scalar; 3];

/// Affine map `x ↦ A·x + c` from `FROM`-space to `TO`-space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineMap<const FROM: usize, const TO: usize> {
    pub linear: [[Scalar; FROM]; TO],
    pub offset: [Scalar; TO],
}

impl<const FROM: usize, const TO: usize> AffineMap<FROM, TO> {
    pub fn new(linear: [[Scalar; FROM]; TO], offset: [Scalar; TO]) -> Self {
        AffineMap { linear, offset }
    }

    pub fn apply(&self, x: &[Scalar; FROM]) -> [Scalar; TO] {
        std::array::from_fn(|t| {
            let mut acc = self.offset[t].clone();
            for (a, v) in self.linear[t].iter().zip(x) {
                acc += a * v;
            }
            acc
        })
    }

    /// Row polynomials: degree-one components of the map.
    pub fn components(&self) -> [Poly<FROM>; TO] {
        std::array::from_fn(|t| {
            let mut p = Poly::constant(self.offset[t].clone());
            for f in 0..FROM {
                p.add_term(
                    {
                        let mut e = [0u32; FROM];
                        e[f] = 1;
                        e
                    },
                    self.linear[t][f].clone(),
                );
            }
            p
        })
    }

    /// Pullback `p ∘ self`.
    pub fn pull_poly(&self, p: &Poly<TO>) -> Poly<FROM> {
        p.compose(&self.components())
    }

    /// Composition `self ∘ inner`.
    pub fn compose<const IN: usize>(&self, inner: &AffineMap<IN, FROM>) -> AffineMap<IN, TO> {
        let linear = std::array::from_fn(|t| {
            std::array::from_fn(|i| {
                let mut acc = Scalar::zero();
                for f in 0..FROM {
                    acc += &self.linear[t][f] * &inner.linear[f][i];
                }
                acc
            })
        });
        let offset = std::array::from_fn(|t| {
            let mut acc = self.offset[t].clone();
            for f in 0..FROM {
                acc += &self.linear[t][f] * &inner.offset[f];
            }
            acc
        });
        AffineMap { linear, offset }
    }
}

impl<const D: usize> AffineMap<D, D> {
    pub fn identity() -> Self {
        AffineMap {
            linear: std::array::from_fn(|i| {
                std::array::from_fn(|j| if i == j { Scalar::from_int(1) } else { Scalar::zero() })
            }),
            offset: std::array::from_fn(|_| Scalar::zero()),
        }
    }
}

pub fn dot3(a: &Vec3, b: &Vec3) -> Scalar {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

pub fn cross3(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub fn sub3(a: &Vec3, b: &Vec3) -> Vec3 {
    std::array::from_fn(|i| &a[i] - &b[i])
}

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn mixed(rat: (i64, i64), sqrt3: (i64, i64)) -> Scalar {
    Scalar::new(
        num_rational::BigRational::new(rat.0.into(), rat.1.into()),
        num_rational::BigRational::new(sqrt3.0.into(), sqrt3.1.into()),
    )
}

/// Vertex `vᵢ`, `i ∈ 1..=4`.
pub fn vertex(i: usize) -> Vec3 {
    match i {
        1 => [s(0), s(0), s(1)],
        2 => [s(0), s(1), s(0)],
        3 => [s(1), s(0), s(0)],
        4 => [s(0), s(0), s(0)],
        _ => panic!("vertex index {i} out of range 1..=4"),
    }
}

/// Vertex ids of face `Γᵢ` (all vertices except `vᵢ`), ascending.
pub fn face_vertex_ids(face: usize) -> [usize; 3] {
    assert!((1..=4).contains(&face), "face index {face} out of range");
    let mut ids = [0usize; 3];
    let mut k = 0;
    for v in 1..=4 {
        if v != face {
            ids[k] = v;
            k += 1;
        }
    }
    ids
}

/// Affine form vanishing on `Γᵢ`, positive inside `K`.
pub fn face_plane(face: usize) -> Poly3 {
    match face {
        1 => Poly3::var(2),
        2 => Poly3::var(1),
        3 => Poly3::var(0),
        4 => Poly3::one_minus_sum(),
        _ => panic!("face index {face} out of range"),
    }
}

/// Outward unit normal of `Γᵢ`.
pub fn face_normal(face: usize) -> Vec3 {
    match face {
        1 => [s(0), s(0), s(-1)],
        2 => [s(0), s(-1), s(0)],
        3 => [s(-1), s(0), s(0)],
        4 => {
            let c = Scalar::sqrt3_ratio(1, 3);
            [c.clone(), c.clone(), c]
        }
        _ => panic!("face index {face} out of range"),
    }
}

/// Chart `T → Γᵢ ⊂ R³`.
pub fn face_chart(face: usize) -> AffineMap<2, 3> {
    let z = Scalar::zero;
    match face {
        1 => AffineMap::new([[s(1), z()], [z(), s(1)], [z(), z()]], [z(), z(), z()]),
        2 => AffineMap::new([[s(1), z()], [z(), z()], [z(), s(1)]], [z(), z(), z()]),
        3 => AffineMap::new([[z(), z()], [z(), s(1)], [s(1), z()]], [z(), z(), z()]),
        4 => AffineMap::new(
            [[s(1), z()], [z(), s(1)], [s(-1), s(-1)]],
            [z(), z(), s(1)],
        ),
        _ => panic!("face index {face} out of range"),
    }
}

/// Left inverse of [`face_chart`] on the face plane.
pub fn chart_inverse(face: usize) -> AffineMap<3, 2> {
    let z = Scalar::zero;
    match face {
        1 | 4 => AffineMap::new([[s(1), z(), z()], [z(), s(1), z()]], [z(), z()]),
        2 => AffineMap::new([[s(1), z(), z()], [z(), z(), s(1)]], [z(), z()]),
        3 => AffineMap::new([[z(), z(), s(1)], [z(), s(1), z()]], [z(), z()]),
        _ => panic!("face index {face} out of range"),
    }
}

/// Self-map of `K` carrying the single-face lift based at `Γ₁` to the lift
/// based at `Γᵢ`. Identity for `i = 1`.
pub fn volumetric_map(face: usize) -> AffineMap<3, 3> {
    let z = Scalar::zero;
    match face {
        1 => AffineMap::identity(),
        2 => AffineMap::new(
            [[s(1), z(), z()], [z(), z(), s(1)], [z(), s(1), z()]],
            [z(), z(), z()],
        ),
        3 => AffineMap::new(
            [[z(), z(), s(1)], [z(), s(1), z()], [s(1), z(), z()]],
            [z(), z(), z()],
        ),
        4 => AffineMap::new(
            [[s(1), z(), z()], [z(), s(1), z()], [s(-1), s(-1), s(-1)]],
            [z(), z(), s(1)],
        ),
        _ => panic!("face index {face} out of range"),
    }
}

/// Orthonormal tangent pair and outward normal on a face.
#[derive(Clone, Debug)]
pub struct FaceFrame {
    pub face: usize,
    pub tau1: Vec3,
    pub tau2: Vec3,
    pub normal: Vec3,
}

/// Standard frame. Faces 1–3 take `tau1` along the lowest-index edge of the
/// face and `tau2 = n × tau1`. Face 4 has no unit edge direction inside
/// Q(√3) (its edges have length √2), so an explicit exact orthonormal
/// tangent pair is used instead.
pub fn face_frame(face: usize) -> FaceFrame {
    let (tau1, tau2) = match face {
        1 => ([s(1), s(0), s(0)], [s(0), s(-1), s(0)]),
        2 => ([s(1), s(0), s(0)], [s(0), s(0), s(1)]),
        3 => ([s(0), s(1), s(0)], [s(0), s(0), s(-1)]),
        4 => (
            // (√3/3, −(3+√3)/6, (3−√3)/6) and its image under n × ·.
            [
                Scalar::sqrt3_ratio(1, 3),
                mixed((-1, 2), (-1, 6)),
                mixed((1, 2), (-1, 6)),
            ],
            [
                Scalar::sqrt3_ratio(1, 3),
                mixed((1, 2), (-1, 6)),
                mixed((-1, 2), (-1, 6)),
            ],
        ),
        _ => panic!("face index {face} out of range"),
    };
    FaceFrame { face, tau1, tau2, normal: face_normal(face) }
}

/// A rotated tangent frame (`tau1, tau2 ↦ tau2, −tau1`) used to confirm
/// that compatibility verdicts do not depend on the frame choice.
pub fn face_frame_rotated(face: usize) -> FaceFrame {
    let f = face_frame(face);
    FaceFrame {
        face,
        tau1: f.tau2.clone(),
        tau2: std::array::from_fn(|i| -&f.tau1[i]),
        normal: f.normal,
    }
}

/// One frame per face.
#[derive(Clone, Debug)]
pub struct FrameSet {
    frames: [FaceFrame; 4],
}

impl FrameSet {
    pub fn standard() -> Self {
        FrameSet { frames: std::array::from_fn(|i| face_frame(i + 1)) }
    }

    pub fn rotated() -> Self {
        FrameSet { frames: std::array::from_fn(|i| face_frame_rotated(i + 1)) }
    }

    pub fn frame(&self, face: usize) -> &FaceFrame {
        &self.frames[face - 1]
    }
}

/// All six edges as face pairs `(i, j)`, `i < j`.
pub const EDGES: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

/// The three edges bounding a face.
pub fn face_edges(face: usize) -> [(usize, usize); 3] {
    let mut out = [(0, 0); 3];
    let mut k = 0;
    for &(i, j) in &EDGES {
        if i == face || j == face {
            out[k] = (i, j);
            k += 1;
        }
    }
    out
}

/// Endpoints `(a, b)` of the edge `γᵢⱼ = Γᵢ ∩ Γⱼ`, ordered so that `a`
/// precedes `b` lexicographically by coordinates.
pub fn edge_vertices(i: usize, j: usize) -> (Vec3, Vec3) {
    assert!(i < j, "edges are indexed with i < j");
    let ids: Vec<usize> = (1..=4).filter(|&v| v != i && v != j).collect();
    let p = vertex(ids[0]);
    let q = vertex(ids[1]);
    if p <= q {
        (p, q)
    } else {
        (q, p)
    }
}

/// Tangent direction and in-face conormals of an edge.
///
/// `tangent = b − a` is left unnormalized: the diagonal edges have length
/// √2, which has no unit multiple in Q(√3), and every compatibility
/// condition built from these vectors is invariant under scaling them.
#[derive(Clone, Debug)]
pub struct EdgeFrame {
    pub faces: (usize, usize),
    pub tangent: Vec3,
    /// `tangent × nᵢ`, tangent to face `i`, normal to the edge.
    pub b_left: Vec3,
    /// `tangent × nⱼ`, tangent to face `j`, normal to the edge.
    pub b_right: Vec3,
}

pub fn edge_frame(i: usize, j: usize) -> EdgeFrame {
    let (a, b) = edge_vertices(i, j);
    let t = sub3(&b, &a);
    EdgeFrame {
        faces: (i, j),
        b_left: cross3(&t, &face_normal(i)),
        b_right: cross3(&t, &face_normal(j)),
        tangent: t,
    }
}

/// Parametrizations `F_ij, F_ji : T → Γᵢ, Γⱼ` agreeing on the shared edge:
/// `(0,0) ↦ a`, `(1,0) ↦ b`, `(0,1) ↦` the off-edge vertex of the face.
pub fn edge_pair_maps(i: usize, j: usize) -> (AffineMap<2, 3>, AffineMap<2, 3>) {
    let (a, b) = edge_vertices(i, j);
    // The off-edge vertex of face i is v_j and vice versa.
    let ci = vertex(j);
    let cj = vertex(i);
    let make = |c: &Vec3| {
        let col1 = sub3(&b, &a);
        let col2 = sub3(c, &a);
        AffineMap::new(
            std::array::from_fn(|t| [col1[t].clone(), col2[t].clone()]),
            a.clone(),
        )
    };
    (make(&ci), make(&cj))
}

/// Edge pulled back to chart coordinates: `chart⁻¹ ∘ F`, for both faces.
pub fn edge_chart_maps(i: usize, j: usize) -> (AffineMap<2, 2>, AffineMap<2, 2>) {
    let (fi, fj) = edge_pair_maps(i, j);
    (
        chart_inverse(i).compose(&fi),
        chart_inverse(j).compose(&fj),
    )
}

/// The chart-coordinate weight of face `face` vanishing on the given edge.
pub fn chart_edge_weight(face: usize, edge: (usize, usize)) -> Weight {
    let (i, j) = edge;
    assert!(i == face || j == face, "edge {:?} does not bound face {}", edge, face);
    let other = if i == face { j } else { i };
    let pulled = face_chart(face).pull_poly(&face_plane(other));
    for w in [Weight::Var(0), Weight::Var(1), Weight::OneMinusSum] {
        if pulled == Poly2::weight_poly(w) {
            return w;
        }
    }
    unreachable!("face plane does not pull back to a simplex weight");
}

/// Edge of `face` on which the given chart weight vanishes.
pub fn edge_for_chart_weight(face: usize, w: Weight) -> (usize, usize) {
    for edge in face_edges(face) {
        if chart_edge_weight(face, edge) == w {
            return edge;
        }
    }
    unreachable!("no edge of face {} matches weight {}", face, w);
}

/// Chart coordinates of an ambient vector tangent to the face.
pub fn tangent_in_chart(face: usize, v: &Vec3) -> [Scalar; 2] {
    let chart = face_chart(face);
    // Solve (AᵀA) t = Aᵀ v exactly (2×2 Cramer).
    let col = |k: usize| -> Vec3 { std::array::from_fn(|r| chart.linear[r][k].clone()) };
    let a0 = col(0);
    let a1 = col(1);
    let g00 = dot3(&a0, &a0);
    let g01 = dot3(&a0, &a1);
    let g11 = dot3(&a1, &a1);
    let r0 = dot3(&a0, v);
    let r1 = dot3(&a1, v);
    let det = &g00 * &g11 - &g01 * &g01;
    [
        (&r0 * &g11 - &g01 * &r1) / &det,
        (&g00 * &r1 - &r0 * &g01) / &det,
    ]
}
