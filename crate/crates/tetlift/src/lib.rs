//! Exact trace lifting on the reference tetrahedron.
//!
//! Given boundary data `(f⁰, …, f^k)` that are the traces of a degree-`N`
//! polynomial and its first `k` outward normal derivatives, the library
//! produces a degree-`N` polynomial on the tetrahedron whose normal
//! derivative traces reproduce the data on all four faces, exactly. All
//! pipeline arithmetic happens in Q(√3), the smallest field containing the
//! oblique face's unit normal, so every identity the construction promises
//! can be tested with zero tolerance.
//!
//! Module map:
//! - [`scalar`], [`poly`]: the exact arithmetic substrate;
//! - [`geometry`]: reference-tetrahedron charts, frames, and edge maps;
//! - [`bump`]: polynomial bump moments driving the convolution lifts;
//! - [`trace`]: trace tuples, boundary-derivative tensors, compatibility;
//! - [`kernels`]: the single-face lifting operators;
//! - [`pipeline`]: the four-stage lifting and its randomized harness;
//! - [`hardy`]: averaging operator, partial fractions, edge kernel;
//! - [`quad`], [`norms`]: quadrature and the empirical norm laboratory;
//! - [`sample`]: seeded random polynomial generation.

pub mod bump;
pub mod geometry;
pub mod hardy;
pub mod kernels;
pub mod norms;
pub mod pipeline;
pub mod poly;
pub mod quad;
pub mod sample;
pub mod scalar;
pub mod trace;

pub use bump::BumpSpec;
pub use poly::{NotDivisible, Poly, Poly1, Poly2, Poly3, Weight};
pub use scalar::Scalar;
pub use trace::TraceTuple;
