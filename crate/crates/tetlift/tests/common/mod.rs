//! Shared oracles for the integration suites: adaptive 2-D quadrature over
//! the reference triangle, independent of the library's closed forms and
//! Gauss rules.

/// 9-point tensor Simpson estimate on a rectangle.
#[allow(clippy::needless_range_loop)]
fn simpson2d(f: &impl Fn(f64, f64) -> f64, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let xm = 0.5 * (x0 + x1);
    let ym = 0.5 * (y0 + y1);
    let w = |i: usize| [1.0, 4.0, 1.0][i];
    let xs = [x0, xm, x1];
    let ys = [y0, ym, y1];
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            acc += w(i) * w(j) * f(xs[i], ys[j]);
        }
    }
    acc * (x1 - x0) * (y1 - y0) / 36.0
}

#[allow(clippy::too_many_arguments)]
fn adaptive_rect(
    f: &impl Fn(f64, f64) -> f64,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let xm = 0.5 * (x0 + x1);
    let ym = 0.5 * (y0 + y1);
    let parts = [
        (x0, xm, y0, ym),
        (xm, x1, y0, ym),
        (x0, xm, ym, y1),
        (xm, x1, ym, y1),
    ];
    let estimates: Vec<f64> = parts
        .iter()
        .map(|&(a, b, c, d)| simpson2d(f, a, b, c, d))
        .collect();
    let refined: f64 = estimates.iter().sum();
    if depth == 0 || (refined - whole).abs() <= 15.0 * tol {
        return refined + (refined - whole) / 15.0;
    }
    parts
        .iter()
        .zip(&estimates)
        .map(|(&(a, b, c, d), &est)| adaptive_rect(f, a, b, c, d, est, tol / 4.0, depth - 1))
        .sum()
}

/// Adaptive integral of `g` over the reference triangle through the
/// collapsed map `(u, v) ↦ (u(1−v), v)`.
pub fn integrate_triangle_adaptive(g: impl Fn(f64, f64) -> f64, tol: f64) -> f64 {
    let f = move |u: f64, v: f64| g(u * (1.0 - v), v) * (1.0 - v);
    let whole = simpson2d(&f, 0.0, 1.0, 0.0, 1.0);
    adaptive_rect(&f, 0.0, 1.0, 0.0, 1.0, whole, tol, 22)
}

/// Quadrature oracle for the edge kernel: the defining integral
/// `∫_T x₂ / ((x₁−y₁)² + (x₂+y₂)²)^{3/2} dy`.
pub fn edge_kernel_quadrature(x1: f64, x2: f64, tol: f64) -> f64 {
    integrate_triangle_adaptive(
        move |y1, y2| {
            let dx = x1 - y1;
            let dy = x2 + y2;
            x2 / (dx * dx + dy * dy).powf(1.5)
        },
        tol,
    )
}
