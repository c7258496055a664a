//! Gauss–Legendre quadrature and collapsed-coordinate rules on the
//! reference triangle and tetrahedron.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Gauss–Legendre nodes and weights on `[0, 1]`.
///
/// An `n`-point rule integrates polynomials of degree `2n − 1` exactly.
pub fn gauss_legendre_01(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    type RuleCache = Mutex<HashMap<usize, (Vec<f64>, Vec<f64>)>>;
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&n) {
        return rule.clone();
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Newton iteration on P_n from the Chebyshev initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_deriv(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_deriv(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (x + 1.0);
        weights[i] = 0.5 * w;
    }
    let rule = (nodes, weights);
    cache.lock().unwrap().insert(n, rule.clone());
    rule
}

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Tensor rule on the reference triangle via the collapsed map
/// `(u, v) ↦ (u(1−v), v)` with Jacobian `1−v`.
pub fn triangle_rule(n: usize) -> Vec<([f64; 2], f64)> {
    let (xs, ws) = gauss_legendre_01(n);
    let mut rule = Vec::with_capacity(n * n);
    for (u, wu) in xs.iter().zip(&ws) {
        for (v, wv) in xs.iter().zip(&ws) {
            rule.push(([u * (1.0 - v), *v], wu * wv * (1.0 - v)));
        }
    }
    rule
}

/// Tensor rule on the reference tetrahedron via
/// `(u, v, w) ↦ (u(1−v)(1−w), v(1−w), w)` with Jacobian `(1−v)(1−w)²`.
pub fn tet_rule(n: usize) -> Vec<([f64; 3], f64)> {
    let (xs, ws) = gauss_legendre_01(n);
    let mut rule = Vec::with_capacity(n * n * n);
    for (u, wu) in xs.iter().zip(&ws) {
        for (v, wv) in xs.iter().zip(&ws) {
            for (w, ww) in xs.iter().zip(&ws) {
                let jac = (1.0 - v) * (1.0 - w) * (1.0 - w);
                rule.push(([u * (1.0 - v) * (1.0 - w), v * (1.0 - w), *w], wu * wv * ww * jac));
            }
        }
    }
    rule
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rule_exact_on_polynomials() {
        let (xs, ws) = gauss_legendre_01(6);
        // ∫₀¹ x^k = 1/(k+1) for k ≤ 11.
        for k in 0..=11u32 {
            let val: f64 = xs.iter().zip(&ws).map(|(x, w)| x.powi(k as i32) * w).sum();
            assert!((val - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "k = {k}");
        }
    }

    #[test]
    fn triangle_area_and_volume() {
        let area: f64 = triangle_rule(4).iter().map(|(_, w)| w).sum();
        assert!((area - 0.5).abs() < 1e-14);
        let vol: f64 = tet_rule(4).iter().map(|(_, w)| w).sum();
        assert!((vol - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn tet_rule_matches_monomial_integral() {
        let rule = tet_rule(8);
        let val: f64 = rule
            .iter()
            .map(|(p, w)| p[0] * p[1].powi(2) * p[2] * w)
            .sum();
        // ∫_K x y² z = 1!·2!·1!/7! = 2/5040.
        assert!((val - 2.0 / 5040.0).abs() < 1e-15);
    }
}
