//! Quadrature rules: Gauss–Legendre (adaptive, for smooth path integrals) and
//! tanh–sinh on [0,1] (for algebraic endpoint singularities at branch points).

use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Gauss–Legendre nodes and weights on [−1, 1] computed by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn gl20() -> &'static (Vec<f64>, Vec<f64>) {
    static R: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(20))
}

fn gl_fixed<F: Fn(C64) -> Vec<C64>>(f: &F, a: C64, b: C64, dim: usize) -> Vec<C64> {
    let (x, w) = gl20();
    let half = (b - a) * 0.5;
    let mid = (a + b) * 0.5;
    let mut acc = vec![C64::new(0.0, 0.0); dim];
    for (xi, wi) in x.iter().zip(w) {
        let v = f(mid + half * *xi);
        for k in 0..dim {
            acc[k] += v[k] * *wi;
        }
    }
    acc.iter().map(|c| c * half).collect()
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Adaptive Gauss–Legendre integral of a vector-valued f along the straight
/// segment a→b. Intervals are bisected until two-level agreement within
/// `tol` times the L1 magnitude of the integrand; the subdivision budget is bounded.
pub fn adaptive_segment<F: Fn(C64) -> Vec<C64>>(f: &F, a: C64, b: C64, dim: usize, tol: f64) -> Vec<C64> {
    let whole = gl_fixed(f, a, b, dim);
    let scale = magnitude(f, a, b).max(1e-300);
    let abs_tol = tol * scale;
    let mut acc = vec![C64::new(0.0, 0.0); dim];
    let mut stack = vec![(a, b, whole, 0usize)];
    let mut budget = 20_000usize;
    while let Some((a, b, whole, depth)) = stack.pop() {
        let m = (a + b) * 0.5;
        let left = gl_fixed(f, a, m, dim);
        let right = gl_fixed(f, m, b, dim);
        let sum: Vec<C64> = left.iter().zip(&right).map(|(x, y)| x + y).collect();
        let diff: Vec<C64> = sum.iter().zip(&whole).map(|(x, y)| x - y).collect();
        budget = budget.saturating_sub(1);
        if norm(&diff) <= abs_tol || depth > 50 || budget == 0 {
            for k in 0..dim {
                acc[k] += sum[k];
            }
            continue;
        }
        stack.push((a, m, left, depth + 1));
        stack.push((m, b, right, depth + 1));
    }
    acc
}

fn magnitude<F: Fn(C64) -> Vec<C64>>(f: &F, a: C64, b: C64) -> f64 {
    let (x, w) = gl20();
    let half = (b - a) * 0.5;
    let mid = (a + b) * 0.5;
    x.iter().zip(w).map(|(xi, wi)| norm(&f(mid + half * *xi)) * wi).sum::<f64>() * half.norm()
}

/// Adaptive integral along a polyline.
pub fn polyline<F: Fn(C64) -> Vec<C64>>(f: &F, pts: &[C64], dim: usize, tol: f64) -> Vec<C64> {
    let mut acc = vec![C64::new(0.0, 0.0); dim];
    for w in pts.windows(2) {
        let v = adaptive_segment(f, w[0], w[1], dim, tol);
        for k in 0..dim {
            acc[k] += v[k];
        }
    }
    acc
}

/// A tanh–sinh node on [0,1]: position t, complement 1−t (both to full
/// relative precision) and weight.
#[derive(Debug, Clone, Copy)]
pub struct TsNode {
    pub t: f64,
    pub tc: f64,
    pub w: f64,
}

/// Tanh–sinh nodes with step h = 2^{−level}.
pub fn tanh_sinh_nodes(level: u32) -> Vec<TsNode> {
    let h = 0.5f64.powi(level as i32);
    let kmax = (5.5 / h).ceil() as i64;
    let mut out = Vec::new();
    for k in -kmax..=kmax {
        let x = k as f64 * h;
        let s = 0.5 * PI * x.sinh();
        if s.abs() > 340.0 {
            continue;
        }
        let t = 1.0 / (1.0 + (-2.0 * s).exp());
        let tc = 1.0 / (1.0 + (2.0 * s).exp());
        let w = h * PI * x.cosh() * t * tc;
        if w == 0.0 {
            continue;
        }
        out.push(TsNode { t, tc, w });
    }
    out
}

/// ∫_0^1 f(t, 1−t) dt by tanh–sinh, refining the level until successive levels
/// agree within `tol`. Returns the value and the last level difference.
pub fn tanh_sinh<F: Fn(f64, f64) -> Vec<C64>>(f: &F, dim: usize, tol: f64, min_level: u32, max_level: u32) -> (Vec<C64>, f64) {
    let eval = |level: u32| {
        let mut acc = vec![C64::new(0.0, 0.0); dim];
        for n in tanh_sinh_nodes(level) {
            let v = f(n.t, n.tc);
            for k in 0..dim {
                acc[k] += v[k] * n.w;
            }
        }
        acc
    };
    let mut prev = eval(min_level);
    let mut err = f64::INFINITY;
    for level in min_level + 1..=max_level {
        let cur = eval(level);
        err = prev.iter().zip(&cur).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prev = cur;
        if err <= tol * (1.0 + norm(&prev)) {
            break;
        }
    }
    (prev, err)
}
