//! Polyline routing in the x-plane and exact continuation of y along it.

use crate::curve::CurveSpec;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const DETOUR_SIDES: usize = 12;

/// Route from `a` to `b`: straight, except that any branch point passing within
/// the clearance radius is circumvented on a fixed side (branch point kept on
/// the right of the direction of travel).
pub fn route(c: &CurveSpec, a: C64, b: C64) -> Vec<C64> {
    let rho = c.clearance();
    let mut out = vec![a];
    route_into(c, a, b, rho, &mut out, 0);
    out
}

fn route_into(c: &CurveSpec, a: C64, b: C64, rho: f64, out: &mut Vec<C64>, depth: usize) {
    let d = b - a;
    let len = d.norm();
    if len == 0.0 {
        return;
    }
    // Closest obstruction along the segment (first in travel order).
    let mut hit: Option<(f64, C64)> = None;
    for &e in &c.roots {
        if (e - a).norm() < rho * (1.0 - 1e-9) || (e - b).norm() < rho {
            continue;
        }
        let t = ((e - a) * d.conj()).re / (len * len);
        if !(0.0..=1.0).contains(&t) {
            continue;
        }
        let dist = (a + d * t - e).norm();
        if dist < rho && hit.is_none_or(|(t0, _)| t < t0) {
            hit = Some((t, e));
        }
    }
    let Some((_, e)) = hit else {
        out.push(b);
        return;
    };
    if depth > 4 * c.roots.len() {
        out.push(b);
        return;
    }
    // Entry and exit angles where the segment meets the circle |x−e| = rho.
    let u = d / len;
    let t_foot = ((e - a) * u.conj()).re;
    let foot = a + u * t_foot;
    let h = (rho * rho - (foot - e).norm_sqr()).max(0.0).sqrt();
    let entry = foot - u * h;
    let exit = foot + u * h;
    route_into(c, a, entry, rho, out, depth + 1);
    let th0 = (entry - e).arg();
    let mut th1 = (exit - e).arg();
    // Keep e on the right: travel counter-clockwise around e.
    while th1 <= th0 {
        th1 += 2.0 * PI;
    }
    for k in 1..DETOUR_SIDES {
        let th = th0 + (th1 - th0) * k as f64 / DETOUR_SIDES as f64;
        out.push(e + C64::from_polar(rho, th));
    }
    out.push(exit);
    let last = *out.last().unwrap();
    route_into(c, last, b, rho, out, depth + 1);
}

/// Canonical path from the anchor to x.
pub fn canonical_path(c: &CurveSpec, x: C64) -> Vec<C64> {
    route(c, C64::new(c.anchor(), 0.0), x)
}

/// Continue y along one straight segment a→b (which must avoid branch points).
pub fn continue_segment(c: &CurveSpec, a: C64, b: C64, ya: C64) -> C64 {
    let inv = 1.0 / c.r as f64;
    let mut y = ya;
    for &e in &c.roots {
        y *= ((b - e) / (a - e)).powf(inv);
    }
    y
}

pub fn continue_y(c: &CurveSpec, path: &[C64], y0: C64) -> C64 {
    path.windows(2).fold(y0, |y, w| continue_segment(c, w[0], w[1], y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn route_avoids_branch_points() {
        let c = CurveSpec::from_real(2, 5, &[0.0, 0.0, 0.0, -1.0, 0.0]).unwrap();
        let rho = c.clearance();
        for &x in &[C64::new(-2.0, 0.0), C64::new(-0.3, 0.01), C64::new(0.5, -0.7)] {
            let p = canonical_path(&c, x);
            for w in p.windows(2) {
                for &e in &c.roots {
                    let d = w[1] - w[0];
                    let t = (((e - w[0]) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
                    assert!((w[0] + d * t - e).norm() > 0.9 * rho * (PI / DETOUR_SIDES as f64).cos() - 1e-12);
                }
            }
            let y = continue_y(&c, &p, c.anchor_y());
            assert!((y * y - c.f(x)).norm() < 1e-10 * (1.0 + c.f(x).norm()));
        }
    }
}
