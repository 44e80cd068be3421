//! Elementary cycles over a spanning tree of the branch points, their
//! intersection numbers, and integer symplectic reduction.

use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::path::continue_segment;
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::f64::consts::PI;

const CIRCLE_SIDES: usize = 96;

/// Cycle: along the segment a→b on sheet l (relative to the reference branch
/// on the segment), once counter-clockwise around b, back on sheet l+1, once
/// clockwise around a.
#[derive(Debug, Clone, Serialize)]
pub struct ElementaryCycle {
    pub a: usize,
    pub b: usize,
    pub sheet: u32,
    pub offset: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomologyBasis {
    pub edges: Vec<(usize, usize)>,
    pub cycles: Vec<ElementaryCycle>,
    /// Intersection numbers of the elementary cycles.
    pub elementary_intersections: Vec<Vec<i64>>,
    /// Rows: α_1..α_g, β_1..β_g as integer combinations of elementary cycles.
    pub transform: Vec<Vec<i64>>,
    /// Sheet permutation of a counter-clockwise loop around each finite branch point.
    pub monodromy: Vec<Vec<u32>>,
    pub monodromy_infinity: Vec<u32>,
}

/// Euclidean minimum spanning tree (Prim).
pub fn spanning_tree(pts: &[C64]) -> Vec<(usize, usize)> {
    let n = pts.len();
    let mut in_tree = vec![false; n];
    let mut best = vec![(f64::INFINITY, 0usize); n];
    in_tree[0] = true;
    for j in 1..n {
        best[j] = ((pts[j] - pts[0]).norm(), 0);
    }
    let mut edges = Vec::new();
    for _ in 1..n {
        let (j, _) = (0..n)
            .filter(|&j| !in_tree[j])
            .map(|j| (j, best[j].0))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        in_tree[j] = true;
        edges.push((best[j].1, j));
        for k in 0..n {
            if !in_tree[k] {
                let d = (pts[k] - pts[j]).norm();
                if d < best[k].0 {
                    best[k] = (d, j);
                }
            }
        }
    }
    edges
}

fn seg_dist(p: C64, a: C64, b: C64) -> f64 {
    let d = b - a;
    let t = (((p - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
    (a + d * t - p).norm()
}

/// Reference branch of y at the midpoint of a segment (principal root of f).
pub fn y_mid(c: &CurveSpec, a: C64, b: C64) -> C64 {
    c.f((a + b) * 0.5).powf(1.0 / c.r as f64)
}

impl ElementaryCycle {
    /// Closed polyline and the y-value at its first vertex.
    pub fn polyline(&self, c: &CurveSpec) -> (Vec<C64>, C64) {
        let (a, b) = (c.roots[self.a], c.roots[self.b]);
        let d = (b - a) / (b - a).norm();
        let o = d * C64::new(0.0, 1.0) * self.offset;
        let h = (self.radius * self.radius - self.offset * self.offset).sqrt();
        let a1 = a + o + d * h;
        let b1 = b + o - d * h;
        let mut pts = vec![a1, b1];
        let th_b = (b1 - b).arg();
        for k in 1..=CIRCLE_SIDES {
            pts.push(b + C64::from_polar(self.radius, th_b + 2.0 * PI * k as f64 / CIRCLE_SIDES as f64));
        }
        *pts.last_mut().unwrap() = b1;
        pts.push(a1);
        let th_a = (a1 - a).arg();
        for k in 1..=CIRCLE_SIDES {
            pts.push(a + C64::from_polar(self.radius, th_a - 2.0 * PI * k as f64 / CIRCLE_SIDES as f64));
        }
        *pts.last_mut().unwrap() = a1;
        let mid = (a + b) * 0.5;
        let y0 = continue_segment(c, mid, a1, y_mid(c, a, b)) * c.zeta_pow(self.sheet as i64);
        (pts, y0)
    }
}

/// Intersection matrix of closed lifted polylines, counting transversal
/// crossings where both lifts lie on the same sheet; (real direction)·(imaginary
/// direction) = +1.
pub fn intersection_matrix(c: &CurveSpec, cycles: &[ElementaryCycle]) -> Result<Vec<Vec<i64>>> {
    let n = cycles.len();
    let lifted: Vec<(Vec<C64>, Vec<C64>)> = cycles
        .iter()
        .map(|cy| {
            let (pts, y0) = cy.polyline(c);
            let mut ys = vec![y0];
            for w in pts.windows(2) {
                let y = continue_segment(c, w[0], w[1], *ys.last().unwrap());
                ys.push(y);
            }
            (pts, ys)
        })
        .collect();
    for (pts, ys) in &lifted {
        let (y0, yn) = (ys[0], *ys.last().unwrap());
        if (y0 - yn).norm() > 1e-8 * y0.norm() || pts.len() < 4 {
            return Err(Error::ContinuationStepCollapse);
        }
    }
    let mut k = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let (p1, y1) = &lifted[i];
            let (p2, y2) = &lifted[j];
            let mut acc = 0i64;
            for s in 0..p1.len() - 1 {
                let (a1, b1) = (p1[s], p1[s + 1]);
                let d1 = b1 - a1;
                for t in 0..p2.len() - 1 {
                    let (a2, b2) = (p2[t], p2[t + 1]);
                    let d2 = b2 - a2;
                    let den = (d1.conj() * d2).im;
                    if den.abs() < 1e-300 {
                        continue;
                    }
                    let w = a2 - a1;
                    let u = (w.conj() * d2).im / den;
                    let v = (w.conj() * d1).im / den;
                    if !(0.0..1.0).contains(&u) || !(0.0..1.0).contains(&v) {
                        continue;
                    }
                    let x = a1 + d1 * u;
                    let ya = continue_segment(c, a1, x, y1[s]);
                    let yb = continue_segment(c, a2, x, y2[t]);
                    if (ya - yb).norm() < 1e-6 * ya.norm() {
                        acc += den.signum() as i64;
                    }
                }
            }
            k[i][j] = acc;
            k[j][i] = -acc;
        }
    }
    Ok(k)
}

fn form(k: &[Vec<i64>], a: &[i64], b: &[i64]) -> i64 {
    let n = a.len();
    let mut s = 0;
    for i in 0..n {
        if a[i] == 0 {
            continue;
        }
        for j in 0..n {
            s += a[i] * k[i][j] * b[j];
        }
    }
    s
}

/// Integer change of basis S with S K Sᵀ = [[0, I], [−I, 0]].
pub fn symplectic_reduce(k: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = k.len();
    if !n.is_multiple_of(2) {
        return Err(Error::ReductionFailure("odd rank".into()));
    }
    let mut pool: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    let mut alphas = Vec::new();
    let mut betas = Vec::new();
    while !pool.is_empty() {
        let e = pool.remove(0);
        // Euclid on the pairings e·v until a unit pairing appears.
        loop {
            let vals: Vec<i64> = pool.iter().map(|v| form(k, &e, v)).collect();
            let Some((imin, vmin)) = vals
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .min_by_key(|(_, &x)| x.abs())
                .map(|(i, &x)| (i, x))
            else {
                return Err(Error::ReductionFailure("degenerate pairing".into()));
            };
            if vmin.abs() == 1 {
                break;
            }
            let f = pool[imin].clone();
            let mut progressed = false;
            for (idx, v) in pool.iter_mut().enumerate() {
                if idx == imin {
                    continue;
                }
                let q = vals[idx].div_euclid(vmin);
                if q != 0 {
                    for t in 0..n {
                        v[t] -= q * f[t];
                    }
                    progressed = true;
                }
            }
            if !progressed {
                return Err(Error::ReductionFailure("pairing gcd is not 1".into()));
            }
        }
        let vals: Vec<i64> = pool.iter().map(|v| form(k, &e, v)).collect();
        let i1 = vals.iter().position(|x| x.abs() == 1).unwrap();
        let mut f = pool.remove(i1);
        if vals[i1] < 0 {
            f.iter_mut().for_each(|x| *x = -*x);
        }
        for w in pool.iter_mut() {
            let wf = form(k, w, &f);
            let we = form(k, w, &e);
            for t in 0..n {
                w[t] += -wf * e[t] + we * f[t];
            }
        }
        alphas.push(e);
        betas.push(f);
    }
    alphas.extend(betas);
    Ok(alphas)
}

/// Permutation of sheets (labelled at the anchor) under a closed loop.
fn loop_permutation(c: &CurveSpec, pts: &[C64]) -> Vec<u32> {
    let y0 = c.anchor_y();
    (0..c.r)
        .map(|j| {
            let start = y0 * c.zeta_pow(j as i64);
            let end = crate::path::continue_y(c, pts, start);
            (0..c.r)
                .min_by(|&p, &q| {
                    let dp = (y0 * c.zeta_pow(p as i64) - end).norm();
                    let dq = (y0 * c.zeta_pow(q as i64) - end).norm();
                    dp.partial_cmp(&dq).unwrap()
                })
                .unwrap()
        })
        .collect()
}

pub fn monodromy(c: &CurveSpec) -> (Vec<Vec<u32>>, Vec<u32>) {
    let rho = c.clearance();
    let x0 = C64::new(c.anchor(), 0.0);
    let finite = c
        .roots
        .iter()
        .map(|&e| {
            let dir = (x0 - e) / (x0 - e).norm();
            let start = e + dir * (0.5 * rho);
            let mut pts = crate::path::route(c, x0, start);
            for k in 1..=64 {
                pts.push(e + dir * (0.5 * rho) * C64::from_polar(1.0, 2.0 * PI * k as f64 / 64.0));
            }
            let back: Vec<C64> = crate::path::route(c, x0, start).into_iter().rev().skip(1).collect();
            pts.extend(back);
            loop_permutation(c, &pts)
        })
        .collect();
    // Loop around ∞: clockwise circle through the anchor enclosing all branch points.
    let pts: Vec<C64> = (0..=256).map(|k| x0 * C64::from_polar(1.0, -2.0 * PI * k as f64 / 256.0)).collect();
    (finite, loop_permutation(c, &pts))
}

pub fn homology_basis(c: &CurveSpec) -> Result<HomologyBasis> {
    let edges = spanning_tree(&c.roots);
    // Scale for loop radii: stay well inside the gap to non-incident segments.
    let mut dmin = f64::INFINITY;
    for (i, &e) in c.roots.iter().enumerate() {
        for &(a, b) in &edges {
            if a != i && b != i {
                dmin = dmin.min(seg_dist(e, c.roots[a], c.roots[b]));
            }
        }
        for (j, &f) in c.roots.iter().enumerate() {
            if j != i {
                dmin = dmin.min((e - f).norm());
            }
        }
    }
    let rho0 = 0.35 * dmin;
    let mut cycles = Vec::new();
    for &(a, b) in &edges {
        for l in 0..c.r - 1 {
            cycles.push(ElementaryCycle { a, b, sheet: l, offset: 0.0, radius: 0.0 });
        }
    }
    let m = cycles.len() as f64;
    for (i, cy) in cycles.iter_mut().enumerate() {
        let f = (i as f64 + 0.5) / m;
        cy.radius = rho0 * (0.45 + 0.5 * f + 0.013 * (i as f64 * 1.7).sin());
        cy.offset = rho0 * (0.02 + 0.03 * f);
    }
    let k = intersection_matrix(c, &cycles)?;
    let transform = symplectic_reduce(&k)?;
    let (mono, mono_inf) = monodromy(c);
    Ok(HomologyBasis { edges, cycles, elementary_intersections: k, transform, monodromy: mono, monodromy_infinity: mono_inf })
}

pub fn check_symplectic(k: &[Vec<i64>], s: &[Vec<i64>]) -> bool {
    let n = k.len();
    let g = n / 2;
    for i in 0..n {
        for j in 0..n {
            let expect = if i < g && j == i + g {
                1
            } else if i >= g && j + g == i {
                -1
            } else {
                0
            };
            if form(k, &s[i], &s[j]) != expect {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_of_random_unimodular_form() {
        // K = A J Aᵀ for a unimodular A.
        let j = [vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![-1, 0, 0, 0], vec![0, -1, 0, 0]];
        let a = [vec![1, 1, 0, 0], vec![0, 1, 0, 1], vec![0, 3, 1, 0], vec![0, 0, 0, 1]];
        let mut k = vec![vec![0i64; 4]; 4];
        for p in 0..4 {
            for q in 0..4 {
                for s in 0..4 {
                    for t in 0..4 {
                        k[p][q] += a[p][s] * j[s][t] * a[q][t];
                    }
                }
            }
        }
        let s = symplectic_reduce(&k).unwrap();
        assert!(check_symplectic(&k, &s));
    }

    #[test]
    fn elliptic_and_trigonal_bases() {
        for c in [
            CurveSpec::from_real(2, 3, &[0.0, -1.0, 0.0]).unwrap(),
            CurveSpec::new(3, 4, vec![C64::new(0.2, 0.1), C64::new(-0.3, 0.0), C64::new(0.1, -0.2), C64::new(-0.8, 0.3)]).unwrap(),
            CurveSpec::from_real(2, 7, &[0.1, -0.4, 0.2, 0.3, -0.5, 0.2, -0.9]).unwrap(),
        ] {
            let h = homology_basis(&c).unwrap();
            assert_eq!(h.cycles.len(), 2 * c.genus);
            assert!(check_symplectic(&h.elementary_intersections, &h.transform));
            for p in &h.monodromy {
                for j in 0..c.r {
                    assert_eq!(p[j as usize], (j + 1) % c.r);
                }
            }
            // Composition of all finite loops and the loop at ∞ is trivial.
            let shift = c.s % c.r;
            for j in 0..c.r {
                assert_eq!((h.monodromy_infinity[j as usize] + shift) % c.r, j);
            }
        }
    }
}
