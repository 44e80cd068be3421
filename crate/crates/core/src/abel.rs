//! Abel map from ∞ with respect to the first-kind differentials.

use crate::curve::{AffinePoint, CurveSpec};
use crate::path::{canonical_path, continue_segment};
use crate::periods::AlgDiff;
use crate::quadrature::adaptive_segment;
use crate::series::{AtInfinity, Laurent};
use crate::{Result, C64};

/// Integrate `f(x, y)` (already multiplied into dx) along a polyline, continuing y.
/// Returns the integrals and y at the end.
pub fn integrate_path<F: Fn(C64, C64) -> Vec<C64>>(
    c: &CurveSpec,
    pts: &[C64],
    y0: C64,
    dim: usize,
    tol: f64,
    f: &F,
) -> (Vec<C64>, C64) {
    let mut acc = vec![C64::new(0.0, 0.0); dim];
    let mut y = y0;
    for w in pts.windows(2) {
        let (a, b, ya) = (w[0], w[1], y);
        let g = |x: C64| f(x, continue_segment(c, a, x, ya));
        let part = adaptive_segment(&g, a, b, dim, tol);
        for (s, p) in acc.iter_mut().zip(part) {
            *s += p;
        }
        y = continue_segment(c, a, b, ya);
    }
    (acc, y)
}

/// Integrals of arbitrary differentials from ∞ to the anchor (sheet 0), via
/// Laurent expansion in t = x^{−1/r}.
pub fn from_infinity_to_anchor(c: &CurveSpec, inf: &AtInfinity, diffs: &[AlgDiff]) -> Vec<C64> {
    let t0 = C64::new(c.anchor().powf(-1.0 / c.r as f64), 0.0);
    diffs
        .iter()
        .map(|d| {
            let mut sum: Option<Laurent> = None;
            for &(a, b, k) in &d.terms {
                let l = inf.differential(a, b).scale(k);
                sum = Some(match sum {
                    None => l,
                    Some(s) => s.add(&l),
                });
            }
            let s = sum.unwrap();
            assert!(s.low >= 0, "differential not holomorphic at ∞");
            s.integrate().eval(t0)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct AbelMap {
    pub curve: CurveSpec,
    pub diffs: Vec<AlgDiff>,
    pub base: Vec<C64>,
    pub exponents: Vec<u32>,
    pub tol: f64,
}

impl AbelMap {
    pub fn new(c: &CurveSpec) -> Self {
        let diffs = crate::periods::first_kind_diffs(c);
        let inf = AtInfinity::new(c, 40 * c.r as usize + 4 * c.genus + 8);
        let base = from_infinity_to_anchor(c, &inf, &diffs);
        AbelMap { curve: c.clone(), diffs, base, exponents: c.galois_exponents(), tol: 1e-14 }
    }

    fn integrand(&self, x: C64, y: C64) -> Vec<C64> {
        self.diffs.iter().map(|d| d.eval(&self.curve, x, y)).collect()
    }

    /// Sheet-0 lift over x and its Abel image.
    pub fn canonical(&self, x: C64) -> (C64, Vec<C64>) {
        let c = &self.curve;
        let path = canonical_path(c, x);
        let (w, y) = integrate_path(c, &path, c.anchor_y(), self.diffs.len(), self.tol, &|x, y| self.integrand(x, y));
        (y, self.base.iter().zip(w).map(|(b, v)| b + v).collect())
    }

    /// Abel image of an affine point (Galois action gives the other sheets).
    pub fn point(&self, p: &AffinePoint) -> Vec<C64> {
        let (_, w) = self.canonical(p.x);
        self.rotate(&w, p.sheet as i64)
    }

    /// Apply the Galois action ζ̂^j to u.
    pub fn rotate(&self, w: &[C64], j: i64) -> Vec<C64> {
        w.iter()
            .zip(&self.exponents)
            .map(|(v, &e)| v * self.curve.zeta_pow(j * e as i64))
            .collect()
    }

    pub fn divisor(&self, pts: &[AffinePoint]) -> Vec<C64> {
        let mut acc = vec![C64::new(0.0, 0.0); self.curve.genus];
        for p in pts {
            for (a, v) in acc.iter_mut().zip(self.point(p)) {
                *a += v;
            }
        }
        acc
    }

    /// Points over x (all sheets) with their images.
    pub fn lifts(&self, x: C64) -> Result<Vec<(AffinePoint, Vec<C64>)>> {
        let c = &self.curve;
        if c.f(x).norm() < 1e-12 {
            return Err(crate::Error::BranchPoint(format!("{x}")));
        }
        let (y0, w0) = self.canonical(x);
        Ok((0..c.r)
            .map(|j| {
                let p = AffinePoint { x, y: y0 * c.zeta_pow(j as i64), sheet: j };
                (p, self.rotate(&w0, j as i64))
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periods::{PeriodData, PeriodOptions};

    #[test]
    fn sum_over_fibre_vanishes_and_branch_point_is_half_period() {
        let c = CurveSpec::from_real(2, 5, &[0.1, -1.2, 0.3, 0.4, -0.2]).unwrap();
        let a = AbelMap::new(&c);
        let lifts = a.lifts(C64::new(0.3, 0.7)).unwrap();
        for i in 0..2 {
            assert!((lifts[0].1[i] + lifts[1].1[i]).norm() < 1e-12);
        }
        // Images of branch points are half-periods: 2w is in the lattice.
        let p = PeriodData::compute(&c, &PeriodOptions::default()).unwrap();
        let e = c.roots[0];
        let (_, w) = a.canonical(e + C64::new(1e-14, 0.0));
        let mut v = vec![C64::new(0.0, 0.0); 2];
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi * 2.0;
        }
        let z = p.normalizer() * nalgebra::DVector::from_vec(v);
        // z = m + τ n with integer m, n.
        let im = nalgebra::DMatrix::from_fn(2, 2, |i, j| p.tau[(i, j)].im);
        let n = im.try_inverse().unwrap() * z.map(|q| q.im);
        let re = z.map(|q| q.re) - p.tau.map(|q| q.re) * &n;
        for k in 0..2 {
            assert!((n[k] - n[k].round()).abs() < 1e-6, "{n}");
            assert!((re[k] - re[k].round()).abs() < 1e-6, "{re}");
        }
    }
}
