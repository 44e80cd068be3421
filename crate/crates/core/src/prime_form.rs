//! Prime forms: the theta-built E(P,Q), the modular 𝓔(P,Q) and the σ-based closed
//! form, all expressed as scalars in the du₁ ⊗ dv₁ trivialization.

use crate::abel::integrate_path;
use crate::curve::{AffinePoint, CurveSpec};
use crate::error::{Error, Result};
use crate::path::canonical_path;
use crate::series::{series_pow, AtInfinity, Laurent};
use crate::sigma::Sigma;
use crate::symmetric::prime_form_index;
use crate::theta::{Characteristic, ThetaFn};
use crate::C64;
use nalgebra::{DMatrix, DVector};

/// A point of the curve with its Abel image and √(ζ/du₁) continued along the
/// same path from ∞.
#[derive(Debug, Clone)]
pub struct PrimePoint {
    pub p: AffinePoint,
    pub w: Vec<C64>,
    pub sqrt_a: C64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct PrimeFormValues {
    pub e: C64,
    pub modular: C64,
    pub sigma_form: C64,
    pub ratio: C64,
}

/// Nonsingular odd characteristic: lexicographically smallest (δ′ then δ″) odd one
/// whose theta gradient at 0 is non-negligible.
pub fn odd_characteristic(tau: &crate::periods::CMat) -> Result<Characteristic> {
    let g = tau.nrows();
    let th = ThetaFn::standard(tau.clone());
    let zero = vec![C64::new(0.0, 0.0); g];
    let mut chars: Vec<Characteristic> = Characteristic::all(g).into_iter().filter(|c| c.parity() < 0).collect();
    chars.sort_by(|a, b| {
        let ka: Vec<f64> = a.a.iter().chain(&a.b).copied().collect();
        let kb: Vec<f64> = b.a.iter().chain(&b.b).copied().collect();
        ka.partial_cmp(&kb).unwrap()
    });
    let scale = th.value(&zero, &Characteristic::zero(g)).norm();
    chars
        .into_iter()
        .find(|c| th.gradient(&zero, c).iter().map(|z| z.norm()).fold(0.0, f64::max) > 1e-6 * scale)
        .ok_or(Error::NoneFound)
}

#[derive(Debug, Clone)]
pub struct PrimeForm<'a> {
    pub sigma: &'a Sigma,
    pub delta: Characteristic,
    /// a = ζ/du₁ = Σ_k coef_k φ_k over the holomorphic monomials.
    pub coef: Vec<C64>,
    sqrt_series: Vec<C64>,
    sqrt_shift: i64,
    index: Vec<usize>,
}

impl<'a> PrimeForm<'a> {
    pub fn new(sigma: &'a Sigma) -> Result<Self> {
        let c = &sigma.curve;
        let g = c.genus;
        let p = &sigma.periods;
        let delta = odd_characteristic(&p.tau)?;
        let grad = ThetaFn::standard(p.tau.clone()).gradient(&vec![C64::new(0.0, 0.0); g], &delta);
        let a = p.normalizer();
        let coef: Vec<C64> = (0..g).map(|k| (0..g).map(|i| grad[i] * a[(i, k)]).sum()).collect();
        // Expansion of a·t^{2g−2} at ∞ and its square root.
        let inf = AtInfinity::new(c, 40 * c.r as usize + 4 * g + 8);
        let mut series: Option<Laurent> = None;
        for (m, k) in c.holomorphic_monomials().iter().zip(&coef) {
            let term = Laurent { low: -((m.sx * c.r + m.ry * c.s) as i64), coeffs: inf.y_pow(m.ry as i64) }.scale(*k);
            series = Some(match series {
                None => term,
                Some(s) => s.add(&term),
            });
        }
        let s = series.unwrap();
        let top = s.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let first = s.coeffs.iter().position(|z| z.norm() > 1e-12 * top).ok_or(Error::TrivializationZero)?;
        let lead_exp = s.low + first as i64;
        if lead_exp.rem_euclid(2) != 0 {
            return Err(Error::TrivializationZero);
        }
        let lead = s.coeffs[first];
        let normalized: Vec<C64> = s.coeffs[first..].iter().map(|z| z / lead).collect();
        let sqrt_series: Vec<C64> = series_pow(&normalized, 0.5).iter().map(|z| z * lead.sqrt()).collect();
        let index = prime_form_index(c);
        Ok(PrimeForm { sigma, delta, coef, sqrt_series, sqrt_shift: lead_exp / 2, index })
    }

    pub fn curve(&self) -> &CurveSpec {
        &self.sigma.curve
    }

    /// ζ/du₁ at (x, y).
    pub fn a(&self, x: C64, y: C64) -> C64 {
        let c = self.curve();
        c.holomorphic_monomials().iter().zip(&self.coef).map(|(m, k)| k * c.phi(m, x, y)).sum()
    }

    /// √a at the anchor over sheet j, from the expansion at ∞.
    fn sqrt_at_anchor(&self, sheet: u32) -> C64 {
        let c = self.curve();
        let r = c.r as i64;
        let s_inv = (1..r).find(|k| (k * c.s as i64) % r == 1).unwrap_or(1);
        let t0 = C64::new(c.anchor().powf(-1.0 / c.r as f64), 0.0) * c.zeta_pow(-(sheet as i64) * s_inv);
        let mut acc = C64::new(0.0, 0.0);
        for z in self.sqrt_series.iter().rev() {
            acc = acc * t0 + z;
        }
        acc * t0.powi(self.sqrt_shift as i32)
    }

    /// Continue √a along a polyline starting from (pts[0], y0) with value s0.
    pub fn continue_sqrt(&self, pts: &[C64], y0: C64, s0: C64) -> C64 {
        let c = self.curve();
        let mut s = s0;
        let mut y = y0;
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let ya = y;
            s = self.track(a, b, ya, s, 0);
            y = crate::path::continue_segment(c, a, b, ya);
        }
        s
    }

    fn track(&self, a: C64, b: C64, ya: C64, sa: C64, depth: usize) -> C64 {
        let c = self.curve();
        let yb = crate::path::continue_segment(c, a, b, ya);
        let va = sa * sa;
        let vb = self.a(b, yb);
        if (vb - va).norm() > 0.2 * va.norm().max(1e-300) && depth < 40 {
            let m = (a + b) * 0.5;
            let sm = self.track(a, m, ya, sa, depth + 1);
            let ym = crate::path::continue_segment(c, a, m, ya);
            return self.track(m, b, ym, sm, depth + 1);
        }
        let r = vb.sqrt();
        if (r - sa).norm() <= (r + sa).norm() {
            r
        } else {
            -r
        }
    }

    /// Lift a point: Abel image and √a along the canonical path from ∞.
    pub fn lift(&self, p: &AffinePoint) -> PrimePoint {
        let c = self.curve();
        let path = canonical_path(c, p.x);
        let s0 = self.sqrt_at_anchor(p.sheet);
        let y0 = c.anchor_y() * c.zeta_pow(p.sheet as i64);
        let sqrt_a = self.continue_sqrt(&path, y0, s0);
        PrimePoint { p: *p, w: self.sigma.abel.point(p), sqrt_a }
    }

    fn delta(&self, p: &PrimePoint, q: &PrimePoint) -> Vec<C64> {
        p.w.iter().zip(&q.w).map(|(a, b)| a - b).collect()
    }

    /// E(P,Q)·√du₁(P)√du₁(Q).
    pub fn e(&self, p: &PrimePoint, q: &PrimePoint) -> C64 {
        let d = self.delta(p, q);
        self.sigma.theta.value(&d, &self.delta) / (p.sqrt_a * q.sqrt_a)
    }

    /// 𝓔(P,Q)·√du₁(P)√du₁(Q) = exp(−½ΔᵀγΔ)·E.
    pub fn modular(&self, p: &PrimePoint, q: &PrimePoint) -> C64 {
        let d = self.delta(p, q);
        let g = d.len();
        let gamma = &self.sigma.periods.gamma;
        let mut quad = C64::new(0.0, 0.0);
        for i in 0..g {
            for j in 0..g {
                quad += d[i] * gamma[(i, j)] * d[j];
            }
        }
        (-0.5 * quad).exp() * self.e(p, q)
    }

    /// σ_{♮_r}(u − v) (the closed form of the modular prime form).
    pub fn sigma_form(&self, p: &PrimePoint, q: &PrimePoint) -> Result<C64> {
        let c = self.curve();
        if !(c.is_hyperelliptic() || c.is_trigonal_34()) {
            return Err(Error::UnsupportedFamily);
        }
        Ok(self.sigma.natural_deriv(&self.delta(p, q), &self.index))
    }

    /// Trigonal variant σ(u + ζ₃v + ζ₃²v)/√−3.
    pub fn sigma_form_variant(&self, p: &PrimePoint, q: &PrimePoint) -> Result<C64> {
        let c = self.curve();
        if !c.is_trigonal_34() {
            return Err(Error::UnsupportedFamily);
        }
        let z = c.zeta();
        let arg: Vec<C64> = p.w.iter().zip(&q.w).map(|(u, v)| u + z * v + z * z * v).collect();
        Ok(self.sigma.value(&arg) / C64::new(-3.0, 0.0).sqrt())
    }

    pub fn values(&self, p: &PrimePoint, q: &PrimePoint) -> Result<PrimeFormValues> {
        let e = self.e(p, q);
        let modular = self.modular(p, q);
        let sigma_form = self.sigma_form(p, q)?;
        Ok(PrimeFormValues { e, modular, sigma_form, ratio: sigma_form / modular })
    }

    /// Cross-ratio check of E against the normalized third-kind differential
    /// with residues +1 at Q and −1 at Q′ (hyperelliptic curves). Returns
    /// (theta side, exp ∫_{P0}^{P} τ).
    pub fn third_kind(&self, p0: &AffinePoint, p_end: C64, q: &AffinePoint, q2: &AffinePoint) -> Result<(C64, C64)> {
        let c = self.curve();
        if !c.is_hyperelliptic() {
            return Err(Error::UnsupportedFamily);
        }
        if (q.x - q2.x).norm() < 1e-12 && (q.y - q2.y).norm() < 1e-12 {
            return Err(Error::Invalid("Q and Q′ coincide".into()));
        }
        let g = c.genus;
        let abel = &self.sigma.abel;
        let tau_raw = |x: C64, y: C64| ((y + q.y) / (x - q.x) - (y + q2.y) / (x - q2.x)) / (2.0 * y);
        let nu = |x: C64, y: C64| -> Vec<C64> { abel.diffs.iter().map(|d| d.eval(c, x, y)).collect() };
        // α-periods of the raw differential over the cycle representatives.
        let h = &self.sigma.periods.homology;
        let tol = 1e-13;
        let elem: Vec<C64> = h
            .cycles
            .iter()
            .map(|cy| {
                let (pts, y0) = cy.polyline(c);
                integrate_path(c, &pts, y0, 1, tol, &|x, y| vec![tau_raw(x, y)]).0[0]
            })
            .collect();
        let alpha: Vec<C64> = (0..g)
            .map(|j| h.transform[j].iter().zip(&elem).map(|(&m, v)| v * m as f64).sum())
            .collect();
        // τ = τ_raw − Σ c_k ν_k with ∮_{α_j} τ = 0: Σ_k c_k (2ω′)_{kj} = α_j.
        let w2 = &self.sigma.periods.omega1 * C64::new(2.0, 0.0);
        let coeffs = w2
            .transpose()
            .lu()
            .solve(&DVector::from_vec(alpha))
            .ok_or_else(|| Error::DegenerateConfiguration("period matrix singular".into()))?;
        // Integrate τ and ν along P0 → P.
        let path = crate::path::route(c, p0.x, p_end);
        let (ints, _) = integrate_path(c, &path, p0.y, g + 1, tol, &|x, y| {
            let mut v = vec![tau_raw(x, y)];
            v.extend(nu(x, y));
            v
        });
        let mut tau_int = ints[0];
        for k in 0..g {
            tau_int -= coeffs[k] * ints[k + 1];
        }
        let w0 = abel.point(p0);
        let w_end: Vec<C64> = (0..g).map(|k| w0[k] + ints[k + 1]).collect();
        let wq = abel.point(q);
        // Q′ reached from Q along a straight segment.
        let (dq, yq2) = integrate_path(c, &[q.x, q2.x], q.y, g, tol, &|x, y| nu(x, y));
        if (yq2 - q2.y).norm() > 1e-8 * (1.0 + q2.y.norm()) {
            return Err(Error::DegenerateConfiguration("Q′ is not on the sheet reached from Q".into()));
        }
        let wq2: Vec<C64> = (0..g).map(|k| wq[k] + dq[k]).collect();
        let th = |a: &[C64], b: &[C64]| {
            let d: Vec<C64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            self.sigma.theta.value(&d, &self.delta)
        };
        let lhs = th(&w_end, &wq) * th(&w0, &wq2) / (th(&w_end, &wq2) * th(&w0, &wq));
        Ok((lhs, tau_int.exp()))
    }

    /// |σ_{♮_r}(u−v)/(u₁−v₁) − 1| for Q approaching P along x ↦ x + h, and the
    /// fitted log–log convergence order.
    pub fn near_diagonal(&self, p: &AffinePoint, hs: &[f64]) -> (Vec<f64>, f64) {
        let c = self.curve();
        let abel = &self.sigma.abel;
        let devs: Vec<f64> = hs
            .iter()
            .map(|&h| {
                let (dw, _) = integrate_path(c, &[p.x, p.x + h], p.y, c.genus, 1e-14, &|x, y| {
                    abel.diffs.iter().map(|d| d.eval(c, x, y)).collect()
                });
                let d: Vec<C64> = dw.iter().map(|z| -z).collect();
                let v = self.sigma.natural_deriv(&d, &self.index);
                (v / d[0] - 1.0).norm()
            })
            .collect();
        let pts: Vec<(f64, f64)> = hs.iter().zip(&devs).map(|(h, d)| (h.ln(), d.ln())).collect();
        let n = pts.len() as f64;
        let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
        let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        (devs, sxy / sxx)
    }

    /// Σ_i ζ^i ∂/∂v₁ ln σ_{♮_r}(u − ζ̂^{−i}v) (logarithmic-derivative core term).
    pub fn benney_core(&self, u: &[C64], v: &[C64]) -> C64 {
        let c = self.curve();
        let s = self.sigma;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..c.r as i64 {
            let rv = s.abel.rotate(v, -i);
            let arg: Vec<C64> = u.iter().zip(&rv).map(|(a, b)| a - b).collect();
            let base: Vec<usize> = self.index.iter().map(|k| k - 1).collect();
            let mut d1 = base.clone();
            d1.push(0);
            let d = s.derivs(&arg, &[base, d1]);
            // ∂/∂v₁ of the argument's first coordinate is −ζ^{−i e₁}.
            let factor = -c.zeta_pow(-i * s.abel.exponents[0] as i64);
            acc += c.zeta_pow(i) * factor * d[1] / d[0];
        }
        acc
    }
}

/// Matrix helper for tests: periods of the holomorphic differentials computed by
/// integrating along the cycle polylines.
pub fn polyline_periods(s: &Sigma) -> DMatrix<C64> {
    let c = &s.curve;
    let h = &s.periods.homology;
    let g = c.genus;
    let mut m = DMatrix::zeros(g, h.cycles.len());
    for (k, cy) in h.cycles.iter().enumerate() {
        let (pts, y0) = cy.polyline(c);
        let (v, _) = integrate_path(c, &pts, y0, g, 1e-13, &|x, y| s.abel.diffs.iter().map(|d| d.eval(c, x, y)).collect());
        for i in 0..g {
            m[(i, k)] = v[i];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periods::{elementary_periods, PeriodOptions};
    use crate::sigma::random_points;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn polyline_periods_match_segment_periods() {
        let c = CurveSpec::from_real(2, 5, &[0.1, -1.2, 0.3, 0.4, -0.2]).unwrap();
        let s = Sigma::new(&c, &PeriodOptions::default()).unwrap();
        let a = polyline_periods(&s);
        let (b, _) = elementary_periods(&c, &s.periods.homology, &s.abel.diffs, &PeriodOptions::default());
        assert!((a - b).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-10);
    }

    #[test]
    fn sigma_form_matches_modular_prime_form() {
        for c in [
            CurveSpec::from_real(2, 5, &[0.1, -1.2, 0.3, 0.4, -0.2]).unwrap(),
            CurveSpec::new(3, 4, vec![C64::new(0.2, 0.1), C64::new(-0.3, 0.0), C64::new(0.1, -0.2), C64::new(-0.8, 0.3)]).unwrap(),
        ] {
            let s = Sigma::new(&c, &PeriodOptions::default()).unwrap();
            let pf = PrimeForm::new(&s).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let pts = random_points(&c, &s.abel, 6, &mut rng);
            for k in 0..3 {
                let p = pf.lift(&pts[2 * k].0);
                let q = pf.lift(&pts[2 * k + 1].0);
                let v = pf.values(&p, &q).unwrap();
                println!("({},{}) ratio {}", c.r, c.s, v.ratio);
                assert!((v.ratio - 1.0).norm() < 1e-7, "{:?}", v);
            }
        }
    }

    #[test]
    fn third_kind_cross_ratio() {
        let c = CurveSpec::from_real(2, 5, &[0.1, -1.2, 0.3, 0.4, -0.2]).unwrap();
        let s = Sigma::new(&c, &PeriodOptions::default()).unwrap();
        let pf = PrimeForm::new(&s).unwrap();
        let q = c.lift_points(C64::new(1.3, 1.1)).unwrap()[0];
        let q2 = c.lift_points(C64::new(1.38, 1.16)).unwrap()[0];
        let p0 = c.lift_points(C64::new(-1.2, 1.4)).unwrap()[0];
        let (l, r) = pf.third_kind(&p0, C64::new(-0.9, -1.3), &q, &q2).unwrap();
        assert!((l / r - 1.0).norm() < 1e-7, "{l} {r}");
    }

    #[test]
    fn near_diagonal_is_second_order() {
        let c = CurveSpec::from_real(2, 5, &[0.1, -1.2, 0.3, 0.4, -0.2]).unwrap();
        let s = Sigma::new(&c, &PeriodOptions::default()).unwrap();
        let pf = PrimeForm::new(&s).unwrap();
        let p = c.lift_points(C64::new(0.4, 0.6)).unwrap()[1];
        let (devs, order) = pf.near_diagonal(&p, &[0.04, 0.02, 0.01, 0.005, 0.0025]);
        println!("{devs:?} {order}");
        assert!(order > 1.95, "{order}");
    }
}
