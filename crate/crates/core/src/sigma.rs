//! The multivariate sigma function σ(u) = c·exp(−½uᵀγu)·θ[δ_R]((2ω′)^{-1}u; τ)
//! with its derivatives, ℘-functions and Taylor coefficients at the origin.

use crate::abel::AbelMap;
use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::periods::{PeriodData, PeriodOptions};
use crate::symmetric::{sigma_leading_term, WeightedPolynomial};
use crate::theta::{Characteristic, ThetaFn};
use crate::young::YoungData;
use crate::C64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct Sigma {
    pub curve: CurveSpec,
    pub periods: PeriodData,
    pub abel: AbelMap,
    pub theta: ThetaFn,
    pub delta: Characteristic,
    pub c: C64,
    pub leading: WeightedPolynomial,
    pub young: YoungData,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ProbeResult {
    pub order: u32,
    pub slope: f64,
    /// Largest scaled Taylor coefficient below the order, relative to the leading one.
    pub sub_floor_ratio: f64,
}

/// Random points of the curve away from branch points (x in a box around the roots).
pub fn random_points(c: &CurveSpec, abel: &AbelMap, n: usize, rng: &mut ChaCha8Rng) -> Vec<(crate::AffinePoint, Vec<C64>)> {
    let scale = 1.0 + c.max_root();
    let mut out = Vec::new();
    while out.len() < n {
        let x = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
        if c.roots.iter().any(|e| (x - e).norm() < 0.05 * scale) {
            continue;
        }
        let sheet = rng.gen_range(0..c.r) as usize;
        let lifts = abel.lifts(x).expect("generic point");
        out.push(lifts[sheet].clone());
    }
    out
}

/// Characteristic whose theta vanishes on the Abel image of effective divisors
/// of degree g−1 (the shifted theta divisor).
pub fn riemann_characteristic(c: &CurveSpec, abel: &AbelMap, theta: &ThetaFn, seed: u64) -> Result<Characteristic> {
    let g = c.genus;
    let chars = Characteristic::all(g);
    let mut alive: Vec<bool> = vec![true; chars.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..3 {
        let pts = random_points(c, abel, g - 1, &mut rng);
        let mut u = vec![C64::new(0.0, 0.0); g];
        for (_, w) in &pts {
            for (a, b) in u.iter_mut().zip(w) {
                *a += b;
            }
        }
        let vals: Vec<f64> = chars.iter().map(|ch| theta.value(&u, ch).norm()).collect();
        let top = vals.iter().cloned().fold(0.0, f64::max);
        for (k, v) in vals.iter().enumerate() {
            if *v > 1e-8 * top {
                alive[k] = false;
            }
        }
    }
    let found: Vec<usize> = (0..chars.len()).filter(|&k| alive[k]).collect();
    match found.len() {
        0 => Err(Error::NoneFound),
        1 => Ok(chars[found[0]].clone()),
        n => Err(Error::AmbiguousCharacteristic(n)),
    }
}

/// Derivatives ∂_T exp(q) / exp(q) for q = −½uᵀγu: sums over pairings of T.
fn gaussian_factor(q1: &[C64], q2: &crate::periods::CMat, t: &[usize]) -> C64 {
    if t.is_empty() {
        return C64::new(1.0, 0.0);
    }
    let i = t[0];
    let rest = &t[1..];
    let mut acc = q1[i] * gaussian_factor(q1, q2, rest);
    for k in 0..rest.len() {
        let mut r: Vec<usize> = rest.to_vec();
        let j = r.remove(k);
        acc += q2[(i, j)] * gaussian_factor(q1, q2, &r);
    }
    acc
}

/// All set partitions of {0..n}.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in set_partitions(n - 1) {
        for b in 0..p.len() {
            let mut q = p.clone();
            q[b].push(n - 1);
            out.push(q);
        }
        let mut q = p.clone();
        q.push(vec![n - 1]);
        out.push(q);
    }
    out
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

impl Sigma {
    pub fn new(c: &CurveSpec, opts: &PeriodOptions) -> Result<Self> {
        let periods = PeriodData::compute(c, opts)?;
        Self::from_periods(c, periods)
    }

    pub fn from_periods(c: &CurveSpec, periods: PeriodData) -> Result<Self> {
        let abel = AbelMap::new(c);
        let theta = ThetaFn::new(periods.tau.clone(), periods.normalizer());
        let delta = riemann_characteristic(c, &abel, &theta, 7)?;
        let leading = sigma_leading_term(c);
        let young = YoungData::new(c);
        let mut s = Sigma { curve: c.clone(), periods, abel, theta, delta, c: C64::new(1.0, 0.0), leading, young };
        // Normalize on the lowest-degree monomial of the leading term.
        let (e, coef) = s
            .leading
            .terms
            .iter()
            .min_by_key(|(e, _)| e.iter().sum::<u32>())
            .map(|(e, q)| (e.clone(), q.to_f64().unwrap()))
            .unwrap();
        let raw = s.taylor_coefficient(&e);
        if raw.norm() < 1e-12 {
            return Err(Error::NormalizationUnstable(raw.norm()));
        }
        s.c = C64::new(coef, 0.0) / raw;
        Ok(s)
    }

    pub fn genus(&self) -> usize {
        self.curve.genus
    }

    /// ∂_{u_{i1}}…∂_{u_{ik}}σ(u) for each index list (0-based).
    pub fn derivs(&self, u: &[C64], orders: &[Vec<usize>]) -> Vec<C64> {
        let g = self.genus();
        let gamma = &self.periods.gamma;
        let q1: Vec<C64> = (0..g).map(|i| -(0..g).map(|j| gamma[(i, j)] * u[j]).sum::<C64>()).collect();
        let q2 = -gamma.clone();
        let mut quad = C64::new(0.0, 0.0);
        for i in 0..g {
            for j in 0..g {
                quad += u[i] * gamma[(i, j)] * u[j];
            }
        }
        let gauss = (-0.5 * quad).exp();
        // Collect the theta derivatives needed by Leibniz.
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut needed: Vec<Vec<usize>> = Vec::new();
        let mut plan: Vec<Vec<(Vec<usize>, usize)>> = Vec::new();
        for o in orders {
            let k = o.len();
            let mut terms = Vec::new();
            for mask in 0..1usize << k {
                let t: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| o[b]).collect();
                let mut rest: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 0).map(|b| o[b]).collect();
                rest.sort_unstable();
                let id = *index.entry(rest.clone()).or_insert_with(|| {
                    needed.push(rest.clone());
                    needed.len() - 1
                });
                terms.push((t, id));
            }
            plan.push(terms);
        }
        let th = self.theta.derivs(u, &self.delta, &needed);
        plan.iter()
            .map(|terms| {
                let s: C64 = terms.iter().map(|(t, id)| gaussian_factor(&q1, &q2, t) * th[*id]).sum();
                self.c * gauss * s
            })
            .collect()
    }

    pub fn value(&self, u: &[C64]) -> C64 {
        self.derivs(u, &[vec![]])[0]
    }

    /// Derivative with respect to a 1-based multi-index such as ♮_k.
    pub fn natural_deriv(&self, u: &[C64], idx: &[usize]) -> C64 {
        let o: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        self.derivs(u, &[o])[0]
    }

    /// Coefficient of u^e in the Taylor expansion at 0.
    pub fn taylor_coefficient(&self, e: &[u32]) -> C64 {
        let mut o = Vec::new();
        for (i, &k) in e.iter().enumerate() {
            o.extend(std::iter::repeat_n(i, k as usize));
        }
        let zero = vec![C64::new(0.0, 0.0); self.genus()];
        let fact: f64 = e.iter().map(|&k| factorial(k)).product();
        self.derivs(&zero, &[o])[0] / fact
    }

    /// −∂_S log σ for |S| ≥ 1 (so S = {i, j} gives ℘_ij).
    pub fn wp(&self, u: &[C64], s: &[usize]) -> C64 {
        let n = s.len();
        let parts = set_partitions(n);
        let mut subsets: Vec<Vec<usize>> = vec![vec![]];
        let mut map: HashMap<Vec<usize>, usize> = HashMap::new();
        map.insert(vec![], 0);
        for p in &parts {
            for b in p {
                let key: Vec<usize> = b.iter().map(|&k| s[k]).collect();
                if !map.contains_key(&key) {
                    map.insert(key.clone(), subsets.len());
                    subsets.push(key);
                }
            }
        }
        let d = self.derivs(u, &subsets);
        let s0 = d[0];
        let mut acc = C64::new(0.0, 0.0);
        for p in &parts {
            let m = p.len() as u32;
            let mut term = C64::new(if m % 2 == 1 { 1.0 } else { -1.0 } * factorial(m - 1), 0.0);
            for b in p {
                let key: Vec<usize> = b.iter().map(|&k| s[k]).collect();
                term *= d[map[&key]] / s0;
            }
            acc += term;
        }
        -acc
    }

    /// Exponent vectors of all monomials of weight ≤ `w` (weights = hook lengths).
    pub fn monomials_up_to(&self, w: u32) -> Vec<Vec<u32>> {
        fn rec(h: &[u32], w: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if cur.len() == h.len() {
                out.push(cur.clone());
                return;
            }
            let hi = h[cur.len()];
            let mut k = 0;
            while k * hi <= w {
                cur.push(k);
                rec(h, w - k * hi, cur, out);
                cur.pop();
                k += 1;
            }
        }
        let mut out = Vec::new();
        rec(&self.young.hooks, w, &mut Vec::new(), &mut out);
        out
    }

    /// Largest deviation between Taylor coefficients of σ at 0 and the leading
    /// Schur term over monomials of weight ≤ |Λ|.
    pub fn taylor_deviation(&self) -> f64 {
        let w = self.young.weight();
        self.monomials_up_to(w)
            .iter()
            .map(|e| {
                let exact = self.leading.coeff(e).to_f64().unwrap();
                (self.taylor_coefficient(e) - exact).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Order of vanishing of s ↦ σ(u₀ + s·e_g) at s = 0.
    ///
    /// Taylor coefficients come from a Cauchy integral on |s| = ρ. Coefficients
    /// below the round-off floor are treated as zero. The order is then read off as
    /// the log–log slope of the reconstructed series over s ∈ [1e−4, 1e−2].
    pub fn vanishing_order_probe(&self, u0: &[C64]) -> Result<ProbeResult> {
        let g = self.genus();
        let m = 128usize;
        let rho = 0.25;
        let vals: Vec<C64> = (0..m)
            .map(|k| {
                let z = C64::from_polar(rho, 2.0 * std::f64::consts::PI * k as f64 / m as f64);
                let mut u = u0.to_vec();
                u[g - 1] += z;
                self.value(&u)
            })
            .collect();
        let nmax = 40;
        let scaled: Vec<C64> = (0..nmax)
            .map(|n| {
                vals.iter()
                    .enumerate()
                    .map(|(k, v)| v * C64::from_polar(1.0, -2.0 * std::f64::consts::PI * (n * k) as f64 / m as f64))
                    .sum::<C64>()
                    / m as f64
            })
            .collect();
        let top = scaled.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let floor = 1e-9 * top;
        let first = scaled.iter().position(|z| z.norm() > floor).ok_or_else(|| Error::InconclusiveSlope("σ vanishes identically".into()))?;
        let coeffs: Vec<C64> = scaled.iter().enumerate().map(|(n, z)| z / rho.powi(n as i32)).collect();
        let f = |s: f64| -> f64 { coeffs[first..].iter().enumerate().map(|(j, a)| a * s.powi((first + j) as i32)).sum::<C64>().norm() };
        let pts: Vec<(f64, f64)> = (0..=20)
            .map(|k| {
                let s = 10f64.powf(-4.0 + 2.0 * k as f64 / 20.0);
                (s.ln(), f(s).ln())
            })
            .collect();
        let n = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        let (mx, my) = (sx / n, sy / n);
        let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = sxy / sxx;
        let resid = pts.iter().map(|(x, y)| (y - my - slope * (x - mx)).abs()).fold(0.0, f64::max);
        if resid > 0.1 {
            return Err(Error::InconclusiveSlope(format!("fit residual {resid:.3}")));
        }
        let order = slope.round();
        if (slope - order).abs() > 0.05 {
            return Err(Error::InconclusiveSlope(format!("slope {slope:.4}")));
        }
        let below = scaled[..first].iter().map(|z| z.norm()).fold(0.0, f64::max) / scaled[first].norm();
        Ok(ProbeResult { order: order as u32, slope, sub_floor_ratio: below })
    }

    /// Lattice vector Ω = 2ω′m + 2ω″n.
    pub fn lattice(&self, m: &[i64], n: &[i64]) -> Vec<C64> {
        self.periods.lattice_vector(m, n)
    }

    /// Predicted σ(u+Ω)/σ(u) for Ω = 2ω′m + 2ω″n.
    pub fn quasi_factor(&self, u: &[C64], m: &[i64], n: &[i64]) -> C64 {
        let g = self.genus();
        let p = &self.periods;
        let om = self.lattice(m, n);
        let mut e = C64::new(0.0, 0.0);
        for i in 0..g {
            let eta: C64 = (0..g).map(|j| p.eta1[(i, j)] * m[j] as f64 + p.eta2[(i, j)] * n[j] as f64).sum();
            e -= 2.0 * (u[i] + 0.5 * om[i]) * eta;
        }
        let d = &self.delta;
        let mut phase = 0.0;
        for j in 0..g {
            phase += 2.0 * (d.a[j] * m[j] as f64 - d.b[j] * n[j] as f64) + (m[j] * n[j]) as f64;
        }
        let chi = if (phase.round() as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        e.exp() * chi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_count_bell_numbers() {
        let n: Vec<usize> = (0..6).map(|k| set_partitions(k).len()).collect();
        assert_eq!(n, vec![1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn leading_term_and_symmetries() {
        let curves = [
            CurveSpec::from_real(2, 5, &[0.1, -1.2, 0.3, 0.4, -0.2]).unwrap(),
            CurveSpec::new(3, 4, vec![C64::new(0.2, 0.1), C64::new(-0.3, 0.0), C64::new(0.1, -0.2), C64::new(-0.8, 0.3)]).unwrap(),
        ];
        for c in curves {
            let s = Sigma::new(&c, &PeriodOptions::default()).unwrap();
            let dev = s.taylor_deviation();
            assert!(dev < 1e-8, "({},{}) taylor {dev}", c.r, c.s);
            let u = [C64::new(0.13, -0.2), C64::new(-0.3, 0.15), C64::new(0.05, 0.1)];
            let u = &u[..c.genus];
            let neg: Vec<C64> = u.iter().map(|z| -z).collect();
            let sign = if s.young.weight().is_multiple_of(2) { 1.0 } else { -1.0 };
            assert!((s.value(&neg) - sign * s.value(u)).norm() < 1e-9 * s.value(u).norm());
            let rot = s.abel.rotate(u, 1);
            let a = c.sigma_galois_exponent() as i64;
            let pred = c.zeta_pow(a) * s.value(u);
            assert!((s.value(&rot) - pred).norm() < 1e-9 * pred.norm(), "galois");
        }
    }

    #[test]
    fn genus_two_quasi_periodicity() {
        let c = CurveSpec::from_real(2, 5, &[0.1, -1.2, 0.3, 0.4, -0.2]).unwrap();
        let s = Sigma::new(&c, &PeriodOptions::default()).unwrap();
        let u = [C64::new(0.13, -0.2), C64::new(-0.3, 0.15)];
        for (m, n) in [([1, 0], [0, 0]), ([0, 1], [0, 0]), ([0, 0], [1, 0]), ([0, 0], [0, 1]), ([1, 0], [1, 0]), ([1, 1], [0, 1])] {
            let om = s.lattice(&m, &n);
            let v: Vec<C64> = u.iter().zip(&om).map(|(a, b)| a + b).collect();
            let ratio = s.value(&v) / s.value(&u);
            let pred = s.quasi_factor(&u, &m, &n);
            assert!((ratio / pred - 1.0).norm() < 1e-8, "{m:?} {n:?} {ratio} {pred}");
        }
    }

    #[test]
    fn vanishing_order_on_trigonal_stratum() {
        let c = CurveSpec::new(3, 4, vec![C64::new(0.2, 0.1), C64::new(-0.3, 0.0), C64::new(0.1, -0.2), C64::new(-0.8, 0.3)]).unwrap();
        let s = Sigma::new(&c, &PeriodOptions::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = random_points(&c, &s.abel, 1, &mut rng);
        let r = s.vanishing_order_probe(&p[0].1).unwrap();
        assert_eq!(r.order, s.young.vanishing_order(1), "{r:?}");
    }
}
