//! Period matrices of first- and second-kind differentials, τ, γ and the
//! generalized Legendre relation.

pub mod homology;
pub mod second_kind;

use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::path::continue_segment;
use crate::quadrature::tanh_sinh;
use crate::series::AtInfinity;
use homology::{y_mid, HomologyBasis};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use std::collections::BTreeSet;

pub type CMat = DMatrix<C64>;

/// Σ c · x^a y^b dx/(r y^{r−1}).
#[derive(Debug, Clone, serde::Serialize)]
pub struct AlgDiff {
    pub terms: Vec<(u32, u32, C64)>,
}

impl AlgDiff {
    pub fn monomial(a: u32, b: u32) -> Self {
        AlgDiff { terms: vec![(a, b, C64::new(1.0, 0.0))] }
    }

    /// Coefficient of dx at (x, y).
    pub fn eval(&self, c: &CurveSpec, x: C64, y: C64) -> C64 {
        let r = c.r as i32;
        let mut acc = C64::new(0.0, 0.0);
        for &(a, b, k) in &self.terms {
            acc += k * x.powu(a) * y.powi(b as i32 + 1 - r);
        }
        acc / r as f64
    }

    pub fn scale(&self, s: C64) -> AlgDiff {
        AlgDiff { terms: self.terms.iter().map(|&(a, b, c)| (a, b, c * s)).collect() }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PeriodOptions {
    pub quad_tol: f64,
    pub min_level: u32,
    pub max_level: u32,
}

impl Default for PeriodOptions {
    fn default() -> Self {
        PeriodOptions { quad_tol: 1e-15, min_level: 4, max_level: 9 }
    }
}

#[derive(Debug, Clone)]
pub struct PeriodData {
    pub genus: usize,
    pub omega1: CMat,
    pub omega2: CMat,
    pub eta1: CMat,
    pub eta2: CMat,
    pub tau: CMat,
    pub gamma: CMat,
    pub legendre_residual: f64,
    pub homology: HomologyBasis,
    pub second_kind: Vec<AlgDiff>,
    /// Largest tanh–sinh level difference seen (quadrature error witness).
    pub quad_error: f64,
}

/// ∫_a^b of x^m y^n dx/(r y^{r−1}) along the segment between branch points a, b on
/// the reference branch (principal root at the midpoint), for each monomial.
pub fn segment_integrals(c: &CurveSpec, ia: usize, ib: usize, monos: &[(u32, u32)], opts: &PeriodOptions) -> (Vec<C64>, f64) {
    let (a, b) = (c.roots[ia], c.roots[ib]);
    let mid = (a + b) * 0.5;
    let ym = y_mid(c, a, b);
    let inv = 1.0 / c.r as f64;
    let r = c.r as i32;
    let d = b - a;
    let f = |t: f64, tc: f64| {
        let x = if t < 0.5 { a + d * t } else { b - d * tc };
        let mut y = ym;
        for (k, &e) in c.roots.iter().enumerate() {
            let ratio = if k == ia {
                C64::new(2.0 * t, 0.0)
            } else if k == ib {
                C64::new(2.0 * tc, 0.0)
            } else {
                (x - e) / (mid - e)
            };
            y *= ratio.powf(inv);
        }
        monos
            .iter()
            .map(|&(m, n)| x.powu(m) * y.powi(n as i32 + 1 - r) * d / c.r as f64)
            .collect::<Vec<_>>()
    };
    let (v, err) = tanh_sinh(&f, monos.len(), opts.quad_tol, opts.min_level, opts.max_level);
    (v, err)
}

/// Periods of the given differentials over the elementary cycles: rows are
/// differentials, columns elementary cycles.
pub fn elementary_periods(c: &CurveSpec, h: &HomologyBasis, diffs: &[AlgDiff], opts: &PeriodOptions) -> (CMat, f64) {
    let monos: Vec<(u32, u32)> = diffs
        .iter()
        .flat_map(|d| d.terms.iter().map(|&(a, b, _)| (a, b)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut out = CMat::zeros(diffs.len(), h.cycles.len());
    let mut qerr: f64 = 0.0;
    for &(ia, ib) in &h.edges {
        let (ints, err) = segment_integrals(c, ia, ib, &monos, opts);
        qerr = qerr.max(err);
        for (ci, cy) in h.cycles.iter().enumerate() {
            if cy.a != ia || cy.b != ib {
                continue;
            }
            for (di, d) in diffs.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &(a, b, k) in &d.terms {
                    let e = ((b + 1) % c.r) as i64;
                    let mi = monos.iter().position(|&m| m == (a, b)).unwrap();
                    let factor = c.zeta_pow(cy.sheet as i64 * e) * (C64::new(1.0, 0.0) - c.zeta_pow(e));
                    acc += k * factor * ints[mi];
                }
                out[(di, ci)] = acc;
            }
        }
    }
    (out, qerr)
}

/// Combine elementary periods into α- and β-periods using the symplectic transform.
pub fn to_symplectic(elem: &CMat, s: &[Vec<i64>]) -> (CMat, CMat) {
    let n = elem.nrows();
    let g = s.len() / 2;
    let comb = |row: usize, cyc: &Vec<i64>| -> C64 {
        cyc.iter().enumerate().map(|(k, &m)| elem[(row, k)] * m as f64).sum()
    };
    let a = CMat::from_fn(n, g, |i, j| comb(i, &s[j]));
    let b = CMat::from_fn(n, g, |i, j| comb(i, &s[g + j]));
    (a, b)
}

pub fn first_kind_diffs(c: &CurveSpec) -> Vec<AlgDiff> {
    c.holomorphic_monomials().iter().map(|m| AlgDiff::monomial(m.sx, m.ry)).collect()
}

pub fn second_kind_diffs(c: &CurveSpec) -> Vec<AlgDiff> {
    if c.is_hyperelliptic() {
        second_kind::hyperelliptic_eta(c)
    } else {
        let inf = AtInfinity::new(c, 8 * c.genus + 16);
        second_kind::generic_eta(c, &inf)
    }
}

/// ‖M J Mᵀ − 2πi J‖_max with M = [[2ω′, 2ω″], [2η′, 2η″]], J = [[0, −1], [1, 0]].
pub fn legendre_residual(w1: &CMat, w2: &CMat, e1: &CMat, e2: &CMat) -> f64 {
    let g = w1.nrows();
    let mut m = CMat::zeros(2 * g, 2 * g);
    m.view_mut((0, 0), (g, g)).copy_from(&(w1 * C64::new(2.0, 0.0)));
    m.view_mut((0, g), (g, g)).copy_from(&(w2 * C64::new(2.0, 0.0)));
    m.view_mut((g, 0), (g, g)).copy_from(&(e1 * C64::new(2.0, 0.0)));
    m.view_mut((g, g), (g, g)).copy_from(&(e2 * C64::new(2.0, 0.0)));
    let mut j = CMat::zeros(2 * g, 2 * g);
    for i in 0..g {
        j[(i, g + i)] = C64::new(-1.0, 0.0);
        j[(g + i, i)] = C64::new(1.0, 0.0);
    }
    let lhs = &m * &j * m.transpose();
    let rhs = &j * C64::new(0.0, 2.0 * std::f64::consts::PI);
    (lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn is_positive_definite(m: &DMatrix<f64>) -> bool {
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigenvalues().iter().all(|&l| l > 0.0)
}

impl PeriodData {
    pub fn compute(c: &CurveSpec, opts: &PeriodOptions) -> Result<Self> {
        let h = homology::homology_basis(c)?;
        Self::with_basis(c, h, opts)
    }

    pub fn with_basis(c: &CurveSpec, h: HomologyBasis, opts: &PeriodOptions) -> Result<Self> {
        let g = c.genus;
        let mut diffs = first_kind_diffs(c);
        let etas = second_kind_diffs(c);
        diffs.extend(etas.iter().cloned());
        let (elem, qerr) = elementary_periods(c, &h, &diffs, opts);
        let (pa, pb) = to_symplectic(&elem, &h.transform);
        let half = C64::new(0.5, 0.0);
        let omega1 = pa.rows(0, g).into_owned() * half;
        let omega2 = pb.rows(0, g).into_owned() * half;
        let eta1 = pa.rows(g, g).into_owned() * half;
        let eta2 = pb.rows(g, g).into_owned() * half;
        let w1inv = omega1.clone().try_inverse().ok_or(Error::NonPositiveTau)?;
        let tau = &w1inv * &omega2;
        let tau = (&tau + tau.transpose()) * half;
        if !is_positive_definite(&tau.map(|z| z.im)) {
            return Err(Error::NonPositiveTau);
        }
        let gamma = &eta1 * &w1inv;
        let legendre = legendre_residual(&omega1, &omega2, &eta1, &eta2);
        Ok(PeriodData {
            genus: g,
            omega1,
            omega2,
            eta1,
            eta2,
            tau,
            gamma,
            legendre_residual: legendre,
            homology: h,
            second_kind: etas,
            quad_error: qerr,
        })
    }

    /// Recompute the Legendre residual from the stored blocks and reject it above `tol`.
    pub fn check_legendre(&self, tol: f64) -> Result<f64> {
        let r = legendre_residual(&self.omega1, &self.omega2, &self.eta1, &self.eta2);
        if r.is_finite() && r < tol {
            Ok(r)
        } else {
            Err(Error::LegendreViolation(r))
        }
    }

    /// (2ω′)^{-1}: maps u to normalized theta coordinates.
    pub fn normalizer(&self) -> CMat {
        (&self.omega1 * C64::new(2.0, 0.0)).try_inverse().unwrap()
    }

    /// Lattice vector 2ω′m + 2ω″n.
    pub fn lattice_vector(&self, m: &[i64], n: &[i64]) -> Vec<C64> {
        let g = self.genus;
        (0..g)
            .map(|i| {
                (0..g)
                    .map(|j| self.omega1[(i, j)] * (2 * m[j]) as f64 + self.omega2[(i, j)] * (2 * n[j]) as f64)
                    .sum()
            })
            .collect()
    }
}

/// Continue the reference branch of y from the midpoint of a segment to x (test helper).
pub fn reference_y(c: &CurveSpec, ia: usize, ib: usize, x: C64) -> C64 {
    let (a, b) = (c.roots[ia], c.roots[ib]);
    continue_segment(c, (a + b) * 0.5, x, y_mid(c, a, b))
}
