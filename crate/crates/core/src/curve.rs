//! Cyclic (r,s) curves y^r = f(x) and their pole-order combinatorics at infinity.

use crate::error::{Error, Result};
use crate::poly;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub r: u32,
    pub s: u32,
    /// λ_1..λ_s, f(x) = x^s + λ_1 x^{s-1} + … + λ_s.
    pub lambda: Vec<C64>,
    pub genus: usize,
    /// The s finite branch points (roots of f).
    pub roots: Vec<C64>,
}

/// One monomial φ_n = x^{s_n} y^{r_n} with pole order N(n) at ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Monomial {
    pub n: usize,
    pub sx: u32,
    pub ry: u32,
    pub order: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffinePoint {
    pub x: C64,
    pub y: C64,
    pub sheet: u32,
}

/// JSON form `{"r":3,"s":4,"lambda":[[re,im],...]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CurveJson {
    pub r: u32,
    pub s: u32,
    #[serde(default)]
    pub lambda: Vec<[f64; 2]>,
}

impl CurveSpec {
    pub fn new(r: u32, s: u32, lambda: Vec<C64>) -> Result<Self> {
        if r < 2 || r >= s {
            return Err(Error::BadDegrees);
        }
        if gcd(r, s) != 1 {
            return Err(Error::NotCoprime { r, s });
        }
        if lambda.len() != s as usize {
            return Err(Error::BadArity { expected: s as usize, got: lambda.len() });
        }
        let genus = ((r - 1) * (s - 1) / 2) as usize;
        let mut c = CurveSpec { r, s, lambda, genus, roots: vec![] };
        let roots = poly::roots(&c.f_coeffs())?;
        // Discriminant of a monic polynomial: product of squared root differences.
        let mut disc = C64::new(1.0, 0.0);
        let mut min_sep = f64::INFINITY;
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                let d = roots[i] - roots[j];
                disc *= d * d;
                min_sep = min_sep.min(d.norm());
            }
        }
        if disc.norm() < 1e-12 || min_sep < 1e-6 {
            return Err(Error::SingularCurve(disc.norm()));
        }
        c.roots = roots;
        Ok(c)
    }

    pub fn from_real(r: u32, s: u32, lambda: &[f64]) -> Result<Self> {
        Self::new(r, s, lambda.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn from_json(j: &CurveJson) -> Result<Self> {
        Self::new(j.r, j.s, j.lambda.iter().map(|p| C64::new(p[0], p[1])).collect())
    }

    pub fn to_json(&self) -> CurveJson {
        CurveJson { r: self.r, s: self.s, lambda: self.lambda.iter().map(|c| [c.re, c.im]).collect() }
    }

    pub fn is_hyperelliptic(&self) -> bool {
        self.r == 2
    }

    pub fn is_trigonal_34(&self) -> bool {
        self.r == 3 && self.s == 4
    }

    /// Coefficients of f in ascending powers of x.
    pub fn f_coeffs(&self) -> Vec<C64> {
        let s = self.s as usize;
        let mut c = vec![C64::new(0.0, 0.0); s + 1];
        c[s] = C64::new(1.0, 0.0);
        for (j, &l) in self.lambda.iter().enumerate() {
            c[s - 1 - j] = l;
        }
        c
    }

    pub fn f(&self, x: C64) -> C64 {
        poly::eval(&self.f_coeffs(), x)
    }

    pub fn df(&self, x: C64) -> C64 {
        poly::eval(&poly::deriv(&self.f_coeffs()), x)
    }

    pub fn zeta(&self) -> C64 {
        C64::from_polar(1.0, 2.0 * PI / self.r as f64)
    }

    pub fn zeta_pow(&self, k: i64) -> C64 {
        let r = self.r as i64;
        C64::from_polar(1.0, 2.0 * PI * (k.rem_euclid(r)) as f64 / r as f64)
    }

    pub fn max_root(&self) -> f64 {
        self.roots.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Monomials φ_0..φ_upto ordered by pole order at ∞.
    pub fn monomial_basis(&self, upto: usize) -> Vec<Monomial> {
        let (r, s) = (self.r, self.s);
        let mut out = Vec::new();
        let mut order = 0u32;
        while out.len() <= upto {
            // order = a r + b s with b < r has at most one representation.
            for b in 0..r {
                if order >= b * s && (order - b * s).is_multiple_of(r) {
                    out.push(Monomial { n: out.len(), sx: (order - b * s) / r, ry: b, order });
                    break;
                }
            }
            order += 1;
        }
        out
    }

    /// The first g basis monomials (those giving holomorphic differentials).
    pub fn holomorphic_monomials(&self) -> Vec<Monomial> {
        let mut m = self.monomial_basis(self.genus);
        m.truncate(self.genus);
        m
    }

    /// Weierstrass gaps at ∞.
    pub fn gaps(&self) -> Vec<u32> {
        let ords: Vec<u32> = self.monomial_basis(2 * self.genus).iter().map(|m| m.order).collect();
        (1..2 * self.genus as u32).filter(|k| !ords.contains(k)).collect()
    }

    /// Exponents e_n with ζ̂u_n = ζ^{e_n} u_n (n = 1..g).
    pub fn galois_exponents(&self) -> Vec<u32> {
        self.holomorphic_monomials().iter().map(|m| (m.ry + 1) % self.r).collect()
    }

    /// Exponent a with σ(ζ̂u) = ζ^a σ(u).
    pub fn sigma_galois_exponent(&self) -> u32 {
        let weight = crate::young::YoungData::new(self).weight();
        let last = self.holomorphic_monomials().last().map(|m| m.ry).unwrap_or(0);
        (weight * (last + 1)) % self.r
    }

    pub fn phi(&self, m: &Monomial, x: C64, y: C64) -> C64 {
        x.powu(m.sx) * y.powu(m.ry)
    }

    /// Anchor on the positive real axis, well outside all branch points.
    pub fn anchor(&self) -> f64 {
        3.0 * (1.0 + self.max_root())
    }

    /// Detour clearance around branch points.
    pub fn clearance(&self) -> f64 {
        let mut m = f64::INFINITY;
        for i in 0..self.roots.len() {
            for j in i + 1..self.roots.len() {
                m = m.min((self.roots[i] - self.roots[j]).norm());
            }
        }
        (0.25 * m).min(0.25)
    }

    /// Sheet-0 value of y at the anchor: y/x^{s/r} → 1 principal.
    pub fn anchor_y(&self) -> C64 {
        let x0 = self.anchor();
        let ratio = self.f(C64::new(x0, 0.0)) / x0.powi(self.s as i32);
        x0.powf(self.s as f64 / self.r as f64) * ratio.powf(1.0 / self.r as f64)
    }

    /// The r points over x, labelled by sheet (continuation from the anchor along
    /// the canonical path; sheet j is ζ^j times sheet 0).
    pub fn lift_points(&self, x: C64) -> Result<Vec<AffinePoint>> {
        if self.f(x).norm() < 1e-12 * (1.0 + x.norm()).powi(self.s as i32) {
            return Err(Error::BranchPoint(format!("{x}")));
        }
        let path = crate::path::canonical_path(self, x);
        let y0 = crate::path::continue_y(self, &path, self.anchor_y());
        Ok((0..self.r)
            .map(|j| AffinePoint { x, y: y0 * self.zeta_pow(j as i64), sheet: j })
            .collect())
    }

    /// The lift over x closest to the given y (sheet label recovered).
    pub fn point(&self, x: C64, y: C64) -> Result<AffinePoint> {
        let lifts = self.lift_points(x)?;
        let best = lifts
            .into_iter()
            .min_by(|a, b| (a.y - y).norm().partial_cmp(&(b.y - y).norm()).unwrap())
            .unwrap();
        if (best.y - y).norm() > 1e-6 * (1.0 + y.norm()) {
            return Err(Error::Invalid(format!("({x}, {y}) is not on the curve")));
        }
        Ok(AffinePoint { x, y, sheet: best.sheet })
    }

    /// Points (x, ζ^k y) for k=1..r-1: a divisor representing [−1]w(p).
    pub fn involution_divisor(&self, p: &AffinePoint) -> Result<Vec<AffinePoint>> {
        if self.r > 3 {
            return Err(Error::UnsupportedR);
        }
        if p.y.norm() < 1e-14 {
            return Ok(vec![*p]);
        }
        Ok((1..self.r)
            .map(|k| AffinePoint {
                x: p.x,
                y: p.y * self.zeta_pow(k as i64),
                sheet: (p.sheet + k) % self.r,
            })
            .collect())
    }
}
