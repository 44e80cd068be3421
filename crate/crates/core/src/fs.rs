//! Frobenius–Stickelberger determinants, μ_n functions and the residual map α_n.

use crate::curve::{AffinePoint, CurveSpec, Monomial};
use crate::error::{Error, Result};
use crate::poly;
use crate::series::series_pow;
use crate::C64;
use nalgebra::{DMatrix, DVector};

fn basis(c: &CurveSpec, n: usize) -> Vec<Monomial> {
    c.monomial_basis(n + 1)
}

/// det Ψ_n^{(ℓ̌)}: columns φ_0 … φ_n with φ_ℓ deleted (ℓ = n gives ψ_n).
pub fn fs_det(c: &CurveSpec, pts: &[AffinePoint], ell: Option<usize>) -> C64 {
    let n = pts.len();
    let ell = ell.unwrap_or(n);
    let b = basis(c, n);
    let cols: Vec<&Monomial> = (0..=n).filter(|&k| k != ell).map(|k| &b[k]).collect();
    let m = DMatrix::from_fn(n, n, |i, j| c.phi(cols[j], pts[i].x, pts[i].y));
    m.determinant()
}

pub fn psi(c: &CurveSpec, pts: &[AffinePoint]) -> C64 {
    fs_det(c, pts, None)
}

/// Vandermonde determinant in the x-coordinates.
pub fn varphi(pts: &[AffinePoint]) -> C64 {
    let n = pts.len();
    DMatrix::from_fn(n, n, |i, j| pts[i].x.powu(j as u32)).determinant()
}

/// Taylor coefficients in h of φ(x0+h, y(x0+h)) up to order `m`.
fn phi_taylor(c: &CurveSpec, mono: &Monomial, p: &AffinePoint, m: usize) -> Vec<C64> {
    let len = m + 1;
    // f(x0+h) by Taylor shift.
    let mut fcoef = Vec::with_capacity(len);
    let mut d = c.f_coeffs();
    let mut fact = 1.0;
    for k in 0..len {
        if k > 0 {
            fact *= k as f64;
        }
        fcoef.push(poly::eval(&d, p.x) / fact);
        d = poly::deriv(&d);
    }
    let f0 = fcoef[0];
    let ratio: Vec<C64> = fcoef.iter().map(|z| z / f0).collect();
    let ys: Vec<C64> = series_pow(&ratio, mono.ry as f64 / c.r as f64).iter().map(|z| z * p.y.powu(mono.ry)).collect();
    // x^a = (x0+h)^a.
    let mut xs = vec![C64::new(0.0, 0.0); len];
    let mut binom = 1.0;
    for k in 0..len.min(mono.sx as usize + 1) {
        if k > 0 {
            binom *= (mono.sx as usize + 1 - k) as f64 / k as f64;
        }
        xs[k] = p.x.powu(mono.sx - k as u32) * binom;
    }
    let mut out = vec![C64::new(0.0, 0.0); len];
    for i in 0..len {
        for j in 0..len - i {
            out[i + j] += xs[i] * ys[j];
        }
    }
    out
}

/// μ_n = Σ a_i φ_i with a_n = 1, vanishing at the given points (repeated points
/// impose vanishing of successive x-derivatives).
#[derive(Debug, Clone, serde::Serialize)]
pub struct MuFunction {
    pub n: usize,
    pub coeffs: Vec<C64>,
    #[serde(skip)]
    pub basis: Vec<Monomial>,
}

impl MuFunction {
    pub fn eval(&self, c: &CurveSpec, x: C64, y: C64) -> C64 {
        self.coeffs.iter().zip(&self.basis).map(|(a, m)| a * c.phi(m, x, y)).sum()
    }

    /// μ_{n,k} from μ_n = φ_n + Σ (−1)^{n−k} μ_{n,k} φ_k.
    pub fn mu_nk(&self, k: usize) -> C64 {
        let s = if (self.n - k).is_multiple_of(2) { 1.0 } else { -1.0 };
        self.coeffs[k] * s
    }
}

pub fn mu(c: &CurveSpec, pts: &[AffinePoint]) -> Result<MuFunction> {
    let n = pts.len();
    let b = basis(c, n);
    let mut a = DMatrix::<C64>::zeros(n, n);
    let mut rhs = DVector::<C64>::zeros(n);
    for (i, p) in pts.iter().enumerate() {
        let order = pts[..i].iter().filter(|q| (q.x - p.x).norm() < 1e-12 && (q.y - p.y).norm() < 1e-12).count();
        for k in 0..=n {
            let v = phi_taylor(c, &b[k], p, order)[order];
            if k < n {
                a[(i, k)] = v;
            } else {
                rhs[i] = -v;
            }
        }
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 1e-13 * smax {
        return Err(Error::DegenerateConfiguration(format!("rank deficient μ system (cond {:.1e})", smax / smin)));
    }
    let sol = a.lu().solve(&rhs).ok_or_else(|| Error::DegenerateConfiguration("singular μ system".into()))?;
    let mut coeffs: Vec<C64> = sol.iter().copied().collect();
    coeffs.push(C64::new(1.0, 0.0));
    Ok(MuFunction { n, coeffs, basis: b })
}

/// Norm of A_0 + A_1 y + … + A_{r−1} y^{r−1} down to a polynomial in x (r = 2, 3).
fn norm_polynomial(c: &CurveSpec, parts: &[Vec<C64>]) -> Result<Vec<C64>> {
    let f = c.f_coeffs();
    let z = vec![C64::new(0.0, 0.0)];
    let get = |k: usize| parts.get(k).cloned().unwrap_or_else(|| z.clone());
    match c.r {
        2 => {
            let (a, b) = (get(0), get(1));
            Ok(poly::add(&poly::mul(&a, &a), &poly::scale(&poly::mul(&poly::mul(&b, &b), &f), C64::new(-1.0, 0.0))))
        }
        3 => {
            let (a, b, cc) = (get(0), get(1), get(2));
            let a3 = poly::mul(&poly::mul(&a, &a), &a);
            let b3f = poly::mul(&poly::mul(&poly::mul(&b, &b), &b), &f);
            let c3f2 = poly::mul(&poly::mul(&poly::mul(&poly::mul(&cc, &cc), &cc), &f), &f);
            let abcf = poly::scale(&poly::mul(&poly::mul(&poly::mul(&a, &b), &cc), &f), C64::new(-3.0, 0.0));
            Ok(poly::add(&poly::add(&a3, &b3f), &poly::add(&c3f2, &abcf)))
        }
        _ => Err(Error::UnsupportedR),
    }
}

/// The N(n) − n further zeros of μ_n on the affine curve.
pub fn alpha_map(c: &CurveSpec, pts: &[AffinePoint]) -> Result<Vec<AffinePoint>> {
    let m = mu(c, pts)?;
    let mut parts: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0)]; c.r as usize];
    for (a, mono) in m.coeffs.iter().zip(&m.basis) {
        let p = &mut parts[mono.ry as usize];
        if p.len() <= mono.sx as usize {
            p.resize(mono.sx as usize + 1, C64::new(0.0, 0.0));
        }
        p[mono.sx as usize] += a;
    }
    let mut nrm = poly::trim(norm_polynomial(c, &parts)?, 1e-13);
    // Deflate the known zeros.
    for p in pts {
        let lead = nrm.len() - 1;
        let mut q = vec![C64::new(0.0, 0.0); lead];
        let mut carry = C64::new(0.0, 0.0);
        for k in (0..=lead).rev() {
            let v = nrm[k] + carry;
            if k == 0 {
                break;
            }
            q[k - 1] = v;
            carry = v * p.x;
        }
        nrm = q;
    }
    let xs = if nrm.len() > 1 { poly::roots(&nrm)? } else { vec![] };
    // Group roots by abscissa (multiple roots are only accurate to ~√ε, so snap
    // onto known abscissae and onto each other).
    let mut groups: Vec<(C64, usize)> = Vec::new();
    for mut x in xs {
        if let Some(p) = pts.iter().find(|p| (p.x - x).norm() < 1e-6 * (1.0 + x.norm())) {
            x = p.x;
        }
        match groups.iter_mut().find(|(g, _)| (*g - x).norm() < 1e-6 * (1.0 + x.norm())) {
            Some(g) => g.1 += 1,
            None => groups.push((x, 1)),
        }
    }
    let coef_scale = 1.0 + m.coeffs.iter().map(|z| z.norm()).sum::<f64>();
    let mut out = Vec::new();
    for (x, k) in groups {
        let lifts = c.lift_points(x).map_err(|_| Error::RootMultiplicityUnresolved)?;
        let tol = 1e-6 * coef_scale * (1.0 + x.norm()).powi((c.s * c.r) as i32);
        let mut taken: Vec<AffinePoint> = pts.iter().filter(|p| p.x == x).copied().collect();
        let mut cands: Vec<(f64, AffinePoint)> = lifts.iter().map(|p| (m.eval(c, p.x, p.y).norm(), *p)).collect();
        cands.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut got = 0;
        for (v, p) in cands {
            if got == k || v > tol {
                break;
            }
            if let Some(i) = taken.iter().position(|q| (q.y - p.y).norm() < 1e-8 * (1.0 + p.y.norm())) {
                taken.remove(i);
                continue;
            }
            out.push(p);
            got += 1;
        }
        if got < k {
            return Err(Error::RootMultiplicityUnresolved);
        }
    }
    Ok(out)
}
