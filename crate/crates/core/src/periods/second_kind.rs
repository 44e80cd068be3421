//! Algebraic differentials of the second kind with poles only at ∞.

use super::AlgDiff;
use crate::curve::CurveSpec;
use crate::series::{AtInfinity, Laurent};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Laurent expansion at ∞ of an algebraic differential.
pub fn expand(inf: &AtInfinity, d: &AlgDiff) -> Laurent {
    let mut acc: Option<Laurent> = None;
    for &(a, b, c) in &d.terms {
        let l = inf.differential(a, b).scale(c);
        acc = Some(match acc {
            None => l,
            Some(x) => x.add(&l),
        });
    }
    acc.unwrap_or(Laurent { low: 0, coeffs: vec![zero(); inf.len] })
}

/// Klein's symmetric polynomial for y² = f: F(x,z) = Σ_k x^k z^k (2c_{2k} + c_{2k+1}(x+z)).
/// Returned as F[p][q] = coefficient of x^p z^q.
pub fn klein_polynomial(c: &CurveSpec) -> Vec<Vec<C64>> {
    let fc = c.f_coeffs();
    let g = c.genus;
    let n = g + 2;
    let mut f = vec![vec![zero(); n]; n];
    for k in 0..=g {
        f[k][k] += fc[2 * k] * 2.0;
        if 2 * k + 1 < fc.len() {
            f[k + 1][k] += fc[2 * k + 1];
            f[k][k + 1] += fc[2 * k + 1];
        }
    }
    f
}

/// Second-kind basis η_1..η_g for (2,2g+1) from the Klein bidifferential:
/// G(x,z) = (F(x,z) − 2f(z) − f'(z)(x−z))/(x−z)² = Σ_i x^{i−1} g_i(z), η_i = g_i(z) dz/(2y).
pub fn hyperelliptic_eta(c: &CurveSpec) -> Vec<AlgDiff> {
    let g = c.genus;
    let fc = c.f_coeffs();
    let nz = fc.len() + 1;
    let nx = g + 2;
    // Numerator as polynomial in x with coefficients in z: num[p][q] for x^p z^q.
    let mut num = vec![vec![zero(); nz]; nx];
    let kp = klein_polynomial(c);
    for p in 0..kp.len() {
        for q in 0..kp[p].len() {
            num[p][q] += kp[p][q];
        }
    }
    for (q, &a) in fc.iter().enumerate() {
        num[0][q] -= a * 2.0;
    }
    // −f'(z)(x − z) = −x f'(z) + z f'(z)
    for q in 1..fc.len() {
        let d = fc[q] * q as f64;
        num[1][q - 1] -= d;
        num[0][q] += d;
    }
    // Divide by x² − 2z x + z² (monic in x), highest x-degree first.
    let mut rem = num;
    let mut quot = vec![vec![zero(); nz + 2]; nx];
    for p in (2..nx).rev() {
        let lead = rem[p].clone();
        for q in 0..nz {
            if lead[q] == zero() {
                continue;
            }
            quot[p - 2][q] += lead[q];
            rem[p][q] -= lead[q];
            // subtract lead·x^{p−2}·(−2z x + z²)
            if q + 1 < nz {
                rem[p - 1][q + 1] += lead[q] * 2.0;
            }
            if q + 2 < nz {
                rem[p - 2][q + 2] -= lead[q];
            }
        }
    }
    debug_assert!(rem.iter().flatten().all(|v| v.norm() < 1e-9));
    (0..g)
        .map(|i| AlgDiff {
            terms: quot[i].iter().enumerate().filter(|(_, v)| v.norm() > 0.0).map(|(q, &v)| (q as u32, 0, v)).collect(),
        })
        .collect()
}

/// Second-kind basis for a general cyclic curve, fixed by
/// Res_∞(u_i η_j) = δ_ij, Res_∞(∫η_i · η_j) = 0 for i<j, supports on the
/// monomials whose pole order minus one is a gap, and holomorphic corrections
/// strictly above the diagonal.
pub fn generic_eta(c: &CurveSpec, inf: &AtInfinity) -> Vec<AlgDiff> {
    let g = c.genus;
    let gaps = c.gaps();
    let hol = c.holomorphic_monomials();
    let u: Vec<Laurent> = hol.iter().map(|m| inf.differential(m.sx, m.ry).integrate()).collect();
    let hooks: Vec<u32> = hol.iter().map(|m| 2 * g as u32 - 1 - m.order).collect();
    // Candidate monomials: order N ≥ 2g with N − 2g + 1 a gap.
    let cands: Vec<_> = c
        .monomial_basis(4 * g + 4)
        .into_iter()
        .filter(|m| m.order >= 2 * g as u32 && gaps.contains(&(m.order + 1 - 2 * g as u32)))
        .collect();
    let mut etas: Vec<AlgDiff> = Vec::new();
    for j in 0..g {
        // η_j has pole order w_j + 1, i.e. uses candidates with N − 2g + 1 ≤ w_j.
        let supp: Vec<_> = cands.iter().filter(|m| m.order + 1 - 2 * g as u32 <= hooks[j]).collect();
        let rows: Vec<usize> = (0..g).filter(|&i| hooks[i] <= hooks[j]).collect();
        assert_eq!(rows.len(), supp.len());
        let n = supp.len();
        let mut a = DMatrix::<C64>::zeros(n, n);
        let mut rhs = DMatrix::<C64>::zeros(n, 1);
        for (ri, &i) in rows.iter().enumerate() {
            for (ci, m) in supp.iter().enumerate() {
                a[(ri, ci)] = u[i].mul(&inf.differential(m.sx, m.ry)).residue();
            }
            rhs[(ri, 0)] = if i == j { C64::new(1.0, 0.0) } else { zero() };
        }
        let sol = a.lu().solve(&rhs).expect("second-kind system singular");
        etas.push(AlgDiff { terms: supp.iter().enumerate().map(|(ci, m)| (m.sx, m.ry, sol[(ci, 0)])).collect() });
    }
    // Symmetrize with holomorphic corrections.
    let exps: Vec<Laurent> = etas.iter().map(|e| expand(inf, e)).collect();
    for i in 0..g {
        for j in i + 1..g {
            let rij = exps[i].integrate().mul(&exps[j]).residue();
            let m = &hol[j];
            etas[i].terms.push((m.sx, m.ry, -rij));
        }
    }
    etas
}

/// Residue pairings used as algebraic sanity checks: (Res(u_i η_j), Res(∫η_i η_j)).
pub fn residue_pairings(c: &CurveSpec, inf: &AtInfinity, etas: &[AlgDiff]) -> (DMatrix<C64>, DMatrix<C64>) {
    let g = c.genus;
    let hol = c.holomorphic_monomials();
    let u: Vec<Laurent> = hol.iter().map(|m| inf.differential(m.sx, m.ry).integrate()).collect();
    let e: Vec<Laurent> = etas.iter().map(|d| expand(inf, d)).collect();
    let p = DMatrix::from_fn(g, g, |i, j| u[i].mul(&e[j]).residue());
    let q = DMatrix::from_fn(g, g, |i, j| e[i].integrate().mul(&e[j]).residue());
    (p, q)
}
