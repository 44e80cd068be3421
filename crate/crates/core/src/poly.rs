//! Dense univariate polynomials with complex coefficients (ascending order).

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

pub fn eval(p: &[C64], x: C64) -> C64 {
    p.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

pub fn deriv(p: &[C64]) -> Vec<C64> {
    p.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect()
}

pub fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn add(a: &[C64], b: &[C64]) -> Vec<C64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or_default() + b.get(k).copied().unwrap_or_default())
        .collect()
}

pub fn scale(a: &[C64], s: C64) -> Vec<C64> {
    a.iter().map(|&c| c * s).collect()
}

/// Drop trailing coefficients that are negligible relative to the largest one.
pub fn trim(mut p: Vec<C64>, rel: f64) -> Vec<C64> {
    let m = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
    while p.len() > 1 && p.last().unwrap().norm() <= rel * m {
        p.pop();
    }
    p
}

/// All roots of `p` by Aberth–Ehrlich iteration followed by Newton polishing.
pub fn roots(p: &[C64]) -> Result<Vec<C64>> {
    let p = trim(p.to_vec(), 0.0);
    let n = p.len() - 1;
    if n == 0 {
        return Ok(vec![]);
    }
    let lead = p[n];
    let monic: Vec<C64> = p.iter().map(|&c| c / lead).collect();
    let dp = deriv(&monic);
    // Cauchy bound for the initial circle.
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(0.5 * radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    let mut converged = false;
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let pv = eval(&monic, z[i]);
            let dv = eval(&dp, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
            let s: C64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            z[i] -= w;
            max_step = max_step.max(w.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::RootFindingFailure);
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let dv = eval(&dp, *zi);
            if dv.norm() == 0.0 {
                break;
            }
            *zi -= eval(&monic, *zi) / dv;
        }
    }
    Ok(z)
}
