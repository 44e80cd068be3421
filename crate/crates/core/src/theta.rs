//! Riemann theta functions with half-integer characteristics and their
//! derivatives with respect to linear coordinates u (z = A u).

use crate::periods::CMat;
use crate::C64;
use nalgebra::DMatrix;
use std::f64::consts::PI;

/// Characteristic [δ′; δ″] with entries in {0, 1/2}.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Characteristic {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl Characteristic {
    pub fn zero(g: usize) -> Self {
        Characteristic { a: vec![0.0; g], b: vec![0.0; g] }
    }

    /// All 4^g half-integer characteristics.
    pub fn all(g: usize) -> Vec<Self> {
        (0..1usize << (2 * g))
            .map(|bits| Characteristic {
                a: (0..g).map(|i| 0.5 * ((bits >> i) & 1) as f64).collect(),
                b: (0..g).map(|i| 0.5 * ((bits >> (g + i)) & 1) as f64).collect(),
            })
            .collect()
    }

    /// +1 for even, −1 for odd.
    pub fn parity(&self) -> i32 {
        let s: f64 = self.a.iter().zip(&self.b).map(|(x, y)| 4.0 * x * y).sum();
        if (s.round() as i64) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn label(&self) -> String {
        let row = |v: &[f64]| v.iter().map(|x| if *x > 0.0 { "1" } else { "0" }).collect::<Vec<_>>().join(" ");
        format!("[{} ; {}]/2", row(&self.a), row(&self.b))
    }
}

#[derive(Debug, Clone)]
pub struct ThetaFn {
    pub g: usize,
    pub tau: CMat,
    /// z = A u.
    pub a: CMat,
    y_inv: DMatrix<f64>,
    /// Relative truncation level (natural log of the neglected ratio).
    pub digits: f64,
}

impl ThetaFn {
    pub fn new(tau: CMat, a: CMat) -> Self {
        let g = tau.nrows();
        let y = tau.map(|z| z.im);
        let y_inv = y.try_inverse().expect("Im τ must be invertible");
        ThetaFn { g, tau, a, y_inv, digits: 40.0 }
    }

    /// Theta in plain z coordinates.
    pub fn standard(tau: CMat) -> Self {
        let g = tau.nrows();
        Self::new(tau, CMat::identity(g, g))
    }

    fn z_of(&self, u: &[C64]) -> Vec<C64> {
        (0..self.g).map(|i| (0..self.g).map(|j| self.a[(i, j)] * u[j]).sum()).collect()
    }

    /// Summation nodes m = n + δ′ inside the ellipsoid carrying all significant terms.
    fn nodes(&self, z: &[C64], shift: &[f64], order: usize) -> Vec<Vec<f64>> {
        let g = self.g;
        let y = self.tau.map(|t| t.im);
        let zi = DMatrix::from_fn(g, 1, |i, _| z[i].im);
        let center = -(&self.y_inv * zi);
        let r2 = (self.digits + 4.0 * order as f64 + 4.0) / PI;
        let half: Vec<i64> = (0..g).map(|k| (r2 * self.y_inv[(k, k)]).sqrt().ceil() as i64 + 1).collect();
        let mid: Vec<i64> = (0..g).map(|k| (center[k] - shift[k]).round() as i64).collect();
        let mut out = Vec::new();
        let mut idx = vec![0i64; g];
        for k in 0..g {
            idx[k] = -half[k];
        }
        loop {
            let m: Vec<f64> = (0..g).map(|k| (mid[k] + idx[k]) as f64 + shift[k]).collect();
            let mut q = 0.0;
            for i in 0..g {
                for j in 0..g {
                    q += (m[i] - center[i]) * y[(i, j)] * (m[j] - center[j]);
                }
            }
            if q <= r2 {
                out.push(m);
            }
            let mut k = 0;
            loop {
                if k == g {
                    return out;
                }
                idx[k] += 1;
                if idx[k] > half[k] {
                    idx[k] = -half[k];
                    k += 1;
                } else {
                    break;
                }
            }
        }
    }

    /// Derivatives ∂_{u_{i1}}…∂_{u_{ik}} θ[δ](A u) for each index list in `orders`
    /// (an empty list gives θ itself).
    pub fn derivs(&self, u: &[C64], ch: &Characteristic, orders: &[Vec<usize>]) -> Vec<C64> {
        let g = self.g;
        let z = self.z_of(u);
        let maxo = orders.iter().map(|o| o.len()).max().unwrap_or(0);
        let nodes = self.nodes(&z, &ch.a, maxo);
        let two_pi_i = C64::new(0.0, 2.0 * PI);
        let exps: Vec<C64> = nodes
            .iter()
            .map(|m| {
                let mut e = C64::new(0.0, 0.0);
                for i in 0..g {
                    for j in 0..g {
                        e += self.tau[(i, j)] * m[i] * m[j];
                    }
                    e += 2.0 * m[i] * (z[i] + ch.b[i]);
                }
                C64::new(0.0, PI) * e
            })
            .collect();
        let shift = exps.iter().map(|e| e.re).fold(f64::NEG_INFINITY, f64::max);
        let mut out = vec![C64::new(0.0, 0.0); orders.len()];
        for (m, e) in nodes.iter().zip(&exps) {
            let w = (e - shift).exp();
            let v: Vec<C64> = (0..g).map(|j| two_pi_i * (0..g).map(|i| self.a[(i, j)] * m[i]).sum::<C64>()).collect();
            for (o, acc) in orders.iter().zip(out.iter_mut()) {
                let mut f = w;
                for &k in o {
                    f *= v[k];
                }
                *acc += f;
            }
        }
        let scale = shift.exp();
        out.iter().map(|x| x * scale).collect()
    }

    pub fn value(&self, u: &[C64], ch: &Characteristic) -> C64 {
        self.derivs(u, ch, &[vec![]])[0]
    }

    pub fn gradient(&self, u: &[C64], ch: &Characteristic) -> Vec<C64> {
        let orders: Vec<Vec<usize>> = (0..self.g).map(|i| vec![i]).collect();
        self.derivs(u, ch, &orders)
    }
}
