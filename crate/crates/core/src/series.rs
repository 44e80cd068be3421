//! Truncated Laurent series in the local parameter t at ∞ (x = t^{−r}).

use crate::curve::CurveSpec;
use num_complex::Complex64 as C64;

/// Σ_k coeffs[k] t^{low+k}, truncated.
#[derive(Debug, Clone)]
pub struct Laurent {
    pub low: i64,
    pub coeffs: Vec<C64>,
}

impl Laurent {
    pub fn coeff(&self, k: i64) -> C64 {
        let i = k - self.low;
        if i < 0 || i as usize >= self.coeffs.len() {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[i as usize]
        }
    }

    /// Highest exponent represented exactly.
    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        let n = self.coeffs.len().min(o.coeffs.len());
        let mut c = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            for j in 0..n - i {
                c[i + j] += self.coeffs[i] * o.coeffs[j];
            }
        }
        Laurent { low: self.low + o.low, coeffs: c }
    }

    pub fn scale(&self, s: C64) -> Laurent {
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let low = self.low.min(o.low);
        let high = self.high().min(o.high());
        let coeffs = (low..=high).map(|k| self.coeff(k) + o.coeff(k)).collect();
        Laurent { low, coeffs }
    }

    /// Termwise antiderivative; requires zero t^{−1} coefficient.
    pub fn integrate(&self) -> Laurent {
        let coeffs = (self.low..=self.high())
            .map(|k| if k == -1 { C64::new(0.0, 0.0) } else { self.coeff(k) / (k + 1) as f64 })
            .collect();
        Laurent { low: self.low + 1, coeffs }
    }

    pub fn residue(&self) -> C64 {
        self.coeff(-1)
    }

    pub fn eval(&self, t: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc * t.powi(self.low as i32)
    }
}

/// A^p for a power series with a_0 ≠ 0 (J.C.P. Miller recurrence), principal a_0^p.
pub fn series_pow(a: &[C64], p: f64) -> Vec<C64> {
    let n = a.len();
    let mut b = vec![C64::new(0.0, 0.0); n];
    b[0] = a[0].powf(p);
    for m in 1..n {
        let mut acc = C64::new(0.0, 0.0);
        for k in 1..=m {
            acc += a[k] * b[m - k] * ((p + 1.0) * k as f64 - m as f64);
        }
        b[m] = acc / (m as f64 * a[0]);
    }
    b
}

/// Expansions at ∞ with x = t^{−r}, y = t^{−s} Y(t), Y = (f(x)/x^s)^{1/r}.
#[derive(Debug, Clone)]
pub struct AtInfinity {
    pub r: u32,
    pub s: u32,
    pub genus: usize,
    /// Y(t) as a power series in t.
    pub y_series: Vec<C64>,
    pub len: usize,
}

impl AtInfinity {
    pub fn new(c: &CurveSpec, len: usize) -> Self {
        let r = c.r as usize;
        let mut base = vec![C64::new(0.0, 0.0); len];
        base[0] = C64::new(1.0, 0.0);
        for (j, &l) in c.lambda.iter().enumerate() {
            let k = (j + 1) * r;
            if k < len {
                base[k] = l;
            }
        }
        let y_series = series_pow(&base, 1.0 / c.r as f64);
        AtInfinity { r: c.r, s: c.s, genus: c.genus, y_series, len }
    }

    /// Y^p as a power series.
    pub fn y_pow(&self, p: i64) -> Vec<C64> {
        series_pow(&self.y_series, p as f64)
    }

    /// The differential x^a y^b dx/(r y^{r−1}) = −t^{2g−2−N} Y^{b+1−r} dt.
    pub fn differential(&self, a: u32, b: u32) -> Laurent {
        let n = (a * self.r + b * self.s) as i64;
        let low = 2 * self.genus as i64 - 2 - n;
        let yp = self.y_pow(b as i64 + 1 - self.r as i64);
        Laurent { low, coeffs: yp.iter().map(|c| -c).collect() }
    }

    pub fn x(&self) -> Laurent {
        let mut coeffs = vec![C64::new(0.0, 0.0); self.len];
        coeffs[0] = C64::new(1.0, 0.0);
        Laurent { low: -(self.r as i64), coeffs }
    }

    pub fn y(&self) -> Laurent {
        Laurent { low: -(self.s as i64), coeffs: self.y_series.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn y_series_matches_curve() {
        let c = CurveSpec::new(3, 4, vec![C64::new(0.3, 0.1), C64::new(-0.2, 0.0), C64::new(0.1, 0.4), C64::new(-1.0, 0.2)]).unwrap();
        let inf = AtInfinity::new(&c, 120);
        let t = C64::new(0.2, 0.05);
        let x = t.powi(-3);
        let y = inf.y().eval(t);
        assert!((y.powi(3) - c.f(x)).norm() < 1e-10 * c.f(x).norm());
    }

    #[test]
    fn differential_orders() {
        let c = CurveSpec::from_real(2, 9, &[0.1, 0.0, 0.2, 0.0, 0.0, 0.3, 0.0, 0.0, -1.0]).unwrap();
        let inf = AtInfinity::new(&c, 40);
        for m in c.holomorphic_monomials() {
            let d = inf.differential(m.sx, m.ry);
            assert_eq!(d.low, 2 * 4 - m.order as i64 - 2);
            assert!((d.coeff(d.low) + 1.0).norm() < 1e-15);
        }
    }
}
