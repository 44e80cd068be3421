//! Exact Schur machinery: h_n in power-sum variables, Jacobi–Trudi determinants,
//! and the leading term of σ at the origin.

use crate::curve::CurveSpec;
use crate::young::YoungData;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Polynomial with exact rational coefficients in variables of declared weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPolynomial {
    pub weights: Vec<u32>,
    pub terms: BTreeMap<Vec<u32>, Q>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

impl WeightedPolynomial {
    pub fn zero(weights: Vec<u32>) -> Self {
        WeightedPolynomial { weights, terms: BTreeMap::new() }
    }

    pub fn constant(weights: Vec<u32>, c: Q) -> Self {
        let mut p = Self::zero(weights);
        if !c.is_zero() {
            let n = p.weights.len();
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    pub fn var(weights: Vec<u32>, i: usize) -> Self {
        let mut e = vec![0; weights.len()];
        e[i] = 1;
        let mut p = Self::zero(weights);
        p.terms.insert(e, Q::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomial_weight(&self, e: &[u32]) -> u32 {
        e.iter().zip(&self.weights).map(|(a, w)| a * w).sum()
    }

    /// Common weight of all terms, if homogeneous.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| self.monomial_weight(e));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    fn insert(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut out = Self::zero(self.weights.clone());
        for (e, c) in &self.terms {
            out.insert(e.clone(), c * s);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.weights.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(e, c1 * c2);
            }
        }
        out
    }

    /// ∂/∂x_i.
    pub fn diff(&self, i: usize) -> Self {
        let mut out = Self::zero(self.weights.clone());
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.insert(e2, c * Q::from_integer(BigInt::from(e[i])));
            }
        }
        out
    }

    pub fn coeff(&self, e: &[u32]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval_q(&self, x: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &a) in x.iter().zip(e) {
                for _ in 0..a {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_c(&self, x: &[num_complex::Complex64]) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = num_complex::Complex64::new(c.to_f64().unwrap(), 0.0);
            for (xi, &a) in x.iter().zip(e) {
                t *= xi.powu(a);
            }
            acc += t;
        }
        acc
    }

    /// Replace variable i by the polynomial images[i] (all images share weights).
    pub fn substitute(&self, images: &[WeightedPolynomial]) -> WeightedPolynomial {
        let target = images[0].weights.clone();
        let mut out = Self::zero(target.clone());
        for (e, c) in &self.terms {
            let mut t = Self::constant(target.clone(), c.clone());
            for (i, &a) in e.iter().enumerate() {
                for _ in 0..a {
                    t = t.mul(&images[i]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(e, c)| TermJson { exponents: e.clone(), coeff: c.to_string() })
            .collect()
    }

    pub fn from_json(weights: Vec<u32>, terms: &[TermJson]) -> Result<Self, String> {
        let mut p = Self::zero(weights);
        for t in terms {
            let c: Q = t.coeff.parse().map_err(|e| format!("bad coefficient {}: {e:?}", t.coeff))?;
            if t.exponents.len() != p.nvars() {
                return Err("exponent arity mismatch".into());
            }
            p.insert(t.exponents.clone(), c);
        }
        Ok(p)
    }

    /// Human-readable form, variables named `{prefix}{i+1}`.
    pub fn pretty(&self, prefix: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| if a == 1 { format!("{prefix}{}", i + 1) } else { format!("{prefix}{}^{a}", i + 1) })
                .collect();
            let m = mono.join("*");
            let neg = c.is_negative();
            let a = c.abs();
            let body = if m.is_empty() {
                a.to_string()
            } else if a.is_one() {
                m
            } else {
                format!("({a})*{m}")
            };
            let s = if neg { format!("-{body}") } else { body };
            parts.push(s);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion
/// along rows, memoized over the set of used columns.
pub fn poly_det(m: &[Vec<WeightedPolynomial>], weights: &[u32]) -> WeightedPolynomial {
    let n = m.len();
    let mut memo: HashMap<u64, WeightedPolynomial> = HashMap::new();
    fn rec(
        row: usize,
        used: u64,
        m: &[Vec<WeightedPolynomial>],
        w: &[u32],
        memo: &mut HashMap<u64, WeightedPolynomial>,
    ) -> WeightedPolynomial {
        let n = m.len();
        if row == n {
            return WeightedPolynomial::constant(w.to_vec(), Q::one());
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let mut acc = WeightedPolynomial::zero(w.to_vec());
        let mut sign_idx = 0;
        for col in 0..n {
            if used & (1 << col) != 0 {
                continue;
            }
            if !m[row][col].is_zero() {
                let minor = rec(row + 1, used | (1 << col), m, w, memo);
                let mut t = m[row][col].mul(&minor);
                if sign_idx % 2 == 1 {
                    t = t.scale(&-Q::one());
                }
                acc = acc.add(&t);
            }
            sign_idx += 1;
        }
        memo.insert(used, acc.clone());
        acc
    }
    if n == 0 {
        return WeightedPolynomial::constant(weights.to_vec(), Q::one());
    }
    rec(0, 0, m, weights, &mut memo)
}

fn t_weights(nt: usize) -> Vec<u32> {
    (1..=nt as u32).collect()
}

/// h_n in the variables T_1..T_nt: det of the n×n matrix with entries
/// (i−j+1)T_{i−j+1} on and below the diagonal and −i on the superdiagonal, divided by n!.
pub fn complete_homogeneous(n: i64, nt: usize) -> WeightedPolynomial {
    let w = t_weights(nt);
    if n < 0 {
        return WeightedPolynomial::zero(w);
    }
    let n = n as usize;
    if n == 0 {
        return WeightedPolynomial::constant(w, Q::one());
    }
    let mut m = vec![vec![WeightedPolynomial::zero(w.clone()); n]; n];
    for i in 0..n {
        for j in 0..n {
            if j <= i {
                let k = i - j + 1;
                if k <= nt {
                    m[i][j] = WeightedPolynomial::var(w.clone(), k - 1).scale(&q(k as i64, 1));
                }
            } else if j == i + 1 {
                m[i][j] = WeightedPolynomial::constant(w.clone(), q(-(i as i64 + 1), 1));
            }
        }
    }
    let fact: i64 = (1..=n as i64).product();
    poly_det(&m, &w).scale(&q(1, fact))
}

/// Jacobi–Trudi determinant |h_{Λ_i+j−i}|_{g×g} in T_1..T_nt.
pub fn schur_jacobi_trudi(lambda: &[u32], g: usize, nt: usize) -> WeightedPolynomial {
    let w = t_weights(nt);
    let mut rows = lambda.to_vec();
    rows.resize(g, 0);
    let mut cache: HashMap<i64, WeightedPolynomial> = HashMap::new();
    let mut m = vec![vec![WeightedPolynomial::zero(w.clone()); g]; g];
    for i in 0..g {
        for j in 0..g {
            let k = rows[i] as i64 + j as i64 - i as i64;
            m[i][j] = cache.entry(k).or_insert_with(|| complete_homogeneous(k, nt)).clone();
        }
    }
    poly_det(&m, &w)
}

/// S_Λ(T) with T_{Λ_i+g−i} = u_i and every other T_k = 0 (no sign normalization).
pub fn schur_substituted(c: &CurveSpec) -> WeightedPolynomial {
    let y = YoungData::new(c);
    let g = c.genus;
    let nt = y.hooks[0] as usize;
    let s = schur_jacobi_trudi(&y.rows, g, nt);
    let uw = y.hooks.clone();
    let images: Vec<WeightedPolynomial> = (1..=nt as u32)
        .map(|k| match y.hooks.iter().position(|&h| h == k) {
            Some(i) => WeightedPolynomial::var(uw.clone(), i),
            None => WeightedPolynomial::zero(uw.clone()),
        })
        .collect();
    s.substitute(&images)
}

/// Index set whose σ-derivative appears in the prime-form theorem: ♮_r (∅ when r ≥ g).
pub fn prime_form_index(c: &CurveSpec) -> Vec<usize> {
    YoungData::new(c).natural(c.r as usize)
}

/// Sign κ = ±1 normalizing the Schur polynomial so that ∂_{♮_r}S has u_1-coefficient +1,
/// i.e. σ_{♮_r}(u−v)/(u_1−v_1) → 1 near the diagonal of W^1.
pub fn convention_sign(c: &CurveSpec) -> i64 {
    let s = schur_substituted(c);
    let mut d = s;
    for i in prime_form_index(c) {
        d = d.diff(i - 1);
    }
    let mut e = vec![0; c.genus];
    e[0] = 1;
    let k = d.coeff(&e);
    assert!(k.abs().is_one(), "u_1 coefficient of the prime-form derivative is {k}");
    if k.is_positive() {
        1
    } else {
        -1
    }
}

/// Leading term of σ at the origin: κ·S_Λ(T)|_{T_{Λ_i+g−i}=u_i}.
pub fn sigma_leading_term(c: &CurveSpec) -> WeightedPolynomial {
    let k = convention_sign(c);
    schur_substituted(c).scale(&q(k, 1))
}
