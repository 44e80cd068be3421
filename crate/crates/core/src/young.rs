//! Young diagram of the gap sequence, Frobenius characteristics and the ♮_k index sets.

use crate::curve::CurveSpec;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Truncation {
    pub k: usize,
    pub rows: Vec<u32>,
    /// Frobenius characteristics (a_i; b_i), ordered with a_1 < a_2 < …
    pub frobenius: Vec<(u32, u32)>,
    pub size: u32,
    /// ♮_k, 1-based indices into u_1..u_g.
    pub natural: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct YoungData {
    pub genus: usize,
    pub rows: Vec<u32>,
    /// mwdeg(u_i) = Λ_i + g − i.
    pub hooks: Vec<u32>,
    /// Truncations Λ^{[k]} for k = 0..g.
    pub truncations: Vec<Truncation>,
}

/// Frobenius characteristics of a partition, sorted by increasing arm length.
pub fn frobenius(rows: &[u32]) -> Vec<(u32, u32)> {
    let conj = conjugate(rows);
    let mut out = Vec::new();
    for i in 0..rows.len() {
        if rows[i] as usize > i {
            out.push((rows[i] - 1 - i as u32, conj[i] - 1 - i as u32));
        }
    }
    out.reverse();
    out
}

pub fn conjugate(rows: &[u32]) -> Vec<u32> {
    let m = rows.first().copied().unwrap_or(0);
    (1..=m).map(|j| rows.iter().filter(|&&r| r >= j).count() as u32).collect()
}

impl YoungData {
    pub fn new(c: &CurveSpec) -> Self {
        let g = c.genus;
        let basis = c.monomial_basis(g);
        let rows: Vec<u32> = (0..g).map(|i| g as u32 + i as u32 - basis[i].order).collect();
        let hooks: Vec<u32> = (0..g).map(|i| rows[i] + (g - 1 - i) as u32).collect();
        let truncations = (0..=g)
            .map(|k| {
                let tr: Vec<u32> = rows[k..].iter().copied().filter(|&r| r > 0).collect();
                let fr = frobenius(&tr);
                let natural = if k == 0 || k >= g {
                    vec![]
                } else {
                    let mut idx: Vec<usize> = fr
                        .iter()
                        .map(|&(a, b)| {
                            let h = a + b + 1;
                            (k..g).find(|&j| hooks[j] == h).expect("hook length not found") + 1
                        })
                        .collect();
                    idx.sort_unstable();
                    idx
                };
                Truncation { k, size: tr.iter().sum(), rows: tr, frobenius: fr, natural }
            })
            .collect();
        YoungData { genus: g, rows, hooks, truncations }
    }

    pub fn weight(&self) -> u32 {
        self.rows.iter().sum()
    }

    /// ♮_k (empty for k ≥ g).
    pub fn natural(&self, k: usize) -> Vec<usize> {
        if k == 0 {
            return vec![];
        }
        self.truncations.get(k).map(|t| t.natural.clone()).unwrap_or_default()
    }

    /// ♮_k^{(i)} = (♮_k ∖ {k+1}) ∪ {i}.
    pub fn natural_sub(&self, k: usize, i: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.natural(k).into_iter().filter(|&j| j != k + 1).collect();
        v.push(i);
        v.sort_unstable();
        v
    }

    /// N_k = |Λ^{[k]}|.
    pub fn vanishing_order(&self, k: usize) -> u32 {
        self.truncations.get(k).map(|t| t.size).unwrap_or(0)
    }

    /// mwdeg of a multi-index (sum of hook lengths of its entries).
    pub fn mwdeg(&self, idx: &[usize]) -> u32 {
        idx.iter().map(|&i| self.hooks[i - 1]).sum()
    }
}

/// Closed form of ♮_k for (2,2g+1): {g, g−2, …, k+1} if g−k is odd, else {g−1, g−3, …, k+1}.
pub fn natural_hyperelliptic(g: usize, k: usize) -> Vec<usize> {
    if k >= g {
        return vec![];
    }
    let top = if (g - k) % 2 == 1 { g } else { g - 1 };
    let mut v: Vec<usize> = (k + 1..=top).rev().step_by(2).collect();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(r: u32, s: u32) -> CurveSpec {
        let mut l = vec![0.0; s as usize];
        l[s as usize - 1] = -1.0;
        l[s as usize - 2] = 0.3;
        CurveSpec::from_real(r, s, &l).unwrap()
    }

    #[test]
    fn diagrams() {
        let y = YoungData::new(&curve(2, 9));
        assert_eq!(y.rows, vec![4, 3, 2, 1]);
        assert_eq!(y.hooks, vec![7, 5, 3, 1]);
        assert_eq!(y.natural(1), vec![2, 4]);
        assert_eq!(y.natural(2), vec![3]);
        assert_eq!(y.natural(3), vec![4]);
        assert_eq!(y.vanishing_order(1), 6);
        let y = YoungData::new(&curve(3, 4));
        assert_eq!(y.rows, vec![3, 1, 1]);
        assert_eq!(y.weight(), 5);
        assert_eq!(y.natural(1), vec![2]);
        assert_eq!(y.natural(2), vec![3]);
        assert_eq!(y.natural_sub(2, 1), vec![1]);
        assert_eq!(y.natural_sub(1, 1), vec![1]);
    }

    #[test]
    fn invariants_all_families() {
        for (r, s) in [(2, 3), (2, 5), (2, 7), (2, 9), (2, 11), (3, 4), (3, 5)] {
            let c = curve(r, s);
            let y = YoungData::new(&c);
            let g = c.genus;
            assert_eq!(y.weight(), (r * r - 1) * (s * s - 1) / 24);
            let basis = c.monomial_basis(g);
            for i in 0..g {
                assert_eq!(y.hooks[i], 2 * g as u32 - basis[i].order - 1);
            }
            for (a, b) in frobenius(&y.rows) {
                assert_eq!(a, b);
            }
            for k in 1..g {
                assert_eq!(y.mwdeg(&y.natural(k)), y.vanishing_order(k));
                if r == 2 {
                    assert_eq!(y.natural(k), natural_hyperelliptic(g, k));
                }
            }
        }
    }
}
