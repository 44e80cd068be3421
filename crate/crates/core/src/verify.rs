//! Seeded numerical certification of the σ-function identities for one curve.
//!
//! Every entry compares two sides computed along independent code paths and
//! records the worst relative residual over its samples. Sample failures
//! (degenerate draws) are rejected and redrawn; they never abort the suite.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveJson, CurveSpec};
use crate::identities::{self as id, Lifted};
use crate::periods::{PeriodData, PeriodOptions};
use crate::prime_form::PrimeForm;
use crate::sigma::{random_points, Sigma};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Entry {
    pub identity_id: String,
    pub statement: String,
    pub samples: usize,
    pub max_rel_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct IdentityReport {
    pub curve: CurveJson,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub entries: Vec<Entry>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn entry(&self, id: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.identity_id == id)
    }
}

pub fn default_tolerances() -> BTreeMap<String, f64> {
    [
        ("legendre", 1e-8),
        ("quasi_periodicity", 1e-8),
        ("taylor_leading", 1e-6),
        ("galois_equivariance", 1e-8),
        ("jacobi_x", 1e-7),
        ("weierstrass_wp", 1e-7),
        ("jacobi_stratum", 1e-6),
        ("fs_hyperelliptic", 1e-6),
        ("fs_trigonal", 1e-6),
        ("trigonal_limit_1", 1e-6),
        ("trigonal_limit_2", 1e-6),
        ("trigonal_limit_3", 1e-6),
        ("vanishing_order", 0.05),
        ("fay_wp", 1e-5),
        ("third_kind", 1e-6),
        ("prime_form_sigma", 1e-6),
        ("prime_form_antisymmetry", 1e-9),
        ("prime_form_variant", 1e-6),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides on top of [`default_tolerances`].
    pub tolerances: BTreeMap<String, f64>,
    /// Per-identity sample counts; identities not listed use `default_samples`.
    pub samples: BTreeMap<String, usize>,
    pub default_samples: usize,
    pub periods: PeriodOptions,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 1, tolerances: BTreeMap::new(), samples: BTreeMap::new(), default_samples: 8, periods: PeriodOptions::default() }
    }
}

/// Relative residual |l − r| / |r|.
pub fn rel(l: C64, r: C64) -> f64 {
    let d = (l - r).norm();
    if r.norm() > 0.0 {
        d / r.norm()
    } else {
        d
    }
}

fn sub_seed(seed: u64, id: &str) -> u64 {
    id.bytes().fold(seed ^ 0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

struct Runner<'a> {
    cfg: &'a SuiteConfig,
    tol: BTreeMap<String, f64>,
    entries: Vec<Entry>,
}

impl Runner<'_> {
    fn n(&self, id: &str) -> usize {
        *self.cfg.samples.get(id).unwrap_or(&self.cfg.default_samples)
    }

    /// Draw until `n` samples succeed (at most 4n attempts); residual is the max.
    fn run<F>(&mut self, id: &str, statement: &str, n: usize, mut f: F) -> Option<String>
    where
        F: FnMut(&mut ChaCha8Rng) -> Result<f64>,
    {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(self.cfg.seed, id));
        let tol = self.tol[id];
        let (mut worst, mut ok, mut rejected) = (0.0f64, 0usize, 0usize);
        let mut last_err = None;
        while ok < n && ok + rejected < 4 * n.max(1) {
            match f(&mut rng) {
                Ok(r) => {
                    ok += 1;
                    worst = if r.is_finite() { worst.max(r) } else { f64::MAX };
                }
                Err(e) => {
                    rejected += 1;
                    last_err = Some(e.to_string());
                }
            }
        }
        let mut note = None;
        if ok < n {
            note = Some(format!("only {ok}/{n} samples usable; last rejection: {}", last_err.unwrap_or_default()));
        }
        self.entries.push(Entry {
            identity_id: id.into(),
            statement: statement.into(),
            samples: ok,
            max_rel_residual: worst,
            tolerance: tol,
            pass: ok == n && ok > 0 && worst < tol,
            note: note.clone(),
        });
        note
    }

    fn annotate(&mut self, note: String) {
        if let Some(e) = self.entries.last_mut() {
            e.note = Some(match e.note.take() {
                Some(old) => format!("{old}; {note}"),
                None => note,
            });
        }
    }
}

fn random_u(g: usize, rng: &mut ChaCha8Rng, scale: f64) -> Vec<C64> {
    (0..g).map(|_| C64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))).collect()
}

fn sum_w(pts: &[Lifted], g: usize) -> Vec<C64> {
    pts.iter().fold(vec![C64::new(0.0, 0.0); g], |acc, p| acc.iter().zip(&p.1).map(|(a, b)| a + b).collect())
}

/// Build σ for the curve (setup) and run every applicable identity.
///
/// Errors only on setup failure: singular or unsupported curve, Legendre
/// violation, or a σ normalization that cannot be fixed.
pub fn run_suite(c: &CurveSpec, cfg: &SuiteConfig) -> Result<IdentityReport> {
    let mut tol = default_tolerances();
    tol.extend(cfg.tolerances.iter().map(|(k, v)| (k.clone(), *v)));
    let periods = PeriodData::compute(c, &cfg.periods)?;
    periods.check_legendre(tol["legendre"])?;
    let s = Sigma::from_periods(c, periods)?;
    run_with_sigma(&s, cfg, tol)
}

/// Run the identities against an already constructed σ.
pub fn run_with_sigma(s: &Sigma, cfg: &SuiteConfig, tol: BTreeMap<String, f64>) -> Result<IdentityReport> {
    let c = &s.curve;
    let g = c.genus;
    let mut r = Runner { cfg, tol, entries: Vec::new() };
    let pick = |rng: &mut ChaCha8Rng, k: usize| random_points(c, &s.abel, k, rng);

    let leg = s.periods.legendre_residual;
    r.run("legendre", "M J Mᵀ = 2πi J for the first/second-kind period blocks", 1, |_| Ok(leg / (2.0 * std::f64::consts::PI)));

    let gens: Vec<(Vec<i64>, Vec<i64>)> = (0..2 * g)
        .map(|k| {
            let mut m = vec![0; g];
            let mut n = vec![0; g];
            if k < g {
                m[k] = 1
            } else {
                n[k - g] = 1
            }
            (m, n)
        })
        .collect();
    r.run("quasi_periodicity", "σ(u+Ω)/σ(u) = χ(Ω)·exp(2(u+Ω/2)ᵀ(η′m+η″n)) for each lattice generator", r.n("quasi_periodicity"), |rng| {
        let u = random_u(g, rng, 0.4);
        let su = s.value(&u);
        let mut worst = 0.0f64;
        for (m, n) in &gens {
            let om = s.lattice(m, n);
            let v: Vec<C64> = u.iter().zip(&om).map(|(a, b)| a + b).collect();
            worst = worst.max(rel(s.value(&v) / su, s.quasi_factor(&u, m, n)));
        }
        Ok(worst)
    });

    r.run("taylor_leading", "Taylor coefficients of σ up to the leading weight equal the Schur-polynomial leading term", 1, |_| Ok(s.taylor_deviation()));

    let a = c.sigma_galois_exponent() as i64;
    r.run("galois_equivariance", "σ(ζ̂u) = ζ^a σ(u) for the cyclic automorphism", r.n("galois_equivariance"), |rng| {
        let u = random_u(g, rng, 0.5);
        Ok(rel(s.value(&s.abel.rotate(&u, 1)), c.zeta_pow(a) * s.value(&u)))
    });

    if g == 1 {
        r.run("weierstrass_wp", "℘(w(P)) = x(P) in genus one", r.n("weierstrass_wp"), |rng| {
            let p = pick(rng, 1);
            Ok(rel(s.wp(&p[0].1, &[0, 0]), p[0].0.x))
        });
    }

    if g >= 2 {
        r.run("jacobi_x", "−σ_{♮₁⁽¹⁾}/σ_{♮₁}(w(P)) = x(P)", r.n("jacobi_x"), |rng| {
            let p = pick(rng, 1);
            let (l, rr) = id::jacobi_x(s, &p[0]);
            Ok(rel(l, rr))
        });

        let n = r.n("jacobi_stratum");
        r.run("jacobi_stratum", "σ_{♮_k⁽ⁱ⁾}/σ_{♮_k}(w(P₁+…+P_k)) = ±μ_{k,i−1} for 1 ≤ k < g", n, |rng| {
            let mut worst = 0.0f64;
            for k in 1..g {
                let pts = pick(rng, k);
                for (l, rr) in id::jacobi_stratum(s, &pts)? {
                    worst = worst.max(rel(l, rr));
                }
            }
            Ok(worst)
        });

        let p_probe = r.n("vanishing_order");
        let expect = s.young.vanishing_order(1);
        r.run("vanishing_order", "s ↦ σ(w(P) + s·e_g) vanishes to order N₁ at s = 0 (residual = |slope − N₁|)", p_probe, |rng| {
            let p = pick(rng, 1);
            let probe = s.vanishing_order_probe(&p[0].1)?;
            Ok((probe.slope - expect as f64).abs())
        });
        r.annotate(format!("expected order {expect}"));
    }

    if c.is_hyperelliptic() {
        let nmax = g + 2;
        // The sign is fixed by the first sample for each n and must then repeat
        // exactly; in genus 2 it must also equal the closed form ε_n.
        let mut seen: Vec<Option<f64>> = vec![None; nmax + 1];
        r.run("fs_hyperelliptic", "σ_{♮_n}(Σu_i)∏σ_{♮₂}(u_i−u_j)/∏σ_{♮₁}(u_i)ⁿ = ε_n ψ_n with a sample-independent sign ε_n, n = 2..g+2", r.n("fs_hyperelliptic"), |rng| {
            let pts = pick(rng, nmax);
            let mut worst = 0.0f64;
            for n in 2..=nmax {
                let (l, rr) = id::fs_hyperelliptic(s, &pts[..n]);
                let eps = *seen[n].get_or_insert(if (l / rr).re >= 0.0 { 1.0 } else { -1.0 });
                let expected = if g == 2 { id::fs_sign(g, n) } else { eps };
                worst = worst.max(rel(l, expected * rr)).max(rel(l, eps * rr));
            }
            Ok(worst)
        });
        let signs: Vec<String> = (2..=nmax).filter_map(|n| seen[n].map(|e| format!("ε_{n}={e:+}"))).collect();
        let quoted: Vec<usize> = (2..=nmax).filter(|&n| seen[n].is_some_and(|e| e != id::fs_sign_quoted(g, n))).collect();
        let mut note = format!("observed {}", signs.join(" "));
        if !quoted.is_empty() {
            note.push_str(&format!("; the two-regime quoted sign rule disagrees at n = {quoted:?}"));
        }
        r.annotate(note);

        r.run("fay_wp", "σ(u+v)σ(u−v)/(σ(u)²σ_{♮₂}(v)²) = (F(x₁,x₂) − 2y₁y₂)/(x₁−x₂)² − Σ℘_ij(u)x₁^{i}x₂^{j}", r.n("fay_wp"), |rng| {
            let pts = pick(rng, g + 2);
            let u = sum_w(&pts[..g], g);
            let (l, rr) = id::fay_wp(s, &u, &pts[g], &pts[g + 1]);
            Ok(rel(l, rr))
        });
    }

    if c.r == 3 {
        r.run("fs_trigonal", "∏σ_{♮₂}(u_i+ζ̂u_j)σ_{♮₂}(u_i+ζ̂²u_j)·σ_{♮_n}(Σu)/∏σ_{♮₁}(u_i)^{2n−1} = ψ_n φ_n, n = 2, 3", r.n("fs_trigonal"), |rng| {
            let pts = pick(rng, 3);
            let mut worst = 0.0f64;
            for n in 2..=3 {
                let (l, rr) = id::fs_trigonal(s, &pts[..n]);
                worst = worst.max(rel(l, rr));
            }
            Ok(worst)
        });
        let statements = [
            "σ_{♮₃}(u+v₁+v₂)∏_a σ_{♮₂}(u+ζ̂^a v₁)σ_{♮₂}(u+ζ̂^a v₂)σ_{♮₂}(v₁+ζ̂^a v₂)/(σ_{♮₁}(u)σ_{♮₁}(v₁)σ_{♮₁}(v₂))⁵ = (x−x₁)(x−x₂)(x₁−x₂)(y(x₁−x₂)−y₁(x−x₂)+y₂(x−x₁))",
            "σ_{♮₂}(v₁+v₂)σ_{♮₂}(v₁+ζ̂v₂)σ_{♮₂}(v₁+ζ̂²v₂)/(σ_{♮₁}(v₁)σ_{♮₁}(v₂))³ = (x₂−x₁)²",
            "σ_{♮₂}(2u)/σ_{♮₁}(u)⁴ = 3y²",
        ];
        for (k, st) in statements.iter().enumerate() {
            let key = format!("trigonal_limit_{}", k + 1);
            let n = r.n(&key);
            r.run(&key, st, n, |rng| {
                let p = pick(rng, 3);
                let (l, rr) = id::trigonal_limits(s, &p[0], &p[1], &p[2])[k];
                Ok(rel(l, rr))
            });
        }
    }

    prime_form_entries(s, &mut r, &pick)?;
    Ok(IdentityReport { curve: c.to_json(), seed: cfg.seed, tolerances: r.tol.clone(), entries: r.entries })
}

fn prime_form_entries(s: &Sigma, r: &mut Runner, pick: &dyn Fn(&mut ChaCha8Rng, usize) -> Vec<Lifted>) -> Result<()> {
    let c = &s.curve;
    let pf = match PrimeForm::new(s) {
        Ok(pf) => pf,
        Err(e) => {
            for key in ["prime_form_sigma", "prime_form_antisymmetry"] {
                let tol = r.tol[key];
                r.entries.push(Entry {
                    identity_id: key.into(),
                    statement: "prime form construction".into(),
                    samples: 0,
                    max_rel_residual: f64::MAX,
                    tolerance: tol,
                    pass: false,
                    note: Some(e.to_string()),
                });
            }
            return Ok(());
        }
    };
    let pair = |rng: &mut ChaCha8Rng| {
        let p = pick(rng, 2);
        (pf.lift(&p[0].0), pf.lift(&p[1].0))
    };
    r.run("prime_form_sigma", "σ_{♮_r}(w(P)−w(Q))/(√a(P)√a(Q)) equals exp(−½ΔᵀγΔ)·E(P,Q) with Δ = w(P)−w(Q)", r.n("prime_form_sigma"), |rng| {
        let (p, q) = pair(rng);
        let v = pf.values(&p, &q)?;
        Ok((v.ratio - 1.0).norm())
    });
    r.run("prime_form_antisymmetry", "σ-form(P,Q) = −σ-form(Q,P)", r.n("prime_form_antisymmetry"), |rng| {
        let (p, q) = pair(rng);
        let a = pf.sigma_form(&p, &q)?;
        let b = pf.sigma_form(&q, &p)?;
        Ok(rel(-b, a))
    });
    if c.r == 3 {
        let mut ratios = Vec::new();
        let n = r.n("prime_form_variant");
        r.run("prime_form_variant", "σ(u+ζ̂v+ζ̂²v)/√−3 is a constant multiple of σ_{♮₃}(u−v) (residual = spread of the ratio)", n, |rng| {
            let (p, q) = pair(rng);
            let ratio = pf.sigma_form_variant(&p, &q)? / pf.sigma_form(&p, &q)?;
            ratios.push(ratio);
            Ok(rel(ratio, ratios[0]))
        });
        if let Some(k) = ratios.first() {
            r.annotate(format!("constant = {:.12}{:+.12}i (|constant| = {:.12})", k.re, k.im, k.norm()));
        }
    }
    if c.is_hyperelliptic() {
        let scale = 1.0 + c.max_root();
        r.run("third_kind", "θ-cross ratio of E equals exp∫_{P₀}^{P} of the normalized third-kind differential with poles at Q, Q′", r.n("third_kind"), |rng| {
            let p = pick(rng, 2);
            let q = pick(rng, 1)[0].0;
            let step = C64::from_polar(rng.gen_range(0.05..0.15) * scale, rng.gen_range(0.0..std::f64::consts::TAU));
            let q2 = c
                .lift_points(q.x + step)?
                .into_iter()
                .min_by(|a, b| (a.y - q.y).norm().total_cmp(&(b.y - q.y).norm()))
                .ok_or_else(|| Error::DegenerateConfiguration("no lift".into()))?;
            let (l, rr) = pf.third_kind(&p[0].0, p[1].0.x, &q, &q2)?;
            Ok(rel(l, rr))
        });
    }
    Ok(())
}
