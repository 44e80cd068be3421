//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! A line reads PASS only if the criterion holds as stated. Where a stated
//! sign or constant is contradicted by the computation, the line says FAIL
//! and shows the corrected relation next to it. The process exits non-zero
//! only if a corrected relation, a tolerance or a time budget is broken.

use std::time::Instant;

use cyclic_sigma::curve::CurveSpec;
use cyclic_sigma::identities as id;
use cyclic_sigma::periods::{is_positive_definite, PeriodData, PeriodOptions};
use cyclic_sigma::prime_form::PrimeForm;
use cyclic_sigma::sigma::{random_points, Sigma};
use cyclic_sigma::symmetric::{q, sigma_leading_term, WeightedPolynomial};
use cyclic_sigma::young::YoungData;
use cyclic_sigma::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    /// The criterion holds as stated.
    pass: bool,
    /// The relations hold once known misprints are corrected.
    sound: bool,
    detail: String,
}

impl Outcome {
    fn plain(pass: bool, detail: String) -> Self {
        Outcome { pass, sound: pass, detail }
    }
}

fn rel(l: C64, r: C64) -> f64 {
    (l - r).norm() / r.norm()
}

/// Smooth curve with λ_j drawn uniformly from the unit disc.
fn random_curve(r: u32, s: u32, seed: u64) -> CurveSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let lam: Vec<C64> = (0..s)
            .map(|_| C64::from_polar(rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        if let Ok(c) = CurveSpec::new(r, s, lam) {
            return c;
        }
    }
}

fn sigma_for(c: &CurveSpec) -> Sigma {
    Sigma::new(c, &PeriodOptions::default()).expect("sigma construction")
}

fn curves() -> Vec<CurveSpec> {
    vec![random_curve(2, 5, 25), random_curve(2, 7, 27), random_curve(3, 4, 34)]
}

fn label(c: &CurveSpec) -> String {
    format!("({},{})", c.r, c.s)
}

// 1 ─────────────────────────────────────────────────────────────────────────

/// Semigroup ⟨r, s⟩ listed in increasing order (first `n` elements).
fn semigroup(r: u32, s: u32, n: usize) -> Vec<u32> {
    (0..).filter(|&k: &u32| (0..=k / s).any(|b| (k - b * s).is_multiple_of(r))).take(n).collect()
}

fn c1() -> Outcome {
    let table: [(u32, u32, &[&[usize]]); 5] = [
        (2, 3, &[]),
        (2, 5, &[&[2]]),
        (2, 7, &[&[2], &[3]]),
        (2, 9, &[&[2, 4], &[3], &[4]]),
        (3, 4, &[&[2], &[3]]),
    ];
    let mut bad = Vec::new();
    for (r, s, naturals) in table {
        let mut lam = vec![C64::new(0.0, 0.0); s as usize];
        lam[s as usize - 1] = C64::new(-1.0, 0.0);
        let c = CurveSpec::new(r, s, lam).unwrap();
        let g = ((r - 1) * (s - 1) / 2) as usize;
        let sg = semigroup(r, s, 2 * g + 2);
        let orders: Vec<u32> = c.monomial_basis(2 * g + 1).iter().map(|m| m.order).collect();
        let gaps: Vec<u32> = (1..2 * g as u32).filter(|k| !sg.contains(k)).collect();
        // Λ_i = ℓ_{g+1−i} − (g − i) from the gaps ℓ_1 < … < ℓ_g.
        let lambda: Vec<u32> = (1..=g).map(|i| gaps[g - i] - (g - i) as u32).collect();
        let y = YoungData::new(&c);
        let weight = (r * r - 1) * (s * s - 1) / 24;
        let ok = c.genus == g
            && orders == sg
            && c.gaps() == gaps
            && y.rows == lambda
            && y.weight() == weight
            && lambda.iter().sum::<u32>() == weight
            && (1..g).all(|k| y.natural(k) == naturals[k - 1])
            && y.natural(g).is_empty();
        if !ok {
            bad.push(format!("({r},{s})"));
        }
    }
    let spot = {
        let c = CurveSpec::from_real(2, 9, &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]).unwrap();
        let o: Vec<u32> = c.monomial_basis(7).iter().map(|m| m.order).collect();
        o == [0, 2, 4, 6, 8, 9, 10, 11] && YoungData::new(&c).rows == [4, 3, 2, 1]
    };
    Outcome::plain(
        bad.is_empty() && spot,
        if bad.is_empty() { "gap rows, Λ, |Λ| and ♮ tables exact for (2,3),(2,5),(2,7),(2,9),(3,4)".into() } else { format!("mismatch for {}", bad.join(" ")) },
    )
}

// 2 ─────────────────────────────────────────────────────────────────────────

fn c2() -> Outcome {
    let c = CurveSpec::from_real(3, 4, &[0.0, 0.0, 0.0, -1.0]).unwrap();
    let lt = sigma_leading_term(&c);
    let w = lt.weights.clone();
    let u = |i| WeightedPolynomial::var(w.clone(), i);
    let expected = u(0).sub(&u(2).mul(&u(1)).mul(&u(1))).add(&u(2).mul(&u(2)).mul(&u(2)).mul(&u(2)).mul(&u(2)).scale(&q(1, 20)));
    Outcome::plain(lt == expected, format!("(3,4) leading term = {}", lt.pretty("u")))
}

// 3 ─────────────────────────────────────────────────────────────────────────

fn c3() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for c in curves() {
        let t = Instant::now();
        let p = PeriodData::compute(&c, &PeriodOptions::default()).expect("periods");
        let pd = is_positive_definite(&p.tau.map(|z| z.im));
        // Cap the quadrature level and check that each extra level at least
        // halves the residual until it reaches round-off.
        let seq: Vec<f64> = (1..=4)
            .map(|l| PeriodData::compute(&c, &PeriodOptions { min_level: 0, max_level: l, quad_tol: 0.0 }).map(|p| p.legendre_residual).unwrap_or(f64::INFINITY))
            .collect();
        let halves = seq.windows(2).all(|w| w[0] < 1e-12 || w[1] <= 0.5 * w[0]);
        let secs = t.elapsed().as_secs_f64();
        ok &= p.legendre_residual < 1e-8 && pd && halves && secs < 60.0;
        let seq_s: Vec<String> = seq.iter().map(|r| format!("{r:.0e}")).collect();
        parts.push(format!("{} res {:.1e}, Im τ ≻ 0: {pd}, refinement {} ({secs:.1} s)", label(&c), p.legendre_residual, seq_s.join("→")));
    }
    Outcome::plain(ok, parts.join("; "))
}

// 4 ─────────────────────────────────────────────────────────────────────────

fn c4() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for c in curves() {
        let s = sigma_for(&c);
        let g = c.genus;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut qp = 0.0f64;
        for _ in 0..10 {
            let u: Vec<C64> = (0..g).map(|_| C64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))).collect();
            for k in 0..2 * g {
                let (mut m, mut n) = (vec![0i64; g], vec![0i64; g]);
                if k < g {
                    m[k] = 1;
                } else {
                    n[k - g] = 1;
                }
                let v: Vec<C64> = u.iter().zip(s.lattice(&m, &n)).map(|(a, b)| a + b).collect();
                qp = qp.max(rel(s.value(&v) / s.value(&u), s.quasi_factor(&u, &m, &n)));
            }
        }
        let taylor = s.taylor_deviation();
        ok &= qp < 1e-8 && taylor < 1e-6;
        let mut part = format!("{} quasi-per {qp:.1e}, Taylor {taylor:.1e}", label(&c));
        if c.is_trigonal_34() {
            let (mut par, mut gal) = (0.0f64, 0.0f64);
            for _ in 0..10 {
                let u: Vec<C64> = (0..g).map(|_| C64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))).collect();
                let neg: Vec<C64> = u.iter().map(|z| -z).collect();
                let su = s.value(&u);
                par = par.max(rel(s.value(&neg), -su));
                gal = gal.max(rel(s.value(&s.abel.rotate(&u, 1)), c.zeta() * su));
            }
            ok &= par < 1e-8 && gal < 1e-8;
            part += &format!(", parity {par:.1e}, Galois {gal:.1e}");
        }
        parts.push(part);
    }
    Outcome::plain(ok, parts.join("; "))
}

// 5 ─────────────────────────────────────────────────────────────────────────

/// Weierstrass σ from its power series: ℘ = u⁻² + Σ c_k u^{2k−2} with
/// c₂ = g₂/20, c₃ = g₃/28, c_k = 3/((2k+1)(k−3)) Σ_{m=2}^{k−2} c_m c_{k−m};
/// log σ = log u − Σ c_k u^{2k}/(2k(2k−1)).
fn weierstrass_sigma(u: C64, g2: f64, g3: f64, terms: usize) -> C64 {
    let mut ck = vec![0.0f64; terms + 1];
    ck[2] = g2 / 20.0;
    ck[3] = g3 / 28.0;
    for k in 4..=terms {
        let s: f64 = (2..=k - 2).map(|m| ck[m] * ck[k - m]).sum();
        ck[k] = 3.0 / ((2 * k + 1) as f64 * (k - 3) as f64) * s;
    }
    let mut acc = C64::new(0.0, 0.0);
    for (k, c) in ck.iter().enumerate().skip(2) {
        acc += c * u.powu(2 * k as u32) / (2.0 * k as f64 * (2 * k - 1) as f64);
    }
    u * (-acc).exp()
}

fn c5() -> Outcome {
    let c = CurveSpec::from_real(2, 3, &[0.0, -1.0, 0.0]).unwrap();
    let s = sigma_for(&c);
    let scale = s.lattice(&[1], &[0])[0].norm().min(s.lattice(&[0], &[1])[0].norm());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..40 {
        let u = C64::from_polar(0.5 * scale * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
        worst = worst.max(rel(s.value(&[u]), weierstrass_sigma(u, 4.0, 0.0, 120)));
    }
    Outcome::plain(worst < 1e-8, format!("y²=x³−x vs Weierstrass series (g₂=4, g₃=0), 40 points |u| ≤ {:.3}: max rel {worst:.1e}", 0.5 * scale))
}

// 6 ─────────────────────────────────────────────────────────────────────────

fn c6() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for c in curves() {
        let s = sigma_for(&c);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let pts = random_points(&c, &s.abel, 30, &mut rng);
        let jx = pts.iter().map(|p| id::jacobi_x(&s, p)).map(|(l, r)| rel(l, r)).fold(0.0, f64::max);
        ok &= jx < 1e-7;
        let mut part = format!("{} x(P) {jx:.1e}", label(&c));
        if c.genus >= 3 {
            let mut k2 = 0.0f64;
            for pair in pts.chunks(2).take(15) {
                for (l, r) in id::jacobi_stratum(&s, pair).expect("stratum") {
                    k2 = k2.max(rel(l, r));
                }
            }
            ok &= k2 < 1e-6;
            part += &format!(", k=2 vs μ₂ {k2:.1e}");
        }
        parts.push(part);
    }
    Outcome::plain(ok, parts.join("; "))
}

// 7 ─────────────────────────────────────────────────────────────────────────

fn c7() -> Outcome {
    let c = curves().remove(0);
    let s = sigma_for(&c);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut fsh, mut fsh_quoted) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let pts = random_points(&c, &s.abel, 4, &mut rng);
        for n in 2..=4 {
            let (l, r) = id::fs_hyperelliptic(&s, &pts[..n]);
            fsh = fsh.max(rel(l, id::fs_sign(2, n) * r));
            fsh_quoted = fsh_quoted.max(rel(l, id::fs_sign_quoted(2, n) * r));
        }
    }
    let c34 = curves().remove(2);
    let s = sigma_for(&c34);
    let (mut rtc, mut lim, mut lim1_quoted) = (0.0f64, [0.0f64; 3], 0.0f64);
    for _ in 0..10 {
        let pts = random_points(&c34, &s.abel, 3, &mut rng);
        for n in 2..=3 {
            let (l, r) = id::fs_trigonal(&s, &pts[..n]);
            rtc = rtc.max(rel(l, r));
        }
        let three = id::trigonal_limits(&s, &pts[0], &pts[1], &pts[2]);
        for k in 0..3 {
            lim[k] = lim[k].max(rel(three[k].0, three[k].1));
        }
        lim1_quoted = lim1_quoted.max(rel(three[0].0, -three[0].1));
    }
    let sound = fsh < 1e-6 && rtc < 1e-6 && lim.iter().all(|&x| x < 1e-6);
    let pass = sound && fsh_quoted < 1e-6 && lim1_quoted < 1e-6;
    Outcome {
        pass,
        sound,
        detail: format!(
            "FSH n=2..4 with ε_n=(−1)^(g+n(n+1)/2): {fsh:.1e} (two-regime quoted ε: {fsh_quoted:.1e}, wrong at n=4); FSRTC {rtc:.1e}; three-point relations {:.1e} {:.1e} {:.1e} (first with quoted leading minus: {lim1_quoted:.1e})",
            lim[0], lim[1], lim[2]
        ),
    }
}

// 8 ─────────────────────────────────────────────────────────────────────────

fn c8() -> Outcome {
    let mut sound = true;
    let mut parts = Vec::new();
    let mut unimodular = true;
    for c in curves() {
        let s = sigma_for(&c);
        let pf = PrimeForm::new(&s).expect("prime form");
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let pts = random_points(&c, &s.abel, 200, &mut rng);
        let (mut worst, mut konst, mut spread) = (0.0f64, None, 0.0f64);
        for pair in pts.chunks(2) {
            let (p, q) = (pf.lift(&pair[0].0), pf.lift(&pair[1].0));
            let v = pf.values(&p, &q).expect("prime form values");
            worst = worst.max((v.ratio - 1.0).norm());
            if c.is_trigonal_34() {
                let k = pf.sigma_form_variant(&p, &q).unwrap() / v.modular;
                let k0 = *konst.get_or_insert(k);
                spread = spread.max(rel(k, k0));
            }
        }
        sound &= worst < 1e-6 && spread < 1e-6;
        let mut part = format!("{} 100 pairs max |ratio−1| {worst:.1e}", label(&c));
        if let Some(k) = konst {
            unimodular &= (k.norm() - 1.0).abs() < 1e-6;
            part += &format!(", variant/𝓔 constant {:.6}{:+.6}i (|·| = {:.6}, spread {spread:.1e})", k.re, k.im, k.norm());
        }
        parts.push(part);
    }
    if !unimodular {
        parts.push("variant constant is 1/√−3, not unimodular".into());
    }
    Outcome { pass: sound && unimodular, sound, detail: parts.join("; ") }
}

// 9 ─────────────────────────────────────────────────────────────────────────

fn c9() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for c in [curves().remove(0), curves().remove(2)] {
        let s = sigma_for(&c);
        let pf = PrimeForm::new(&s).expect("prime form");
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pts = random_points(&c, &s.abel, 20, &mut rng);
        let mut anti = 0.0f64;
        for pair in pts.chunks(2) {
            let (p, q) = (pf.lift(&pair[0].0), pf.lift(&pair[1].0));
            let a = pf.sigma_form(&p, &q).unwrap();
            let b = pf.sigma_form(&q, &p).unwrap();
            anti = anti.max(rel(-b, a));
        }
        let (_, order) = pf.near_diagonal(&pts[0].0, &[0.04, 0.02, 0.01, 0.005, 0.0025]);
        ok &= anti < 1e-9 && order >= 1.95;
        parts.push(format!("{} antisymmetry {anti:.1e}, near-diagonal order {order:.3}", label(&c)));
    }
    for (c, expect) in [(random_curve(3, 4, 34), 2u32), (random_curve(2, 9, 29), 6)] {
        let s = sigma_for(&c);
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let p = random_points(&c, &s.abel, 1, &mut rng);
        match s.vanishing_order_probe(&p[0].1) {
            Ok(r) => {
                ok &= r.order == expect && (r.slope - expect as f64).abs() <= 0.05;
                parts.push(format!("{} probe N₁ = {} (slope {:.4}, expected {expect})", label(&c), r.order, r.slope));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{} probe failed: {e}", label(&c)));
            }
        }
    }
    Outcome::plain(ok, parts.join("; "))
}

// 10 ────────────────────────────────────────────────────────────────────────

fn c10() -> Outcome {
    let c = curves().remove(0);
    let s = sigma_for(&c);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let pts = random_points(&c, &s.abel, 4, &mut rng);
        let u: Vec<C64> = pts[0].1.iter().zip(&pts[1].1).map(|(a, b)| a + b).collect();
        let (l, r) = id::fay_wp(&s, &u, &pts[2], &pts[3]);
        worst = worst.max(rel(l, r));
    }
    Outcome::plain(worst < 1e-5, format!("20 genus-2 configurations: max rel {worst:.1e}"))
}

// 11 ────────────────────────────────────────────────────────────────────────

fn c11() -> Outcome {
    let c = curves().remove(0);
    let s = sigma_for(&c);
    let pf = PrimeForm::new(&s).expect("prime form");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let scale = 1.0 + c.max_root();
    let (mut worst, mut done, mut tries) = (0.0f64, 0, 0);
    while done < 10 && tries < 40 {
        tries += 1;
        let p = random_points(&c, &s.abel, 3, &mut rng);
        let step = C64::from_polar(rng.gen_range(0.05..0.15) * scale, rng.gen_range(0.0..std::f64::consts::TAU));
        let q = p[2].0;
        let Some(q2) = c.lift_points(q.x + step).ok().and_then(|l| l.into_iter().min_by(|a, b| (a.y - q.y).norm().total_cmp(&(b.y - q.y).norm()))) else {
            continue;
        };
        if let Ok((l, r)) = pf.third_kind(&p[0].0, p[1].0.x, &q, &q2) {
            worst = worst.max(rel(l, r));
            done += 1;
        }
    }
    Outcome::plain(done == 10 && worst < 1e-6, format!("{done} genus-2 triples: max rel {worst:.1e}"))
}

fn main() {
    let criteria: [(&str, f64, fn() -> Outcome); 11] = [
        ("combinatorics exactness", 1.0, c1),
        ("Schur anchor (3,4)", 1.0, c2),
        ("period validity", 180.0, c3),
        ("sigma construction", 120.0, c4),
        ("elliptic cross-oracle", 30.0, c5),
        ("Jacobi inversion", 120.0, c6),
        ("FS relations", 180.0, c7),
        ("prime form theorems", 300.0, c8),
        ("prime form local behaviour", 120.0, c9),
        ("Fay-type identity", 60.0, c10),
        ("third-kind ratio", 60.0, c11),
    ];
    let (mut passed, mut unsound) = (0, Vec::new());
    for (k, (name, budget, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        let secs = t.elapsed().as_secs_f64();
        let in_time = secs < *budget;
        let pass = o.pass && in_time;
        if pass {
            passed += 1;
        }
        if !(o.sound && in_time) {
            unsound.push(k + 1);
        }
        let time = if in_time { format!("{secs:.2} s") } else { format!("{secs:.2} s, over {budget} s budget") };
        println!("criterion {:>2}: {} {name} — {} ({time})", k + 1, if pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {passed}/11 criteria pass as stated");
    if !unsound.is_empty() {
        println!("acceptance: relations broken beyond known misprints in criteria {unsound:?}");
        std::process::exit(1);
    }
}
