use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use cyclic_sigma::curve::CurveJson;
use cyclic_sigma::periods::{CMat, PeriodData, PeriodOptions};
use cyclic_sigma::prime_form::PrimeForm;
use cyclic_sigma::sigma::Sigma;
use cyclic_sigma::symmetric::sigma_leading_term;
use cyclic_sigma::theta::{Characteristic, ThetaFn};
use cyclic_sigma::verify::{run_suite, SuiteConfig};
use cyclic_sigma::young::YoungData;
use cyclic_sigma::{CurveSpec, C64};

/// Sigma functions, periods and prime forms of cyclic curves y^r = f(x).
///
/// Complex numbers are written `re:im` (or just `re`); vectors are comma separated.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    /// Curve file: {"r":3,"s":4,"lambda":[[re,im],...]} with f = x^s + λ₁x^{s−1} + … + λ_s.
    #[arg(long, global = true)]
    curve: Option<PathBuf>,
    /// Relative quadrature tolerance for period integrals.
    #[arg(long, global = true, default_value_t = 1e-15)]
    tol: f64,
    /// Seed for every random sample.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gap sequence, monomial table, Young diagram, ♮_k table and Galois exponents.
    /// Only r and s are needed; a missing λ defaults to f = x^s − 1.
    Describe,
    /// Period matrices ω′, ω″, η′, η″, τ, γ and the Legendre residual.
    Periods,
    /// θ[a;b](z; τ) of the curve's τ at a normalized argument z.
    Theta {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Characteristic `a₁,…,a_g/b₁,…,b_g` (half-integers); zero by default.
        #[arg(long, allow_hyphen_values = true)]
        char: Option<String>,
    },
    /// σ(u), or ∂_{i₁}…∂_{i_k}σ(u) with 1-based indices.
    Sigma {
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long)]
        deriv: Option<String>,
    },
    /// Prime form values at two points given by their x-coordinates.
    PrimeForm {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Sheet index (0..r−1) of P and Q among the lifts of x.
        #[arg(long, default_value_t = 0)]
        p_sheet: usize,
        #[arg(long, default_value_t = 0)]
        q_sheet: usize,
    },
    /// Run the identity suite; exit 0 iff every entry passes.
    Verify {
        /// JSON map identity_id → tolerance overriding the defaults.
        #[arg(long)]
        tol_file: Option<PathBuf>,
        /// Samples per identity.
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// CSV grid of (u₁, Σ ζ^i ∂_{v₁} log σ_{♮_r}(u − ζ̂^{−i}v)) with v = w(P).
    BenneyDemo {
        /// x-coordinate of P.
        #[arg(long, default_value = "0.3:0.4", allow_hyphen_values = true)]
        p: String,
        /// u₁ runs over [−range, range] on the real axis.
        #[arg(long, default_value_t = 0.5)]
        range: f64,
        #[arg(long, default_value_t = 41)]
        points: usize,
        /// Fixed value of the remaining coordinates of u.
        #[arg(long, default_value = "0.1:0.05", allow_hyphen_values = true)]
        rest: String,
    },
}

fn parse_c(s: &str) -> Result<C64> {
    let s = s.trim();
    let (re, im) = match s.split_once(':') {
        Some((a, b)) => (a.trim().parse::<f64>()?, b.trim().parse::<f64>()?),
        None => (s.parse::<f64>()?, 0.0),
    };
    Ok(C64::new(re, im))
}

fn parse_cvec(s: &str) -> Result<Vec<C64>> {
    s.split(',').map(|t| parse_c(t).with_context(|| format!("bad complex number {t:?}"))).collect()
}

fn parse_fvec(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|t| t.trim().parse::<f64>().with_context(|| format!("bad number {t:?}"))).collect()
}

fn c_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn mat_json(m: &CMat) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| c_json(m[(i, j)])).collect())).collect())
}

fn fmt_c(z: C64) -> String {
    format!("{:.15e}{:+.15e}i", z.re, z.im)
}

fn fmt_mat(name: &str, m: &CMat) -> String {
    let mut s = format!("{name}:\n");
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| fmt_c(m[(i, j)])).collect();
        s.push_str(&format!("  {}\n", row.join("  ")));
    }
    s
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

struct Ctx {
    cli: Cli,
}

impl Ctx {
    fn curve_json(&self) -> Result<CurveJson> {
        let path = self.cli.curve.as_ref().ok_or_else(|| anyhow!("--curve is required"))?;
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    fn curve(&self) -> Result<CurveSpec> {
        Ok(CurveSpec::from_json(&self.curve_json()?)?)
    }

    fn period_options(&self) -> PeriodOptions {
        PeriodOptions { quad_tol: self.cli.tol, ..PeriodOptions::default() }
    }

    fn sigma(&self) -> Result<Sigma> {
        let c = self.curve()?;
        let p = PeriodData::compute(&c, &self.period_options())?;
        p.check_legendre(1e-8)?;
        Ok(Sigma::from_periods(&c, p)?)
    }

    fn emit(&self, text: String, value: Value) -> Result<()> {
        let body = if self.cli.json { serde_json::to_string_pretty(&value)? + "\n" } else { text };
        match &self.cli.out {
            Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}

fn describe(ctx: &Ctx) -> Result<()> {
    let j = ctx.curve_json()?;
    let c = if j.lambda.is_empty() {
        let mut lam = vec![C64::new(0.0, 0.0); j.s as usize];
        if let Some(last) = lam.last_mut() {
            *last = C64::new(-1.0, 0.0);
        }
        CurveSpec::new(j.r, j.s, lam)?
    } else {
        CurveSpec::from_json(&j)?
    };
    let g = c.genus;
    let y = YoungData::new(&c);
    let basis = c.monomial_basis(2 * g.max(1) - 1);
    let orders: Vec<u32> = basis.iter().map(|m| m.order).collect();
    let monos: Vec<String> = basis.iter().map(|m| format!("x^{}y^{}", m.sx, m.ry)).collect();
    let naturals: Vec<Vec<usize>> = (0..=g).map(|k| y.natural(k)).collect();
    let leading = sigma_leading_term(&c);
    let mut text = format!("curve (r,s) = ({},{}), genus {g}\n", c.r, c.s);
    text += &format!("gaps: {}\n", join(&c.gaps()));
    text += &format!("N row: {}\n", join(&orders));
    text += &format!("phi: {}\n", monos.join(" "));
    text += &format!("Lambda: ({}), |Lambda| = {}\n", join(&y.rows), y.weight());
    text += &format!("hook lengths: {}\n", join(&y.hooks));
    for (k, nat) in naturals.iter().enumerate() {
        text += &format!("natural_{k} = {{{}}}  N_{k} = {}\n", join(nat), y.vanishing_order(k));
    }
    text += &format!("galois exponents: {}\n", join(&c.galois_exponents()));
    text += &format!("sigma galois exponent: {}\n", c.sigma_galois_exponent());
    text += &format!("sigma leading term: {}\n", leading.pretty("u"));
    let value = json!({
        "r": c.r, "s": c.s, "genus": g,
        "gaps": c.gaps(),
        "orders": orders,
        "monomials": basis,
        "young": y,
        "natural": naturals,
        "galois_exponents": c.galois_exponents(),
        "sigma_galois_exponent": c.sigma_galois_exponent(),
        "sigma_leading_term": leading.to_json(),
    });
    ctx.emit(text, value)
}

fn periods(ctx: &Ctx) -> Result<()> {
    let c = ctx.curve()?;
    let p = PeriodData::compute(&c, &ctx.period_options())?;
    let mut text = String::new();
    for (n, m) in [("omega'", &p.omega1), ("omega''", &p.omega2), ("eta'", &p.eta1), ("eta''", &p.eta2), ("tau", &p.tau), ("gamma", &p.gamma)] {
        text += &fmt_mat(n, m);
    }
    text += &format!("legendre residual: {:.3e}\nquadrature error estimate: {:.3e}\n", p.legendre_residual, p.quad_error);
    let value = json!({
        "omega1": mat_json(&p.omega1), "omega2": mat_json(&p.omega2),
        "eta1": mat_json(&p.eta1), "eta2": mat_json(&p.eta2),
        "tau": mat_json(&p.tau), "gamma": mat_json(&p.gamma),
        "legendre_residual": p.legendre_residual, "quad_error": p.quad_error,
    });
    ctx.emit(text, value)?;
    p.check_legendre(1e-8)?;
    Ok(())
}

fn theta(ctx: &Ctx, z: &str, ch: Option<&str>) -> Result<()> {
    let c = ctx.curve()?;
    let p = PeriodData::compute(&c, &ctx.period_options())?;
    let g = c.genus;
    let z = parse_cvec(z)?;
    if z.len() != g {
        bail!("z has {} components, genus is {g}", z.len());
    }
    let ch = match ch {
        None => Characteristic::zero(g),
        Some(s) => {
            let (a, b) = s.split_once('/').ok_or_else(|| anyhow!("characteristic must be a/b"))?;
            let (a, b) = (parse_fvec(a)?, parse_fvec(b)?);
            if a.len() != g || b.len() != g {
                bail!("characteristic needs {g} entries on each side");
            }
            Characteristic { a, b }
        }
    };
    let th = ThetaFn::standard(p.tau.clone());
    let v = th.value(&z, &ch);
    ctx.emit(format!("theta[{}](z) = {}\n", ch.label(), fmt_c(v)), json!({"characteristic": ch.label(), "value": c_json(v)}))
}

fn sigma(ctx: &Ctx, u: &str, deriv: Option<&str>) -> Result<()> {
    let s = ctx.sigma()?;
    let u = parse_cvec(u)?;
    if u.len() != s.genus() {
        bail!("u has {} components, genus is {}", u.len(), s.genus());
    }
    let idx: Vec<usize> = match deriv {
        None => vec![],
        Some(d) => d.split(',').map(|t| t.trim().parse::<usize>()).collect::<std::result::Result<_, _>>()?,
    };
    if idx.iter().any(|&i| i == 0 || i > s.genus()) {
        bail!("derivative indices are 1-based and at most g");
    }
    let v = s.natural_deriv(&u, &idx);
    let text = format!("riemann characteristic: {}\nsigma_{{{}}}(u) = {}\n", s.delta.label(), join(&idx), fmt_c(v));
    ctx.emit(text, json!({"characteristic": s.delta.label(), "derivative": idx, "value": c_json(v), "normalization": c_json(s.c)}))
}

fn prime_form(ctx: &Ctx, p: &str, q: &str, ps: usize, qs: usize) -> Result<()> {
    let s = ctx.sigma()?;
    let pf = PrimeForm::new(&s)?;
    let pick = |x: &str, sheet: usize| -> Result<_> {
        let lifts = s.curve.lift_points(parse_c(x)?)?;
        lifts.get(sheet).copied().ok_or_else(|| anyhow!("sheet {sheet} out of range"))
    };
    let (pp, qq) = (pf.lift(&pick(p, ps)?), pf.lift(&pick(q, qs)?));
    let v = pf.values(&pp, &qq)?;
    let mut text = format!(
        "P = ({}, {})\nQ = ({}, {})\nE(P,Q) = {}\nmodular form = {}\nsigma form = {}\nratio = {}\n",
        fmt_c(pp.p.x),
        fmt_c(pp.p.y),
        fmt_c(qq.p.x),
        fmt_c(qq.p.y),
        fmt_c(v.e),
        fmt_c(v.modular),
        fmt_c(v.sigma_form),
        fmt_c(v.ratio)
    );
    let mut value = json!({
        "p": [c_json(pp.p.x), c_json(pp.p.y)], "q": [c_json(qq.p.x), c_json(qq.p.y)],
        "e": c_json(v.e), "modular": c_json(v.modular), "sigma_form": c_json(v.sigma_form), "ratio": c_json(v.ratio),
    });
    if s.curve.r == 3 {
        let var = pf.sigma_form_variant(&pp, &qq)?;
        text += &format!("variant sigma form = {}\n", fmt_c(var));
        value["variant_sigma_form"] = c_json(var);
    }
    ctx.emit(text, value)
}

fn verify(ctx: &Ctx, tol_file: Option<&PathBuf>, samples: usize) -> Result<bool> {
    let c = ctx.curve()?;
    let tolerances: BTreeMap<String, f64> = match tol_file {
        None => BTreeMap::new(),
        Some(p) => serde_json::from_str(&fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?,
    };
    let cfg = SuiteConfig { seed: ctx.cli.seed, tolerances, default_samples: samples, periods: ctx.period_options(), ..Default::default() };
    let rep = run_suite(&c, &cfg)?;
    let mut text = String::new();
    for e in &rep.entries {
        text += &format!(
            "{:<4} {:<24} samples={:<3} residual={:.3e} tol={:.0e}{}\n",
            if e.pass { "PASS" } else { "FAIL" },
            e.identity_id,
            e.samples,
            e.max_rel_residual,
            e.tolerance,
            e.note.as_ref().map(|n| format!("  [{n}]")).unwrap_or_default()
        );
    }
    // The report file is always JSON; --json only changes what goes to stdout.
    match &ctx.cli.out {
        Some(p) => {
            fs::write(p, serde_json::to_string_pretty(&rep)? + "\n").with_context(|| format!("writing {}", p.display()))?;
            print!("{text}");
        }
        None if ctx.cli.json => println!("{}", serde_json::to_string_pretty(&rep)?),
        None => print!("{text}"),
    }
    Ok(rep.all_pass())
}

fn benney(ctx: &Ctx, p: &str, range: f64, points: usize, rest: &str) -> Result<()> {
    let s = ctx.sigma()?;
    let pf = PrimeForm::new(&s)?;
    let pt = s.curve.lift_points(parse_c(p)?)?[0];
    let v = s.abel.point(&pt);
    let rest = parse_c(rest)?;
    let mut csv = String::from("u1_re,u1_im,core_re,core_im\n");
    for k in 0..points {
        let t = if points > 1 { -range + 2.0 * range * k as f64 / (points - 1) as f64 } else { 0.0 };
        let mut u = vec![rest; s.genus()];
        u[0] = C64::new(t, 0.0);
        let core = pf.benney_core(&u, &v);
        csv += &format!("{},{},{},{}\n", u[0].re, u[0].im, core.re, core.im);
    }
    match &ctx.cli.out {
        Some(path) => fs::write(path, csv).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn run(ctx: &Ctx) -> Result<bool> {
    match &ctx.cli.command {
        Command::Describe => describe(ctx)?,
        Command::Periods => periods(ctx)?,
        Command::Theta { z, char } => theta(ctx, z, char.as_deref())?,
        Command::Sigma { u, deriv } => sigma(ctx, u, deriv.as_deref())?,
        Command::PrimeForm { p, q, p_sheet, q_sheet } => prime_form(ctx, p, q, *p_sheet, *q_sheet)?,
        Command::Verify { tol_file, samples } => return verify(ctx, tol_file.as_ref(), *samples),
        Command::BenneyDemo { p, range, points, rest } => benney(ctx, p, *range, *points, rest)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    let ctx = Ctx { cli: Cli::parse() };
    match run(&ctx) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
