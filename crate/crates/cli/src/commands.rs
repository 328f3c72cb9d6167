use std::path::PathBuf;
use std::sync::Arc;

use hscomp::balls::{cache_load, cache_save, enumerate_ball_with_budget, fit_growth, Ball, DEFAULT_BUDGET_BYTES};
use hscomp::bounds::{
    direct_sum_bound, empirical_compression, extension_bound_hyp, extension_bound_hyp_at, extension_bound_poly,
    extension_bound_poly_at, limit_bound, wreath_bound, BoundReport, IndexRule, LimitSystem, Seq, Variant,
};
use hscomp::combine::{combine_family, verify_combined, CombinedOutcome, ExtensionScales, KernelFamily, QuotientFamily};
use hscomp::embed::{corollary_threshold, schoenberg_family_for, verify_family, CompressionProfile, ScaleParams};
use hscomp::group::{make_extension, make_group, Element, ExtensionModel, GroupModel, GroupSpec, Length};
use hscomp::hyp::{default_q, fit_condition2_constants, verify_hyp_lemma, ArithmeticMode, Boundary, HypFamily, HypParams};
use hscomp::poly::{poly_family, verify_poly_lemma};
use hscomp::report::{format_float, VerificationReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Config, Fields, NRange};
use crate::error::CliError;
use crate::output::{emit, CsvDoc};

pub const CACHE_ENV: &str = "HSCOMP_CACHE_DIR";
const DEFAULT_CACHE_DIR: &str = ".hscomp-cache";

struct Common {
    out: Option<String>,
    seed: u64,
    threads: usize,
}

impl Common {
    fn read(f: &mut Fields<'_>) -> Self {
        Common {
            out: f.opt("out"),
            seed: f.get("seed", 0),
            threads: f.get("threads", 0),
        }
    }

    fn apply(&self) {
        if self.threads > 0 {
            // fails only if a pool already exists, which is harmless
            let _ = rayon::ThreadPoolBuilder::new().num_threads(self.threads).build_global();
        }
    }

    fn emit(&self, doc: &CsvDoc, cfg: &Config, command: &str) -> Result<(), CliError> {
        emit(self.out.as_deref(), &doc.render(cfg, command, self.seed))
    }
}

fn one_of(f: &mut Fields<'_>, key: &str, value: &str, allowed: &[&str]) {
    f.check(allowed.contains(&value), key, format!("{value:?} is not one of {}", allowed.join(", ")));
}

fn coords(x: &Element) -> Vec<f64> {
    x.values().iter().map(|&v| v as f64).collect()
}

fn sqrt_coords(x: &Element) -> Vec<f64> {
    x.values().iter().map(|&v| (v as f64).signum() * (v.unsigned_abs() as f64).sqrt()).collect()
}

fn require_free_abelian(spec: &GroupSpec) -> Result<(), CliError> {
    match spec {
        GroupSpec::FreeAbelian { .. } => Ok(()),
        other => Err(CliError::new(
            "unsupported",
            format!("{other}: coordinate features need free_abelian(d)"),
        )),
    }
}

fn cache_dir(cfg_dir: Option<String>) -> PathBuf {
    match std::env::var(CACHE_ENV) {
        Ok(d) if !d.is_empty() => PathBuf::from(d),
        _ => PathBuf::from(cfg_dir.unwrap_or_else(|| DEFAULT_CACHE_DIR.to_string())),
    }
}

fn cache_file(dir: &std::path::Path, spec: &GroupSpec, radius: Length) -> PathBuf {
    let name: String = spec
        .to_string()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    dir.join(format!("{name}-r{radius}.hscb"))
}

struct BallKeys {
    common: Common,
    spec: GroupSpec,
    radius: Length,
    budget: usize,
    use_cache: bool,
    dir: PathBuf,
}

fn ball_keys(cfg: &Config) -> Result<BallKeys, CliError> {
    let mut f = cfg.fields();
    let common = Common::read(&mut f);
    let spec: Option<GroupSpec> = f.require("group");
    let radius: Option<Length> = f.require("radius");
    let budget = f.get("budget_bytes", DEFAULT_BUDGET_BYTES);
    let use_cache = f.get("cache", false);
    let dir = f.opt("cache_dir");
    f.finish()?;
    common.apply();
    Ok(BallKeys {
        common,
        spec: spec.expect("validated"),
        radius: radius.expect("validated"),
        budget,
        use_cache,
        dir: cache_dir(dir),
    })
}

fn load_cached(model: &GroupModel, path: &std::path::Path, radius: Length) -> Result<Ball, CliError> {
    let ball = cache_load(model, path)?;
    if ball.radius() != radius {
        return Err(CliError::new(
            "cache-mismatch",
            format!("{} holds radius {}, expected {radius}", path.display(), ball.radius()),
        ));
    }
    Ok(ball)
}

pub fn ball(cfg: &Config) -> Result<(), CliError> {
    let k = ball_keys(cfg)?;
    let model = make_group(&k.spec)?;
    let path = cache_file(&k.dir, &k.spec, k.radius);
    let ball = if k.use_cache && path.exists() {
        load_cached(&model, &path, k.radius)?
    } else {
        let b = enumerate_ball_with_budget(&model, k.radius, k.budget)?;
        if k.use_cache {
            std::fs::create_dir_all(&k.dir)?;
            cache_save(&b, &path)?;
        }
        b
    };
    let counts = ball.counts();
    let mut doc = CsvDoc::new("radius,count,sphere");
    for (r, &c) in counts.iter().enumerate() {
        let sphere = if r == 0 { c } else { c - counts[r - 1] };
        doc.row(format!("{r},{c},{sphere}"));
    }
    doc.meta("group", &k.spec);
    if let Ok(g) = fit_growth(counts) {
        doc.meta("growth_degree", format_float(g.degree));
        doc.meta("growth_exponential", g.exponential);
    }
    eprintln!("ball: {} radius {} has {} elements", k.spec, k.radius, ball.len());
    k.common.emit(&doc, cfg, "ball")
}

fn cache_emit(k: &BallKeys, cfg: &Config, command: &str, ball: &Ball, path: &std::path::Path) -> Result<(), CliError> {
    let mut doc = CsvDoc::new("group,radius,count,path");
    doc.row(format!("\"{}\",{},{},{}", k.spec, ball.radius(), ball.len(), path.display()));
    k.common.emit(&doc, cfg, command)
}

pub fn cache_build(cfg: &Config) -> Result<(), CliError> {
    let k = ball_keys(cfg)?;
    let model = make_group(&k.spec)?;
    let ball = enumerate_ball_with_budget(&model, k.radius, k.budget)?;
    std::fs::create_dir_all(&k.dir)?;
    let path = cache_file(&k.dir, &k.spec, k.radius);
    cache_save(&ball, &path)?;
    cache_emit(&k, cfg, "cache build", &ball, &path)
}

pub fn cache_check(cfg: &Config) -> Result<(), CliError> {
    let k = ball_keys(cfg)?;
    let model = make_group(&k.spec)?;
    let path = cache_file(&k.dir, &k.spec, k.radius);
    if !path.exists() {
        return Err(CliError::new("io", format!("{}: no cached ball", path.display())));
    }
    let ball = load_cached(&model, &path, k.radius)?;
    cache_emit(&k, cfg, "cache check", &ball, &path)
}

pub fn cache_path(cfg: &Config) -> Result<(), CliError> {
    let k = ball_keys(cfg)?;
    let path = cache_file(&k.dir, &k.spec, k.radius);
    emit(k.common.out.as_deref(), &format!("{}\n", path.display()))
}

struct VerifyKeys {
    lemma: String,
    spec: GroupSpec,
    ns: NRange,
    p: f64,
    q: Option<f64>,
    delta: f64,
    profile: (f64, f64, f64, f64),
    r_exp: f64,
    a: f64,
    b: f64,
    radius: Option<Length>,
    boundary: (String, Option<String>),
    mode: ArithmeticMode,
    budget: usize,
}

pub fn verify(cfg: &Config) -> Result<(), CliError> {
    let mut f = cfg.fields();
    let common = Common::read(&mut f);
    let lemma: String = f.require("lemma").unwrap_or_default();
    if cfg.get("lemma").is_some() {
        one_of(&mut f, "lemma", &lemma, &["schoenberg", "poly", "hyp", "combine"]);
    }
    let spec: Option<GroupSpec> = f.require("group");
    let ns: Option<NRange> = f.require("n");
    let p: f64 = f.get("p", 0.05);
    f.check((0.0..1.0).contains(&p), "p", format!("{p} outside [0, 1)"));
    let q: Option<f64> = f.opt("q");
    let delta: f64 = f.get("delta", 1.0);
    f.check(delta > 0.0 && delta <= 1.0, "delta", format!("{delta} outside (0, 1]"));
    let profile = (f.get("c", 1.0), f.get("c_tilde", 1.0), f.get("d_const", 0.0), f.get("d_tilde", 0.0));
    let r_exp = f.get("r_exp", 0.5);
    let a = f.get("a", 2f64.sqrt());
    let b = f.get("b", 0.5 + p);
    let radius: Option<Length> = f.opt("radius");
    let boundary = (f.get("boundary_pre", String::new()), f.opt::<String>("boundary_period"));
    f.check(
        boundary.0.is_empty() || boundary.1.is_some(),
        "boundary_pre",
        "needs boundary_period",
    );
    let arithmetic: String = f.get("arithmetic", "float".to_string());
    one_of(&mut f, "arithmetic", &arithmetic, &["float", "exact"]);
    let budget = f.get("budget_bytes", DEFAULT_BUDGET_BYTES);
    f.finish()?;
    common.apply();
    let k = VerifyKeys {
        lemma,
        spec: spec.expect("validated"),
        ns: ns.expect("validated"),
        p,
        q,
        delta,
        profile,
        r_exp,
        a,
        b,
        radius,
        boundary,
        mode: if arithmetic == "exact" {
            ArithmeticMode::Exact
        } else {
            ArithmeticMode::Float
        },
        budget,
    };
    let mut doc = CsvDoc::new(VerificationReport::CSV_HEADER);
    doc.meta("lemma", &k.lemma);
    doc.meta("group", &k.spec);
    match k.lemma.as_str() {
        "schoenberg" => verify_schoenberg(&k, &mut doc)?,
        "poly" => verify_poly(&k, &mut doc)?,
        "hyp" => verify_hyp(&k, &mut doc)?,
        _ => verify_combine(&k, &mut doc)?,
    }
    common.emit(&doc, cfg, "verify")
}

fn boundary(k: &VerifyKeys, model: &GroupModel) -> Result<Boundary, CliError> {
    Ok(match &k.boundary.1 {
        Some(period) => Boundary::parse(model, &k.boundary.0, period)?,
        None => Boundary::power_of(0),
    })
}

fn verify_schoenberg(k: &VerifyKeys, doc: &mut CsvDoc) -> Result<(), CliError> {
    require_free_abelian(&k.spec)?;
    let model = make_group(&k.spec)?;
    let (c, c_tilde, d, d_tilde) = k.profile;
    let prof = CompressionProfile::new(k.delta, c, d, c_tilde, d_tilde)?;
    for n in k.ns.iter() {
        let params = ScaleParams::new(n, k.p, k.r_exp, k.a, k.b)?;
        let th = corollary_threshold(&prof, &params)?;
        let radius = k.radius.unwrap_or((2.0 * th.a_n).ceil() as Length);
        let ball = Arc::new(enumerate_ball_with_budget(&model, radius, k.budget)?);
        let fam = schoenberg_family_for(ball, coords, &prof, params)?;
        let rep = verify_family(&fam, n, params.r_n(), params.eps_n(), th.a_n);
        doc.rows_from(&rep.to_csv());
        doc.meta(&format!("n={n} A_n"), format_float(th.a_n));
        doc.meta(&format!("n={n} ball_radius"), radius);
        eprintln!("schoenberg n={n}: {} violations", rep.total_violations());
    }
    Ok(())
}

fn verify_poly(k: &VerifyKeys, doc: &mut CsvDoc) -> Result<(), CliError> {
    let model = make_group(&k.spec)?;
    for n in k.ns.iter() {
        let fam = poly_family(&model, n, k.p)?;
        let out = verify_poly_lemma(&fam);
        doc.rows_from(&out.report.to_csv());
        doc.meta(&format!("n={n} k"), fam.k());
        doc.meta(&format!("n={n} support_contained"), out.support_contained);
        eprintln!("poly n={n}: k={} {} violations", fam.k(), out.report.total_violations());
    }
    Ok(())
}

fn verify_hyp(k: &VerifyKeys, doc: &mut CsvDoc) -> Result<(), CliError> {
    let model = make_group(&k.spec)?;
    let a = boundary(k, &model)?;
    let q = k.q.unwrap_or(default_q(k.p));
    let mut outcomes = Vec::new();
    for n in k.ns.iter() {
        let fam = HypFamily::new(&model, HypParams::new(n, k.p, q, a.clone())?)?;
        let out = verify_hyp_lemma(&fam, k.radius.unwrap_or(3), k.mode)?;
        doc.rows_from(&out.report.to_csv());
        doc.meta(&format!("n={n} min_l1"), format_float(out.min_l1));
        doc.meta(&format!("n={n} max_support_radius"), out.max_support_radius);
        eprintln!("hyp n={n}: {} violations", out.report.total_violations());
        outcomes.push(out);
    }
    doc.meta("q", format_float(q));
    if let Some((c, d)) = fit_condition2_constants(&outcomes, q) {
        doc.meta("cond2_fit_C", format_float(c));
        doc.meta("cond2_fit_D", format_float(d));
    }
    Ok(())
}

fn combine_at<Q: QuotientFamily>(
    ext: &ExtensionModel,
    g: &Q,
    scales: ExtensionScales,
    radius: Length,
    budget: usize,
) -> Result<CombinedOutcome, CliError> {
    let h = KernelFamily::new(ext, &scales, scales.domain_radius(radius))?;
    let fam = combine_family(ext, g, &h, scales);
    let ball = enumerate_ball_with_budget(ext.total(), radius, budget)?;
    Ok(verify_combined(&fam, &ball)?)
}

fn verify_combine(k: &VerifyKeys, doc: &mut CsvDoc) -> Result<(), CliError> {
    let ext = make_extension(&k.spec)?;
    let radius = k.radius.unwrap_or(3);
    for n in k.ns.iter() {
        let out = if let GroupSpec::FreeGroup { .. } = ext.quotient().spec() {
            let params = HypParams::with_default_q(n, k.p, boundary(k, ext.quotient())?)?;
            let g = HypFamily::new(ext.quotient(), params)?;
            let qball = enumerate_ball_with_budget(ext.quotient(), radius, k.budget)?;
            let s_g = qball.elements().iter().map(|x| g.support_radius(x)).max().unwrap_or(0);
            let scales = ExtensionScales::hyperbolic(n, k.p, k.delta)?.with_support(s_g as f64)?;
            combine_at(&ext, &g, scales, radius, k.budget)?
        } else {
            let g = poly_family(ext.quotient(), n, k.p)?;
            let scales = ExtensionScales::polynomial(n, k.p, k.delta)?.with_support(g.k() as f64)?;
            combine_at(&ext, &g, scales, radius, k.budget)?
        };
        doc.rows_from(&out.report.to_csv());
        doc.meta(&format!("n={n} max_norm_error"), format_float(out.max_norm_error));
        doc.meta(&format!("n={n} max_drift"), out.max_drift);
        doc.meta(&format!("n={n} ball_size"), out.ball_size);
        eprintln!("combine n={n}: {} violations", out.report.total_violations());
    }
    Ok(())
}

pub fn bound(cfg: &Config) -> Result<(), CliError> {
    const FORMULAS: &[&str] = &["limit", "limit_quasi", "direct_sum", "extension_poly", "extension_hyp", "wreath"];
    let mut f = cfg.fields();
    let common = Common::read(&mut f);
    let formula: String = f.require("formula").unwrap_or_default();
    if cfg.get("formula").is_some() {
        one_of(&mut f, "formula", &formula, FORMULAS);
    }
    let delta: f64 = f.get("delta", 1.0);
    let n_max: u64 = f.get("n_max", 1_000_000);
    let mono = |f: &mut Fields<'_>, key: &str, coef: f64| Seq::Monomial {
        coef: f.get(key, coef),
        exp: f.get(&format!("{key}_exp"), 0.0),
    };
    let c = mono(&mut f, "c", 1.0);
    let c_tilde = mono(&mut f, "c_tilde", 1.0);
    let d = mono(&mut f, "d_const", 0.0);
    let d_tilde = mono(&mut f, "d_tilde", 0.0);
    let g = IndexRule {
        coef: f.get("g_coef", 1.0),
        exp: f.get("g_exp", 0.0),
    };
    let p: Option<f64> = f.opt("p");
    let alpha: f64 = f.get("alpha", 1.0);
    let growth_degree: u32 = f.get("growth_degree", 1);
    f.finish()?;
    common.apply();
    let report: BoundReport = match formula.as_str() {
        "limit" | "limit_quasi" => {
            let sys = LimitSystem::new(delta, c, c_tilde, d, d_tilde, g)?;
            let variant = if formula == "limit" {
                Variant::Standard
            } else {
                Variant::QuasiGeodesic
            };
            limit_bound(&sys, n_max, variant)?
        }
        "direct_sum" => direct_sum_bound(n_max)?,
        "extension_poly" | "extension_hyp" => {
            let poly = formula == "extension_poly";
            let mut r = if poly {
                extension_bound_poly(delta)?
            } else {
                extension_bound_hyp(delta)?
            };
            if let Some(p) = p {
                r.value = if poly {
                    extension_bound_poly_at(delta, p)?
                } else {
                    extension_bound_hyp_at(delta, p)?
                };
                r.trace = format!("p = {p}, delta = {delta}");
            }
            r
        }
        _ => wreath_bound(alpha, growth_degree)?,
    };
    eprint!("{report}");
    let mut doc = CsvDoc::new(BoundReport::CSV_HEADER);
    doc.row(report.to_csv_row());
    common.emit(&doc, cfg, "bound")
}

pub fn estimate(cfg: &Config) -> Result<(), CliError> {
    let mut f = cfg.fields();
    let common = Common::read(&mut f);
    let spec: Option<GroupSpec> = f.require("group");
    let radius: Option<Length> = f.require("radius");
    let embedding: String = f.get("embedding", "identity".to_string());
    one_of(&mut f, "embedding", &embedding, &["identity", "sqrt"]);
    let pairs_mode: String = f.get("pairs", "basepoint".to_string());
    one_of(&mut f, "pairs", &pairs_mode, &["basepoint", "sampled"]);
    let samples: usize = f.get("samples", 10_000);
    let d_min: f64 = f.get("d_min", 1.0);
    let points: Option<String> = f.opt("points");
    let budget = f.get("budget_bytes", DEFAULT_BUDGET_BYTES);
    f.finish()?;
    common.apply();
    let spec = spec.expect("validated");
    require_free_abelian(&spec)?;
    let model = make_group(&spec)?;
    let ball = enumerate_ball_with_budget(&model, radius.expect("validated"), budget)?;
    let feature = if embedding == "sqrt" { sqrt_coords } else { coords };
    let gap = |x: &Element, y: &Element| {
        let (u, v) = (feature(x), feature(y));
        u.iter().zip(&v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    };
    let elems = ball.elements();
    let pairs: Vec<(f64, f64)> = if pairs_mode == "basepoint" {
        let e = model.identity();
        elems.iter().map(|x| (model.distance(&e, x) as f64, gap(&e, x))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
        (0..samples)
            .map(|_| {
                let x = &elems[rng.gen_range(0..elems.len())];
                let y = &elems[rng.gen_range(0..elems.len())];
                (model.distance(x, y) as f64, gap(x, y))
            })
            .collect()
    };
    let est = empirical_compression(&pairs, d_min)?;
    let mut doc = CsvDoc::new("embedding,pairs,exponent,intercept,residual,bins,pairs_used,zero_bins");
    doc.row(format!(
        "{embedding},{pairs_mode},{},{},{},{},{},{}",
        format_float(est.exponent),
        format_float(est.intercept),
        format_float(est.residual),
        est.envelope.len(),
        est.pairs_used,
        est.zero_bins
    ));
    doc.meta("group", &spec);
    eprintln!("estimate: exponent {:.4} from {} pairs", est.exponent, est.pairs_used);
    if let Some(path) = points {
        let mut pts = CsvDoc::new("kind,log_d,log_norm");
        let lo = d_min.max(1.0);
        for &(d, v) in pairs.iter().filter(|&&(d, v)| d >= lo && v > 0.0) {
            pts.row(format!("pair,{},{}", format_float(d.ln()), format_float(v.ln())));
        }
        for &(x, y) in &est.envelope {
            pts.row(format!("envelope,{},{}", format_float(x), format_float(y)));
        }
        pts.meta("exponent", format_float(est.exponent));
        emit(Some(&path), &pts.render(cfg, "estimate points", common.seed))?;
    }
    common.emit(&doc, cfg, "estimate")
}
