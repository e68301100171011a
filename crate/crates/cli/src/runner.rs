//! Dispatch from scenarios to the library and assembly of run reports.

use crate::error::schema;
use crate::payload::{self, deltas_from, Angles};
use crate::plot;
use crate::random;
use crate::scenario::{BatchReport, Input, Kind, Output, RunReport, Scenario, Timing, VERSION};
use crate::CliError;
use contour_jets::analysis::{
    classify_curve, contour_conjugate_directions, evaluate_P, indistinguishable_pair_with, AmbiguityCurve,
    AmbiguousSurface, Conjugacy, CurveClass, GRoot,
};
use contour_jets::curve::{
    closed_form_kappa3, project_osculating, project_tangential_secondary, tangential_cuspidal_curvature, CurvatureJet,
    CurveJet, GeneralDirection, OsculatingDirection,
};
use contour_jets::curve_recon::{recover_curve, recover_curve_tangential, OsculatingMeasurementPair};
use contour_jets::oracle::{numeric_curvature_jet, suggested_half_width, PlaneSamples, DEFAULT_COUNT, MAX_DERIVATIVE};
use contour_jets::surface::{
    contour_curvature_jet, find_vertex_directions, numeric_contour_oracle, p_of_theta, ContourObservation, SurfaceJet,
    VertexDirections,
};
use contour_jets::surface_recon::{
    check_admissible_triple, degenerate_pair_demo, recover_from_normal_curvatures, recover_second_order,
    recover_third_order_with, TripleMeasurement,
};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Residual threshold above which a warning is attached, unless overridden.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
/// Agreement threshold for the sampling oracles.
pub const ORACLE_TOLERANCE: f64 = 1e-5;
const CONDITION_WARNING: f64 = 1e-6;

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub order: Option<usize>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub degrees: bool,
    pub tolerance: Option<f64>,
    pub svg: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

/// A file to be written once the whole run has succeeded.
#[derive(Debug, Clone, PartialEq)]
pub struct PendingFile {
    pub path: PathBuf,
    pub contents: String,
}

#[derive(Debug, Clone)]
pub struct Run {
    pub output: Output,
    pub files: Vec<PendingFile>,
}

#[derive(Default)]
struct Outcome {
    outputs: Map<String, Value>,
    residuals: BTreeMap<String, f64>,
    warnings: Vec<String>,
    files: Vec<PendingFile>,
}

impl Outcome {
    fn put(&mut self, key: &str, value: impl Into<Value>) {
        self.outputs.insert(key.to_string(), value.into());
    }

    fn residual(&mut self, key: &str, value: f64) {
        if value.is_finite() {
            self.residuals.insert(key.to_string(), value);
        } else {
            self.warnings.push(format!("residual {key} is not finite"));
        }
    }

    fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }
}

struct Ctx<'a> {
    opts: &'a Options,
    seed: Option<u64>,
}

impl Ctx<'_> {
    fn angle(&self, x: f64) -> f64 {
        if self.opts.degrees {
            x.to_degrees()
        } else {
            x
        }
    }

    fn angles<const N: usize>(&self, x: [f64; N]) -> [f64; N] {
        x.map(|t| self.angle(t))
    }

    fn payload<T: DeserializeOwned + Angles>(&self, kind: Kind, raw: &Value) -> Result<T, CliError> {
        let mut p: T = payload::parse(kind.name(), raw)?;
        if self.opts.degrees {
            p.scale_angles(std::f64::consts::PI / 180.0);
        }
        Ok(p)
    }
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

fn max_rel(got: &[f64], want: &[f64]) -> f64 {
    got.iter().zip(want).map(|(g, w)| rel(*g, *w)).fold(0.0, f64::max)
}

/// Runs a parsed input. Batches run on `--jobs` threads and report in input order;
/// the first failing scenario (in input order) fails the whole run.
pub fn run_input(input: &Input, expected: Option<Kind>, opts: &Options) -> Result<Run, CliError> {
    let check_kind = |s: &Scenario| match expected {
        Some(k) if k != s.kind => Err(schema(format!(
            "scenario kind `{}` does not match subcommand `{}`",
            s.kind.name(),
            k.name()
        ))),
        _ => Ok(()),
    };
    let jobs = opts.jobs.unwrap_or(1);
    if jobs == 0 {
        return Err(schema("--jobs must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    match input {
        Input::Single(s) => {
            check_kind(s)?;
            let (report, files) = pool.install(|| run_scenario(s, opts))?;
            Ok(Run { output: Output::Single(report), files })
        }
        Input::Batch(b) => {
            if opts.svg.is_some() || opts.csv.is_some() {
                return Err(schema("--svg and --csv apply to single scenarios only"));
            }
            b.scenarios.iter().try_for_each(check_kind)?;
            let results: Vec<_> = pool.install(|| b.scenarios.par_iter().map(|s| run_scenario(s, opts)).collect());
            let reports = results
                .into_iter()
                .map(|r| r.map(|(report, _)| report))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Run {
                output: Output::Batch(BatchReport { version: VERSION, reports }),
                files: Vec::new(),
            })
        }
    }
}

pub fn run_scenario(s: &Scenario, opts: &Options) -> Result<(RunReport, Vec<PendingFile>), CliError> {
    let start = Instant::now();
    let ctx = Ctx { opts, seed: opts.seed.or(s.seed) };
    let raw = &s.payload;
    let mut out = match s.kind {
        Kind::ForwardCurve => forward_curve(&ctx, ctx.payload(s.kind, raw)?),
        Kind::ReconCurve => recon_curve(&ctx, ctx.payload(s.kind, raw)?),
        Kind::ReconCurveTangential => recon_curve_tangential(&ctx, ctx.payload(s.kind, raw)?),
        Kind::ForwardSurface => forward_surface(&ctx, ctx.payload(s.kind, raw)?),
        Kind::ReconSurface2 => recon_surface_2(&ctx, ctx.payload(s.kind, raw)?),
        Kind::ReconSurface3 => recon_surface_3(&ctx, ctx.payload(s.kind, raw)?),
        Kind::Conjugate => conjugate(&ctx, ctx.payload(s.kind, raw)?),
        Kind::Ambiguity => ambiguity(&ctx, ctx.payload(s.kind, raw)?),
        Kind::NormalRecon => normal_recon(&ctx, ctx.payload(s.kind, raw)?),
        Kind::OracleCheck => oracle_check(&ctx, ctx.payload(s.kind, raw)?),
        Kind::PlotContour => plot_contour(&ctx, ctx.payload(s.kind, raw)?),
    }?;
    if opts.order.is_some() && !matches!(s.kind, Kind::ForwardCurve | Kind::ReconCurve | Kind::OracleCheck) {
        out.warn(format!("--order has no effect on {}", s.kind.name()));
    }
    let tolerance = opts.tolerance.unwrap_or(match s.kind {
        Kind::OracleCheck | Kind::PlotContour => ORACLE_TOLERANCE,
        _ => DEFAULT_TOLERANCE,
    });
    let over: Vec<String> = out
        .residuals
        .iter()
        .filter(|(_, v)| v.abs() > tolerance)
        .map(|(k, v)| format!("residual {k} = {v:e} exceeds tolerance {tolerance:e}"))
        .collect();
    out.warnings.extend(over);
    let report = RunReport {
        version: VERSION,
        kind: s.kind,
        inputs: raw.clone(),
        outputs: Value::Object(out.outputs),
        residuals: out.residuals,
        warnings: out.warnings,
        seed: ctx.seed,
        timing: Timing { elapsed_ms: start.elapsed().as_secs_f64() * 1e3 },
    };
    Ok((report, out.files))
}

fn jet_json(jet: &CurvatureJet) -> Value {
    json!({
        "values": jet.values(),
        "derivatives": (0..=jet.order()).map(|i| jet.derivative(i)).collect::<Vec<_>>(),
    })
}

fn forward_curve(ctx: &Ctx, p: payload::ForwardCurve) -> Result<Outcome, CliError> {
    if p.a.is_empty() || p.b.is_empty() {
        return Err(schema("forward-curve payload needs at least a2 in `a` and b3 in `b`"));
    }
    if p.theta.is_none() && p.direction.is_none() {
        return Err(schema("forward-curve payload needs `theta` or `direction`"));
    }
    let n = ctx.opts.order.or(p.order).unwrap_or(3);
    let order = (p.a.len() + 1).max(p.b.len() + 2).max(n + 2);
    let curve = CurveJet::padded(&p.a, &p.b, order)?;
    let mut out = Outcome::default();
    out.put("order", n);
    if curve.b(3) == 0.0 {
        out.warn("b3 = 0: zero torsion at the base point, so the two-view reconstruction hypotheses fail");
    }
    if curve.a(2) == 0.0 {
        out.warn("a2 = 0: the base point is an inflection of the space curve");
    }
    if let Some(theta) = p.theta {
        let dir = OsculatingDirection::new(theta)?;
        let jet = project_osculating(&curve, dir, n)?;
        let mut osc = jet_json(&jet);
        osc["theta"] = ctx.angle(theta).into();
        if n >= 3 {
            let closed = closed_form_kappa3(&curve, dir)?;
            out.residual("closed_form_vs_series", max_rel(&jet.values()[..4], closed.values()));
            osc["closed_form"] = json!(closed.values());
        }
        out.put("osculating", osc);
    }
    match tangential_cuspidal_curvature(&curve) {
        Ok(mu) => out.put("tangential_mu", mu),
        Err(e) => out.warn(format!("tangential projection: {e}")),
    }
    if let Some([t1, t2]) = p.direction {
        let jet = project_tangential_secondary(&curve, GeneralDirection::new(t1, t2)?)?;
        let mut sec = jet_json(&jet);
        sec["theta1"] = ctx.angle(t1).into();
        sec["theta2"] = ctx.angle(t2).into();
        out.put("secondary", sec);
    }
    Ok(out)
}

fn recon_curve(ctx: &Ctx, p: payload::ReconCurve) -> Result<Outcome, CliError> {
    let default_n = p.jet1.len().min(p.jet2.len()) + 1;
    let n = ctx.opts.order.or(p.n).unwrap_or(default_n);
    let pair = OsculatingMeasurementPair::new(CurvatureJet::new(p.jet1)?, CurvatureJet::new(p.jet2)?, p.phi, n)?;
    let r = recover_curve(&pair)?;
    let mut out = Outcome::default();
    out.put("n", n);
    out.put("theta1", ctx.angle(r.theta1));
    out.put("theta2", ctx.angle(r.theta2));
    out.put("a", r.a.clone());
    out.put("b", r.b.clone());
    out.put("condition", r.condition.clone());
    out.residual("max_relative_residual", r.max_residual());
    if r.condition.iter().any(|&c| c < CONDITION_WARNING) {
        out.warn("near-degenerate: a level of the triangular solve is ill-conditioned");
    }
    Ok(out)
}

fn recon_curve_tangential(ctx: &Ctx, p: payload::ReconCurveTangential) -> Result<Outcome, CliError> {
    let dir = GeneralDirection::new(p.theta1, p.theta2)?;
    let jet = CurvatureJet::new(p.jet.clone())?;
    let r = recover_curve_tangential(p.mu, &jet, dir)?;
    let mut out = Outcome::default();
    out.put("a2", r.a2);
    out.put("b3", r.b3);
    out.put("a3", r.a3);
    let curve = CurveJet::padded(&[r.a2, r.a3], &[r.b3], 3)?;
    out.residual("mu", rel(tangential_cuspidal_curvature(&curve)?, p.mu));
    let fwd = project_tangential_secondary(&curve, dir)?;
    out.residual("jet", max_rel(&fwd.values()[..2], &p.jet[..2.min(p.jet.len())]));
    out.put("direction", json!([ctx.angle(p.theta1), ctx.angle(p.theta2)]));
    Ok(out)
}

fn vertex_json(ctx: &Ctx, s: &SurfaceJet, out: &mut Outcome) {
    match find_vertex_directions(s) {
        Ok(VertexDirections::All) => out.put("vertex_directions", "all"),
        Ok(VertexDirections::Finite(v)) => {
            out.put("vertex_directions", v.into_iter().map(|t| ctx.angle(t)).collect::<Vec<_>>())
        }
        Err(e) => out.warn(format!("vertex directions: {e}")),
    }
}

fn forward_surface(ctx: &Ctx, p: payload::ForwardSurface) -> Result<Outcome, CliError> {
    let s = p.surface.build()?;
    let mut out = Outcome::default();
    out.put("mean", s.mean_curvature());
    out.put("gaussian", s.gaussian_curvature());
    let mut views = Vec::new();
    let mut identity: f64 = 0.0;
    let scale = s.a20().abs().max(s.a02().abs());
    for &th in &p.thetas {
        let obs = contour_curvature_jet(&s, th)?;
        let pv = p_of_theta(&s, th);
        if pv.abs() < 1e-6 * scale {
            out.warn(format!("theta = {} is close to an asymptotic direction", ctx.angle(th)));
        }
        identity = identity.max(rel(obs.k0 * pv, s.gaussian_curvature()));
        views.push(json!({
            "theta": ctx.angle(th),
            "p": pv,
            "q": contour_jets::surface::q_of_theta(&s, th),
            "k0": obs.k0,
            "k1": obs.k1,
        }));
    }
    out.put("views", views);
    out.residual("k_times_p_minus_gaussian", identity);
    vertex_json(ctx, &s, &mut out);
    Ok(out)
}

fn recon_surface_2(ctx: &Ctx, p: payload::ReconSurface2) -> Result<Outcome, CliError> {
    let deltas = deltas_from("recon-surface-2", p.deltas, p.thetas)?;
    let m = TripleMeasurement::new(p.k, deltas)?;
    let r = recover_second_order(&m)?;
    let mut out = Outcome::default();
    out.put("mean", r.mean);
    out.put("gaussian", r.gaussian);
    out.put("a20", r.a20);
    out.put("a02", r.a02);
    out.put("thetas", ctx.angles(r.thetas).to_vec());
    out.put("condition", r.condition);
    out.put("lpv_discrepancy", r.lpv_discrepancy);
    if r.condition < CONDITION_WARNING {
        out.warn(format!("near-degenerate triple: relative det W = {:e}", r.condition));
    }
    let fwd: Vec<f64> = r
        .thetas
        .iter()
        .map(|&t| r.gaussian / (r.a20 * t.cos().powi(2) + r.a02 * t.sin().powi(2)))
        .collect();
    out.residual("forward_curvature", max_rel(&fwd, &p.k));
    out.residual("lpv_discrepancy", r.lpv_discrepancy);
    if let Some(th) = p.thetas {
        out.put("admissible", check_admissible_triple(th));
    }
    Ok(out)
}

fn recon_surface_3(_ctx: &Ctx, p: payload::ReconSurface3) -> Result<Outcome, CliError> {
    let g = p.a20 * p.a02;
    let obs: [ContourObservation; 4] = {
        let mut v = Vec::with_capacity(4);
        for (th, k1) in p.thetas.iter().zip(p.k1) {
            let pv = p.a20 * th.cos().powi(2) + p.a02 * th.sin().powi(2);
            v.push(ContourObservation::new(*th, g / pv, Some(k1))?);
        }
        v.try_into().expect("four observations")
    };
    let a3 = recover_third_order_with(p.a20, p.a02, &obs)?;
    let mut out = Outcome::default();
    out.put("a3", a3.to_vec());
    let s = SurfaceJet::cubic(p.a20, p.a02, a3)?;
    let mut fwd = Vec::new();
    for th in p.thetas {
        fwd.push(contour_curvature_jet(&s, th)?.k1.expect("cubic jet"));
    }
    out.residual("forward_dk_ds", max_rel(&fwd, &p.k1));
    Ok(out)
}

fn conjugate(ctx: &Ctx, p: payload::Conjugate) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    match contour_conjugate_directions(p.a20, p.a02, p.theta1)? {
        Conjugacy::AllDirections => out.put("result", "all-directions"),
        Conjugacy::NoSolution => out.put("result", "no-solution"),
        Conjugacy::TwoSolutions(ts) => {
            out.put("result", "two-solutions");
            out.put("theta2", ctx.angles(ts).to_vec());
            let g = p.a20 * p.a02;
            let k = |t: f64| g / (p.a20 * t.cos().powi(2) + p.a02 * t.sin().powi(2));
            let products: Vec<f64> = ts.iter().map(|&t| k(p.theta1) * k(t)).collect();
            out.residual("product_minus_gaussian", products.iter().map(|&v| rel(v, g)).fold(0.0, f64::max));
            out.put("curvature_products", products);
        }
    }
    Ok(out)
}

fn member_json(ctx: &Ctx, m: &AmbiguousSurface) -> Value {
    json!({
        "a20": m.surface.a20(),
        "a02": m.surface.a02(),
        "mean": m.mean,
        "gaussian": m.gaussian,
        "thetas": ctx.angles(m.thetas).to_vec(),
        "delta_sign": m.delta_sign,
    })
}

fn suffixed(path: &Path, index: usize) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}-{index}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{index}"),
    };
    path.with_file_name(name)
}

fn ambiguity(ctx: &Ctx, p: payload::Ambiguity) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    if let Some(demo) = &p.demo {
        if demo != "degenerate-pair" {
            return Err(schema(format!("unknown ambiguity demo `{demo}`; expected `degenerate-pair`")));
        }
        if p.k1.is_some() || p.k2.is_some() || p.delta.is_some() || p.m.is_some() || p.roots.is_some() {
            return Err(schema("the degenerate-pair demo takes no other fields"));
        }
        let d = degenerate_pair_demo()?;
        out.put("f1", json!({"a20": d.f1.a20(), "a02": d.f1.a02()}));
        out.put("f2", json!({"a20": d.f2.a20(), "a02": d.f2.a02()}));
        out.put("a", d.a);
        out.put("thetas1", ctx.angles(d.thetas1).to_vec());
        out.put("thetas2", ctx.angles(d.thetas2).to_vec());
        out.put("curvatures1", d.curvatures1.to_vec());
        out.put("curvatures2", d.curvatures2.to_vec());
        out.put("admissible1", check_admissible_triple(d.thetas1));
        out.put("admissible2", check_admissible_triple(d.thetas2));
        out.residual("curvature_mismatch", max_rel(&d.curvatures1, &d.curvatures2));
        return Ok(out);
    }
    let (Some(k1), Some(k2), Some(delta)) = (p.k1, p.k2, p.delta) else {
        return Err(schema("ambiguity payload needs `k1`, `k2` and `delta`, or `demo`"));
    };
    let c = AmbiguityCurve::new(k1, k2, delta)?;
    let class = match classify_curve(&c) {
        CurveClass::Hyperbola => "hyperbola",
        CurveClass::Ellipse => "ellipse",
        CurveClass::Degenerate => "degenerate",
    };
    out.put("class", class);
    out.put("q_determinant", c.q_determinant());
    let [w1, w2, w3, b] = c.coefficients();
    out.put("coefficients", json!({"g2": w1, "gm": w2, "m2": w3, "g": b}));
    let Some([m1, m2]) = p.m else {
        if p.roots.is_some() {
            return Err(schema("`roots` requires `m`"));
        }
        return Ok(out);
    };
    let root = |r: payload::RootName| match r {
        payload::RootName::Larger => GRoot::Larger,
        payload::RootName::Smaller => GRoot::Smaller,
    };
    let [r1, r2] = p.roots.unwrap_or([payload::RootName::Larger; 2]);
    let (f, g) = indistinguishable_pair_with(&c, (m1, root(r1)), (m2, root(r2)))?;
    out.put("pair", json!([member_json(ctx, &f), member_json(ctx, &g)]));
    for (i, m) in [&f, &g].into_iter().enumerate() {
        let scale = c.monomial_scale(m.mean, m.gaussian).max(f64::MIN_POSITIVE);
        out.residual(&format!("p_scaled_{}", i + 1), evaluate_P(&c, m.mean, m.gaussian).abs() / scale);
        let got = [
            contour_curvature_jet(&m.surface, m.thetas[0])?.k0,
            contour_curvature_jet(&m.surface, m.thetas[1])?.k0,
        ];
        out.residual(&format!("curvature_{}", i + 1), max_rel(&got, &[k1, k2]));
        if m.delta_sign < 0.0 {
            out.warn(format!("surface {}: views reproduce the curvatures with the angle difference -delta", i + 1));
        }
        if ctx.opts.svg.is_some() || ctx.opts.csv.is_some() {
            let plot = plot::sample(&m.surface, m.thetas[0], None, None)?;
            out.warnings.extend(plot.warnings.iter().map(|w| format!("surface {}: {w}", i + 1)));
            if let Some(path) = &ctx.opts.svg {
                out.files.push(PendingFile { path: suffixed(path, i + 1), contents: plot::svg(&plot.points) });
            }
            if let Some(path) = &ctx.opts.csv {
                out.files.push(PendingFile { path: suffixed(path, i + 1), contents: plot::csv(&plot.points) });
            }
        }
    }
    Ok(out)
}

fn normal_recon(_ctx: &Ctx, p: payload::NormalRecon) -> Result<Outcome, CliError> {
    let deltas = deltas_from("normal-recon", p.deltas, p.thetas)?;
    let (mean, g) = recover_from_normal_curvatures(p.kn, deltas)?;
    let mut out = Outcome::default();
    out.put("mean", mean);
    out.put("gaussian", g);
    let disc = mean * mean - g;
    if disc >= 0.0 {
        out.put("a20", mean + disc.sqrt());
        out.put("a02", mean - disc.sqrt());
    } else {
        out.warn("M^2 < G: no real principal curvatures");
    }
    // Per-pair Euler equations at the recovered (M, G).
    let pairs = [(p.kn[0], p.kn[1]), (p.kn[1], p.kn[2]), (p.kn[2], p.kn[0])];
    let mut worst: f64 = 0.0;
    for ((a, b), d) in pairs.into_iter().zip(deltas) {
        let (mij, gij) = (0.5 * (a + b), a * b);
        let (s2, c2) = (d.sin().powi(2), d.cos().powi(2));
        let terms = [s2 * s2 * mean * mean, -2.0 * mij * s2 * mean, c2 * s2 * g, mij * mij - gij * c2];
        let scale = terms.iter().fold(1.0f64, |m, t| m.max(t.abs()));
        worst = worst.max(terms.iter().sum::<f64>().abs() / scale);
    }
    out.residual("euler_equations", worst);
    Ok(out)
}

/// Largest deviation of the analytic osculating jet from the sampling oracle,
/// relative to `max(1, |analytic|)`.
pub fn curve_oracle_deviation(curve: &CurveJet, theta: f64, n: usize) -> contour_jets::Result<f64> {
    let dir = OsculatingDirection::new(theta)?;
    let n = n.min(MAX_DERIVATIVE);
    let analytic = project_osculating(curve, dir, n)?;
    let [px, py] = curve.projected_polynomials(dir.vector());
    let samples = PlaneSamples::from_polynomials(&px, &py, suggested_half_width(&px, &py), DEFAULT_COUNT)?;
    let numeric = numeric_curvature_jet(&samples, n)?;
    Ok(max_rel(&numeric, analytic.values()))
}

/// Deviation of `(k0, k1)` from the contour oracle, relative to `max(1, |analytic|)`.
pub fn surface_oracle_deviation(s: &SurfaceJet, theta: f64) -> contour_jets::Result<f64> {
    let analytic = contour_curvature_jet(s, theta)?;
    let numeric = numeric_contour_oracle(s, theta)?;
    let mut d = rel(numeric.k0, analytic.k0);
    if let (Some(a), Some(b)) = (analytic.k1, numeric.k1) {
        d = d.max(rel(b, a));
    }
    Ok(d)
}

fn suite_json(deviations: &[f64], tolerance: f64) -> Value {
    let (worst, max) = deviations
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(wi, wv), (i, &v)| if v > wv { (i, v) } else { (wi, wv) });
    json!({
        "count": deviations.len(),
        "max_deviation": max,
        "worst_index": worst,
        "failures": deviations.iter().filter(|&&d| !(d <= tolerance)).count(),
    })
}

fn oracle_check(ctx: &Ctx, p: payload::OracleCheck) -> Result<Outcome, CliError> {
    if p.curve.is_none() && p.surface.is_none() && p.random_curves.is_none() && p.random_surfaces.is_none() {
        return Err(schema("oracle-check payload needs at least one of `curve`, `surface`, `random_curves`, `random_surfaces`"));
    }
    if p.surface.is_some() != p.theta.is_some() {
        return Err(schema("oracle-check: `surface` and `theta` go together"));
    }
    let tolerance = ctx.opts.tolerance.unwrap_or(ORACLE_TOLERANCE);
    let mut out = Outcome::default();
    if let Some(c) = &p.curve {
        let n = ctx.opts.order.or(c.order).unwrap_or(3);
        let order = (c.a.len() + 1).max(c.b.len() + 2).max(n + 2);
        let curve = CurveJet::padded(&c.a, &c.b, order)?;
        let d = curve_oracle_deviation(&curve, c.theta, n)?;
        out.put("curve", json!({"deviation": d, "pass": d <= tolerance}));
        out.residual("curve_deviation", d);
    }
    if let (Some(spec), Some(theta)) = (&p.surface, p.theta) {
        let s = spec.build()?;
        let d = surface_oracle_deviation(&s, theta)?;
        out.put("surface", json!({"deviation": d, "pass": d <= tolerance}));
        out.residual("surface_deviation", d);
    }
    let seed = ctx.seed.unwrap_or(0);
    let mut rng = random::rng(seed);
    if let Some(count) = p.random_curves {
        let n = ctx.opts.order.unwrap_or(3);
        let cases: Vec<(CurveJet, f64)> = (0..count)
            .map(|_| (random::curve(&mut rng, n + 2), random::osculating_theta(&mut rng)))
            .collect();
        let devs = cases
            .par_iter()
            .map(|(c, th)| curve_oracle_deviation(c, *th, n))
            .collect::<contour_jets::Result<Vec<_>>>()?;
        let summary = suite_json(&devs, tolerance);
        out.residual("random_curves_max_deviation", summary["max_deviation"].as_f64().unwrap_or(0.0));
        out.put("random_curves", summary);
    }
    if let Some(count) = p.random_surfaces {
        let cases: Vec<(SurfaceJet, f64)> = (0..count).map(|_| random::surface_view(&mut rng, 0.1)).collect();
        let devs = cases
            .par_iter()
            .map(|(s, th)| surface_oracle_deviation(s, *th))
            .collect::<contour_jets::Result<Vec<_>>>()?;
        let summary = suite_json(&devs, tolerance);
        out.residual("random_surfaces_max_deviation", summary["max_deviation"].as_f64().unwrap_or(0.0));
        out.put("random_surfaces", summary);
    }
    Ok(out)
}

fn plot_contour(ctx: &Ctx, p: payload::PlotContour) -> Result<Outcome, CliError> {
    let s = p.surface.build()?;
    let analytic = contour_curvature_jet(&s, p.theta)?;
    let plot = plot::sample(&s, p.theta, p.half_width, p.count)?;
    let fitted = plot::fitted_curvature_at_base(&plot.points)?;
    let mut out = Outcome::default();
    out.warnings.extend(plot.warnings.iter().cloned());
    out.put("theta", ctx.angle(p.theta));
    out.put("half_width", plot.half_width);
    out.put("count", plot.points.len());
    out.put("analytic_k0", analytic.k0);
    out.put("fitted_k0", fitted);
    out.residual("fitted_minus_analytic", rel(fitted, analytic.k0));
    match (&ctx.opts.svg, &ctx.opts.csv) {
        (None, None) => out.warn("no --svg or --csv path given; nothing written"),
        (svg, csv) => {
            if let Some(path) = svg {
                out.files.push(PendingFile { path: path.clone(), contents: plot::svg(&plot.points) });
            }
            if let Some(path) = csv {
                out.files.push(PendingFile { path: path.clone(), contents: plot::csv(&plot.points) });
            }
        }
    }
    let written: Vec<String> = out.files.iter().map(|f| f.path.display().to_string()).collect();
    out.put("files", written);
    Ok(out)
}
