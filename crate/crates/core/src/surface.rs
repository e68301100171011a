//! Forward model for surfaces in Monge form
//! `f(u, v) = (u, v, h(u, v))`, `h = a20 u^2/2 + a02 v^2/2 + sum_{i+j>=3} a_ij u^i v^j / (i! j!)`.
//!
//! For a tangent direction `xi = (cos theta, sin theta, 0)` the contour generator
//! is `cos theta h_u + sin theta h_v = 0`, parametrized as `v = c(u)`. The contour
//! lives in `xi^perp` with positive basis `X = (-sin theta, cos theta, 0)`,
//! `Y = (0, 0, 1)` and is oriented along `+X`. With that orientation
//! `k = a20 a02 / p` and `dk/ds = q / p^3` hold for every sign of
//! `a02 sin theta p(theta)`: reversing the parameter flips the sign of the
//! curvature but leaves `dk/ds` unchanged.

use crate::oracle::{suggested_half_width, FittedCurve, PlaneSamples};
use crate::series::{factorial, TruncatedSeries, MAX_ORDER};
use crate::{Error, Result};
use std::f64::consts::PI;

const ZERO_TOL: f64 = 1e-12;

/// Taylor coefficients `a_ij` (`2 <= i + j <= order`, `a11 = 0`) of a Monge-form height function.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceJet {
    order: usize,
    /// `coeffs[i][j] = a_ij`, dense in `i, j <= order`.
    coeffs: Vec<Vec<f64>>,
}

impl SurfaceJet {
    pub fn quadratic(a20: f64, a02: f64) -> Result<Self> {
        Self::from_terms(2, &[(2, 0, a20), (0, 2, a02)])
    }

    /// Third-order jet with `a3 = (a30, a21, a12, a03)`.
    pub fn cubic(a20: f64, a02: f64, a3: [f64; 4]) -> Result<Self> {
        Self::from_terms(
            3,
            &[
                (2, 0, a20),
                (0, 2, a02),
                (3, 0, a3[0]),
                (2, 1, a3[1]),
                (1, 2, a3[2]),
                (0, 3, a3[3]),
            ],
        )
    }

    /// Jet of the given order from `(i, j, a_ij)` triples; omitted terms are zero.
    pub fn from_terms(order: usize, terms: &[(usize, usize, f64)]) -> Result<Self> {
        if !(2..=MAX_ORDER).contains(&order) {
            return Err(Error::InvalidInput(format!(
                "surface order must lie in 2..={MAX_ORDER}, got {order}"
            )));
        }
        let mut coeffs = vec![vec![0.0; order + 1]; order + 1];
        for &(i, j, v) in terms {
            if !v.is_finite() {
                return Err(Error::NonFinite("surface coefficients"));
            }
            if i + j < 2 || i + j > order {
                return Err(Error::InvalidInput(format!(
                    "a{i}{j} is outside degrees 2..={order}"
                )));
            }
            if (i, j) == (1, 1) && v != 0.0 {
                return Err(Error::InvalidInput("the Monge form has no a11 term".into()));
            }
            coeffs[i][j] = v;
        }
        Ok(Self { order, coeffs })
    }

    /// Checks `a20 a02 != 0`, `a20 > a02`, `a20 > 0`.
    pub fn strict(self) -> Result<Self> {
        if self.a20() * self.a02() == 0.0 || self.a20() <= self.a02() || self.a20() <= 0.0 {
            return Err(Error::NotNormalized);
        }
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `a_ij`, zero outside the jet.
    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.coeffs.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0.0)
    }

    pub fn a20(&self) -> f64 {
        self.a(2, 0)
    }

    pub fn a02(&self) -> f64 {
        self.a(0, 2)
    }

    /// `(a30, a21, a12, a03)`.
    pub fn a3(&self) -> [f64; 4] {
        [self.a(3, 0), self.a(2, 1), self.a(1, 2), self.a(0, 3)]
    }

    pub fn mean_curvature(&self) -> f64 {
        0.5 * (self.a20() + self.a02())
    }

    pub fn gaussian_curvature(&self) -> f64 {
        self.a20() * self.a02()
    }

    /// All nonzero `(i, j, a_ij)`.
    pub fn terms(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for d in 2..=self.order {
            for i in (0..=d).rev() {
                let v = self.a(i, d - i);
                if v != 0.0 {
                    out.push((i, d - i, v));
                }
            }
        }
        out
    }

    fn scale(&self) -> f64 {
        self.a20().abs().max(self.a02().abs())
    }

    fn height(&self) -> Bivariate {
        let n = self.order + 1;
        let mut c = vec![vec![0.0; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.a(i, j) / (factorial(i) * factorial(j));
            }
        }
        Bivariate { c }
    }

    /// `h` evaluated at `(u, v)`.
    pub fn height_at(&self, u: f64, v: f64) -> f64 {
        self.height().eval(u, v)
    }
}

/// Dense bivariate polynomial `sum c[i][j] u^i v^j`.
#[derive(Debug, Clone)]
struct Bivariate {
    c: Vec<Vec<f64>>,
}

impl Bivariate {
    fn eval(&self, u: f64, v: f64) -> f64 {
        self.c
            .iter()
            .rev()
            .fold(0.0, |acc, row| acc * u + row.iter().rev().fold(0.0, |a, x| a * v + x))
    }

    fn du(&self) -> Self {
        let mut c = vec![vec![0.0; self.c[0].len()]; self.c.len()];
        for i in 1..self.c.len() {
            for j in 0..self.c[i].len() {
                c[i - 1][j] = i as f64 * self.c[i][j];
            }
        }
        Self { c }
    }

    fn dv(&self) -> Self {
        let mut c = vec![vec![0.0; self.c[0].len()]; self.c.len()];
        for i in 0..self.c.len() {
            for j in 1..self.c[i].len() {
                c[i][j - 1] = j as f64 * self.c[i][j];
            }
        }
        Self { c }
    }

    fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| a * x + b * y).collect())
            .collect();
        Self { c }
    }

    /// Composition with `u = t`, `v = c(t)` as a truncated series.
    fn compose_graph(&self, c: &TruncatedSeries) -> TruncatedSeries {
        let order = c.order();
        let mut total = TruncatedSeries::zero(order);
        let mut c_pow = TruncatedSeries::constant(1.0, order);
        let width = self.c.first().map_or(0, Vec::len);
        for j in 0..width {
            let mut coeffs = vec![0.0; order + 1];
            for (i, row) in self.c.iter().enumerate().take(order + 1) {
                coeffs[i] = row[j];
            }
            let in_u = TruncatedSeries::new(coeffs).expect("finite coefficients");
            total = &total + &in_u.mul(&c_pow);
            c_pow = c_pow.mul(c);
        }
        total
    }
}

/// Contour curvature `k0` and its arclength derivative `k1` for the direction `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourObservation {
    pub theta: f64,
    pub k0: f64,
    pub k1: Option<f64>,
}

impl ContourObservation {
    pub fn new(theta: f64, k0: f64, k1: Option<f64>) -> Result<Self> {
        if !theta.is_finite() || !k0.is_finite() || k1.is_some_and(|v| !v.is_finite()) {
            return Err(Error::NonFinite("contour observation"));
        }
        if theta <= 0.0 || theta >= PI {
            return Err(Error::InvalidInput(format!("theta must lie in (0, pi), got {theta}")));
        }
        Ok(Self { theta, k0, k1 })
    }
}

/// `p(theta) = a20 cos^2 theta + a02 sin^2 theta`.
pub fn p_of_theta(s: &SurfaceJet, theta: f64) -> f64 {
    let (sn, cs) = theta.sin_cos();
    s.a20() * cs * cs + s.a02() * sn * sn
}

/// The cubic form `q(theta)` giving `dk/ds = q / p^3`.
pub fn q_of_theta(s: &SurfaceJet, theta: f64) -> f64 {
    let (sn, cs) = theta.sin_cos();
    let (a20, a02) = (s.a20(), s.a02());
    let [a30, a21, a12, a03] = s.a3();
    a03 * a20.powi(3) * cs.powi(3) - 3.0 * a02 * a12 * a20 * a20 * cs * cs * sn
        + 3.0 * a02 * a02 * a20 * a21 * cs * sn * sn
        - a02.powi(3) * a30 * sn.powi(3)
}

fn check_direction(s: &SurfaceJet, theta: f64) -> Result<()> {
    if !theta.is_finite() {
        return Err(Error::NonFinite("theta"));
    }
    if (s.a02() * theta.sin()).abs() <= ZERO_TOL * s.scale().max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateParametrization);
    }
    if theta <= 0.0 || theta >= PI {
        return Err(Error::InvalidInput(format!("theta must lie in (0, pi), got {theta}")));
    }
    if p_of_theta(s, theta).abs() <= ZERO_TOL * s.scale() {
        return Err(Error::AsymptoticDirection);
    }
    Ok(())
}

/// `(k0, k1)` in closed form; `k1` is present when the jet has order at least 3.
pub fn contour_curvature_jet(s: &SurfaceJet, theta: f64) -> Result<ContourObservation> {
    check_direction(s, theta)?;
    let p = p_of_theta(s, theta);
    let k0 = s.gaussian_curvature() / p;
    let k1 = (s.order() >= 3).then(|| q_of_theta(s, theta) / p.powi(3));
    ContourObservation::new(theta, k0, k1)
}

/// Series of the contour generator `v = c(u)` up to `order`.
pub fn contour_generator_series(s: &SurfaceJet, theta: f64, order: usize) -> Result<TruncatedSeries> {
    let (sn, cs) = theta.sin_cos();
    let fv0 = s.a02() * sn;
    if !theta.is_finite() || fv0.abs() <= ZERO_TOL * s.scale().max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateParametrization);
    }
    if order > MAX_ORDER {
        return Err(Error::OrderExceeded {
            requested: order,
            available: MAX_ORDER,
        });
    }
    let h = s.height();
    let f = h.du().combine(cs, &h.dv(), sn);
    // The k-th coefficient of F(u, c(u)) is fv0 * c_k plus terms in c_1..c_{k-1}.
    let mut c = vec![0.0; order + 1];
    for k in 1..=order {
        let series = TruncatedSeries::new(c.clone()).expect("finite coefficients");
        let residual = f.compose_graph(&series).coeff(k);
        c[k] -= residual / fv0;
    }
    TruncatedSeries::new(c)
}

/// Polynomial coefficients of the contour `(x(u), y(u))` in the `(X, Y)` frame, to `order`.
pub fn contour_series(s: &SurfaceJet, theta: f64, order: usize) -> Result<[TruncatedSeries; 2]> {
    let c = contour_generator_series(s, theta, order)?;
    let (sn, cs) = theta.sin_cos();
    let x = &TruncatedSeries::variable(order).scale(-sn) + &c.scale(cs);
    let y = s.height().compose_graph(&c);
    Ok([x, y])
}

/// Directions whose contour has a vertex at the base point.
#[derive(Debug, Clone, PartialEq)]
pub enum VertexDirections {
    /// `q` vanishes identically.
    All,
    Finite(Vec<f64>),
}

/// Roots of `q(theta) = 0` in `(0, pi)` that are not asymptotic directions.
pub fn find_vertex_directions(s: &SurfaceJet) -> Result<VertexDirections> {
    let (a20, a02) = (s.a20(), s.a02());
    if a20 * a02 == 0.0 {
        return Err(Error::InvalidInput("vertex directions need a20 a02 != 0".into()));
    }
    let [a30, a21, a12, a03] = s.a3();
    if [a30, a21, a12, a03].iter().all(|&v| v == 0.0) {
        return Ok(VertexDirections::All);
    }
    // q / cos^3 as a polynomial in t = tan(theta), constant term first.
    let poly = [
        a03 * a20.powi(3),
        -3.0 * a02 * a12 * a20 * a20,
        3.0 * a02 * a02 * a20 * a21,
        -a02.powi(3) * a30,
    ];
    let mut roots = Vec::new();
    if a30 == 0.0 {
        roots.push(PI / 2.0);
    }
    for t in real_roots(&poly) {
        let theta = t.atan();
        roots.push(if theta < 0.0 { theta + PI } else { theta });
    }
    roots.retain(|&th| th > 0.0 && th < PI && p_of_theta(s, th).abs() > ZERO_TOL * s.scale());
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    Ok(VertexDirections::Finite(roots))
}

/// Real roots of a polynomial of degree at most 3 (constant term first),
/// polished by Newton steps.
fn real_roots(poly: &[f64; 4]) -> Vec<f64> {
    let scale = poly.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut deg = 3;
    while deg > 0 && poly[deg].abs() <= 1e-14 * scale {
        deg -= 1;
    }
    let raw = match deg {
        0 => Vec::new(),
        1 => vec![-poly[0] / poly[1]],
        2 => quadratic_roots(poly[2], poly[1], poly[0]),
        _ => cubic_roots(poly[3], poly[2], poly[1], poly[0]),
    };
    let eval = |t: f64| poly[..=deg].iter().rev().fold(0.0, |a, c| a * t + c);
    let deriv = |t: f64| (1..=deg).rev().fold(0.0, |a, k| a * t + k as f64 * poly[k]);
    raw.into_iter()
        .map(|mut t| {
            for _ in 0..4 {
                let d = deriv(t);
                if d == 0.0 {
                    break;
                }
                let next = t - eval(t) / d;
                if !next.is_finite() {
                    break;
                }
                t = next;
            }
            t
        })
        .collect()
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    // Cancellation-free form.
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0, 0.0];
    }
    vec![q / a, c / q]
}

fn cubic_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    let (b, c, d) = (b / a, c / a, d / a);
    // t = x - b/3 gives x^3 + p x + q = 0.
    let p = c - b * b / 3.0;
    let q = 2.0 * b.powi(3) / 27.0 - b * c / 3.0 + d;
    let shift = -b / 3.0;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    if disc > 0.0 {
        let sq = disc.sqrt();
        vec![(-q / 2.0 + sq).cbrt() + (-q / 2.0 - sq).cbrt() + shift]
    } else if p == 0.0 {
        vec![shift]
    } else {
        let r = (-p / 3.0).sqrt();
        let phi = (-q / (2.0 * r.powi(3))).clamp(-1.0, 1.0).acos();
        (0..3)
            .map(|k| 2.0 * r * ((phi + 2.0 * PI * k as f64) / 3.0).cos() + shift)
            .collect()
    }
}

/// A point of the contour generator with its image and signed curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPoint {
    pub u: f64,
    pub v: f64,
    /// Coordinates in the `(X, Y)` frame.
    pub x: f64,
    pub y: f64,
    /// Curvature of the contour oriented along `+X`.
    pub kappa: f64,
}

struct ContourSolver {
    h: Bivariate,
    f: Bivariate,
    f_u: Bivariate,
    f_v: Bivariate,
    f_uu: Bivariate,
    f_uv: Bivariate,
    f_vv: Bivariate,
    h_u: Bivariate,
    h_v: Bivariate,
    h_uu: Bivariate,
    h_uv: Bivariate,
    h_vv: Bivariate,
    sin: f64,
    cos: f64,
    tol: f64,
    /// `+1` if `x` increases with `u` at the base point.
    orientation: f64,
}

impl ContourSolver {
    fn new(s: &SurfaceJet, theta: f64) -> Result<Self> {
        check_direction(s, theta)?;
        let (sin, cos) = theta.sin_cos();
        let h = s.height();
        let (h_u, h_v) = (h.du(), h.dv());
        let f = h_u.combine(cos, &h_v, sin);
        let (f_u, f_v) = (f.du(), f.dv());
        let c1 = -s.a20() * cos / (s.a02() * sin);
        Ok(Self {
            f_uu: f_u.du(),
            f_uv: f_u.dv(),
            f_vv: f_v.dv(),
            h_uu: h_u.du(),
            h_uv: h_u.dv(),
            h_vv: h_v.dv(),
            h,
            f,
            f_u,
            f_v,
            h_u,
            h_v,
            sin,
            cos,
            tol: 1e-12 * (1.0 + s.scale()),
            orientation: if -sin + cos * c1 >= 0.0 { 1.0 } else { -1.0 },
        })
    }

    /// Newton refinement of `F(u, v) = 0` in `v` from the guess `v0`.
    fn refine(&self, u: f64, v0: f64) -> Result<f64> {
        let mut v = v0;
        for _ in 0..60 {
            let r = self.f.eval(u, v);
            if r.abs() < self.tol {
                return Ok(v);
            }
            let d = self.f_v.eval(u, v);
            if d == 0.0 || !d.is_finite() {
                break;
            }
            v -= r / d;
            if !v.is_finite() {
                break;
            }
        }
        let residual = self.f.eval(u, v);
        if residual.abs() < self.tol {
            Ok(v)
        } else {
            Err(Error::RootRefinementFailed { u, residual: residual.abs() })
        }
    }

    /// `dv/du` along the contour generator.
    fn slope(&self, u: f64, v: f64) -> f64 {
        -self.f_u.eval(u, v) / self.f_v.eval(u, v)
    }

    fn image(&self, u: f64, v: f64) -> (f64, f64) {
        (-self.sin * u + self.cos * v, self.h.eval(u, v))
    }

    /// Image velocity in `u` and the curvature oriented along `+X`.
    fn velocity_and_curvature(&self, u: f64, v: f64) -> ((f64, f64), f64) {
        let v1 = self.slope(u, v);
        let v2 = -(self.f_uu.eval(u, v) + 2.0 * self.f_uv.eval(u, v) * v1 + self.f_vv.eval(u, v) * v1 * v1)
            / self.f_v.eval(u, v);
        let x1 = -self.sin + self.cos * v1;
        let x2 = self.cos * v2;
        let (hu, hv) = (self.h_u.eval(u, v), self.h_v.eval(u, v));
        let y1 = hu + hv * v1;
        let y2 = self.h_uu.eval(u, v) + 2.0 * self.h_uv.eval(u, v) * v1 + self.h_vv.eval(u, v) * v1 * v1 + hv * v2;
        let kappa = (x1 * y2 - y1 * x2) / (x1 * x1 + y1 * y1).powf(1.5);
        ((x1, y1), self.orientation * kappa)
    }

    fn point(&self, u: f64, v: f64) -> ContourPoint {
        let (x, y) = self.image(u, v);
        ContourPoint {
            u,
            v,
            x,
            y,
            kappa: self.velocity_and_curvature(u, v).1,
        }
    }

    fn speed(&self, u: f64, v: f64) -> f64 {
        let ((x1, y1), _) = self.velocity_and_curvature(u, v);
        x1.hypot(y1)
    }
}

/// Half-width in `u` over which the contour is well described by its low-order jet.
pub fn contour_half_width(s: &SurfaceJet, theta: f64) -> Result<f64> {
    let [x, y] = contour_series(s, theta, 10)?;
    Ok(suggested_half_width(x.coeffs(), y.coeffs()))
}

/// Independent estimate of `(k0, k1)`: Newton-refined samples of the contour
/// generator, projected and passed through the sampling curvature oracle.
pub fn numeric_contour_oracle(s: &SurfaceJet, theta: f64) -> Result<ContourObservation> {
    let solver = ContourSolver::new(s, theta)?;
    let guess = contour_generator_series(s, theta, 10)?;
    let w = contour_half_width(s, theta)?;
    let count = crate::oracle::DEFAULT_COUNT;
    let mut t = Vec::with_capacity(count);
    let mut xs = Vec::with_capacity(count);
    let mut ys = Vec::with_capacity(count);
    for i in 0..count {
        let u = w * (2.0 * i as f64 / (count - 1) as f64 - 1.0);
        let v = solver.refine(u, guess.eval(u))?;
        let (x, y) = solver.image(u, v);
        // Parameter oriented along +X.
        t.push(solver.orientation * u);
        xs.push(x);
        ys.push(y);
    }
    let fit = FittedCurve::fit(&PlaneSamples::new(t, xs, ys)?)?;
    let k0 = fit.curvature_derivative(0)?;
    let k1 = (s.order() >= 3).then(|| fit.curvature_derivative(1)).transpose()?;
    ContourObservation::new(theta, k0, k1)
}

/// Samples of the contour for `u` in `[-half_width, half_width]`, returned in
/// order of increasing `x` together with the signed arclength from the base point.
pub fn sample_contour(
    s: &SurfaceJet,
    theta: f64,
    half_width: f64,
    count: usize,
) -> Result<Vec<(f64, ContourPoint)>> {
    if !(half_width > 0.0) || count < 3 {
        return Err(Error::InvalidInput(format!(
            "contour sampling needs a positive half-width and at least 3 points, got {half_width}, {count}"
        )));
    }
    let solver = ContourSolver::new(s, theta)?;
    let steps = (count - 1) / 2;
    let du = half_width / steps as f64;
    let mut out = vec![(0.0, solver.point(0.0, 0.0))];
    for dir in [1.0, -1.0] {
        let (mut u, mut v, mut arc) = (0.0f64, 0.0f64, 0.0f64);
        let mut branch = Vec::with_capacity(steps);
        for _ in 0..steps {
            let step = dir * du;
            let mid_u = u + 0.5 * step;
            let mid_v = solver.refine(mid_u, v + solver.slope(u, v) * 0.5 * step)?;
            let next_u = u + step;
            let next_v = solver.refine(next_u, mid_v + solver.slope(mid_u, mid_v) * 0.5 * step)?;
            // Simpson's rule on the image speed.
            arc += du / 6.0
                * (solver.speed(u, v) + 4.0 * solver.speed(mid_u, mid_v) + solver.speed(next_u, next_v));
            u = next_u;
            v = next_v;
            branch.push((dir * solver.orientation * arc, solver.point(u, v)));
        }
        out.extend(branch);
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}
