//! Sampling-based curvature oracle for plane curves.
//!
//! The samples are fitted by a least-squares polynomial in the normalized
//! parameter `tau = t / w` (`w` the grid half-width). Curvature is evaluated
//! from the fitted derivatives, and arclength derivatives are taken by nested
//! central differences with one Richardson step:
//! `g_0 = kappa`, `g_{j+1} = g_j' / |c'|`. None of this goes through the
//! series engine, so agreement with it is a genuine cross-check.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Default grid half-width.
pub const DEFAULT_HALF_WIDTH: f64 = 1e-2;
/// Default number of samples (grid spacing `1e-4` at the default half-width).
pub const DEFAULT_COUNT: usize = 201;
/// Highest arclength derivative the oracle will estimate.
pub const MAX_DERIVATIVE: usize = 4;

const FIT_DEGREE: usize = 10;
const STEP: f64 = 0.05;

/// Samples `c(t_i) = (x_i, y_i)` of a plane curve around the base point `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneSamples {
    t: Vec<f64>,
    x: Vec<f64>,
    y: Vec<f64>,
}

impl PlaneSamples {
    pub fn new(t: Vec<f64>, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if t.len() != x.len() || t.len() != y.len() {
            return Err(Error::DegenerateGrid("sample vectors differ in length".into()));
        }
        if t.len() < 2 * FIT_DEGREE + 1 {
            return Err(Error::DegenerateGrid(format!(
                "need at least {} samples, got {}",
                2 * FIT_DEGREE + 1,
                t.len()
            )));
        }
        if t.iter().chain(&x).chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::DegenerateGrid("non-finite sample".into()));
        }
        let w = t.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let lo = t.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = t.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if w == 0.0 || lo > -0.5 * w || hi < 0.5 * w {
            return Err(Error::DegenerateGrid(
                "grid must straddle t = 0 on both sides".into(),
            ));
        }
        let mut sorted = t.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|p| p[1] - p[0] <= 1e-12 * w) {
            return Err(Error::DegenerateGrid("repeated parameter values".into()));
        }
        Ok(Self { t, x, y })
    }

    /// Uniform grid of `count` points on `[-half_width, half_width]`.
    pub fn from_fn(f: impl Fn(f64) -> (f64, f64), half_width: f64, count: usize) -> Result<Self> {
        if !(half_width > 0.0) || count < 2 {
            return Err(Error::DegenerateGrid(format!(
                "half-width {half_width} with {count} points"
            )));
        }
        let mut t = Vec::with_capacity(count);
        let mut x = Vec::with_capacity(count);
        let mut y = Vec::with_capacity(count);
        for i in 0..count {
            let ti = half_width * (2.0 * i as f64 / (count - 1) as f64 - 1.0);
            let (xi, yi) = f(ti);
            t.push(ti);
            x.push(xi);
            y.push(yi);
        }
        Self::new(t, x, y)
    }

    /// Samples of the polynomial curve with coefficient vectors `px`, `py`.
    pub fn from_polynomials(px: &[f64], py: &[f64], half_width: f64, count: usize) -> Result<Self> {
        Self::from_fn(|t| (horner(px, t), horner(py, t)), half_width, count)
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }
}

/// Half-width suited to a polynomial curve: a small fraction of the radius
/// over which the higher-order terms stay below the linear one.
pub fn suggested_half_width(px: &[f64], py: &[f64]) -> f64 {
    let speed = px.get(1).copied().unwrap_or(0.0).hypot(py.get(1).copied().unwrap_or(0.0));
    let mut scale = f64::INFINITY;
    for k in 2..px.len().max(py.len()) {
        let ck = px.get(k).copied().unwrap_or(0.0).hypot(py.get(k).copied().unwrap_or(0.0));
        if ck > 0.0 && speed > 0.0 {
            scale = scale.min((speed / ck).powf(1.0 / (k - 1) as f64));
        }
    }
    if scale.is_finite() {
        (0.05 * scale).min(0.5)
    } else {
        0.05
    }
}

fn horner(p: &[f64], t: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// Value and first two derivatives of a polynomial.
fn eval2(p: &[f64], t: f64) -> [f64; 3] {
    let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
    for &c in p.iter().rev() {
        d2 = d2 * t + 2.0 * d1;
        d1 = d1 * t + v;
        v = v * t + c;
    }
    [v, d1, d2]
}

/// Least-squares polynomial fit of a sampled plane curve in `tau = t / w`.
#[derive(Debug, Clone)]
pub struct FittedCurve {
    px: Vec<f64>,
    py: Vec<f64>,
    half_width: f64,
}

impl FittedCurve {
    pub fn fit(samples: &PlaneSamples) -> Result<Self> {
        let w = samples.t.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let n = samples.len();
        let cols = FIT_DEGREE + 1;
        let vander = DMatrix::from_fn(n, cols, |r, c| (samples.t[r] / w).powi(c as i32));
        let svd = vander.svd(true, true);
        let solve = |rhs: &[f64]| -> Result<Vec<f64>> {
            svd.solve(&DVector::from_column_slice(rhs), 1e-14)
                .map(|v| v.iter().copied().collect())
                .map_err(|e| Error::DegenerateGrid(e.to_string()))
        };
        Ok(Self {
            px: solve(&samples.x)?,
            py: solve(&samples.y)?,
            half_width: w,
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Fitted coefficients in `t` (not `tau`).
    pub fn coefficients_in_t(&self) -> [Vec<f64>; 2] {
        let rescale = |p: &[f64]| {
            p.iter()
                .enumerate()
                .map(|(i, c)| c / self.half_width.powi(i as i32))
                .collect()
        };
        [rescale(&self.px), rescale(&self.py)]
    }

    fn speed(&self, tau: f64) -> f64 {
        let x = eval2(&self.px, tau);
        let y = eval2(&self.py, tau);
        x[1].hypot(y[1])
    }

    fn kappa(&self, tau: f64) -> f64 {
        let x = eval2(&self.px, tau);
        let y = eval2(&self.py, tau);
        let speed2 = x[1] * x[1] + y[1] * y[1];
        (x[1] * y[2] - y[1] * x[2]) / speed2.powf(1.5)
    }

    /// `d^j kappa / ds^j` at `tau`.
    fn arclength_derivative(&self, j: usize, tau: f64) -> f64 {
        if j == 0 {
            return self.kappa(tau);
        }
        let g = |s: f64| self.arclength_derivative(j - 1, s);
        richardson_derivative(&g, tau, STEP) / self.speed(tau)
    }

    /// `d^j kappa / ds^j (0)`.
    pub fn curvature_derivative(&self, j: usize) -> Result<f64> {
        if j > MAX_DERIVATIVE {
            return Err(Error::InvalidInput(format!(
                "oracle supports derivatives up to order {MAX_DERIVATIVE}, got {j}"
            )));
        }
        if self.speed(0.0) <= 1e-12 * self.half_width.max(1.0) {
            return Err(Error::DegenerateGrid("curve is singular at the base point".into()));
        }
        let v = self.arclength_derivative(j, 0.0);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::DegenerateGrid("non-finite curvature estimate".into()))
        }
    }

    /// Cuspidal curvature at the base point, from the fitted second and third derivatives.
    pub fn cuspidal_curvature(&self) -> Result<f64> {
        let c2 = [2.0 * self.px[2], 2.0 * self.py[2]];
        let c3 = [6.0 * self.px[3], 6.0 * self.py[3]];
        let scale = self.px.iter().chain(&self.py).fold(0.0f64, |m, v| m.max(v.abs()));
        if c2[0].hypot(c2[1]) <= 1e-9 * scale {
            return Err(Error::NotAType);
        }
        crate::curve::cuspidal_curvature(c2, c3)
    }
}

/// Fourth-order central difference at steps `h` and `h/2`, combined by Richardson.
fn richardson_derivative(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
    let coarse = d(h);
    let fine = d(0.5 * h);
    (16.0 * fine - coarse) / 15.0
}

/// `d^j kappa / ds^j` at the base point `t = 0` of the sampled curve.
pub fn numeric_curvature_oracle(samples: &PlaneSamples, j: usize) -> Result<f64> {
    FittedCurve::fit(samples)?.curvature_derivative(j)
}

/// Jet `(kappa, kappa', kappa''/2!, ...)` up to order `n` from one fit.
pub fn numeric_curvature_jet(samples: &PlaneSamples, n: usize) -> Result<Vec<f64>> {
    let fit = FittedCurve::fit(samples)?;
    (0..=n)
        .map(|j| Ok(fit.curvature_derivative(j)? / crate::series::factorial(j)))
        .collect()
}

/// Cuspidal curvature of a sampled curve that is singular at `t = 0`.
pub fn numeric_cuspidal_curvature(samples: &PlaneSamples) -> Result<f64> {
    FittedCurve::fit(samples)?.cuspidal_curvature()
}
