//! Forward model for space curves.
//!
//! A curve is given in the adapted frame
//! `gamma(t) = (t, sum_{i>=2} a_i t^i / i!, sum_{i>=3} b_i t^i / i!)`,
//! so `a_2` is the curvature and `b_3 / a_2` the torsion at the base point.
//!
//! Sign conventions: the image plane `xi^perp` carries the orientation for which
//! a basis `{X, Y}` is positive when `{X, Y, xi}` is positive in `R^3`, and the
//! projected curve inherits the orientation of `t`. The signed curvature of the
//! projection is then `det(gamma', gamma'', xi) / |pi(gamma')|^3`.

use crate::series::{TruncatedSeries, MAX_ORDER};
use crate::{Error, Result};

/// Taylor coefficients `(a_2..a_k, b_3..b_k)` of a curve in the adapted frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveJet {
    order: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl CurveJet {
    /// `a = (a_2, ..., a_k)` and `b = (b_3, ..., b_k)`; the lengths must agree on `k`.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let order = a.len() + 1;
        if b.len() + 2 != order {
            return Err(Error::InvalidInput(format!(
                "a has {} entries (order {}) but b has {} (order {}); use CurveJet::padded",
                a.len(),
                order,
                b.len(),
                b.len() + 2
            )));
        }
        Self::validated(order, a, b)
    }

    /// Pads `a` and `b` with zeros up to `order`. Coefficients beyond `order` are rejected.
    pub fn padded(a: &[f64], b: &[f64], order: usize) -> Result<Self> {
        if a.len() + 1 > order || b.len() + 2 > order {
            return Err(Error::InvalidInput(format!(
                "coefficients exceed the requested order {order}"
            )));
        }
        let mut av = a.to_vec();
        av.resize(order - 1, 0.0);
        let mut bv = b.to_vec();
        bv.resize(order - 2, 0.0);
        Self::validated(order, av, bv)
    }

    fn validated(order: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if order < 3 {
            return Err(Error::InvalidInput(format!("curve order must be >= 3, got {order}")));
        }
        if order > MAX_ORDER {
            return Err(Error::OrderExceeded {
                requested: order,
                available: MAX_ORDER,
            });
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("curve coefficients"));
        }
        Ok(Self { order, a, b })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `a_i`, zero outside `2..=order`.
    pub fn a(&self, i: usize) -> f64 {
        if i < 2 {
            return 0.0;
        }
        self.a.get(i - 2).copied().unwrap_or(0.0)
    }

    /// `b_i`, zero outside `3..=order`.
    pub fn b(&self, i: usize) -> f64 {
        if i < 3 {
            return 0.0;
        }
        self.b.get(i - 3).copied().unwrap_or(0.0)
    }

    pub fn a_coeffs(&self) -> &[f64] {
        &self.a
    }

    pub fn b_coeffs(&self) -> &[f64] {
        &self.b
    }

    pub fn set_a(&mut self, i: usize, value: f64) {
        assert!((2..=self.order).contains(&i), "a_{i} outside the jet");
        self.a[i - 2] = value;
    }

    pub fn set_b(&mut self, i: usize, value: f64) {
        assert!((3..=self.order).contains(&i), "b_{i} outside the jet");
        self.b[i - 3] = value;
    }

    /// Copy truncated or zero-padded to `order`.
    pub fn with_order(&self, order: usize) -> Result<Self> {
        let a: Vec<f64> = (2..=order).map(|i| self.a(i)).collect();
        let b: Vec<f64> = (3..=order).map(|i| self.b(i)).collect();
        Self::validated(order, a, b)
    }

    /// The three coordinate functions as series truncated at `order`.
    pub fn components(&self, order: usize) -> [TruncatedSeries; 3] {
        let mut ys = vec![0.0; order + 1];
        let mut zs = vec![0.0; order + 1];
        let mut fact = 1.0;
        for i in 1..=order {
            fact *= i as f64;
            ys[i] = self.a(i) / fact;
            zs[i] = self.b(i) / fact;
        }
        [
            TruncatedSeries::variable(order),
            TruncatedSeries::new(ys).expect("finite coefficients"),
            TruncatedSeries::new(zs).expect("finite coefficients"),
        ]
    }

    /// Polynomial coefficients (in `t`) of the projection onto the positive image
    /// basis `{X, Y}` of `xi^perp`.
    pub fn projected_polynomials(&self, xi: [f64; 3]) -> [Vec<f64>; 2] {
        let (x_axis, y_axis) = image_basis(xi);
        let comps = self.components(self.order);
        let mut px = vec![0.0; self.order + 1];
        let mut py = vec![0.0; self.order + 1];
        for (axis, c) in comps.iter().enumerate() {
            for (i, v) in c.coeffs().iter().enumerate() {
                px[i] += x_axis[axis] * v;
                py[i] += y_axis[axis] * v;
            }
        }
        [px, py]
    }
}

/// Direction `xi(theta) = (cos theta, sin theta, 0)` in the osculating plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OsculatingDirection {
    theta: f64,
}

impl OsculatingDirection {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() || theta <= 0.0 || theta >= std::f64::consts::PI || theta.sin() <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "osculating direction angle must lie in (0, pi), got {theta}"
            )));
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn vector(&self) -> [f64; 3] {
        [self.theta.cos(), self.theta.sin(), 0.0]
    }
}

/// Direction `(sin t1 cos t2, sin t1 sin t2, cos t1)` used together with the
/// tangential projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralDirection {
    pub theta1: f64,
    pub theta2: f64,
}

impl GeneralDirection {
    pub fn new(theta1: f64, theta2: f64) -> Result<Self> {
        if !theta1.is_finite() || !theta2.is_finite() {
            return Err(Error::NonFinite("direction angles"));
        }
        Ok(Self { theta1, theta2 })
    }

    pub fn vector(&self) -> [f64; 3] {
        let (s1, c1) = self.theta1.sin_cos();
        let (s2, c2) = self.theta2.sin_cos();
        [s1 * c2, s1 * s2, c1]
    }

    /// `cos^2 t1 cos^2 t2 + sin^2 t2`, the squared image speed of the tangent.
    pub fn speed_squared(&self) -> f64 {
        let c1 = self.theta1.cos();
        let (s2, c2) = self.theta2.sin_cos();
        c1 * c1 * c2 * c2 + s2 * s2
    }
}

/// Arclength Taylor data `(kappa(0), dkappa/ds(0), d^2kappa/ds^2(0)/2!, ...)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureJet {
    values: Vec<f64>,
}

impl CurvatureJet {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("empty curvature jet".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("curvature jet"));
        }
        Ok(Self { values })
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// `d^i kappa / ds^i (0)`.
    pub fn derivative(&self, i: usize) -> f64 {
        self.values[i] * crate::series::factorial(i)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Positive orthonormal basis `{X, Y}` of `xi^perp` (so that `X x Y = xi`).
pub fn image_basis(xi: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    // X = e_z x xi normalized, unless xi is vertical.
    let cand = [-xi[1], xi[0], 0.0];
    let norm = (cand[0] * cand[0] + cand[1] * cand[1]).sqrt();
    let x_axis = if norm > 1e-8 {
        [cand[0] / norm, cand[1] / norm, 0.0]
    } else {
        // xi is (0,0,+-1): X = e_y x xi normalized.
        let c = [xi[2], 0.0, -xi[0]];
        let n = (c[0] * c[0] + c[2] * c[2]).sqrt();
        [c[0] / n, 0.0, c[2] / n]
    };
    let y_axis = cross(xi, x_axis);
    (x_axis, y_axis)
}

fn cross(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

fn dot_const(v: &[TruncatedSeries; 3], w: [f64; 3]) -> TruncatedSeries {
    &(&v[0].scale(w[0]) + &v[1].scale(w[1])) + &v[2].scale(w[2])
}

fn dot(v: &[TruncatedSeries; 3], w: &[TruncatedSeries; 3]) -> TruncatedSeries {
    &(&v[0].mul(&w[0]) + &v[1].mul(&w[1])) + &v[2].mul(&w[2])
}

/// Arclength curvature jet of `pi_xi o gamma` up to order `n`, for any unit
/// direction `xi` that is not tangent to the curve at 0.
pub fn project_direction(curve: &CurveJet, xi: [f64; 3], n: usize) -> Result<CurvatureJet> {
    let k = n + 2;
    if k > curve.order() {
        return Err(Error::OrderExceeded {
            requested: k,
            available: curve.order(),
        });
    }
    let gamma = curve.components(k);
    let d1: [TruncatedSeries; 3] = std::array::from_fn(|i| gamma[i].derive());
    let d2: [TruncatedSeries; 3] = std::array::from_fn(|i| d1[i].derive());

    // alpha = xi . (gamma' x gamma'')
    let cross_12 = [
        &d1[1].mul(&d2[2]) - &d1[2].mul(&d2[1]),
        &d1[2].mul(&d2[0]) - &d1[0].mul(&d2[2]),
        &d1[0].mul(&d2[1]) - &d1[1].mul(&d2[0]),
    ];
    let alpha = dot_const(&cross_12, xi);

    // beta = |gamma'|^2 - (gamma' . xi)^2 = |pi(gamma')|^2
    let along = dot_const(&d1, xi);
    let beta = &dot(&d1, &d1) - &along.mul(&along);
    if beta.coeff(0) <= 1e-14 {
        return Err(Error::TangentDirection);
    }

    let kappa_t = alpha.mul(&beta.rational_power(-3, 2)?);
    let arclength = beta.rational_power(1, 2)?.integrate();
    let t_of_s = arclength.invert()?;
    let kappa_s = kappa_t.compose(&t_of_s)?;
    CurvatureJet::new(kappa_s.coef(n)?)
}

/// Curvature jet of the projection along `xi(theta)` in the osculating plane.
pub fn project_osculating(
    curve: &CurveJet,
    dir: OsculatingDirection,
    n: usize,
) -> Result<CurvatureJet> {
    project_direction(curve, dir.vector(), n)
}

/// Closed form of the order-3 osculating-projection jet.
pub fn closed_form_kappa3(curve: &CurveJet, dir: OsculatingDirection) -> Result<CurvatureJet> {
    if curve.order() < 5 {
        return Err(Error::OrderExceeded {
            requested: 5,
            available: curve.order(),
        });
    }
    let (s, c) = dir.theta().sin_cos();
    let (a2, a3) = (curve.a(2), curve.a(3));
    let (b3, b4, b5) = (curve.b(3), curve.b(4), curve.b(5));
    let k1 = -b3 / s.powi(3);
    let k2 = -(b4 * s + 6.0 * a2 * b3 * c) / (2.0 * s.powi(5));
    let k3 = -(45.0 * a2 * a2 * b3 * c * c + b5 * s * s + 10.0 * (a3 * b3 + a2 * b4) * s * c)
        / (6.0 * s.powi(7));
    CurvatureJet::new(vec![0.0, k1, k2, k3])
}

/// Cuspidal curvature `det(c'', c''') / |c''|^(5/2)` of an A-type singular point.
pub fn cuspidal_curvature(c2: [f64; 2], c3: [f64; 2]) -> Result<f64> {
    let norm = c2[0].hypot(c2[1]);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::NotAType);
    }
    let det = c2[0] * c3[1] - c2[1] * c3[0];
    Ok(det / norm.powf(2.5))
}

/// Cuspidal curvature of the projection along the tangent `(1, 0, 0)`.
///
/// The image plane is the `yz`-plane, so the projected curve is
/// `(A(t), B(t))` with `c'' = (a_2, 0)` and `c''' = (a_3, b_3)`; for `a_2 > 0` this
/// is `b_3 / a_2^(3/2)`.
pub fn tangential_cuspidal_curvature(curve: &CurveJet) -> Result<f64> {
    cuspidal_curvature([curve.a(2), 0.0], [curve.a(3), curve.b(3)])
}

/// Order-1 curvature jet of the projection along a general direction, in closed form.
pub fn project_tangential_secondary(curve: &CurveJet, dir: GeneralDirection) -> Result<CurvatureJet> {
    let c1 = dir.theta1.cos();
    if c1.abs() < 1e-12 {
        return Err(Error::TangentDirection);
    }
    let d = dir.speed_squared();
    let q = tangential_q(curve.a(2), curve.a(3), curve.b(3), dir);
    CurvatureJet::new(vec![curve.a(2) * c1 / d.powf(1.5), q / d.powi(3)])
}

/// Numerator of the arclength derivative in the tangential setting.
pub(crate) fn tangential_q(a2: f64, a3: f64, b3: f64, dir: GeneralDirection) -> f64 {
    let (s1, c1) = dir.theta1.sin_cos();
    let (s2, c2) = dir.theta2.sin_cos();
    -b3 * c1 * c1 * c2 * c2 * s1 * s2 - b3 * s1 * s2.powi(3)
        + c1.powi(3) * c2 * (a3 * c2 - 3.0 * a2 * a2 * s2)
        + c1 * s2 * (3.0 * a2 * a2 * c2 + a3 * s2)
}
