//! Reconstruction of a space curve from the curvature jets of its projections.
//!
//! Two views inside the osculating plane with known relative angle
//! `phi = theta2 - theta1` determine both viewing angles, `b_3`, and then
//! `a_{l-2}, b_l` level by level from the `(l-2)`-nd arclength derivatives.
//! At each level the measured entry depends affinely on the two new unknowns,
//! so the 2x2 system is assembled by evaluating the forward model at three
//! probe points rather than from explicit coefficient formulas.
//!
//! A tangential view (cuspidal curvature `mu`) plus one general view gives
//! `a_2, b_3, a_3` in closed form.

use crate::curve::{
    project_osculating, tangential_q, CurvatureJet, CurveJet, GeneralDirection, OsculatingDirection,
};
use crate::linalg::cramer;
use crate::series::MAX_ORDER;
use crate::{Error, Result};
use std::f64::consts::PI;

const ZERO_TOL: f64 = 1e-12;

/// Two osculating-plane views of the same curve.
#[derive(Debug, Clone, PartialEq)]
pub struct OsculatingMeasurementPair {
    pub jet1: CurvatureJet,
    pub jet2: CurvatureJet,
    /// `theta2 - theta1`, in `(-pi, pi)` and nonzero.
    pub phi: f64,
    /// Target order: recovers `b_3..b_n` and `a_2..a_{n-2}`.
    pub n: usize,
}

impl OsculatingMeasurementPair {
    pub fn new(jet1: CurvatureJet, jet2: CurvatureJet, phi: f64, n: usize) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::NonFinite("phi"));
        }
        if phi <= -PI || phi >= PI {
            return Err(Error::InvalidInput(format!("phi must lie in (-pi, pi), got {phi}")));
        }
        if !(3..=MAX_ORDER).contains(&n) {
            return Err(Error::InvalidInput(format!(
                "target order must lie in 3..={MAX_ORDER}, got {n}"
            )));
        }
        for jet in [&jet1, &jet2] {
            if jet.order() < n - 2 {
                return Err(Error::OrderExceeded {
                    requested: n - 2,
                    available: jet.order(),
                });
            }
        }
        Ok(Self { jet1, jet2, phi, n })
    }

    /// First arclength derivatives, checked to be nonzero and `phi` non-collinear.
    fn first_derivatives(&self) -> Result<(f64, f64)> {
        let (d1, d2) = (self.jet1.value(1), self.jet2.value(1));
        // Higher entries grow like 1/sin^(2i+1), so only the first entries set the scale.
        let tol = ZERO_TOL * d1.abs().max(d2.abs());
        if d1.abs() <= tol || d2.abs() <= tol {
            return Err(Error::DegenerateMeasurement(format!(
                "first arclength derivatives ({d1}, {d2}) must both be nonzero"
            )));
        }
        if d1.signum() != d2.signum() {
            return Err(Error::DegenerateMeasurement(format!(
                "first arclength derivatives ({d1}, {d2}) must share a sign"
            )));
        }
        if self.phi.sin().abs() <= ZERO_TOL {
            return Err(Error::CollinearDirections);
        }
        Ok((d1, d2))
    }
}

/// Result of [`recover_curve`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionReport {
    pub theta1: f64,
    pub theta2: f64,
    /// `(a_2, ..., a_{n-2})`.
    pub a: Vec<f64>,
    /// `(b_3, ..., b_n)`.
    pub b: Vec<f64>,
    /// Forward model minus measurement, divided by `max(1, |measurement|)`, for
    /// entries `1..=n-2` of jet 1, then of jet 2.
    pub residuals: Vec<f64>,
    /// Relative determinant `|det| / (row-norm product)` of each level's 2x2 solve, levels `4..=n`.
    pub condition: Vec<f64>,
}

impl ReconstructionReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    /// Recovered coefficients as a curve jet of order `n` (`a_{n-1}, a_n` set to zero).
    pub fn curve(&self) -> Result<CurveJet> {
        CurveJet::padded(&self.a, &self.b, self.b.len() + 2)
    }
}

/// Viewing angles `(theta1, theta2)` from the ratio of the first arclength derivatives.
pub fn recover_viewing_angles(m: &OsculatingMeasurementPair) -> Result<(f64, f64)> {
    let (d1, d2) = m.first_derivatives()?;
    let (s, c) = m.phi.sin_cos();
    let r = d1 / d2;
    let cot = (r.cbrt() - c) / s;
    let theta1 = 1.0f64.atan2(cot);
    let theta2 = theta1 + m.phi;
    if theta2 <= 0.0 || theta2 >= PI {
        return Err(Error::AngleOutOfRange(theta2));
    }
    Ok((theta1, theta2))
}

/// `b_3`, with the sign opposite to the first arclength derivatives.
pub fn recover_b3(m: &OsculatingMeasurementPair) -> Result<f64> {
    let (d1, d2) = m.first_derivatives()?;
    let (s, c) = m.phi.sin_cos();
    let (k1, k2) = (d1.cbrt(), d2.cbrt());
    let num = s * s * k1 * k1 * k2 * k2;
    let den = k1 * k1 - 2.0 * c * k1 * k2 + k2 * k2;
    Ok(-d1.signum() * (num / den).powf(1.5))
}

/// Full reconstruction up to order `m.n`.
pub fn recover_curve(m: &OsculatingMeasurementPair) -> Result<ReconstructionReport> {
    let (theta1, theta2) = recover_viewing_angles(m)?;
    let b3 = recover_b3(m)?;
    let dirs = [
        OsculatingDirection::new(theta1)?,
        OsculatingDirection::new(theta2)?,
    ];
    let jets = [&m.jet1, &m.jet2];
    let n = m.n;

    let mut a: Vec<f64> = Vec::new();
    let mut b = vec![b3];
    let mut condition = Vec::new();
    for level in 4..=n {
        let entry = level - 2;
        let probe = |x: f64, y: f64| -> Result<[f64; 2]> {
            let mut av = a.clone();
            av.push(x);
            let mut bv = b.clone();
            bv.push(y);
            let curve = CurveJet::padded(&av, &bv, level)?;
            let mut out = [0.0; 2];
            for (o, dir) in out.iter_mut().zip(dirs) {
                *o = project_osculating(&curve, dir, entry)?.value(entry);
            }
            Ok(out)
        };
        let base = probe(0.0, 0.0)?;
        let pa = probe(1.0, 0.0)?;
        let pb = probe(0.0, 1.0)?;
        let cols = [
            [pa[0] - base[0], pa[1] - base[1]],
            [pb[0] - base[0], pb[1] - base[1]],
        ];
        let rhs = [
            jets[0].value(entry) - base[0],
            jets[1].value(entry) - base[1],
        ];
        let (x, det) = cramer(&cols, &rhs, ZERO_TOL).ok_or(Error::IllConditioned {
            level,
            det: crate::linalg::det(&cols),
        })?;
        condition.push(det.abs() / crate::linalg::row_norm_product(&cols));
        a.push(x[0]);
        b.push(x[1]);
    }

    let mut report = ReconstructionReport {
        theta1,
        theta2,
        a,
        b,
        residuals: Vec::new(),
        condition,
    };
    let curve = report.curve()?;
    for (jet, dir) in jets.iter().zip(dirs) {
        let forward = project_osculating(&curve, dir, n - 2)?;
        for i in 1..=n - 2 {
            let measured = jet.value(i);
            report.residuals.push((forward.value(i) - measured) / measured.abs().max(1.0));
        }
    }
    Ok(report)
}

/// Coefficients recovered from a tangential view.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentialRecovery {
    pub a2: f64,
    pub b3: f64,
    pub a3: f64,
}

/// `(a_2, b_3, a_3)` from the cuspidal curvature of the tangential projection
/// and the order-1 jet of a second projection along `dir`.
pub fn recover_curve_tangential(
    mu: f64,
    jet: &CurvatureJet,
    dir: GeneralDirection,
) -> Result<TangentialRecovery> {
    if !mu.is_finite() {
        return Err(Error::NonFinite("mu"));
    }
    if jet.order() < 1 {
        return Err(Error::OrderExceeded {
            requested: 1,
            available: jet.order(),
        });
    }
    let c1 = dir.theta1.cos();
    if c1.abs() < ZERO_TOL {
        return Err(Error::TangentDirection);
    }
    let k0 = jet.value(0);
    if k0.abs() <= ZERO_TOL * jet.max_abs() {
        return Err(Error::ZeroCurvatureMeasurement);
    }
    let d = dir.speed_squared();
    let a2 = k0 * d.powf(1.5) / c1;
    // mu = a2 b3 / |a2|^(5/2), which is b3 / a2^(3/2) in the adapted frame (a2 > 0).
    let b3 = mu * a2.abs().powf(1.5) * a2.signum();
    // Q is affine in a3 with slope cos(t1) * D.
    let q0 = tangential_q(a2, 0.0, b3, dir);
    let a3 = (jet.value(1) * d.powi(3) - q0) / (c1 * d);
    Ok(TangentialRecovery { a2, b3, a3 })
}
