//! Two-view ambiguity and contour-conjugate directions.
//!
//! For two views with contour curvatures `k1, k2` and angle difference `D`, the
//! surface invariants satisfy the conic
//! `P(M, G) = w1 G^2 + w2 G M + w3 M^2 + b G = 0` with
//! `w1 = M12^2 - G12 cos^2 D`, `w2 = -2 G12 M12 sin^2 D`, `w3 = G12^2 sin^4 D`,
//! `b = G12^2 cos^2 D sin^2 D`. Every point of the conic with real principal
//! curvatures is a surface producing the same pair of measurements.

use crate::surface::{contour_curvature_jet, p_of_theta, SurfaceJet};
use crate::surface_recon::cos_two_theta;
use crate::{Error, Result};
use std::f64::consts::PI;

const CURVATURE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmbiguityCurve {
    k1: f64,
    k2: f64,
    delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveClass {
    Hyperbola,
    Ellipse,
    Degenerate,
}

/// Which root of the quadratic in `G` to take at a given `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GRoot {
    #[default]
    Larger,
    Smaller,
}

impl AmbiguityCurve {
    pub fn new(k1: f64, k2: f64, delta: f64) -> Result<Self> {
        if !(k1.is_finite() && k2.is_finite() && delta.is_finite()) {
            return Err(Error::NonFinite("ambiguity curve"));
        }
        if k1 * k2 == 0.0 {
            return Err(Error::InvalidInput("contour curvatures must be nonzero".into()));
        }
        if delta.sin().abs() <= 1e-12 {
            return Err(Error::InvalidInput("angle difference must be nonzero modulo pi".into()));
        }
        Ok(Self { k1, k2, delta })
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }

    pub fn k2(&self) -> f64 {
        self.k2
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn mean_pair(&self) -> f64 {
        0.5 * (self.k1 + self.k2)
    }

    pub fn gaussian_pair(&self) -> f64 {
        self.k1 * self.k2
    }

    /// `(w1, w2, w3, b)`: coefficients of `G^2, GM, M^2, G`.
    pub fn coefficients(&self) -> [f64; 4] {
        let (mij, gij) = (self.mean_pair(), self.gaussian_pair());
        let (s, c) = self.delta.sin_cos();
        let (s2, c2) = (s * s, c * c);
        [
            mij * mij - gij * c2,
            -2.0 * gij * mij * s2,
            gij * gij * s2 * s2,
            gij * gij * c2 * s2,
        ]
    }

    /// Quadratic-part matrix in the variables `(G, M)`.
    pub fn q_matrix(&self) -> [[f64; 2]; 2] {
        let [w1, w2, w3, _] = self.coefficients();
        [[w1, 0.5 * w2], [0.5 * w2, w3]]
    }

    /// `det Q = -G12^3 cos^2 D sin^4 D`.
    pub fn q_determinant(&self) -> f64 {
        let q = self.q_matrix();
        q[0][0] * q[1][1] - q[0][1] * q[1][0]
    }

    /// Largest monomial magnitude of `P` at `(M, G)`.
    pub fn monomial_scale(&self, m: f64, g: f64) -> f64 {
        let [w1, w2, w3, b] = self.coefficients();
        [w1 * g * g, w2 * g * m, w3 * m * m, b * g]
            .iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    /// Both real roots `G` of `P(M, G) = 0` at fixed `M`, larger first.
    pub fn gaussian_roots(&self, m: f64) -> Result<[f64; 2]> {
        let [w1, w2, w3, b] = self.coefficients();
        let (qa, qb, qc) = (w1, w2 * m + b, w3 * m * m);
        let scale = qa.abs().max(qb.abs()).max(qc.abs());
        if qa.abs() <= 1e-14 * scale {
            if qb == 0.0 {
                return Err(Error::NoRealPoint(m));
            }
            let g = -qc / qb;
            return Ok([g, g]);
        }
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < -1e-12 * qb * qb.max(1.0) {
            return Err(Error::NoRealPoint(m));
        }
        let sq = disc.max(0.0).sqrt();
        // Stable pair of roots.
        let t = -0.5 * (qb + qb.signum() * sq);
        let (r1, r2) = if t == 0.0 { (0.0, 0.0) } else { (t / qa, qc / t) };
        Ok([r1.max(r2), r1.min(r2)])
    }

    pub fn gaussian_on_curve(&self, m: f64, root: GRoot) -> Result<f64> {
        let [hi, lo] = self.gaussian_roots(m)?;
        Ok(match root {
            GRoot::Larger => hi,
            GRoot::Smaller => lo,
        })
    }
}

#[allow(non_snake_case)]
pub fn evaluate_P(c: &AmbiguityCurve, m: f64, g: f64) -> f64 {
    let [w1, w2, w3, b] = c.coefficients();
    w1 * g * g + w2 * g * m + w3 * m * m + b * g
}

pub fn classify_curve(c: &AmbiguityCurve) -> CurveClass {
    let (s, co) = c.delta.sin_cos();
    if co.abs() <= 1e-12 || s.abs() <= 1e-12 || c.gaussian_pair() == 0.0 {
        return CurveClass::Degenerate;
    }
    if c.q_determinant() < 0.0 {
        CurveClass::Hyperbola
    } else {
        CurveClass::Ellipse
    }
}

/// One surface of an indistinguishable pair with the views reproducing `(k1, k2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbiguousSurface {
    pub surface: SurfaceJet,
    pub mean: f64,
    pub gaussian: f64,
    /// `[theta_1, theta_2]` in `(0, pi)`.
    pub thetas: [f64; 2],
    /// `+1` if `theta_1 - theta_2 = delta` (mod pi), `-1` if it equals `-delta`.
    pub delta_sign: f64,
}

/// Quadratic surface with invariants `(M, G)` and views reproducing the curve's
/// measurements. Angles are found by searching all arccos branches and both
/// signs of the difference, keeping the first pair confirmed by the forward model.
pub fn ambiguous_surface(c: &AmbiguityCurve, m: f64, root: GRoot) -> Result<AmbiguousSurface> {
    let g = c.gaussian_on_curve(m, root)?;
    let disc = m * m - g;
    if g == 0.0 || disc < -1e-12 * (m * m).max(1.0) {
        return Err(Error::NoRealPoint(m));
    }
    let r = disc.max(0.0).sqrt();
    let (a20, a02) = (m + r, m - r);
    let surface = SurfaceJet::quadratic(a20, a02)?;

    let candidates = |k: f64| -> Vec<f64> {
        if a20 == a02 {
            return Vec::new();
        }
        let cs = cos_two_theta(a20, a02, k);
        if cs.abs() > 1.0 + 1e-9 {
            return Vec::new();
        }
        let h = 0.5 * cs.clamp(-1.0, 1.0).acos();
        let mut v = vec![h, PI - h];
        v.retain(|&t| t > 0.0 && t < PI);
        v
    };
    let reproduces = |theta: f64, k: f64| -> bool {
        let p = p_of_theta(&surface, theta);
        if p == 0.0 {
            return false;
        }
        let got = if theta.sin().abs() < 1e-12 {
            surface.gaussian_curvature() / p
        } else {
            match contour_curvature_jet(&surface, theta) {
                Ok(j) => j.k0,
                Err(_) => return false,
            }
        };
        (got - k).abs() <= CURVATURE_TOL * k.abs().max(1.0)
    };
    let same_mod_pi = |a: f64, b: f64| {
        let d = (a - b).rem_euclid(PI);
        d.min(PI - d) <= 1e-9
    };

    for sign in [1.0, -1.0] {
        for &t1 in &candidates(c.k1) {
            for &t2 in &candidates(c.k2) {
                if same_mod_pi(t1 - t2, sign * c.delta) && reproduces(t1, c.k1) && reproduces(t2, c.k2) {
                    return Ok(AmbiguousSurface {
                        surface,
                        mean: m,
                        gaussian: g,
                        thetas: [t1, t2],
                        delta_sign: sign,
                    });
                }
            }
        }
    }
    Err(Error::BranchSearchFailed(format!(
        "no views of (a20, a02) = ({a20}, {a02}) reproduce k = ({}, {})",
        c.k1, c.k2
    )))
}

/// Two surfaces at `M = m1` and `M = m2` on the curve, both using the larger `G` root.
pub fn indistinguishable_pair(c: &AmbiguityCurve, m1: f64, m2: f64) -> Result<(AmbiguousSurface, AmbiguousSurface)> {
    indistinguishable_pair_with(c, (m1, GRoot::Larger), (m2, GRoot::Larger))
}

pub fn indistinguishable_pair_with(
    c: &AmbiguityCurve,
    first: (f64, GRoot),
    second: (f64, GRoot),
) -> Result<(AmbiguousSurface, AmbiguousSurface)> {
    Ok((ambiguous_surface(c, first.0, first.1)?, ambiguous_surface(c, second.0, second.1)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Conjugacy {
    /// Umbilic: every pair of directions is contour-conjugate.
    AllDirections,
    /// `theta_2` and `pi - theta_2`, both in `[0, pi)`.
    TwoSolutions([f64; 2]),
    /// Non-positive Gaussian curvature.
    NoSolution,
}

/// Directions `theta_2` with `k(theta_1) k(theta_2) = a20 a02`, i.e.
/// `a20 cot^2 theta_2 = a02 tan^2 theta_1`.
pub fn contour_conjugate_directions(a20: f64, a02: f64, theta1: f64) -> Result<Conjugacy> {
    if !(a20.is_finite() && a02.is_finite() && theta1.is_finite()) {
        return Err(Error::NonFinite("contour-conjugate input"));
    }
    if a20 == 0.0 && a02 == 0.0 {
        return Err(Error::FlatUmbilic);
    }
    if a20 == a02 {
        return Ok(Conjugacy::AllDirections);
    }
    if a20 * a02 <= 0.0 {
        return Ok(Conjugacy::NoSolution);
    }
    let r = (a02 / a20).sqrt();
    let (s, c) = theta1.sin_cos();
    // tan theta_2 = cot theta_1 / r, with the sign fixed by the signs of s and c.
    let t = (c * s.signum()).atan2(r * s.abs()).rem_euclid(PI);
    let other = (PI - t).rem_euclid(PI);
    Ok(Conjugacy::TwoSolutions([t, other]))
}
