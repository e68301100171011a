//! Reconstruction of second- and third-order surface data from contour curvatures.
//!
//! Second order: each pair of views `(i, j)` gives one equation in `(M, G)`:
//! `(M_ij^2 - G_ij cos^2 D) G^2 - 2 G_ij M_ij sin^2 D G M + G_ij^2 sin^4 D M^2
//!  + G_ij^2 cos^2 D sin^2 D G = 0`, where `D = theta_i - theta_j`. Three pairs
//! give `W (G^2, GM, M^2)^T = -G b`, hence `G = -det W1 / det W` and
//! `M = -det W2 / det W`. The angles then follow from
//! `cos 2 theta_i = (2 M k_i - 2 G) / ((a02 - a20) k_i)`.
//!
//! Third order: `q(theta_i) = p(theta_i)^3 dk/ds` is linear in
//! `(a30, a21, a12, a03)`; four views give a 4x4 system.

use crate::linalg::{cramer, det, relative_det, with_column};
use crate::surface::{contour_curvature_jet, p_of_theta, ContourObservation, SurfaceJet};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Relative-determinant threshold below which a configuration is degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;
const BRANCH_TOL: f64 = 1e-8;

/// Contour curvatures from three views with known pairwise angle differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleMeasurement {
    pub k: [f64; 3],
    /// `(theta1 - theta2, theta2 - theta3, theta3 - theta1)`.
    pub deltas: [f64; 3],
}

impl TripleMeasurement {
    pub fn new(k: [f64; 3], deltas: [f64; 3]) -> Result<Self> {
        if k.iter().chain(&deltas).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("triple measurement"));
        }
        if k.contains(&0.0) {
            return Err(Error::InvalidInput("contour curvatures must be nonzero".into()));
        }
        if deltas.iter().any(|d| d.sin().abs() <= 1e-12) {
            return Err(Error::InvalidInput(
                "angle differences must be nonzero modulo pi".into(),
            ));
        }
        let sum: f64 = deltas.iter().sum();
        if sum.abs() > 1e-12 * deltas.iter().map(|d| d.abs()).sum::<f64>().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "angle differences must sum to zero, got {sum:e}"
            )));
        }
        Ok(Self { k, deltas })
    }

    /// Measurement with differences taken from absolute angles.
    pub fn from_angles(k: [f64; 3], thetas: [f64; 3]) -> Result<Self> {
        Self::new(k, deltas_of(thetas))
    }

    /// `(M_ij, G_ij)` for the pairs 12, 23, 31.
    pub fn pair_invariants(&self) -> [(f64, f64); 3] {
        let k = self.k;
        [(k[0], k[1]), (k[1], k[2]), (k[2], k[0])].map(|(a, b)| (0.5 * (a + b), a * b))
    }
}

pub fn deltas_of(thetas: [f64; 3]) -> [f64; 3] {
    [
        thetas[0] - thetas[1],
        thetas[1] - thetas[2],
        thetas[2] - thetas[0],
    ]
}

/// Recovered second-order data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderResult {
    pub mean: f64,
    pub gaussian: f64,
    /// Principal coefficients with `a20 >= a02`.
    pub a20: f64,
    pub a02: f64,
    pub thetas: [f64; 3],
    /// Relative determinant of `W` after column equilibration.
    pub condition: f64,
    /// Largest relative difference between the `(W, b)` and `(L, P, V)` forms.
    pub lpv_discrepancy: f64,
}

impl SecondOrderResult {
    pub fn surface(&self) -> Result<SurfaceJet> {
        SurfaceJet::quadratic(self.a20, self.a02)
    }
}

/// `W` (as columns) and `b` for a triple.
fn system(m: &TripleMeasurement) -> ([[f64; 3]; 3], [f64; 3]) {
    let mut w = [[0.0; 3]; 3];
    let mut b = [0.0; 3];
    for (r, ((mij, gij), d)) in m.pair_invariants().into_iter().zip(m.deltas).enumerate() {
        let (s, c) = d.sin_cos();
        let (s2, c2) = (s * s, c * c);
        w[0][r] = mij * mij - gij * c2;
        w[1][r] = -2.0 * gij * mij * s2;
        w[2][r] = gij * gij * s2 * s2;
        b[r] = gij * gij * c2 * s2;
    }
    (w, b)
}

fn equilibrated(cols: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    cols.map(|c| {
        let n = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if n == 0.0 {
            c
        } else {
            c.map(|v| v / n)
        }
    })
}

/// `(M, G)` from the `(L, P, V)` determinant form:
/// `G = -det L / det V`, `M = -det P / (2 det V)`.
pub fn mean_gaussian_lpv(m: &TripleMeasurement) -> (f64, f64) {
    let mut x1 = [0.0; 3];
    let mut x2 = [0.0; 3];
    let mut x3 = [0.0; 3];
    let mut x4 = [0.0; 3];
    for (r, ((mij, gij), d)) in m.pair_invariants().into_iter().zip(m.deltas).enumerate() {
        let (s, c) = d.sin_cos();
        x1[r] = mij / gij;
        x2[r] = (mij * mij - gij * c * c) / (gij * gij * s * s);
        x3[r] = c * c;
        x4[r] = s * s;
    }
    let dv = det(&[x1, x2, x4]);
    let g = -det(&[x1, x3, x4]) / dv;
    let mean = -det(&[x2, x3, x4]) / (2.0 * dv);
    (mean, g)
}

/// `(M, G, a20, a02)` and the angles from three contour curvatures.
pub fn recover_second_order(m: &TripleMeasurement) -> Result<SecondOrderResult> {
    let (w, b) = system(m);
    let condition = relative_det(&equilibrated(&w));
    if !(condition > DEGENERACY_TOL) {
        return Err(Error::DegenerateConfiguration(format!(
            "det W is negligible (relative {condition:e}); umbilic or sin 2theta-degenerate triple"
        )));
    }
    let dw = det(&w);
    let g = -det(&with_column(&w, 0, &b)) / dw;
    let mean = -det(&with_column(&w, 1, &b)) / dw;

    let disc = mean * mean - g;
    let scale = mean * mean + g.abs();
    if disc < -1e-10 * scale {
        return Err(Error::NoRealRoots(format!("M = {mean}, G = {g}")));
    }
    let root = disc.max(0.0).sqrt();
    let (a20, a02) = (mean + root, mean - root);
    let thetas = recover_angles(m, a20, a02)?;

    let (m_lpv, g_lpv) = mean_gaussian_lpv(m);
    let lpv_discrepancy = ((m_lpv - mean).abs() / mean.abs().max(1.0)).max((g_lpv - g).abs() / g.abs().max(1.0));
    Ok(SecondOrderResult {
        mean,
        gaussian: g,
        a20,
        a02,
        thetas,
        condition,
        lpv_discrepancy,
    })
}

/// `cos 2 theta` for a view with curvature `k`.
pub fn cos_two_theta(a20: f64, a02: f64, k: f64) -> f64 {
    (-2.0 * a20 * a02 + (a20 + a02) * k) / ((a02 - a20) * k)
}

fn recover_angles(m: &TripleMeasurement, a20: f64, a02: f64) -> Result<[f64; 3]> {
    if a20 == a02 {
        return Err(Error::DegenerateConfiguration("umbilic: angles are undetermined".into()));
    }
    let cos2 = m.k.map(|k| cos_two_theta(a20, a02, k));
    if cos2.iter().any(|c| c.abs() > 1.0 + 1e-8) {
        return Err(Error::NoConsistentBranch(format!("cos 2theta out of range: {cos2:?}")));
    }
    // Anchor on the best-conditioned view, where cos 2theta is farthest from +-1.
    let anchor = (0..3)
        .min_by(|&i, &j| cos2[i].abs().total_cmp(&cos2[j].abs()))
        .expect("three views");
    let [d12, d23, d31] = m.deltas;
    let half = 0.5 * cos2[anchor].clamp(-1.0, 1.0).acos();
    let mut best: Option<[f64; 3]> = None;
    for t in [half, PI - half] {
        let thetas = match anchor {
            0 => [t, t - d12, t + d31],
            1 => [t + d12, t, t - d23],
            _ => [t - d31, t + d23, t],
        }
        .map(|th| th.rem_euclid(PI));
        let in_range = thetas.iter().all(|&th| th > 0.0 && th < PI);
        let consistent = thetas
            .iter()
            .zip(cos2)
            .all(|(th, c)| ((2.0 * th).cos() - c).abs() <= BRANCH_TOL);
        if in_range && consistent && best.is_none_or(|b| thetas[0] < b[0]) {
            best = Some(thetas);
        }
    }
    best.ok_or_else(|| {
        Error::NoConsistentBranch(format!("no angles in (0, pi) reproduce the differences {:?}", m.deltas))
    })
}

/// True iff `|sin 2t1 + sin 2t2 + sin 2t3| > 1e-12`.
pub fn check_admissible_triple(thetas: [f64; 3]) -> bool {
    thetas.iter().map(|t| (2.0 * t).sin()).sum::<f64>().abs() > 1e-12
}

/// Two quadratic surfaces with equal contour curvatures on degenerate triples.
#[derive(Debug, Clone, PartialEq)]
pub struct DegeneratePair {
    pub f1: SurfaceJet,
    pub f2: SurfaceJet,
    pub thetas1: [f64; 3],
    pub thetas2: [f64; 3],
    /// The coefficient `a` of `f2 = (u, v, a u^2 + 2 v^2)`.
    pub a: f64,
    pub curvatures1: [f64; 3],
    pub curvatures2: [f64; 3],
}

/// Contour curvature including the axis directions, where the closed form
/// `a20 a02 / p` is used as the limit of the contour curvature.
fn contour_curvature_with_limit(s: &SurfaceJet, theta: f64) -> Result<f64> {
    if theta.sin().abs() < 1e-12 {
        let p = p_of_theta(s, theta);
        if p == 0.0 {
            return Err(Error::AsymptoticDirection);
        }
        return Ok(s.gaussian_curvature() / p);
    }
    Ok(contour_curvature_jet(s, theta)?.k0)
}

/// `f1 = (u, v, u^2 + 2 v^2)` viewed from `(0, pi/6, 5pi/6)` and
/// `f2 = (u, v, a u^2 + 2 v^2)` viewed from `(0, pi/4, 3pi/4)`, with `a` chosen so
/// the off-axis curvatures agree. Both triples have `sum sin 2theta = 0`.
pub fn degenerate_pair_demo() -> Result<DegeneratePair> {
    let f1 = SurfaceJet::quadratic(2.0, 4.0)?;
    let thetas1 = [0.0, PI / 6.0, 5.0 * PI / 6.0];
    let thetas2 = [0.0, PI / 4.0, 3.0 * PI / 4.0];
    let target = contour_curvature_with_limit(&f1, thetas1[1])?;

    // 8a / (a + 2) is increasing in a > 0; bisect on the forward model.
    let mismatch = |a: f64| -> Result<f64> {
        let f2 = SurfaceJet::quadratic(2.0 * a, 4.0)?;
        Ok(contour_curvature_with_limit(&f2, thetas2[1])? - target)
    };
    let (mut lo, mut hi) = (1e-3, 1e3);
    if mismatch(lo)? * mismatch(hi)? > 0.0 {
        return Err(Error::BranchSearchFailed("no sign change for a".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mismatch(mid)? * mismatch(lo)? <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    let a = 0.5 * (lo + hi);
    let f2 = SurfaceJet::quadratic(2.0 * a, 4.0)?;
    let curv = |s: &SurfaceJet, th: [f64; 3]| -> Result<[f64; 3]> {
        Ok([
            contour_curvature_with_limit(s, th[0])?,
            contour_curvature_with_limit(s, th[1])?,
            contour_curvature_with_limit(s, th[2])?,
        ])
    };
    Ok(DegeneratePair {
        curvatures1: curv(&f1, thetas1)?,
        curvatures2: curv(&f2, thetas2)?,
        f1,
        f2,
        thetas1,
        thetas2,
        a,
    })
}

/// Columns `a1..a4` of the third-order system for the given angles.
pub fn third_order_matrix(a20: f64, a02: f64, thetas: [f64; 4]) -> [[f64; 4]; 4] {
    let mut cols = [[0.0; 4]; 4];
    for (r, th) in thetas.iter().enumerate() {
        let (s, c) = th.sin_cos();
        cols[0][r] = -a02.powi(3) * s.powi(3);
        cols[1][r] = 3.0 * a20 * a02 * a02 * s * s * c;
        cols[2][r] = -3.0 * a20 * a20 * a02 * s * c * c;
        cols[3][r] = a20.powi(3) * c.powi(3);
    }
    cols
}

/// `(a30, a21, a12, a03)` from four views with known `dk/ds`, given `a20, a02`.
pub fn recover_third_order_with(a20: f64, a02: f64, obs: &[ContourObservation; 4]) -> Result<[f64; 4]> {
    if a20 * a02 == 0.0 || !(a20 * a02).is_finite() {
        return Err(Error::DegenerateConfiguration("a20 a02 must be nonzero".into()));
    }
    let thetas = obs.map(|o| o.theta);
    for i in 0..4 {
        for j in i + 1..4 {
            if (thetas[i] - thetas[j]).sin().abs() <= 1e-12 {
                return Err(Error::DegenerateConfiguration(format!(
                    "repeated direction {} and {}",
                    thetas[i], thetas[j]
                )));
            }
        }
    }
    let mut d = [0.0; 4];
    for (di, o) in d.iter_mut().zip(obs) {
        let k1 = o
            .k1
            .ok_or_else(|| Error::InvalidInput(format!("missing dk/ds at theta = {}", o.theta)))?;
        let p = a20 * o.theta.cos().powi(2) + a02 * o.theta.sin().powi(2);
        if p.abs() <= 1e-12 * a20.abs().max(a02.abs()) {
            return Err(Error::AsymptoticDirection);
        }
        *di = p.powi(3) * k1;
    }
    let cols = third_order_matrix(a20, a02, thetas);
    cramer(&cols, &d, 1e-12)
        .map(|(x, _)| x)
        .ok_or_else(|| Error::DegenerateConfiguration(format!("det A is negligible ({:e})", det(&cols))))
}

/// Third-order recovery using the principal coefficients of a second-order result.
pub fn recover_third_order(s2: &SecondOrderResult, obs: &[ContourObservation; 4]) -> Result<[f64; 4]> {
    recover_third_order_with(s2.a20, s2.a02, obs)
}

/// `(M, G)` from normal curvatures `k^n_i` along three directions with known
/// differences. Euler's formula gives, per pair,
/// `sin^4 D M^2 - 2 M_ij sin^2 D M + cos^2 D sin^2 D G = -(M_ij^2 - G_ij cos^2 D)`.
pub fn recover_from_normal_curvatures(kn: [f64; 3], deltas: [f64; 3]) -> Result<(f64, f64)> {
    if kn.iter().chain(&deltas).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("normal curvatures"));
    }
    let sum: f64 = deltas.iter().sum();
    if sum.abs() > 1e-12 * deltas.iter().map(|d| d.abs()).sum::<f64>().max(1.0) {
        return Err(Error::InvalidInput(format!("angle differences must sum to zero, got {sum:e}")));
    }
    let pairs = [(kn[0], kn[1]), (kn[1], kn[2]), (kn[2], kn[0])];
    let mut cols = [[0.0; 3]; 3];
    let mut rhs = [0.0; 3];
    for (r, ((a, b), d)) in pairs.into_iter().zip(deltas).enumerate() {
        let (mij, gij) = (0.5 * (a + b), a * b);
        let (s, c) = d.sin_cos();
        let (s2, c2) = (s * s, c * c);
        cols[0][r] = s2 * s2;
        cols[1][r] = -2.0 * mij * s2;
        cols[2][r] = c2 * s2;
        rhs[r] = -(mij * mij - gij * c2);
    }
    let scaled = equilibrated(&cols);
    if !(relative_det(&scaled) > DEGENERACY_TOL) {
        return Err(Error::DegenerateConfiguration(
            "normal-curvature system is singular (umbilic or repeated directions)".into(),
        ));
    }
    let d = det(&cols);
    let mean = det(&with_column(&cols, 1, &rhs)) / d;
    let g = det(&with_column(&cols, 2, &rhs)) / d;
    Ok((mean, g))
}
