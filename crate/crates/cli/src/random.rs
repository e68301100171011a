//! Seeded random instances for randomized suites.

use contour_jets::curve::CurveJet;
use contour_jets::surface::{p_of_theta, SurfaceJet};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on `[lo, hi)`, resampled until `|x| >= min_abs`.
pub fn uniform_away_from_zero<R: Rng>(rng: &mut R, lo: f64, hi: f64, min_abs: f64) -> f64 {
    loop {
        let x = rng.gen_range(lo..hi);
        if x.abs() >= min_abs {
            return x;
        }
    }
}

/// Coefficients in `U[-2, 2]` with `|a2|, |b3| >= 0.1`.
pub fn curve<R: Rng>(rng: &mut R, order: usize) -> CurveJet {
    let mut a: Vec<f64> = (2..=order).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let mut b: Vec<f64> = (3..=order).map(|_| rng.gen_range(-2.0..2.0)).collect();
    a[0] = uniform_away_from_zero(rng, -2.0, 2.0, 0.1);
    b[0] = uniform_away_from_zero(rng, -2.0, 2.0, 0.1);
    CurveJet::new(a, b).expect("orders agree")
}

/// Osculating-plane angle in `(0.1, pi - 0.1)`.
pub fn osculating_theta<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(0.1..PI - 0.1)
}

/// Cubic surface with coefficients in `U[-2, 2]` and a view direction kept
/// `margin` away from asymptotic and degenerate parametrizations.
pub fn surface_view<R: Rng>(rng: &mut R, margin: f64) -> (SurfaceJet, f64) {
    let a20 = uniform_away_from_zero(rng, -2.0, 2.0, margin);
    let a02 = uniform_away_from_zero(rng, -2.0, 2.0, margin);
    let a3 = [(); 4].map(|_| rng.gen_range(-2.0..2.0));
    let s = SurfaceJet::cubic(a20, a02, a3).expect("finite coefficients");
    loop {
        let th = rng.gen_range(0.1..PI - 0.1);
        if p_of_theta(&s, th).abs() >= margin && (a02 * th.sin()).abs() >= margin {
            return (s, th);
        }
    }
}

/// Normalized quadratic part: `a20 > a02`, `a20 > 0`, `|a02| >= margin`,
/// `a20 - a02 >= margin`.
pub fn strict_principal<R: Rng>(rng: &mut R, margin: f64) -> (f64, f64) {
    loop {
        let a20 = rng.gen_range(margin..2.0);
        let a02 = uniform_away_from_zero(rng, -2.0, 2.0, margin);
        if a20 - a02 >= margin {
            return (a20, a02);
        }
    }
}

/// Three angles in `(margin, pi - margin)`, pairwise `margin` apart modulo pi,
/// with `|sum sin 2theta| >= margin` and `|p(theta)| >= margin`.
pub fn admissible_triple<R: Rng>(rng: &mut R, s: &SurfaceJet, margin: f64) -> [f64; 3] {
    loop {
        let th = [(); 3].map(|_| rng.gen_range(margin..PI - margin));
        let distinct = (0..3).all(|i| (th[i] - th[(i + 1) % 3]).sin().abs() >= margin);
        let sum = th.iter().map(|t| (2.0 * t).sin()).sum::<f64>().abs() >= margin;
        if distinct && sum && th.iter().all(|&t| p_of_theta(s, t).abs() >= margin) {
            return th;
        }
    }
}

/// Four angles in `(margin, pi - margin)`, pairwise `margin` apart modulo pi,
/// away from asymptotic directions.
pub fn distinct_angles4<R: Rng>(rng: &mut R, s: &SurfaceJet, margin: f64) -> [f64; 4] {
    loop {
        let th = [(); 4].map(|_| rng.gen_range(margin..PI - margin));
        let distinct = (0..4).all(|i| (i + 1..4).all(|j| (th[i] - th[j]).sin().abs() >= margin));
        if distinct && th.iter().all(|&t| p_of_theta(s, t).abs() >= margin) {
            return th;
        }
    }
}
