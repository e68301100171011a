//! Forward model followed by reconstruction, across module boundaries.

use contour_jets::curve::{project_osculating, CurveJet, OsculatingDirection};
use contour_jets::curve_recon::{recover_curve, OsculatingMeasurementPair};
use contour_jets::surface::{contour_curvature_jet, SurfaceJet};
use contour_jets::surface_recon::{recover_second_order, recover_third_order, TripleMeasurement};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn away_from_zero(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let v = rng.gen_range(lo..hi);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

#[test]
fn curve_round_trip_through_both_views() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 4..=6 {
        for _ in 0..40 {
            let a: Vec<f64> = (2..=n).map(|_| away_from_zero(&mut rng, 0.3, 2.0)).collect();
            let b: Vec<f64> = (3..=n).map(|_| away_from_zero(&mut rng, 0.3, 2.0)).collect();
            let curve = CurveJet::new(a, b).unwrap();
            let t1 = rng.gen_range(0.4..1.4);
            let t2 = t1 + rng.gen_range(0.4..1.2);
            let jet = |t: f64| project_osculating(&curve, OsculatingDirection::new(t).unwrap(), n - 2).unwrap();
            let m = OsculatingMeasurementPair::new(jet(t1), jet(t2), t2 - t1, n).unwrap();
            let r = recover_curve(&m).unwrap();
            assert!((r.theta1 - t1).abs() < 1e-9 && (r.theta2 - t2).abs() < 1e-9);
            let back = r.curve().unwrap();
            for i in 2..=n - 2 {
                assert!((back.a(i) - curve.a(i)).abs() < 1e-7 * curve.a(i).abs().max(1.0));
            }
            for i in 3..=n {
                assert!((back.b(i) - curve.b(i)).abs() < 1e-7 * curve.b(i).abs().max(1.0));
            }
        }
    }
}

#[test]
fn surface_second_then_third_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let a02 = rng.gen_range(0.3..1.5);
        let a20 = a02 + rng.gen_range(0.3..1.5);
        let a3 = [(); 4].map(|_| rng.gen_range(-1.0..1.0));
        let surface = SurfaceJet::cubic(a20, a02, a3).unwrap();
        let thetas = [0.3, 1.1, 2.4].map(|t: f64| t + rng.gen_range(-0.1..0.1));
        let k = thetas.map(|t| contour_curvature_jet(&surface, t).unwrap().k0);
        let s2 = recover_second_order(&TripleMeasurement::from_angles(k, thetas).unwrap()).unwrap();
        assert!((s2.a20 - a20).abs() < 1e-9 && (s2.a02 - a02).abs() < 1e-9);
        for (got, want) in s2.thetas.iter().zip(thetas) {
            assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        }
        let views = [0.2, 0.9, 1.7, 2.6].map(|t| contour_curvature_jet(&surface, t).unwrap());
        let got = recover_third_order(&s2, &views).unwrap();
        for (g, w) in got.iter().zip(a3) {
            assert!((g - w).abs() < 1e-7, "{got:?} vs {a3:?}");
        }
    }
}
