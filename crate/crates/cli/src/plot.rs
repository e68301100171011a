//! CSV and SVG renderings of a sampled apparent contour.

use crate::format::float;
use contour_jets::oracle::{numeric_curvature_oracle, PlaneSamples};
use contour_jets::surface::{sample_contour, ContourPoint, SurfaceJet};
use contour_jets::{Error, Result};
use std::fmt::Write;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 40.0;
const DEFAULT_COUNT: usize = 401;

#[derive(Debug, Clone)]
pub struct ContourPlot {
    pub half_width: f64,
    /// `(signed arclength, point)`, sorted by arclength.
    pub points: Vec<(f64, ContourPoint)>,
    pub warnings: Vec<String>,
}

/// Samples the contour. Without an explicit half-width the default range is
/// halved (up to six times) until Newton refinement succeeds everywhere.
pub fn sample(s: &SurfaceJet, theta: f64, half_width: Option<f64>, count: Option<usize>) -> Result<ContourPlot> {
    let count = count.unwrap_or(DEFAULT_COUNT);
    if let Some(w) = half_width {
        let points = sample_contour(s, theta, w, count)?;
        return Ok(ContourPlot { half_width: w, points, warnings: Vec::new() });
    }
    let mut w = 1.0 / s.a20().abs().max(s.a02().abs()).max(1e-12);
    let mut warnings = Vec::new();
    for _ in 0..6 {
        match sample_contour(s, theta, w, count) {
            Ok(points) => return Ok(ContourPlot { half_width: w, points, warnings }),
            Err(Error::RootRefinementFailed { u, .. }) => {
                warnings.push(format!("contour generator not traceable at u = {u:.6}; halving the sampled range"));
                w *= 0.5;
            }
            Err(e) => return Err(e),
        }
    }
    sample_contour(s, theta, w, count).map(|points| ContourPlot { half_width: w, points, warnings })
}

pub fn csv(points: &[(f64, ContourPoint)]) -> String {
    let mut out = String::from("s,x,y,kappa\n");
    for (s, p) in points {
        let _ = writeln!(out, "{},{},{},{}", float(*s), float(p.x), float(p.y), float(p.kappa));
    }
    out
}

/// Fixed 800x600 viewport; the data box is scaled uniformly and centered.
pub fn svg(points: &[(f64, ContourPoint)]) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (_, p) in points {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    let dx = (x1 - x0).max(1e-12);
    let dy = (y1 - y0).max(1e-12);
    let scale = ((WIDTH - 2.0 * MARGIN) / dx).min((HEIGHT - 2.0 * MARGIN) / dy);
    let ox = 0.5 * (WIDTH - scale * dx);
    let oy = 0.5 * (HEIGHT - scale * dy);
    let map = |x: f64, y: f64| (ox + scale * (x - x0), HEIGHT - (oy + scale * (y - y0)));

    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    );
    out.push_str("<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"");
    for (i, (_, p)) in points.iter().enumerate() {
        let (u, v) = map(p.x, p.y);
        let _ = write!(out, "{}{u:.3},{v:.3}", if i == 0 { "" } else { " " });
    }
    out.push_str("\"/>\n");
    if let Some((_, base)) = points.iter().find(|(s, _)| *s == 0.0) {
        let (u, v) = map(base.x, base.y);
        let _ = writeln!(out, "<circle cx=\"{u:.3}\" cy=\"{v:.3}\" r=\"4\" fill=\"red\"/>");
    }
    out.push_str("</svg>\n");
    out
}

/// Number of samples nearest `s = 0` used by [`fitted_curvature_at_base`].
pub const FIT_WINDOW: usize = 41;

/// Curvature at `s = 0` fitted from the `(s, x, y)` samples alone, using the
/// [`FIT_WINDOW`] samples closest to the base point.
pub fn fitted_curvature_at_base(points: &[(f64, ContourPoint)]) -> Result<f64> {
    let mut near: Vec<&(f64, ContourPoint)> = points.iter().collect();
    near.sort_by(|a, b| a.0.abs().total_cmp(&b.0.abs()));
    near.truncate(FIT_WINDOW);
    near.sort_by(|a, b| a.0.total_cmp(&b.0));
    let samples = PlaneSamples::new(
        near.iter().map(|(s, _)| *s).collect(),
        near.iter().map(|(_, p)| p.x).collect(),
        near.iter().map(|(_, p)| p.y).collect(),
    )?;
    numeric_curvature_oracle(&samples, 0)
}

/// Parses the CSV written by [`csv`] back into `(s, x, y, kappa)` rows.
pub fn parse_csv(text: &str) -> std::result::Result<Vec<[f64; 4]>, String> {
    let mut lines = text.lines();
    if lines.next() != Some("s,x,y,kappa") {
        return Err("missing header `s,x,y,kappa`".into());
    }
    lines
        .map(|line| {
            let v: Vec<f64> = line
                .split(',')
                .map(|c| c.parse::<f64>().map_err(|e| format!("{line}: {e}")))
                .collect::<std::result::Result<_, _>>()?;
            <[f64; 4]>::try_from(v).map_err(|_| format!("expected 4 columns: {line}"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_6;

    #[test]
    fn f1_contour_curvature() {
        let s = SurfaceJet::quadratic(2.0, 4.0).unwrap();
        let plot = sample(&s, FRAC_PI_6, None, None).unwrap();
        let rows = parse_csv(&csv(&plot.points)).unwrap();
        let base = rows.iter().find(|r| r[0] == 0.0).unwrap();
        assert!((base[3] - 3.2).abs() < 1e-12);
        let fitted = fitted_curvature_at_base(&plot.points).unwrap();
        assert!((fitted - 3.2).abs() < 1e-4, "{fitted}");
    }

    #[test]
    fn umbilic_contour_is_parabola() {
        let s = SurfaceJet::quadratic(1.5, 1.5).unwrap();
        for th in [0.4, 1.2, 2.7] {
            let plot = sample(&s, th, None, None).unwrap();
            let fitted = fitted_curvature_at_base(&plot.points).unwrap();
            assert!((fitted - 1.5).abs() < 1e-6, "{fitted}");
            // y = x^2 * c / 2 along the whole contour.
            for (_, p) in &plot.points {
                assert!((p.y - 0.75 * p.x * p.x).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn svg_shape() {
        let s = SurfaceJet::quadratic(2.0, 4.0).unwrap();
        let text = svg(&sample(&s, 1.0, None, Some(41)).unwrap().points);
        assert!(text.starts_with("<svg") && text.contains("width=\"800\" height=\"600\""));
        assert!(text.contains("<polyline") && text.contains("<circle"));
    }
}
