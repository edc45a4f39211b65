//! Schematic SVG output: conics sampled point-wise in an affine chart,
//! chords dashed, face points as markers.

use penrose_core::engine::PenroseLattice;
use penrose_core::matrix::poly_to_sym;
use penrose_core::scalar::{Comparator, Scalar};

const VIEW: f64 = 10.0;
const SIZE: f64 = 640.0;

fn map(x: f64, y: f64) -> (f64, f64) {
    let sx = (x + VIEW) / (2.0 * VIEW) * SIZE;
    let sy = (VIEW - y) / (2.0 * VIEW) * SIZE;
    (sx, sy)
}

/// Points on the conic in the chart z = 1 (or w = 1), sampled along a
/// pencil of directions; each sample satisfies the equation to working
/// precision by construction.
pub fn sample_conic(m: &penrose_core::SymMatrix, samples: usize) -> Vec<(f64, f64)> {
    let n = m.order();
    let a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m.at(i, j).to_f64()).collect()).collect();
    let mut out = Vec::new();
    // Sweep lines through a probe point and intersect with the conic.
    for k in 0..samples {
        let theta = std::f64::consts::PI * (k as f64) / (samples as f64);
        let (c, s) = (theta.cos(), theta.sin());
        // Parametrize x = t c, y = t s in the chart (last coordinate 1):
        // quadratic in t.
        let (qa, qb, qc) = if n == 3 {
            (
                a[0][0] * c * c + 2.0 * a[0][1] * c * s + a[1][1] * s * s,
                2.0 * (a[0][2] * c + a[1][2] * s),
                a[2][2],
            )
        } else {
            (
                a[0][0] * c * c + 2.0 * a[0][1] * c * s + a[1][1] * s * s,
                2.0 * (a[0][3] * c + a[1][3] * s),
                a[3][3],
            )
        };
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 || qa.abs() < 1e-12 {
            continue;
        }
        for sign in [1.0, -1.0] {
            let t = (-qb + sign * disc.sqrt()) / (2.0 * qa);
            let (x, y) = (t * c, t * s);
            if x.abs() <= VIEW && y.abs() <= VIEW {
                out.push((x, y));
            }
        }
    }
    out
}

/// Residual of a sampled chart point against its conic, relative scale.
pub fn sample_residual(m: &penrose_core::SymMatrix, pt: (f64, f64)) -> f64 {
    let n = m.order();
    let mut v = vec![pt.0, pt.1];
    while v.len() < n {
        v.push(if v.len() == n - 1 { 1.0 } else { 0.0 });
    }
    let a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m.at(i, j).to_f64()).collect()).collect();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            q += v[i] * a[i][j] * v[j];
        }
    }
    let scale = a.iter().flatten().map(|x| x.abs()).fold(0.0f64, f64::max).max(1.0)
        * v.iter().map(|x| x * x).sum::<f64>();
    q.abs() / scale
}

/// Renders the lattice: every vertex conic sampled on at least `samples`
/// directions, chords dashed, face points as markers; conics with no real
/// chart points become annotations.
pub fn render_lattice(lat: &PenroseLattice, cmp: &Comparator, samples: usize) -> String {
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let palette = [
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    ];
    let mut annotations = Vec::new();
    for (idx, (om, v)) in lat.vertices.iter().enumerate() {
        if v.poly.is_zero() {
            annotations.push(format!("{} vanishes", om.label()));
            continue;
        }
        let m = poly_to_sym(&v.poly).expect("degree 2");
        let pts = sample_conic(&m, samples.max(128));
        let color = palette[idx % palette.len()];
        if pts.is_empty() {
            annotations.push(format!("{} has no real points in the chart", om.label()));
            continue;
        }
        for (x, y) in pts {
            let (sx, sy) = map(x, y);
            svg.push_str(&format!(
                "<circle cx=\"{sx:.2}\" cy=\"{sy:.2}\" r=\"1.2\" fill=\"{color}\"/>\n"
            ));
        }
    }
    // Chords, dashed.
    for ((om, k), chord) in &lat.chords {
        let c = chord.linear_coeffs();
        if let Some(seg) = clip_line(&c) {
            let (x1, y1) = map(seg.0, seg.1);
            let (x2, y2) = map(seg.2, seg.3);
            let digits: String = om.indices().iter().map(|i| i.to_string()).collect();
            svg.push_str(&format!(
                "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"#444\" stroke-width=\"0.8\" stroke-dasharray=\"6 4\"><title>p_{{{digits}}},{k}</title></line>\n"
            ));
        }
    }
    // Face points.
    for (base, j, k) in lat.faces() {
        if let Ok(report) = lat.face_point(base, j, k, cmp) {
            if let Some(p) = report.point {
                let v: Vec<f64> = p.0.iter().map(Scalar::to_f64).collect();
                let last = *v.last().unwrap();
                if last.abs() > 1e-9 {
                    let (x, y) = (v[0] / last, v[1] / last);
                    if x.abs() <= VIEW && y.abs() <= VIEW {
                        let (sx, sy) = map(x, y);
                        svg.push_str(&format!(
                            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"7\" height=\"7\" fill=\"black\"/>\n",
                            sx - 3.5,
                            sy - 3.5
                        ));
                    }
                }
            }
        }
    }
    for (i, note) in annotations.iter().enumerate() {
        svg.push_str(&format!(
            "<text x=\"10\" y=\"{}\" font-size=\"12\" fill=\"#333\">{}</text>\n",
            16 + 14 * i,
            note
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Clips the chart trace of a projective line to the viewport; None for the
/// line at infinity.
fn clip_line(c: &[Scalar]) -> Option<(f64, f64, f64, f64)> {
    let n = c.len();
    let a = c[0].to_f64();
    let b = c[1].to_f64();
    let d = c[n - 1].to_f64();
    if a.abs() < 1e-12 && b.abs() < 1e-12 {
        return None;
    }
    // a x + b y + d = 0 within the square [-VIEW, VIEW]^2.
    let mut pts = Vec::new();
    if b.abs() > 1e-12 {
        for x in [-VIEW, VIEW] {
            let y = -(a * x + d) / b;
            if y.abs() <= VIEW + 1e-9 {
                pts.push((x, y));
            }
        }
    }
    if a.abs() > 1e-12 {
        for y in [-VIEW, VIEW] {
            let x = -(b * y + d) / a;
            if x.abs() <= VIEW + 1e-9 {
                pts.push((x, y));
            }
        }
    }
    pts.dedup_by(|p, q| (p.0 - q.0).abs() < 1e-9 && (p.1 - q.1).abs() < 1e-9);
    if pts.len() >= 2 {
        Some((pts[0].0, pts[0].1, pts[1].0, pts[1].1))
    } else {
        None
    }
}
