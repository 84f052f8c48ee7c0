//! SVG 1.1 rendering of projective diagrams (disk model of RP², antipodal
//! boundary points identified), lifted diagrams (stereographic image of the
//! covering sphere) and hyperbolicity rasters.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write;

use crate::hyperbolicity::{locate, HypRegion};
use crate::knotdiag::{LiftedDiagram, ProjDiagram};
use crate::ratpoly::to_f64;

const SIZE: f64 = 480.0;
const RADIUS: f64 = 220.0;
const SAMPLES: usize = 1200;
const GAP: f64 = 0.035;

struct Renderer {
    y: Vec<Vec<f64>>,
    f: [[f64; 4]; 3],
    d: usize,
}

impl Renderer {
    fn new(dg: &ProjDiagram) -> Renderer {
        let y = dg.curve.y().iter().map(|p| p.coeffs().iter().map(to_f64).collect()).collect();
        let f = dg.forms.clone().map(|r| r.map(|c| to_f64(&c)));
        Renderer { y, f, d: dg.curve.degree() }
    }

    /// Image of the parameter `(cos a : sin a)`, scaled to unit length.
    fn point(&self, a: f64) -> [f64; 3] {
        let (s, c) = a.sin_cos();
        let g: Vec<f64> = self
            .y
            .iter()
            .map(|co| co.iter().enumerate().map(|(j, v)| v * s.powi(j as i32) * c.powi((self.d - j) as i32)).sum())
            .collect();
        let x = [0, 1, 2].map(|i| (0..4).map(|j| self.f[i][j] * g[j]).sum::<f64>());
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.map(|v| v / n)
    }
}

fn disk(x: [f64; 3]) -> [f64; 2] {
    let u = if x[2] < 0.0 { x.map(|v| -v) } else { x };
    let r = u[0].hypot(u[1]);
    if r < 1e-15 {
        return [0.0, 0.0];
    }
    let rho = u[2].clamp(-1.0, 1.0).acos() / FRAC_PI_2;
    [u[0] / r * rho, u[1] / r * rho]
}

fn screen(p: [f64; 2]) -> (f64, f64) {
    (SIZE / 2.0 + RADIUS * p[0], SIZE / 2.0 - RADIUS * p[1])
}

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
}

fn polyline(out: &mut String, pts: &[[f64; 2]], color: &str) {
    if pts.len() < 2 {
        return;
    }
    let mut s = String::new();
    for p in pts {
        let (x, y) = screen(*p);
        let _ = write!(s, "{x:.2},{y:.2} ");
    }
    let _ = writeln!(out, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, s.trim_end());
}

/// Splits sampled strands at chart jumps and at the gaps left for under
/// passages.
fn strokes(pts: &[([f64; 2], f64)], unders: &[([f64; 2], f64)], jump: f64) -> Vec<Vec<[f64; 2]>> {
    let mut out = Vec::new();
    let mut cur: Vec<[f64; 2]> = Vec::new();
    for (p, a) in pts {
        let hidden = unders.iter().any(|(q, b)| (a - b).abs() < 0.2 && (p[0] - q[0]).hypot(p[1] - q[1]) < GAP);
        let far = cur.last().is_some_and(|l: &[f64; 2]| (l[0] - p[0]).hypot(l[1] - p[1]) > jump);
        if hidden || far {
            if cur.len() > 1 {
                out.push(std::mem::take(&mut cur));
            }
            cur.clear();
        }
        if !hidden {
            cur.push(*p);
        }
    }
    if cur.len() > 1 {
        out.push(cur);
    }
    out
}

fn sign_label(out: &mut String, p: [f64; 2], sign: i32) {
    let (x, y) = screen(p);
    let s = if sign > 0 { "+" } else { "\u{2212}" };
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" fill="crimson">{s}</text>"#,
        x + 6.0,
        y - 6.0
    );
}

fn hyp_overlay(out: &mut String, hyp: &HypRegion, grid: usize) {
    let cell = 2.0 / grid as f64;
    let _ = writeln!(out, r##"<g fill="#bbbbbb" stroke="none">"##);
    for r in 0..grid {
        let v = 1.0 - (r as f64 + 0.5) * cell;
        let mut run: Option<usize> = None;
        for c in 0..=grid {
            let flagged = c < grid && {
                let u = -1.0 + (c as f64 + 0.5) * cell;
                let rho = u.hypot(v);
                rho <= 1.0 && {
                    let th = rho * FRAC_PI_2;
                    let q = if rho < 1e-12 {
                        [0.0, 0.0, 1.0]
                    } else {
                        [u / rho * th.sin(), v / rho * th.sin(), th.cos()]
                    };
                    let (ch, row, col) = locate(q, hyp.resolution);
                    hyp.charts[ch].flags[row * hyp.resolution + col]
                }
            };
            match (flagged, run) {
                (true, None) => run = Some(c),
                (false, Some(start)) => {
                    let (x, y) = screen([-1.0 + start as f64 * cell, v + cell / 2.0]);
                    let w = (c - start) as f64 * cell * RADIUS;
                    let _ = writeln!(out, r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{:.2}"/>"#, cell * RADIUS);
                    run = None;
                }
                _ => {}
            }
        }
    }
    let _ = writeln!(out, "</g>");
}

/// Projective diagram in the disk model with over/under gaps, crossing
/// signs, solitary nodes, and optionally the hyperbolicity raster beneath.
pub fn projective_svg(dg: &ProjDiagram, hyp: Option<&HypRegion>) -> String {
    let r = Renderer::new(dg);
    let mut out = String::new();
    header(&mut out);
    let (cx, cy) = screen([0.0, 0.0]);
    let _ = writeln!(out, r##"<circle cx="{cx}" cy="{cy}" r="{RADIUS}" fill="none" stroke="#888888" stroke-dasharray="4 3"/>"##);
    if let Some(h) = hyp {
        hyp_overlay(&mut out, h, 160);
    }
    let pts: Vec<([f64; 2], f64)> = (0..=SAMPLES)
        .map(|i| {
            let a = -FRAC_PI_2 + PI * i as f64 / SAMPLES as f64;
            (disk(r.point(a)), a)
        })
        .collect();
    let mut unders = Vec::new();
    for c in &dg.crossings {
        let u = 1 - c.over;
        let a = to_f64(&c.params[u]).atan();
        unders.push((disk(r.point(a)), a));
    }
    for s in strokes(&pts, &unders, 0.5) {
        polyline(&mut out, &s, "black");
    }
    for (c, (p, _)) in dg.crossings.iter().zip(&unders) {
        sign_label(&mut out, *p, c.sign);
    }
    for x in &dg.solitary {
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let (sx, sy) = screen(disk(x.map(|v| v / n)));
        let _ = writeln!(out, r#"<circle cx="{sx:.2}" cy="{sy:.2}" r="4" fill="steelblue"/>"#);
    }
    out.push_str("</svg>\n");
    out
}

fn basis(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let t = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d: f64 = (0..3).map(|i| t[i] * n[i]).sum();
    let a = [0, 1, 2].map(|i| t[i] - d * n[i]);
    let na = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let a = a.map(|v| v / na);
    let b = [n[1] * a[2] - n[2] * a[1], n[2] * a[0] - n[0] * a[2], n[0] * a[1] - n[1] * a[0]];
    (a, b)
}

/// Lifted diagram on the covering sphere, projected stereographically from
/// a pole away from the curve. The plane image is oriented so that drawn
/// crossings have the signs of the PD code.
pub fn lifted_svg(dg: &ProjDiagram, lift: &LiftedDiagram) -> String {
    let r = Renderer::new(dg);
    let sheet_pt = |a: f64, sheet: i32| r.point(a).map(|v| v * sheet as f64);
    let mut sphere: Vec<([f64; 3], f64, i32)> = Vec::new();
    for sheet in [1, -1] {
        for i in 0..=SAMPLES {
            let a = -FRAC_PI_2 + PI * i as f64 / SAMPLES as f64;
            sphere.push((sheet_pt(a, sheet), a, sheet));
        }
    }
    let mut candidates = Vec::new();
    for i in 0..8 {
        for j in 0..16 {
            let th = PI * (i as f64 + 0.5) / 8.0;
            let ph = 2.0 * PI * j as f64 / 16.0;
            candidates.push([th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()]);
        }
    }
    let dot = |a: &[f64; 3], b: &[f64; 3]| (0..3).map(|i| a[i] * b[i]).sum::<f64>();
    let pole = candidates
        .iter()
        .min_by(|a, b| {
            let ma = sphere.iter().map(|(x, _, _)| dot(x, a)).fold(f64::MIN, f64::max);
            let mb = sphere.iter().map(|(x, _, _)| dot(x, b)).fold(f64::MIN, f64::max);
            ma.partial_cmp(&mb).unwrap()
        })
        .copied()
        .unwrap_or([0.0, 0.0, 1.0]);
    let (ea, eb) = basis(pole);
    let stereo = |x: &[f64; 3]| {
        let k = 1.0 - dot(x, &pole);
        [dot(x, &ea) / k, dot(x, &eb) / k]
    };
    let velocity = |a: f64, sheet: i32| {
        let h = 1e-5;
        let p = stereo(&sheet_pt(a + h, sheet));
        let m = stereo(&sheet_pt(a - h, sheet));
        [p[0] - m[0], p[1] - m[1]]
    };
    // orientation: positive crossings have cross(under', over') < 0
    let mirror = lift.geometry.first().is_some_and(|g| {
        let atan = |t: f64| t.atan();
        let u = velocity(atan(g[0].0), g[0].1);
        let o = velocity(atan(g[1].0), g[1].1);
        let cr = u[0] * o[1] - u[1] * o[0];
        (cr < 0.0) != (lift.pd.crossings[0].sign > 0)
    });
    let plane: Vec<[f64; 2]> = sphere
        .iter()
        .map(|(x, _, _)| {
            let p = stereo(x);
            if mirror {
                [-p[0], p[1]]
            } else {
                p
            }
        })
        .collect();
    let scale = plane.iter().map(|p| p[0].abs().max(p[1].abs())).fold(1e-9, f64::max);
    let fit = |p: [f64; 2]| [p[0] / scale, p[1] / scale];
    let mut out = String::new();
    header(&mut out);
    let unders: Vec<([f64; 2], f64, i32)> = lift
        .geometry
        .iter()
        .map(|g| {
            let a = g[0].0.atan();
            let p = stereo(&sheet_pt(a, g[0].1));
            (fit(if mirror { [-p[0], p[1]] } else { p }), a, g[0].1)
        })
        .collect();
    let n = SAMPLES + 1;
    for (si, sheet) in [1, -1].into_iter().enumerate() {
        let pts: Vec<([f64; 2], f64)> = (0..n).map(|i| (fit(plane[si * n + i]), sphere[si * n + i].1)).collect();
        let gaps: Vec<([f64; 2], f64)> = unders.iter().filter(|u| u.2 == sheet).map(|u| (u.0, u.1)).collect();
        let color = if sheet > 0 || dg.degree % 2 == 1 { "black" } else { "darkorange" };
        for s in strokes(&pts, &gaps, 0.5) {
            polyline(&mut out, &s, color);
        }
    }
    for (c, u) in lift.pd.crossings.iter().zip(&unders) {
        sign_label(&mut out, u.0, c.sign as i32);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotdiag::{build_diagram, lift_double_cover};
    use crate::mwgen::twisted_cubic;
    use crate::projection::project;
    use crate::projgeom::ProjPoint3;

    #[test]
    fn renders_twisted_cubic() {
        let k = twisted_cubic();
        let p = ProjPoint3::from_ints([0, 1, 0, -1]);
        let dg = build_diagram(&k, &p).unwrap();
        let hyp = crate::hyperbolicity::hyp_region(&project(&k, &p).unwrap(), 32);
        let s = projective_svg(&dg, Some(&hyp));
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert!(s.contains("steelblue"));
        let dg = build_diagram(&k, &ProjPoint3::from_ints([0, 1, 0, 1])).unwrap();
        let s = projective_svg(&dg, None);
        // one crossing: the double point gap splits the strand
        assert!(s.matches("<polyline").count() >= 2);
        assert_eq!(s.matches("crimson").count(), 1);
        let lift = lift_double_cover(&dg).unwrap();
        let l = lifted_svg(&dg, &lift);
        assert_eq!(l.matches("crimson").count(), 2);
        assert_eq!(l, lifted_svg(&dg, &lift));
    }
}
