//! Hyperbolicity of plane curves with respect to points and of space curves
//! with respect to lines, plus a construction of two hyperbolic lines for an
//! MW curve.

use std::collections::{HashMap, VecDeque};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::projection::{cross3, double_points, project, DoublePointKind, DoublePointSet, PlaneProjection};
use crate::projgeom::{dot4, ProjLine3, ProjPoint2, ProjPoint3};
use crate::ratpoly::{
    complex_roots, dyadic, from_f64, interlace_check, isolate_real_roots, map_degree, rat,
    real_rooted_with_multiplicity, resultant, sign, to_f64, BinForm, Complex, Rat, UniPoly,
};
use crate::spacecurve::{Param, SpaceCurve};
use crate::writhe::generic_center;
use crate::{max_writhe, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HypWitness {
    /// Common factor of the pencil and the degree of the reduced pencil map.
    Interlacing { common_degree: usize, common_real_roots: usize, map_degree: i64 },
    /// A member `lambda P + mu Q` of the reduced pencil with too few real
    /// roots; `real_roots` counts the common factor in full.
    Violation {
        #[serde(with = "crate::ratpoly::rat_serde")]
        lambda: Rat,
        #[serde(with = "crate::ratpoly::rat_serde")]
        mu: Rat,
        real_roots: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypCertificate {
    pub point: ProjPoint2,
    /// The two lines through the point.
    pub lines: [ProjPoint2; 2],
    pub pencil: (BinForm, BinForm),
    pub verdict: bool,
    pub witness: HypWitness,
}

/// Two independent lines through `q`.
pub fn lines_through(q: &[Rat; 3]) -> [[Rat; 3]; 2] {
    let basis = [0, 1, 2].map(|i| {
        let mut e = [Rat::zero(), Rat::zero(), Rat::zero()];
        e[i] = Rat::one();
        cross3(q, &e)
    });
    let nonzero: Vec<&[Rat; 3]> = basis.iter().filter(|l| l.iter().any(|c| !c.is_zero())).collect();
    let a = nonzero[0].clone();
    let b = nonzero
        .iter()
        .skip(1)
        .find(|l| cross3(&a, l).iter().any(|c| !c.is_zero()))
        .map(|l| (*l).clone())
        .expect("point has a two-dimensional pencil");
    [a, b]
}

fn real_root_total(f: &BinForm) -> usize {
    if f.is_zero() {
        return f.degree();
    }
    isolate_real_roots(f).map(|r| r.total_multiplicity()).unwrap_or(0)
}

/// A pencil member with fewer than `m` real roots, searched between the
/// critical values of the pencil map.
fn find_violation(p: &BinForm, q: &BinForm) -> Option<(Rat, Rat, usize)> {
    let m = p.degree();
    for (l, mu) in [(Rat::one(), Rat::zero()), (Rat::zero(), Rat::one())] {
        let f = p.combine(&l, q, &mu);
        let n = real_root_total(&f);
        if n < m {
            return Some((l, mu, n));
        }
    }
    let w = &(&p.poly().derivative() * q.poly()) - &(p.poly() * &q.poly().derivative());
    let mut crit: Vec<f64> = Vec::new();
    if !w.is_zero() {
        for z in complex_roots(&w) {
            if z.im.abs() < 1e-9 {
                let qv = q.poly().eval_f64(z.re);
                if qv.abs() > 1e-300 {
                    crit.push(p.poly().eval_f64(z.re) / qv);
                }
            }
        }
    }
    let pl = p.poly().coeff(m);
    let ql = q.poly().coeff(m);
    if !ql.is_zero() {
        crit.push(to_f64(&pl) / to_f64(&ql));
    }
    crit.retain(|c| c.is_finite());
    crit.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut values: Vec<f64> = crit.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    if let (Some(lo), Some(hi)) = (crit.first(), crit.last()) {
        values.push(lo - 1.0 - lo.abs());
        values.push(hi + 1.0 + hi.abs());
    }
    values.extend((-8..=8).map(|k| k as f64));
    for a in values {
        // members P - a Q
        let a = from_f64(a, 40);
        let f = p.combine(&Rat::one(), q, &(-a.clone()));
        let n = real_root_total(&f);
        if n < m {
            return Some((Rat::one(), -a, n));
        }
    }
    None
}

/// Exact pencil test at a rational point of the plane.
///
/// Parameters mapping to `q` itself (the common factor of the pencil) count
/// as real intersections even when they are non-real, since their image is
/// the real point `q`; the reduced pencil must cover `RP¹` with full degree.
pub fn is_hyperbolic_point(pp: &PlaneProjection, q: &ProjPoint2) -> HypCertificate {
    let [l1, l2] = lines_through(q.coords());
    let p = pp.pullback(&l1);
    let r = pp.pullback(&l2);
    let g = p.gcd(&r);
    let common_real = real_root_total(&g);
    let p0 = p.div_exact(&g).expect("gcd divides");
    let r0 = r.div_exact(&g).expect("gcd divides");
    let m0 = p0.degree();
    let deg = if m0 == 0 { 0 } else { map_degree(&p0, &r0).unwrap_or(0) };
    let verdict = deg.unsigned_abs() as usize == m0;
    let witness = if verdict {
        HypWitness::Interlacing { common_degree: g.degree(), common_real_roots: common_real, map_degree: deg }
    } else {
        match find_violation(&p0, &r0) {
            Some((lambda, mu, n)) => HypWitness::Violation { lambda, mu, real_roots: n + g.degree() },
            None => HypWitness::Interlacing { common_degree: g.degree(), common_real_roots: common_real, map_degree: deg },
        }
    };
    HypCertificate {
        point: q.clone(),
        lines: [ProjPoint2::new(l1).unwrap(), ProjPoint2::new(l2).unwrap()],
        pencil: (p, r),
        verdict,
        witness,
    }
}

/// Numerical test at a point given in floating point, for points such as
/// solitary nodes whose coordinates are irrational. Known common roots
/// `t^2 - e t + f` are divided out before an exact test on the rounded
/// reduced pencil.
pub fn is_hyperbolic_point_f64(pp: &PlaneProjection, q: [f64; 3], common: Option<(f64, f64)>) -> bool {
    let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
    let q = q.map(|c| c / n);
    let k = (0..3).max_by(|&a, &b| q[a].abs().partial_cmp(&q[b].abs()).unwrap()).unwrap();
    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let lines = others.iter().map(|&j| {
        let mut l = [0.0; 3];
        l[k] = -q[j];
        l[j] = q[k];
        l
    });
    let m = pp.degree;
    let xs: Vec<Vec<f64>> = pp.x.iter().map(|p| (0..=m).map(|i| to_f64(&p.coeff(i))).collect()).collect();
    let mut forms = Vec::new();
    for l in lines {
        let mut c: Vec<f64> = (0..=m).map(|i| (0..3).map(|a| l[a] * xs[a][i]).sum()).collect();
        let mut deg = m;
        if let Some((e, f)) = common {
            c = divide_quadratic(&c, e, f);
            deg -= 2;
        }
        let scale = c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if scale == 0.0 {
            return false;
        }
        let coeffs: Vec<Rat> = c.iter().map(|v| from_f64(v / scale, 48)).collect();
        forms.push(BinForm::new(deg, UniPoly::new(coeffs)));
    }
    if forms[0].degree() == 0 {
        return true;
    }
    interlace_check(&forms[0], &forms[1]).unwrap_or(false)
}

/// Quotient of `c` (ascending) by `t^2 - e t + f`, remainder dropped.
fn divide_quadratic(c: &[f64], e: f64, f: f64) -> Vec<f64> {
    let n = c.len() - 1;
    if n < 2 {
        return vec![0.0];
    }
    let mut r = c.to_vec();
    let mut q = vec![0.0; n - 1];
    for i in (2..=n).rev() {
        let a = r[i];
        q[i - 2] = a;
        r[i] -= a;
        r[i - 1] += a * e;
        r[i - 2] -= a * f;
    }
    q
}

/// Certificate that a space curve is (or is not) hyperbolic with respect to
/// a line, via the projection from a point of the line.
#[derive(Clone, Debug, Serialize)]
pub struct LineHypCertificate {
    pub line: ProjLine3,
    pub center: ProjPoint3,
    pub image: ProjPoint2,
    pub point: HypCertificate,
    pub verdict: bool,
}

fn line_point(l: &ProjLine3, j: i64) -> [Rat; 4] {
    let (a, b) = l.points();
    let (s, u) = match j {
        0 => (rat(1), rat(0)),
        1 => (rat(0), rat(1)),
        _ => (rat(1), rat(j - 1)),
    };
    [0, 1, 2, 3].map(|i| &a[i] * &s + &b[i] * &u)
}

/// Hyperbolicity of `k` with respect to `l`, projecting from the `choice`-th
/// sample point of `l` that avoids the curve.
pub fn is_hyperbolic_line_with(k: &SpaceCurve, l: &ProjLine3, choice: usize) -> Result<LineHypCertificate> {
    let mut found = 0;
    for j in 0..64 {
        let p = line_point(l, j);
        if k.contains(&p) {
            continue;
        }
        if found < choice {
            found += 1;
            continue;
        }
        let center = ProjPoint3::new(p.clone())?;
        let pp = project(k, &center)?;
        let other = (0..4)
            .map(|i| line_point(l, j + 1 + i))
            .find(|x| {
                let y = pp.forms.clone().map(|f| dot4(&f, x));
                y.iter().any(|c| !c.is_zero())
            })
            .expect("line has a second point");
        let y = pp.forms.clone().map(|f| dot4(&f, &other));
        let image = ProjPoint2::new(y)?;
        let cert = is_hyperbolic_point(&pp, &image);
        return Ok(LineHypCertificate {
            line: l.clone(),
            center,
            image,
            verdict: cert.verdict,
            point: cert,
        });
    }
    Err(Error::DegeneratePosition("no sample point of the line avoids the curve".into()))
}

pub fn is_hyperbolic_line(k: &SpaceCurve, l: &ProjLine3) -> Result<LineHypCertificate> {
    is_hyperbolic_line_with(k, l, 0)
}

/// Real cusp parameters of a plane curve.
pub fn cusp_params(pp: &PlaneProjection) -> Vec<Param> {
    let dx = pp.x.clone().map(|p| p.derivative());
    let mut g = UniPoly::zero();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        g = g.gcd(&(&(&pp.x[i] * &dx[j]) - &(&pp.x[j] * &dx[i])));
    }
    let mut out = Vec::new();
    if !g.is_constant() {
        if let Ok(iso) = isolate_real_roots(&BinForm::new(g.deg(), g.clone())) {
            for mut r in iso.intervals {
                if g.deg() == 1 {
                    out.push(Param::Finite(-g.coeff(0) / g.coeff(1)));
                    continue;
                }
                r.refine(&g, 80);
                out.push(Param::Finite(r.midpoint()));
            }
        }
    }
    let m = pp.degree;
    let v = pp.eval(&Param::Infinity);
    let w = [0, 1, 2].map(|i| pp.x[i].coeff(m - 1));
    if cross3(&v, &w).iter().all(|c| c.is_zero()) {
        out.push(Param::Infinity);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialKind {
    Cusp,
    Solitary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum RegionShape {
    Empty,
    /// Hyperbolic only at a single special point (up to one raster cell).
    Concentrated { at: [f64; 3], kind: SpecialKind },
    /// Some component contains a flagged cell with all eight neighbours
    /// flagged, in the base raster (`zoom` 0) or in a zoomed window.
    Interior { chart: usize, cells: usize, zoom: u32 },
    /// No raster level resolves an interior cell, but an exact hyperbolic
    /// point off the curve certifies that the region has interior.
    Slender,
    /// Flagged cells without interior and away from special points.
    Thin,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartRaster {
    /// Coordinate set to 1 in this chart; the others range over `[-1, 1]`.
    pub chart: usize,
    /// Row-major flags, `flags[row * n + col]`.
    pub flags: Vec<bool>,
    /// Component id per flagged cell, -1 for unflagged.
    pub component: Vec<i32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypRegion {
    pub resolution: usize,
    pub charts: Vec<ChartRaster>,
    pub flagged: usize,
    pub shape: RegionShape,
    pub convex: bool,
    pub special_points: Vec<([f64; 3], SpecialKind, bool)>,
    /// Exact hyperbolic point off the curve. Off the curve the verdict is
    /// locally constant, so this certifies interior points.
    pub interior_witness: Option<ProjPoint2>,
}

/// Cell center coordinate `-1 + (2c+1)/n`.
fn cell_center(c: usize, n: usize) -> Rat {
    Rat::new((2 * c as i64 + 1 - n as i64).into(), (n as i64).into())
}

fn chart_point(chart: usize, u: &Rat, v: &Rat) -> [Rat; 3] {
    let (j, k) = chart_axes(chart);
    let mut q = [Rat::zero(), Rat::zero(), Rat::zero()];
    q[chart] = Rat::one();
    q[j] = u.clone();
    q[k] = v.clone();
    q
}

fn chart_axes(chart: usize) -> (usize, usize) {
    match chart {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

fn det3f(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

type RowRoot = (f64, [f64; 3], f64);

/// Row lines of a chart form the pencil `x_k - v x_chart`; the number of
/// real roots of a member changes only at critical values of `v`.
struct RowPencil {
    chart: usize,
    crit: Vec<f64>,
    /// Per interval between critical values: whether members are real-rooted.
    verdict: HashMap<usize, bool>,
}

impl RowPencil {
    fn new(pp: &PlaneProjection, chart: usize) -> RowPencil {
        let (_, k) = chart_axes(chart);
        let (a, b) = (&pp.x[k], &pp.x[chart]);
        let w = &(&a.derivative() * b) - &(a * &b.derivative());
        let mut crit = Vec::new();
        if !w.is_zero() {
            for z in complex_roots(&w) {
                if z.im.abs() < 1e-7 * (1.0 + z.re.abs()) {
                    let bv = b.eval_f64(z.re);
                    if bv.abs() > 1e-300 {
                        crit.push(a.eval_f64(z.re) / bv);
                    }
                }
            }
        }
        let m = pp.degree;
        if !b.coeff(m).is_zero() {
            crit.push(to_f64(&a.coeff(m)) / to_f64(&b.coeff(m)));
        }
        crit.retain(|c| c.is_finite());
        crit.sort_by(|x, y| x.partial_cmp(y).unwrap());
        RowPencil { chart, crit, verdict: HashMap::new() }
    }

    fn row(&mut self, pp: &PlaneProjection, v: &Rat, us: &[Rat], tests: &mut usize) -> Vec<bool> {
        let vf = to_f64(v);
        if self.crit.iter().any(|c| (c - vf).abs() <= 1e-7 * (1.0 + c.abs())) {
            return raster_row(pp, self.chart, v, us, tests);
        }
        let slot = self.crit.iter().filter(|c| **c < vf).count();
        if self.verdict.get(&slot) == Some(&false) {
            return vec![false; us.len()];
        }
        let (_, k) = chart_axes(self.chart);
        let mut l = [Rat::zero(), Rat::zero(), Rat::zero()];
        l[k] = Rat::one();
        l[self.chart] = -v.clone();
        let p = pp.pullback(&l);
        if !self.verdict.contains_key(&slot) {
            let ok = !p.is_zero() && real_rooted_with_multiplicity(&p).unwrap_or(false);
            self.verdict.insert(slot, ok);
            if !ok {
                return vec![false; us.len()];
            }
        }
        match float_roots(pp, self.chart, &p) {
            Some(roots) => row_flags(pp, self.chart, v, us, &roots, tests),
            None => raster_row(pp, self.chart, v, us, tests),
        }
    }
}

/// Roots of a real-rooted row pullback in floating point, with the local
/// sign factor of each; `None` when they cannot be separated reliably.
fn float_roots(pp: &PlaneProjection, chart: usize, p: &BinForm) -> Option<Vec<RowRoot>> {
    let (j, _) = chart_axes(chart);
    let m = pp.degree;
    let poly = p.poly();
    let deg = poly.degree()?;
    if deg + 1 < m {
        return None;
    }
    let dp = poly.derivative();
    let mut ts: Vec<f64> = Vec::new();
    for z in complex_roots(poly) {
        if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
            return None;
        }
        ts.push(z.re);
    }
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if ts.windows(2).any(|w| (w[1] - w[0]).abs() < 1e-6 * (1.0 + w[0].abs())) {
        return None;
    }
    let mut roots = Vec::with_capacity(m);
    for t in ts {
        let slope = dp.eval_f64(t);
        if slope == 0.0 {
            return None;
        }
        let x = pp.eval_f64(t);
        let u = if x[chart].abs() < 1e-300 { f64::INFINITY } else { x[j] / x[chart] };
        roots.push((u, x, slope.signum()));
    }
    if deg + 1 == m {
        let lead = [0, 1, 2].map(|i| to_f64(&pp.x[i].coeff(m)));
        let u = if lead[chart].abs() < 1e-300 { f64::INFINITY } else { lead[j] / lead[chart] };
        // chart s = 1/t reverses orientation
        roots.push((u, lead, -to_f64(&poly.coeff(m - 1)).signum()));
    }
    Some(roots)
}

/// Flags of a row whose line pulls back to `d` simple real roots: that
/// line is a regular value of the pencil map of every row point `q`, and
/// `q` is hyperbolic iff the local degrees at the roots agree. The local
/// degree at `t_i` is the sign of `p'(t_i) det[q, e_k, x(t_i)]`.
fn row_flags(pp: &PlaneProjection, chart: usize, v: &Rat, us: &[Rat], roots: &[RowRoot], tests: &mut usize) -> Vec<bool> {
    let (j, k) = chart_axes(chart);
    let mut ek = [0.0; 3];
    ek[k] = 1.0;
    let vf = to_f64(v);
    let mut out = Vec::with_capacity(us.len());
    for u in us {
        let uf = to_f64(u);
        let near = roots.iter().any(|b| b.0.is_finite() && (b.0 - uf).abs() <= 1e-9 * (1.0 + b.0.abs()));
        let flag = if near {
            *tests += 1;
            let q = ProjPoint2::new(chart_point(chart, u, v)).unwrap();
            is_hyperbolic_point(pp, &q).verdict
        } else {
            let mut q = [0.0; 3];
            q[chart] = 1.0;
            q[j] = uf;
            q[k] = vf;
            let first = roots[0].2 * det3f(&q, &ek, &roots[0].1).signum();
            roots.iter().all(|(_, x, s)| s * det3f(&q, &ek, x).signum() == first)
        };
        out.push(flag);
    }
    out
}

/// Exact-path raster row: isolation of the row pullback's real roots with
/// rational refinement, exact tests where the row is not regular.
fn raster_row(pp: &PlaneProjection, chart: usize, v: &Rat, us: &[Rat], tests: &mut usize) -> Vec<bool> {
    let (j, k) = chart_axes(chart);
    let n = us.len();
    let mut l = [Rat::zero(), Rat::zero(), Rat::zero()];
    l[k] = Rat::one();
    l[chart] = -v.clone();
    let p = pp.pullback(&l);
    let mut roots: Vec<RowRoot> = Vec::new();
    let mut regular = false;
    if !p.is_zero() {
        if !real_rooted_with_multiplicity(&p).unwrap_or(false) {
            return vec![false; n];
        }
        let Ok(iso) = isolate_real_roots(&p) else { return exact_row(pp, chart, v, us, tests) };
        regular = iso.infinity_multiplicity <= 1 && iso.intervals.iter().all(|r| r.multiplicity == 1);
        let poly = p.poly();
        let dp = poly.derivative();
        for mut r in iso.intervals {
            r.refine(poly, 52);
            let t = r.approx();
            let slope = dp.eval_f64(t);
            if slope == 0.0 {
                regular = false;
            }
            let x = pp.eval_f64(t);
            let u = if x[chart].abs() < 1e-300 { f64::INFINITY } else { x[j] / x[chart] };
            roots.push((u, x, slope.signum()));
        }
        if iso.infinity_multiplicity == 1 {
            let m = pp.degree;
            let lead = [0, 1, 2].map(|i| to_f64(&pp.x[i].coeff(m)));
            let u = if lead[chart].abs() < 1e-300 { f64::INFINITY } else { lead[j] / lead[chart] };
            roots.push((u, lead, -to_f64(&poly.coeff(m - 1)).signum()));
        }
    }
    if !regular {
        return exact_row(pp, chart, v, us, tests);
    }
    row_flags(pp, chart, v, us, &roots, tests)
}

fn exact_row(pp: &PlaneProjection, chart: usize, v: &Rat, us: &[Rat], tests: &mut usize) -> Vec<bool> {
    us.iter()
        .map(|u| {
            *tests += 1;
            let q = ProjPoint2::new(chart_point(chart, u, v)).unwrap();
            is_hyperbolic_point(pp, &q).verdict
        })
        .collect()
}

fn label_components(flags: &[bool], n: usize) -> (Vec<i32>, usize) {
    let mut comp = vec![-1i32; n * n];
    let mut next = 0;
    for start in 0..n * n {
        if !flags[start] || comp[start] >= 0 {
            continue;
        }
        let mut queue = VecDeque::from([start]);
        comp[start] = next;
        while let Some(c) = queue.pop_front() {
            let (r, col) = ((c / n) as i64, (c % n) as i64);
            for dr in -1..=1 {
                for dc in -1..=1 {
                    let (rr, cc) = (r + dr, col + dc);
                    if rr < 0 || cc < 0 || rr >= n as i64 || cc >= n as i64 {
                        continue;
                    }
                    let idx = rr as usize * n + cc as usize;
                    if flags[idx] && comp[idx] < 0 {
                        comp[idx] = next;
                        queue.push_back(idx);
                    }
                }
            }
        }
        next += 1;
    }
    (comp, next as usize)
}

fn interior_cells(flags: &[bool], n: usize) -> usize {
    let mut count = 0;
    for r in 1..n.saturating_sub(1) {
        for c in 1..n - 1 {
            let all = (-1i64..=1).all(|dr| {
                (-1i64..=1).all(|dc| flags[(r as i64 + dr) as usize * n + (c as i64 + dc) as usize])
            });
            if all {
                count += 1;
            }
        }
    }
    count
}

/// Sampled midpoint test per connected component: the midpoint of two
/// flagged cells must be flagged or adjacent to a flagged cell.
pub fn discrete_convexity(raster: &ChartRaster, n: usize, samples: usize, seed: u64) -> bool {
    let mut by_comp: HashMap<i32, Vec<usize>> = HashMap::new();
    for (i, &c) in raster.component.iter().enumerate() {
        if c >= 0 {
            by_comp.entry(c).or_default().push(i);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let near_flag = |r: i64, c: i64| {
        (-1..=1).any(|dr| {
            (-1..=1).any(|dc| {
                let (rr, cc) = (r + dr, c + dc);
                rr >= 0 && cc >= 0 && rr < n as i64 && cc < n as i64 && raster.flags[rr as usize * n + cc as usize]
            })
        })
    };
    for cells in by_comp.values() {
        if cells.len() < 3 {
            continue;
        }
        for _ in 0..samples {
            let a = cells[rng.gen_range(0..cells.len())];
            let b = cells[rng.gen_range(0..cells.len())];
            let (ra, ca) = ((a / n) as i64, (a % n) as i64);
            let (rb, cb) = ((b / n) as i64, (b % n) as i64);
            if !near_flag((ra + rb) / 2, (ca + cb) / 2) {
                return false;
            }
        }
    }
    true
}

/// Locates a plane point in the max-norm chart cover: chart and cell.
pub fn locate(q: [f64; 3], n: usize) -> (usize, usize, usize) {
    let chart = (0..3).max_by(|&a, &b| q[a].abs().partial_cmp(&q[b].abs()).unwrap()).unwrap();
    let (j, k) = chart_axes(chart);
    let cell = |x: f64| (((x / q[chart] + 1.0) * 0.5 * n as f64).floor() as i64).clamp(0, n as i64 - 1) as usize;
    (chart, cell(q[k]), cell(q[j]))
}

fn special_points(pp: &PlaneProjection, set: Option<&DoublePointSet>) -> Vec<([f64; 3], SpecialKind, bool)> {
    let mut out = Vec::new();
    for t in cusp_params(pp) {
        let x = pp.eval(&t);
        let ok = ProjPoint2::new(x.clone()).map(|q| is_hyperbolic_point(pp, &q).verdict).unwrap_or(false);
        out.push((x.clone().map(|c| to_f64(&c)), SpecialKind::Cusp, ok));
    }
    let own = if set.is_none() { double_points(pp).ok() } else { None };
    if let Some(set) = set.or(own.as_ref()) {
        for dp in set.points.iter().filter(|d| d.kind == DoublePointKind::Solitary) {
            let t = Complex::new(dp.params[0].re, dp.params[0].im);
            let x = pp.eval_complex(t);
            let kx = (0..3).max_by(|&a, &b| x[a].norm().partial_cmp(&x[b].norm()).unwrap()).unwrap();
            let q = [0, 1, 2].map(|i| (x[i] / x[kx]).re);
            let ok = is_hyperbolic_point_f64(pp, q, Some((dp.e.re, dp.f.re)));
            out.push((q, SpecialKind::Solitary, ok));
        }
    }
    out
}

/// Raster of hyperbolicity verdicts over the three max-norm charts.
pub fn hyp_region(pp: &PlaneProjection, resolution: usize) -> HypRegion {
    hyp_region_with(pp, None, resolution)
}

/// Cell centers of `n` equal cells covering `[lo, hi]`.
fn centers(lo: &Rat, hi: &Rat, n: usize) -> Vec<Rat> {
    let w = (hi - lo) / Rat::from_integer((2 * n as i64).into());
    (0..n).map(|c| lo + &w * Rat::from_integer((2 * c as i64 + 1).into())).collect()
}

fn cell_edge(i: usize, n: usize) -> Rat {
    Rat::new((2 * i as i64 - n as i64).into(), (n as i64).into())
}

const ZOOM_CELLS: usize = 64;

/// Re-rasters the bounding box (plus a margin) of a flagged component at
/// `ZOOM_CELLS` per side, up to four times; returns interior cells found
/// and the zoom level.
fn zoom_interior(pp: &PlaneProjection, chart: usize, n: usize, cells: &[usize], tests: &mut usize) -> Option<(usize, u32)> {
    let r0 = cells.iter().map(|i| i / n).min()?;
    let r1 = cells.iter().map(|i| i / n).max()?;
    let c0 = cells.iter().map(|i| i % n).min()?;
    let c1 = cells.iter().map(|i| i % n).max()?;
    let mut win = [
        cell_edge(c0.saturating_sub(2), n),
        cell_edge((c1 + 3).min(n), n),
        cell_edge(r0.saturating_sub(2), n),
        cell_edge((r1 + 3).min(n), n),
    ];
    let m = ZOOM_CELLS;
    let mut pencil = RowPencil::new(pp, chart);
    for level in 1..=4u32 {
        let us = centers(&win[0], &win[1], m);
        let vs = centers(&win[2], &win[3], m);
        let mut flags = Vec::with_capacity(m * m);
        for v in &vs {
            flags.extend(pencil.row(pp, v, &us, tests));
        }
        let inner = interior_cells(&flags, m);
        if inner > 0 {
            return Some((inner, level));
        }
        let hit: Vec<usize> = (0..m * m).filter(|&i| flags[i]).collect();
        if hit.is_empty() {
            // nothing seen yet: shrink around the window center
            let two = Rat::from_integer(2.into());
            let eight = Rat::from_integer(8.into());
            let (cu, cv) = ((&win[0] + &win[1]) / &two, (&win[2] + &win[3]) / &two);
            let (hu, hv) = ((&win[1] - &win[0]) / &eight, (&win[3] - &win[2]) / &eight);
            win = [&cu - &hu, &cu + &hu, &cv - &hv, &cv + &hv];
            continue;
        }
        let (a0, a1) = (hit.iter().map(|i| i % m).min()?, hit.iter().map(|i| i % m).max()?);
        let (b0, b1) = (hit.iter().map(|i| i / m).min()?, hit.iter().map(|i| i / m).max()?);
        let du = (&win[1] - &win[0]) / Rat::from_integer((m as i64).into());
        let dv = (&win[3] - &win[2]) / Rat::from_integer((m as i64).into());
        let at = |base: &Rat, step: &Rat, k: i64| base + step * Rat::from_integer(k.into());
        win = [
            at(&win[0], &du, a0 as i64 - 2),
            at(&win[0], &du, a1 as i64 + 3),
            at(&win[2], &dv, b0 as i64 - 2),
            at(&win[2], &dv, b1 as i64 + 3),
        ];
    }
    None
}

fn exact_witness(pp: &PlaneProjection, q: [Rat; 3]) -> Option<ProjPoint2> {
    let q = ProjPoint2::new(q).ok()?;
    (!pp.contains(q.coords()) && is_hyperbolic_point(pp, &q).verdict).then_some(q)
}

/// Exact interior certificate: an interior raster cell center, or a point
/// in one of the four wedges at a crossing (small loops are thin there).
fn interior_witness(pp: &PlaneProjection, set: Option<&DoublePointSet>, charts: &[ChartRaster], n: usize) -> Option<ProjPoint2> {
    for c in charts {
        let mut tried = 0;
        for r in 1..n.saturating_sub(1) {
            for col in 1..n - 1 {
                let all = (-1i64..=1).all(|dr| {
                    (-1i64..=1).all(|dc| c.flags[(r as i64 + dr) as usize * n + (col as i64 + dc) as usize])
                });
                if all {
                    if let Some(q) = exact_witness(pp, chart_point(c.chart, &cell_center(col, n), &cell_center(r, n))) {
                        return Some(q);
                    }
                    tried += 1;
                    if tried >= 4 {
                        break;
                    }
                }
            }
        }
    }
    let set = set?;
    if set.count(DoublePointKind::Solitary) > 0 {
        return None;
    }
    for dp in set.crossings() {
        let (s, t) = (dp.params[0].re, dp.params[1].re);
        let k = (0..3).max_by(|&a, &b| dp.image[a].abs().partial_cmp(&dp.image[b].abs()).unwrap()).unwrap();
        // representative with positive k-th coordinate near the node
        let unit = |tau: f64| {
            let x = pp.eval_f64(tau);
            let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let sg = if x[k] < 0.0 { -1.0 } else { 1.0 };
            x.map(|v| sg * v / nx)
        };
        for e in (3..=27).step_by(3) {
            let delta = (0.5f64).powi(e);
            for (a, b) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let x = unit(s + a * delta);
                let y = unit(t + b * delta);
                let m = [0, 1, 2].map(|i| from_f64(x[i] + y[i], 60));
                if let Some(q) = exact_witness(pp, m) {
                    return Some(q);
                }
            }
        }
    }
    None
}

/// As [`hyp_region`], reusing already computed double points.
pub fn hyp_region_with(pp: &PlaneProjection, set: Option<&DoublePointSet>, resolution: usize) -> HypRegion {
    let n = resolution.max(2);
    let mut charts = Vec::new();
    let mut tests = 0;
    let mut best_interior = (0usize, 0usize);
    let mut flagged = 0;
    let us: Vec<Rat> = (0..n).map(|c| cell_center(c, n)).collect();
    for chart in 0..3 {
        let mut pencil = RowPencil::new(pp, chart);
        let mut flags = Vec::with_capacity(n * n);
        for row in 0..n {
            flags.extend(pencil.row(pp, &cell_center(row, n), &us, &mut tests));
        }
        flagged += flags.iter().filter(|f| **f).count();
        let (component, _) = label_components(&flags, n);
        let inner = interior_cells(&flags, n);
        if inner > best_interior.1 {
            best_interior = (chart, inner);
        }
        charts.push(ChartRaster { chart, flags, component });
    }
    let specials = special_points(pp, set);
    let convex = charts.iter().all(|c| discrete_convexity(c, n, 400, c.chart as u64));
    let hyp_special: Vec<&([f64; 3], SpecialKind, bool)> = specials.iter().filter(|s| s.2).collect();
    let near_special = |chart: usize, idx: usize| {
        hyp_special.iter().any(|(q, _, _)| {
            let (c0, r0, col0) = locate(*q, n);
            let (r, col) = (idx / n, idx % n);
            c0 == chart && r.abs_diff(r0) <= 1 && col.abs_diff(col0) <= 1
        })
    };
    let mut shape = None;
    if best_interior.1 > 0 {
        shape = Some(RegionShape::Interior { chart: best_interior.0, cells: best_interior.1, zoom: 0 });
    } else {
        // small components away from special points: look closer
        'outer: for c in &charts {
            let mut by_comp: HashMap<i32, Vec<usize>> = HashMap::new();
            for (i, &id) in c.component.iter().enumerate() {
                if id >= 0 && !near_special(c.chart, i) {
                    by_comp.entry(id).or_default().push(i);
                }
            }
            let mut comps: Vec<Vec<usize>> = by_comp.into_values().collect();
            comps.sort();
            for cells in comps.iter().take(8) {
                if let Some((inner, level)) = zoom_interior(pp, c.chart, n, cells, &mut tests) {
                    shape = Some(RegionShape::Interior { chart: c.chart, cells: inner, zoom: level });
                    break 'outer;
                }
            }
        }
    }
    if shape.is_none() && flagged == 0 {
        // regions smaller than a cell sit inside small loops at crossings
        let own = if set.is_none() { double_points(pp).ok() } else { None };
        if let Some(set) = set.or(own.as_ref()) {
            for dp in set.crossings().take(16) {
                let (chart, r, c) = locate(dp.image, n);
                if let Some((inner, level)) = zoom_interior(pp, chart, n, &[r * n + c], &mut tests) {
                    shape = Some(RegionShape::Interior { chart, cells: inner, zoom: level });
                    break;
                }
            }
        }
    }
    let own = if set.is_none() { double_points(pp).ok() } else { None };
    let interior_witness = interior_witness(pp, set.or(own.as_ref()), &charts, n);
    if shape.is_none() && interior_witness.is_some() {
        shape = Some(RegionShape::Slender);
    }
    let shape = shape.unwrap_or_else(|| {
        let all_near = charts
            .iter()
            .all(|c| c.flags.iter().enumerate().all(|(i, f)| !f || near_special(c.chart, i)));
        match (hyp_special.first(), flagged, all_near) {
            (Some(s), _, true) => RegionShape::Concentrated { at: s.0, kind: s.1.clone() },
            (None, 0, _) => RegionShape::Empty,
            _ => RegionShape::Thin,
        }
    });
    HypRegion { resolution: n, charts, flagged, shape, convex, special_points: specials, interior_witness }
}

#[derive(Clone, Debug, Serialize)]
pub struct HyperbolicLines {
    pub l1: ProjLine3,
    pub l2: ProjLine3,
    #[serde(with = "crate::ratpoly::rat_serde")]
    pub base_param: Rat,
    /// Point `p0` on the tangent line at the base point.
    pub p0: ProjPoint3,
    /// Points of `l1`, `l2` near `p0`, on opposite sides of the osculating plane.
    pub p1: ProjPoint3,
    pub p2: ProjPoint3,
    pub sides: [i32; 2],
    #[serde(with = "crate::ratpoly::rat_serde")]
    pub epsilon: Rat,
    pub l1_certificate: LineHypCertificate,
    pub l2_certificate: LineHypCertificate,
    /// Resultant of two plane pullbacks through `l1` (nonzero: `l1` misses K).
    #[serde(with = "crate::ratpoly::rat_serde")]
    pub l1_resultant: Rat,
    /// `t^2 + b t + c`: common factor of the plane pullbacks through `l2`.
    pub l2_common_factor: UniPoly,
    pub attempts: usize,
}

/// Taylor coefficients of the curve at `t0`: `e_k = γ^(k)(t0)/k!`.
fn taylor_frame(k: &SpaceCurve, t0: &Rat) -> Vec<[Rat; 4]> {
    let shifted: Vec<UniPoly> = k.y().iter().map(|p| p.compose_linear(&Rat::one(), t0)).collect();
    (0..=k.degree()).map(|i| [0, 1, 2, 3].map(|j| shifted[j].coeff(i))).collect()
}

fn lincomb(terms: &[(Rat, &[Rat; 4])]) -> [Rat; 4] {
    let mut out = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
    for (c, v) in terms {
        for i in 0..4 {
            out[i] += c * &v[i];
        }
    }
    out
}

fn det4(m: [[Rat; 4]; 4]) -> Rat {
    crate::ratpoly::det(m.iter().map(|r| r.to_vec()).collect())
}

/// Pullbacks of two independent planes containing the line.
pub fn plane_pullbacks(k: &SpaceCurve, l: &ProjLine3) -> (BinForm, BinForm) {
    let (a, b) = l.points();
    let mut planes = Vec::new();
    for i in 0..4 {
        let mut e = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
        e[i] = Rat::one();
        if let Ok(h) = crate::projgeom::plane_through(&a, &b, &e) {
            let c = h.coeffs().clone();
            if planes.iter().all(|p: &[Rat; 4]| crate::projgeom::rank(&[p.clone(), c.clone()]) == 2) {
                planes.push(c);
            }
        }
        if planes.len() == 2 {
            break;
        }
    }
    let f = |h: &[Rat; 4]| BinForm::new(k.degree(), crate::projection::compose_form(k, h));
    (f(&planes[0]), f(&planes[1]))
}

fn homogeneous_resultant(p: &BinForm, q: &BinForm) -> Rat {
    if p.infinity_multiplicity() > 0 && q.infinity_multiplicity() > 0 {
        return Rat::zero();
    }
    let d = p.degree();
    let pr = p.poly().reversed(d);
    let qr = q.poly().reversed(d);
    resultant(&pr, &qr).unwrap_or_else(|_| Rat::zero())
}

/// Two hyperbolic lines near the tangent line at a point of an MW curve: one
/// disjoint from the curve, one meeting it in a conjugate pair.
pub fn find_hyperbolic_lines(k: &SpaceCurve, seed: u64, budget: usize) -> Result<HyperbolicLines> {
    let d = k.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (_, _, set) = generic_center(k, &mut rng, 64)?;
    let w: i64 = set.points.iter().map(|p| p.sign as i64).sum();
    if w != max_writhe(d) {
        return Err(Error::NotMW(format!("writhe {w} at a generic center, expected {}", max_writhe(d))));
    }
    let wr = k.wronskian();
    let bases = [0i64, 1, -1, 2, -2, 3];
    let mut attempts = 0;
    let mut diag = Vec::new();
    for b in bases {
        let t0 = rat(b);
        if wr.eval(&t0).is_zero() {
            continue;
        }
        let e = taylor_frame(k, &t0);
        let frame_det = det4([e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()]);
        for j in 1..=budget {
            attempts += 1;
            let eps = dyadic(j as u32);
            let eps2 = &eps * &eps;
            // l1 through e0 + b e2 and e1 + v e3 with 0 < b < v
            let a1 = lincomb(&[(Rat::one(), &e[0]), (eps2.clone(), &e[2])]);
            let p1 = lincomb(&[(Rat::one(), &e[1]), (&eps2 * rat(2), &e[3])]);
            let Ok(l1) = ProjLine3::through(&a1, &p1) else { continue };
            // l2 through γ(t0 ± iε): real and imaginary parts
            let mut re = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
            let mut im = re.clone();
            let mut pow = Rat::one();
            for (i, ek) in e.iter().enumerate() {
                let s = if (i / 2) % 2 == 0 { Rat::one() } else { -Rat::one() };
                for c in 0..4 {
                    if i % 2 == 0 {
                        re[c] += &s * &pow * &ek[c];
                    } else {
                        im[c] += &s * &pow * &ek[c];
                    }
                }
                pow = &pow * &eps;
            }
            // im carries a factor ε; p2 = im / ε lies near e1
            let p2: [Rat; 4] = im.clone().map(|c| c / &eps);
            let Ok(l2) = ProjLine3::through(&re, &p2) else { continue };

            let (f1, g1) = plane_pullbacks(k, &l1);
            let res = homogeneous_resultant(&f1, &g1);
            if res.is_zero() {
                diag.push(format!("t0={b} eps=2^-{j}: l1 meets K"));
                continue;
            }
            let (f2, g2) = plane_pullbacks(k, &l2);
            let common = f2.gcd(&g2);
            let quad = UniPoly::new(vec![&t0 * &t0 + &eps2, -(&t0 * rat(2)), Rat::one()]);
            if common.degree() != 2 || common.poly().monic() != quad {
                diag.push(format!("t0={b} eps=2^-{j}: l2 meets K off the conjugate pair"));
                continue;
            }
            let c1 = is_hyperbolic_line(k, &l1)?;
            let c2 = is_hyperbolic_line(k, &l2)?;
            if !(c1.verdict && c2.verdict) {
                diag.push(format!("t0={b} eps=2^-{j}: hyperbolic l1={} l2={}", c1.verdict, c2.verdict));
                continue;
            }
            let side = |p: &[Rat; 4]| {
                sign(&det4([e[0].clone(), e[1].clone(), e[2].clone(), p.clone()])) * sign(&frame_det)
            };
            let sides = [side(&p1), side(&p2)];
            return Ok(HyperbolicLines {
                l1,
                l2,
                base_param: t0,
                p0: ProjPoint3::new(e[1].clone())?,
                p1: ProjPoint3::new(p1)?,
                p2: ProjPoint3::new(p2)?,
                sides,
                epsilon: eps,
                l1_certificate: c1,
                l2_certificate: c2,
                l1_resultant: res,
                l2_common_factor: quad,
                attempts,
            });
        }
    }
    Err(Error::SearchFailed(format!(
        "{attempts} perturbations tried; last: {}",
        diag.last().cloned().unwrap_or_default()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mwgen::twisted_cubic;

    fn cuspidal() -> PlaneProjection {
        project(&twisted_cubic(), &ProjPoint3::from_ints([0, 1, 0, 0])).unwrap()
    }

    #[test]
    fn cusp_point_is_hyperbolic() {
        let pp = cuspidal();
        let cusp = pp.eval(&Param::int(0));
        assert!(is_hyperbolic_point(&pp, &ProjPoint2::new(cusp).unwrap()).verdict);
        for q in [[1, 1, 0], [1, 0, 1], [2, 1, 1], [0, 0, 1], [3, -1, 2]] {
            let c = is_hyperbolic_point(&pp, &ProjPoint2::from_ints(q));
            assert!(!c.verdict, "{q:?}");
            assert!(!matches!(c.witness, HypWitness::Interlacing { .. }));
        }
    }

    #[test]
    fn conic_has_two_sides() {
        let pp = project(&twisted_cubic(), &ProjPoint3::from_ints([1, 0, 0, 0])).unwrap();
        assert_eq!(pp.degree, 2);
        let a = pp.eval(&Param::int(1));
        let b = pp.eval(&Param::int(-1));
        let plus = [0, 1, 2].map(|i| &a[i] + &b[i]);
        let minus = [0, 1, 2].map(|i| &a[i] - &b[i]);
        let vp = is_hyperbolic_point(&pp, &ProjPoint2::new(plus).unwrap()).verdict;
        let vm = is_hyperbolic_point(&pp, &ProjPoint2::new(minus).unwrap()).verdict;
        assert!(vp ^ vm);
    }

    #[test]
    fn node_is_hyperbolic() {
        let pp = project(&twisted_cubic(), &ProjPoint3::from_ints([0, 1, 0, 1])).unwrap();
        let node = pp.eval(&Param::int(1));
        assert!(is_hyperbolic_point(&pp, &ProjPoint2::new(node).unwrap()).verdict);
    }

    #[test]
    fn violation_witness_found() {
        let pp = cuspidal();
        let c = is_hyperbolic_point(&pp, &ProjPoint2::from_ints([1, 1, 1]));
        match c.witness {
            HypWitness::Violation { real_roots, .. } => assert!(real_roots < 3),
            w => panic!("{w:?}"),
        }
    }

    #[test]
    fn tangent_line_is_hyperbolic() {
        let k = twisted_cubic();
        let t = crate::spacecurve::tangent_line(&k, &Param::int(0)).unwrap();
        for choice in 0..5 {
            assert!(is_hyperbolic_line_with(&k, &t, choice).unwrap().verdict);
        }
    }

    #[test]
    fn region_of_cuspidal_cubic() {
        let r = hyp_region(&cuspidal(), 32);
        assert!(matches!(r.shape, RegionShape::Concentrated { kind: SpecialKind::Cusp, .. }), "{:?}", r.shape);
    }

    #[test]
    fn lines_for_twisted_cubic() {
        let h = find_hyperbolic_lines(&twisted_cubic(), 0, 16).unwrap();
        assert_eq!(h.sides[0], -h.sides[1]);
        assert!(!h.l1_resultant.is_zero());
    }

    #[test]
    fn regions_of_nodal_projections() {
        let k = twisted_cubic();
        let u1 = project(&k, &ProjPoint3::from_ints([0, 1, 0, 1])).unwrap();
        let r = hyp_region(&u1, 256);
        assert!(matches!(r.shape, RegionShape::Interior { .. }), "{:?}", r.shape);
        assert!(r.convex);
        let u2 = project(&k, &ProjPoint3::from_ints([0, 1, 0, -1])).unwrap();
        let r = hyp_region(&u2, 256);
        assert!(matches!(r.shape, RegionShape::Concentrated { kind: SpecialKind::Solitary, .. }), "{:?}", r.shape);
    }
}
