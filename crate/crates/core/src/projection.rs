//! Plane projections `C_p` of a space curve and their double points.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::projgeom::{dot4, projection_map, ProjPoint3};
use crate::ratpoly::{
    complex_roots, det, isolate_roots_of, rat, sign, sylvester_resultant_bi, to_f64, BiPoly,
    BinForm, Complex, Rat, RootInterval, UniPoly,
};
use crate::spacecurve::{Param, SpaceCurve};
use crate::{max_writhe, Error, Result};

/// Global orientation of the solitary-node sign, fixed by calibration on
/// the twisted cubic.
const SOLITARY_ORIENTATION: i32 = 1;

#[derive(Clone, Debug)]
pub struct PlaneProjection {
    pub center: ProjPoint3,
    pub curve: SpaceCurve,
    /// Linear forms on R⁴ giving the plane coordinates.
    pub forms: [[Rat; 4]; 3],
    /// Plane parametrization after cancelling the common factor.
    pub x: [UniPoly; 3],
    pub degree: usize,
    /// Parameter of the center when it lies on the curve.
    pub center_param: Option<Param>,
}

/// Projection from a real point.
pub fn project(k: &SpaceCurve, p: &ProjPoint3) -> Result<PlaneProjection> {
    let forms = projection_map(p);
    let d = k.degree();
    let raw: Vec<UniPoly> = forms
        .iter()
        .map(|f| (0..4).fold(UniPoly::zero(), |acc, j| &acc + &k.y()[j].scale(&f[j])))
        .collect();
    if raw.iter().all(|r| r.is_zero()) {
        return Err(Error::DegenerateParametrization("projection is constant".into()));
    }
    let g = raw.iter().fold(UniPoly::zero(), |g, r| g.gcd(r));
    let x: Vec<UniPoly> = raw.iter().map(|r| r.exact_div(&g).unwrap()).collect();
    let degree = x.iter().map(|r| r.deg()).max().unwrap();
    let inf_drop = d - g.deg() - degree;
    let center_param = if g.deg() == 1 {
        Some(Param::Finite(-g.coeff(0) / g.coeff(1)))
    } else if g.deg() > 1 {
        return Err(Error::DegenerateParametrization(format!("center has several preimages ({g})")));
    } else if inf_drop > 0 {
        Some(Param::Infinity)
    } else {
        None
    };
    if g.deg() + inf_drop > 1 {
        return Err(Error::DegenerateParametrization("center is a singular point".into()));
    }
    if degree == 0 {
        return Err(Error::DegenerateParametrization("image is a point".into()));
    }
    let rows: Vec<[Rat; 4]> = x
        .iter()
        .map(|r| {
            let mut v: [Rat; 4] = Default::default();
            for (i, c) in r.coeffs().iter().enumerate().take(4) {
                v[i] = c.clone();
            }
            v
        })
        .collect();
    let full_rank = crate::projgeom::rank(&rows) == 3 || degree == 1 || higher_rank(&x);
    if !full_rank {
        return Err(Error::DegenerateParametrization("image lies on a line".into()));
    }
    Ok(PlaneProjection {
        center: p.clone(),
        curve: k.clone(),
        forms,
        x: x.try_into().unwrap(),
        degree,
        center_param,
    })
}

fn higher_rank(x: &[UniPoly]) -> bool {
    // rank of the full coefficient matrix, for degrees above 3
    let n = x.iter().map(|r| r.deg() + 1).max().unwrap();
    let m: Vec<Vec<Rat>> = x.iter().map(|r| (0..n).map(|k| r.coeff(k)).collect()).collect();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let sub: Vec<Vec<Rat>> =
                    m.iter().map(|row| vec![row[a].clone(), row[b].clone(), row[c].clone()]).collect();
                if !det(sub).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

impl PlaneProjection {
    pub fn form(&self, i: usize) -> BinForm {
        BinForm::new(self.degree, self.x[i].clone())
    }

    pub fn eval(&self, t: &Param) -> [Rat; 3] {
        match t {
            Param::Finite(t) => [0, 1, 2].map(|i| self.x[i].eval(t)),
            Param::Infinity => [0, 1, 2].map(|i| self.x[i].coeff(self.degree)),
        }
    }

    pub fn eval_f64(&self, t: f64) -> [f64; 3] {
        [0, 1, 2].map(|i| self.x[i].eval_f64(t))
    }

    pub fn eval_complex(&self, t: Complex) -> [Complex; 3] {
        [0, 1, 2].map(|i| self.x[i].eval_complex(t))
    }

    /// Image of the center when it lies on the curve.
    pub fn center_image(&self) -> Option<[Rat; 3]> {
        self.center_param.as_ref().map(|t| self.eval(t))
    }

    /// Pullback of the plane line `l · x = 0` as a binary form of degree m.
    pub fn pullback(&self, l: &[Rat; 3]) -> BinForm {
        let p = (0..3).fold(UniPoly::zero(), |acc, i| &acc + &self.x[i].scale(&l[i]));
        BinForm::new(self.degree, p)
    }

    /// True when the plane point lies on the image curve (complex parameters
    /// included).
    pub fn contains(&self, q: &[Rat; 3]) -> bool {
        let mut g = UniPoly::zero();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            g = g.gcd(&(&self.x[i].scale(&q[j]) - &self.x[j].scale(&q[i])));
        }
        if g.is_zero() || !g.is_constant() {
            return true;
        }
        let v = self.eval(&Param::Infinity);
        cross3(&v, q).iter().all(|c| c.is_zero())
    }
}

pub fn cross3(a: &[Rat; 3], b: &[Rat; 3]) -> [Rat; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DoublePointKind {
    Crossing,
    Solitary,
    ImaginaryPair,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl From<Complex> for C64 {
    fn from(z: Complex) -> C64 {
        C64 { re: z.re, im: z.im }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoublePoint {
    pub kind: DoublePointKind,
    /// `e = s + t`, `f = s t`.
    pub e: C64,
    pub f: C64,
    /// Both parameters; real ones carry an isolating interval.
    pub params: [C64; 2],
    pub intervals: Option<[RootInterval; 2]>,
    /// Normalized image point (real for crossings and solitary nodes).
    pub image: [f64; 3],
    pub sign: i32,
    /// Index into `params` of the over strand, for crossings.
    pub over: Option<usize>,
}

impl DoublePoint {
    pub fn is_real(&self) -> bool {
        self.kind != DoublePointKind::ImaginaryPair
    }

    /// Exact rational approximations of the two real parameters.
    pub fn real_params(&self) -> Option<[Rat; 2]> {
        self.intervals.as_ref().map(|iv| [iv[0].midpoint(), iv[1].midpoint()])
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GenericityReport {
    pub has_cusp: bool,
    pub has_tangential_pair: bool,
    pub has_triple_point: bool,
    /// For a center on the curve: its image is also the image of another
    /// parameter (the tangent line meets the curve again).
    pub base_point_on_curve: bool,
    /// A double point involves the parameter `t = ∞`.
    pub parameter_at_infinity: bool,
}

impl GenericityReport {
    pub fn is_generic(&self) -> bool {
        !(self.has_cusp
            || self.has_tangential_pair
            || self.has_triple_point
            || self.base_point_on_curve
            || self.parameter_at_infinity)
    }
}

/// Affine chart of RP³ adapted to the projection: the plane at infinity
/// contains the center, `(x1, x2)` are affine plane coordinates and `x3`
/// runs along the fibers. Positively oriented.
#[derive(Clone, Debug, PartialEq)]
pub struct SignChart {
    /// Plane covectors `h, a, b` (rows), so that `x1 = a·x / h·x`,
    /// `x2 = b·x / h·x` on the image.
    pub plane: [[Rat; 3]; 3],
    /// Space covectors `h, l1, l2, l3` (rows of a positive frame).
    pub rows: [[Rat; 4]; 4],
    /// Coordinates `h, l1, l2, l3` composed with the space parametrization.
    pub polys: [UniPoly; 4],
}

impl SignChart {
    /// `r(t)` and `r'(t)` in chart coordinates at a rational parameter.
    pub fn jet(&self, t: &Rat) -> Option<([Rat; 3], [Rat; 3])> {
        let v: Vec<Rat> = self.polys.iter().map(|p| p.eval(t)).collect();
        let dv: Vec<Rat> = self.polys.iter().map(|p| p.derivative().eval(t)).collect();
        if v[0].is_zero() {
            return None;
        }
        let h2 = &v[0] * &v[0];
        let r = [1, 2, 3].map(|i| &v[i] / &v[0]);
        let dr = [1, 2, 3].map(|i| (&dv[i] * &v[0] - &v[i] * &dv[0]) / &h2);
        Some((r, dr))
    }

    pub fn jet_complex(&self, t: Complex) -> ([Complex; 3], [Complex; 3]) {
        let v: Vec<Complex> = self.polys.iter().map(|p| p.eval_complex(t)).collect();
        let dv: Vec<Complex> = self.polys.iter().map(|p| p.derivative().eval_complex(t)).collect();
        let h2 = v[0] * v[0];
        let r = [1, 2, 3].map(|i| v[i] / v[0]);
        let dr = [1, 2, 3].map(|i| (dv[i] * v[0] - v[i] * dv[0]) / h2);
        (r, dr)
    }

    /// Affine plane coordinates of a homogeneous plane point.
    pub fn plane_coords_f64(&self, x: &[f64; 3]) -> Option<[f64; 2]> {
        let f = |row: &[Rat; 3]| -> f64 { (0..3).map(|i| to_f64(&row[i]) * x[i]).sum() };
        let h = f(&self.plane[0]);
        if h.abs() < 1e-300 {
            return None;
        }
        Some([f(&self.plane[1]) / h, f(&self.plane[2]) / h])
    }
}

const PLANE_COVECTORS: [[i64; 3]; 10] = [
    [0, 0, 1],
    [1, 0, 0],
    [0, 1, 0],
    [1, 1, 1],
    [1, 2, 3],
    [3, -1, 2],
    [-2, 1, 5],
    [1, -3, 1],
    [4, 1, -1],
    [2, 5, 3],
];

/// Chart whose plane at infinity avoids the given real image points.
pub fn sign_chart(pp: &PlaneProjection, avoid: &[[f64; 3]]) -> Result<SignChart> {
    for h in PLANE_COVECTORS {
        let ok = avoid.iter().all(|x| {
            let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            let v = h[0] as f64 * x[0] + h[1] as f64 * x[1] + h[2] as f64 * x[2];
            v.abs() > 1e-9 * n * 6.0
        });
        if !ok {
            continue;
        }
        return Ok(chart_from_covector(pp, h.map(rat)));
    }
    Err(Error::ChartFailure("every candidate line meets a double point".into()))
}

pub fn chart_from_covector(pp: &PlaneProjection, h: [Rat; 3]) -> SignChart {
    let mut plane: Vec<[Rat; 3]> = vec![h];
    for k in 0..3 {
        if plane.len() == 3 {
            break;
        }
        let mut e: [Rat; 3] = Default::default();
        e[k] = Rat::one();
        let mut trial = plane.clone();
        trial.push(e);
        let independent = if trial.len() == 2 {
            cross3(&trial[0], &trial[1]).iter().any(|c| !c.is_zero())
        } else {
            !det(trial.iter().map(|r| r.to_vec()).collect()).is_zero()
        };
        if independent {
            plane = trial;
        }
    }
    let space_row = |c: &[Rat; 3]| -> [Rat; 4] {
        [0, 1, 2, 3].map(|j| (0..3).map(|k| &c[k] * &pp.forms[k][j]).sum())
    };
    let mut rows: Vec<[Rat; 4]> = plane.iter().map(space_row).collect();
    let c = pp.center.coords();
    let j = c.iter().position(|v| !v.is_zero()).unwrap();
    let mut l3: [Rat; 4] = Default::default();
    l3[j] = Rat::one();
    rows.push(l3);
    if sign(&det(rows.iter().map(|r| r.to_vec()).collect())) < 0 {
        rows[3][j] = -Rat::one();
    }
    let polys = [0, 1, 2, 3].map(|i| {
        (0..4).fold(UniPoly::zero(), |acc, j| &acc + &pp.curve.y()[j].scale(&rows[i][j]))
    });
    SignChart { plane: plane.try_into().unwrap(), rows: rows.try_into().unwrap(), polys }
}

#[derive(Clone, Debug, Serialize)]
pub struct DoublePointSet {
    pub degree: usize,
    pub expected: usize,
    pub points: Vec<DoublePoint>,
    pub report: GenericityReport,
    #[serde(skip)]
    pub chart: Option<SignChart>,
}

impl DoublePointSet {
    pub fn crossings(&self) -> impl Iterator<Item = &DoublePoint> {
        self.points.iter().filter(|p| p.kind == DoublePointKind::Crossing)
    }

    pub fn solitary(&self) -> impl Iterator<Item = &DoublePoint> {
        self.points.iter().filter(|p| p.kind == DoublePointKind::Solitary)
    }

    pub fn count(&self, kind: DoublePointKind) -> usize {
        self.points.iter().filter(|p| p.kind == kind).count()
    }
}

fn plane_matrices() -> Vec<[[i64; 3]; 3]> {
    vec![
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[1, 1, 1], [0, 1, -1], [1, -1, 2]],
        [[2, -1, 3], [1, 3, 0], [0, 1, 1]],
        [[1, 2, -2], [3, 0, 1], [1, 1, 4]],
        [[5, 1, 2], [-1, 2, 3], [2, 2, -3]],
        [[3, 4, 1], [1, -2, 5], [4, 1, 1]],
        [[-2, 3, 7], [1, 1, 2], [3, -5, 1]],
        [[7, 2, -3], [2, 9, 1], [1, -4, 6]],
    ]
}

fn apply3(m: &[[i64; 3]; 3], x: &[UniPoly; 3]) -> [UniPoly; 3] {
    [0, 1, 2].map(|i| (0..3).fold(UniPoly::zero(), |acc, j| &acc + &x[j].scale(&rat(m[i][j]))))
}

fn minors_gcd3(a: &[UniPoly; 3], b: &[UniPoly; 3]) -> UniPoly {
    let mut g = UniPoly::zero();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        g = g.gcd(&(&(&a[i] * &b[j]) - &(&a[j] * &b[i])));
    }
    g
}

/// Exact cusp test: `[x, x']` drops rank somewhere (including `t = ∞`).
pub fn has_cusp(pp: &PlaneProjection) -> bool {
    let dx = pp.x.clone().map(|p| p.derivative());
    if !minors_gcd3(&pp.x, &dx).is_constant() {
        return true;
    }
    let m = pp.degree;
    let v = pp.eval(&Param::Infinity);
    let w = [0, 1, 2].map(|i| pp.x[i].coeff(m - 1));
    cross3(&v, &w).iter().all(|c| c.is_zero())
}

fn infinity_double(pp: &PlaneProjection) -> bool {
    let v = pp.eval(&Param::Infinity);
    let mut g = UniPoly::zero();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        g = g.gcd(&(&pp.x[i].scale(&v[j]) - &pp.x[j].scale(&v[i])));
    }
    !g.is_constant()
}

fn normalize(x: [Complex; 3]) -> [Complex; 3] {
    let n = x.iter().map(|z| z.norm() * z.norm()).sum::<f64>().sqrt();
    x.map(|z| z.scale(1.0 / n))
}

fn wedge_norm(a: &[Complex; 3], b: &[Complex; 3]) -> f64 {
    [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| (a[i] * b[j] - a[j] * b[i]).norm().powi(2))
        .sum::<f64>()
        .sqrt()
}

struct Roots {
    approx: Vec<Complex>,
    intervals: Vec<Option<RootInterval>>,
}

fn roots_of(g: &UniPoly) -> Roots {
    let mut real = isolate_roots_of(g);
    for iv in real.iter_mut() {
        iv.refine(g, 96);
    }
    let mut all = complex_roots(g);
    all.sort_by(|a, b| a.im.abs().partial_cmp(&b.im.abs()).unwrap());
    let nonreal: Vec<Complex> = all.into_iter().skip(real.len()).collect();
    let mut approx = Vec::new();
    let mut intervals = Vec::new();
    for iv in real {
        approx.push(Complex { re: iv.approx(), im: 0.0 });
        intervals.push(Some(iv));
    }
    for z in nonreal {
        // pin conjugation symmetry
        approx.push(z);
        intervals.push(None);
    }
    Roots { approx, intervals }
}

fn pair_roots(pp: &PlaneProjection, roots: &[Complex]) -> Option<Vec<(usize, usize)>> {
    let imgs: Vec<[Complex; 3]> = roots.iter().map(|&z| normalize(pp.eval_complex(z))).collect();
    let n = roots.len();
    let mut cand: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            cand.push((wedge_norm(&imgs[i], &imgs[j]), i, j));
        }
    }
    cand.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut used = vec![false; n];
    let mut pairs = Vec::new();
    let mut worst: f64 = 0.0;
    for &(sc, i, j) in &cand {
        if used[i] || used[j] {
            continue;
        }
        used[i] = true;
        used[j] = true;
        worst = worst.max(sc);
        pairs.push((i, j));
    }
    if worst > 1e-5 {
        return None;
    }
    Some(pairs)
}

fn count_partners(pp: &PlaneProjection, g: &UniPoly) -> usize {
    let roots = complex_roots(&g.squarefree_part());
    let imgs: Vec<[Complex; 3]> = roots.iter().map(|&z| normalize(pp.eval_complex(z))).collect();
    let mut most = 0;
    for i in 0..roots.len() {
        let c = (0..roots.len()).filter(|&j| j != i && wedge_norm(&imgs[i], &imgs[j]) < 1e-6).count();
        most = most.max(c);
    }
    most
}

/// Enumerates all complex double points of a plane projection, classifies
/// the real ones and signs them.
pub fn double_points(pp: &PlaneProjection) -> Result<DoublePointSet> {
    let m = pp.degree;
    let n = max_writhe(m) as usize;
    let mut report = GenericityReport { has_cusp: has_cusp(pp), ..Default::default() };
    if infinity_double(pp) {
        report.parameter_at_infinity = true;
    }
    if let Some(q) = pp.center_image() {
        if let Some(tp) = &pp.center_param {
            report.base_point_on_curve = other_preimage(pp, &q, tp);
        }
    }
    if !report.is_generic() {
        return Err(generic_error(&report));
    }
    if n == 0 {
        return Ok(DoublePointSet { degree: m, expected: 0, points: Vec::new(), report, chart: None });
    }
    let mut found = None;
    let mut last = UniPoly::zero();
    for mat in plane_matrices() {
        let xm = apply3(&mat, &pp.x);
        if xm.iter().any(|p| p.is_zero()) {
            continue;
        }
        let d01 = BiPoly::divided_minor(&xm[0], &xm[1]);
        let d02 = BiPoly::divided_minor(&xm[0], &xm[2]);
        let h = sylvester_resultant_bi(&d01, &d02);
        if h.is_zero() {
            continue;
        }
        let g = h.strip_common_factors(&xm[0]);
        if g.deg() == 2 * n && g.is_squarefree() {
            found = Some(g);
            break;
        }
        last = g;
    }
    let Some(g) = found else {
        if last.deg() >= 2 * n && !last.is_squarefree() {
            if count_partners(pp, &last) >= 2 {
                report.has_triple_point = true;
            } else {
                report.has_tangential_pair = true;
            }
        } else {
            report.has_tangential_pair = true;
        }
        return Err(generic_error(&report));
    };
    let roots = roots_of(&g);
    let Some(pairs) = pair_roots(pp, &roots.approx) else {
        report.has_triple_point = true;
        return Err(generic_error(&report));
    };
    let mut points = Vec::new();
    for (i, j) in pairs {
        let (mut a, mut b) = (i, j);
        let (za, zb) = (roots.approx[a], roots.approx[b]);
        let kind = match (&roots.intervals[a], &roots.intervals[b]) {
            (Some(_), Some(_)) => DoublePointKind::Crossing,
            (None, None) => {
                let c = za.conj();
                if (zb - c).norm() < 1e-6 * (1.0 + za.norm()) {
                    DoublePointKind::Solitary
                } else {
                    DoublePointKind::ImaginaryPair
                }
            }
            _ => {
                report.has_triple_point = true;
                return Err(generic_error(&report));
            }
        };
        // canonical order: real parameters ascending, solitary with Im > 0 first
        let swap = match kind {
            DoublePointKind::Crossing => za.re > zb.re,
            DoublePointKind::Solitary => za.im < 0.0,
            DoublePointKind::ImaginaryPair => (za.re, za.im) > (zb.re, zb.im),
        };
        if swap {
            std::mem::swap(&mut a, &mut b);
        }
        let (s, t) = (roots.approx[a], roots.approx[b]);
        let img = normalize(pp.eval_complex(s));
        // real representative of the image
        let k = (0..3).max_by(|&i, &j| img[i].norm().partial_cmp(&img[j].norm()).unwrap()).unwrap();
        let phase = img[k].scale(1.0 / img[k].norm()).conj();
        let image = img.map(|z| (z * phase).re);
        let intervals = match (&roots.intervals[a], &roots.intervals[b]) {
            (Some(x), Some(y)) => Some([x.clone(), y.clone()]),
            _ => None,
        };
        points.push(DoublePoint {
            kind,
            e: (s + t).into(),
            f: (s * t).into(),
            params: [s.into(), t.into()],
            intervals,
            image,
            sign: 0,
            over: None,
        });
    }
    let avoid: Vec<[f64; 3]> = points.iter().filter(|p| p.is_real()).map(|p| p.image).collect();
    let chart = sign_chart(pp, &avoid)?;
    for dp in points.iter_mut() {
        match dp.kind {
            DoublePointKind::Crossing => {
                let (sg, over) = crossing_sign_in(&chart, dp)?;
                dp.sign = sg;
                dp.over = Some(over);
            }
            DoublePointKind::Solitary => dp.sign = solitary_sign_in(&chart, dp),
            DoublePointKind::ImaginaryPair => {}
        }
    }
    points.sort_by(|a, b| {
        let key = |p: &DoublePoint| (p.kind as u8, p.params[0].re, p.params[0].im);
        key(a).partial_cmp(&key(b)).unwrap()
    });
    Ok(DoublePointSet { degree: m, expected: n, points, report, chart: Some(chart) })
}

fn other_preimage(pp: &PlaneProjection, q: &[Rat; 3], tp: &Param) -> bool {
    let mut g = UniPoly::zero();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        g = g.gcd(&(&pp.x[i].scale(&q[j]) - &pp.x[j].scale(&q[i])));
    }
    let finite_extra = match tp {
        Param::Finite(t) => {
            let lin = UniPoly::linear_root(t);
            let mut h = g.clone();
            while let Some(q) = h.exact_div(&lin) {
                h = q;
            }
            !h.is_constant() || g.exact_div(&(&lin * &lin)).is_some()
        }
        Param::Infinity => !g.is_constant(),
    };
    let v = pp.eval(&Param::Infinity);
    let at_inf = *tp != Param::Infinity && cross3(&v, q).iter().all(|c| c.is_zero());
    finite_extra || at_inf
}

fn generic_error(r: &GenericityReport) -> Error {
    let mut why = Vec::new();
    if r.has_cusp {
        why.push("cusp");
    }
    if r.has_tangential_pair {
        why.push("tangential pair");
    }
    if r.has_triple_point {
        why.push("triple point");
    }
    if r.base_point_on_curve {
        why.push("center image is a double point");
    }
    if r.parameter_at_infinity {
        why.push("double point at parameter infinity");
    }
    Error::NonGenericProjection(why.join(", "))
}

fn cross2(a: &[Rat; 3], b: &[Rat; 3]) -> Rat {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Sign and over strand (index into `params`) of a real crossing: the
/// over strand has the larger fiber coordinate `x3`, and the sign is that of
/// `det[r(over) - r(under), r'(over), r'(under)]`.
fn crossing_sign_in(chart: &SignChart, dp: &DoublePoint) -> Result<(i32, usize)> {
    let [s, t] = dp.real_params().ok_or_else(|| Error::ChartFailure("non-real crossing".into()))?;
    let (rs, ds) = chart.jet(&s).ok_or_else(|| Error::ChartFailure("point at infinity".into()))?;
    let (rt, dt) = chart.jet(&t).ok_or_else(|| Error::ChartFailure("point at infinity".into()))?;
    let dz = sign(&(&rt[2] - &rs[2]));
    if dz == 0 {
        return Err(Error::ChartFailure("strands meet in space".into()));
    }
    let c = sign(&cross2(&ds, &dt));
    if c == 0 {
        return Err(Error::NonGenericProjection("tangential pair".into()));
    }
    // det[r(s)-r(t), r'(s), r'(t)] = (x3(s) - x3(t)) * cross2(r'(s), r'(t))
    let over = if dz > 0 { 1 } else { 0 };
    Ok((-dz * c, over))
}

/// Sign of a solitary node: the crossing determinant continued to the pair
/// of conjugate parameters.
fn solitary_sign_in(chart: &SignChart, dp: &DoublePoint) -> i32 {
    let t0 = Complex { re: dp.params[0].re, im: dp.params[0].im };
    let (r, dr) = chart.jet_complex(t0);
    let a = [dr[0].re, dr[1].re];
    let b = [dr[0].im, dr[1].im];
    let c = a[0] * b[1] - a[1] * b[0];
    let v = r[2].im * c;
    if v > 0.0 {
        SOLITARY_ORIENTATION
    } else {
        -SOLITARY_ORIENTATION
    }
}

/// Sign of a real crossing in the adapted chart.
pub fn crossing_sign(pp: &PlaneProjection, dp: &DoublePoint) -> Result<i32> {
    if dp.kind != DoublePointKind::Crossing {
        return Err(Error::InvalidParameters("not a crossing".into()));
    }
    let chart = sign_chart(pp, &[dp.image])?;
    Ok(crossing_sign_in(&chart, dp)?.0)
}

pub fn solitary_sign(pp: &PlaneProjection, dp: &DoublePoint) -> Result<i32> {
    if dp.kind != DoublePointKind::Solitary {
        return Err(Error::InvalidParameters("not a solitary node".into()));
    }
    let chart = sign_chart(pp, &[dp.image])?;
    Ok(solitary_sign_in(&chart, dp))
}

/// Exact evaluation helper for tests and callers holding a fixed chart.
pub fn crossing_sign_with(chart: &SignChart, dp: &DoublePoint) -> Result<i32> {
    Ok(crossing_sign_in(chart, dp)?.0)
}

pub fn solitary_sign_with(chart: &SignChart, dp: &DoublePoint) -> i32 {
    solitary_sign_in(chart, dp)
}

/// `h · γ(t)` for a linear form, as a polynomial.
pub fn compose_form(k: &SpaceCurve, f: &[Rat; 4]) -> UniPoly {
    (0..4).fold(UniPoly::zero(), |acc, j| &acc + &k.y()[j].scale(&f[j]))
}

pub fn point_value(f: &[Rat; 4], y: &[Rat; 4]) -> Rat {
    dot4(f, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic() -> SpaceCurve {
        SpaceCurve::from_ints([&[1], &[0, 1], &[0, 0, 1], &[0, 0, 0, 1]]).unwrap()
    }

    #[test]
    fn projection_degrees() {
        let k = cubic();
        let pp = project(&k, &ProjPoint3::from_ints([0, 0, 0, 1])).unwrap();
        assert_eq!(pp.degree, 2);
        assert_eq!(pp.x[1], UniPoly::from_ints(&[0, 1]));
        assert_eq!(pp.center_param, Some(Param::Infinity));
        let pp = project(&k, &ProjPoint3::from_ints([0, 0, 1, 0])).unwrap();
        assert_eq!(pp.degree, 3);
        let pp = project(&k, &ProjPoint3::from_ints([1, 0, 0, 0])).unwrap();
        assert_eq!(pp.degree, 2);
        assert_eq!(pp.center_param, Some(Param::int(0)));
    }

    #[test]
    fn generic_cubic_projection_has_one_double_point() {
        let k = cubic();
        // direction (1,0,1) at infinity: one real crossing at s = -1, t = 1
        let pp = project(&k, &ProjPoint3::from_ints([0, 1, 0, 1])).unwrap();
        let dps = double_points(&pp).unwrap();
        assert_eq!(dps.points.len(), 1);
        let dp = &dps.points[0];
        assert_eq!(dp.kind, DoublePointKind::Crossing);
        assert!((dp.params[0].re + 1.0).abs() < 1e-12 && (dp.params[1].re - 1.0).abs() < 1e-12);
        assert_eq!(dp.sign, 1);
        // direction (1,0,-1): solitary node at s, t = ±i
        let pp = project(&k, &ProjPoint3::from_ints([0, 1, 0, -1])).unwrap();
        let dps = double_points(&pp).unwrap();
        assert_eq!(dps.points[0].kind, DoublePointKind::Solitary);
        assert!((dps.points[0].params[0].im - 1.0).abs() < 1e-9);
        assert_eq!(dps.points[0].sign, 1);
    }

    #[test]
    fn mirror_flips_signs() {
        let k = cubic().mirror();
        let pp = project(&k, &ProjPoint3::from_ints([0, 1, 0, -1])).unwrap();
        assert_eq!(double_points(&pp).unwrap().points[0].sign, -1);
        let pp = project(&k, &ProjPoint3::from_ints([0, 1, 0, 1])).unwrap();
        assert_eq!(double_points(&pp).unwrap().points[0].sign, -1);
    }

    #[test]
    fn center_on_tangent_is_cuspidal() {
        let k = cubic();
        // gamma(0) + gamma'(0) = (1:1:0:0) lies on the tangent line at 0
        let pp = project(&k, &ProjPoint3::from_ints([1, 1, 0, 0])).unwrap();
        assert!(matches!(double_points(&pp), Err(Error::NonGenericProjection(_))));
        assert!(has_cusp(&pp));
    }
}
