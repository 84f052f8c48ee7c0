//! Encomplexed writhe, the index function `i(x)` and the decomposition
//! `w = i(q') + i(q'') + Σ σ(u)` for projections from a point of the curve.

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::projection::{
    chart_from_covector, double_points, project, DoublePointKind, DoublePointSet,
    PlaneProjection, SignChart,
};
use crate::projgeom::{ProjPoint2, ProjPoint3};
use crate::ratpoly::{dyadic, map_degree, rat, ratio, real_root_count, sign, tarski_query, BinForm, Rat};
use crate::spacecurve::{Param, SpaceCurve};
use crate::{max_writhe, Error, Result};

/// Global orientation of `H1(RP² \ x) ≅ Z`, fixed by calibration with
/// `i(q') + i(q'') = d - 2` on the twisted cubic.
const INDEX_ORIENTATION: i64 = 1;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Census {
    pub crossing: usize,
    pub solitary: usize,
    pub imaginary_pair: usize,
}

impl Census {
    pub fn of(set: &DoublePointSet) -> Census {
        Census {
            crossing: set.count(DoublePointKind::Crossing),
            solitary: set.count(DoublePointKind::Solitary),
            imaginary_pair: set.count(DoublePointKind::ImaginaryPair),
        }
    }

    /// Double points with real local branches.
    pub fn real_branch(&self) -> usize {
        self.crossing
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WritheReport {
    pub w: i64,
    pub crossing_contribution: i64,
    pub solitary_contribution: i64,
    pub center: ProjPoint3,
    pub census: Census,
    pub negative_crossings: usize,
}

impl WritheReport {
    pub fn from_set(center: &ProjPoint3, set: &DoublePointSet) -> WritheReport {
        let c: i64 = set.crossings().map(|p| p.sign as i64).sum();
        let s: i64 = set.solitary().map(|p| p.sign as i64).sum();
        WritheReport {
            w: c + s,
            crossing_contribution: c,
            solitary_contribution: s,
            center: center.clone(),
            census: Census::of(set),
            negative_crossings: set.crossings().filter(|p| p.sign < 0).count(),
        }
    }
}

/// Writhe from one projection center.
pub fn encomplexed_writhe(k: &SpaceCurve, p: &ProjPoint3) -> Result<WritheReport> {
    if k.contains(p.coords()) {
        return Err(Error::InvalidParameters("center lies on the curve".into()));
    }
    let pp = project(k, p)?;
    let set = double_points(&pp)?;
    Ok(WritheReport::from_set(p, &set))
}

/// A random real center with small rational coordinates.
pub fn random_center<R: Rng>(rng: &mut R) -> ProjPoint3 {
    loop {
        let c = [0, 1, 2, 3].map(|_| ratio(rng.gen_range(-60..=60), rng.gen_range(1..=7)));
        if let Ok(p) = ProjPoint3::new(c) {
            return p;
        }
    }
}

/// A random center off the curve with a generic projection, together with
/// its double points. Fails after `budget` attempts.
pub fn generic_center<R: Rng>(
    k: &SpaceCurve,
    rng: &mut R,
    budget: usize,
) -> Result<(ProjPoint3, PlaneProjection, DoublePointSet)> {
    let mut last = Error::SearchFailed("no attempts".into());
    for _ in 0..budget {
        let p = random_center(rng);
        if k.contains(p.coords()) {
            continue;
        }
        match project(k, &p).and_then(|pp| double_points(&pp).map(|s| (pp, s))) {
            Ok((pp, set)) => return Ok((p, pp, set)),
            Err(e) => last = e,
        }
    }
    Err(match last {
        Error::NonGenericProjection(m) => Error::NonGenericProjection(m),
        other => Error::SearchFailed(format!("no generic center within budget: {other}")),
    })
}

/// Writhe from a random generic center, retrying on non-generic ones.
pub fn writhe_with_retries<R: Rng>(k: &SpaceCurve, rng: &mut R, budget: usize) -> Result<WritheReport> {
    let (p, _, set) = generic_center(k, rng, budget)?;
    Ok(WritheReport::from_set(&p, &set))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexValue {
    pub x: ProjPoint2,
    /// Twice the index, an integer.
    pub twice: i64,
    #[serde(with = "crate::ratpoly::rat_serde")]
    pub i: Rat,
}

impl IndexValue {
    fn new(x: ProjPoint2, twice: i64) -> IndexValue {
        IndexValue { x, twice, i: ratio(twice, 2) }
    }
}

const COVECTORS: [[i64; 3]; 6] = [[0, 0, 1], [1, 0, 0], [0, 1, 0], [1, 1, 1], [1, -2, 3], [2, 1, -1]];

fn chart_for(pp: &PlaneProjection, pts: &[&[Rat; 3]]) -> SignChart {
    for h in COVECTORS {
        let ok = pts.iter().all(|x| !(0..3).map(|i| rat(h[i]) * &x[i]).sum::<Rat>().is_zero());
        if ok {
            return chart_from_covector(pp, h.map(rat));
        }
    }
    // fall back to a covector built from the points themselves
    let h = pts[0].clone();
    chart_from_covector(pp, h)
}

/// Twice the index, relative to the orientation of the chart `(x1, x2)`.
fn twice_index_in(pp: &PlaneProjection, chart: &SignChart, x: &[Rat; 3]) -> Result<i64> {
    let [h, a, b] = &chart.plane;
    let hx: Rat = (0..3).map(|i| &h[i] * &x[i]).sum();
    let xi1: Rat = (0..3).map(|i| &a[i] * &x[i]).sum::<Rat>() / &hx;
    let xi2: Rat = (0..3).map(|i| &b[i] * &x[i]).sum::<Rat>() / &hx;
    let l1: [Rat; 3] = [0, 1, 2].map(|i| &a[i] - &xi1 * &h[i]);
    let l2: [Rat; 3] = [0, 1, 2].map(|i| &b[i] - &xi2 * &h[i]);
    let p1: BinForm = pp.pullback(&l1);
    let p2: BinForm = pp.pullback(&l2);
    // angle of (L1, L2) increases as L1/L2 decreases
    let deg = map_degree(&p2, &p1).map_err(|_| Error::PointOnCurve)?;
    Ok(deg)
}

/// `i(x)` for a point off the real image curve, oriented by the chart
/// adapted to the projection (fiber toward the viewer).
pub fn index_i(pp: &PlaneProjection, x: &ProjPoint2) -> Result<IndexValue> {
    let xc = x.coords().clone();
    if pp.contains(&xc) {
        return Err(Error::PointOnCurve);
    }
    let q = pp.center_image();
    let mut pts = vec![&xc];
    if let Some(q) = &q {
        pts.push(q);
    }
    let chart = chart_for(pp, &pts);
    let mut twice = INDEX_ORIENTATION * twice_index_in(pp, &chart, &xc)?;
    if let Some(f) = fiber_factor(pp, &chart) {
        twice *= f;
    }
    Ok(IndexValue::new(x.clone(), twice))
}

/// For a center on the curve the plane is oriented with the fiber along
/// the tangent line, traversed in the direction of the curve.
fn fiber_factor(pp: &PlaneProjection, chart: &SignChart) -> Option<i64> {
    let tp = pp.center_param.as_ref()?;
    let k = &pp.curve;
    let (rep, vel): ([Rat; 4], [Rat; 4]) = match tp {
        Param::Finite(_) => (k.eval_param(tp), k.velocity(tp)),
        Param::Infinity => (k.eval_param(tp), k.velocity(tp).map(|v| -v)),
    };
    let rows = &chart.rows;
    let l3p: Rat = (0..4).map(|j| &rows[3][j] * &rep[j]).sum();
    let hv: Rat = (0..4).map(|j| &rows[0][j] * &vel[j]).sum();
    let s_t = sign(&(l3p * hv)) as i64;
    Some(-s_t)
}

/// The two points flanking the image of the center at offset `2^-k` along
/// the normal, in the chart around it.
pub fn flanking_points(pp: &PlaneProjection, k: u32) -> Result<(ProjPoint2, ProjPoint2)> {
    let tp = pp.center_param.clone().ok_or_else(|| Error::InvalidParameters("center off curve".into()))?;
    let q = pp.eval(&tp);
    let chart = chart_for(pp, &[&q]);
    let [h, a, b] = &chart.plane;
    let dot = |c: &[Rat; 3], v: &[Rat; 3]| -> Rat { (0..3).map(|i| &c[i] * &v[i]).sum() };
    let dq: [Rat; 3] = match &tp {
        Param::Finite(t) => [0, 1, 2].map(|i| pp.x[i].derivative().eval(t)),
        Param::Infinity => [0, 1, 2].map(|i| pp.x[i].coeff(pp.degree - 1)),
    };
    let (hq, aq, bq) = (dot(h, &q), dot(a, &q), dot(b, &q));
    let (hd, ad, bd) = (dot(h, &dq), dot(a, &dq), dot(b, &dq));
    let q1 = &aq / &hq;
    let q2 = &bq / &hq;
    // tangent of (a/h, b/h) at the center parameter
    let t1 = (&ad * &hq - &aq * &hd) / (&hq * &hq);
    let t2 = (&bd * &hq - &bq * &hd) / (&hq * &hq);
    if t1.is_zero() && t2.is_zero() {
        return Err(Error::NonGenericProjection("image of the center is a cusp".into()));
    }
    let eps = dyadic(k);
    let lift = |x1: Rat, x2: Rat| -> Result<ProjPoint2> {
        // solve h·y = 1, a·y = x1, b·y = x2
        let m = [h.clone(), a.clone(), b.clone()];
        solve3(&m, &[Rat::one(), x1, x2])
    };
    let n1 = -t2.clone();
    let n2 = t1.clone();
    if !segment_clear(pp, [h, a, b], [&q1, &q2], [&n1, &n2], &eps) {
        return Err(Error::DegeneratePosition(format!("offset 2^-{k} reaches another branch")));
    }
    let plus = lift(&q1 + &eps * &n1, &q2 + &eps * &n2)?;
    let minus = lift(&q1 - &eps * &n1, &q2 - &eps * &n2)?;
    Ok((plus, minus))
}

/// True when the segment `q ± eps·n` meets the curve only at the center
/// image, so its ends lie in the two regions on either side of the branch.
fn segment_clear(
    pp: &PlaneProjection,
    [h, a, b]: [&[Rat; 3]; 3],
    [q1, q2]: [&Rat; 2],
    [n1, n2]: [&Rat; 2],
    eps: &Rat,
) -> bool {
    let comb = |ca: &Rat, cb: &Rat, ch: &Rat| -> [Rat; 3] { [0, 1, 2].map(|i| ca * &a[i] + cb * &b[i] + ch * &h[i]) };
    // line through q along n, and the coordinate along it scaled by |n|²
    let line = comb(&-n2.clone(), n1, &(n2 * q1 - n1 * q2));
    let along = comb(n1, n2, &-(n1 * q1 + n2 * q2));
    let form = |c: &[Rat; 3]| pp.pullback(c);
    let (p, s, hh) = (form(&line), form(&along), form(&[0, 1, 2].map(|i| h[i].clone())));
    let r = eps * (n1 * n1 + n2 * n2);
    // inside the segment iff s² < r² h² (h ≠ 0 on the real curve in this chart)
    let inside = |sv: &Rat, hv: &Rat| sv * sv < &r * &r * hv * hv;
    let on_edge = |sv: &Rat, hv: &Rat| sv * sv == &r * &r * hv * hv;
    let mut count = 0i64;
    if p.infinity_multiplicity() > 0 {
        let m = p.degree();
        let (sv, hv) = (s.poly().coeff(m), hh.poly().coeff(m));
        if on_edge(&sv, &hv) {
            return false;
        }
        count += inside(&sv, &hv) as i64;
    }
    let pf = p.poly().squarefree_part();
    let q = &(&hh.poly().pow(2)).scale(&(&r * &r)) - &s.poly().pow(2);
    if real_root_count(&pf.gcd(&q)) > 0 {
        return false;
    }
    count += (real_root_count(&pf) as i64 + tarski_query(&q, &pf)) / 2;
    count == 1
}

fn solve3(m: &[[Rat; 3]; 3], rhs: &[Rat; 3]) -> Result<ProjPoint2> {
    let d = crate::ratpoly::det(m.iter().map(|r| r.to_vec()).collect());
    if d.is_zero() {
        return Err(Error::DegeneratePosition("singular chart".into()));
    }
    let mut out: [Rat; 3] = Default::default();
    for (c, slot) in out.iter_mut().enumerate() {
        let mm: Vec<Vec<Rat>> = (0..3)
            .map(|r| (0..3).map(|k| if k == c { rhs[r].clone() } else { m[r][k].clone() }).collect())
            .collect();
        *slot = crate::ratpoly::det(mm) / &d;
    }
    ProjPoint2::new(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Eq2Report {
    pub center: ProjPoint3,
    pub center_param: Param,
    pub w: i64,
    pub i_plus: IndexValue,
    pub i_minus: IndexValue,
    pub offset_exponent: u32,
    pub sigma_sum: i64,
    pub census: Census,
    pub holds: bool,
}

impl Eq2Report {
    pub fn index_sum(&self) -> Rat {
        &self.i_plus.i + &self.i_minus.i
    }
}

/// Checks `w = i(q') + i(q'') + Σ σ(u)` for the projection from a point of
/// the curve, against a writhe `w` computed from an independent center.
pub fn eq2_check(k: &SpaceCurve, t: &Param, w: i64) -> Result<Eq2Report> {
    let p = k.point(t);
    let pp = project(k, &p)?;
    let set = double_points(&pp)?;
    let sigma: i64 = set.points.iter().filter(|d| d.is_real()).map(|d| d.sign as i64).sum();
    let mut result = None;
    for e in 2..96u32 {
        let (a, b) = match flanking_points(&pp, e) {
            Ok(f) => f,
            Err(Error::DegeneratePosition(_)) => continue,
            Err(err) => return Err(err),
        };
        let (Ok(ia), Ok(ib)) = (index_i(&pp, &a), index_i(&pp, &b)) else { continue };
        result = Some((ia, ib, e));
        break;
    }
    let (ia, ib, e) = result.ok_or_else(|| Error::SearchFailed("no clear flanking offset".into()))?;
    let total = &ia.i + &ib.i + rat(sigma);
    let holds = total == rat(w);
    Ok(Eq2Report {
        center: p,
        center_param: t.clone(),
        w,
        i_plus: ia,
        i_minus: ib,
        offset_exponent: e,
        sigma_sum: sigma,
        census: Census::of(&set),
        holds,
    })
}

/// `N_d` for the curve's degree.
pub fn n_d(k: &SpaceCurve) -> i64 {
    max_writhe(k.degree())
}
