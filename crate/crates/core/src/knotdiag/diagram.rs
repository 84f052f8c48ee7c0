use rand::Rng;
use serde::Serialize;

use super::invariants::{alexander, alexander_torus_closed_form, jones_with};
use super::laurent::LaurentPoly;
use super::pd::{torus_reference, PdCode, PdCrossing};
use crate::projection::{double_points, project, DoublePointKind, DoublePointSet};
use crate::projgeom::ProjPoint3;
use crate::ratpoly::{to_f64, Rat};
use crate::spacecurve::SpaceCurve;
use crate::writhe::random_center;
use crate::{max_writhe, Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct ProjCrossing {
    pub id: usize,
    #[serde(with = "crate::ratpoly::rat_vec_serde")]
    pub params: Vec<Rat>,
    /// Index into `params` of the over strand in the projection's chart.
    pub over: usize,
    pub sign: i32,
}

#[derive(Clone, Debug, Serialize)]
pub struct Passage {
    pub crossing: usize,
    #[serde(with = "crate::ratpoly::rat_serde")]
    pub param: Rat,
    pub over: bool,
}

/// Diagram of the real curve projected from a generic center.
#[derive(Clone, Debug, Serialize)]
pub struct ProjDiagram {
    pub center: ProjPoint3,
    pub degree: usize,
    pub crossings: Vec<ProjCrossing>,
    /// Crossing passages in increasing parameter order along RP¹.
    pub passages: Vec<Passage>,
    /// Images of solitary nodes.
    pub solitary: Vec<[f64; 3]>,
    #[serde(skip)]
    pub curve: SpaceCurve,
    #[serde(skip)]
    pub forms: [[Rat; 4]; 3],
}

impl ProjDiagram {
    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }

    /// Gauss code: crossing id, over flag and sign per passage.
    pub fn gauss_code(&self) -> Vec<(usize, bool, i32)> {
        self.passages.iter().map(|p| (p.crossing, p.over, self.crossings[p.crossing].sign)).collect()
    }
}

pub fn diagram_from_set(k: &SpaceCurve, p: &ProjPoint3, set: &DoublePointSet, forms: [[Rat; 4]; 3]) -> Result<ProjDiagram> {
    if !set.report.is_generic() {
        return Err(Error::NonGenericProjection(format!("{:?}", set.report)));
    }
    let mut crossings = Vec::new();
    let mut passages = Vec::new();
    for dp in set.crossings() {
        let params = dp.real_params().ok_or_else(|| Error::NonGenericProjection("crossing without real parameters".into()))?;
        let over = dp.over.unwrap_or(0);
        let id = crossings.len();
        for (i, t) in params.iter().enumerate() {
            passages.push(Passage { crossing: id, param: t.clone(), over: i == over });
        }
        crossings.push(ProjCrossing { id, params: params.to_vec(), over, sign: dp.sign });
    }
    passages.sort_by(|a, b| a.param.cmp(&b.param));
    let solitary = set.solitary().map(|d| d.image).collect();
    Ok(ProjDiagram { center: p.clone(), degree: k.degree(), crossings, passages, solitary, curve: k.clone(), forms })
}

pub fn build_diagram(k: &SpaceCurve, p: &ProjPoint3) -> Result<ProjDiagram> {
    let pp = project(k, p)?;
    let set = double_points(&pp)?;
    diagram_from_set(k, p, &set, pp.forms.clone())
}

/// Lift of the projective diagram to the sphere covering the projection
/// plane.
#[derive(Clone, Debug, Serialize)]
pub struct LiftedDiagram {
    pub pd: PdCode,
    pub components: usize,
    /// For each projective crossing, the sheet relation of its two branches
    /// (`true` when both lie on the same sheet of the lift).
    pub same_sheet: Vec<bool>,
    /// `(param, sheet)` of the under and over branch of each lifted crossing.
    #[serde(skip)]
    pub geometry: Vec<[(f64, i32); 2]>,
}

fn mat_vec(f: &[[f64; 4]; 3], y: &[f64; 4]) -> [f64; 3] {
    [0, 1, 2].map(|i| (0..4).map(|j| f[i][j] * y[j]).sum())
}

fn det3(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

struct LiftPassage {
    t: f64,
    sheet: i32,
    crossing: usize,
    over: bool,
}

/// Double cover of the diagram: each crossing lifts to two crossings on the
/// sphere, over/under read off the fiber coordinate of the 3-sphere.
pub fn lift_double_cover(dg: &ProjDiagram) -> Result<LiftedDiagram> {
    let k = &dg.curve;
    let d = k.degree();
    let f: [[f64; 4]; 3] = dg.forms.clone().map(|r| r.map(|c| to_f64(&c)));
    let pc = dg.center.to_f64();
    let pn = pc.iter().map(|c| c * c).sum::<f64>().sqrt();
    let velocity = |t: f64| -> [f64; 4] {
        let dy: Vec<f64> = k.y().iter().map(|p| p.derivative().eval_f64(t)).collect();
        [dy[0], dy[1], dy[2], dy[3]]
    };
    let height = |t: f64, sheet: i32| -> f64 {
        let y = k.eval_f64(t);
        let n = y.iter().map(|c| c * c).sum::<f64>().sqrt();
        sheet as f64 * (0..4).map(|i| y[i] * pc[i]).sum::<f64>() / (n * pn)
    };
    // lifted crossings: (passages (t, sheet) for the two branches, projective sign)
    let mut lifted: Vec<([(f64, i32); 2], i32, usize)> = Vec::new();
    let mut same_sheet = Vec::new();
    for c in &dg.crossings {
        let s = to_f64(&c.params[0]);
        let t = to_f64(&c.params[1]);
        let xs = mat_vec(&f, &k.eval_f64(s));
        let xt = mat_vec(&f, &k.eval_f64(t));
        let rel = if (0..3).map(|i| xs[i] * xt[i]).sum::<f64>() > 0.0 { 1 } else { -1 };
        same_sheet.push(rel > 0);
        lifted.push(([(s, 1), (t, rel)], c.sign, c.id));
        lifted.push(([(s, -1), (t, -rel)], c.sign, c.id));
    }
    // over = larger fiber coordinate; geometric sign from the sphere orientation
    let mut overs = Vec::new();
    let mut signs = Vec::new();
    for (br, _, _) in &lifted {
        let h0 = height(br[0].0, br[0].1);
        let h1 = height(br[1].0, br[1].1);
        let o = if h0 > h1 { 0 } else { 1 };
        let u = 1 - o;
        let n = mat_vec(&f, &k.eval_f64(br[0].0)).map(|c| c * br[0].1 as f64);
        let du = mat_vec(&f, &velocity(br[u].0)).map(|c| c * br[u].1 as f64);
        let dov = mat_vec(&f, &velocity(br[o].0)).map(|c| c * br[o].1 as f64);
        let g = -det3(&n, &du, &dov);
        overs.push(o);
        signs.push(if g > 0.0 { 1 } else { -1 });
    }
    let agree = lifted.iter().zip(&signs).filter(|((_, s, _), g)| s == *g).count();
    let flip = if agree == lifted.len() {
        false
    } else if agree == 0 {
        true
    } else {
        return Err(Error::DegeneratePosition(format!(
            "lifted crossing signs agree at {agree} of {} crossings",
            lifted.len()
        )));
    };
    let mut passages: Vec<LiftPassage> = Vec::new();
    let mut geometry = Vec::new();
    for (i, (br, _, _)) in lifted.iter().enumerate() {
        let o = if flip { 1 - overs[i] } else { overs[i] };
        geometry.push([br[1 - o], br[o]]);
        for (j, (t, sheet)) in br.iter().enumerate() {
            passages.push(LiftPassage { t: *t, sheet: *sheet, crossing: i, over: j == o });
        }
    }
    // components: one loop through both sheets for odd degree, one per sheet for even
    let comps: Vec<Vec<&LiftPassage>> = if d % 2 == 1 {
        let mut all: Vec<&LiftPassage> = passages.iter().collect();
        all.sort_by(|a, b| (-a.sheet, a.t).partial_cmp(&(-b.sheet, b.t)).unwrap());
        vec![all]
    } else {
        [1, -1]
            .iter()
            .map(|&s| {
                let mut v: Vec<&LiftPassage> = passages.iter().filter(|p| p.sheet == s).collect();
                v.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
                v
            })
            .collect()
    };
    let mut ends: Vec<[Option<(usize, usize)>; 2]> = vec![[None, None]; lifted.len()];
    let mut offset = 0;
    let mut free_loops = 0;
    for comp in &comps {
        let m = comp.len();
        if m == 0 {
            free_loops += 1;
            continue;
        }
        for (j, p) in comp.iter().enumerate() {
            let incoming = offset + (j + m - 1) % m + 1;
            let outgoing = offset + j + 1;
            ends[p.crossing][p.over as usize] = Some((incoming, outgoing));
        }
        offset += m;
    }
    let mut crossings = Vec::new();
    for (i, e) in ends.iter().enumerate() {
        let (ui, uo) = e[0].expect("under passage");
        let (oi, oo) = e[1].expect("over passage");
        let sign = lifted[i].1 as i8;
        let edges = if sign > 0 { [ui, oo, uo, oi] } else { [ui, oi, uo, oo] };
        crossings.push(PdCrossing { edges, sign });
    }
    let pd = PdCode { crossings, free_loops };
    pd.validate()?;
    let components = pd.components();
    Ok(LiftedDiagram { pd, components, same_sheet, geometry })
}

/// A generic center whose projection has no solitary node, found by seeded
/// random search.
pub fn u1_center<R: Rng>(k: &SpaceCurve, rng: &mut R, budget: usize) -> Result<(ProjPoint3, ProjDiagram)> {
    let mut last = String::new();
    for _ in 0..budget {
        let p = random_center(rng);
        if k.contains(p.coords()) {
            continue;
        }
        let Ok(pp) = project(k, &p) else { continue };
        let set = match double_points(&pp) {
            Ok(s) if s.report.is_generic() => s,
            Ok(s) => {
                last = format!("{:?}", s.report);
                continue;
            }
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        if set.count(DoublePointKind::Solitary) != 0 || set.count(DoublePointKind::ImaginaryPair) != 0 {
            continue;
        }
        let dg = diagram_from_set(k, &p, &set, pp.forms.clone())?;
        return Ok((p, dg));
    }
    Err(Error::SearchFailed(format!("no center without solitary nodes in {budget} attempts; last: {last}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantMatch {
    pub computed: LaurentPoly,
    pub reference: LaurentPoly,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentifyReport {
    pub degree: usize,
    pub torus_type: (usize, usize),
    pub center: ProjPoint3,
    pub writhe: i64,
    pub projective_crossings: usize,
    pub lifted_crossings: usize,
    pub components: usize,
    pub expected_components: usize,
    pub lifted_pd: PdCode,
    pub jones: Option<InvariantMatch>,
    pub alexander: Option<InvariantMatch>,
    pub alexander_closed_form: Option<LaurentPoly>,
    pub verdict: Verdict,
    pub note: String,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Compares the lifted diagram from a U1 center with the torus link
/// `T(d, d-2)`: Jones polynomial while the state sum fits `state_budget`,
/// Alexander polynomial for knots up to degree 9.
pub fn identify_torus<R: Rng>(k: &SpaceCurve, rng: &mut R, retries: usize, state_budget: usize) -> Result<IdentifyReport> {
    let (_, dg) = u1_center(k, rng, retries)?;
    identify_diagram(&dg, state_budget).map(|(r, _)| r)
}

pub fn identify_diagram(dg: &ProjDiagram, state_budget: usize) -> Result<(IdentifyReport, LiftedDiagram)> {
    let d = dg.degree;
    let w = dg.writhe();
    if w != max_writhe(d) || !dg.solitary.is_empty() {
        return Err(Error::NotMW(format!("writhe {w} with {} solitary nodes, expected {}", dg.solitary.len(), max_writhe(d))));
    }
    let lift = lift_double_cover(dg)?;
    let q = d - 2;
    let reference = torus_reference(d, q)?;
    let jones_match = if d <= 6 && lift.pd.len() <= state_budget && reference.len() <= state_budget {
        let c = jones_with(&lift.pd, state_budget)?;
        let r = jones_with(&reference, state_budget)?;
        Some(InvariantMatch { matches: c == r, computed: c, reference: r })
    } else {
        None
    };
    let (alex, closed) = if d % 2 == 1 && d <= 9 {
        let c = alexander(&lift.pd)?;
        let r = alexander(&reference)?;
        let cf = alexander_torus_closed_form(d, q);
        (Some(InvariantMatch { matches: c == r && r == cf, computed: c, reference: r }), Some(cf))
    } else {
        (None, None)
    };
    let checked: Vec<bool> = jones_match.iter().chain(alex.iter()).map(|m| m.matches).collect();
    let expected_components = gcd(d, q);
    let ok = !checked.is_empty() && checked.iter().all(|b| *b) && lift.components == expected_components;
    let report = IdentifyReport {
        degree: d,
        torus_type: (d, q),
        center: dg.center.clone(),
        writhe: w,
        projective_crossings: dg.crossings.len(),
        lifted_crossings: lift.pd.len(),
        components: lift.components,
        expected_components,
        lifted_pd: lift.pd.clone(),
        jones: jones_match,
        alexander: alex,
        alexander_closed_form: closed,
        verdict: if ok { Verdict::Consistent } else { Verdict::Inconsistent },
        note: "matching invariants are consistent with the torus type; they do not prove isotopy".into(),
    };
    Ok((report, lift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotdiag::moves::faces;
    use crate::knotdiag::jones;
    use crate::mwgen::{default_roots, quadric_specimen, twisted_cubic};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn twisted_cubic_diagrams() {
        let k = twisted_cubic();
        let a = build_diagram(&k, &ProjPoint3::from_ints([0, 1, 0, 1])).unwrap();
        assert_eq!(a.crossings.len(), 1);
        assert_eq!(a.crossings[0].sign, 1);
        assert_eq!(a.passages.len(), 2);
        let b = build_diagram(&k, &ProjPoint3::from_ints([0, 1, 0, -1])).unwrap();
        assert_eq!((b.crossings.len(), b.solitary.len()), (0, 1));
        let la = lift_double_cover(&a).unwrap();
        assert_eq!((la.pd.len(), la.components), (2, 1));
        assert_eq!(jones(&la.pd).unwrap(), LaurentPoly::one());
        let lb = lift_double_cover(&b).unwrap();
        assert_eq!(lb.pd, PdCode::unknot());
    }

    #[test]
    fn quadric_lifts() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in [4, 5] {
            let (c, e) = default_roots(d);
            let (k, _) = quadric_specimen(d, &c, &e).unwrap();
            let (_, dg) = u1_center(&k, &mut rng, 64).unwrap();
            assert!(dg.crossings.iter().all(|c| c.sign == 1));
            let l = lift_double_cover(&dg).unwrap();
            assert_eq!(l.pd.len(), 2 * max_writhe(d) as usize);
            assert_eq!(l.components, if d % 2 == 0 { 2 } else { 1 });
            assert_eq!(faces(&l.pd).len(), l.pd.len() + 2);
        }
    }

    #[test]
    fn identify_small_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = identify_torus(&twisted_cubic(), &mut rng, 64, 24).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent, "{r:?}");
        for d in [4, 5] {
            let (c, e) = default_roots(d);
            let (k, _) = quadric_specimen(d, &c, &e).unwrap();
            let r = identify_torus(&k, &mut rng, 64, 24).unwrap();
            assert_eq!(r.verdict, Verdict::Consistent, "{r:?}");
        }
    }
}
