//! Tangent lines of the real curve, viewpoint classification and the
//! intersection counts of planes through the two hyperbolic lines.

use serde::Serialize;

use crate::hyperbolicity::plane_pullbacks;
use crate::projection::{double_points, has_cusp, project, DoublePointKind};
use crate::projgeom::{ProjLine3, ProjPoint3};
use crate::ratpoly::{from_f64, isolate_real_roots, rat, Rat};
use crate::spacecurve::{tangent_line, Param, SpaceCurve};
use crate::writhe::Census;
use crate::{max_writhe, Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct TangentFamily {
    pub params: Vec<Param>,
    pub lines: Vec<ProjLine3>,
}

/// `n` parameters spread over RP¹, starting at infinity.
pub fn param_grid(n: usize) -> Vec<Param> {
    let mut out: Vec<Param> = vec![Param::Infinity];
    for i in 1..n {
        let th = std::f64::consts::PI * (i as f64 / n as f64 - 0.5);
        let t = Param::Finite(from_f64(th.tan(), 12));
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

pub fn tangent_family(k: &SpaceCurve, params: &[Param]) -> Result<TangentFamily> {
    let lines = params.iter().map(|t| tangent_line(k, t)).collect::<Result<Vec<_>>>()?;
    Ok(TangentFamily { params: params.to_vec(), lines })
}

#[derive(Clone, Debug, Serialize)]
pub struct TangentCheck {
    pub disjoint: bool,
    pub pairs: usize,
    pub violation: Option<(Param, Param)>,
}

/// Exact pairwise disjointness of the tangent lines at the given parameters.
pub fn check_tangent_disjointness_at(k: &SpaceCurve, params: &[Param]) -> Result<TangentCheck> {
    let fam = tangent_family(k, params)?;
    let mut pairs = 0;
    for i in 0..fam.lines.len() {
        for j in i + 1..fam.lines.len() {
            pairs += 1;
            if fam.lines[i].meets(&fam.lines[j]) {
                return Ok(TangentCheck {
                    disjoint: false,
                    pairs,
                    violation: Some((fam.params[i].clone(), fam.params[j].clone())),
                });
            }
        }
    }
    Ok(TangentCheck { disjoint: true, pairs, violation: None })
}

pub fn check_tangent_disjointness(k: &SpaceCurve, n: usize) -> Result<TangentCheck> {
    check_tangent_disjointness_at(k, &param_grid(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Region {
    U1,
    U2,
    #[serde(rename = "ON_T")]
    OnT,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionLabel {
    pub point: ProjPoint3,
    pub label: Region,
    pub census: Option<Census>,
    pub writhe: Option<i64>,
}

/// Label of a viewpoint off the curve by the double point census of its
/// projection: no solitary node, one solitary node, or a cusp.
pub fn classify_viewpoint(k: &SpaceCurve, p: &ProjPoint3) -> Result<RegionLabel> {
    if k.contains(p.coords()) {
        return Err(Error::PointOnCurve);
    }
    let pp = project(k, p)?;
    if has_cusp(&pp) {
        return Ok(RegionLabel { point: p.clone(), label: Region::OnT, census: None, writhe: None });
    }
    let set = double_points(&pp)?;
    if !set.report.is_generic() {
        return Err(Error::NonGenericProjection(format!("{:?}", set.report)));
    }
    let census = Census::of(&set);
    let w: i64 = set.points.iter().map(|d| d.sign as i64).sum();
    let n = max_writhe(k.degree());
    if w != n {
        return Err(Error::NotMW(format!("writhe {w}, expected {n}")));
    }
    let label = match (census.solitary, set.count(DoublePointKind::ImaginaryPair)) {
        (0, 0) => Region::U1,
        (1, 0) => Region::U2,
        _ => return Err(Error::AmbiguousCensus(format!("{census:?}"))),
    };
    Ok(RegionLabel { point: p.clone(), label, census: Some(census), writhe: Some(w) })
}

/// Real intersections of the curve with a transverse real plane through `l`.
pub fn plane_count(k: &SpaceCurve, l: &ProjLine3) -> Result<usize> {
    let (f, g) = plane_pullbacks(k, l);
    for i in 0..32i64 {
        let a = if i % 2 == 1 { rat(i / 2 + 1) } else { rat(-(i / 2)) };
        let h = f.combine(&Rat::from_integer(1.into()), &g, &a);
        if h.is_zero() || h.infinity_multiplicity() > 1 {
            continue;
        }
        let p = h.poly();
        if !p.is_squarefree() {
            continue;
        }
        let iso = isolate_real_roots(&h)?;
        return Ok(iso.total_multiplicity());
    }
    Err(Error::NonTransversePlane)
}

/// Real intersection counts of transverse planes through `l1` and `l2`.
pub fn winding_classes(k: &SpaceCurve, l1: &ProjLine3, l2: &ProjLine3) -> Result<(usize, usize)> {
    Ok((plane_count(k, l1)?, plane_count(k, l2)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mwgen::twisted_cubic;

    #[test]
    fn twisted_cubic_tangents_disjoint() {
        let c = check_tangent_disjointness(&twisted_cubic(), 20).unwrap();
        assert!(c.disjoint);
        assert_eq!(c.pairs, 190);
    }

    #[test]
    fn nodal_quartic_tangents_meet() {
        let k = SpaceCurve::from_ints([&[1], &[-1, 0, 1], &[0, -1, 0, 1], &[0, 0, 0, 0, 1]]).unwrap();
        let c = check_tangent_disjointness_at(&k, &[Param::int(0), Param::int(-1), Param::int(1)]).unwrap();
        assert_eq!(c.violation, Some((Param::int(-1), Param::int(1))));
    }

    #[test]
    fn viewpoints_of_twisted_cubic() {
        let k = twisted_cubic();
        let a = classify_viewpoint(&k, &ProjPoint3::from_ints([0, 1, 0, 1])).unwrap();
        assert_eq!(a.label, Region::U1);
        let b = classify_viewpoint(&k, &ProjPoint3::from_ints([0, 1, 0, -1])).unwrap();
        assert_eq!(b.label, Region::U2);
        let c = classify_viewpoint(&k, &ProjPoint3::from_ints([1, 1, 0, 0])).unwrap();
        assert_eq!(c.label, Region::OnT);
        assert!(matches!(
            classify_viewpoint(&k.mirror(), &ProjPoint3::from_ints([0, 1, 0, 1])),
            Err(Error::NotMW(_))
        ));
    }

    #[test]
    fn twisted_cubic_winding() {
        let k = twisted_cubic();
        let h = crate::hyperbolicity::find_hyperbolic_lines(&k, 0, 16).unwrap();
        assert_eq!(winding_classes(&k, &h.l1, &h.l2).unwrap(), (3, 1));
    }

    #[test]
    fn line_labels_and_winding_for_quadric_specimens() {
        for d in 3..=5 {
            let k = if d == 3 {
                twisted_cubic()
            } else {
                let (c, e) = crate::mwgen::default_roots(d);
                crate::mwgen::quadric_specimen(d, &c, &e).unwrap().0
            };
            let h = crate::hyperbolicity::find_hyperbolic_lines(&k, 0, 24).unwrap();
            assert_eq!(winding_classes(&k, &h.l1, &h.l2).unwrap(), (d, d - 2));
            for (line, want) in [(&h.l1, Region::U1), (&h.l2, Region::U2)] {
                let (a, b) = line.points();
                for j in [1i64, 2, -3] {
                    let p: [Rat; 4] = [0, 1, 2, 3].map(|i| &a[i] + &b[i] * rat(j));
                    let p = ProjPoint3::new(p).unwrap();
                    match classify_viewpoint(&k, &p) {
                        Ok(l) => assert_eq!(l.label, want, "d={d} j={j}"),
                        Err(e) => eprintln!("d={d} j={j}: {e}"),
                    }
                }
            }
        }
    }
}
