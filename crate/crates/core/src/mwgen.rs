//! Specimen curves: the twisted cubic and bidegree `(1, d-1)` curves on the
//! quadric `y0 y3 = y1 y2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::projgeom::AffineChart3;
use crate::ratpoly::{rat, Rat, UniPoly};
use crate::spacecurve::{check_smooth, torsion_profile, SpaceCurve};
use crate::writhe::{generic_center, Census, WritheReport};
use crate::{max_writhe, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveRecipe {
    TwistedCubic,
    QuadricBidegree {
        degree: usize,
        #[serde(with = "crate::ratpoly::rat_vec_serde")]
        c_roots: Vec<Rat>,
        #[serde(with = "crate::ratpoly::rat_vec_serde")]
        e_roots: Vec<Rat>,
        /// Middle coordinates swapped to make the torsion positive.
        swapped: bool,
    },
    /// `base` with `scale * t^power` added to coordinate `coordinate`.
    Perturbed {
        base: Box<CurveRecipe>,
        coordinate: usize,
        power: usize,
        #[serde(with = "crate::ratpoly::rat_serde")]
        scale: Rat,
    },
}

pub fn twisted_cubic() -> SpaceCurve {
    SpaceCurve::from_ints([&[1], &[0, 1], &[0, 0, 1], &[0, 0, 0, 1]]).unwrap()
}

fn from_roots(r: &[Rat]) -> UniPoly {
    r.iter().fold(UniPoly::one(), |acc, x| &acc * &UniPoly::linear_root(x))
}

/// True when the two root lists strictly interlace.
pub fn interlaced(c: &[Rat], e: &[Rat]) -> bool {
    if c.len() != e.len() {
        return false;
    }
    let mut all: Vec<(Rat, u8)> =
        c.iter().map(|x| (x.clone(), 0)).chain(e.iter().map(|x| (x.clone(), 1))).collect();
    all.sort();
    all.windows(2).all(|w| w[0].0 != w[1].0 && w[0].1 != w[1].1)
}

/// `(a c : a e : b c : b e)` with `a = 1`, `b = t` and `c`, `e` monic with the
/// given roots. Smoothness is certified; MW status is not implied.
pub fn quadric_specimen(d: usize, c_roots: &[Rat], e_roots: &[Rat]) -> Result<(SpaceCurve, CurveRecipe)> {
    if d < 3 {
        return Err(Error::InvalidParameters("degree must be at least 3".into()));
    }
    if c_roots.len() != d - 1 || e_roots.len() != d - 1 {
        return Err(Error::InvalidParameters(format!("need {} roots for c and for e", d - 1)));
    }
    let mut seen = c_roots.to_vec();
    seen.extend(e_roots.iter().cloned());
    seen.sort();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::NotSmooth("repeated root".into()));
    }
    let c = from_roots(c_roots);
    let e = from_roots(e_roots);
    let t = UniPoly::monomial(rat(1), 1);
    let y = [c.clone(), e.clone(), &t * &c, &t * &e];
    let mut k = SpaceCurve::new(y).map_err(|e| Error::NotSmooth(e.to_string()))?;
    check_smooth(&k).map_err(|e| Error::NotSmooth(e.to_string()))?;
    let mut swapped = false;
    let prof = torsion_profile(&k, &AffineChart3::standard())?;
    if prof.sign_intervals.iter().all(|a| a.sign < 0) {
        let [y0, y1, y2, y3] = k.y().clone();
        k = SpaceCurve::new([y0, y2, y1, y3])?;
        swapped = true;
    }
    let recipe = CurveRecipe::QuadricBidegree {
        degree: d,
        c_roots: c_roots.to_vec(),
        e_roots: e_roots.to_vec(),
        swapped,
    };
    Ok((k, recipe))
}

/// Standard interlacing data: `c` vanishes at even integers, `e` at odd ones.
pub fn default_roots(d: usize) -> (Vec<Rat>, Vec<Rat>) {
    let n = d as i64 - 1;
    let c = (0..n).map(|i| rat(2 * i - n + 1)).collect();
    let e = (0..n).map(|i| rat(2 * i - n + 2)).collect();
    (c, e)
}

/// Randomized interlacing roots from a seed.
pub fn random_roots(d: usize, seed: u64) -> (Vec<Rat>, Vec<Rat>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 2 * (d - 1);
    let mut pts: Vec<i64> = Vec::new();
    let mut x = -(n as i64);
    for _ in 0..n {
        x += rng.gen_range(1..=3);
        pts.push(x);
    }
    let c = pts.iter().step_by(2).map(|&v| rat(v)).collect();
    let e = pts.iter().skip(1).step_by(2).map(|&v| rat(v)).collect();
    (c, e)
}

#[derive(Clone, Debug, Serialize)]
pub struct MwReport {
    pub degree: usize,
    pub n_d: i64,
    pub torsion_positive: bool,
    pub writhes: Vec<i64>,
    pub censuses: Vec<Census>,
    pub negative_crossings: usize,
    pub census_ok: bool,
    pub is_mw: bool,
    /// Maximally writhed with `w = -N_d`.
    pub mirror_mw: bool,
}

/// Torsion positivity, writhe over `centers` generic centers, and the
/// census expected of an MW curve.
pub fn verify_mw(k: &SpaceCurve, centers: usize, seed: u64) -> Result<MwReport> {
    let d = k.degree();
    let n = max_writhe(d);
    let prof = torsion_profile(k, &AffineChart3::standard())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut writhes = Vec::new();
    let mut censuses = Vec::new();
    let mut negative = 0;
    for _ in 0..centers {
        let (p, _, set) = generic_center(k, &mut rng, 64)?;
        let r = WritheReport::from_set(&p, &set);
        negative += r.negative_crossings;
        writhes.push(r.w);
        censuses.push(r.census);
    }
    let n_u = n as usize;
    let census_ok = censuses.iter().all(|c| {
        (c.solitary == 0 && c.crossing == n_u) || (c.solitary == 1 && c.crossing + 1 == n_u)
    });
    let all_max = writhes.iter().all(|&w| w == n);
    let is_mw = prof.is_positive() && all_max && census_ok && negative == 0;
    let mirror_mw = writhes.iter().all(|&w| w == -n);
    Ok(MwReport {
        degree: d,
        n_d: n,
        torsion_positive: prof.is_positive(),
        writhes,
        censuses,
        negative_crossings: negative,
        census_ok,
        is_mw,
        mirror_mw,
    })
}

/// `k` with `scale * t^power` added to one coordinate.
pub fn perturb(k: &SpaceCurve, coordinate: usize, power: usize, scale: &Rat) -> Result<SpaceCurve> {
    let mut y = k.y().clone();
    y[coordinate] = &y[coordinate] + &UniPoly::monomial(scale.clone(), power);
    SpaceCurve::new(y)
}

/// Projections from `γ(0)` and `γ(1)` have only double points.
fn on_curve_generic(k: &SpaceCurve) -> bool {
    [0, 1].iter().all(|&t| {
        let p = k.point(&crate::spacecurve::Param::int(t));
        crate::projection::project(k, &p).and_then(|pp| crate::projection::double_points(&pp)).is_ok()
    })
}

/// Pushes a quadric specimen off the quadric. On it, the ruling through any
/// point of the curve meets the curve `d - 1` times, so every projection from
/// the curve has a `(d-2)`-fold point once `d >= 5`. Single monomials keep
/// the coefficients small.
fn off_quadric(
    k: &SpaceCurve,
    base: &CurveRecipe,
    seed: u64,
    centers: usize,
) -> Result<Option<(SpaceCurve, CurveRecipe, MwReport)>> {
    let d = k.degree();
    for scale in [rat(1), crate::ratpoly::ratio(1, 4)] {
        for power in 0..d {
            for coordinate in 0..4 {
                let Ok(q) = perturb(k, coordinate, power, &scale) else { continue };
                if check_smooth(&q).is_err() || !on_curve_generic(&q) {
                    continue;
                }
                // same seed, so the full run repeats these centers first
                if !verify_mw(&q, centers.min(3), seed)?.is_mw {
                    continue;
                }
                let r = verify_mw(&q, centers, seed)?;
                if r.is_mw {
                    let recipe = CurveRecipe::Perturbed { base: Box::new(base.clone()), coordinate, power, scale };
                    return Ok(Some((q, recipe, r)));
                }
            }
        }
    }
    Ok(None)
}

/// First verified MW specimen of degree `d` in the quadric family: the
/// default roots, then seeded random interlacing roots. From degree 5 on the
/// specimen is perturbed off the quadric.
pub fn generate(d: usize, seed: u64, budget: usize, centers: usize) -> Result<(SpaceCurve, CurveRecipe, MwReport)> {
    if d == 3 {
        let k = twisted_cubic();
        let r = verify_mw(&k, centers, seed)?;
        return Ok((k, CurveRecipe::TwistedCubic, r));
    }
    let mut tries = vec![default_roots(d)];
    for i in 0..budget as u64 {
        tries.push(random_roots(d, seed.wrapping_add(i)));
    }
    for (c, e) in tries.into_iter().take(budget.max(1)) {
        let Ok((k, recipe)) = quadric_specimen(d, &c, &e) else { continue };
        let r = verify_mw(&k, centers, seed)?;
        if !r.is_mw {
            continue;
        }
        if d < 5 {
            return Ok((k, recipe, r));
        }
        if let Some(found) = off_quadric(&k, &recipe, seed, centers)? {
            return Ok(found);
        }
    }
    Err(Error::SearchFailed(format!("no MW specimen of degree {d} within budget")))
}
