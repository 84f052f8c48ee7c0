//! Rational space curves `t -> (y0(t) : y1(t) : y2(t) : y3(t))` in RP³.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::projgeom::{AffineChart3, ProjLine3, ProjPoint3};
use crate::ratpoly::{
    complex_roots, isolate_roots_of, poly_det, rat, rat_from_str, separate, sign,
    sylvester_resultant_bi, to_f64, BiPoly, Rat, RootInterval, UniPoly,
};
use crate::{Error, Result};

/// A point of the parameter line RP¹.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Param {
    Finite(Rat),
    Infinity,
}

impl Param {
    pub fn int(n: i64) -> Param {
        Param::Finite(rat(n))
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Finite(t) => write!(f, "{t}"),
            Param::Infinity => write!(f, "inf"),
        }
    }
}

impl From<Param> for String {
    fn from(p: Param) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Param {
    type Error = Error;
    fn try_from(s: String) -> Result<Param> {
        if s == "inf" {
            Ok(Param::Infinity)
        } else {
            rat_from_str(&s).map(Param::Finite)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceCurve {
    y: [UniPoly; 4],
    degree: usize,
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    degree: usize,
    coeffs: Vec<Vec<String>>,
}

impl Serialize for SpaceCurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .y
            .iter()
            .map(|p| (0..=self.degree).map(|k| p.coeff(k).to_string()).collect())
            .collect();
        CurveJson { degree: self.degree, coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpaceCurve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CurveJson::deserialize(d)?;
        SpaceCurve::from_json_parts(j).map_err(serde::de::Error::custom)
    }
}

impl SpaceCurve {
    /// Validates degree and absence of base points.
    pub fn new(y: [UniPoly; 4]) -> Result<Self> {
        let degree = y.iter().map(|p| p.deg()).max().unwrap();
        if degree == 0 {
            return Err(Error::DegenerateParametrization("constant map".into()));
        }
        let g = y.iter().fold(UniPoly::zero(), |g, p| g.gcd(p));
        if !g.is_constant() {
            return Err(Error::DegenerateParametrization(format!("base points at roots of {g}")));
        }
        Ok(SpaceCurve { y, degree })
    }

    pub fn from_ints(c: [&[i64]; 4]) -> Result<Self> {
        Self::new(c.map(UniPoly::from_ints))
    }

    fn from_json_parts(j: CurveJson) -> Result<Self> {
        if j.coeffs.len() != 4 {
            return Err(Error::Parse("expected four coordinate polynomials".into()));
        }
        let mut y: Vec<UniPoly> = Vec::new();
        for row in &j.coeffs {
            let c: Result<Vec<Rat>> = row.iter().map(|s| rat_from_str(s)).collect();
            y.push(UniPoly::new(c?));
        }
        let k = SpaceCurve::new(y.try_into().unwrap())?;
        if k.degree != j.degree {
            return Err(Error::Parse(format!(
                "declared degree {} but coordinates have degree {}",
                j.degree, k.degree
            )));
        }
        Ok(k)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: CurveJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_parts(j)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap()
    }

    pub fn y(&self) -> &[UniPoly; 4] {
        &self.y
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The same curve in the parameter `s = 1/t`.
    pub fn reversed(&self) -> SpaceCurve {
        let d = self.degree;
        SpaceCurve { y: self.y.clone().map(|p| p.reversed(d)), degree: d }
    }

    /// Image under a linear change of coordinates `y -> M y`.
    pub fn transform(&self, m: &[[Rat; 4]; 4]) -> Result<SpaceCurve> {
        let y = [0, 1, 2, 3].map(|i| {
            (0..4).fold(UniPoly::zero(), |acc, j| &acc + &self.y[j].scale(&m[i][j]))
        });
        SpaceCurve::new(y)
    }

    /// Reparametrization `t -> (a t + b) / (c t + e)`, homogenized.
    pub fn mobius(&self, a: &Rat, b: &Rat, c: &Rat, e: &Rat) -> Result<SpaceCurve> {
        if (a * e - b * c).is_zero() {
            return Err(Error::InvalidParameters("singular Möbius map".into()));
        }
        let num = UniPoly::new(vec![b.clone(), a.clone()]);
        let den = UniPoly::new(vec![e.clone(), c.clone()]);
        let d = self.degree;
        let nums: Vec<UniPoly> = (0..=d).map(|k| num.pow(k)).collect();
        let dens: Vec<UniPoly> = (0..=d).map(|k| den.pow(k)).collect();
        let y = self.y.clone().map(|p| {
            (0..=d).fold(UniPoly::zero(), |acc, k| {
                &acc + &(&nums[k] * &dens[d - k]).scale(&p.coeff(k))
            })
        });
        SpaceCurve::new(y)
    }

    /// Mirror image: last coordinate negated.
    pub fn mirror(&self) -> SpaceCurve {
        let mut y = self.y.clone();
        y[3] = -&y[3];
        SpaceCurve { y, degree: self.degree }
    }

    pub fn eval(&self, t: &Rat) -> [Rat; 4] {
        [0, 1, 2, 3].map(|i| self.y[i].eval(t))
    }

    pub fn eval_f64(&self, t: f64) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| self.y[i].eval_f64(t))
    }

    pub fn eval_param(&self, p: &Param) -> [Rat; 4] {
        match p {
            Param::Finite(t) => self.eval(t),
            Param::Infinity => [0, 1, 2, 3].map(|i| self.y[i].coeff(self.degree)),
        }
    }

    /// Velocity vector; at infinity the velocity of the `s = 1/t` chart.
    pub fn velocity(&self, p: &Param) -> [Rat; 4] {
        match p {
            Param::Finite(t) => [0, 1, 2, 3].map(|i| self.y[i].derivative().eval(t)),
            Param::Infinity => [0, 1, 2, 3].map(|i| self.y[i].coeff(self.degree - 1)),
        }
    }

    pub fn point(&self, p: &Param) -> ProjPoint3 {
        ProjPoint3::new(self.eval_param(p)).expect("no base points")
    }

    /// The Wronskian `det[y, y', y'', y''']`.
    pub fn wronskian(&self) -> UniPoly {
        let mut rows: Vec<Vec<UniPoly>> = vec![self.y.to_vec()];
        for k in 1..4 {
            let next: Vec<UniPoly> = rows[k - 1].iter().map(|p| p.derivative()).collect();
            rows.push(next);
        }
        // det of the transpose equals det
        poly_det(&rows)
    }

    /// Parameters `t` (finite) where the curve passes through the point `x`,
    /// as the gcd of the 2×2 minors of `[γ(t), x]`.
    pub fn preimage_poly(&self, x: &[Rat; 4]) -> UniPoly {
        let mut g = UniPoly::zero();
        for i in 0..4 {
            for j in i + 1..4 {
                let m = &self.y[i].scale(&x[j]) - &self.y[j].scale(&x[i]);
                g = g.gcd(&m);
            }
        }
        g
    }

    /// True when `x` lies on the curve (complex parameters included).
    pub fn contains(&self, x: &[Rat; 4]) -> bool {
        let g = self.preimage_poly(x);
        if g.is_zero() || !g.is_constant() {
            return true;
        }
        let v = self.eval_param(&Param::Infinity);
        ProjLine3::through(&v, x).is_err()
    }

    /// Parameters at which the curve passes through `x`. On a smooth curve
    /// a real point has at most one preimage, which is then rational.
    pub fn rational_preimages(&self, x: &[Rat; 4]) -> Vec<Param> {
        let mut out = Vec::new();
        let g = self.preimage_poly(x);
        if g.deg() == 1 {
            out.push(Param::Finite(-g.coeff(0) / g.coeff(1)));
        }
        let v = self.eval_param(&Param::Infinity);
        if ProjLine3::through(&v, x).is_err() {
            out.push(Param::Infinity);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImmersionWitness {
    /// Degree of the gcd of the 2×2 minors of `[γ, γ']`; 0 certifies
    /// immersion at every finite complex parameter.
    pub minor_gcd_degree: usize,
    /// Rank of `[γ(∞), γ'(∞)]` in the flipped chart.
    pub rank_at_infinity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InjectivityWitness {
    /// Integer weights of the three combinations of divided minors.
    pub combinations: [[i64; 6]; 3],
    /// Degrees of the two resultants; their gcd is constant.
    pub resultant_degrees: [usize; 2],
    /// Degree of the gcd of the minors of `[γ(t), γ(∞)]`; 0 means no finite
    /// parameter shares the image of `t = ∞`.
    pub infinity_partner_degree: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothnessCertificate {
    pub immersion: ImmersionWitness,
    pub injectivity: InjectivityWitness,
}

fn describe_roots(g: &UniPoly) -> String {
    let roots = complex_roots(g);
    let parts: Vec<String> = roots
        .iter()
        .map(|z| {
            if z.im.abs() < 1e-9 {
                format!("{:.6}", z.re)
            } else {
                format!("{:.6}{:+.6}i", z.re, z.im)
            }
        })
        .collect();
    parts.join(", ")
}

fn minors_gcd(a: &[UniPoly; 4], b: &[UniPoly; 4]) -> UniPoly {
    let mut g = UniPoly::zero();
    for i in 0..4 {
        for j in i + 1..4 {
            g = g.gcd(&(&(&a[i] * &b[j]) - &(&a[j] * &b[i])));
        }
    }
    g
}

fn rank2(a: &[Rat; 4], b: &[Rat; 4]) -> usize {
    if ProjLine3::through(a, b).is_ok() {
        2
    } else if a.iter().chain(b.iter()).all(|x| x.is_zero()) {
        0
    } else {
        1
    }
}

/// Certifies that the curve is a smooth embedded curve over the complex
/// numbers: immersed everywhere, and with no two parameters sharing an image.
pub fn check_smooth(k: &SpaceCurve) -> Result<SmoothnessCertificate> {
    let dy = k.y.clone().map(|p| p.derivative());
    let g = minors_gcd(&k.y, &dy);
    if !g.is_constant() {
        return Err(Error::NotImmersed(describe_roots(&g)));
    }
    let r_inf = rank2(&k.eval_param(&Param::Infinity), &k.velocity(&Param::Infinity));
    if r_inf < 2 {
        return Err(Error::NotImmersed("inf".into()));
    }
    let immersion = ImmersionWitness { minor_gcd_degree: 0, rank_at_infinity: r_inf };

    let v = k.eval_param(&Param::Infinity);
    let partner = k.preimage_poly(&v);
    if !partner.is_constant() {
        return Err(Error::SelfIntersecting(format!("inf and {}", describe_roots(&partner))));
    }

    let mut minors = Vec::with_capacity(6);
    for i in 0..4 {
        for j in i + 1..4 {
            minors.push(BiPoly::divided_minor(&k.y[i], &k.y[j]));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
    let mut last = UniPoly::zero();
    for _attempt in 0..8 {
        let mut w = [[0i64; 6]; 3];
        for row in w.iter_mut() {
            for x in row.iter_mut() {
                *x = rng.gen_range(-7..=7);
            }
        }
        let comb: Vec<BiPoly> = w
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&minors)
                    .fold(BiPoly::new(Vec::new()), |acc, (&c, m)| acc.addmul(&rat(c), m))
            })
            .collect();
        if comb.iter().any(|c| c.is_zero()) {
            continue;
        }
        let r1 = sylvester_resultant_bi(&comb[0], &comb[1]);
        let r2 = sylvester_resultant_bi(&comb[0], &comb[2]);
        if r1.is_zero() || r2.is_zero() {
            continue;
        }
        let gg = r1.gcd(&r2);
        if gg.is_constant() {
            return Ok(SmoothnessCertificate {
                immersion,
                injectivity: InjectivityWitness {
                    combinations: w,
                    resultant_degrees: [r1.deg(), r2.deg()],
                    infinity_partner_degree: 0,
                },
            });
        }
        last = gg;
    }
    if last.is_zero() {
        return Err(Error::SelfIntersecting("a curve of double points".into()));
    }
    Err(Error::SelfIntersecting(describe_roots(&last)))
}

/// The tangent line at a parameter, through `γ(t)` with direction `γ'(t)`.
pub fn tangent_line(k: &SpaceCurve, t: &Param) -> Result<ProjLine3> {
    ProjLine3::through(&k.eval_param(t), &k.velocity(t))
        .map_err(|_| Error::NotImmersed(t.to_string()))
}

/// A real zero of the torsion, or the point `t = ∞`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum TorsionZero {
    Finite(RootInterval),
    Infinity { multiplicity: usize },
}

/// Maximal arc of RP¹ on which the torsion has constant sign. Arc `j` runs
/// from zero `j` to zero `j+1` (cyclically); with no zeros there is a single
/// arc covering everything.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignArc {
    pub from_zero: Option<usize>,
    pub to_zero: Option<usize>,
    pub sample: Param,
    pub sign: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorsionProfile {
    pub orientation: i32,
    /// `orientation · det[γ, γ', γ'', γ''']`, a positive multiple of the
    /// chart torsion determinant away from the chart's plane at infinity.
    pub numerator: UniPoly,
    pub zeros: Vec<TorsionZero>,
    pub sign_intervals: Vec<SignArc>,
    /// Parameters where the curve meets the chart's plane at infinity.
    pub excluded: Vec<RootInterval>,
    pub excluded_infinity: bool,
}

impl TorsionProfile {
    /// Positive everywhere with no zeros.
    pub fn is_positive(&self) -> bool {
        self.zeros.is_empty() && self.sign_intervals.iter().all(|a| a.sign > 0)
    }

    pub fn sign_at(&self, t: &Rat) -> i32 {
        sign(&self.numerator.eval(t))
    }
}

/// Exact sign of `det(r', r'', r''')` for `r` the curve in the given chart,
/// over all of RP¹.
pub fn torsion_profile(k: &SpaceCurve, chart: &AffineChart3) -> Result<TorsionProfile> {
    let h = chart.infinity();
    let hg = (0..4).fold(UniPoly::zero(), |acc, i| &acc + &k.y[i].scale(&h[i]));
    if hg.is_zero() {
        return Err(Error::ChartHitsCurveTangentially);
    }
    // tangential contact only removes finitely many parameters; the sign
    // formula below is chart-free, so only a curve inside the plane fails
    let inf_mult = k.degree - hg.deg();
    let o = chart.orientation();
    let w = k.wronskian();
    if w.is_zero() {
        return Err(Error::DegenerateParametrization("curve lies in a plane".into()));
    }
    let numerator = w.scale(&rat(o as i64));
    let w_inf = k.reversed().wronskian();
    let s_inf = o * sign(&w_inf.coeff(0));

    let mut finite = isolate_roots_of(&w);
    let sq = w.squarefree_part();
    let gaps = separate(&sq, &mut finite);
    let mut zeros: Vec<TorsionZero> = finite.iter().cloned().map(TorsionZero::Finite).collect();
    if s_inf == 0 {
        let m = w_inf.coeffs().iter().take_while(|c| c.is_zero()).count();
        zeros.push(TorsionZero::Infinity { multiplicity: m });
    }
    let sgn = |p: &Param| match p {
        Param::Finite(t) => o * sign(&w.eval(t)),
        Param::Infinity => s_inf,
    };
    let mut arcs = Vec::new();
    let n = zeros.len();
    if n == 0 {
        let sample = Param::Infinity;
        arcs.push(SignArc { from_zero: None, to_zero: None, sign: sgn(&sample), sample });
    } else {
        for (j, g) in gaps.iter().enumerate() {
            let sample = Param::Finite(g.clone());
            arcs.push(SignArc {
                from_zero: Some(j),
                to_zero: Some(j + 1),
                sign: sgn(&sample),
                sample,
            });
        }
        let nf = finite.len();
        if s_inf == 0 {
            if nf > 0 {
                let after = Param::Finite(&finite[nf - 1].hi + Rat::one());
                arcs.push(SignArc {
                    from_zero: Some(nf - 1),
                    to_zero: Some(nf),
                    sign: sgn(&after),
                    sample: after,
                });
                let before = Param::Finite(&finite[0].lo - Rat::one());
                arcs.push(SignArc {
                    from_zero: Some(nf),
                    to_zero: Some(0),
                    sign: sgn(&before),
                    sample: before,
                });
            } else {
                let sample = Param::int(0);
                arcs.push(SignArc { from_zero: Some(0), to_zero: Some(0), sign: sgn(&sample), sample });
            }
        } else {
            let sample = Param::Infinity;
            arcs.push(SignArc {
                from_zero: Some(nf - 1),
                to_zero: Some(0),
                sign: sgn(&sample),
                sample,
            });
        }
    }
    Ok(TorsionProfile {
        orientation: o,
        numerator,
        zeros,
        sign_intervals: arcs,
        excluded: isolate_roots_of(&hg),
        excluded_infinity: inf_mult > 0,
    })
}

/// Approximate real point of the curve in the chart `y0 = 1`, for plotting.
pub fn affine_f64(k: &SpaceCurve, t: f64) -> Option<[f64; 3]> {
    let y = k.eval_f64(t);
    if y[0].abs() < 1e-300 {
        return None;
    }
    Some([y[1] / y[0], y[2] / y[0], y[3] / y[0]])
}

pub fn param_f64(p: &Param) -> f64 {
    match p {
        Param::Finite(t) => to_f64(t),
        Param::Infinity => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::ratio;

    fn cubic() -> SpaceCurve {
        SpaceCurve::from_ints([&[1], &[0, 1], &[0, 0, 1], &[0, 0, 0, 1]]).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let k = cubic();
        let s = k.to_json();
        assert_eq!(
            s,
            r#"{"degree":3,"coeffs":[["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"]]}"#
        );
        assert_eq!(SpaceCurve::from_json(&s).unwrap(), k);
        let bad = r#"{"degree":4,"coeffs":[["1"],["0","1"],["0","0","1"],["0","0","0","1"]]}"#;
        assert!(matches!(SpaceCurve::from_json(bad), Err(Error::Parse(_))));
    }

    #[test]
    fn twisted_cubic_is_smooth() {
        let c = check_smooth(&cubic()).unwrap();
        assert_eq!(c.immersion.rank_at_infinity, 2);
    }

    #[test]
    fn cusp_is_not_immersed() {
        let k = SpaceCurve::from_ints([&[1], &[0, 0, 1], &[0, 0, 0, 1], &[0, 0, 0, 0, 1]]).unwrap();
        assert!(matches!(check_smooth(&k), Err(Error::NotImmersed(_))));
    }

    #[test]
    fn node_is_self_intersecting() {
        let k = SpaceCurve::from_ints([&[1], &[-1, 0, 1], &[0, -1, 0, 1], &[0, 0, 0, 0, 1]]).unwrap();
        match check_smooth(&k) {
            Err(Error::SelfIntersecting(msg)) => assert!(msg.contains("1.000000"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tangent_lines_of_cubic() {
        let k = cubic();
        let l = tangent_line(&k, &Param::int(0)).unwrap();
        assert_eq!(l, ProjLine3::through(&[1, 0, 0, 0].map(rat), &[0, 1, 0, 0].map(rat)).unwrap());
        let l = tangent_line(&k, &Param::Infinity).unwrap();
        assert_eq!(l, ProjLine3::through(&[0, 0, 0, 1].map(rat), &[0, 0, 1, 0].map(rat)).unwrap());
        let l = tangent_line(&k, &Param::int(1)).unwrap();
        assert_eq!(l, ProjLine3::through(&[1, 1, 1, 1].map(rat), &[0, 1, 2, 3].map(rat)).unwrap());
    }

    #[test]
    fn torsion_signs() {
        let k = cubic();
        let p = torsion_profile(&k, &AffineChart3::standard()).unwrap();
        assert_eq!(p.numerator, UniPoly::from_ints(&[12]));
        assert!(p.is_positive());
        let p = torsion_profile(&k.mirror(), &AffineChart3::standard()).unwrap();
        assert_eq!(p.numerator, UniPoly::from_ints(&[-12]));
        assert!(!p.is_positive());
        // (t, t^2 + t^3, -t^3 + t^4) is negatively twisted near 0
        let k = SpaceCurve::from_ints([&[1], &[0, 1], &[0, 0, 1, 1], &[0, 0, 0, -1, 1]]).unwrap();
        let p = torsion_profile(&k, &AffineChart3::standard()).unwrap();
        assert_eq!(p.sign_at(&ratio(1, 100)), -1);
    }

    #[test]
    fn torsion_zero_splits_arcs() {
        // (1 : t : t^2 : t^4) has torsion 24 t, zero at 0 and at infinity
        let k = SpaceCurve::from_ints([&[1], &[0, 1], &[0, 0, 1], &[0, 0, 0, 0, 1]]).unwrap();
        let p = torsion_profile(&k, &AffineChart3::standard()).unwrap();
        assert_eq!(p.zeros.len(), 2);
        let signs: Vec<i32> = p.sign_intervals.iter().map(|a| a.sign).collect();
        assert_eq!(signs, vec![1, -1]);
    }

    #[test]
    fn mobius_keeps_smoothness() {
        let k = cubic().mobius(&rat(2), &rat(1), &rat(1), &rat(3)).unwrap();
        assert_eq!(k.degree(), 3);
        check_smooth(&k).unwrap();
        assert!(torsion_profile(&k, &AffineChart3::standard()).unwrap().is_positive());
    }
}
