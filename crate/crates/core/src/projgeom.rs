//! Exact projective geometry in RP² and RP³.
//!
//! Points, planes and lines carry rational homogeneous coordinates and are
//! kept in a canonical representative (first nonzero coordinate equal to 1),
//! so `==` is projective equality.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::ratpoly::{det, rat, sign, Rat};
use crate::{Error, Result};

fn canonicalize<const N: usize>(mut c: [Rat; N]) -> Option<[Rat; N]> {
    let first = c.iter().find(|x| !x.is_zero())?.clone();
    for x in c.iter_mut() {
        *x = &*x / &first;
    }
    Some(c)
}

pub fn dot4(a: &[Rat; 4], b: &[Rat; 4]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct ProjPoint3 {
    coords: [Rat; 4],
}

macro_rules! string_array_serde {
    ($ty:ident, $n:expr) => {
        impl TryFrom<Vec<String>> for $ty {
            type Error = Error;
            fn try_from(v: Vec<String>) -> Result<Self> {
                if v.len() != $n {
                    return Err(Error::Parse(format!("expected {} coordinates", $n)));
                }
                let mut c: Vec<Rat> = Vec::with_capacity($n);
                for s in &v {
                    c.push(crate::ratpoly::rat_from_str(s)?);
                }
                let arr: [Rat; $n] = c.try_into().unwrap();
                $ty::new(arr)
            }
        }
        impl From<$ty> for Vec<String> {
            fn from(p: $ty) -> Vec<String> {
                p.coords().iter().map(|r| r.to_string()).collect()
            }
        }
    };
}

impl ProjPoint3 {
    pub fn new(coords: [Rat; 4]) -> Result<Self> {
        canonicalize(coords)
            .map(|coords| ProjPoint3 { coords })
            .ok_or_else(|| Error::DegeneratePosition("all coordinates zero".into()))
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        Self::new(c.map(rat)).expect("nonzero point")
    }

    pub fn coords(&self) -> &[Rat; 4] {
        &self.coords
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| crate::ratpoly::to_f64(&self.coords[i]))
    }
}

string_array_serde!(ProjPoint3, 4);

/// A point or a line of RP², three homogeneous coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct ProjPoint2 {
    coords: [Rat; 3],
}

pub type ProjLine2 = ProjPoint2;

impl ProjPoint2 {
    pub fn new(coords: [Rat; 3]) -> Result<Self> {
        canonicalize(coords)
            .map(|coords| ProjPoint2 { coords })
            .ok_or_else(|| Error::DegeneratePosition("all coordinates zero".into()))
    }

    pub fn from_ints(c: [i64; 3]) -> Self {
        Self::new(c.map(rat)).expect("nonzero point")
    }

    pub fn coords(&self) -> &[Rat; 3] {
        &self.coords
    }

    /// Point `(x : y : 1)` of the affine chart `z = 1`.
    pub fn affine(x: Rat, y: Rat) -> Self {
        Self::new([x, y, Rat::one()]).unwrap()
    }

    /// Dual element: the line through two points, or the meet of two lines.
    pub fn cross(&self, o: &ProjPoint2) -> Result<ProjPoint2> {
        let (a, b) = (&self.coords, &o.coords);
        ProjPoint2::new([
            &a[1] * &b[2] - &a[2] * &b[1],
            &a[2] * &b[0] - &a[0] * &b[2],
            &a[0] * &b[1] - &a[1] * &b[0],
        ])
        .map_err(|_| Error::DegeneratePosition("coincident elements".into()))
    }

    pub fn incident(&self, o: &ProjPoint2) -> bool {
        self.coords.iter().zip(&o.coords).map(|(x, y)| x * y).sum::<Rat>().is_zero()
    }
}

string_array_serde!(ProjPoint2, 3);

/// Plane of RP³ given by its linear form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Plane3 {
    coeffs: [Rat; 4],
}

impl Plane3 {
    pub fn new(coeffs: [Rat; 4]) -> Result<Self> {
        canonicalize(coeffs)
            .map(|coeffs| Plane3 { coeffs })
            .ok_or_else(|| Error::DegeneratePosition("zero linear form".into()))
    }

    pub fn coeffs(&self) -> &[Rat; 4] {
        &self.coeffs
    }

    pub fn contains(&self, p: &ProjPoint3) -> bool {
        dot4(&self.coeffs, p.coords()).is_zero()
    }
}

/// Line of RP³ in Plücker coordinates `(p01, p02, p03, p12, p13, p23)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct ProjLine3 {
    pluecker: [Rat; 6],
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl ProjLine3 {
    pub fn new(pluecker: [Rat; 6]) -> Result<Self> {
        let l = canonicalize(pluecker)
            .map(|pluecker| ProjLine3 { pluecker })
            .ok_or_else(|| Error::DegeneratePosition("zero Plücker vector".into()))?;
        if !l.quadric().is_zero() {
            return Err(Error::DegeneratePosition("Plücker relation violated".into()));
        }
        Ok(l)
    }

    pub fn coords(&self) -> &[Rat; 6] {
        &self.pluecker
    }

    pub fn quadric(&self) -> Rat {
        let p = &self.pluecker;
        &p[0] * &p[5] - &p[1] * &p[4] + &p[2] * &p[3]
    }

    /// Line spanned by two vectors (not necessarily canonical points).
    pub fn through(a: &[Rat; 4], b: &[Rat; 4]) -> Result<Self> {
        let pl = PAIRS.map(|(i, j)| &a[i] * &b[j] - &a[j] * &b[i]);
        Self::new(pl).map_err(|_| Error::DegeneratePosition("points coincide".into()))
    }

    fn entry(&self, i: usize, j: usize) -> Rat {
        if i == j {
            return Rat::zero();
        }
        let (a, b, s) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let k = PAIRS.iter().position(|&p| p == (a, b)).unwrap();
        if s > 0 {
            self.pluecker[k].clone()
        } else {
            -self.pluecker[k].clone()
        }
    }

    /// Two spanning points of the line.
    pub fn points(&self) -> ([Rat; 4], [Rat; 4]) {
        // columns of the primal matrix L = a b^T - b a^T are points of the line
        let cols: Vec<[Rat; 4]> =
            (0..4).map(|j| [0, 1, 2, 3].map(|i| self.entry(i, j))).collect();
        for a in 0..4 {
            for b in a + 1..4 {
                if ProjLine3::through(&cols[a], &cols[b]).is_ok() {
                    return (cols[a].clone(), cols[b].clone());
                }
            }
        }
        unreachable!("rank-2 Plücker matrix has two independent columns")
    }

    /// Reciprocal product; zero iff the two lines meet.
    pub fn reciprocal(&self, o: &ProjLine3) -> Rat {
        let (p, q) = (&self.pluecker, &o.pluecker);
        &p[0] * &q[5] - &p[1] * &q[4] + &p[2] * &q[3] + &p[3] * &q[2] - &p[4] * &q[1]
            + &p[5] * &q[0]
    }

    pub fn meets(&self, o: &ProjLine3) -> bool {
        self.reciprocal(o).is_zero()
    }

    pub fn contains(&self, x: &[Rat; 4]) -> bool {
        let (a, b) = self.points();
        plane_through(&a, &b, x).is_err()
    }
}

string_array_serde!(ProjLine3, 6);

impl ProjPoint3 {
    fn coords_vec(&self) -> &[Rat; 4] {
        &self.coords
    }
}

/// Generalized cross product: the linear form vanishing on `a, b, c`.
pub fn plane_through(a: &[Rat; 4], b: &[Rat; 4], c: &[Rat; 4]) -> Result<Plane3> {
    let mut coeffs: [Rat; 4] = Default::default();
    for k in 0..4 {
        let cols: Vec<usize> = (0..4).filter(|&j| j != k).collect();
        let m: Vec<Vec<Rat>> = [a, b, c]
            .iter()
            .map(|v| cols.iter().map(|&j| v[j].clone()).collect())
            .collect();
        let d = det(m);
        coeffs[k] = if k % 2 == 0 { d } else { -d };
    }
    Plane3::new(coeffs).map_err(|_| Error::DegeneratePosition("points are collinear".into()))
}

/// Incidence constructions.
pub enum JoinMeet<'a> {
    PointPoint(&'a ProjPoint3, &'a ProjPoint3),
    LinePoint(&'a ProjLine3, &'a ProjPoint3),
    LinePlane(&'a ProjLine3, &'a Plane3),
}

pub enum JoinMeetResult {
    Line(ProjLine3),
    Plane(Plane3),
    Point(ProjPoint3),
}

pub fn join_meet(op: JoinMeet<'_>) -> Result<JoinMeetResult> {
    match op {
        JoinMeet::PointPoint(a, b) => join(a, b).map(JoinMeetResult::Line),
        JoinMeet::LinePoint(l, p) => join_line_point(l, p).map(JoinMeetResult::Plane),
        JoinMeet::LinePlane(l, h) => meet_line_plane(l, h).map(JoinMeetResult::Point),
    }
}

pub fn join(a: &ProjPoint3, b: &ProjPoint3) -> Result<ProjLine3> {
    ProjLine3::through(a.coords_vec(), b.coords_vec())
}

pub fn join_line_point(l: &ProjLine3, p: &ProjPoint3) -> Result<Plane3> {
    let (a, b) = l.points();
    plane_through(&a, &b, p.coords_vec())
        .map_err(|_| Error::DegeneratePosition("point lies on the line".into()))
}

pub fn meet_line_plane(l: &ProjLine3, h: &Plane3) -> Result<ProjPoint3> {
    let (a, b) = l.points();
    let ha = dot4(h.coeffs(), &a);
    let hb = dot4(h.coeffs(), &b);
    let x: [Rat; 4] = [0, 1, 2, 3].map(|i| &hb * &a[i] - &ha * &b[i]);
    ProjPoint3::new(x).map_err(|_| Error::DegeneratePosition("line lies in the plane".into()))
}

/// Three independent linear forms vanishing at `p`, the coordinates of the
/// projection from `p` to RP². Null-space basis of the row `p` relative to
/// its first nonzero entry, in increasing index order.
pub fn projection_map(p: &ProjPoint3) -> [[Rat; 4]; 3] {
    let c = p.coords();
    let j = c.iter().position(|x| !x.is_zero()).unwrap();
    let mut forms: Vec<[Rat; 4]> = Vec::with_capacity(3);
    for i in (0..4).filter(|&i| i != j) {
        let mut v: [Rat; 4] = Default::default();
        v[i] = Rat::one();
        v[j] = -&c[i] / &c[j];
        forms.push(v);
    }
    forms.try_into().unwrap()
}

/// Affine chart of RP³: the plane at infinity plus an orientation sign.
/// The frame completing the plane to coordinates `(x1, x2, x3)` is chosen
/// deterministically and flipped on its last row to match the orientation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineChart3 {
    #[serde(with = "crate::ratpoly::rat_vec_serde")]
    infinity: Vec<Rat>,
    orientation: i32,
}

impl AffineChart3 {
    pub fn new(infinity: [Rat; 4], orientation: i32) -> Result<Self> {
        if infinity.iter().all(|x| x.is_zero()) {
            return Err(Error::DegeneratePosition("zero plane at infinity".into()));
        }
        if orientation != 1 && orientation != -1 {
            return Err(Error::InvalidParameters("orientation must be ±1".into()));
        }
        Ok(AffineChart3 { infinity: infinity.to_vec(), orientation })
    }

    /// `x_i = y_i / y_0`, positively oriented.
    pub fn standard() -> Self {
        AffineChart3::new([rat(1), rat(0), rat(0), rat(0)], 1).unwrap()
    }

    pub fn orientation(&self) -> i32 {
        self.orientation
    }

    pub fn infinity(&self) -> [Rat; 4] {
        self.infinity.clone().try_into().unwrap()
    }

    /// Rows `h, l1, l2, l3` with `sign det = orientation`.
    pub fn frame(&self) -> [[Rat; 4]; 4] {
        let h = self.infinity();
        frame_from_rows(h, &[], self.orientation)
    }

    pub fn coords(&self, y: &[Rat; 4]) -> Option<[Rat; 3]> {
        let f = self.frame();
        let hy = dot4(&f[0], y);
        if hy.is_zero() {
            return None;
        }
        Some([1, 2, 3].map(|i| dot4(&f[i], y) / &hy))
    }
}

/// Completes the given leading rows to a basis of the dual space with unit
/// covectors, then flips the last row so that `sign det = orientation`.
pub fn frame_from_rows(first: [Rat; 4], more: &[[Rat; 4]], orientation: i32) -> [[Rat; 4]; 4] {
    let mut rows: Vec<[Rat; 4]> = vec![first];
    rows.extend(more.iter().cloned());
    for k in 0..4 {
        if rows.len() == 4 {
            break;
        }
        let mut e: [Rat; 4] = Default::default();
        e[k] = Rat::one();
        let mut trial = rows.clone();
        trial.push(e);
        if rank(&trial) == trial.len() {
            rows = trial;
        }
    }
    let d = det(rows.iter().map(|r| r.to_vec()).collect());
    if sign(&d) != orientation {
        for x in rows[3].iter_mut() {
            *x = -x.clone();
        }
    }
    rows.try_into().unwrap()
}

pub fn rank(rows: &[[Rat; 4]]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.iter().map(|r| r.to_vec()).collect();
    let mut r = 0;
    for c in 0..4 {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                for k in 0..4 {
                    let v = &f * &m[r][k];
                    m[i][k] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn join_of_coordinate_points() {
        let a = ProjPoint3::from_ints([1, 0, 0, 0]);
        let b = ProjPoint3::from_ints([0, 1, 0, 0]);
        let l = join(&a, &b).unwrap();
        assert_eq!(l.coords().to_vec(), [1, 0, 0, 0, 0, 0].map(rat).to_vec());
        assert!(matches!(join(&a, &a), Err(Error::DegeneratePosition(_))));
    }

    #[test]
    fn meet_axis_with_plane() {
        // line through (1:0:0:0) and (0:0:0:1) meets y3 = 0 at (1:0:0:0)
        let l = join(&ProjPoint3::from_ints([1, 0, 0, 0]), &ProjPoint3::from_ints([0, 0, 0, 1]))
            .unwrap();
        let h = Plane3::new([0, 0, 0, 1].map(rat)).unwrap();
        assert_eq!(meet_line_plane(&l, &h).unwrap(), ProjPoint3::from_ints([1, 0, 0, 0]));
        let inside = Plane3::new([0, 1, 0, 0].map(rat)).unwrap();
        assert!(meet_line_plane(&l, &inside).is_err());
    }

    #[test]
    fn projection_forms() {
        let f = projection_map(&ProjPoint3::from_ints([0, 0, 0, 1]));
        assert_eq!(f[0], [1, 0, 0, 0].map(rat));
        assert_eq!(f[2], [0, 0, 1, 0].map(rat));
        let f = projection_map(&ProjPoint3::from_ints([1, 0, 0, 0]));
        assert_eq!(f[0], [0, 1, 0, 0].map(rat));
        let p = ProjPoint3::from_ints([1, 1, 1, 1]);
        let f = projection_map(&p);
        assert!(f.iter().all(|v| dot4(v, p.coords()).is_zero()));
        assert_eq!(rank(&f), 3);
    }

    #[test]
    fn plane_and_incidence_round_trip() {
        let a = ProjPoint3::from_ints([1, 2, 0, 1]);
        let b = ProjPoint3::from_ints([0, 1, 3, 1]);
        let c = ProjPoint3::from_ints([2, 0, 1, 5]);
        let l = join(&a, &b).unwrap();
        let h = join_line_point(&l, &c).unwrap();
        assert!(h.contains(&a) && h.contains(&b) && h.contains(&c));
        // meeting the join of a,c with a plane containing b alone gives a point on it
        let l2 = join(&a, &c).unwrap();
        let pt = meet_line_plane(&l2, &h);
        assert!(pt.is_err(), "line ac lies in the plane abc");
        assert!(l.contains(a.coords()) && !l.contains(c.coords()));
    }

    #[test]
    fn chart_orientation() {
        let ch = AffineChart3::standard();
        let f = ch.frame();
        assert_eq!(sign(&det(f.iter().map(|r| r.to_vec()).collect())), 1);
        let neg = AffineChart3::new([1, 0, 0, 0].map(rat), -1).unwrap();
        let f = neg.frame();
        assert_eq!(sign(&det(f.iter().map(|r| r.to_vec()).collect())), -1);
    }

    #[test]
    fn serde_strings() {
        let p = ProjPoint3::new([rat(2), rat(1), rat(0), rat(4)]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"["1","1/2","0","2"]"#);
        let q: ProjPoint3 = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }
}
