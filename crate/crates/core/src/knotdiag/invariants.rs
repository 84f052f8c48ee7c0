use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::laurent::LaurentPoly;
use super::pd::PdCode;
use crate::ratpoly::{det, rat, Rat, UniPoly};
use crate::{Error, Result};

/// Largest crossing count accepted by the bracket state sum.
pub const STATE_SUM_BUDGET: usize = 24;

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a] = b;
        }
    }
}

/// Kauffman bracket `<D>` in the variable `A`, normalized so the crossingless
/// unknot is 1. Keys of the result are exponents of `A`, stored doubled.
pub fn kauffman_bracket(pd: &PdCode) -> Result<LaurentPoly> {
    kauffman_bracket_with(pd, STATE_SUM_BUDGET)
}

/// State sum with an explicit crossing budget (at most 40).
pub fn kauffman_bracket_with(pd: &PdCode, budget: usize) -> Result<LaurentPoly> {
    let n = pd.len();
    let budget = budget.min(40);
    if n > budget {
        return Err(Error::TooManyCrossings(n, budget));
    }
    let edges: Vec<usize> = pd.edges().into_iter().collect();
    let index: HashMap<usize, usize> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let xs: Vec<[usize; 4]> = pd.crossings.iter().map(|c| c.edges.map(|e| index[&e])).collect();
    // (a - b, loops) -> number of states
    let mut hist: BTreeMap<(i64, usize), i64> = BTreeMap::new();
    let mut dsu = Dsu::new(edges.len());
    for mask in 0u64..(1u64 << n) {
        for (i, v) in dsu.0.iter_mut().enumerate() {
            *v = i;
        }
        let mut ab = 0i64;
        for (i, [a, b, c, d]) in xs.iter().enumerate() {
            if mask >> i & 1 == 0 {
                dsu.union(*a, *b);
                dsu.union(*c, *d);
                ab += 1;
            } else {
                dsu.union(*a, *d);
                dsu.union(*b, *c);
                ab -= 1;
            }
        }
        let loops = (0..edges.len()).filter(|&i| dsu.find(i) == i).count() + pd.free_loops;
        *hist.entry((ab, loops)).or_insert(0) += 1;
    }
    // d = -A^2 - A^-2, in doubled A-exponent keys
    let d = LaurentPoly::monomial(-1, 4).add(&LaurentPoly::monomial(-1, -4));
    let mut total = LaurentPoly::zero();
    let mut dpow: Vec<LaurentPoly> = vec![LaurentPoly::one()];
    for ((ab, loops), count) in hist {
        while dpow.len() < loops {
            let last = dpow.last().unwrap().mul(&d);
            dpow.push(last);
        }
        let term = dpow[loops.max(1) - 1].shift(2 * ab).scale(count);
        total = total.add(&term);
    }
    Ok(total)
}

/// Jones polynomial `(-A^3)^(-w) <D>` at `A = t^(-1/4)`.
pub fn jones(pd: &PdCode) -> Result<LaurentPoly> {
    jones_with(pd, STATE_SUM_BUDGET)
}

pub fn jones_with(pd: &PdCode, budget: usize) -> Result<LaurentPoly> {
    let b = kauffman_bracket_with(pd, budget)?;
    let w = pd.writhe();
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let f = b.shift(-6 * w).scale(sign);
    let mut out = LaurentPoly::zero();
    for (k2, c) in f.terms() {
        // A^(k2/2) = t^(-k2/8); keys of the result are doubled t-exponents
        if k2 % 4 != 0 {
            return Err(Error::DegeneratePosition("bracket exponent not congruent mod 2".into()));
        }
        out.add_term(-k2 / 4, c);
    }
    Ok(out)
}

/// Alexander polynomial of a knot diagram, up to `±t^k`, symmetrized.
pub fn alexander(pd: &PdCode) -> Result<LaurentPoly> {
    let comps = pd.components();
    if comps != 1 {
        return Err(Error::MultiComponent(comps));
    }
    let n = pd.len();
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    let edges: Vec<usize> = pd.edges().into_iter().collect();
    let index: HashMap<usize, usize> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut dsu = Dsu::new(edges.len());
    for c in &pd.crossings {
        dsu.union(index[&c.over_in()], index[&c.over_out()]);
    }
    let mut arc_of: HashMap<usize, usize> = HashMap::new();
    for i in 0..edges.len() {
        let r = dsu.find(i);
        let next = arc_of.len();
        arc_of.entry(r).or_insert(next);
    }
    let arcs = arc_of.len();
    let arc = |e: usize, dsu: &mut Dsu| arc_of[&dsu.find(index[&e])];
    // rows of (1 - t) at the over arc, t and -1 at the under arcs by sign
    let mut rows: Vec<Vec<(usize, i64, i64)>> = Vec::new(); // (arc, const, t-coeff)
    for c in &pd.crossings {
        let k = arc(c.over_in(), &mut dsu);
        let i = arc(c.under_in(), &mut dsu);
        let j = arc(c.under_out(), &mut dsu);
        let (ti, tj) = if c.sign > 0 { ((0, 1), (-1, 0)) } else { ((-1, 0), (0, 1)) };
        rows.push(vec![(k, 1, -1), (i, ti.0, ti.1), (j, tj.0, tj.1)]);
    }
    let m = n.min(arcs) - 1;
    let eval = |t: &Rat| -> Rat {
        let mut mat = vec![vec![Rat::zero(); m]; m];
        for (r, row) in rows.iter().take(m).enumerate() {
            for &(a, c0, c1) in row {
                if a < m {
                    mat[r][a] += rat(c0) + rat(c1) * t;
                }
            }
        }
        det(mat)
    };
    let xs: Vec<Rat> = (0..=m as i64).map(|i| rat(i + 2)).collect();
    let ys: Vec<Rat> = xs.iter().map(eval).collect();
    let p = UniPoly::interpolate(&xs, &ys);
    let mut out = LaurentPoly::zero();
    for (e, c) in p.coeffs().iter().enumerate() {
        if !c.is_integer() {
            return Err(Error::DegeneratePosition("non-integral Alexander coefficient".into()));
        }
        let v: i64 = c.to_integer().try_into().map_err(|_| Error::DegeneratePosition("overflow".into()))?;
        out.add_term(2 * e as i64, v);
    }
    if out.is_zero() {
        return Err(Error::DegeneratePosition("vanishing Alexander minor".into()));
    }
    Ok(out.symmetrized())
}

/// `(t^(pq) - 1)(t - 1) / ((t^p - 1)(t^q - 1))`, symmetrized.
pub fn alexander_torus_closed_form(p: usize, q: usize) -> LaurentPoly {
    let tm1 = |k: usize| {
        let mut c = vec![Rat::zero(); k + 1];
        c[0] = -Rat::one();
        c[k] = Rat::one();
        UniPoly::new(c)
    };
    let num = &tm1(p * q) * &tm1(1);
    let den = &tm1(p) * &tm1(q);
    let quo = num.exact_div(&den).expect("cyclotomic quotient is exact");
    let mut out = LaurentPoly::zero();
    for (e, c) in quo.coeffs().iter().enumerate() {
        let v: i64 = c.to_integer().try_into().unwrap();
        out.add_term(2 * e as i64, v);
    }
    out.symmetrized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotdiag::pd::{torus_reference, PdCrossing};

    fn trefoil_left() -> PdCode {
        let x = |e: [usize; 4]| PdCrossing { edges: e, sign: -1 };
        PdCode { crossings: vec![x([1, 4, 2, 5]), x([3, 6, 4, 1]), x([5, 2, 6, 3])], free_loops: 0 }
    }

    fn figure_eight() -> PdCode {
        let x = |e: [usize; 4], s: i8| PdCrossing { edges: e, sign: s };
        PdCode {
            crossings: vec![x([4, 2, 5, 1], 1), x([8, 6, 1, 5], 1), x([6, 3, 7, 4], -1), x([2, 7, 3, 8], -1)],
            free_loops: 0,
        }
    }

    #[test]
    fn trefoil_jones() {
        let v = jones(&trefoil_left()).unwrap();
        assert_eq!(v, LaurentPoly::from_terms(&[(-4, -1), (-3, 1), (-1, 1)]));
        let r = jones(&trefoil_left().mirror()).unwrap();
        assert_eq!(r, LaurentPoly::from_terms(&[(4, -1), (3, 1), (1, 1)]));
        assert_eq!(jones(&torus_reference(3, 2).unwrap()).unwrap(), r);
    }

    #[test]
    fn figure_eight_invariants() {
        let f = figure_eight();
        f.validate().unwrap();
        let v = jones(&f).unwrap();
        assert_eq!(v, LaurentPoly::from_terms(&[(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)]));
        assert_eq!(alexander(&f).unwrap(), LaurentPoly::from_terms(&[(-1, -1), (0, 3), (1, -1)]));
    }

    #[test]
    fn trefoil_alexander() {
        let want = LaurentPoly::from_terms(&[(-1, 1), (0, -1), (1, 1)]);
        assert_eq!(alexander(&trefoil_left()).unwrap(), want);
        assert_eq!(alexander(&trefoil_left().mirror()).unwrap(), want);
        assert_eq!(alexander_torus_closed_form(3, 2), want);
    }

    #[test]
    fn torus_53_alexander_matches_closed_form() {
        let d = torus_reference(5, 3).unwrap();
        assert_eq!(alexander(&d).unwrap(), alexander_torus_closed_form(5, 3));
    }

    #[test]
    fn hopf_like_links() {
        let v = jones(&torus_reference(2, 2).unwrap()).unwrap();
        // positive Hopf link: -t^(1/2) - t^(5/2)
        assert_eq!(v, LaurentPoly::monomial(-1, 1).add(&LaurentPoly::monomial(-1, 5)));
        assert!(matches!(alexander(&torus_reference(4, 2).unwrap()), Err(Error::MultiComponent(2))));
        assert_eq!(jones(&PdCode::unknot()).unwrap(), LaurentPoly::one());
    }
}
