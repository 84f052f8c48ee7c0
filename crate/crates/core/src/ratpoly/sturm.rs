use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{dyadic, rat, sign, BinForm, Rat, UniPoly};
use crate::{Error, Result};

/// Signed remainder sequence `a, b, -rem(a,b), ...`.
pub fn signed_remainder_sequence(a: &UniPoly, b: &UniPoly) -> Vec<UniPoly> {
    let mut seq = vec![a.clone(), b.clone()];
    if b.is_zero() {
        seq.pop();
        return seq;
    }
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        // positive rescaling keeps sign variations intact and the numbers small
        let lcabs = r.lc().abs();
        seq.push((-&r).scale(&lcabs.recip()));
    }
    seq
}

pub fn sturm_sequence(p: &UniPoly) -> Vec<UniPoly> {
    signed_remainder_sequence(p, &p.derivative())
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut v = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn var_at(seq: &[UniPoly], x: &Rat) -> usize {
    variations(seq.iter().map(|p| sign(&p.eval(x))))
}

fn var_at_pos_inf(seq: &[UniPoly]) -> usize {
    variations(seq.iter().map(|p| sign(&p.lc())))
}

fn var_at_neg_inf(seq: &[UniPoly]) -> usize {
    variations(seq.iter().map(|p| {
        let s = sign(&p.lc());
        if p.deg() % 2 == 1 {
            -s
        } else {
            s
        }
    }))
}

/// Number of distinct real roots of `p` in `(lo, hi]`.
pub fn sturm_count(p: &UniPoly, lo: &Rat, hi: &Rat) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let seq = sturm_sequence(p);
    Ok(sturm_count_seq(&seq, lo, hi))
}

fn sturm_count_seq(seq: &[UniPoly], lo: &Rat, hi: &Rat) -> usize {
    var_at(seq, lo).saturating_sub(var_at(seq, hi))
}

/// Number of distinct real roots of `p` on the whole line.
pub fn real_root_count(p: &UniPoly) -> usize {
    if p.is_constant() {
        return 0;
    }
    let seq = sturm_sequence(p);
    var_at_neg_inf(&seq) - var_at_pos_inf(&seq)
}

/// Tarski query: `#{p=0, q>0} - #{p=0, q<0}` over the real roots of `p`.
pub fn tarski_query(q: &UniPoly, p: &UniPoly) -> i64 {
    if p.is_constant() {
        return 0;
    }
    let seq = signed_remainder_sequence(p, &(&p.derivative() * q));
    var_at_neg_inf(&seq) as i64 - var_at_pos_inf(&seq) as i64
}

/// An isolating interval `(lo, hi]` holding exactly one distinct real root,
/// or the exact root when `lo == hi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootInterval {
    #[serde(with = "super::rat_serde")]
    pub lo: Rat,
    #[serde(with = "super::rat_serde")]
    pub hi: Rat,
    pub multiplicity: usize,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / rat(2)
    }

    pub fn approx(&self) -> f64 {
        super::to_f64(&self.midpoint())
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    /// Bisects until the width is below `2^-bits`; `p` must be squarefree
    /// with this interval isolating one of its roots.
    pub fn refine(&mut self, p: &UniPoly, bits: u32) {
        let target = dyadic(bits);
        if self.is_exact() {
            return;
        }
        let shi = sign(&p.eval(&self.hi));
        if shi == 0 {
            self.lo = self.hi.clone();
            return;
        }
        while self.width() > target {
            let mid = self.midpoint();
            let sm = sign(&p.eval(&mid));
            if sm == 0 {
                self.lo = mid.clone();
                self.hi = mid;
                return;
            }
            if sm == shi {
                self.hi = mid;
            } else {
                self.lo = mid;
            }
        }
    }
}

/// Real projective roots of a binary form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootIsolation {
    pub intervals: Vec<RootInterval>,
    pub includes_infinity: bool,
    pub infinity_multiplicity: usize,
}

impl RootIsolation {
    pub fn total_multiplicity(&self) -> usize {
        self.intervals.iter().map(|r| r.multiplicity).sum::<usize>() + self.infinity_multiplicity
    }

    pub fn distinct(&self) -> usize {
        self.intervals.len() + usize::from(self.includes_infinity)
    }
}

fn cauchy_bound(p: &UniPoly) -> Rat {
    let lc = p.lc().abs();
    let m = p
        .coeffs()
        .iter()
        .take(p.deg())
        .map(|c| c.abs() / &lc)
        .fold(Rat::zero(), |a, b| if b > a { b } else { a });
    let bound = m + Rat::one();
    let mut pow = Rat::one();
    while pow < bound {
        pow *= rat(2);
    }
    pow
}

/// Isolating intervals (ascending) for the distinct real roots of `p`.
/// Endpoints are dyadic rationals.
pub fn isolate_roots_of(p: &UniPoly) -> Vec<RootInterval> {
    if p.is_constant() {
        return Vec::new();
    }
    let sq = p.squarefree_part();
    let seq = sturm_sequence(&sq);
    let b = cauchy_bound(&sq);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = sturm_count_seq(&seq, &lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            if sq.eval(&hi).is_zero() {
                out.push(RootInterval { lo: hi.clone(), hi, multiplicity: 1 });
            } else {
                out.push(RootInterval { lo, hi, multiplicity: 1 });
            }
            continue;
        }
        let mid = (&lo + &hi) / rat(2);
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    // multiplicities from the squarefree decomposition
    let dec = p.squarefree_decomposition();
    for iv in out.iter_mut() {
        for (f, k) in &dec {
            let hit = if iv.is_exact() {
                f.eval(&iv.lo).is_zero()
            } else {
                sturm_count(f, &iv.lo, &iv.hi).unwrap_or(0) > 0
            };
            if hit {
                iv.multiplicity = *k;
                break;
            }
        }
    }
    out
}

/// All real projective roots of `f` with multiplicities; the root at
/// infinity is reported when the leading coefficients vanish.
pub fn isolate_real_roots(f: &BinForm) -> Result<RootIsolation> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p = f.dehomogenize();
    let inf = f.degree() - p.deg();
    Ok(RootIsolation {
        intervals: isolate_roots_of(&p),
        includes_infinity: inf > 0,
        infinity_multiplicity: inf,
    })
}

/// Refines sorted isolating intervals of the squarefree `p` until
/// consecutive ones are strictly separated, and returns one rational gap
/// point between each consecutive pair (no root of `p` in between).
pub fn separate(p: &UniPoly, intervals: &mut [RootInterval]) -> Vec<Rat> {
    let mut gaps = Vec::new();
    for k in 1..intervals.len() {
        let mut bits = 1;
        while intervals[k - 1].hi >= intervals[k].lo {
            let w = intervals[k - 1].width().max(intervals[k].width());
            while dyadic(bits) >= w && bits < 4096 {
                bits += 1;
            }
            intervals[k - 1].refine(p, bits);
            intervals[k].refine(p, bits);
            bits += 1;
        }
        gaps.push((&intervals[k - 1].hi + &intervals[k].lo) / rat(2));
    }
    gaps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::ratio;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn separated_gaps() {
        // roots 0, 1/2, 1 with the middle one on a dyadic endpoint
        let f = &(&p(&[0, 1]) * &p(&[-1, 2])) * &p(&[-1, 1]);
        let mut iv = isolate_roots_of(&f);
        let gaps = separate(&f, &mut iv);
        assert_eq!(gaps.len(), 2);
        assert!(gaps[0] > rat(0) && gaps[0] < ratio(1, 2));
        assert!(gaps[1] > ratio(1, 2) && gaps[1] < rat(1));
    }

    #[test]
    fn sturm_examples() {
        assert_eq!(sturm_count(&p(&[-1, 0, 1]), &rat(-2), &rat(2)).unwrap(), 2);
        assert_eq!(sturm_count(&p(&[1, 0, 1]), &rat(-10), &rat(10)).unwrap(), 0);
        assert_eq!(sturm_count(&p(&[1, -3, 0, 1]), &rat(-2), &rat(2)).unwrap(), 3);
        assert_eq!(sturm_count(&UniPoly::zero(), &rat(0), &rat(1)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn cubic_roots_match_numerics() {
        // t^3 - 3t + 1 has roots 2cos(2πk/9 ...) ≈ -1.879, 0.347, 1.532
        let f = p(&[1, -3, 0, 1]);
        let roots = isolate_roots_of(&f);
        let expect = [-1.8793852415718, 0.3472963553339, 1.5320888862380];
        assert_eq!(roots.len(), 3);
        for (mut r, e) in roots.into_iter().zip(expect) {
            r.refine(&f, 50);
            assert!((r.approx() - e).abs() < 1e-12);
        }
    }

    #[test]
    fn isolation_of_forms() {
        let iso = isolate_real_roots(&BinForm::new(2, p(&[-1, 0, 1]))).unwrap();
        assert_eq!(iso.intervals.len(), 2);
        assert!(!iso.includes_infinity);
        let iso = isolate_real_roots(&BinForm::new(2, p(&[0, 1]))).unwrap();
        assert_eq!(iso.intervals.len(), 1);
        let iv = &iso.intervals[0];
        assert!(iv.lo < rat(0) && iv.hi >= rat(0) || iv.is_exact() && iv.lo == rat(0));
        assert!(iso.includes_infinity);
        assert_eq!(iso.infinity_multiplicity, 1);
        let iso = isolate_real_roots(&BinForm::new(2, p(&[1, -2, 1]))).unwrap();
        assert_eq!(iso.intervals.len(), 1);
        assert_eq!(iso.intervals[0].multiplicity, 2);
        assert_eq!(iso.total_multiplicity(), 2);
    }

    #[test]
    fn tarski_counts_signs() {
        // roots ±1, q = t: one positive, one negative
        assert_eq!(tarski_query(&p(&[0, 1]), &p(&[-1, 0, 1])), 0);
        assert_eq!(tarski_query(&p(&[1]), &p(&[-1, 0, 1])), 2);
        assert_eq!(tarski_query(&p(&[-3, 1]), &p(&[-1, 0, 1])), -2);
    }
}
