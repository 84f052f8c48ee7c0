use num_traits::Zero;

use super::{isolate_real_roots, rat, tarski_query, BinForm};
#[cfg(test)]
use super::UniPoly;
use crate::{Error, Result};

/// True iff the form has `degree` real projective roots with multiplicity.
pub fn real_rooted_with_multiplicity(f: &BinForm) -> Result<bool> {
    Ok(isolate_real_roots(f)?.total_multiplicity() == f.degree())
}

/// Topological degree of the map `RP¹ -> RP¹, (s:u) -> (P:Q)`, for forms of
/// equal degree without common roots. Counted with the orientation of
/// increasing `t` on the source and increasing `P/Q` on the target.
pub fn map_degree(p: &BinForm, q: &BinForm) -> Result<i64> {
    let m = p.degree();
    assert_eq!(m, q.degree());
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if m == 0 {
        return Ok(0);
    }
    let (pp, qp) = (p.poly(), q.poly());
    let w = &(&pp.derivative() * qp) - &(pp * &qp.derivative());
    for i in 0..(4 * m as i64 + 16) {
        let a = if i % 2 == 1 { rat(i / 2 + 1) } else { rat(-(i / 2)) };
        let r = pp - &qp.scale(&a);
        if r.coeff(m).is_zero() || !r.is_squarefree() || !r.gcd(&w).is_constant() {
            continue;
        }
        return Ok(tarski_query(&w, &r));
    }
    // every small regular value failed: the forms share a root
    Err(Error::DegeneratePosition("no regular value for pencil map".into()))
}

/// Decides whether every member `λP + μQ` of the real pencil has `m` real
/// projective roots counted with multiplicity.
///
/// Equivalent to real-rootedness of both generators with weakly
/// interlacing roots; decided as: common factor real-rooted and the reduced
/// pencil map `RP¹ -> RP¹` of full degree.
pub fn interlace_check(p: &BinForm, q: &BinForm) -> Result<bool> {
    assert_eq!(p.degree(), q.degree(), "pencil generators of different degree");
    match (p.is_zero(), q.is_zero()) {
        (true, true) => return Err(Error::ZeroPolynomial),
        (true, false) => return real_rooted_with_multiplicity(q),
        (false, true) => return real_rooted_with_multiplicity(p),
        _ => {}
    }
    let g = p.gcd(q);
    if !real_rooted_with_multiplicity(&g)? {
        return Ok(false);
    }
    let p0 = p.div_exact(&g).expect("gcd divides");
    let q0 = q.div_exact(&g).expect("gcd divides");
    let m0 = p0.degree();
    if m0 == 0 {
        return Ok(true);
    }
    // proportional generators leave a constant quotient of degree zero, so m0 > 0
    // here means the reduced forms are coprime and independent.
    Ok(map_degree(&p0, &q0)?.unsigned_abs() as usize == m0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(n: usize, c: &[i64]) -> BinForm {
        BinForm::new(n, UniPoly::from_ints(c))
    }

    #[test]
    fn interlacing_examples() {
        assert!(interlace_check(&form(2, &[-1, 0, 1]), &form(2, &[0, 1])).unwrap());
        assert!(!interlace_check(&form(2, &[1, 0, 1]), &form(2, &[0, 0, 1])).unwrap());
        let a = &UniPoly::from_ints(&[-1, 1]) * &UniPoly::from_ints(&[-3, 1]);
        let b = &UniPoly::from_ints(&[-2, 1]) * &UniPoly::from_ints(&[-4, 1]);
        assert!(interlace_check(&BinForm::new(2, a), &BinForm::new(2, b)).unwrap());
        assert_eq!(
            interlace_check(&form(2, &[]), &form(2, &[])),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn non_interlacing_real_rooted_pair() {
        // roots {1,2} and {3,4}: not interlacing
        let a = &UniPoly::from_ints(&[-1, 1]) * &UniPoly::from_ints(&[-2, 1]);
        let b = &UniPoly::from_ints(&[-3, 1]) * &UniPoly::from_ints(&[-4, 1]);
        assert!(!interlace_check(&BinForm::new(2, a), &BinForm::new(2, b)).unwrap());
    }

    #[test]
    fn common_factor_and_infinity() {
        // P = t(t-2), Q = t as a degree-2 form (root at infinity)
        let p = form(2, &[0, -2, 1]);
        let q = form(2, &[0, 1]);
        assert!(interlace_check(&p, &q).unwrap());
        // P = (t^2+1)t, Q = (t^2+1)(t-1): common non-real factor
        let c = UniPoly::from_ints(&[1, 0, 1]);
        let p = BinForm::new(3, &c * &UniPoly::from_ints(&[0, 1]));
        let q = BinForm::new(3, &c * &UniPoly::from_ints(&[-1, 1]));
        assert!(!interlace_check(&p, &q).unwrap());
    }

    #[test]
    fn map_degree_of_identity_and_square() {
        assert_eq!(map_degree(&form(1, &[0, 1]), &form(1, &[1])).unwrap(), 1);
        // t^2 / 1 covers RP¹ with degree 0
        assert_eq!(map_degree(&form(2, &[0, 0, 1]), &form(2, &[1])).unwrap(), 0);
        // (t^2-1)/t has degree 2
        assert_eq!(map_degree(&form(2, &[-1, 0, 1]), &form(2, &[0, 1])).unwrap(), 2);
    }
}
