use num_traits::{One, Zero};

use super::{rat, BiPoly, Rat, UniPoly};
use crate::{Error, Result};

/// Determinant by fraction-carrying Gaussian elimination.
pub fn det(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut acc = Rat::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if piv != col {
            m.swap(piv, col);
            acc = -acc;
        }
        let p = m[col][col].clone();
        acc *= &p;
        let inv = p.recip();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            for c in col..n {
                let v = &f * &m[col][c];
                m[r][c] -= v;
            }
        }
    }
    acc
}

/// Determinant of a small square matrix of polynomials, by cofactor expansion.
pub fn poly_det(m: &[Vec<UniPoly>]) -> UniPoly {
    let n = m.len();
    match n {
        0 => UniPoly::one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = UniPoly::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<UniPoly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, x)| x.clone()).collect()
                    })
                    .collect();
                let term = &m[0][c] * &poly_det(&minor);
                acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Sylvester determinant with explicit formal degrees `m >= deg a`,
/// `n >= deg b`. Specializing the formal resultant commutes with
/// evaluation, which is what the bivariate eliminations rely on.
pub fn sylvester_formal(a: &UniPoly, m: usize, b: &UniPoly, n: usize) -> Rat {
    if m + n == 0 {
        return Rat::one();
    }
    let size = m + n;
    let mut mat = vec![vec![Rat::zero(); size]; size];
    for r in 0..n {
        for k in 0..=m {
            // descending powers
            mat[r][r + k] = a.coeff(m - k);
        }
    }
    for r in 0..m {
        for k in 0..=n {
            mat[n + r][r + k] = b.coeff(n - k);
        }
    }
    det(mat)
}

/// Sylvester resultant of two nonzero polynomials.
pub fn resultant(p: &UniPoly, q: &UniPoly) -> Result<Rat> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(sylvester_formal(p, p.deg(), q, q.deg()))
}

/// `Res_t(a, b)` as a polynomial in `s`, for bivariate polynomials with
/// `t`-degree and `s`-degree bounds read from the inputs. Computed by
/// evaluation at small integers and Newton interpolation.
pub fn sylvester_resultant_bi(a: &BiPoly, b: &BiPoly) -> UniPoly {
    let (m, n) = (a.t_degree(), b.t_degree());
    let bound = m * b.s_degree() + n * a.s_degree();
    let mut xs = Vec::with_capacity(bound + 1);
    let mut ys = Vec::with_capacity(bound + 1);
    for i in 0..=bound as i64 {
        // 0, 1, -1, 2, -2, ...
        let x = if i % 2 == 1 { rat(i / 2 + 1) } else { rat(-(i / 2)) };
        let ya = a.eval_s(&x);
        let yb = b.eval_s(&x);
        ys.push(sylvester_formal(&ya, m, &yb, n));
        xs.push(x);
    }
    UniPoly::interpolate(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&p(&[-1, 0, 1]), &p(&[-2, 1])).unwrap(), rat(3));
        assert_eq!(resultant(&p(&[-1, 1]), &p(&[-1, 1])).unwrap(), rat(0));
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[4, 0, 1])).unwrap(), rat(9));
        assert!(resultant(&UniPoly::zero(), &p(&[1])).is_err());
    }

    #[test]
    fn resultant_is_product_over_roots() {
        // p = (t-1)(t-2)(t+3), q = t^2 + 5: Res = prod q(roots of p)
        let pp = &(&p(&[-1, 1]) * &p(&[-2, 1])) * &p(&[3, 1]);
        let q = p(&[5, 0, 1]);
        let expect = rat(6) * rat(9) * rat(14);
        assert_eq!(resultant(&pp, &q).unwrap(), expect);
    }

    #[test]
    fn bivariate_resultant_matches_pointwise() {
        // a = t^2 - s, b = t - s^2 + 1 : Res_t = (s^2-1)^2 - s
        let a = BiPoly::new(vec![p(&[0, -1]), UniPoly::zero(), p(&[1])]);
        let b = BiPoly::new(vec![p(&[1, 0, -1]), p(&[1])]);
        let r = sylvester_resultant_bi(&a, &b);
        let expect = &(&p(&[-1, 0, 1]) * &p(&[-1, 0, 1])) - &p(&[0, 1]);
        assert_eq!(r, expect);
    }
}
