use super::{Rat, UniPoly};

/// Polynomial in `(s, t)` stored as coefficients of powers of `t`, each a
/// polynomial in `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly {
    t_coeffs: Vec<UniPoly>,
}

impl BiPoly {
    pub fn new(mut t_coeffs: Vec<UniPoly>) -> Self {
        while t_coeffs.last().is_some_and(|c| c.is_zero()) {
            t_coeffs.pop();
        }
        BiPoly { t_coeffs }
    }

    pub fn t_degree(&self) -> usize {
        self.t_coeffs.len().saturating_sub(1)
    }

    pub fn s_degree(&self) -> usize {
        self.t_coeffs.iter().map(|c| c.deg()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.t_coeffs.is_empty()
    }

    /// Specialization at `s = x`, a polynomial in `t`.
    pub fn eval_s(&self, x: &Rat) -> UniPoly {
        UniPoly::new(self.t_coeffs.iter().map(|c| c.eval(x)).collect())
    }

    pub fn eval(&self, s: &Rat, t: &Rat) -> Rat {
        self.eval_s(s).eval(t)
    }

    pub fn eval_f64(&self, s: f64, t: f64) -> f64 {
        self.t_coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c.eval_f64(s))
    }

    pub fn addmul(&self, c: &Rat, other: &BiPoly) -> BiPoly {
        let n = self.t_coeffs.len().max(other.t_coeffs.len());
        let zero = UniPoly::zero();
        BiPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.t_coeffs.get(i).unwrap_or(&zero);
                    let b = other.t_coeffs.get(i).unwrap_or(&zero);
                    a + &b.scale(c)
                })
                .collect(),
        )
    }

    /// `(a(s) b(t) - b(s) a(t)) / (s - t)`, an exact symmetric polynomial.
    pub fn divided_minor(a: &UniPoly, b: &UniPoly) -> BiPoly {
        let n = a.coeffs().len().max(b.coeffs().len());
        if n == 0 {
            return BiPoly::new(Vec::new());
        }
        // coefficient grid c[i][j] of s^i t^j
        let mut grid = vec![vec![Rat::default(); n]; n];
        for k in 0..n {
            for l in 0..k {
                // a_k b_l - a_l b_k multiplies (s^k t^l - s^l t^k)/(s-t)
                let w = a.coeff(k) * b.coeff(l) - a.coeff(l) * b.coeff(k);
                if w == Rat::default() {
                    continue;
                }
                // s^l t^l * sum_{j=0}^{k-l-1} s^j t^{k-l-1-j}
                for j in 0..(k - l) {
                    grid[l + j][l + (k - l - 1 - j)] += &w;
                }
            }
        }
        let t_coeffs = (0..n)
            .map(|j| UniPoly::new((0..n).map(|i| grid[i][j].clone()).collect()))
            .collect();
        BiPoly::new(t_coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::rat;

    #[test]
    fn divided_minor_is_exact_quotient() {
        let a = UniPoly::from_ints(&[1, 2, 0, 5]);
        let b = UniPoly::from_ints(&[-3, 0, 1, 1]);
        let d = BiPoly::divided_minor(&a, &b);
        for (s, t) in [(2i64, 5i64), (-1, 3), (4, -7)] {
            let (s, t) = (rat(s), rat(t));
            let num = a.eval(&s) * b.eval(&t) - b.eval(&s) * a.eval(&t);
            assert_eq!(d.eval(&s, &t) * (&s - &t), num);
            assert_eq!(d.eval(&s, &t), d.eval(&t, &s));
        }
    }
}
