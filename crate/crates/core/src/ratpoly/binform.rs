use serde::{Deserialize, Serialize};

use super::{Rat, UniPoly};

/// Binary form of an explicit degree: `sum c_k s^k u^(n-k)`.
///
/// Stored as its dehomogenization `p(t) = f(t, 1)` plus the formal degree;
/// a gap `n - deg p` is a root at infinity of that multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinForm {
    degree: usize,
    poly: UniPoly,
}

impl BinForm {
    pub fn new(degree: usize, poly: UniPoly) -> Self {
        assert!(poly.is_zero() || poly.deg() <= degree, "form degree below polynomial degree");
        BinForm { degree, poly }
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let n = coeffs.len().saturating_sub(1);
        BinForm::new(n, UniPoly::new(coeffs))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dehomogenize(&self) -> UniPoly {
        self.poly.clone()
    }

    pub fn poly(&self) -> &UniPoly {
        &self.poly
    }

    /// Coefficients of `s^k u^(n-k)` for `k = 0..=n`.
    pub fn coeffs(&self) -> Vec<Rat> {
        (0..=self.degree).map(|k| self.poly.coeff(k)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Multiplicity of the root `(1:0)`.
    pub fn infinity_multiplicity(&self) -> usize {
        if self.poly.is_zero() {
            return self.degree;
        }
        self.degree - self.poly.deg()
    }

    pub fn eval(&self, s: &Rat, u: &Rat) -> Rat {
        let mut acc = Rat::default();
        let mut upow = vec![Rat::from_integer(1.into()); self.degree + 1];
        for k in 1..=self.degree {
            upow[k] = &upow[k - 1] * u;
        }
        let mut spow = Rat::from_integer(1.into());
        for k in 0..=self.degree {
            acc += self.poly.coeff(k) * &spow * &upow[self.degree - k];
            spow *= s;
        }
        acc
    }

    pub fn combine(&self, a: &Rat, other: &BinForm, b: &Rat) -> BinForm {
        assert_eq!(self.degree, other.degree);
        BinForm::new(self.degree, &self.poly.scale(a) + &other.poly.scale(b))
    }

    /// Common factor of two forms of the same degree, as a form.
    pub fn gcd(&self, other: &BinForm) -> BinForm {
        let g = self.poly.gcd(&other.poly);
        let inf = self.infinity_multiplicity().min(other.infinity_multiplicity());
        if self.poly.is_zero() {
            return other.clone();
        }
        if other.poly.is_zero() {
            return self.clone();
        }
        BinForm::new(g.deg() + inf, g)
    }

    /// Exact quotient by a factor form.
    pub fn div_exact(&self, g: &BinForm) -> Option<BinForm> {
        let q = self.poly.exact_div(&g.poly)?;
        if g.degree > self.degree {
            return None;
        }
        let ginf = g.infinity_multiplicity();
        if ginf > self.infinity_multiplicity() {
            return None;
        }
        Some(BinForm::new(self.degree - g.degree, q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::rat;

    #[test]
    fn infinity_from_formal_degree() {
        let f = BinForm::new(3, UniPoly::from_ints(&[0, 1]));
        assert_eq!(f.infinity_multiplicity(), 2);
        assert_eq!(f.eval(&rat(1), &rat(0)), rat(0));
        assert_eq!(f.eval(&rat(2), &rat(1)), rat(2));
    }

    #[test]
    fn gcd_keeps_common_infinity() {
        let f = BinForm::new(3, UniPoly::from_ints(&[0, 1])); // s u^2
        let g = BinForm::new(3, UniPoly::from_ints(&[0, 0, 1])); // s^2 u
        let h = f.gcd(&g);
        assert_eq!(h.degree(), 2);
        assert_eq!(h.infinity_multiplicity(), 1);
        let q = f.div_exact(&h).unwrap();
        assert_eq!(q.degree(), 1);
        assert_eq!(q.infinity_multiplicity(), 1);
    }
}
