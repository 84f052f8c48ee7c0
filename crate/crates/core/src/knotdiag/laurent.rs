use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

/// Integer Laurent polynomial in `t^(1/2)`: keys are twice the exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(1, 0)
    }

    /// `c t^(half/2)`.
    pub fn monomial(c: i64, half: i64) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(half, c);
        p
    }

    /// From `(exponent, coefficient)` pairs with integer exponents.
    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        let mut p = LaurentPoly::zero();
        for &(e, c) in terms {
            p.add_term(2 * e, c);
        }
        p
    }

    pub fn add_term(&mut self, half: i64, c: i64) {
        let v = self.terms.entry(half).or_insert(0);
        *v += c;
        if *v == 0 {
            self.terms.remove(&half);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(twice exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }

    pub fn min_half(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_half(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn mul(&self, o: &LaurentPoly) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (a, x) in self.terms() {
            for (b, y) in o.terms() {
                p.add_term(a + b, x * y);
            }
        }
        p
    }

    pub fn add(&self, o: &LaurentPoly) -> LaurentPoly {
        let mut p = self.clone();
        for (k, v) in o.terms() {
            p.add_term(k, v);
        }
        p
    }

    pub fn scale(&self, c: i64) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (k, v) in self.terms() {
            p.add_term(k, v * c);
        }
        p
    }

    /// Multiply by `t^(half/2)`.
    pub fn shift(&self, half: i64) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(k, v)| (k + half, *v)).collect() }
    }

    /// Substitute `t -> t^-1`.
    pub fn mirror(&self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(k, v)| (-k, *v)).collect() }
    }

    /// Value at `t = 1` (half-integer exponents ignored as `1^(1/2) = 1`).
    pub fn at_one(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Representative of the class under multiplication by `±t^k`: exponents
    /// centered on zero (or `1/2`) and positive value at `t = 1`, or positive
    /// leading coefficient when that value is zero.
    pub fn symmetrized(&self) -> LaurentPoly {
        let (Some(lo), Some(hi)) = (self.min_half(), self.max_half()) else {
            return self.clone();
        };
        // shift by an even number of halves (an integer power of t)
        let mid = lo + hi;
        let shift = -(mid.div_euclid(4)) * 2;
        let mut p = self.shift(shift);
        let s = p.at_one();
        let lead = p.terms.values().next_back().copied().unwrap_or(1);
        if s < 0 || (s == 0 && lead < 0) {
            p = p.scale(-1);
        }
        p
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().rev().enumerate() {
            let (k, c) = (*k, *c);
            match (i, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let mono = match k {
                0 => String::new(),
                2 => "t".to_string(),
                _ if k % 2 == 0 => format!("t^{}", k / 2),
                _ => format!("t^({k}/2)"),
            };
            match (mono.is_empty(), a) {
                (true, _) => write!(f, "{a}")?,
                (false, 1) => write!(f, "{mono}")?,
                (false, _) => write!(f, "{a}{mono}")?,
            }
        }
        Ok(())
    }
}

/// Serialized as `[[exponent, coefficient], ...]`, exponents as strings so
/// that half-integers stay exact (`"3/2"`).
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(String, i64)> = self
            .terms
            .iter()
            .map(|(k, c)| (if k % 2 == 0 { (k / 2).to_string() } else { format!("{k}/2") }, *c))
            .collect();
        v.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let p = LaurentPoly::from_terms(&[(1, 1), (3, 1), (4, -1)]);
        assert_eq!(p.to_string(), "-t^4 + t^3 + t");
        assert_eq!(p.mirror().to_string(), "t^-1 + t^-3 - t^-4");
        let q = LaurentPoly::from_terms(&[(0, 1), (1, -1)]).mul(&LaurentPoly::from_terms(&[(0, 1), (1, 1)]));
        assert_eq!(q, LaurentPoly::from_terms(&[(0, 1), (2, -1)]));
    }

    #[test]
    fn symmetrize() {
        let p = LaurentPoly::from_terms(&[(0, -1), (1, 1), (2, -1)]);
        assert_eq!(p.symmetrized(), LaurentPoly::from_terms(&[(-1, 1), (0, -1), (1, 1)]));
    }
}
