use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{rat, to_f64, Complex, Rat};

/// Univariate polynomial with rational coefficients in ascending powers.
/// The coefficient list never has a trailing zero; the zero polynomial is
/// the empty list.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UniPoly {
    #[serde(with = "super::rat_vec_serde")]
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `t - r`
    pub fn linear_root(r: &Rat) -> Self {
        Self::new(vec![-r.clone(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UniPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = self.lc().recip();
        self.scale(&inv)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn eval_complex(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, c| acc * z + Complex::new(to_f64(c), 0.0))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    /// `t^k * self`
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Rat::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs: v }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor, which callers rule out.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.deg();
        if self.is_zero() || self.deg() < dd {
            return (Self::zero(), self.clone());
        }
        let inv = d.lc().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); self.deg() - dd + 1];
        for k in (dd..rem.len()).rev() {
            let c = &rem[k] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = &rem[idx] - &c * dj;
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    /// Division that is known to be exact; returns `None` otherwise.
    pub fn exact_div(&self, d: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    /// Square-free decomposition `self = c * prod f_i^i`, returned as
    /// `(f_i, i)` with every `f_i` monic, squarefree and non-constant.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        // Yun's algorithm
        let f = self.monic();
        let fp = f.derivative();
        let mut a = f.gcd(&fp);
        let mut b = f.exact_div(&a).unwrap();
        let mut c = fp.exact_div(&a).unwrap_or_else(|| fp.div_rem(&a).0);
        let mut d = &c - &b.derivative();
        let mut i = 1;
        loop {
            let g = b.gcd(&d);
            if !g.is_constant() {
                out.push((g.clone(), i));
            }
            b = b.exact_div(&g).unwrap();
            if b.is_constant() {
                break;
            }
            c = d.exact_div(&g).unwrap();
            d = &c - &b.derivative();
            i += 1;
        }
        let _ = &mut a;
        out
    }

    /// Removes every factor shared with `other` (to any power).
    pub fn strip_common_factors(&self, other: &UniPoly) -> UniPoly {
        let mut p = self.clone();
        loop {
            let g = p.gcd(other);
            if g.is_constant() {
                return p;
            }
            p = p.exact_div(&g).unwrap();
        }
    }

    /// `self(a*t + b)`
    pub fn compose_linear(&self, a: &Rat, b: &Rat) -> UniPoly {
        let lin = UniPoly::new(vec![b.clone(), a.clone()]);
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &UniPoly::constant(c.clone());
        }
        acc
    }

    /// Coefficients reversed with respect to a formal degree `n`:
    /// `t^n * self(1/t)`.
    pub fn reversed(&self, n: usize) -> UniPoly {
        let mut v = vec![Rat::zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            assert!(i <= n, "formal degree below actual degree");
            v[n - i] = c.clone();
        }
        UniPoly::new(v)
    }

    /// Newton interpolation through `(x_i, y_i)` with distinct nodes.
    pub fn interpolate(xs: &[Rat], ys: &[Rat]) -> UniPoly {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut dd: Vec<Rat> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
            }
        }
        let mut acc = UniPoly::zero();
        for i in (0..n).rev() {
            acc = &(&acc * &UniPoly::linear_root(&xs[i])) + &UniPoly::constant(dd[i].clone());
        }
        acc
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{i}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UniPoly::new(v)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Add for UniPoly {
    type Output = UniPoly;
    fn add(self, o: UniPoly) -> UniPoly {
        &self + &o
    }
}

impl Sub for UniPoly {
    type Output = UniPoly;
    fn sub(self, o: UniPoly) -> UniPoly {
        &self - &o
    }
}

impl Mul for UniPoly {
    type Output = UniPoly;
    fn mul(self, o: UniPoly) -> UniPoly {
        &self * &o
    }
}
