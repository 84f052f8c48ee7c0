use std::ops::{Add, Div, Mul, Neg, Sub};

use super::UniPoly;

/// Minimal double precision complex number used for locating non-real
/// roots. Nothing exact depends on it.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }
    pub fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }
    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }
    pub fn scale(self, s: f64) -> Self {
        Complex::new(self.re * s, self.im * s)
    }
    pub fn from_polar(r: f64, th: f64) -> Self {
        Complex::new(r * th.cos(), r * th.sin())
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, o: Complex) -> Complex {
        Complex::new(self.re + o.re, self.im + o.im)
    }
}
impl Sub for Complex {
    type Output = Complex;
    fn sub(self, o: Complex) -> Complex {
        Complex::new(self.re - o.re, self.im - o.im)
    }
}
impl Mul for Complex {
    type Output = Complex;
    fn mul(self, o: Complex) -> Complex {
        Complex::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}
impl Div for Complex {
    type Output = Complex;
    fn div(self, o: Complex) -> Complex {
        let d = o.re * o.re + o.im * o.im;
        Complex::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
}
impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

fn horner(c: &[f64], z: Complex) -> (Complex, Complex) {
    let mut p = Complex::default();
    let mut dp = Complex::default();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + Complex::new(a, 0.0);
    }
    (p, dp)
}

/// All complex roots of a squarefree polynomial by Aberth–Ehrlich iteration
/// followed by Newton polishing.
pub fn complex_roots(p: &UniPoly) -> Vec<Complex> {
    let n = match p.degree() {
        None | Some(0) => return Vec::new(),
        Some(n) => n,
    };
    let lc = super::to_f64(&p.lc());
    let c: Vec<f64> = p.to_f64_coeffs().iter().map(|a| a / lc).collect();
    // Fujiwara-type bound for the initial circle
    let radius = (0..n)
        .map(|i| (c[i].abs()).powf(1.0 / (n - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3)
        * 2.0;
    let mut z: Vec<Complex> = (0..n)
        .map(|k| Complex::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.3) / n as f64))
        .collect();
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (pv, dpv) = horner(&c, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dpv;
            let mut sum = Complex::default();
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        sum = sum + Complex::new(1.0, 0.0) / d;
                    }
                }
            }
            let step = ratio / (Complex::new(1.0, 0.0) - ratio * sum);
            z[i] = z[i] - step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..4 {
            let (pv, dpv) = horner(&c, *zi);
            if dpv.norm() == 0.0 {
                break;
            }
            let step = pv / dpv;
            *zi = *zi - step;
            if step.norm() < 1e-17 * (1.0 + zi.norm()) {
                break;
            }
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_known_polynomials() {
        // (t^2+1)(t-2)
        let p = UniPoly::from_ints(&[-2, 1, -2, 1]);
        let mut r = complex_roots(&p);
        r.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((r[0] - Complex::new(0.0, -1.0)).norm() < 1e-12);
        assert!((r[1] - Complex::new(2.0, 0.0)).norm() < 1e-12);
        assert!((r[2] - Complex::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn residuals_are_small_for_degree_twenty() {
        let mut p = UniPoly::one();
        for k in 1..=10i64 {
            p = &p * &UniPoly::from_ints(&[k * k, 1, 1]);
            p = &p * &UniPoly::from_ints(&[-k, 2]);
        }
        let p = p.squarefree_part();
        for z in complex_roots(&p) {
            let v = p.eval_complex(z);
            let scale: f64 = p.to_f64_coeffs().iter().enumerate().map(|(i, c)| c.abs() * z.norm().powi(i as i32)).sum();
            assert!(v.norm() / scale < 1e-10, "residual {} at {:?}", v.norm() / scale, z);
        }
    }
}
