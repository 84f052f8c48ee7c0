//! Exact rational scalars and univariate polynomials.
//!
//! Everything downstream (projection, double points, hyperbolicity) is built
//! on these types. Coefficients are `BigRational`; no floating point enters
//! any decision made here.

mod binform;
mod bivariate;
mod complex;
mod interlace;
mod resultant;
mod sturm;
mod unipoly;

pub use binform::BinForm;
pub use bivariate::BiPoly;
pub use complex::{complex_roots, Complex};
pub use interlace::{interlace_check, map_degree, real_rooted_with_multiplicity};
pub use resultant::{det, poly_det, resultant, sylvester_resultant_bi};
pub use sturm::{
    isolate_real_roots, isolate_roots_of, real_root_count, separate, sturm_count, sturm_sequence,
    tarski_query, RootInterval, RootIsolation,
};
pub use unipoly::UniPoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational, always in lowest terms with positive
/// denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `2^-k` as an exact rational.
pub fn dyadic(k: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << k as usize)
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator overflow f64 individually
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = (n - d).clamp(-1000, 1000);
        let scaled = if shift >= 0 {
            Rat::new(r.numer().clone(), r.denom() << shift as usize)
        } else {
            Rat::new(r.numer() << (-shift) as usize, r.denom().clone())
        };
        scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
    })
}

/// Closest dyadic rational with `bits` fractional bits.
pub fn from_f64(x: f64, bits: u32) -> Rat {
    let scale = 2f64.powi(bits as i32);
    let n = (x * scale).round();
    let n = BigInt::from(n as i128);
    Rat::new(n, BigInt::one() << bits as usize)
}

pub fn sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Canonical `"a/b"` (or `"a"`) string form used in every JSON payload.
pub fn rat_to_string(r: &Rat) -> String {
    r.to_string()
}

pub fn rat_from_str(s: &str) -> Result<Rat, crate::Error> {
    let t = s.trim();
    let parsed: Result<Rat, _> = t.parse();
    match parsed {
        Ok(r) => Ok(r),
        Err(_) => Err(crate::Error::Parse(format!("invalid rational {s:?}"))),
    }
}

/// Serde adapter for `Rat` as canonical strings.
pub mod rat_serde {
    use super::Rat;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        super::rat_from_str(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rat>`.
pub mod rat_vec_serde {
    use super::Rat;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(|r| r.to_string()).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| super::rat_from_str(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings() {
        assert_eq!(rat_to_string(&ratio(6, -4)), "-3/2");
        assert_eq!(rat_to_string(&rat(5)), "5");
        assert_eq!(rat_from_str(" -3/2 ").unwrap(), ratio(-3, 2));
        assert!(rat_from_str("x").is_err());
    }

    #[test]
    fn f64_conversion_handles_huge_terms() {
        let big = Rat::new(BigInt::one() << 3000usize, (BigInt::one() << 3000usize) * 3);
        assert!((to_f64(&big) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(from_f64(0.75, 8), ratio(3, 4));
    }
}
