//! Real algebraic knots in RP³ given by rational parametrizations.
//!
//! The crate computes the encomplexed writhe of a curve, certifies
//! positivity of its torsion, classifies the double points of plane
//! projections, decides hyperbolicity of plane curves with respect to points
//! and of the space curve with respect to lines, and identifies the isotopy
//! type of maximally writhed curves against projective torus links.
//!
//! All polynomial decisions are exact over the rationals. Floating point is
//! used only to locate non-real roots (non-real double point parameters) and
//! to render diagrams.

pub mod error;
pub mod hyperbolicity;
pub mod knotdiag;
pub mod mwgen;
pub mod projection;
pub mod projgeom;
pub mod ratpoly;
pub mod spacecurve;
pub mod svg;
pub mod tangentsurf;
pub mod writhe;

pub use error::{Error, Result};

/// Maximal absolute encomplexed writhe of an irreducible degree-`d` curve,
/// `(d-1)(d-2)/2`.
pub fn max_writhe(d: usize) -> i64 {
    if d < 2 {
        return 0;
    }
    ((d - 1) * (d - 2) / 2) as i64
}

#[cfg(test)]
mod tests {
    #[test]
    fn max_writhe_values() {
        assert_eq!(super::max_writhe(3), 1);
        assert_eq!(super::max_writhe(4), 3);
        assert_eq!(super::max_writhe(5), 6);
        assert_eq!(super::max_writhe(6), 10);
    }
}
