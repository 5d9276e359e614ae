//! Scalar abstraction and the tolerance model shared by every predicate.
//!
//! All geometry in this crate is generic over [`Scalar`], which is implemented
//! for `f32` and `f64`. Tolerances are expressed relative to the magnitude of
//! the inputs, so a single base factor controls every comparison.

use core::fmt::{Debug, Display};
use core::iter::Sum;
use num_traits::{Float, FloatConst};

/// Floating-point type usable by the geometry kernels.
pub trait Scalar:
    Float + FloatConst + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Base relative tolerance for this precision.
    fn default_tolerance() -> Self;

    /// Converts an `f64` literal; every supported type can represent it approximately.
    fn lit(x: f64) -> Self;

    fn to_f64(self) -> f64;
}

impl Scalar for f64 {
    fn default_tolerance() -> Self {
        1e-9
    }

    #[inline]
    fn lit(x: f64) -> Self {
        x
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    fn default_tolerance() -> Self {
        1e-4
    }

    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn to_f64(self) -> f64 {
        f64::from(self)
    }
}

/// Tolerance model.
///
/// With base factor `b` and input scale `s` (largest absolute coordinate):
///
/// * boundary band (disk, ellipse, hyperbola membership): `b * (1 + s)`
/// * collinearity band on the orientation cross product: `b * 1e-3 * s^2`
/// * piercing depth band: `b * (1 + s)`
/// * matching tie/improvement band for total cost `c`: `b * (1 + c)`
///
/// For `f64` the default base is `1e-9`, giving the `1e-12 * s^2` collinearity
/// band used throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    base: T,
}

impl<T: Scalar> Default for Tolerance<T> {
    fn default() -> Self {
        Self { base: T::default_tolerance() }
    }
}

/// Name of the environment variable that overrides the base factor.
pub const TOLERANCE_ENV: &str = "MMP_TOL";

impl<T: Scalar> Tolerance<T> {
    /// Creates a tolerance with the given base factor. Non-finite or negative
    /// values fall back to the default.
    pub fn new(base: T) -> Self {
        if base.is_finite() && base >= T::zero() {
            Self { base }
        } else {
            Self::default()
        }
    }

    /// Reads the base factor from `MMP_TOL`, falling back to the default when
    /// the variable is absent or unparsable.
    pub fn from_env() -> Self {
        std::env::var(TOLERANCE_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .map(|b| Self::new(T::lit(b)))
            .unwrap_or_default()
    }

    pub fn base(&self) -> T {
        self.base
    }

    /// Band for membership predicates at the given coordinate scale.
    pub fn boundary(&self, scale: T) -> T {
        self.base * (T::one() + scale.abs())
    }

    /// Band on the cross product used to decide collinearity.
    pub fn collinear(&self, scale: T) -> T {
        self.base * T::lit(1e-3) * scale * scale
    }

    /// Band on minimax depth values.
    pub fn pierce(&self, scale: T) -> T {
        self.boundary(scale)
    }

    /// Band for cost ties and 2-opt improvements.
    pub fn cost(&self, total: T) -> T {
        self.base * (T::one() + total.abs())
    }
}

/// Classifies `value` against zero with a symmetric band.
pub(crate) fn sign_with_band<T: Scalar>(value: T, band: T) -> core::cmp::Ordering {
    if value > band {
        core::cmp::Ordering::Greater
    } else if value < -band {
        core::cmp::Ordering::Less
    } else {
        core::cmp::Ordering::Equal
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_bands() {
        let tol = Tolerance::<f64>::default();
        assert_eq!(tol.boundary(0.0), 1e-9);
        assert!((tol.boundary(3.0) - 4e-9).abs() < 1e-24);
        assert!((tol.collinear(2.0) - 4e-12).abs() < 1e-26);
        assert!((tol.cost(1.0) - 2e-9).abs() < 1e-24);
    }

    #[test]
    fn invalid_base_falls_back() {
        assert_eq!(Tolerance::new(f64::NAN), Tolerance::default());
        assert_eq!(Tolerance::new(-1.0_f64), Tolerance::default());
        assert_eq!(Tolerance::new(1e-6_f64).base(), 1e-6);
    }

    #[test]
    fn f32_has_looser_default() {
        assert!(Tolerance::<f32>::default().base() > 1e-6);
    }
}
