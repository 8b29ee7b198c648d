//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{self, Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Floating point type the physics is written against: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + FftNum
    + Sum
    + Default
    + Display
    + LowerExp
    + Debug
{
    /// Converts an `f64` literal. Only used for constants and configuration
    /// values, which are always representable.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal not representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize not representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex amplitude over a [`Real`] scalar.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn imag_unit<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::one())
}

/// Shortest decimal text that parses back to the same value. Plain notation
/// for moderate magnitudes, exponent notation otherwise.
#[derive(Debug, Clone, Copy)]
pub struct Shortest<T>(pub T);

impl<T: Real> Display for Shortest<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.0;
        let a = x.abs();
        if x == T::zero() || !x.is_finite() || (a >= T::lit(1e-4) && a < T::lit(1e15)) {
            write!(f, "{x}")
        } else {
            write!(f, "{x:e}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortest_round_trips() {
        for &x in &[0.0, 1.0, -0.1, 1.6e-3, 6.02e23, 1e-300, 3.0f64.sqrt(), 5e-5, 123456.789] {
            let s = Shortest(x).to_string();
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(Shortest(1.6e-3).to_string(), "0.0016");
        assert_eq!(Shortest(2.5e-9).to_string(), "2.5e-9");
        assert_eq!(Shortest(0.1f32).to_string(), "0.1");
    }
}
