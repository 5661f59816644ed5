//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar (`f32` or `f64`).
///
/// Every algorithm in this crate is written against this trait; the concrete
/// aliases at the crate root pick `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(k: usize) -> Self {
        Self::from_usize(k).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Error function, evaluated in double precision.
    fn erf(self) -> Self {
        Self::lit(libm::erf(self.to_f64_lossy()))
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`] scalar.
pub type Cplx<T> = Complex<T>;

#[inline]
pub fn re<T: Real>(x: T) -> Cplx<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> Cplx<T> {
    Complex::new(re, im)
}

/// `ln(sinh x)` for `x > 0`, stable for both tiny and huge arguments.
pub fn ln_sinh<T: Real>(x: T) -> T {
    if x > T::lit(20.0) {
        x - T::LN_2() + (-(-(x + x)).exp()).ln_1p()
    } else {
        x.sinh().ln()
    }
}

/// `cosh a - cosh b` without cancellation.
#[inline]
pub fn cosh_diff<T: Real>(a: T, b: T) -> T {
    let two = T::lit(2.0);
    two * ((a + b) / two).sinh() * ((a - b) / two).sinh()
}

/// `ln(cosh a - cosh b)` for `a > b >= 0`, stable for large `a`.
pub fn ln_cosh_diff<T: Real>(a: T, b: T) -> T {
    let two = T::lit(2.0);
    T::LN_2() + ln_sinh((a + b) / two) + ln_sinh((a - b) / two)
}

/// Inverse hyperbolic cosine of `1 + delta`, accurate for small `delta >= 0`.
#[inline]
pub fn acosh1p<T: Real>(delta: T) -> T {
    (delta + (delta * (delta + T::lit(2.0))).sqrt()).ln_1p()
}

/// Surface area of the unit sphere in `R^n`, i.e. `2 pi^{n/2} / Gamma(n/2)`.
pub fn sphere_area<T: Real>(n: usize) -> T {
    let half = T::from_usize_lossy(n) / T::lit(2.0);
    T::lit(2.0) * (half * T::PI().ln() - crate::specfun::ln_gamma_real(half)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosh_diff_matches_naive_at_moderate_args() {
        let (a, b) = (2.0_f64, 0.7);
        assert!((cosh_diff(a, b) - (a.cosh() - b.cosh())).abs() < 1e-14);
        assert!((ln_cosh_diff(a, b) - (a.cosh() - b.cosh()).ln()).abs() < 1e-14);
    }

    #[test]
    fn ln_sinh_large_argument() {
        assert!((ln_sinh(50.0_f64) - (50.0 - 2f64.ln())).abs() < 1e-12);
        assert!((ln_sinh(1e-8_f64) - 1e-8_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn sphere_areas() {
        use std::f64::consts::PI;
        assert!((sphere_area::<f64>(2) - 2.0 * PI).abs() < 1e-13);
        assert!((sphere_area::<f64>(3) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area::<f64>(4) - 2.0 * PI * PI).abs() < 1e-12);
    }
}
