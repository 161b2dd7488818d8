//! Scalar abstraction shared by every module.
//!
//! All numerics are written against [`Real`], which is implemented for `f32`
//! and `f64`. Complex entries are `num_complex::Complex<T>` (re-exported by
//! nalgebra), matrices are `nalgebra::DMatrix<Complex<T>>`.

use nalgebra::{Complex, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar usable by the whole crate.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + rustfft::FftNum {
    /// Default absolute tolerance for structural checks (hermiticity, trace,
    /// positivity) at this precision.
    const CHECK_TOL: f64;

    /// Largest Hermitian asymmetry a positive-type Gram matrix may show
    /// before the input is rejected outright.
    const GRAM_ASYMMETRY_LIMIT: f64;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite real")
    }

    #[inline]
    fn check_tol() -> Self {
        Self::lit(Self::CHECK_TOL)
    }
}

impl Real for f32 {
    const CHECK_TOL: f64 = 1e-4;
    const GRAM_ASYMMETRY_LIMIT: f64 = 1e-5;
}

impl Real for f64 {
    const CHECK_TOL: f64 = 1e-10;
    const GRAM_ASYMMETRY_LIMIT: f64 = 1e-8;
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

#[inline]
pub fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub fn creal<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}
