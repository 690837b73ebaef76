//! Real scalar abstraction so the coefficient algebra can run in `f64` or in
//! double-double precision.

use num_traits::{Float, FloatConst};
use twofloat::TwoFloat;

/// Double-double scalar (about 32 significant digits).
pub type Extended = TwoFloat;

pub trait Real: Float + FloatConst + Send + Sync + std::fmt::Debug + 'static {
    fn from_f64(x: f64) -> Self;
    fn round_f64(self) -> f64;
}

impl Real for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }

    #[inline]
    fn round_f64(self) -> f64 {
        self
    }
}

impl Real for TwoFloat {
    #[inline]
    fn from_f64(x: f64) -> Self {
        TwoFloat::from_f64(x)
    }

    #[inline]
    fn round_f64(self) -> f64 {
        self.hi() + self.lo()
    }
}

/// `(cosh r, sinh r)` with `cosh^2 - sinh^2 = 1` to working precision.
pub(crate) fn cosh_sinh<T: Real>(r: T) -> (T, T) {
    let s = r.sinh();
    ((T::one() + s * s).sqrt(), s)
}

/// `(cos t, sin t)` renormalized onto the unit circle.
pub(crate) fn unit_phase<T: Real>(t: T) -> (T, T) {
    let (s, c) = t.sin_cos();
    let h = c.hypot(s);
    (c / h, s / h)
}
