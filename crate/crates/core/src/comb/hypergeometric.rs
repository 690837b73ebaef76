//! `F(k)` through regularized `3F2({1/2, 1, 1}, {1-k, 1+k}; z) / (Gamma(1-k) Gamma(1+k))`.
//!
//! For integer `k >= 0` the regularized function is the series
//!
//! `R_k(z) = sum_{n >= k} (1/2)_n n! z^n / ((n-k)! (n+k)!)`,
//!
//! the terms with `n < k` being killed by `1/Gamma(1-k+n)`. Its first term is `(z/4)^k`
//! and consecutive terms have ratio `(n + 1/2)(n + 1) z / ((n + 1 - k)(n + 1 + k))`.
//! With `z = 2 / (1 + x)` the series converges like `z^n`, which slows to a crawl
//! near threshold where `x -> 1`. This route exists to cross-check [`super::f_closed`];
//! it is not used in production paths.

use crate::error::{Error, Result};
use crate::params::{CavityParams, PoleParams};

const MAX_TERMS: usize = 5_000_000;

/// `R_k(z)` for `0 < z < 1`.
pub fn regularized_3f2(k: usize, z: f64) -> Result<f64> {
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::domain("z", z, "series argument must lie in (0, 1)"));
    }
    let kf = k as f64;
    let mut term = (0.25 * z).powi(k as i32);
    let mut sum = term;
    let mut n = kf;
    for _ in 0..MAX_TERMS {
        let ratio = (n + 0.5) * (n + 1.0) * z / ((n + 1.0 - kf) * (n + 1.0 + kf));
        term *= ratio;
        sum += term;
        n += 1.0;
        // past the peak the tail is bounded by a geometric series
        if ratio < 1.0 && term * ratio / (1.0 - ratio) <= 1e-17 * sum {
            return Ok(sum);
        }
    }
    Err(Error::Convergence {
        routine: "regularized 3F2 series",
        iterations: MAX_TERMS,
        achieved: term / sum,
    })
}

/// `F(k)` from the hypergeometric representation. Needs `x != y` (nonzero gain).
pub fn f_hypergeometric(pole: &PoleParams, cavity: &CavityParams, k: usize) -> Result<f64> {
    let (x, y) = (pole.x(), pole.y());
    if x == y {
        return Err(Error::domain(
            "r",
            pole.r(),
            "hypergeometric form is singular at zero gain",
        ));
    }
    let q = cavity.round_trip_reflectance();
    let rx = regularized_3f2(k, 2.0 / (1.0 + x))?;
    let ry = regularized_3f2(k, 2.0 / (1.0 + y))?;
    let pre = 2.0 / (4.0 * q * q) / ((x - y) * (1.0 + x) * (1.0 + y));
    Ok(pre * ((1.0 + x) * ry - (1.0 + y) * rx))
}
