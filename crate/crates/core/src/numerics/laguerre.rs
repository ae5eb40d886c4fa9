//! Laguerre polynomials by three-term recurrence.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest polynomial degree (and oscillator level) the crate evaluates.
pub const MAX_DEGREE: usize = 2000;

pub(crate) fn check_degree(n: usize) -> Result<()> {
    if n > MAX_DEGREE {
        Err(Error::Capacity {
            requested: n,
            max: MAX_DEGREE,
        })
    } else {
        Ok(())
    }
}

/// Ordinary Laguerre polynomial `L_n(z)`.
pub fn laguerre<T: Scalar>(n: usize, z: T) -> Result<T> {
    check_degree(n)?;
    Ok(LaguerreSeq::new(T::zero(), z).nth(n).expect("sequence is infinite"))
}

/// Generalised Laguerre polynomial `L_n^(alpha)(z)`.
pub fn assoc_laguerre<T: Scalar>(n: usize, alpha: T, z: T) -> Result<T> {
    check_degree(n)?;
    Ok(LaguerreSeq::new(alpha, z).nth(n).expect("sequence is infinite"))
}

/// Iterator over `L_0^(a)(z), L_1^(a)(z), ...` using
/// `(k+1) L_{k+1} = (2k + 1 + a - z) L_k - (k + a) L_{k-1}`.
#[derive(Clone, Debug)]
pub(crate) struct LaguerreSeq<T> {
    alpha: T,
    z: T,
    k: usize,
    prev: T,
    current: T,
}

impl<T: Scalar> LaguerreSeq<T> {
    pub(crate) fn new(alpha: T, z: T) -> Self {
        Self {
            alpha,
            z,
            k: 0,
            prev: T::zero(),
            current: T::one(),
        }
    }
}

impl<T: Scalar> Iterator for LaguerreSeq<T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        let out = self.current;
        let k = T::from_usize_lossy(self.k);
        let next = ((T::lit(2.0) * k + T::one() + self.alpha - self.z) * self.current - (k + self.alpha) * self.prev)
            / (k + T::one());
        self.prev = self.current;
        self.current = next;
        self.k += 1;
        Some(out)
    }
}

/// `L_n^(alpha)(z)` as `(mantissa, ln_scale)` with value `mantissa * exp(ln_scale)`.
/// Stays finite where the polynomial itself would overflow.
pub(crate) fn assoc_laguerre_scaled<T: Scalar>(n: usize, alpha: T, z: T) -> (T, T) {
    let big = T::max_value().sqrt();
    let ln_big = big.ln();
    let mut prev = T::zero();
    let mut current = T::one();
    let mut ln_scale = T::zero();
    for k in 0..n {
        let kf = T::from_usize_lossy(k);
        let next = ((T::lit(2.0) * kf + T::one() + alpha - z) * current - (kf + alpha) * prev) / (kf + T::one());
        prev = current;
        current = next;
        if current.abs() > big {
            current = current / big;
            prev = prev / big;
            ln_scale = ln_scale + ln_big;
        }
    }
    (current, ln_scale)
}
