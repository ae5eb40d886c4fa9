//! Zero-order Bessel function of the first kind.
//!
//! Three regimes, each used where it is accurate to a few ulp of absolute
//! error:
//!
//! * `|z| < 8`: Maclaurin series.
//! * `8 <= |z| < 20`: Miller backward recurrence normalised with
//!   `1 = J0 + 2 (J2 + J4 + ...)`.
//! * `|z| >= 20`: Hankel asymptotic expansion, truncated at its smallest term.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const SERIES_LIMIT: f64 = 8.0;
const ASYMPTOTIC_LIMIT: f64 = 20.0;

/// `J0(z)` for finite real `z`.
pub fn bessel_j0<T: Scalar>(z: T) -> Result<T> {
    if !z.is_finite() {
        return Err(Error::invalid(format!("bessel_j0 argument must be finite, got {z}")));
    }
    Ok(j0(z))
}

/// Unchecked `J0`; callers guarantee a finite argument.
pub(crate) fn j0<T: Scalar>(z: T) -> T {
    let x = z.abs();
    if x < T::lit(SERIES_LIMIT) {
        j0_series(x)
    } else if x < T::lit(ASYMPTOTIC_LIMIT) {
        j0_miller(x)
    } else {
        j0_asymptotic(x)
    }
}

fn j0_series<T: Scalar>(x: T) -> T {
    let q = -(x * x) / T::lit(4.0);
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..200 {
        let kf = T::from_usize_lossy(k);
        term = term * q / (kf * kf);
        sum = sum + term;
        if term.abs() <= T::epsilon() * T::lit(1e-3) {
            break;
        }
    }
    sum
}

fn j0_miller<T: Scalar>(x: T) -> T {
    let xf = x.as_f64();
    let mut start = (xf + 12.0 * xf.cbrt() + 30.0) as usize;
    start += start % 2;

    let two_over_x = T::lit(2.0) / x;
    let mut above = T::zero(); // J_{k+1}
    let mut current = T::lit(1e-30); // J_k
    let mut norm = T::zero();
    let mut j0 = T::zero();
    let big = T::max_value().sqrt();
    for k in (1..=start).rev() {
        // J_{k-1} = (2k/x) J_k - J_{k+1}
        let below = T::from_usize_lossy(k) * two_over_x * current - above;
        above = current;
        current = below;
        let idx = k - 1;
        if idx == 0 {
            j0 = current;
            norm = norm + current;
        } else if idx % 2 == 0 {
            norm = norm + T::lit(2.0) * current;
        }
        if current.abs() > big {
            let s = big.recip();
            current = current * s;
            above = above * s;
            norm = norm * s;
        }
    }
    j0 / norm
}

fn j0_asymptotic<T: Scalar>(x: T) -> T {
    // P - i Q expansion: t_k = t_{k-1} (2k-1)^2 / (8 k x)
    let mut p = T::one();
    let mut q = T::zero();
    let mut term = T::one();
    let mut previous = T::infinity();
    for k in 1..200usize {
        let kf = T::from_usize_lossy(k);
        let odd = T::lit(2.0) * kf - T::one();
        term = term * odd * odd / (T::lit(8.0) * kf * x);
        if term >= previous || term < T::epsilon() * T::lit(1e-3) {
            break;
        }
        previous = term;
        let sign = if (k / 2) % 2 == 0 { T::one() } else { -T::one() };
        if k % 2 == 0 {
            p = p + sign * term;
        } else {
            q = q + sign * term;
        }
    }
    // Q carries the opposite sign to the magnitudes accumulated above.
    let q = -q;
    let (s, c) = x.sin_cos();
    let r = T::FRAC_1_SQRT_2();
    let cos_chi = (c + s) * r;
    let sin_chi = (s - c) * r;
    (T::lit(2.0) / (T::PI() * x)).sqrt() * (p * cos_chi - q * sin_chi)
}
