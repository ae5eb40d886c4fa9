//! Normalised harmonic-oscillator eigenfunctions.
//!
//! The dimensionless coordinate is `xi = x / (sqrt(2) * sigma0)`, where
//! `sigma0` is the rms extent of the ground state, so that
//! `psi_0(xi) = pi^(-1/4) exp(-xi^2 / 2)` and `integral psi_n^2 dxi = 1`.
//! Values come from the normalised recurrence
//! `psi_n = sqrt(2/n) xi psi_{n-1} - sqrt((n-1)/n) psi_{n-2}`
//! with the Gaussian factor carried as a separate log-scale, so nothing
//! overflows or underflows prematurely.

use crate::error::Result;
use crate::numerics::laguerre::check_degree;
use crate::scalar::Scalar;

/// `psi_n(xi)`.
pub fn ho_wavefunction<T: Scalar>(n: usize, xi: T) -> Result<T> {
    check_degree(n)?;
    let mut out = Vec::with_capacity(n + 1);
    fill_wavefunctions(n, xi, &mut out);
    Ok(out[n])
}

/// `psi_0(xi) ..= psi_n(xi)`.
pub fn ho_wavefunctions<T: Scalar>(n_max: usize, xi: T) -> Result<Vec<T>> {
    check_degree(n_max)?;
    let mut out = Vec::with_capacity(n_max + 1);
    fill_wavefunctions(n_max, xi, &mut out);
    Ok(out)
}

pub(crate) fn fill_wavefunctions<T: Scalar>(n_max: usize, xi: T, out: &mut Vec<T>) {
    out.clear();
    let big = T::max_value().sqrt();
    let ln_big = big.ln();
    let mut ln_scale = -xi * xi / T::lit(2.0);
    let mut prev = T::zero();
    let mut current = T::PI().powf(T::lit(-0.25));
    out.push(current * ln_scale.exp());
    let two = T::lit(2.0);
    for n in 1..=n_max {
        let nf = T::from_usize_lossy(n);
        let next = (two / nf).sqrt() * xi * current - ((nf - T::one()) / nf).sqrt() * prev;
        prev = current;
        current = next;
        if current.abs() > big {
            current = current / big;
            prev = prev / big;
            ln_scale = ln_scale + ln_big;
        }
        out.push(current * ln_scale.exp());
    }
}
