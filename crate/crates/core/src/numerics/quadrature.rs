//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol * |I|)`. Per-interval error estimates
//! follow the QUADPACK `qk15` heuristics, including the round-off floor of
//! `50 eps * integral |f|`.

use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Scalar};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and subdivision budget for [`integrate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_subdivisions: usize,
}

impl<T: Scalar> QuadratureSpec<T> {
    pub fn new(abs_tol: T, rel_tol: T, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > T::zero() && rel_tol > T::zero()) {
            return Err(Error::invalid("quadrature tolerances must be positive"));
        }
        if max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions must be at least 1"));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }
}

impl<T: Scalar> Default for QuadratureSpec<T> {
    /// About `1e-12` absolute and relative in `f64`.
    fn default() -> Self {
        let tol = T::epsilon() * T::lit(4096.0);
        Self {
            abs_tol: tol,
            rel_tol: tol,
            max_subdivisions: 1000,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn kronrod15<T: Scalar, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> Result<Segment<T>> {
    let two = T::lit(2.0);
    let centre = (a + b) / two;
    let half = (b - a) / two;
    let abs_half = half.abs();

    let mut eval = |x: T| -> Result<T> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::invalid(format!("integrand is not finite at x = {x}")))
        }
    };

    let fc = eval(centre)?;
    let mut res_gauss = fc * T::lit(WG[3]);
    let mut res_kronrod = fc * T::lit(WGK[7]);
    let mut res_abs = res_kronrod.abs();
    let mut f1 = [T::zero(); 7];
    let mut f2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let lo = eval(centre - dx)?;
        let hi = eval(centre + dx)?;
        f1[j] = lo;
        f2[j] = hi;
        let w = T::lit(WGK[j]);
        res_kronrod = res_kronrod + w * (lo + hi);
        res_abs = res_abs + w * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            res_gauss = res_gauss + T::lit(WG[j / 2]) * (lo + hi);
        }
    }

    let mean = res_kronrod / two;
    let mut res_asc = T::lit(WGK[7]) * (fc - mean).abs();
    for j in 0..7 {
        res_asc = res_asc + T::lit(WGK[j]) * ((f1[j] - mean).abs() + (f2[j] - mean).abs());
    }

    let value = res_kronrod * half;
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;
    let mut error = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != T::zero() && error != T::zero() {
        let ratio = (T::lit(200.0) * error / res_asc).powf(T::lit(1.5));
        error = res_asc * ratio.min(T::one());
    }
    if res_abs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) {
        error = error.max(T::lit(50.0) * T::epsilon() * res_abs);
    }
    Ok(Segment { a, b, value, error })
}

/// Integrates `f` over `[a, b]`.
///
/// On budget exhaustion the returned [`Error::Convergence`] carries the best
/// estimate reached.
pub fn integrate<T, F>(mut f: F, a: T, b: T, spec: &QuadratureSpec<T>) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("integration limits must be finite"));
    }
    if a == b {
        return Ok(T::zero());
    }
    if b < a {
        return integrate(f, b, a, spec).map(|v| -v);
    }

    let mut segments = vec![kronrod15(&mut f, a, b)?];
    let mut bisections = 0usize;
    loop {
        let mut value = CompensatedSum::new();
        let mut error = CompensatedSum::new();
        let mut worst = 0;
        for (i, s) in segments.iter().enumerate() {
            value.add(s.value);
            error.add(s.error);
            if s.error > segments[worst].error {
                worst = i;
            }
        }
        let (value, error) = (value.value(), error.value());
        if error <= spec.abs_tol.max(spec.rel_tol * value.abs()) {
            return Ok(value);
        }

        let s = segments[worst];
        let mid = (s.a + s.b) / T::lit(2.0);
        let too_narrow = !(s.a < mid && mid < s.b);
        if bisections >= spec.max_subdivisions || too_narrow {
            return Err(Error::Convergence {
                estimate: value.as_f64(),
                error_estimate: error.as_f64(),
                subdivisions: bisections,
            });
        }
        segments[worst] = kronrod15(&mut f, s.a, mid)?;
        segments.push(kronrod15(&mut f, mid, s.b)?);
        bisections += 1;
    }
}

/// Integrates over consecutive sub-intervals split at `breaks`, which must be
/// sorted. Useful for oscillatory integrands.
pub fn integrate_pieces<T, F>(mut f: F, breaks: &[T], spec: &QuadratureSpec<T>) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let mut total = CompensatedSum::new();
    for w in breaks.windows(2) {
        total.add(integrate(&mut f, w[0], w[1], spec)?);
    }
    Ok(total.value())
}
