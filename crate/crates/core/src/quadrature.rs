//! Adaptive Gauss-Kronrod (10/21-point) quadrature with global error control.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::scalar::Real;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_109_611_535,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_subdivisions: usize,
}

impl<T: Real> Default for QuadratureOptions<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-12).max(T::epsilon() * T::lit(100.0)),
            abs_tol: T::zero(),
            max_subdivisions: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub abs_error: T,
    /// Integral of `|f|`, the scale against which roundoff is judged.
    pub abs_value: T,
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
    abs_value: T,
}

fn kronrod21<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Panel<T> {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let abs_half_len = half_len.abs();
    let f_center = f(center);

    let mut res_gauss = T::zero();
    let mut res_kronrod = T::lit(WGK[10]) * f_center;
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];

    for j in 0..10 {
        let abscissa = half_len * T::lit(XGK[j]);
        let f1 = f(center - abscissa);
        let f2 = f(center + abscissa);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK[j]);
        res_kronrod = res_kronrod + w * (f1 + f2);
        res_abs = res_abs + w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss = res_gauss + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }

    let mean = res_kronrod * half;
    let mut res_asc = T::lit(WGK[10]) * (f_center - mean).abs();
    for j in 0..10 {
        res_asc = res_asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_kronrod * half_len;
    let res_abs = res_abs * abs_half_len;
    let res_asc = res_asc * abs_half_len;
    let mut error = ((res_kronrod - res_gauss) * half_len).abs();
    if res_asc != T::zero() && error != T::zero() {
        let scale = (T::lit(200.0) * error / res_asc).powf(T::lit(1.5));
        error = res_asc * scale.min(T::one());
    }
    let floor = T::lit(50.0) * T::epsilon() * res_abs;
    if res_abs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) {
        error = error.max(floor);
    }
    Panel { a, b, value, error, abs_value: res_abs }
}

/// Integrates `f` over the finite interval `[a, b]`.
///
/// Panels with the largest error estimate are bisected until the summed
/// estimate falls below `max(abs_tol, rel_tol |I|)` or the roundoff floor of
/// the rule. Exhausting `max_subdivisions` yields [`Error::Accuracy`].
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, opts: &QuadratureOptions<T>) -> Result<Integral<T>> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("integration bounds must be finite".into()));
    }
    if a == b {
        return Ok(Integral { value: T::zero(), abs_error: T::zero(), abs_value: T::zero() });
    }

    let mut panels = vec![kronrod21(&f, a, b)];
    loop {
        let (value, error, abs_value) = panels.iter().fold(
            (T::zero(), T::zero(), T::zero()),
            |(v, e, s), p| (v + p.value, e + p.error, s + p.abs_value),
        );
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Accuracy { value: value.to_f64_lossy(), estimate: f64::INFINITY });
        }
        let tol = opts.abs_tol.max(opts.rel_tol * value.abs());
        let roundoff = T::lit(200.0) * T::epsilon() * abs_value;
        if error <= tol || error <= roundoff {
            return Ok(Integral { value, abs_error: error, abs_value });
        }
        if panels.len() >= opts.max_subdivisions {
            return Err(Error::Accuracy { value: value.to_f64_lossy(), estimate: error.to_f64_lossy() });
        }

        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |(bi, be), (i, p)| if p.error > be { (i, p.error) } else { (bi, be) });
        let p = panels.swap_remove(worst);
        let mid = T::lit(0.5) * (p.a + p.b);
        if (p.b - p.a).abs() <= T::lit(1000.0) * T::epsilon() * mid.abs().max(T::min_positive_value()) {
            return Err(Error::Accuracy { value: value.to_f64_lossy(), estimate: error.to_f64_lossy() });
        }
        panels.push(kronrod21(&f, p.a, mid));
        panels.push(kronrod21(&f, mid, p.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x: f64| 3.0 * x * x - x + 2.0, -1.0, 2.0, &QuadratureOptions::default()).unwrap();
        assert!((r.value - (9.0 - 1.5 + 6.0)).abs() < 1e-13);
    }

    #[test]
    fn gaussian_half_line() {
        let r = integrate(|x: f64| (-x * x).exp(), 0.0, 12.0, &QuadratureOptions::default()).unwrap();
        let want = std::f64::consts::PI.sqrt() / 2.0;
        assert!((r.value - want).abs() < 1e-14, "{} vs {}", r.value, want);
        assert!(r.abs_error >= 0.0);
    }

    #[test]
    fn endpoint_singularity_is_not_evaluated() {
        // integrable 1/sqrt(x) blow-up at the left endpoint
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &QuadratureOptions { rel_tol: 1e-10, ..Default::default() })
            .unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn non_convergence_reports_estimate() {
        let opts = QuadratureOptions { rel_tol: 1e-14, abs_tol: 0.0, max_subdivisions: 3 };
        let err = integrate(|x: f64| (50.0 * x).sin().abs(), 0.0, 10.0, &opts).unwrap_err();
        match err {
            Error::Accuracy { estimate, .. } => assert!(estimate > 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_precision() {
        let r = integrate(|x: f32| x.cos(), 0.0, 1.0, &QuadratureOptions::default()).unwrap();
        assert!((r.value - 1f32.sin()).abs() < 1e-6);
    }
}
