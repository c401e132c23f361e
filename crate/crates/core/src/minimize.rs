//! Bracketed one-dimensional minimization.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Golden ratio conjugate `(3 - sqrt 5) / 2`.
const GOLDEN: f64 = 0.381_966_011_250_105_151_795_413_165_634_361_882_279_690_820_194_24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<T> {
    pub x: T,
    pub value: T,
    pub iterations: usize,
}

/// Minimizes `f` on `[lo, hi]` given its derivative `df`.
///
/// The bracket must satisfy `df(lo) < 0 < df(hi)`. Bisection on the sign of
/// `df` shrinks it to `rel_tol |x|`; a golden-section pass over the final
/// bracket then picks the lowest value found there.
pub fn minimize_bracketed<T, F, D>(f: F, df: D, lo: T, hi: T, rel_tol: T) -> Result<Minimum<T>>
where
    T: Real,
    F: Fn(T) -> T,
    D: Fn(T) -> T,
{
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let bracket_err = |lo: T, hi: T| Error::Bracketing { lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy() };
    let (dlo, dhi) = (df(lo), df(hi));
    if !(dlo < T::zero() && dhi > T::zero()) {
        return Err(bracket_err(lo, hi));
    }

    let half = T::lit(0.5);
    let mut iterations = 0;
    while hi - lo > rel_tol * (half * (lo + hi)).abs() {
        let mid = half * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let d = df(mid);
        if !d.is_finite() {
            return Err(bracket_err(lo, hi));
        }
        if d < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
        if iterations > 10_000 {
            break;
        }
    }

    let polished = golden_section(&f, lo, hi, T::epsilon(), 64);
    iterations += polished.iterations;
    Ok(Minimum { iterations, ..polished })
}

/// Plain golden-section search; returns the best point it evaluated.
pub fn golden_section<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, abs_tol: T, max_iter: usize) -> Minimum<T> {
    let g = T::lit(GOLDEN);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = a + g * (b - a);
    let mut x2 = b - g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while (b - a).abs() > abs_tol && iterations < max_iter {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - g * (b - a);
            f2 = f(x2);
        }
        iterations += 1;
    }
    let mid = T::lit(0.5) * (a + b);
    let fm = f(mid);
    let (x, value) = [(x1, f1), (x2, f2)].into_iter().fold((mid, fm), |best, c| if c.1 < best.1 { c } else { best });
    Minimum { x, value, iterations }
}
