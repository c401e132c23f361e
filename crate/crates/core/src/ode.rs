//! Dormand-Prince 5(4) integrator with dense output and event location.

use crate::error::{Error, Result};
use crate::scalar::Real;

pub trait OdeSystem<T, const N: usize> {
    fn rhs(&self, t: T, y: &[T; N]) -> [T; N];
}

impl<T, const N: usize, F> OdeSystem<T, N> for F
where
    F: Fn(T, &[T; N]) -> [T; N],
{
    fn rhs(&self, t: T, y: &[T; N]) -> [T; N] {
        self(t, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<T> {
    pub rtol: T,
    pub atol: T,
    /// Initial step; chosen from the local derivative scale when `None`.
    pub h0: Option<T>,
    pub h_max: Option<T>,
    pub max_steps: usize,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self { rtol: T::lit(1e-9), atol: T::lit(1e-12), h0: None, h_max: None, max_steps: 1_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Any,
    Rising,
    Falling,
}

pub struct Event<'a, T, const N: usize> {
    pub g: Box<dyn Fn(T, &[T; N]) -> T + 'a>,
    pub direction: Direction,
    pub terminal: bool,
}

impl<'a, T, const N: usize> Event<'a, T, N> {
    pub fn new(g: impl Fn(T, &[T; N]) -> T + 'a, direction: Direction, terminal: bool) -> Self {
        Self { g: Box::new(g), direction, terminal }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventHit<T, const N: usize> {
    /// Index into the event slice passed to [`solve`].
    pub index: usize,
    pub t: T,
    pub y: [T; N],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<T, const N: usize> {
    pub t: Vec<T>,
    pub y: Vec<[T; N]>,
    pub events: Vec<EventHit<T, N>>,
    pub terminated: bool,
    pub accepted: usize,
    pub rejected: usize,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Quintic interpolant over one accepted step.
struct Dense<T, const N: usize> {
    t0: T,
    h: T,
    r: [[T; N]; 5],
}

impl<T: Real, const N: usize> Dense<T, N> {
    fn eval(&self, t: T) -> [T; N] {
        let th = (t - self.t0) / self.h;
        let th1 = T::one() - th;
        let r = &self.r;
        std::array::from_fn(|i| r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i]))))
    }
}

fn rms_norm<T: Real, const N: usize>(err: &[T; N], y0: &[T; N], y1: &[T; N], opts: &SolverOptions<T>) -> T {
    if N == 0 {
        return T::zero();
    }
    let mut sum = T::zero();
    for i in 0..N {
        let sc = opts.atol + opts.rtol * y0[i].abs().max(y1[i].abs());
        sum = sum + (err[i] / sc).powi(2);
    }
    (sum / T::lit(N as f64)).sqrt()
}

fn initial_step<T: Real, const N: usize, S: OdeSystem<T, N>>(
    sys: &S,
    t0: T,
    y0: &[T; N],
    f0: &[T; N],
    span: T,
    opts: &SolverOptions<T>,
) -> T {
    let d0 = rms_norm(y0, y0, y0, opts);
    let d1 = rms_norm(f0, y0, y0, opts);
    let h0 = if d0 < T::lit(1e-5) || d1 < T::lit(1e-5) { T::lit(1e-6) } else { T::lit(0.01) * d0 / d1 };
    let h0 = h0.min(span);
    let y1: [T; N] = std::array::from_fn(|i| y0[i] + h0 * f0[i]);
    let f1 = sys.rhs(t0 + h0, &y1);
    let df: [T; N] = std::array::from_fn(|i| (f1[i] - f0[i]) / h0);
    let d2 = rms_norm(&df, y0, y0, opts);
    let h1 = if d1.max(d2) <= T::lit(1e-15) {
        (h0 * T::lit(1e-3)).max(T::lit(1e-6))
    } else {
        (T::lit(0.01) / d1.max(d2)).powf(T::lit(0.2))
    };
    (T::lit(100.0) * h0).min(h1).min(span)
}

fn crosses<T: Real>(g0: T, g1: T, dir: Direction) -> bool {
    if g0 == T::zero() || g0.is_nan() || g1.is_nan() {
        return false;
    }
    let rising = g0 < T::zero() && g1 >= T::zero();
    let falling = g0 > T::zero() && g1 <= T::zero();
    match dir {
        Direction::Any => rising || falling,
        Direction::Rising => rising,
        Direction::Falling => falling,
    }
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end`, recording every accepted step.
///
/// Events are located by bisection on the dense output to `1e-10 |t_end - t0|`.
/// A terminal event ends the integration at the event time.
pub fn solve<T: Real, const N: usize, S: OdeSystem<T, N>>(
    sys: &S,
    t0: T,
    y0: [T; N],
    t_end: T,
    events: &[Event<'_, T, N>],
    opts: &SolverOptions<T>,
) -> Result<Solution<T, N>> {
    let span = t_end - t0;
    if !(span > T::zero()) || !span.is_finite() {
        return Err(Error::InvalidParameter("integration interval must be positive and finite".into()));
    }
    if !(opts.rtol > T::zero() && opts.atol > T::zero()) {
        return Err(Error::InvalidParameter("tolerances must be positive".into()));
    }
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("initial state must be finite".into()));
    }
    let loc_tol = T::lit(1e-10) * span;
    let h_max = opts.h_max.unwrap_or(span).min(span);

    let mut t = t0;
    let mut y = y0;
    let mut k1 = sys.rhs(t, &y);
    if k1.iter().any(|v| v.is_nan()) {
        return Err(Error::Numeric { t: t.to_f64_lossy() });
    }
    let mut h = opts.h0.unwrap_or_else(|| initial_step(sys, t0, &y0, &k1, span, opts)).min(h_max);
    let mut g_prev: Vec<T> = events.iter().map(|e| (e.g)(t, &y)).collect();

    let mut sol = Solution { t: vec![t], y: vec![y], events: Vec::new(), terminated: false, accepted: 0, rejected: 0 };
    let safety = T::lit(0.9);
    let mut steps = 0usize;

    while t < t_end {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::Stiffness { t: t.to_f64_lossy(), h: h.to_f64_lossy() });
        }
        if h < T::lit(16.0) * T::epsilon() * t.abs().max(span) {
            return Err(Error::Stiffness { t: t.to_f64_lossy(), h: h.to_f64_lossy() });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        let mut k = [[T::zero(); N]; 7];
        k[0] = k1;
        for s in 1..7 {
            let ys: [T; N] = std::array::from_fn(|i| {
                let mut acc = T::zero();
                for j in 0..s {
                    acc = acc + T::lit(A[s][j]) * k[j][i];
                }
                y[i] + h * acc
            });
            k[s] = sys.rhs(t + T::lit(C[s]) * h, &ys);
        }
        let y_new: [T; N] = std::array::from_fn(|i| {
            let mut acc = T::zero();
            for j in 0..6 {
                acc = acc + T::lit(A[6][j]) * k[j][i];
            }
            y[i] + h * acc
        });
        if k[6].iter().chain(y_new.iter()).any(|v| v.is_nan()) {
            return Err(Error::Numeric { t: t.to_f64_lossy() });
        }
        let err: [T; N] = std::array::from_fn(|i| {
            let mut acc = T::zero();
            for j in 0..7 {
                acc = acc + T::lit(E[j]) * k[j][i];
            }
            h * acc
        });
        let en = rms_norm(&err, &y, &y_new, opts);

        if en > T::one() || !en.is_finite() {
            sol.rejected += 1;
            let fac = if en.is_finite() { (safety * en.powf(T::lit(-0.2))).max(T::lit(0.2)) } else { T::lit(0.2) };
            h = h * fac;
            continue;
        }

        let t_new = if last { t_end } else { t + h };
        let dense = {
            let ydiff: [T; N] = std::array::from_fn(|i| y_new[i] - y[i]);
            let bspl: [T; N] = std::array::from_fn(|i| h * k[0][i] - ydiff[i]);
            let r4: [T; N] = std::array::from_fn(|i| ydiff[i] - h * k[6][i] - bspl[i]);
            let r5: [T; N] = std::array::from_fn(|i| {
                let mut acc = T::zero();
                for j in 0..7 {
                    acc = acc + T::lit(D[j]) * k[j][i];
                }
                h * acc
            });
            Dense { t0: t, h, r: [y, ydiff, bspl, r4, r5] }
        };

        let mut stop: Option<(T, [T; N])> = None;
        let mut hits: Vec<EventHit<T, N>> = Vec::new();
        for (idx, ev) in events.iter().enumerate() {
            let g1 = (ev.g)(t_new, &y_new);
            if crosses(g_prev[idx], g1, ev.direction) {
                let (mut a, mut b) = (t, t_new);
                let ga = g_prev[idx];
                while b - a > loc_tol {
                    let mid = T::lit(0.5) * (a + b);
                    if mid <= a || mid >= b {
                        break;
                    }
                    let gm = (ev.g)(mid, &dense.eval(mid));
                    if (gm < T::zero()) == (ga < T::zero()) && gm != T::zero() {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                let te = b;
                let ye = if te == t_new { y_new } else { dense.eval(te) };
                hits.push(EventHit { index: idx, t: te, y: ye });
                if ev.terminal && stop.is_none_or(|(ts, _)| te < ts) {
                    stop = Some((te, ye));
                }
            }
            g_prev[idx] = g1;
        }
        hits.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap_or(std::cmp::Ordering::Equal));
        sol.accepted += 1;

        if let Some((ts, ys)) = stop {
            sol.events.extend(hits.into_iter().filter(|e| e.t <= ts));
            if ts > t {
                sol.t.push(ts);
                sol.y.push(ys);
            }
            sol.terminated = true;
            return Ok(sol);
        }
        sol.events.extend(hits);

        t = t_new;
        y = y_new;
        k1 = k[6];
        sol.t.push(t);
        sol.y.push(y);

        let fac = (safety * en.max(T::lit(1e-10)).powf(T::lit(-0.2))).min(T::lit(10.0)).max(T::lit(0.2));
        h = (h * fac).min(h_max);
    }
    Ok(sol)
}
