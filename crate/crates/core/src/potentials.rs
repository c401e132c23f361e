//! Closed-form potentials and forces along the radial coordinate.
//!
//! Quantum-gravitational potentials follow the attractive convention: they
//! are the shell integral `int_0^r U_cl(r') rho(r') 4 pi r'^2 dr'` of a
//! negative classical kernel, vanish at the origin and decrease outwards.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{check_radius, Body, BodyKind, PhysicalContext, WavePacket};
use crate::quadrature::{integrate, Integral, QuadratureOptions};
use crate::scalar::{sqrt_2_over_pi, sqrt_pi, Real};

/// Truncation radius of semi-infinite radial integrals, in units of `sigma0`.
pub const TAIL_SIGMAS: f64 = 12.0;

/// Value of an asymptotic formula plus whether its parameters lie in the
/// regime the formula was derived for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Asymptotic<T> {
    pub value: T,
    pub in_regime: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Potential,
    Force,
    Observable,
}

/// A scalar function of the radius, tagged with what it represents.
pub struct RadialField<'a, T> {
    kind: FieldKind,
    label: &'static str,
    eval: Box<dyn Fn(T) -> T + Send + Sync + 'a>,
}

impl<T> std::fmt::Debug for RadialField<'_, T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialField").field("kind", &self.kind).field("label", &self.label).finish()
    }
}

impl<'a, T: Real> RadialField<'a, T> {
    pub fn new(kind: FieldKind, label: &'static str, eval: impl Fn(T) -> T + Send + Sync + 'a) -> Self {
        Self { kind, label, eval: Box::new(eval) }
    }

    #[inline]
    pub fn eval(&self, r: T) -> T {
        (self.eval)(r)
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn label(&self) -> &'static str {
        self.label
    }

    pub fn quantum_potential(packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> Self {
        let (m, s, h) = (body.mass(), packet.sigma0(), ctx.hbar());
        Self::new(FieldKind::Potential, "Q", move |r| quantum_potential_raw(r, m, s, h))
    }

    pub fn quantum_force(packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> Self {
        let (m, s, h) = (body.mass(), packet.sigma0(), ctx.hbar());
        Self::new(FieldKind::Force, "f_Q", move |r| quantum_force_raw(r, m, s, h))
    }

    /// Classical kernel of the body; for a point particle it diverges at 0.
    pub fn classical_kernel(body: &Body<T>, ctx: &PhysicalContext<T>) -> Self {
        let (m, g) = (body.mass(), ctx.g());
        match body.kind() {
            BodyKind::PointParticle => Self::new(FieldKind::Potential, "U_cl point", move |r| -g * m * m / r),
            BodyKind::HomogeneousSphere { radius } => {
                Self::new(FieldKind::Potential, "U_cl sphere", move |r| sphere_kernel_raw(r, m, radius, g))
            }
        }
    }

    /// Quantum-gravitational potential of whichever body kind is given.
    pub fn qg_potential(packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> Self {
        let (m, s, g) = (body.mass(), packet.sigma0(), ctx.g());
        match body.kind() {
            BodyKind::PointParticle => {
                Self::new(FieldKind::Potential, "U_QG point", move |r| qg_potential_point_raw(r, m, s, g))
            }
            BodyKind::HomogeneousSphere { radius } => Self::new(FieldKind::Potential, "U_QG sphere", move |r| {
                qg_potential_object_raw(r, m, s, radius, g)
            }),
        }
    }

    pub fn qg_force(packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> Self {
        let (m, s, g) = (body.mass(), packet.sigma0(), ctx.g());
        match body.kind() {
            BodyKind::PointParticle => {
                Self::new(FieldKind::Force, "f_QG point", move |r| qg_force_point_raw(r, m, s, g))
            }
            BodyKind::HomogeneousSphere { radius } => {
                Self::new(FieldKind::Force, "f_QG sphere", move |r| qg_force_object_raw(r, m, s, radius, g))
            }
        }
    }
}

// Raw evaluators: no validation, r >= 0 assumed.

#[inline]
pub(crate) fn quantum_potential_raw<T: Real>(r: T, m: T, s: T, hbar: T) -> T {
    let s2 = s * s;
    hbar * hbar * (T::lit(6.0) * s2 - r * r) / (T::lit(8.0) * m * s2 * s2)
}

#[inline]
pub(crate) fn quantum_force_raw<T: Real>(r: T, m: T, s: T, hbar: T) -> T {
    hbar * hbar * r / (T::lit(4.0) * m * s.powi(4))
}

#[inline]
pub(crate) fn sphere_kernel_raw<T: Real>(r: T, m: T, radius: T, g: T) -> T {
    let q = r / radius;
    -(g * m * m / radius) * (T::lit(1.5) - T::lit(0.5) * q * q)
}

#[inline]
pub(crate) fn qg_potential_point_raw<T: Real>(r: T, m: T, s: T, g: T) -> T {
    let x = -(r * r) / (T::lit(2.0) * s * s);
    sqrt_2_over_pi::<T>() * (g * m * m / s) * x.exp_m1()
}

#[inline]
pub(crate) fn qg_force_point_raw<T: Real>(r: T, m: T, s: T, g: T) -> T {
    let x = -(r * r) / (T::lit(2.0) * s * s);
    -sqrt_2_over_pi::<T>() * (g * m * m / s.powi(3)) * r * x.exp()
}

pub(crate) fn qg_potential_object_raw<T: Real>(r: T, m: T, s: T, radius: T, g: T) -> T {
    if r < s {
        return qg_potential_object_series(r, m, s, radius, g);
    }
    let two = T::lit(2.0);
    let sp = sqrt_pi::<T>();
    let sq2 = T::SQRT_2();
    let gm2 = g * m * m;
    let e = (-(r * r) / (two * s * s)).exp();
    let erf = (r / (sq2 * s)).erf();
    let r3 = radius.powi(3);
    // inner-radius group ~ 1/R and outer group ~ sigma^2 / R^3
    let inner = T::lit(3.0) * sq2 * e * r / (two * sp * s * radius) - T::lit(1.5) * erf / radius;
    let outer = -sq2 * e * r * (r * r + T::lit(3.0) * s * s) / (two * sp * s * r3) + T::lit(1.5) * s * s * erf / r3;
    gm2 * (inner + outer)
}

/// Term-by-term integral of the Maclaurin series of the Gaussian; used
/// inside `r < sigma0`, where the closed form cancels catastrophically.
fn qg_potential_object_series<T: Real>(r: T, m: T, s: T, radius: T, g: T) -> T {
    let x = r * r / (T::lit(2.0) * s * s);
    let q = r * r / (T::lit(2.0) * radius * radius);
    let mut sum = T::zero();
    let mut coeff = T::one();
    for k in 0..200 {
        let kf = T::lit(k as f64);
        let term = coeff * (T::lit(1.5) / (T::lit(2.0) * kf + T::lit(3.0)) - q / (T::lit(2.0) * kf + T::lit(5.0)));
        sum = sum + term;
        if term.abs() <= T::epsilon() * T::lit(1e-3) * sum.abs().max(T::min_positive_value()) && k > 2 {
            break;
        }
        coeff = -coeff * x / (kf + T::one());
    }
    -sqrt_2_over_pi::<T>() * (g * m * m / (radius * s.powi(3))) * r.powi(3) * sum
}

#[inline]
pub(crate) fn qg_force_object_raw<T: Real>(r: T, m: T, s: T, radius: T, g: T) -> T {
    let e = (-(r * r) / (T::lit(2.0) * s * s)).exp();
    let r2 = r * r;
    sqrt_2_over_pi::<T>() * (g * m * m / (s.powi(3) * radius))
        * (T::lit(1.5) * r2 - T::lit(0.5) * r2 * r2 / (radius * radius))
        * e
}

/// Quantum potential `hbar^2 (6 sigma0^2 - r^2) / (8 m sigma0^4)`.
pub fn quantum_potential<T: Real>(
    r: T,
    packet: &WavePacket<T>,
    body: &Body<T>,
    ctx: &PhysicalContext<T>,
) -> Result<T> {
    check_radius(r)?;
    Ok(quantum_potential_raw(r, body.mass(), packet.sigma0(), ctx.hbar()))
}

/// Quantum force `-dQ/dr = hbar^2 r / (4 m sigma0^4)`, repulsive.
pub fn quantum_force<T: Real>(r: T, packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> Result<T> {
    check_radius(r)?;
    Ok(quantum_force_raw(r, body.mass(), packet.sigma0(), ctx.hbar()))
}

/// Classical gravitational kernel: `-G m^2 / r` for a point particle, the
/// interior potential of a homogeneous ball for a sphere.
pub fn classical_kernel<T: Real>(r: T, body: &Body<T>, ctx: &PhysicalContext<T>) -> Result<T> {
    check_radius(r)?;
    let (m, g) = (body.mass(), ctx.g());
    match body.kind() {
        BodyKind::PointParticle if r == T::zero() => Err(Error::Singularity),
        BodyKind::PointParticle => Ok(-g * m * m / r),
        BodyKind::HomogeneousSphere { radius } => Ok(sphere_kernel_raw(r, m, radius, g)),
    }
}

/// `-sqrt(2/pi) (G m^2 / sigma0) (1 - exp(-r^2 / 2 sigma0^2))`.
pub fn qg_potential_point<T: Real>(
    r: T,
    packet: &WavePacket<T>,
    body: &Body<T>,
    ctx: &PhysicalContext<T>,
) -> Result<T> {
    check_radius(r)?;
    body.require_point()?;
    Ok(qg_potential_point_raw(r, body.mass(), packet.sigma0(), ctx.g()))
}

/// `-sqrt(2/pi) (G m^2 / sigma0^3) r exp(-r^2 / 2 sigma0^2)`, attractive.
pub fn qg_force_point<T: Real>(r: T, packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> Result<T> {
    check_radius(r)?;
    body.require_point()?;
    Ok(qg_force_point_raw(r, body.mass(), packet.sigma0(), ctx.g()))
}

/// Quantum-gravitational potential of a homogeneous sphere (exp/erf closed form).
pub fn qg_potential_object<T: Real>(
    r: T,
    packet: &WavePacket<T>,
    body: &Body<T>,
    ctx: &PhysicalContext<T>,
) -> Result<T> {
    check_radius(r)?;
    let radius = body.require_sphere()?;
    Ok(qg_potential_object_raw(r, body.mass(), packet.sigma0(), radius, ctx.g()))
}

/// Exact `-dU_QG/dr` of the sphere. Positive (outward) for `r < sqrt(3) R`,
/// attractive beyond.
pub fn qg_force_object<T: Real>(r: T, packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> Result<T> {
    check_radius(r)?;
    let radius = body.require_sphere()?;
    Ok(qg_force_object_raw(r, body.mass(), packet.sigma0(), radius, ctx.g()))
}

/// Leading-order form `-(2 sqrt2 / (5 sqrt pi)) G m^2 r^3 / (R sigma0^3)` for
/// wide packets. Flagged out of regime when `sigma0 < 10 R`.
pub fn qg_potential_object_asymptotic<T: Real>(
    r: T,
    packet: &WavePacket<T>,
    body: &Body<T>,
    ctx: &PhysicalContext<T>,
) -> Result<Asymptotic<T>> {
    check_radius(r)?;
    let radius = body.require_sphere()?;
    let s = packet.sigma0();
    let m = body.mass();
    let c = T::lit(2.0) * T::SQRT_2() / (T::lit(5.0) * sqrt_pi::<T>());
    Ok(Asymptotic {
        value: -c * ctx.g() * m * m * r.powi(3) / (radius * s.powi(3)),
        in_regime: s >= T::lit(10.0) * radius,
    })
}

/// Quantum-gravitational potential by direct quadrature of
/// `int_0^r kernel(r') rho(r') 4 pi r'^2 dr'`. Radii beyond `12 sigma0` are
/// clamped to the truncation radius.
pub fn qg_potential_numeric<T: Real>(
    r: T,
    kernel: &RadialField<'_, T>,
    packet: &WavePacket<T>,
    opts: &QuadratureOptions<T>,
) -> Result<Integral<T>> {
    check_radius(r)?;
    let upper = r.min(T::lit(TAIL_SIGMAS) * packet.sigma0());
    integrate(|x| kernel.eval(x) * packet.shell_weight(x), T::zero(), upper, opts)
}
