//! Ensemble averages over the Gaussian density.
//!
//! [`expect`] is the generic quadrature engine; every closed form below is
//! tested against it.

use serde::Serialize;

use crate::error::Result;
use crate::model::{Body, PhysicalContext, WavePacket};
use crate::potentials::{Asymptotic, RadialField, TAIL_SIGMAS};
use crate::quadrature::{integrate, QuadratureOptions};
use crate::scalar::{sqrt_2_over_pi, sqrt_pi, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectationMethod {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Expectation<T> {
    pub value: T,
    pub abs_error_estimate: T,
    pub method: ExpectationMethod,
}

impl<T: Real> Expectation<T> {
    pub fn closed_form(value: T) -> Self {
        Self { value, abs_error_estimate: T::zero(), method: ExpectationMethod::ClosedForm }
    }
}

/// `int_0^inf rho(r) f(r) 4 pi r^2 dr`, truncated at `12 sigma0`.
pub fn expect<T: Real>(observable: &RadialField<'_, T>, packet: &WavePacket<T>) -> Result<Expectation<T>> {
    expect_with(observable, packet, &QuadratureOptions::default())
}

pub fn expect_with<T: Real>(
    observable: &RadialField<'_, T>,
    packet: &WavePacket<T>,
    opts: &QuadratureOptions<T>,
) -> Result<Expectation<T>> {
    let upper = T::lit(TAIL_SIGMAS) * packet.sigma0();
    let res = integrate(|r| observable.eval(r) * packet.shell_weight(r), T::zero(), upper, opts)?;
    Ok(Expectation { value: res.value, abs_error_estimate: res.abs_error, method: ExpectationMethod::Quadrature })
}

/// `(1/2) sqrt(2/pi) hbar^2 / (m sigma0^3)`.
pub fn avg_quantum_force<T: Real>(packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> T {
    let h = ctx.hbar();
    T::lit(0.5) * sqrt_2_over_pi::<T>() * h * h / (body.mass() * packet.sigma0().powi(3))
}

/// `-(1/pi) G m^2 / sigma0^2`.
pub fn avg_qg_force_point<T: Real>(packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> Result<T> {
    body.require_point()?;
    let m = body.mass();
    Ok(-ctx.g() * m * m / (T::PI() * packet.sigma0().powi(2)))
}

/// `3 hbar^2 / (8 m sigma0^2)`; identical for points and spheres.
pub fn avg_quantum_potential<T: Real>(packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> T {
    let h = ctx.hbar();
    T::lit(3.0) * h * h / (T::lit(8.0) * body.mass() * packet.sigma0().powi(2))
}

// E(s) = -a/s + b/s^2 for the point particle.
fn point_energy_coefficients<T: Real>(body: &Body<T>, ctx: &PhysicalContext<T>) -> (T, T) {
    let m = body.mass();
    let h = ctx.hbar();
    let a = (T::lit(2.0) * T::SQRT_2() - T::one()) * ctx.g() * m * m / (T::lit(2.0) * sqrt_pi::<T>());
    let b = T::lit(3.0) * h * h / (T::lit(8.0) * m);
    (a, b)
}

/// `G m^2 / (2 sqrt(pi) sigma0) - sqrt(2) G m^2 / (sqrt(pi) sigma0)`.
pub fn avg_qg_potential_point<T: Real>(packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> Result<T> {
    body.require_point()?;
    let m = body.mass();
    let gm2 = ctx.g() * m * m;
    let s = packet.sigma0();
    let sp = sqrt_pi::<T>();
    Ok(gm2 / (T::lit(2.0) * sp * s) - T::SQRT_2() * gm2 / (sp * s))
}

/// Average energy of the stationary point-particle packet.
pub fn avg_energy_point<T: Real>(packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> Result<T> {
    Ok(avg_qg_potential_point(packet, body, ctx)? + avg_quantum_potential(packet, body, ctx))
}

/// `d(avg_energy_point)/d sigma0`.
pub fn avg_energy_point_derivative<T: Real>(
    packet: &WavePacket<T>,
    body: &Body<T>,
    ctx: &PhysicalContext<T>,
) -> Result<T> {
    body.require_point()?;
    let (a, b) = point_energy_coefficients(body, ctx);
    let s = packet.sigma0();
    Ok(a / (s * s) - T::lit(2.0) * b / s.powi(3))
}

fn object_energy_coefficient<T: Real>(body: &Body<T>, radius: T, ctx: &PhysicalContext<T>) -> T {
    let m = body.mass();
    ctx.g() * m * m * (T::lit(0.75) - T::FRAC_1_PI()) / radius.powi(3)
}

/// `-3 G m^2 / (4 R) + (G m^2 sigma0^2 / R^3)(3/4 - 1/pi)`.
pub fn avg_qg_potential_object<T: Real>(packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> Result<T> {
    let radius = body.require_sphere()?;
    let m = body.mass();
    let s = packet.sigma0();
    Ok(-T::lit(0.75) * ctx.g() * m * m / radius + object_energy_coefficient(body, radius, ctx) * s * s)
}

pub fn avg_energy_object<T: Real>(packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> Result<T> {
    Ok(avg_qg_potential_object(packet, body, ctx)? + avg_quantum_potential(packet, body, ctx))
}

pub fn avg_energy_object_derivative<T: Real>(
    packet: &WavePacket<T>,
    body: &Body<T>,
    ctx: &PhysicalContext<T>,
) -> Result<T> {
    let radius = body.require_sphere()?;
    let c = object_energy_coefficient(body, radius, ctx);
    let h = ctx.hbar();
    let b = T::lit(3.0) * h * h / (T::lit(8.0) * body.mass());
    let s = packet.sigma0();
    Ok(T::lit(2.0) * c * s - T::lit(2.0) * b / s.powi(3))
}

/// Exact signed average of the sphere's quantum-gravitational force:
/// `9 G m^2 / (8 sqrt(pi) sigma0 R) - 15 G m^2 sigma0 / (16 sqrt(pi) R^3)`.
///
/// The first term dominates for `sigma0 << R`, the second for `sigma0 >> R`.
pub fn avg_qg_force_object<T: Real>(packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> Result<T> {
    let inner = micro_term(packet, body, ctx)?;
    let outer = macro_term(packet, body, ctx)?;
    Ok(inner - outer)
}

fn micro_term<T: Real>(packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> Result<T> {
    let radius = body.require_sphere()?;
    let m = body.mass();
    Ok(T::lit(9.0) * ctx.g() * m * m / (T::lit(8.0) * sqrt_pi::<T>() * packet.sigma0() * radius))
}

fn macro_term<T: Real>(packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> Result<T> {
    let radius = body.require_sphere()?;
    let m = body.mass();
    Ok(T::lit(15.0) / (T::lit(16.0) * sqrt_pi::<T>()) * ctx.g() * m * m * packet.sigma0() / radius.powi(3))
}

/// Magnitude `9 G m^2 / (8 sqrt(pi) sigma0 R)`; flagged in regime when `sigma0 >= 10 R`.
pub fn avg_qg_force_object_micro<T: Real>(
    packet: &WavePacket<T>,
    body: &Body<T>,
    ctx: &PhysicalContext<T>,
) -> Result<Asymptotic<T>> {
    let value = micro_term(packet, body, ctx)?;
    let radius = body.require_sphere()?;
    Ok(Asymptotic { value, in_regime: packet.sigma0() >= T::lit(10.0) * radius })
}

/// Magnitude `15 G m^2 sigma0 / (16 sqrt(pi) R^3)`; flagged in regime when `sigma0 <= R / 10`.
pub fn avg_qg_force_object_macro<T: Real>(
    packet: &WavePacket<T>,
    body: &Body<T>,
    ctx: &PhysicalContext<T>,
) -> Result<Asymptotic<T>> {
    let value = macro_term(packet, body, ctx)?;
    let radius = body.require_sphere()?;
    Ok(Asymptotic { value, in_regime: packet.sigma0() <= radius / T::lit(10.0) })
}

/// Magnitude `G m^2 / R^2`, the order-of-magnitude force between the two limits.
pub fn avg_qg_force_object_intermediate<T: Real>(
    packet: &WavePacket<T>,
    body: &Body<T>,
    ctx: &PhysicalContext<T>,
) -> Result<Asymptotic<T>> {
    let radius = body.require_sphere()?;
    let m = body.mass();
    let s = packet.sigma0();
    let ten = T::lit(10.0);
    Ok(Asymptotic {
        value: ctx.g() * m * m / (radius * radius),
        in_regime: s > radius / ten && s < radius * ten,
    })
}
