//! Critical widths and masses, regime classification and literature
//! reference formulas.

use serde::Serialize;

use crate::averages::{
    avg_energy_object, avg_energy_object_derivative, avg_energy_point, avg_energy_point_derivative, avg_qg_force_point,
    avg_quantum_force,
};
use crate::error::{Error, Result};
use crate::minimize::minimize_bracketed;
use crate::model::{check_radius, Body, BodyKind, PhysicalContext, WavePacket};
use crate::potentials::{qg_force_object_raw, qg_force_point_raw, quantum_force_raw};
use crate::scalar::{sqrt_2_over_pi, sqrt_pi, Real};

/// Relative half-width of the band around `m_c` classified as transition.
pub const TIE_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    GravityDominant,
    Transition,
    QuantumDominant,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::GravityDominant => "gravity_dominant",
            Regime::Transition => "transition",
            Regime::QuantumDominant => "quantum_dominant",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalMethod {
    ForceBalance,
    EnergyMinimization,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectRegime {
    Macro,
    Micro,
    Intermediate,
}

/// Karolyhazy and Diosi widths/times. Object entries are `None` for point particles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceValues<T> {
    pub karolyhazy_width: T,
    pub karolyhazy_time: T,
    pub karolyhazy_object_width: Option<T>,
    pub diosi_macro_width: Option<T>,
    pub diosi_micro_width: Option<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport<T> {
    pub critical_mass: T,
    pub critical_width: T,
    /// Averaged quantum force over averaged quantum-gravitational force magnitude.
    pub force_ratio: T,
    pub regime: Regime,
    pub method: CriticalMethod,
    pub reference_values: ReferenceValues<T>,
}

/// Transition width with the exact balance constant and the unit-constant form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransitionWidth<T> {
    pub exact: T,
    pub unit_constant_form: T,
}

/// `sqrt(pi/2) hbar^2 / (G m^3)`: width at which the averaged forces balance.
pub fn critical_width_point<T: Real>(body: &Body<T>, ctx: &PhysicalContext<T>) -> Result<T> {
    body.require_point()?;
    Ok((T::PI() / T::lit(2.0)).sqrt() * ctx.gravitational_length(body.mass()))
}

/// `(pi/2)^(1/6) (hbar^2 / (G sigma0))^(1/3)`.
pub fn critical_mass<T: Real>(packet: &WavePacket<T>, ctx: &PhysicalContext<T>) -> T {
    let h = ctx.hbar();
    (T::PI() / T::lit(2.0)).powf(T::lit(1.0 / 6.0)) * (h * h / (ctx.g() * packet.sigma0())).cbrt()
}

/// `sigma0^4 / (hbar^2 R^3 / (G m^3))` at the minimum of the object energy.
fn object_energy_min_constant<T: Real>() -> T {
    T::lit(3.0) / (T::lit(8.0) * (T::lit(0.75) - T::FRAC_1_PI()))
}

/// Closed-form minimizer of the averaged energy.
///
/// Point: `3 sqrt(pi) / (2 (2 sqrt2 - 1)) hbar^2/(G m^3)`.
/// Sphere: `[3 / (8 (3/4 - 1/pi))]^(1/4) (hbar^2 R^3 / (G m^3))^(1/4)`.
pub fn energy_min_width_analytic<T: Real>(body: &Body<T>, ctx: &PhysicalContext<T>) -> T {
    let len = ctx.gravitational_length(body.mass());
    match body.kind() {
        BodyKind::PointParticle => {
            T::lit(3.0) * sqrt_pi::<T>() / (T::lit(2.0) * (T::lit(2.0) * T::SQRT_2() - T::one())) * len
        }
        BodyKind::HomogeneousSphere { radius } => {
            (object_energy_min_constant::<T>() * len * radius.powi(3)).powf(T::lit(0.25))
        }
    }
}

/// Critical mass of a sphere from the energy-minimization width.
pub fn critical_mass_object<T: Real>(packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> Result<T> {
    let radius = body.require_sphere()?;
    let h = ctx.hbar();
    let k = object_energy_min_constant::<T>();
    Ok((k * h * h * radius.powi(3) / (ctx.g() * packet.sigma0().powi(4))).cbrt())
}

fn classify<T: Real>(mass: T, critical: T) -> Regime {
    let band = T::lit(TIE_BAND);
    if mass > critical * (T::one() + band) {
        Regime::GravityDominant
    } else if mass < critical * (T::one() - band) {
        Regime::QuantumDominant
    } else {
        Regime::Transition
    }
}

/// Places a (packet, body) pair relative to its critical mass.
///
/// Points balance the averaged forces directly. Spheres use the
/// energy-minimization width; their ratio is that of the two generalized
/// forces `-dQbar/dsigma0` and `dUbar_QG/dsigma0`, which obeys the same cube law.
pub fn classify_regime<T: Real>(
    packet: &WavePacket<T>,
    body: &Body<T>,
    ctx: &PhysicalContext<T>,
) -> Result<RegimeReport<T>> {
    let reference_values = reference_formulas(body, ctx);
    let m = body.mass();
    match body.kind() {
        BodyKind::PointParticle => {
            let critical_mass = critical_mass(packet, ctx);
            let force_ratio = avg_quantum_force(packet, body, ctx) / avg_qg_force_point(packet, body, ctx)?.abs();
            Ok(RegimeReport {
                critical_mass,
                critical_width: critical_width_point(body, ctx)?,
                force_ratio,
                regime: classify(m, critical_mass),
                method: CriticalMethod::ForceBalance,
                reference_values,
            })
        }
        BodyKind::HomogeneousSphere { radius } => {
            let critical_mass = critical_mass_object(packet, body, ctx)?;
            let s = packet.sigma0();
            let h = ctx.hbar();
            let quantum = T::lit(3.0) * h * h / (T::lit(4.0) * m * s.powi(3));
            let gravity = T::lit(2.0) * ctx.g() * m * m * s * (T::lit(0.75) - T::FRAC_1_PI()) / radius.powi(3);
            Ok(RegimeReport {
                critical_mass,
                critical_width: energy_min_width_analytic(body, ctx),
                force_ratio: quantum / gravity,
                regime: classify(m, critical_mass),
                method: CriticalMethod::EnergyMinimization,
                reference_values,
            })
        }
    }
}

/// Minimizes the averaged energy over `sigma0` inside `bracket`, to 1e-10
/// relative or better.
pub fn critical_width_energy_min<T: Real>(body: &Body<T>, ctx: &PhysicalContext<T>, bracket: (T, T)) -> Result<T> {
    let (lo, hi) = bracket;
    if !(lo > T::zero() && hi > T::zero() && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidParameter("energy-minimization bracket must be positive".into()));
    }
    let packet = |s: T| WavePacket::new(s);
    let rel_tol = T::lit(1e-13).max(T::epsilon() * T::lit(8.0));
    let min = match body.kind() {
        BodyKind::PointParticle => minimize_bracketed(
            |s| packet(s).and_then(|p| avg_energy_point(&p, body, ctx)).unwrap_or(T::infinity()),
            |s| packet(s).and_then(|p| avg_energy_point_derivative(&p, body, ctx)).unwrap_or(T::nan()),
            lo,
            hi,
            rel_tol,
        )?,
        BodyKind::HomogeneousSphere { .. } => minimize_bracketed(
            |s| packet(s).and_then(|p| avg_energy_object(&p, body, ctx)).unwrap_or(T::infinity()),
            |s| packet(s).and_then(|p| avg_energy_object_derivative(&p, body, ctx)).unwrap_or(T::nan()),
            lo,
            hi,
            rel_tol,
        )?,
    };
    Ok(min.x)
}

/// Averaged energy of the point particle at its energy-minimizing width.
pub fn stationary_energy<T: Real>(body: &Body<T>, ctx: &PhysicalContext<T>) -> Result<T> {
    body.require_point()?;
    let scale = ctx.gravitational_length(body.mass());
    let width = critical_width_energy_min(body, ctx, (scale / T::lit(10.0), scale * T::lit(10.0)))?;
    avg_energy_point(&WavePacket::new(width)?, body, ctx)
}

/// Transition width of a homogeneous sphere in the three force regimes.
pub fn transition_width_object<T: Real>(
    body: &Body<T>,
    ctx: &PhysicalContext<T>,
    regime: ObjectRegime,
) -> Result<TransitionWidth<T>> {
    let radius = body.require_sphere()?;
    let len = ctx.gravitational_length(body.mass());
    Ok(match regime {
        ObjectRegime::Macro => TransitionWidth {
            exact: (T::lit(8.0) * T::SQRT_2() / T::lit(15.0) * len * radius.powi(3)).powf(T::lit(0.25)),
            unit_constant_form: len.powf(T::lit(0.25)) * radius.powf(T::lit(0.75)),
        },
        ObjectRegime::Micro => TransitionWidth {
            exact: (T::lit(4.0) * T::SQRT_2() / T::lit(9.0) * len * radius).sqrt(),
            unit_constant_form: (len * radius).sqrt(),
        },
        ObjectRegime::Intermediate => TransitionWidth {
            exact: T::lit(0.5) * sqrt_2_over_pi::<T>() * len,
            unit_constant_form: len,
        },
    })
}

/// Net radial force `f_Q + f_QG`; zero where neighbouring trajectories stay parallel.
pub fn force_balance_residual<T: Real>(
    r: T,
    packet: &WavePacket<T>,
    body: &Body<T>,
    ctx: &PhysicalContext<T>,
) -> Result<T> {
    check_radius(r)?;
    let (m, s) = (body.mass(), packet.sigma0());
    let fq = quantum_force_raw(r, m, s, ctx.hbar());
    let fg = match body.kind() {
        BodyKind::PointParticle => qg_force_point_raw(r, m, s, ctx.g()),
        BodyKind::HomogeneousSphere { radius } => qg_force_object_raw(r, m, s, radius, ctx.g()),
    };
    Ok(fq + fg)
}

/// Karolyhazy critical width `hbar^2 / (G m^3)`.
pub fn karolyhazy_width<T: Real>(body: &Body<T>, ctx: &PhysicalContext<T>) -> T {
    ctx.gravitational_length(body.mass())
}

/// Karolyhazy reduction time `m sigma_c^2 / hbar`.
pub fn karolyhazy_time<T: Real>(body: &Body<T>, ctx: &PhysicalContext<T>) -> T {
    let w = karolyhazy_width(body, ctx);
    body.mass() * w * w / ctx.hbar()
}

/// `(hbar^2 / G m^3)^(1/3) R^(2/3)`.
pub fn karolyhazy_object_width<T: Real>(body: &Body<T>, ctx: &PhysicalContext<T>) -> Result<T> {
    let radius = body.require_sphere()?;
    Ok(ctx.gravitational_length(body.mass()).cbrt() * radius.powf(T::lit(2.0 / 3.0)))
}

/// `(hbar^2 / G m^3)^(1/4) R^(3/4)`.
pub fn diosi_macro_width<T: Real>(body: &Body<T>, ctx: &PhysicalContext<T>) -> Result<T> {
    let radius = body.require_sphere()?;
    Ok(ctx.gravitational_length(body.mass()).powf(T::lit(0.25)) * radius.powf(T::lit(0.75)))
}

/// `(hbar^2 / G m^3)^(1/2) R^(1/2)`.
pub fn diosi_micro_width<T: Real>(body: &Body<T>, ctx: &PhysicalContext<T>) -> Result<T> {
    let radius = body.require_sphere()?;
    Ok((ctx.gravitational_length(body.mass()) * radius).sqrt())
}

pub fn reference_formulas<T: Real>(body: &Body<T>, ctx: &PhysicalContext<T>) -> ReferenceValues<T> {
    ReferenceValues {
        karolyhazy_width: karolyhazy_width(body, ctx),
        karolyhazy_time: karolyhazy_time(body, ctx),
        karolyhazy_object_width: karolyhazy_object_width(body, ctx).ok(),
        diosi_macro_width: diosi_macro_width(body, ctx).ok(),
        diosi_micro_width: diosi_micro_width(body, ctx).ok(),
    }
}
