//! Radial equations of motion, period detection and reduction-time estimators.
//!
//! Integration runs in units of `sigma0` and `t_char = sqrt(sigma0^3 / (G m))`,
//! so solver tolerances apply to the scaled state. The radial coordinate is
//! extended through the origin with an odd force.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{check_positive, Body, BodyKind, PhysicalContext, WavePacket};
use crate::ode::{self, Direction, Event, SolverOptions};
use crate::potentials::{
    qg_force_object_raw, qg_force_point_raw, qg_potential_object_raw, qg_potential_point_raw,
};
use crate::scalar::{sqrt_2_over_pi, Real};

/// Escape radius in units of `sigma0`.
pub const ESCAPE_SIGMAS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LawParams<T> {
    pub mass: T,
    pub sigma0: T,
    pub radius: Option<T>,
    pub hbar: T,
    pub g: T,
}

impl<T: Real> LawParams<T> {
    pub fn new(packet: &WavePacket<T>, body: &Body<T>, ctx: &PhysicalContext<T>) -> Self {
        Self { mass: body.mass(), sigma0: packet.sigma0(), radius: body.radius(), hbar: ctx.hbar(), g: ctx.g() }
    }

    fn validate(&self) -> Result<()> {
        check_positive("mass", self.mass)?;
        check_positive("sigma0", self.sigma0)?;
        check_positive("hbar", self.hbar)?;
        check_positive("G", self.g)?;
        if let Some(r) = self.radius {
            check_positive("radius", r)?;
        }
        Ok(())
    }

    /// `sqrt(sigma0^3 / (G m))`.
    pub fn characteristic_time(&self) -> T {
        (self.sigma0.powi(3) / (self.g * self.mass)).sqrt()
    }

    /// `G m^2 / sigma0`, the energy unit of the scaled problem.
    fn energy_scale(&self) -> T {
        self.g * self.mass * self.mass / self.sigma0
    }

    fn velocity_scale(&self) -> T {
        self.sigma0 / self.characteristic_time()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LawKind {
    GravityDominantPoint,
    MixedPoint,
    GravityDominantObject,
}

/// Which quantum term the mixed law uses: `sigma0^4` (dimensionally
/// consistent) or the `sigma0^2` of the printed equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MixedVariant {
    #[default]
    Corrected,
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForceLaw<T> {
    kind: LawKind,
    params: LawParams<T>,
    variant: MixedVariant,
}

impl<T: Real> ForceLaw<T> {
    pub fn new(kind: LawKind, params: LawParams<T>) -> Result<Self> {
        params.validate()?;
        match (kind, params.radius) {
            (LawKind::GravityDominantObject, None) => Err(Error::Kind { expected: "homogeneous sphere" }),
            (LawKind::GravityDominantPoint | LawKind::MixedPoint, Some(_)) => {
                Err(Error::Kind { expected: "point particle" })
            }
            _ => Ok(Self { kind, params, variant: MixedVariant::Corrected }),
        }
    }

    pub fn with_variant(mut self, variant: MixedVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn kind(&self) -> LawKind {
        self.kind
    }

    pub fn params(&self) -> &LawParams<T> {
        &self.params
    }

    pub fn variant(&self) -> MixedVariant {
        self.variant
    }

    /// Force `m r''` at signed position `r`.
    pub fn force(&self, r: T) -> T {
        let p = &self.params;
        match self.kind {
            LawKind::GravityDominantPoint => force_gravity_dominant_point(r, p),
            LawKind::MixedPoint => match self.variant {
                MixedVariant::Corrected => force_mixed_point(r, p),
                MixedVariant::Printed => {
                    p.hbar * p.hbar * r / (T::lit(4.0) * p.mass * p.sigma0 * p.sigma0)
                        + qg_force_point_raw(r, p.mass, p.sigma0, p.g)
                }
            },
            LawKind::GravityDominantObject => force_gravity_dominant_object(r, p),
        }
    }

    /// Potential whose negative gradient is [`ForceLaw::force`].
    ///
    /// For the point laws this is minus the self-energy `qg_potential_point`:
    /// the attractive force climbs out of the origin.
    pub fn potential(&self, r: T) -> T {
        let p = &self.params;
        let a = r.abs();
        let qg_point = || -qg_potential_point_raw(a, p.mass, p.sigma0, p.g);
        match self.kind {
            LawKind::GravityDominantPoint => qg_point(),
            LawKind::MixedPoint => {
                let width_power = match self.variant {
                    MixedVariant::Corrected => p.sigma0.powi(4),
                    MixedVariant::Printed => p.sigma0 * p.sigma0,
                };
                -p.hbar * p.hbar * r * r / (T::lit(8.0) * p.mass * width_power) + qg_point()
            }
            LawKind::GravityDominantObject => {
                qg_potential_object_raw(a, p.mass, p.sigma0, p.radius.unwrap_or(T::one()), p.g)
            }
        }
    }

    /// The same law in units of `sigma0` and `t_char`, per unit mass.
    fn scaled(&self) -> ScaledLaw<T> {
        let p = &self.params;
        let quantum = match self.variant {
            MixedVariant::Corrected => p.hbar * p.hbar / (T::lit(4.0) * p.g * p.mass.powi(3) * p.sigma0),
            MixedVariant::Printed => p.hbar * p.hbar * p.sigma0 / (T::lit(4.0) * p.g * p.mass.powi(3)),
        };
        ScaledLaw { kind: self.kind, quantum, radius: p.radius.map_or(T::one(), |r| r / p.sigma0) }
    }
}

#[derive(Debug, Clone, Copy)]
struct ScaledLaw<T> {
    kind: LawKind,
    quantum: T,
    radius: T,
}

impl<T: Real> ScaledLaw<T> {
    fn accel(&self, x: T) -> T {
        let one = T::one();
        match self.kind {
            LawKind::GravityDominantPoint => qg_force_point_raw(x, one, one, one),
            LawKind::MixedPoint => self.quantum * x + qg_force_point_raw(x, one, one, one),
            LawKind::GravityDominantObject => {
                x.signum() * qg_force_object_raw(x.abs(), one, one, self.radius, one)
            }
        }
    }

    fn potential(&self, x: T) -> T {
        let one = T::one();
        match self.kind {
            LawKind::GravityDominantPoint => -qg_potential_point_raw(x, one, one, one),
            LawKind::MixedPoint => -self.quantum * x * x / T::lit(2.0) - qg_potential_point_raw(x, one, one, one),
            LawKind::GravityDominantObject => qg_potential_object_raw(x.abs(), one, one, self.radius, one),
        }
    }
}

/// `-sqrt(2/pi) (G m^2 / sigma0^3) r exp(-r^2 / 2 sigma0^2)`.
pub fn force_gravity_dominant_point<T: Real>(r: T, params: &LawParams<T>) -> T {
    qg_force_point_raw(r, params.mass, params.sigma0, params.g)
}

/// `hbar^2 r / (4 m sigma0^4)` plus the gravity-dominant point force.
pub fn force_mixed_point<T: Real>(r: T, params: &LawParams<T>) -> T {
    p_quantum(r, params) + qg_force_point_raw(r, params.mass, params.sigma0, params.g)
}

fn p_quantum<T: Real>(r: T, p: &LawParams<T>) -> T {
    p.hbar * p.hbar * r / (T::lit(4.0) * p.mass * p.sigma0.powi(4))
}

/// `sqrt(2/pi) (G m^2 / (sigma0^3 R)) (3/2 r^2 - r^4 / 2R^2) exp(-r^2 / 2 sigma0^2)`,
/// extended to negative `r` as an odd function. Without a radius this is zero.
pub fn force_gravity_dominant_object<T: Real>(r: T, params: &LawParams<T>) -> T {
    match params.radius {
        Some(radius) => r.signum() * qg_force_object_raw(r.abs(), params.mass, params.sigma0, radius, params.g),
        None => T::zero(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances<T> {
    pub rtol: T,
    pub atol: T,
    /// Physical initial step; `t_char / 1000` when `None`.
    pub initial_step: Option<T>,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self { rtol: T::lit(1e-9), atol: T::lit(1e-12), initial_step: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample<T> {
    pub t: T,
    pub r: T,
    pub v: T,
    pub energy: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    RZero,
    VZero,
    Escape,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryEvent<T> {
    pub time: T,
    pub kind: EventKind,
    pub r: T,
    pub v: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory<T> {
    pub samples: Vec<Sample<T>>,
    pub events: Vec<TrajectoryEvent<T>>,
    /// `max |E(t) - E(0)| / |E(0)|`.
    pub energy_drift: T,
}

impl<T: Real> Trajectory<T> {
    pub fn first_event(&self, kind: EventKind) -> Option<&TrajectoryEvent<T>> {
        self.events.iter().find(|e| e.kind == kind)
    }

    pub fn events_of(&self, kind: EventKind) -> impl Iterator<Item = &TrajectoryEvent<T>> {
        self.events.iter().filter(move |e| e.kind == kind)
    }

    pub fn escaped(&self) -> bool {
        self.first_event(EventKind::Escape).is_some()
    }

    /// Largest position reached, including turning points between samples.
    pub fn r_max(&self) -> T {
        self.extreme(|a, b| a.max(b))
    }

    pub fn r_min(&self) -> T {
        self.extreme(|a, b| a.min(b))
    }

    fn extreme(&self, pick: impl Fn(T, T) -> T) -> T {
        let samples = self.samples.iter().map(|s| s.r);
        let turns = self.events_of(EventKind::VZero).map(|e| e.r);
        samples.chain(turns).reduce(&pick).unwrap_or(T::nan())
    }

    /// Relative mismatch `|up - down| / max(up, down)` of the excursions
    /// above and below `center`.
    pub fn excursion_asymmetry(&self, center: T) -> T {
        let up = self.r_max() - center;
        let down = center - self.r_min();
        (up - down).abs() / up.abs().max(down.abs())
    }
}

/// Integrates `m r'' = F(r)` from `(r0, v0)` over `[0, t_end]`.
///
/// Emits `RZero` and `VZero` events for every crossing and stops on `Escape`
/// (`|r| > 10 sigma0` moving outwards).
pub fn integrate<T: Real>(law: &ForceLaw<T>, r0: T, v0: T, t_end: T, tol: &Tolerances<T>) -> Result<Trajectory<T>> {
    if !(t_end > T::zero() && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!("t_end must be positive, got {t_end}")));
    }
    if !(r0.is_finite() && v0.is_finite()) {
        return Err(Error::InvalidParameter("initial state must be finite".into()));
    }
    if !(tol.rtol > T::zero() && tol.atol > T::zero()) {
        return Err(Error::InvalidParameter("tolerances must be positive".into()));
    }
    let p = law.params();
    let tc = p.characteristic_time();
    let vs = p.velocity_scale();
    let es = p.energy_scale();
    let scaled = law.scaled();
    let h0 = match tol.initial_step {
        Some(h) => {
            check_positive("initial step", h)?;
            h / tc
        }
        None => T::lit(1e-3),
    };
    let opts = SolverOptions { rtol: tol.rtol, atol: tol.atol, h0: Some(h0), h_max: None, max_steps: 5_000_000 };
    let rhs = |_t: T, y: &[T; 2]| [y[1], scaled.accel(y[0])];
    let events = [
        Event::new(|_t, y: &[T; 2]| y[0], Direction::Any, false),
        Event::new(|_t, y: &[T; 2]| y[1], Direction::Any, false),
        Event::new(|_t, y: &[T; 2]| y[0].abs() - T::lit(ESCAPE_SIGMAS), Direction::Rising, true),
    ];
    let sol = ode::solve(&rhs, T::zero(), [r0 / p.sigma0, v0 / vs], t_end / tc, &events, &opts)?;

    let energy = |y: &[T; 2]| T::lit(0.5) * y[1] * y[1] + scaled.potential(y[0]);
    let e0 = energy(&sol.y[0]);
    let mut max_dev = T::zero();
    let mut scale = T::zero();
    let samples: Vec<Sample<T>> = sol
        .t
        .iter()
        .zip(&sol.y)
        .map(|(&t, y)| {
            let e = energy(y);
            max_dev = max_dev.max((e - e0).abs());
            scale = scale.max(T::lit(0.5) * y[1] * y[1]).max(scaled.potential(y[0]).abs());
            Sample { t: t * tc, r: y[0] * p.sigma0, v: y[1] * vs, energy: e * es }
        })
        .collect();
    let norm = if e0.abs() > T::lit(1e-12) * scale { e0.abs() } else { scale };
    let energy_drift = if norm > T::zero() { max_dev / norm } else { T::zero() };

    let events = sol
        .events
        .iter()
        .map(|h| TrajectoryEvent {
            time: h.t * tc,
            kind: [EventKind::RZero, EventKind::VZero, EventKind::Escape][h.index],
            r: h.y[0] * p.sigma0,
            v: h.y[1] * vs,
        })
        .collect();
    Ok(Trajectory { samples, events, energy_drift })
}

/// One full period `t3 - t1` from the first and third turning points.
pub fn detect_period<T: Real>(traj: &Trajectory<T>) -> Result<T> {
    let turns: Vec<T> = traj.events_of(EventKind::VZero).map(|e| e.time).take(3).collect();
    if turns.len() < 3 {
        return Err(Error::InsufficientData(format!("need 3 turning points, found {}", turns.len())));
    }
    Ok(turns[2] - turns[0])
}

fn point_params<T: Real>(params: &LawParams<T>) -> Result<()> {
    params.validate()?;
    if params.radius.is_some() {
        return Err(Error::Kind { expected: "point particle" });
    }
    Ok(())
}

/// `(Gm / sigma0^3)^(1/2)`.
fn base_rate<T: Real>(p: &LawParams<T>) -> T {
    (p.g * p.mass / p.sigma0.powi(3)).sqrt()
}

/// `sqrt2 (2/pi)^(1/4) (Gm / sigma0^3)^(1/2)`, the frequency of the cosine solution.
pub fn angular_frequency_cosine<T: Real>(params: &LawParams<T>) -> T {
    T::SQRT_2() * sqrt_2_over_pi::<T>().sqrt() * base_rate(params)
}

/// `(2/pi)^(1/4) (Gm / sigma0^3)^(1/2)`, from linearizing the force at the origin.
pub fn angular_frequency_linearized<T: Real>(params: &LawParams<T>) -> T {
    sqrt_2_over_pi::<T>().sqrt() * base_rate(params)
}

/// `r0 cos(omega t)`; intended for `r0 = sigma0`, `v0 = 0`.
pub fn analytic_trajectory_point<T: Real>(t: T, r0: T, params: &LawParams<T>) -> Result<T> {
    point_params(params)?;
    Ok(r0 * (angular_frequency_cosine(params) * t).cos())
}

/// `2^(1/4) pi^(5/4) (sigma0^3 / Gm)^(1/2)`.
pub fn period_formula<T: Real>(params: &LawParams<T>) -> Result<T> {
    point_params(params)?;
    Ok(T::lit(2.0).powf(T::lit(0.25)) * T::PI().powf(T::lit(1.25)) / base_rate(params))
}

/// `2 pi / omega_lin`.
pub fn linearized_period<T: Real>(params: &LawParams<T>) -> Result<T> {
    point_params(params)?;
    Ok(T::TAU() / angular_frequency_linearized(params))
}

/// `-2 sqrt(2/pi) (Gm / sigma0^2) cos(omega t)`.
pub fn qg_acceleration_analytic<T: Real>(t: T, params: &LawParams<T>) -> Result<T> {
    point_params(params)?;
    let p = params;
    Ok(-T::lit(2.0) * sqrt_2_over_pi::<T>() * p.g * p.mass / (p.sigma0 * p.sigma0)
        * (angular_frequency_cosine(p) * t).cos())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TauMethod {
    QuarterPeriodNumeric,
    PeriodFormula,
    ShortTime,
    Uncertainty,
    ObjectUncertainty,
    ObjectMicro,
}

impl TauMethod {
    pub const POINT: [TauMethod; 4] =
        [TauMethod::QuarterPeriodNumeric, TauMethod::PeriodFormula, TauMethod::ShortTime, TauMethod::Uncertainty];
    pub const OBJECT: [TauMethod; 2] = [TauMethod::ObjectUncertainty, TauMethod::ObjectMicro];

    pub fn label(self) -> &'static str {
        match self {
            TauMethod::QuarterPeriodNumeric => "quarter_period_numeric",
            TauMethod::PeriodFormula => "period_formula",
            TauMethod::ShortTime => "short_time",
            TauMethod::Uncertainty => "uncertainty",
            TauMethod::ObjectUncertainty => "object_uncertainty",
            TauMethod::ObjectMicro => "object_micro",
        }
    }
}

/// Implied coefficients of `Delta = |alpha G m^2 sigma0^2 / R^3 - beta G m^2 / R|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyCoefficients<T> {
    pub alpha: T,
    pub beta: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionEstimate<T> {
    pub tau: T,
    pub method: TauMethod,
    pub assumptions: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<UncertaintyCoefficients<T>>,
}

/// `beta = 3/2 erf(1/sqrt2) - 3 sqrt2 e^(-1/2) / (2 sqrt pi)`,
/// `alpha = 3/2 erf(1/sqrt2) - 2 sqrt2 e^(-1/2) / sqrt pi`.
pub fn object_uncertainty_coefficients<T: Real>() -> UncertaintyCoefficients<T> {
    let erf = T::FRAC_1_SQRT_2().erf();
    let g = T::SQRT_2() * T::lit(-0.5).exp() / T::PI().sqrt();
    UncertaintyCoefficients { alpha: T::lit(1.5) * erf - T::lit(2.0) * g, beta: T::lit(1.5) * erf - T::lit(1.5) * g }
}

pub fn tau_point<T: Real>(
    method: TauMethod,
    packet: &WavePacket<T>,
    body: &Body<T>,
    ctx: &PhysicalContext<T>,
) -> Result<ReductionEstimate<T>> {
    let params = LawParams::new(packet, body, ctx);
    point_params(&params)?;
    let (m, s, h, g) = (params.mass, params.sigma0, params.hbar, params.g);
    let (tau, assumptions) = match method {
        TauMethod::QuarterPeriodNumeric => {
            let law = ForceLaw::new(LawKind::GravityDominantPoint, params)?;
            let tc = params.characteristic_time();
            let traj = integrate(&law, s, T::zero(), T::lit(20.0) * tc, &Tolerances::default())?;
            let hit = traj
                .first_event(EventKind::RZero)
                .ok_or_else(|| Error::InsufficientData("no r = 0 crossing".into()))?;
            (hit.time, "first r = 0 crossing of the gravity-dominant law from r0 = sigma0, v0 = 0")
        }
        TauMethod::PeriodFormula => (base_rate(&params).recip(), "(sigma0^3 / G m)^(1/2), width frozen at sigma0"),
        TauMethod::ShortTime => (h.powi(3) / (g * g * m.powi(5)), "hbar^3 / (G^2 m^5), sigma0 at the critical width"),
        TauMethod::Uncertainty => {
            let delta = qg_potential_point_raw(s, m, s, g).abs();
            (h / delta, "hbar / |U_QG(sigma0) - U_QG(0)|")
        }
        TauMethod::ObjectUncertainty | TauMethod::ObjectMicro => {
            return Err(Error::Kind { expected: "homogeneous sphere" })
        }
    };
    Ok(ReductionEstimate { tau, method, assumptions, coefficients: None })
}

pub fn tau_object<T: Real>(
    method: TauMethod,
    packet: &WavePacket<T>,
    body: &Body<T>,
    ctx: &PhysicalContext<T>,
) -> Result<ReductionEstimate<T>> {
    let radius = body.require_sphere()?;
    let (m, s, h, g) = (body.mass(), packet.sigma0(), ctx.hbar(), ctx.g());
    match method {
        TauMethod::ObjectUncertainty => {
            let delta = qg_potential_object_raw(s, m, s, radius, g).abs();
            Ok(ReductionEstimate {
                tau: h / delta,
                method,
                assumptions: "hbar / |U_QG(sigma0) - U_QG(0)| from the exact sphere potential",
                coefficients: Some(object_uncertainty_coefficients()),
            })
        }
        TauMethod::ObjectMicro => Ok(ReductionEstimate {
            tau: T::lit(1.25) * (T::TAU()).sqrt() * h * radius / (g * m * m),
            method,
            assumptions: "large-width asymptotic potential at r = sigma0",
            coefficients: None,
        }),
        _ => Err(Error::Kind { expected: "point particle" }),
    }
}

/// Every estimator applicable to the body kind; the numeric quarter period
/// is included only when `numeric` is set.
pub fn all_tau_estimates<T: Real>(
    packet: &WavePacket<T>,
    body: &Body<T>,
    ctx: &PhysicalContext<T>,
    numeric: bool,
) -> Result<Vec<ReductionEstimate<T>>> {
    match body.kind() {
        BodyKind::PointParticle => TauMethod::POINT
            .iter()
            .filter(|&&m| numeric || m != TauMethod::QuarterPeriodNumeric)
            .map(|&m| tau_point(m, packet, body, ctx))
            .collect(),
        BodyKind::HomogeneousSphere { .. } => {
            TauMethod::OBJECT.iter().map(|&m| tau_object(m, packet, body, ctx)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{qg_force_object, qg_potential_object};
    use approx::assert_relative_eq;

    fn unit_point(m: f64, s: f64) -> LawParams<f64> {
        LawParams { mass: m, sigma0: s, radius: None, hbar: 1.0, g: 1.0 }
    }

    fn unit_object(m: f64, s: f64, r: f64) -> LawParams<f64> {
        LawParams { mass: m, sigma0: s, radius: Some(r), hbar: 1.0, g: 1.0 }
    }

    #[test]
    fn forces_vanish_at_origin() {
        let p = unit_point(1.0, 1.0);
        assert_eq!(force_gravity_dominant_point(0.0, &p), 0.0);
        assert_eq!(force_mixed_point(0.0, &p), 0.0);
        assert_eq!(force_gravity_dominant_object(0.0, &unit_object(1.0, 1.0, 1.0)), 0.0);
    }

    #[test]
    fn point_force_examples() {
        let p = unit_point(1.0, 1.0);
        assert_relative_eq!(force_gravity_dominant_point(1.0, &p), -0.483_941_449_038_286_7, max_relative = 1e-14);
        for &r in &[0.3, 1.0, 2.7] {
            assert_eq!(force_gravity_dominant_point(-r, &p), -force_gravity_dominant_point(r, &p));
        }
        assert!(force_mixed_point(1.0, &unit_point(5.0, 1.0)) < 0.0);
    }

    #[test]
    fn object_force_examples() {
        let p = unit_object(1.0, 1.0, 1.0);
        let root = 3f64.sqrt();
        assert!(force_gravity_dominant_object(root - 1e-6, &p) > 0.0);
        assert!(force_gravity_dominant_object(root + 1e-6, &p) < 0.0);
        assert_eq!(force_gravity_dominant_object(-0.7, &p), -force_gravity_dominant_object(0.7, &p));
        let law = ForceLaw::new(LawKind::GravityDominantObject, p).unwrap();
        for &r in &[0.2, 0.9, 1.6, 2.4] {
            let h = 1e-5;
            let fd = -(law.potential(r + h) - law.potential(r - h)) / (2.0 * h);
            assert_relative_eq!(law.force(r), fd, max_relative = 1e-8);
        }
        let ctx = PhysicalContext::dimensionless();
        let b = Body::sphere(1.0, 1.0).unwrap();
        let pk = WavePacket::new(1.0).unwrap();
        assert_eq!(law.force(1.3), qg_force_object(1.3, &pk, &b, &ctx).unwrap());
        assert_eq!(law.potential(1.3), qg_potential_object(1.3, &pk, &b, &ctx).unwrap());
    }

    #[test]
    fn law_kind_checks() {
        assert!(ForceLaw::new(LawKind::GravityDominantObject, unit_point(1.0, 1.0)).is_err());
        assert!(ForceLaw::new(LawKind::MixedPoint, unit_object(1.0, 1.0, 1.0)).is_err());
        assert!(ForceLaw::new(LawKind::MixedPoint, unit_point(-1.0, 1.0)).is_err());
    }

    #[test]
    fn mixed_average_vanishes_at_critical_mass() {
        use crate::averages::expect;
        use crate::criticality::critical_mass;
        use crate::potentials::{FieldKind, RadialField};
        let pk = WavePacket::new(1.0).unwrap();
        let mc = critical_mass(&pk, &PhysicalContext::dimensionless());
        let p = unit_point(mc, 1.0);
        let field = RadialField::new(FieldKind::Force, "mixed", move |r| force_mixed_point(r, &p));
        let avg = expect(&field, &pk).unwrap();
        assert!(avg.value.abs() < 1e-12);
    }

    #[test]
    fn equilibrium_stays_put() {
        let law = ForceLaw::new(LawKind::GravityDominantPoint, unit_point(1.0, 1.0)).unwrap();
        let traj = integrate(&law, 0.0, 0.0, 10.0, &Tolerances::default()).unwrap();
        assert!(traj.samples.iter().all(|s| s.r == 0.0 && s.v == 0.0));
        assert!(traj.events.is_empty());
    }

    #[test]
    fn oscillation_and_events() {
        let law = ForceLaw::new(LawKind::GravityDominantPoint, unit_point(1.0, 1.0)).unwrap();
        let traj = integrate(&law, 1.0, 0.0, 20.0, &Tolerances::default()).unwrap();
        assert!(traj.samples.windows(2).all(|w| w[1].t > w[0].t));
        let period = detect_period(&traj).unwrap();
        let quarter = traj.first_event(EventKind::RZero).unwrap().time;
        assert_relative_eq!(4.0 * quarter, period, max_relative = 1e-6);
        // numeric period of the full nonlinear law, frozen from an independent integration
        assert_relative_eq!(period, 8.477, max_relative = 1e-3);
        assert!(traj.r_max() <= 1.0 + 1e-9 && traj.r_min() >= -1.0 - 1e-9);
        assert!(traj.energy_drift < 1e-7);
        let t_end = traj.samples.last().unwrap().t;
        assert!(traj.events.iter().all(|e| e.time >= 0.0 && e.time <= t_end));
    }

    #[test]
    fn small_amplitude_matches_linearization() {
        let p = unit_point(1.0, 1.0);
        let law = ForceLaw::new(LawKind::GravityDominantPoint, p).unwrap();
        let traj = integrate(&law, 0.01, 0.0, 20.0, &Tolerances::default()).unwrap();
        let period = detect_period(&traj).unwrap();
        assert_relative_eq!(period, linearized_period(&p).unwrap(), max_relative = 1e-3);
    }

    #[test]
    fn mixed_small_mass_escapes() {
        let law = ForceLaw::new(LawKind::MixedPoint, unit_point(0.1, 1.0)).unwrap();
        let traj = integrate(&law, 1.0, 0.0, 100.0, &Tolerances::default()).unwrap();
        assert!(traj.escaped());
        assert!(traj.first_event(EventKind::RZero).is_none());
        assert_eq!(traj.events.last().unwrap().kind, EventKind::Escape);
    }

    #[test]
    fn printed_variant_differs_off_unit_width() {
        let p = unit_point(1.0, 2.0);
        let a = ForceLaw::new(LawKind::MixedPoint, p).unwrap();
        let b = a.with_variant(MixedVariant::Printed);
        assert_relative_eq!(b.force(1.0) - a.force(1.0), 1.0 / 16.0 - 1.0 / 64.0, max_relative = 1e-12);
        let h = 1e-5;
        let fd = -(b.potential(1.0 + h) - b.potential(1.0 - h)) / (2.0 * h);
        assert_relative_eq!(b.force(1.0), fd, max_relative = 1e-8);
    }

    #[test]
    fn scaled_integration_matches_physical_units() {
        // same dimensionless problem in SI-like magnitudes
        let ctx = PhysicalContext::si();
        let body = Body::point(1e3).unwrap();
        let pk = WavePacket::new(2.0).unwrap();
        let p = LawParams::new(&pk, &body, &ctx);
        let law = ForceLaw::new(LawKind::GravityDominantPoint, p).unwrap();
        let tc = p.characteristic_time();
        let traj = integrate(&law, 2.0, 0.0, 20.0 * tc, &Tolerances::default()).unwrap();
        assert_relative_eq!(detect_period(&traj).unwrap() / tc, 8.477, max_relative = 1e-3);
    }

    #[test]
    fn insufficient_turning_points() {
        let law = ForceLaw::new(LawKind::GravityDominantPoint, unit_point(1.0, 1.0)).unwrap();
        let traj = integrate(&law, 1.0, 0.0, 5.0, &Tolerances::default()).unwrap();
        assert!(matches!(detect_period(&traj), Err(Error::InsufficientData(_))));
        assert!(integrate(&law, 1.0, 0.0, 0.0, &Tolerances::default()).is_err());
    }

    #[test]
    fn analytic_examples() {
        let p = unit_point(1.0, 1.0);
        assert_relative_eq!(angular_frequency_cosine(&p), 1.263_237_555_492_129_3, max_relative = 1e-14);
        let t = period_formula(&p).unwrap();
        assert_relative_eq!(t, 4.973_874_691_947_23, max_relative = 1e-13);
        assert_relative_eq!(t, std::f64::consts::TAU / angular_frequency_cosine(&p), max_relative = 1e-14);
        assert_eq!(analytic_trajectory_point(0.0, 1.0, &p).unwrap(), 1.0);
        assert!(analytic_trajectory_point(t / 4.0, 1.0, &p).unwrap().abs() < 1e-14);
        let ratio = period_formula(&unit_point(30.0, 1.0)).unwrap() / t;
        assert_relative_eq!(ratio, 1.0 / 30f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(qg_acceleration_analytic(0.0, &p).unwrap(), -1.595_769_121_605_730_8, max_relative = 1e-14);
        assert!(qg_acceleration_analytic(t / 4.0, &p).unwrap().abs() < 1e-14);
        assert!(period_formula(&unit_object(1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn mean_acceleration_magnitude() {
        let p = unit_point(1.0, 1.0);
        let t = period_formula(&p).unwrap();
        let n = 20_000;
        let mean = (0..n)
            .map(|i| qg_acceleration_analytic((i as f64 + 0.5) * t / n as f64, &p).unwrap().abs())
            .sum::<f64>()
            / n as f64;
        assert_relative_eq!(mean, 1.015_898_174_947_855_7, max_relative = 1e-6);
        assert!(mean / 1.0 < 1.02);
    }

    #[test]
    fn tau_point_examples() {
        let ctx = PhysicalContext::dimensionless();
        let b = Body::point(1.0).unwrap();
        let pk = WavePacket::new(1.0).unwrap();
        assert_relative_eq!(tau_point(TauMethod::PeriodFormula, &pk, &b, &ctx).unwrap().tau, 1.0);
        assert_relative_eq!(
            tau_point(TauMethod::Uncertainty, &pk, &b, &ctx).unwrap().tau,
            3.185_290_463_547_056,
            max_relative = 1e-13
        );
        let q = tau_point(TauMethod::QuarterPeriodNumeric, &pk, &b, &ctx).unwrap().tau;
        assert_relative_eq!(q, 8.477 / 4.0, max_relative = 1e-3);
        assert!(tau_point(TauMethod::ObjectMicro, &pk, &b, &ctx).is_err());
        assert!(tau_point(TauMethod::PeriodFormula, &pk, &Body::sphere(1.0, 1.0).unwrap(), &ctx).is_err());
    }

    #[test]
    fn uncertainty_matches_short_time_at_critical_width() {
        let ctx = PhysicalContext::<f64>::cgs();
        let b = Body::point(2e-15).unwrap();
        let pk = WavePacket::new(ctx.gravitational_length(2e-15)).unwrap();
        let u = tau_point(TauMethod::Uncertainty, &pk, &b, &ctx).unwrap().tau;
        let s = tau_point(TauMethod::ShortTime, &pk, &b, &ctx).unwrap().tau;
        assert_relative_eq!(u / s, 3.185_290_463_547_056, max_relative = 1e-10);
        assert!(u / s <= 3.2);
    }

    #[test]
    fn tau_object_examples() {
        let ctx = PhysicalContext::dimensionless();
        let b = Body::sphere(1.0, 1.0).unwrap();
        let c = object_uncertainty_coefficients::<f64>();
        assert_relative_eq!(c.beta, 0.298_122_064_648_198_7, max_relative = 1e-13);
        assert_relative_eq!(c.alpha, 0.056_151_340_129_055_32, max_relative = 1e-12);
        for &s in &[0.01, 0.3, 1.0] {
            let pk = WavePacket::new(s).unwrap();
            let est = tau_object(TauMethod::ObjectUncertainty, &pk, &b, &ctx).unwrap();
            assert_relative_eq!(est.tau, 1.0 / (c.alpha * s * s - c.beta).abs(), max_relative = 1e-10);
        }
        let pk = WavePacket::new(1.0).unwrap();
        let micro = tau_object(TauMethod::ObjectMicro, &pk, &b, &ctx).unwrap();
        assert_relative_eq!(micro.tau, 1.25 * std::f64::consts::TAU.sqrt(), max_relative = 1e-15);
        assert!(tau_object(TauMethod::Uncertainty, &pk, &b, &ctx).is_err());
        assert_eq!(all_tau_estimates(&pk, &b, &ctx, false).unwrap().len(), 2);
        assert_eq!(all_tau_estimates(&pk, &Body::point(1.0).unwrap(), &ctx, false).unwrap().len(), 3);
    }
}
