//! Physical context, bodies and the Gaussian wave packet.
//!
//! Every downstream formula reads `hbar` and `G` from a [`PhysicalContext`]
//! and treats its inputs as plain numbers in whatever unit system that
//! context names. Conversion between systems is a boundary concern.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Reduced Planck constant in J s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Newtonian constant of gravitation in m^3 kg^-1 s^-2.
pub const G_SI: f64 = 6.674_30e-11;
/// Reduced Planck constant in erg s.
pub const HBAR_CGS: f64 = 1.054_571_817e-27;
/// Newtonian constant of gravitation in cm^3 g^-1 s^-2.
pub const G_CGS: f64 = 6.674_30e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitSystem {
    Si,
    Cgs,
    Dimensionless,
}

impl UnitSystem {
    pub fn label(self) -> &'static str {
        match self {
            UnitSystem::Si => "si",
            UnitSystem::Cgs => "cgs",
            UnitSystem::Dimensionless => "dimensionless",
        }
    }
}

impl std::str::FromStr for UnitSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "si" => Ok(UnitSystem::Si),
            "cgs" => Ok(UnitSystem::Cgs),
            "dimensionless" | "natural" => Ok(UnitSystem::Dimensionless),
            other => Err(Error::InvalidParameter(format!("unknown unit system `{other}`"))),
        }
    }
}

/// Values of `hbar` and `G` plus the unit system they are expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalContext<T = f64> {
    hbar: T,
    g: T,
    units: UnitSystem,
}

impl<T: Real> PhysicalContext<T> {
    /// Builds a context with explicit constants. Dimensionless mode only
    /// accepts `hbar = G = 1`.
    pub fn new(hbar: T, g: T, units: UnitSystem) -> Result<Self> {
        if !(hbar > T::zero() && hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        if !(g > T::zero() && g.is_finite()) {
            return Err(Error::InvalidParameter(format!("G must be positive, got {g}")));
        }
        if units == UnitSystem::Dimensionless && (hbar != T::one() || g != T::one()) {
            return Err(Error::InvalidParameter(
                "dimensionless mode requires hbar = G = 1".into(),
            ));
        }
        Ok(Self { hbar, g, units })
    }

    pub fn dimensionless() -> Self {
        Self { hbar: T::one(), g: T::one(), units: UnitSystem::Dimensionless }
    }

    pub fn si() -> Self {
        Self { hbar: T::lit(HBAR_SI), g: T::lit(G_SI), units: UnitSystem::Si }
    }

    pub fn cgs() -> Self {
        Self { hbar: T::lit(HBAR_CGS), g: T::lit(G_CGS), units: UnitSystem::Cgs }
    }

    /// Default constants of a unit system.
    pub fn for_units(units: UnitSystem) -> Self {
        match units {
            UnitSystem::Si => Self::si(),
            UnitSystem::Cgs => Self::cgs(),
            UnitSystem::Dimensionless => Self::dimensionless(),
        }
    }

    #[inline]
    pub fn hbar(&self) -> T {
        self.hbar
    }

    #[inline]
    pub fn g(&self) -> T {
        self.g
    }

    #[inline]
    pub fn units(&self) -> UnitSystem {
        self.units
    }

    /// The length scale `hbar^2 / (G m^3)` that every critical width is built from.
    #[inline]
    pub fn gravitational_length(&self, mass: T) -> T {
        self.hbar * self.hbar / (self.g * mass.powi(3))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BodyKind<T = f64> {
    PointParticle,
    HomogeneousSphere { radius: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Body<T = f64> {
    mass: T,
    kind: BodyKind<T>,
}

impl<T: Real> Body<T> {
    pub fn point(mass: T) -> Result<Self> {
        check_positive("mass", mass)?;
        Ok(Self { mass, kind: BodyKind::PointParticle })
    }

    pub fn sphere(mass: T, radius: T) -> Result<Self> {
        check_positive("mass", mass)?;
        check_positive("radius", radius)?;
        Ok(Self { mass, kind: BodyKind::HomogeneousSphere { radius } })
    }

    #[inline]
    pub fn mass(&self) -> T {
        self.mass
    }

    #[inline]
    pub fn kind(&self) -> BodyKind<T> {
        self.kind
    }

    pub fn radius(&self) -> Option<T> {
        match self.kind {
            BodyKind::PointParticle => None,
            BodyKind::HomogeneousSphere { radius } => Some(radius),
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self.kind, BodyKind::PointParticle)
    }

    pub(crate) fn require_point(&self) -> Result<()> {
        if self.is_point() {
            Ok(())
        } else {
            Err(Error::Kind { expected: "point-particle" })
        }
    }

    pub(crate) fn require_sphere(&self) -> Result<T> {
        self.radius().ok_or(Error::Kind { expected: "homogeneous-sphere" })
    }

    /// Same body with a different mass.
    pub fn with_mass(&self, mass: T) -> Result<Self> {
        check_positive("mass", mass)?;
        Ok(Self { mass, kind: self.kind })
    }
}

/// Spherically symmetric Gaussian packet centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WavePacket<T = f64> {
    sigma0: T,
}

impl<T: Real> WavePacket<T> {
    pub fn new(sigma0: T) -> Result<Self> {
        check_positive("sigma0", sigma0)?;
        Ok(Self { sigma0 })
    }

    #[inline]
    pub fn sigma0(&self) -> T {
        self.sigma0
    }

    /// Unchecked radial density; callers have validated `r`.
    #[inline]
    pub(crate) fn density_unchecked(&self, r: T) -> T {
        let s2 = self.sigma0 * self.sigma0;
        let norm = (T::lit(2.0) * T::PI() * s2).powf(T::lit(-1.5));
        norm * (-(r * r) / (T::lit(2.0) * s2)).exp()
    }

    /// Density times the spherical shell factor `4 pi r^2`.
    #[inline]
    pub(crate) fn shell_weight(&self, r: T) -> T {
        T::lit(4.0) * T::PI() * r * r * self.density_unchecked(r)
    }
}

pub(crate) fn check_positive<T: Real>(name: &str, value: T) -> Result<()> {
    if value > T::zero() && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {value}")))
    }
}

pub(crate) fn check_radius<T: Real>(r: T) -> Result<()> {
    if r >= T::zero() && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("radius must be non-negative, got {r}")))
    }
}

/// Probability density `(2 pi sigma0^2)^(-3/2) exp(-r^2 / 2 sigma0^2)`.
pub fn density<T: Real>(r: T, packet: &WavePacket<T>) -> Result<T> {
    check_radius(r)?;
    Ok(packet.density_unchecked(r))
}

/// Free-spreading width `sigma0 sqrt(1 + hbar^2 t^2 / (4 m^2 sigma0^4))`.
///
/// Diagnostic only: the dynamics keep the width frozen at `sigma0`.
pub fn width_at<T: Real>(
    t: T,
    packet: &WavePacket<T>,
    body: &Body<T>,
    ctx: &PhysicalContext<T>,
) -> Result<T> {
    if !(t >= T::zero() && t.is_finite()) {
        return Err(Error::Domain(format!("time must be non-negative, got {t}")));
    }
    let s0 = packet.sigma0;
    let spread = ctx.hbar * t / (T::lit(2.0) * body.mass * s0 * s0);
    Ok(s0 * (T::one() + spread * spread).sqrt())
}
