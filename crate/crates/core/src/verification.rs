//! Self-checks: closed forms against quadrature, forces against finite
//! differences, energy conservation and the order of magnitude of the
//! physical numbers quoted for protons, balls and flea eggs.

use serde::Serialize;

use crate::averages::{
    avg_qg_force_object, avg_qg_force_point, avg_qg_potential_object, avg_qg_potential_point, avg_quantum_force,
    avg_quantum_potential, expect,
};
use crate::criticality::{critical_mass, critical_width_point, karolyhazy_object_width, karolyhazy_time, karolyhazy_width, transition_width_object, ObjectRegime};
use crate::dynamics::{
    detect_period, integrate, linearized_period, period_formula, tau_object, tau_point, ForceLaw, LawKind, LawParams,
    TauMethod, Tolerances,
};
use crate::error::Result;
use crate::model::{Body, PhysicalContext, WavePacket};
use crate::potentials::{
    qg_force_object, qg_force_point, qg_potential_numeric, qg_potential_object, qg_potential_point, quantum_force,
    quantum_potential, RadialField,
};
use crate::quadrature::QuadratureOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Section {
    Quadrature,
    Gradient,
    Energy,
    OrderOfMagnitude,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub section: Section,
    pub name: String,
    pub passed: bool,
    /// Relative error, drift, or decade offset, depending on the section.
    pub measured: f64,
    pub tolerance: f64,
}

/// Numeric-versus-analytic figures reported without a pass/fail verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub name: String,
    pub numeric: f64,
    pub analytic: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub perturb: f64,
    pub checks: Vec<Check>,
    pub comparisons: Vec<Comparison>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn check(out: &mut Vec<Check>, section: Section, name: String, measured: f64, tolerance: f64) {
    out.push(Check { section, name, passed: measured.is_finite() && measured <= tolerance, measured, tolerance });
}

/// `|log10(value) - exponent|`.
fn decades(value: f64, exponent: f64) -> f64 {
    (value.abs().log10() - exponent).abs()
}

fn central(f: impl Fn(f64) -> f64, r: f64, h: f64) -> f64 {
    (f(r + h) - f(r - h)) / (2.0 * h)
}

const CASES: [(f64, f64, f64); 4] = [(1.0, 1.0, 1.0), (0.37, 2.5, 0.8), (4.2, 0.05, 3.0), (1e-3, 40.0, 0.2)];

fn quadrature_checks(perturb: f64, out: &mut Vec<Check>) -> Result<()> {
    let ctx = PhysicalContext::dimensionless();
    let opts = QuadratureOptions::default();
    let tol = 1e-8;
    let k = 1.0 + perturb;
    for (i, &(m, s, radius)) in CASES.iter().enumerate() {
        let p = WavePacket::new(s)?;
        let b = Body::point(m)?;
        let o = Body::sphere(m, radius)?;
        let pairs: [(&str, f64, RadialField<'_, f64>); 6] = [
            ("avg_quantum_force", avg_quantum_force(&p, &b, &ctx), RadialField::quantum_force(&p, &b, &ctx)),
            ("avg_quantum_potential", avg_quantum_potential(&p, &b, &ctx), RadialField::quantum_potential(&p, &b, &ctx)),
            ("avg_qg_force_point", avg_qg_force_point(&p, &b, &ctx)?, RadialField::qg_force(&p, &b, &ctx)),
            ("avg_qg_potential_point", avg_qg_potential_point(&p, &b, &ctx)?, RadialField::qg_potential(&p, &b, &ctx)),
            ("avg_qg_potential_object", avg_qg_potential_object(&p, &o, &ctx)?, RadialField::qg_potential(&p, &o, &ctx)),
            ("avg_qg_force_object", avg_qg_force_object(&p, &o, &ctx)?, RadialField::qg_force(&p, &o, &ctx)),
        ];
        for (name, closed, field) in pairs {
            let numeric = expect(&field, &p)?.value;
            check(out, Section::Quadrature, format!("{name}[{i}]"), rel(k * closed, numeric), tol);
        }
        for &x in &[0.3, 1.0, 2.7] {
            let r = x * s;
            let kp = RadialField::classical_kernel(&b, &ctx);
            let num = qg_potential_numeric(r, &kp, &p, &opts)?.value;
            let closed = qg_potential_point(r, &p, &b, &ctx)?;
            check(out, Section::Quadrature, format!("qg_potential_point[{i}](r={x}s)"), rel(k * closed, num), tol);
            let ko = RadialField::classical_kernel(&o, &ctx);
            let num = qg_potential_numeric(r, &ko, &p, &opts)?.value;
            let closed = qg_potential_object(r, &p, &o, &ctx)?;
            check(out, Section::Quadrature, format!("qg_potential_object[{i}](r={x}s)"), rel(k * closed, num), tol);
        }
    }
    Ok(())
}

fn gradient_checks(out: &mut Vec<Check>) -> Result<()> {
    let ctx = PhysicalContext::dimensionless();
    let tol = 1e-6;
    for (i, &(m, s, radius)) in CASES.iter().enumerate() {
        let p = WavePacket::new(s)?;
        let b = Body::point(m)?;
        let o = Body::sphere(m, radius)?;
        let h = 1e-6 * s;
        for &x in &[0.2, 0.9, 1.6, 3.1] {
            let r = x * s;
            let fd = -central(|r| quantum_potential(r, &p, &b, &ctx).unwrap(), r, h);
            check(out, Section::Gradient, format!("quantum[{i}](r={x}s)"), rel(quantum_force(r, &p, &b, &ctx)?, fd), tol);
            // the attractive point force is +dU/dr of the negative self-energy
            let fd = central(|r| qg_potential_point(r, &p, &b, &ctx).unwrap(), r, h);
            check(out, Section::Gradient, format!("qg_point[{i}](r={x}s)"), rel(qg_force_point(r, &p, &b, &ctx)?, fd), tol);
            let fd = -central(|r| qg_potential_object(r, &p, &o, &ctx).unwrap(), r, h);
            check(out, Section::Gradient, format!("qg_object[{i}](r={x}s)"), rel(qg_force_object(r, &p, &o, &ctx)?, fd), tol);
            for (kind, body) in [(LawKind::GravityDominantPoint, &b), (LawKind::MixedPoint, &b), (LawKind::GravityDominantObject, &o)] {
                let law = ForceLaw::new(kind, LawParams::new(&p, body, &ctx))?;
                let fd = -central(|r| law.potential(r), r, h);
                check(out, Section::Gradient, format!("law_{kind:?}[{i}](r={x}s)"), rel(law.force(r), fd), tol);
            }
        }
    }
    Ok(())
}

fn energy_checks(out: &mut Vec<Check>, comparisons: &mut Vec<Comparison>) -> Result<()> {
    let ctx = PhysicalContext::dimensionless();
    let tol = Tolerances::default();
    let runs: [(&str, LawKind, f64, Option<f64>, f64, f64); 5] = [
        ("gravity_point_m1", LawKind::GravityDominantPoint, 1.0, None, 1.0, 0.0),
        ("gravity_point_m30", LawKind::GravityDominantPoint, 30.0, None, 1.0, 0.0),
        ("mixed_m5", LawKind::MixedPoint, 5.0, None, 1.0, 0.0),
        ("object_r1.5", LawKind::GravityDominantObject, 1.0, Some(1.0), 1.5, 0.0),
        ("object_r0.8_inward", LawKind::GravityDominantObject, 3.0, Some(1.0), 0.8, -0.1),
    ];
    for (name, kind, m, radius, r0, v0) in runs {
        let params = LawParams { mass: m, sigma0: 1.0, radius, hbar: ctx.hbar(), g: ctx.g() };
        let law = ForceLaw::new(kind, params)?;
        let traj = integrate(&law, r0, v0, 30.0, &tol)?;
        check(out, Section::Energy, format!("drift_{name}"), traj.energy_drift, 1e-7);
    }

    let params = LawParams { mass: 1.0, sigma0: 1.0, radius: None, hbar: 1.0, g: 1.0 };
    let law = ForceLaw::new(LawKind::GravityDominantPoint, params)?;
    let traj = integrate(&law, 1.0, 0.0, 30.0, &tol)?;
    let numeric = detect_period(&traj)?;
    let formula = period_formula(&params)?;
    comparisons.push(Comparison { name: "period_r0_sigma0_vs_cosine_formula".into(), numeric, analytic: formula, ratio: formula / numeric });
    let lin = linearized_period(&params)?;
    comparisons.push(Comparison { name: "period_r0_sigma0_vs_linearized".into(), numeric, analytic: lin, ratio: lin / numeric });
    let small = detect_period(&integrate(&law, 0.01, 0.0, 30.0, &tol)?)?;
    comparisons.push(Comparison { name: "period_r0_0.01sigma0_vs_linearized".into(), numeric: small, analytic: lin, ratio: lin / small });
    Ok(())
}

fn magnitude_checks(out: &mut Vec<Check>) -> Result<()> {
    let si = PhysicalContext::si();
    let cgs = PhysicalContext::cgs();
    let mut add = |name: &str, value: f64, exponent: f64| {
        check(out, Section::OrderOfMagnitude, name.to_string(), decades(value, exponent), 1.0);
    };
    let proton_mass = 1.672_621_923_69e-27;
    let proton = Body::point(proton_mass)?;
    add("proton_critical_width_m", critical_width_point(&proton, &si)?, 22.0);
    add("proton_karolyhazy_width_m", karolyhazy_width(&proton, &si), 22.0);
    add("proton_karolyhazy_time_s", karolyhazy_time(&proton, &si), 53.0);

    let tennis = Body::sphere(57.0, 4.0)?;
    let w = karolyhazy_object_width(&tennis, &cgs)?;
    add("tennis_ball_karolyhazy_width_cm", w, -17.0);
    add("tennis_ball_karolyhazy_time_s", tennis.mass() * w * w / cgs.hbar(), -6.0);

    add("critical_mass_at_1e-2_cm_g", critical_mass(&WavePacket::new(1e-2)?, &cgs), -15.0);

    let proton_sphere = Body::sphere(proton_mass, 1e-15)?;
    let micro = transition_width_object(&proton_sphere, &si, ObjectRegime::Micro)?;
    add("proton_micro_width_cm", micro.unit_constant_form * 100.0, 6.0);
    let pk = WavePacket::new(micro.exact)?;
    add("proton_micro_tau_s", tau_object(TauMethod::ObjectMicro, &pk, &proton_sphere, &si)?.tau, 15.0);

    for (name, mass, radius, exponent) in [("ball", 0.1, 0.05, -23.0), ("flea_egg", 1e-8, 5e-4, -11.0)] {
        let body = Body::sphere(mass, radius)?;
        let w = transition_width_object(&body, &si, ObjectRegime::Macro)?;
        let tau = tau_object(TauMethod::ObjectUncertainty, &WavePacket::new(w.exact)?, &body, &si)?.tau;
        add(&format!("{name}_tau_s"), tau, exponent);
    }
    let ball = Body::sphere(0.1, 0.05)?;
    add("ball_macro_width_cm", transition_width_object(&ball, &si, ObjectRegime::Macro)?.exact * 100.0, -12.0);

    let pk = WavePacket::new(critical_width_point(&proton, &si)?)?;
    add("proton_short_time_vs_karolyhazy", tau_point(TauMethod::ShortTime, &pk, &proton, &si)?.tau, 53.0);
    Ok(())
}

/// Runs every check. `perturb` scales the closed-form side of the
/// quadrature comparisons by `1 + perturb` as a negative control.
pub fn run_verification(perturb: f64) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    let mut comparisons = Vec::new();
    quadrature_checks(perturb, &mut checks)?;
    gradient_checks(&mut checks)?;
    energy_checks(&mut checks, &mut comparisons)?;
    magnitude_checks(&mut checks)?;
    Ok(VerificationReport { perturb, checks, comparisons })
}
