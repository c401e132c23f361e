//! The five subcommands.

use std::path::{Path, PathBuf};

use gravred::criticality::{
    classify_regime, critical_width_energy_min, critical_width_point, energy_min_width_analytic, karolyhazy_object_width,
    karolyhazy_time, transition_width_object, ObjectRegime, Regime, RegimeReport, TransitionWidth,
};
use gravred::dynamics::{
    all_tau_estimates, detect_period, integrate, ForceLaw, LawKind, LawParams, MixedVariant, TauMethod, Tolerances,
    Trajectory, TrajectoryEvent, UncertaintyCoefficients,
};
use gravred::verification::run_verification;
use gravred::{Body, PhysicalContext, UnitSystem, WavePacket};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{self, csv, emit, json, num, opt_num, UnitsEcho};
use crate::{BodyArgs, CliError, Cli, Command, Format, Kind, Law, Units, EXIT_OK, EXIT_VERIFY};

pub fn context(cli: &Cli) -> Result<PhysicalContext, CliError> {
    let units = if cli.dimensionless {
        UnitSystem::Dimensionless
    } else {
        match cli.units {
            Units::Si => UnitSystem::Si,
            Units::Cgs => UnitSystem::Cgs,
            Units::Dimensionless => UnitSystem::Dimensionless,
        }
    };
    let base = PhysicalContext::for_units(units);
    Ok(PhysicalContext::new(cli.hbar.unwrap_or(base.hbar()), cli.g.unwrap_or(base.g()), units)?)
}

fn body(kind: Kind, mass: f64, radius: Option<f64>) -> Result<Body, CliError> {
    match (kind, radius) {
        (Kind::Point, None) => Ok(Body::point(mass)?),
        (Kind::Point, Some(_)) => Err(CliError::Config("--radius requires --kind sphere".into())),
        (Kind::Sphere, Some(r)) => Ok(Body::sphere(mass, r)?),
        (Kind::Sphere, None) => Err(CliError::Config("--kind sphere requires --radius".into())),
    }
}

pub fn execute(cli: &Cli) -> Result<i32, CliError> {
    let ctx = context(cli)?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Critical { body: b, bracket_lo, bracket_hi } => {
            critical(&ctx, b, (*bracket_lo, *bracket_hi), cli.format.unwrap_or(Format::Json), out)
        }
        Command::Simulate {
            law,
            mass,
            sigma0,
            radius,
            r0,
            v0,
            t_end,
            rtol,
            atol,
            initial_step,
            printed_mixed,
            gnuplot_script,
        } => {
            let kind = match law {
                Law::GravityPoint => LawKind::GravityDominantPoint,
                Law::MixedPoint => LawKind::MixedPoint,
                Law::GravityObject => LawKind::GravityDominantObject,
            };
            let params = LawParams { mass: *mass, sigma0: *sigma0, radius: *radius, hbar: ctx.hbar(), g: ctx.g() };
            let variant = if *printed_mixed { MixedVariant::Printed } else { MixedVariant::Corrected };
            let law = ForceLaw::new(kind, params)?.with_variant(variant);
            let tol = Tolerances { rtol: *rtol, atol: *atol, initial_step: *initial_step };
            simulate(&ctx, &law, (*r0, *v0, *t_end), &tol, cli.format.unwrap_or(Format::Csv), out, gnuplot_script.as_deref())
        }
        Command::Tau { body: b, numeric } => tau(&ctx, b, *numeric, cli.format.unwrap_or(Format::Json), out),
        Command::Sweep { grids, mass, sigma0, kind, radius } => {
            let grids = grids.iter().map(|g| parse_grid(g)).collect::<Result<Vec<_>, _>>()?;
            let base = SweepBase { mass: *mass, sigma0: *sigma0, radius: *radius, kind: *kind };
            let text = sweep(&ctx, &base, &grids, cli.format.unwrap_or(Format::Csv))?;
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Verify { perturb } => verify(*perturb, cli.format.unwrap_or(Format::Json), out),
    }
}

#[derive(Debug, Serialize)]
struct CriticalWidths {
    force_balance: Option<f64>,
    energy_minimization: f64,
    energy_minimization_analytic: f64,
}

#[derive(Debug, Serialize)]
struct ObjectWidths {
    macro_regime: TransitionWidth<f64>,
    micro_regime: TransitionWidth<f64>,
    intermediate_regime: TransitionWidth<f64>,
}

#[derive(Debug, Serialize)]
struct CriticalOutput {
    units: UnitsEcho,
    body: Body,
    sigma0: f64,
    critical_mass: f64,
    critical_width: CriticalWidths,
    force_ratio: f64,
    regime: Regime,
    method: gravred::criticality::CriticalMethod,
    reference_values: gravred::criticality::ReferenceValues<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transition_widths: Option<ObjectWidths>,
}

fn critical(ctx: &PhysicalContext, args: &BodyArgs, bracket: (f64, f64), format: Format, out: Option<&Path>) -> Result<i32, CliError> {
    let b = body(args.kind, args.mass, args.radius)?;
    let packet = WavePacket::new(args.sigma0)?;
    let report: RegimeReport<f64> = classify_regime(&packet, &b, ctx)?;
    let analytic = energy_min_width_analytic(&b, ctx);
    let numeric = critical_width_energy_min(&b, ctx, (bracket.0 * analytic, bracket.1 * analytic))?;
    let force_balance = critical_width_point(&b, ctx).ok();
    let transition_widths = if b.is_point() {
        None
    } else {
        Some(ObjectWidths {
            macro_regime: transition_width_object(&b, ctx, ObjectRegime::Macro)?,
            micro_regime: transition_width_object(&b, ctx, ObjectRegime::Micro)?,
            intermediate_regime: transition_width_object(&b, ctx, ObjectRegime::Intermediate)?,
        })
    };
    let text = match format {
        Format::Json => json(&CriticalOutput {
            units: ctx.into(),
            body: b,
            sigma0: args.sigma0,
            critical_mass: report.critical_mass,
            critical_width: CriticalWidths {
                force_balance,
                energy_minimization: numeric,
                energy_minimization_analytic: analytic,
            },
            force_ratio: report.force_ratio,
            regime: report.regime,
            method: report.method,
            reference_values: report.reference_values,
            transition_widths,
        })?,
        Format::Csv => csv(
            ctx,
            &["critical_mass", "critical_width_force_balance", "critical_width_energy_min", "force_ratio", "regime"],
            [vec![
                num(report.critical_mass),
                opt_num(force_balance),
                num(numeric),
                num(report.force_ratio),
                report.regime.label().to_string(),
            ]],
        ),
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct SimulationSummary<'a> {
    units: UnitsEcho,
    law: LawKind,
    variant: MixedVariant,
    params: LawParams<f64>,
    r0: f64,
    v0: f64,
    t_end: f64,
    events: &'a [TrajectoryEvent<f64>],
    detected_period: Option<f64>,
    energy_drift: f64,
    escaped: bool,
}

#[derive(Debug, Serialize)]
struct SimulationOutput<'a> {
    #[serde(flatten)]
    summary: SimulationSummary<'a>,
    samples: &'a [gravred::dynamics::Sample<f64>],
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".events.json");
    PathBuf::from(s)
}

fn simulate(
    ctx: &PhysicalContext,
    law: &ForceLaw<f64>,
    (r0, v0, t_end): (f64, f64, f64),
    tol: &Tolerances<f64>,
    format: Format,
    out: Option<&Path>,
    gnuplot: Option<&Path>,
) -> Result<i32, CliError> {
    let traj: Trajectory<f64> = integrate(law, r0, v0, t_end, tol)?;
    let summary = SimulationSummary {
        units: ctx.into(),
        law: law.kind(),
        variant: law.variant(),
        params: *law.params(),
        r0,
        v0,
        t_end,
        events: &traj.events,
        detected_period: detect_period(&traj).ok(),
        energy_drift: traj.energy_drift,
        escaped: traj.escaped(),
    };
    match format {
        Format::Csv => {
            let rows = traj.samples.iter().map(|s| vec![num(s.t), num(s.r), num(s.v), num(s.energy)]);
            emit(out, &csv(ctx, &["t", "r", "v", "energy"], rows))?;
            if let Some(path) = out {
                emit(Some(&sidecar_path(path)), &json(&summary)?)?;
            }
        }
        Format::Json => emit(out, &json(&SimulationOutput { summary, samples: &traj.samples })?)?,
    }
    if let Some(script) = gnuplot {
        let title = format!("{:?} m = {} sigma0 = {}", law.kind(), num(law.params().mass), num(law.params().sigma0));
        emit(Some(script), &output::gnuplot_script(out, &title))?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct TauRecord {
    method: &'static str,
    tau: f64,
    assumptions: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficients: Option<UncertaintyCoefficients<f64>>,
}

#[derive(Debug, Serialize)]
struct TauOutput {
    units: UnitsEcho,
    estimates: Vec<TauRecord>,
}

fn tau_records(ctx: &PhysicalContext, b: &Body, packet: &WavePacket, numeric: bool) -> Result<Vec<TauRecord>, CliError> {
    let mut records: Vec<TauRecord> = all_tau_estimates(packet, b, ctx, numeric && b.is_point())?
        .into_iter()
        .map(|e| TauRecord { method: e.method.label(), tau: e.tau, assumptions: e.assumptions, coefficients: e.coefficients })
        .collect();
    let karolyhazy = match karolyhazy_object_width(b, ctx) {
        Ok(w) => TauRecord {
            method: "karolyhazy_reference",
            tau: b.mass() * w * w / ctx.hbar(),
            assumptions: "m sigma_c^2 / hbar with the sphere width (hbar^2/G m^3)^(1/3) R^(2/3)",
            coefficients: None,
        },
        Err(_) => TauRecord {
            method: "karolyhazy_reference",
            tau: karolyhazy_time(b, ctx),
            assumptions: "m sigma_c^2 / hbar with sigma_c = hbar^2 / (G m^3)",
            coefficients: None,
        },
    };
    records.push(karolyhazy);
    Ok(records)
}

fn tau(ctx: &PhysicalContext, args: &BodyArgs, numeric: bool, format: Format, out: Option<&Path>) -> Result<i32, CliError> {
    let b = body(args.kind, args.mass, args.radius)?;
    let packet = WavePacket::new(args.sigma0)?;
    let estimates = tau_records(ctx, &b, &packet, numeric)?;
    let text = match format {
        Format::Json => json(&TauOutput { units: ctx.into(), estimates })?,
        Format::Csv => csv(
            ctx,
            &["method", "tau"],
            estimates.iter().map(|e| vec![e.method.to_string(), num(e.tau)]),
        ),
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridParam {
    Mass,
    Sigma0,
    Radius,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub param: GridParam,
    pub values: Vec<f64>,
}

/// Parses `param:min:max:points[:log|linear]`; spacing defaults to log.
pub fn parse_grid(spec: &str) -> Result<Grid, CliError> {
    let bad = |m: &str| CliError::Config(format!("grid `{spec}`: {m}"));
    let parts: Vec<&str> = spec.split(':').collect();
    if !(4..=5).contains(&parts.len()) {
        return Err(bad("expected param:min:max:points[:log|linear]"));
    }
    let param = match parts[0] {
        "mass" => GridParam::Mass,
        "sigma0" => GridParam::Sigma0,
        "radius" => GridParam::Radius,
        p => return Err(bad(&format!("unknown parameter `{p}`"))),
    };
    let min: f64 = parts[1].parse().map_err(|_| bad("min is not a number"))?;
    let max: f64 = parts[2].parse().map_err(|_| bad("max is not a number"))?;
    let points: usize = parts[3].parse().map_err(|_| bad("points is not a count"))?;
    let log = match parts.get(4).copied().unwrap_or("log") {
        "log" => true,
        "linear" | "lin" => false,
        s => return Err(bad(&format!("unknown spacing `{s}`"))),
    };
    if points == 0 {
        return Err(bad("grid is empty"));
    }
    if !(min > 0.0 && min.is_finite() && max.is_finite()) {
        return Err(bad("bounds must be positive and finite"));
    }
    if points > 1 && !(min < max) {
        return Err(bad("min must be below max"));
    }
    let values = if points == 1 {
        vec![min]
    } else {
        let n = (points - 1) as f64;
        (0..points)
            .map(|i| {
                let f = i as f64 / n;
                if i == 0 {
                    min
                } else if i == points - 1 {
                    max
                } else if log {
                    (min.ln() + f * (max.ln() - min.ln())).exp()
                } else {
                    min + f * (max - min)
                }
            })
            .collect()
    };
    Ok(Grid { param, values })
}

#[derive(Debug, Clone, Copy)]
pub struct SweepBase {
    pub mass: Option<f64>,
    pub sigma0: Option<f64>,
    pub radius: Option<f64>,
    pub kind: Kind,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub mass: f64,
    pub sigma0: f64,
    pub radius: Option<f64>,
    pub critical_mass: f64,
    pub critical_width: f64,
    pub force_ratio: f64,
    pub regime: Regime,
    pub tau_period_formula: Option<f64>,
    pub tau_short_time: Option<f64>,
    pub tau_uncertainty: Option<f64>,
    pub tau_object_uncertainty: Option<f64>,
    pub tau_object_micro: Option<f64>,
}

const SWEEP_COLUMNS: [&str; 13] = [
    "index",
    "mass",
    "sigma0",
    "radius",
    "critical_mass",
    "critical_width",
    "force_ratio",
    "regime",
    "tau_period_formula",
    "tau_short_time",
    "tau_uncertainty",
    "tau_object_uncertainty",
    "tau_object_micro",
];

fn sweep_point(ctx: &PhysicalContext, index: usize, base: &SweepBase, grids: &[Grid], combo: &[usize]) -> Result<SweepRow, CliError> {
    let (mut mass, mut sigma0, mut radius) = (base.mass, base.sigma0, base.radius);
    for (g, &i) in grids.iter().zip(combo) {
        let v = Some(g.values[i]);
        match g.param {
            GridParam::Mass => mass = v,
            GridParam::Sigma0 => sigma0 = v,
            GridParam::Radius => radius = v,
        }
    }
    let mass = mass.ok_or_else(|| CliError::Config("sweep needs --mass or a mass grid".into()))?;
    let sigma0 = sigma0.ok_or_else(|| CliError::Config("sweep needs --sigma0 or a sigma0 grid".into()))?;
    let radius = if base.kind == Kind::Point { None } else { radius };
    let b = body(base.kind, mass, radius)?;
    let packet = WavePacket::new(sigma0)?;
    let rep = classify_regime(&packet, &b, ctx)?;
    let mut row = SweepRow {
        index,
        mass,
        sigma0,
        radius,
        critical_mass: rep.critical_mass,
        critical_width: rep.critical_width,
        force_ratio: rep.force_ratio,
        regime: rep.regime,
        tau_period_formula: None,
        tau_short_time: None,
        tau_uncertainty: None,
        tau_object_uncertainty: None,
        tau_object_micro: None,
    };
    for e in all_tau_estimates(&packet, &b, ctx, false)? {
        let slot = match e.method {
            TauMethod::PeriodFormula => &mut row.tau_period_formula,
            TauMethod::ShortTime => &mut row.tau_short_time,
            TauMethod::Uncertainty => &mut row.tau_uncertainty,
            TauMethod::ObjectUncertainty => &mut row.tau_object_uncertainty,
            TauMethod::ObjectMicro => &mut row.tau_object_micro,
            TauMethod::QuarterPeriodNumeric => continue,
        };
        *slot = Some(e.tau);
    }
    Ok(row)
}

/// Evaluates the cartesian product of `grids` (first grid outermost) in
/// parallel and renders rows in grid order.
pub fn sweep(ctx: &PhysicalContext, base: &SweepBase, grids: &[Grid], format: Format) -> Result<String, CliError> {
    if grids.is_empty() || grids.iter().any(|g| g.values.is_empty()) {
        return Err(CliError::Config("empty grid".into()));
    }
    let total: usize = grids.iter().map(|g| g.values.len()).product();
    let rows: Vec<SweepRow> = (0..total)
        .into_par_iter()
        .map(|index| {
            let mut rem = index;
            let mut combo = vec![0; grids.len()];
            for (k, g) in grids.iter().enumerate().rev() {
                combo[k] = rem % g.values.len();
                rem /= g.values.len();
            }
            sweep_point(ctx, index, base, grids, &combo)
        })
        .collect::<Result<_, _>>()?;
    Ok(match format {
        Format::Json => json(&serde_json::json!({ "units": UnitsEcho::from(ctx), "rows": rows }))?,
        Format::Csv => csv(
            ctx,
            &SWEEP_COLUMNS,
            rows.iter().map(|r| {
                vec![
                    r.index.to_string(),
                    num(r.mass),
                    num(r.sigma0),
                    opt_num(r.radius),
                    num(r.critical_mass),
                    num(r.critical_width),
                    num(r.force_ratio),
                    r.regime.label().to_string(),
                    opt_num(r.tau_period_formula),
                    opt_num(r.tau_short_time),
                    opt_num(r.tau_uncertainty),
                    opt_num(r.tau_object_uncertainty),
                    opt_num(r.tau_object_micro),
                ]
            }),
        ),
    })
}

fn verify(perturb: f64, format: Format, out: Option<&Path>) -> Result<i32, CliError> {
    if !perturb.is_finite() {
        return Err(CliError::Config("--perturb must be finite".into()));
    }
    let report = run_verification(perturb)?;
    let text = match format {
        Format::Json => json(&serde_json::json!({ "passed": report.passed(), "report": report }))?,
        Format::Csv => {
            let ctx = PhysicalContext::dimensionless();
            let mut s = csv(
                &ctx,
                &["section", "name", "passed", "measured", "tolerance"],
                report.checks.iter().map(|c| {
                    vec![
                        format!("{:?}", c.section).to_lowercase(),
                        c.name.clone(),
                        c.passed.to_string(),
                        num(c.measured),
                        num(c.tolerance),
                    ]
                }),
            );
            s = s.replacen("# units: dimensionless", "# units: mixed (checks run in dimensionless, si and cgs)", 1);
            s
        }
    };
    emit(out, &text)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY })
}
