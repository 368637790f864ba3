use std::fmt;

use num_complex::Complex;
use phasematch::matching::{classify_special_case, matching_sides};
use phasematch::oracle::{
    apply_iteration, build_unitary, column_reflector, marked_probability, project_to_2d,
    uniform_reflector, IterationPath, MarkedSet, Unitary, UnitarySpec,
};
use phasematch::planner::certainty_search_near;
use phasematch::{
    build_search_operator, canonical_angle, hoyer_preparation, log_log_slope, matching_residual,
    mismatch_tolerance, optimal_iterations, probability_trajectory, solve_phi, EngineConfig, Error,
    InitialState2D, PhasePair, Rounding, SearchGeometry,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{Cli, Command, GeometryArgs, InitArgs, PathChoice, RoundingChoice, UnitaryChoice};
use crate::report::{complex, Report};

const SOLVE_TOL: f64 = 1e-12;
const ORACLE_TOL: f64 = 1e-10;
const APPENDIX_TOL: f64 = 1e-12;
const APPENDIX_WEIGHT: f64 = 2.0 / 400.0;
const APPENDIX_M: u64 = 16;
const GOLDEN_LHS: f64 = 0.987_234_528_786_745;
/// Relative agreement for 12 significant digits.
const GOLDEN_REL: f64 = 5e-13;

#[derive(Debug)]
pub enum Failure {
    BadInput(String),
    Infeasible(String),
    Verification(Box<Report>, String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::BadInput(_) => 1,
            Failure::Infeasible(_) => 2,
            Failure::Verification(..) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::BadInput(m) | Failure::Infeasible(m) => f.write_str(m),
            Failure::Verification(_, m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoSolution
            | Error::NoCertaintyStep { .. }
            | Error::NoProgress
            | Error::AxisParallel(_)
            | Error::InfeasibleIterations { .. } => Failure::Infeasible(e.to_string()),
            _ => Failure::BadInput(e.to_string()),
        }
    }
}

type Outcome = Result<Report, Failure>;

/// Angle conversion at the command-line boundary.
#[derive(Debug, Clone, Copy)]
struct Units {
    degrees: bool,
}

impl Units {
    fn read(self, x: f64) -> f64 {
        if self.degrees {
            x.to_radians()
        } else {
            x
        }
    }

    fn show(self, x: f64) -> f64 {
        if self.degrees {
            x.to_degrees()
        } else {
            x
        }
    }
}

struct Ctx {
    units: Units,
    tol: Option<f64>,
}

impl Ctx {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

pub fn run(cli: &Cli) -> Outcome {
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(Failure::BadInput(format!("tolerance must be positive and finite, got {t}")));
        }
    }
    let ctx = Ctx {
        units: Units { degrees: cli.degrees },
        tol: cli.tol,
    };
    let result = match &cli.command {
        Command::Solve { geometry, init, theta } => solve(&ctx, geometry, init, *theta),
        Command::Plan {
            geometry,
            init,
            theta,
            phi,
            trajectory,
        } => plan(&ctx, geometry, init, *theta, *phi, *trajectory),
        Command::Certain {
            geometry,
            init,
            iterations,
            verify,
            near,
        } => certain(&ctx, geometry, init, *iterations, *verify, *near),
        Command::Simulate {
            n,
            marked,
            theta,
            phi,
            iterations,
            unitary,
            seed,
            theta0,
            delta,
            gamma,
            path,
        } => simulate(
            &ctx,
            SimulateArgs {
                n: *n,
                marked,
                theta: *theta,
                phi: *phi,
                iterations: *iterations,
                unitary: *unitary,
                seed: *seed,
                theta0: *theta0,
                delta: *delta,
                gamma: *gamma,
                path: *path,
            },
        ),
        Command::ScanTolerance { n_list, theta } => scan_tolerance(&ctx, n_list, *theta),
        Command::VerifyAppendix { rounding } => verify_appendix(&ctx, *rounding),
    };
    let annotate = |r: &mut Report| {
        if cli.degrees {
            r.input("units", "degrees");
        }
        if let Some(t) = cli.tol {
            r.input("tol", t);
        }
    };
    match result {
        Ok(mut r) => {
            annotate(&mut r);
            Ok(r)
        }
        Err(Failure::Verification(mut r, msg)) => {
            annotate(&mut r);
            Err(Failure::Verification(r, msg))
        }
        Err(e) => Err(e),
    }
}

fn geometry(ctx: &Ctx, args: &GeometryArgs, report: &mut Report) -> Result<SearchGeometry<f64>, Failure> {
    let g = match (args.beta, args.weight) {
        (Some(b), _) => {
            report.input("beta", b);
            SearchGeometry::new(ctx.units.read(b))?
        }
        (None, Some(a)) => {
            report.input("weight", a);
            SearchGeometry::from_weight(a)?
        }
        (None, None) => return Err(Failure::BadInput("one of --beta or --weight is required".into())),
    };
    report.output("beta", ctx.units.show(g.beta));
    Ok(g)
}

/// Reads `(θ₀, δ)` (θ₀ defaults to β) and folds it to the canonical range.
fn initial(ctx: &Ctx, g: &SearchGeometry<f64>, args: &InitArgs, report: &mut Report) -> Result<InitialState2D<f64>, Failure> {
    if let Some(t) = args.theta0 {
        report.input("theta0", t);
    }
    report.input("delta", args.delta);
    let theta0 = args.theta0.map_or(g.beta, |t| ctx.units.read(t));
    let init = InitialState2D::canonical(theta0, ctx.units.read(args.delta))?;
    report
        .output("theta0", ctx.units.show(init.theta0))
        .output("delta", ctx.units.show(init.delta));
    Ok(init)
}

fn solve(ctx: &Ctx, g: &GeometryArgs, i: &InitArgs, theta: f64) -> Outcome {
    let mut r = Report::new("solve");
    let geom = geometry(ctx, g, &mut r)?;
    let init = initial(ctx, &geom, i, &mut r)?;
    r.input("theta", theta);
    let phases = solve_phi(&geom, &init, ctx.units.read(theta))?;
    let res = matching_residual(&geom, &init, &phases)?;
    r.output("theta", ctx.units.show(phases.theta))
        .output("phi", ctx.units.show(phases.phi))
        .output("special_case", classify_special_case(&geom, &init, &phases).name())
        .output("lhs", res.lhs)
        .output("rhs", res.rhs)
        .residual("matching", res.value)
        .residual("matching_normalized", res.normalized);
    r.pass = res.value.abs() <= ctx.tol(SOLVE_TOL);
    Ok(r)
}

fn plan(ctx: &Ctx, g: &GeometryArgs, i: &InitArgs, theta: f64, phi: Option<f64>, trajectory: Option<u64>) -> Outcome {
    let mut r = Report::new("plan");
    let geom = geometry(ctx, g, &mut r)?;
    let init = initial(ctx, &geom, i, &mut r)?;
    r.input("theta", theta);
    let phases = match phi {
        Some(p) => {
            r.input("phi", p);
            PhasePair::new(ctx.units.read(theta), ctx.units.read(p))?
        }
        None => solve_phi(&geom, &init, ctx.units.read(theta))?,
    };
    let res = matching_residual(&geom, &init, &phases)?;
    let plan = optimal_iterations(&geom, &init, &phases)?;
    r.output("theta", ctx.units.show(phases.theta))
        .output("phi", ctx.units.show(phases.phi))
        .output("phi_solved", phi.is_none())
        .output("omega_tot", ctx.units.show(plan.omega_tot))
        .output("alpha", ctx.units.show(plan.alpha))
        .output("ratio", plan.ratio)
        .output("j_op", plan.j_op)
        .output("p_at_jop", plan.p_at_jop)
        .output("p_at_jop_plus_1", plan.p_at_jop_plus_1)
        .output("p_at_jop_minus_1", plan.p_at_jop_minus_1)
        .output("k_param", plan.k_param)
        .residual("matching", res.value)
        .residual("matching_normalized", res.normalized);
    if let Some(j_max) = trajectory {
        r.input("trajectory", j_max);
        let p = probability_trajectory(&geom, &init, &phases, j_max);
        r.column("j", (0..=j_max).map(Value::from).collect())
            .column("p", p.into_iter().map(Value::from).collect());
    }
    r.pass = res.value.abs() <= ctx.tol(SOLVE_TOL);
    Ok(r)
}

/// Real unitary whose column 0 puts weight `sin²β` on the last basis state.
fn engine_for(geom: &SearchGeometry<f64>, n: usize, phases: PhasePair<f64>) -> Result<EngineConfig<f64>, Failure> {
    if n < 2 {
        return Err(Failure::BadInput(format!("verification dimension must be at least 2, got {n}")));
    }
    let (s, c) = geom.beta.sin_cos();
    let rest = c / ((n - 1) as f64).sqrt();
    let v: Vec<f64> = (0..n).map(|k| if k == n - 1 { s } else { rest }).collect();
    let u = Unitary::Dense(column_reflector(&v)?);
    Ok(EngineConfig::with_unitary(u, MarkedSet::new([n - 1], n)?, phases, 0)?)
}

fn certain(ctx: &Ctx, g: &GeometryArgs, i: &InitArgs, iterations: u64, verify: Option<usize>, near: f64) -> Outcome {
    let mut r = Report::new("certain");
    let geom = geometry(ctx, g, &mut r)?;
    let init = initial(ctx, &geom, i, &mut r)?;
    r.input("iterations", iterations).input("near", near);
    let sol = certainty_search_near(&geom, &init, iterations, ctx.units.read(near))?;
    r.output("theta", ctx.units.show(sol.phases.theta))
        .output("phi", ctx.units.show(sol.phases.phi))
        .output("iterations", sol.iterations)
        .output("roots_found", sol.roots_found)
        .residual("matching", sol.residual_match)
        .residual("count", sol.residual_count);
    if let Some(n) = verify {
        r.input("verify", n);
        let cfg = engine_for(&geom, n, sol.phases)?;
        let mut psi = cfg.initial_state(Some(&init))?;
        for _ in 0..iterations {
            psi = apply_iteration(&psi, &cfg)?;
        }
        let p = marked_probability(&psi, &cfg.marked);
        r.output("p_oracle", p).residual("oracle", (1.0 - p).abs());
        r.pass = (1.0 - p).abs() <= ctx.tol(ORACLE_TOL);
        if !r.pass {
            let msg = format!("oracle probability after {iterations} steps is {p}");
            return Err(Failure::Verification(Box::new(r), msg));
        }
    }
    Ok(r)
}

struct SimulateArgs<'a> {
    n: usize,
    marked: &'a [usize],
    theta: f64,
    phi: f64,
    iterations: u64,
    unitary: UnitaryChoice,
    seed: u64,
    theta0: Option<f64>,
    delta: f64,
    gamma: usize,
    path: PathChoice,
}

fn simulate(ctx: &Ctx, a: SimulateArgs<'_>) -> Outcome {
    let mut r = Report::new("simulate");
    r.input("n", a.n)
        .input("marked", a.marked.to_vec())
        .input("theta", a.theta)
        .input("phi", a.phi)
        .input("iterations", a.iterations)
        .input("gamma", a.gamma);
    let u = match a.unitary {
        UnitaryChoice::Hadamard => {
            r.input("unitary", "hadamard");
            build_unitary(&UnitarySpec::hadamard_walsh(a.n))?
        }
        UnitaryChoice::Random => {
            r.input("unitary", "random").input("seed", a.seed);
            build_unitary(&UnitarySpec::seeded_random(a.n, a.seed))?
        }
        UnitaryChoice::Reflector => {
            r.input("unitary", "reflector");
            Unitary::Dense(uniform_reflector(a.n)?)
        }
    };
    let phases = PhasePair::new(ctx.units.read(a.theta), ctx.units.read(a.phi))?;
    let set = MarkedSet::new(a.marked.iter().copied(), a.n)?;
    let path = match a.path {
        PathChoice::RankOne => IterationPath::RankOne,
        PathChoice::Conjugation => IterationPath::Conjugation,
    };
    let cfg = EngineConfig::with_unitary(u, set, phases, a.gamma)?.with_path(path);
    let sub = cfg.subspace()?;
    let init = match a.theta0 {
        Some(t) => {
            r.input("theta0", t).input("delta", a.delta);
            Some(InitialState2D::canonical(ctx.units.read(t), ctx.units.read(a.delta))?)
        }
        None => None,
    };
    let start = init.unwrap_or_else(|| InitialState2D::standard(&sub.geometry));
    let analytic = probability_trajectory(&sub.geometry, &start, &phases, a.iterations);

    let mut psi = cfg.initial_state(init.as_ref())?;
    let mut oracle = Vec::with_capacity(analytic.len());
    let mut leakage = Vec::with_capacity(analytic.len());
    for j in 0..=a.iterations {
        if j > 0 {
            psi = apply_iteration(&psi, &cfg)?;
        }
        oracle.push(marked_probability(&psi, &cfg.marked));
        leakage.push(project_to_2d(&psi, &sub)?.leakage);
    }
    let max_diff = oracle.iter().zip(&analytic).map(|(o, p)| (o - p).abs()).fold(0.0, f64::max);
    let max_leak = leakage.iter().copied().fold(0.0, f64::max);
    r.output("beta", ctx.units.show(sub.geometry.beta))
        .column("j", (0..=a.iterations).map(Value::from).collect())
        .column("p_oracle", oracle.into_iter().map(Value::from).collect())
        .column("p_analytic", analytic.into_iter().map(Value::from).collect())
        .column("leakage", leakage.into_iter().map(Value::from).collect())
        .residual("max_abs_diff", max_diff)
        .residual("max_leakage", max_leak);
    let tol = ctx.tol(ORACLE_TOL);
    r.pass = max_diff <= tol && max_leak <= tol;
    if !r.pass {
        let msg = format!("oracle and two-level model differ by {max_diff:e}, leakage {max_leak:e}");
        return Err(Failure::Verification(Box::new(r), msg));
    }
    Ok(r)
}

fn scan_tolerance(ctx: &Ctx, n_list: &[usize], theta: f64) -> Outcome {
    let mut r = Report::new("scan-tolerance");
    r.input("n_list", n_list.to_vec()).input("theta", theta);
    if n_list.is_empty() {
        return Err(Failure::BadInput("empty N list".into()));
    }
    let theta = ctx.units.read(theta);
    let mut points = n_list
        .par_iter()
        .map(|&n| {
            let g = SearchGeometry::uniform(n, 1)?;
            Ok((n, mismatch_tolerance(&g, &InitialState2D::standard(&g), theta)?))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    points.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.half_width.total_cmp(&b.1.half_width)));

    let fit: Vec<(f64, f64)> = points.iter().map(|(n, t)| (*n as f64, t.half_width)).collect();
    let slope = log_log_slope(&fit).ok();
    let decreasing = points.windows(2).all(|w| w[0].0 == w[1].0 || w[1].1.half_width < w[0].1.half_width);
    r.column("n", points.iter().map(|(n, _)| Value::from(*n)).collect())
        .column("half_width", points.iter().map(|(_, t)| ctx.units.show(t.half_width).into()).collect())
        .column("plus", points.iter().map(|(_, t)| ctx.units.show(t.plus).into()).collect())
        .column("minus", points.iter().map(|(_, t)| ctx.units.show(t.minus).into()).collect())
        .csv_column("fit_slope", vec![Value::from(slope); points.len()])
        .output("slope", slope)
        .output("decreasing", decreasing);
    r.pass = decreasing;
    Ok(r)
}

struct Check {
    name: &'static str,
    diff: f64,
    tol: f64,
}

fn verify_appendix(ctx: &Ctx, rounding: RoundingChoice) -> Outcome {
    let mut r = Report::new("verify-appendix");
    let tol = ctx.tol(APPENDIX_TOL);
    let theta = std::f64::consts::FRAC_PI_2;
    r.input("weight", APPENDIX_WEIGHT)
        .input("theta", ctx.units.show(theta))
        .input("rounding", "floor_plus_one");
    let g = SearchGeometry::from_weight(APPENDIX_WEIGHT)?;
    let prep = hoyer_preparation(&g, theta, Rounding::FloorPlusOne)?;
    let q = build_search_operator(&g, &prep.phases).m;

    // published closed forms
    let s199 = 199f64.sqrt();
    let phi_e = 2.0 * 0.99f64.atan();
    let q11_e = Complex::new(-1.0 / 200.0, -199.0 / 200.0);
    let q12_e = Complex::new(s199 / 200.0, -s199 / 200.0);
    let q21_e = q12_e * Complex::cis(phi_e);
    let u_e = canonical_angle(-(q12_e.arg() - q11_e.arg()));

    let init = prep.initial_state();
    let sides = matching_sides(&g, &init, &prep.phases)?;
    let checks = [
        Check { name: "phi", diff: canonical_angle(prep.phases.phi - phi_e).abs(), tol },
        Check { name: "q11", diff: (q[0][0] - q11_e).norm(), tol },
        Check { name: "q12", diff: (q[0][1] - q12_e).norm(), tol },
        Check { name: "q21", diff: (q[1][0] - q21_e).norm(), tol },
        Check { name: "q22", diff: (q[1][1] - q11_e).norm(), tol },
        Check { name: "u", diff: canonical_angle(prep.u - u_e).abs(), tol },
        Check { name: "m", diff: (prep.m as f64 - APPENDIX_M as f64).abs(), tol: 0.0 },
        Check { name: "lhs_minus_rhs", diff: (sides.lhs - sides.rhs).abs(), tol },
        Check { name: "lhs_golden_relative", diff: (sides.lhs - GOLDEN_LHS).abs() / GOLDEN_LHS, tol: GOLDEN_REL },
    ];

    let c = |z: Complex<f64>| complex(z.re, z.im);
    r.output("beta", ctx.units.show(g.beta))
        .output("vartheta", ctx.units.show(prep.vartheta))
        .output("m", prep.m)
        .output("phi", ctx.units.show(prep.phases.phi))
        .output("q11", c(q[0][0]))
        .output("q12", c(q[0][1]))
        .output("q21", c(q[1][0]))
        .output("q22", c(q[1][1]))
        .output("u", ctx.units.show(prep.u))
        .output("theta_init", ctx.units.show(prep.theta_init))
        .output("lhs", sides.lhs)
        .output("rhs", sides.rhs)
        .output("golden_lhs", GOLDEN_LHS);
    for ch in &checks {
        r.residual(ch.name, ch.diff);
    }

    if rounding == RoundingChoice::Nearest {
        let alt = hoyer_preparation(&g, theta, Rounding::Nearest)?;
        let alt_init = alt.initial_state();
        let alt_sides = matching_sides(&g, &alt_init, &alt.phases)?;
        let alt_res = matching_residual(&g, &alt_init, &alt.phases)?;
        r.input("diagnostic_rounding", "nearest").output(
            "nearest",
            json!({
                "m": alt.m,
                "m_changed": alt.m != prep.m,
                "theta_init": ctx.units.show(alt.theta_init),
                "lhs": alt_sides.lhs,
                "rhs": alt_sides.rhs,
                "matching_normalized": alt_res.normalized,
            }),
        );
    }

    let failed: Vec<String> = checks
        .iter()
        .filter(|ch| !(ch.diff <= ch.tol))
        .map(|ch| format!("{} differs by {:e} (tolerance {:e})", ch.name, ch.diff, ch.tol))
        .collect();
    r.pass = failed.is_empty();
    if !r.pass {
        return Err(Failure::Verification(Box::new(r), failed.join("; ")));
    }
    Ok(r)
}
