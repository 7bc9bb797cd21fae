//! `fo`: batch front-end for fo-core. Results go to stdout as JSON, progress
//! and tables to stderr.

mod config;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use fo_core::cech::{default_budget, stable_dims, Budget, Bundle, Ctx, Setting};
use fo_core::conormal::compare;
use fo_core::curve::{Cover, Curve};
use fo_core::fo::{
    bivector_chart, check_rank_stable, end_dim, fo_matrix, jacobi_check, leaf_test,
    projective_points, random_points, rank_sweep,
};
use fo_core::linalg::Matrix;
use fo_core::ring::{Field, Point, PrimeField, Q};
use fo_core::selftest::run_all;
use fo_core::Error;

use config::{parse_vector, CliError, FieldSpec, JobConfig, Opts};

const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser)]
#[command(
    name = "fo",
    version,
    about = "Exact Feigin–Odesskii brackets on elliptic curves"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Clone)]
enum Command {
    /// Torsion certificate for P0 and the Miller function w_n.
    CurveInfo,
    /// h0 and h1 of O(d_inf·O∞ + d_p0·P0); defaults to O(−n·O∞).
    Cohomology {
        #[arg(long, allow_hyphen_values = true)]
        inf: Option<i64>,
        #[arg(long = "at-p0", allow_hyphen_values = true)]
        at_p0: Option<i64>,
    },
    /// The Poisson map at one point φ.
    BracketEval {
        #[arg(long)]
        phi: Option<String>,
    },
    /// Ranks of π over every point of ℙ^{n−1} ("all") or a number of random points.
    BracketSweep {
        #[arg(long)]
        points: Option<String>,
    },
    /// Chart bivector by interpolation, with a Jacobi report.
    Bivector {
        #[arg(long)]
        chart: Option<usize>,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Compare trivial first-order deformations with the image of π.
    LeafTest {
        #[arg(long)]
        phi: Option<String>,
        /// Tangent vector; repeatable. Defaults to unit vectors and images of π.
        #[arg(long)]
        v: Vec<String>,
    },
    /// Conormal bracket against the commutator bracket of End(E)₀.
    Conormal {
        #[arg(long)]
        phi: Option<String>,
    },
    /// The ten acceptance checks.
    Selftest,
}

/// A command result; `finding` turns a complete report into a nonzero exit.
struct Report {
    value: Value,
    finding: Option<Error>,
}

impl From<Value> for Report {
    fn from(value: Value) -> Self {
        Report {
            value,
            finding: None,
        }
    }
}

fn vec_json<F: Field>(v: &[F]) -> Value {
    Value::Array(v.iter().map(|x| x.to_json()).collect())
}

fn matrix_json<F: Field>(m: &Matrix<F>) -> Value {
    Value::Array(m.row_vecs().iter().map(|r| vec_json(r)).collect())
}

fn point_json<F: Field>(p: &Point<F>) -> Value {
    match p.coords() {
        None => json!("infinity"),
        Some((x, y)) => json!([x.to_json(), y.to_json()]),
    }
}

fn monomial_name(d: usize) -> String {
    let pow = |v: &str, e: usize| match e {
        0 => String::new(),
        1 => v.to_string(),
        _ => format!("{v}^{e}"),
    };
    let s = if d % 2 == 0 {
        pow("x", d / 2)
    } else {
        let x = pow("x", (d - 3) / 2);
        if x.is_empty() {
            "y".into()
        } else {
            format!("{x}*y")
        }
    };
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

fn cover<F: Field>(job: &JobConfig, z: &F) -> Result<Cover<F>, CliError> {
    let n = job.n()?;
    let curve = Curve::new(job.scalar_a(z)?, job.scalar_b(z)?)?;
    let p0 = match job.p0(z)? {
        Some((x, y)) => curve.point(x, y)?,
        None => curve.find_n_torsion(n)?,
    };
    if curve.order(&p0, n as u64) != Some(n as u64) {
        return Err(
            Error::Precondition(format!("P0 = {p0:?} does not have exact order {n}")).into(),
        );
    }
    Ok(Cover::new(curve, n, p0)?)
}

fn budget(job: &JobConfig) -> Result<Budget, CliError> {
    let mut b = default_budget(job.n()?);
    if let Some(extra) = job.truncation {
        b.n_extra = extra;
    }
    Ok(b)
}

fn setting<F: Field>(job: &JobConfig, z: &F) -> Result<Setting<F>, CliError> {
    Ok(Setting::new(cover(job, z)?, budget(job)?)?)
}

fn phi<F: Field>(job: &JobConfig, z: &F) -> Result<Vec<F>, CliError> {
    let s = job
        .phi
        .as_deref()
        .ok_or_else(|| CliError::Config("this command needs --phi".into()))?;
    let v = parse_vector(z, s, job.n()? as usize)?;
    if v.iter().all(|x| x.is_zero()) {
        return Err(CliError::Config("φ must be nonzero".into()));
    }
    Ok(v)
}

fn curve_info<F: Field>(job: &JobConfig, z: &F) -> Result<Report, CliError> {
    let c = cover(job, z)?;
    let n = c.n;
    let multiples: Vec<Value> = (1..=n as i64)
        .map(|k| point_json(&c.curve.mul(k, &c.p0)))
        .collect();
    let deg = c.w.degree().unwrap_or(0);
    let terms: Vec<Value> = (0..=deg)
        .rev()
        .filter(|&d| d != 1 && !c.w.coeff(d).is_zero())
        .map(|d| json!({"monomial": monomial_name(d), "pole_order": d, "coeff": c.w.coeff(d).to_json()}))
        .collect();
    let count = z.elements().map(|_| c.curve.points().len());
    eprintln!(
        "P0 = {:?} has exact order {n}; w_n has pole order {deg}",
        c.p0
    );
    Ok(json!({
        "field": job.field_label(),
        "a": c.curve.a().to_json(),
        "b": c.curve.b().to_json(),
        "n": n,
        "P0": point_json(&c.p0),
        "P0_multiples": multiples,
        "torsion_certified": true,
        "w": {"pole_order": deg, "terms": terms},
        "points": count,
    })
    .into())
}

fn cohomology<F: Field>(job: &JobConfig, z: &F) -> Result<Report, CliError> {
    let c = cover(job, z)?;
    let n = c.n;
    let d_inf = job.inf.unwrap_or(-(n as i64));
    let d_p0 = job.at_p0.unwrap_or(0);
    let probe = Ctx::new(c.clone(), 1, 1)?;
    let mut b = budget(job)?.max(&Budget::for_bundle(&Bundle::line(&probe, d_inf, d_p0), n));
    b.n_extra += d_inf.unsigned_abs() as usize + d_p0.unsigned_abs() as usize;
    let st = Setting::new(c, b)?;
    let line = Bundle::line(&st.ctx, d_inf, d_p0);
    let (h0, h1) = stable_dims(&st.ctx, &line, b)?;
    let deg = d_inf + d_p0;
    eprintln!("O({d_inf}·O∞ + {d_p0}·P0): h0 = {h0}, h1 = {h1}");
    let finding = (h0 as i64 - h1 as i64 != deg).then(|| {
        Error::Falsified(format!(
            "h0 − h1 = {} but degree {deg}",
            h0 as i64 - h1 as i64
        ))
    });
    Ok(Report {
        value: json!({
            "divisor": {"O_inf": d_inf, "P0": d_p0},
            "degree": deg,
            "h0": h0,
            "h1": h1,
            "N": b.n_extra,
        }),
        finding,
    })
}

fn bracket_eval<F: Field>(job: &JobConfig, z: &F) -> Result<Report, CliError> {
    let st = setting(job, z)?;
    let phi = phi(job, z)?;
    let pt = fo_matrix(&st, &phi)?;
    check_rank_stable(&st, &st.bumped()?, &phi)?;
    let e = end_dim(&st, &phi)?;
    eprintln!("rank π = {}, dim End(E) = {e}", pt.rank);
    let finding = (pt.rank + e != phi.len())
        .then(|| Error::Falsified(format!("rank {} with dim End = {e}", pt.rank)));
    Ok(Report {
        value: json!({
            "phi": vec_json(&phi),
            "chart": pt.chart,
            "basis": pt.domain.iter().map(|v| vec_json(v)).collect::<Vec<_>>(),
            "matrix": matrix_json(&pt.matrix()),
            "skew_form": matrix_json(&pt.skew),
            "rank": pt.rank,
            "end_dim": e,
            "leaf_dims": pt.rank,
            "kernel": pt.kernel.iter().map(|v| vec_json(v)).collect::<Vec<_>>(),
        }),
        finding,
    })
}

fn bracket_sweep<F: Field>(job: &JobConfig, z: &F) -> Result<Report, CliError> {
    let st = setting(job, z)?;
    let n = st.n() as usize;
    let spec = job.points.clone().unwrap_or_else(|| "all".into());
    let points = if spec == "all" {
        let els = z
            .elements()
            .ok_or_else(|| CliError::Config("an exhaustive sweep needs a finite field".into()))?;
        projective_points(&els, n)
    } else {
        let k: usize = spec.parse().map_err(|_| {
            CliError::Config(format!("--points must be \"all\" or a count, got {spec:?}"))
        })?;
        random_points(&st, k, job.seed.unwrap_or(DEFAULT_SEED))
    };
    let entries = rank_sweep(&st, &points)?;
    let again = rank_sweep(&st.bumped()?, &points)?;
    if let Some((a, b)) = entries.iter().zip(&again).find(|(a, b)| a.rank != b.rank) {
        return Err(Error::Budget(format!(
            "rank at {:?} changed from {} to {}",
            a.phi, a.rank, b.rank
        ))
        .into());
    }
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    for e in &entries {
        *hist.entry(e.rank).or_default() += 1;
    }
    eprintln!("rank  count");
    for (r, c) in &hist {
        eprintln!("{r:>4}  {c}");
    }
    let bad = entries.iter().filter(|e| !e.consistent(n)).count();
    Ok(Report {
        value: json!({
            "n": n,
            "count": entries.len(),
            "rank_histogram": hist.iter().map(|(r, c)| json!({"rank": r, "count": c})).collect::<Vec<_>>(),
            "points": entries.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
        }),
        finding: (bad > 0)
            .then(|| Error::Falsified(format!("{bad} points violate rank + dim End = n"))),
    })
}

fn bivector<F: Field>(job: &JobConfig, z: &F) -> Result<Report, CliError> {
    let st = setting(job, z)?;
    let n = st.n() as usize;
    let chart = job.chart.unwrap_or(n - 1);
    let bv = bivector_chart(
        &st,
        chart,
        job.degree.unwrap_or(4),
        job.seed.unwrap_or(DEFAULT_SEED),
    )?;
    let jac = jacobi_check(&bv);
    eprintln!(
        "chart {chart}: degree {}, fitted on {} points, validated on {}; Jacobi {}",
        bv.degree,
        bv.fit_points,
        bv.held_out,
        if jac.holds() { "holds" } else { "fails" }
    );
    Ok(Report {
        value: json!({"bivector": bv.to_json(), "jacobi": jac.to_json()}),
        finding: (!jac.holds()).then(|| Error::Falsified("Schouten residual is nonzero".into())),
    })
}

fn leaf<F: Field>(job: &JobConfig, z: &F) -> Result<Report, CliError> {
    let st = setting(job, z)?;
    let phi = phi(job, z)?;
    let n = phi.len();
    let pt = fo_matrix(&st, &phi)?;
    let vs: Vec<Vec<F>> = if job.v.is_empty() {
        (0..n)
            .filter(|&i| i != pt.chart)
            .map(|i| {
                (0..n)
                    .map(|k| if k == i { z.one_like() } else { z.clone() })
                    .collect()
            })
            .chain(pt.images.iter().cloned())
            .collect()
    } else {
        job.v
            .iter()
            .map(|s| parse_vector(z, s, n))
            .collect::<Result<_, _>>()?
    };
    let mut tests = vec![];
    let mut disagree = 0;
    for v in &vs {
        let trivial = leaf_test(&st, &phi, v)?;
        let inside = pt.in_image(v);
        disagree += usize::from(trivial != inside);
        tests.push(json!({"v": vec_json(v), "deformation_trivial": trivial, "in_image": inside}));
    }
    eprintln!("{} tangent vectors, {disagree} disagreements", vs.len());
    Ok(Report {
        value: json!({
            "phi": vec_json(&phi),
            "rank": pt.rank,
            "leaf_dims": pt.rank,
            "tests": tests,
        }),
        finding: (disagree > 0).then(|| {
            Error::Falsified(format!(
                "{disagree} vectors separate trivial deformations from Im π"
            ))
        }),
    })
}

fn conormal<F: Field>(job: &JobConfig, z: &F) -> Result<Report, CliError> {
    let st = setting(job, z)?;
    let phi = phi(job, z)?;
    let c = compare(&st, &phi)?;
    eprintln!(
        "dim Ker π = {}, matching scalar {}",
        c.ker_dim,
        c.scalar.as_ref().map_or("none".into(), |s| s.to_string())
    );
    let ok = c.matched() && c.both_lie();
    Ok(Report {
        value: c.to_json(),
        finding: (!ok).then(|| Error::Falsified("conormal and End0 brackets differ".into())),
    })
}

fn selftest(job: &JobConfig) -> Report {
    let seed = job.seed.unwrap_or(DEFAULT_SEED);
    let outcomes = run_all(seed);
    for o in &outcomes {
        eprintln!("{}", o.line());
    }
    let passed = outcomes.iter().filter(|o| o.pass()).count();
    Report {
        value: json!({
            "seed": seed,
            "passed": passed,
            "total": outcomes.len(),
            "criteria": outcomes.iter().map(|o| o.to_json()).collect::<Vec<_>>(),
        }),
        finding: outcomes.iter().find_map(|o| o.error.clone()),
    }
}

fn dispatch<F: Field>(cmd: &Command, job: &JobConfig, z: &F) -> Result<Report, CliError> {
    match cmd {
        Command::CurveInfo => curve_info(job, z),
        Command::Cohomology { .. } => cohomology(job, z),
        Command::BracketEval { .. } => bracket_eval(job, z),
        Command::BracketSweep { .. } => bracket_sweep(job, z),
        Command::Bivector { .. } => bivector(job, z),
        Command::LeafTest { .. } => leaf(job, z),
        Command::Conormal { .. } => conormal(job, z),
        Command::Selftest => Ok(selftest(job)),
    }
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let job = JobConfig::load(&cli.opts, &cli.cmd)?;
    if let Some(j) = job.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    if matches!(cli.cmd, Command::Selftest) {
        return Ok(selftest(&job));
    }
    match job.field()? {
        FieldSpec::Prime(p) => dispatch(&cli.cmd, &job, &PrimeField::new(p)?.zero()),
        FieldSpec::Rationals => dispatch(&cli.cmd, &job, &Q::int(0)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(r) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&r.value).expect("JSON values serialize")
            );
            match r.finding {
                None => ExitCode::SUCCESS,
                Some(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(config::exit_code(&e))
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
