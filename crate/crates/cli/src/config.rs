//! Job configuration: an optional JSON file overlaid with command-line flags.

use std::path::PathBuf;

use clap::Args;
use serde::Deserialize;
use thiserror::Error;

use fo_core::ring::Field;
use fo_core::Error;

use crate::Command;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] Error),
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Precondition(_)
        | Error::CurveMismatch
        | Error::NoTorsion(_)
        | Error::DivisionByZero => 2,
        Error::Falsified(_) => 3,
        Error::Budget(_) | Error::Precision(_) => 4,
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => exit_code(e),
        }
    }
}

#[derive(Args, Clone, Debug, Default)]
pub struct Opts {
    /// JSON job file; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Prime modulus, or "rationals".
    #[arg(long, global = true)]
    pub p: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// n-torsion point as "x,y"; searched for when absent.
    #[arg(long = "P0", global = true, allow_hyphen_values = true)]
    pub p0: Option<String>,
    /// Truncation: extra pole order allowed in C¹.
    #[arg(long = "N", global = true)]
    pub truncation: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

/// A scalar in a job file: an integer or a string such as "-3/4".
#[derive(Deserialize, Clone, Debug)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn text(self) -> String {
        match self {
            Scalar::Int(v) => v.to_string(),
            Scalar::Text(s) => s,
        }
    }
}

fn join(v: Vec<Scalar>) -> String {
    v.into_iter()
        .map(Scalar::text)
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Deserialize, Default, Debug)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    p: Option<Scalar>,
    a: Option<Scalar>,
    b: Option<Scalar>,
    n: Option<u32>,
    #[serde(rename = "P0")]
    p0: Option<Vec<Scalar>>,
    #[serde(rename = "N")]
    truncation: Option<usize>,
    seed: Option<u64>,
    jobs: Option<usize>,
    phi: Option<Vec<Scalar>>,
    #[serde(default)]
    v: Vec<Vec<Scalar>>,
    divisor: Option<[i64; 2]>,
    points: Option<Scalar>,
    chart: Option<usize>,
    degree: Option<u32>,
}

pub enum FieldSpec {
    Prime(u64),
    Rationals,
}

/// Every setting a command may read, as text until the field is known.
#[derive(Debug, Default)]
pub struct JobConfig {
    p: Option<String>,
    a: Option<String>,
    b: Option<String>,
    n: Option<u32>,
    p0: Option<String>,
    pub truncation: Option<usize>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub phi: Option<String>,
    pub v: Vec<String>,
    pub inf: Option<i64>,
    pub at_p0: Option<i64>,
    pub points: Option<String>,
    pub chart: Option<usize>,
    pub degree: Option<u32>,
}

impl JobConfig {
    pub fn load(opts: &Opts, cmd: &Command) -> Result<Self, CliError> {
        let file = match &opts.config {
            None => FileConfig::default(),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
            }
        };
        let mut job = JobConfig {
            p: file.p.map(Scalar::text),
            a: file.a.map(Scalar::text),
            b: file.b.map(Scalar::text),
            n: file.n,
            p0: file.p0.map(join),
            truncation: file.truncation,
            seed: file.seed,
            jobs: file.jobs,
            phi: file.phi.map(join),
            v: file.v.into_iter().map(join).collect(),
            inf: file.divisor.map(|d| d[0]),
            at_p0: file.divisor.map(|d| d[1]),
            points: file.points.map(Scalar::text),
            chart: file.chart,
            degree: file.degree,
        };
        macro_rules! overlay {
            ($($f:ident),*) => { $(if opts.$f.is_some() { job.$f = opts.$f.clone(); })* };
        }
        overlay!(p, a, b, n, p0, truncation, seed, jobs);
        match cmd {
            Command::Cohomology { inf, at_p0 } => {
                job.inf = inf.or(job.inf);
                job.at_p0 = at_p0.or(job.at_p0);
            }
            Command::BracketEval { phi } | Command::Conormal { phi } => {
                job.phi = phi.clone().or(job.phi.take());
            }
            Command::BracketSweep { points } => job.points = points.clone().or(job.points.take()),
            Command::Bivector { chart, degree } => {
                job.chart = chart.or(job.chart);
                job.degree = degree.or(job.degree);
            }
            Command::LeafTest { phi, v } => {
                job.phi = phi.clone().or(job.phi.take());
                if !v.is_empty() {
                    job.v = v.clone();
                }
            }
            Command::CurveInfo | Command::Selftest => {}
        }
        if job.jobs == Some(0) {
            return Err(CliError::Config("--jobs must be positive".into()));
        }
        Ok(job)
    }

    pub fn field(&self) -> Result<FieldSpec, CliError> {
        match self.p.as_deref() {
            None => Err(CliError::Config("missing --p".into())),
            Some("rationals") => Ok(FieldSpec::Rationals),
            Some(s) => s.parse().map(FieldSpec::Prime).map_err(|_| {
                CliError::Config(format!("--p must be a prime or \"rationals\", got {s:?}"))
            }),
        }
    }

    pub fn field_label(&self) -> String {
        self.p.clone().unwrap_or_default()
    }

    pub fn n(&self) -> Result<u32, CliError> {
        let n = self
            .n
            .ok_or_else(|| CliError::Config("missing --n".into()))?;
        if n < 2 {
            return Err(Error::Precondition("n must be at least 2".into()).into());
        }
        Ok(n)
    }

    pub fn scalar_a<F: Field>(&self, z: &F) -> Result<F, CliError> {
        parse_scalar(
            z,
            self.a
                .as_deref()
                .ok_or_else(|| CliError::Config("missing --a".into()))?,
        )
    }

    pub fn scalar_b<F: Field>(&self, z: &F) -> Result<F, CliError> {
        parse_scalar(
            z,
            self.b
                .as_deref()
                .ok_or_else(|| CliError::Config("missing --b".into()))?,
        )
    }

    pub fn p0<F: Field>(&self, z: &F) -> Result<Option<(F, F)>, CliError> {
        match &self.p0 {
            None => Ok(None),
            Some(s) => {
                let v = parse_vector(z, s, 2)?;
                Ok(Some((v[0].clone(), v[1].clone())))
            }
        }
    }
}

/// An integer or fraction `a/b`, reduced into the field of `z`.
pub fn parse_scalar<F: Field>(z: &F, s: &str) -> Result<F, CliError> {
    let bad = || CliError::Config(format!("not a scalar: {s:?}"));
    let int = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
    match s.split_once('/') {
        None => Ok(z.from_int(int(s)?)),
        Some((num, den)) => {
            let d = z.from_int(int(den)?).inv().ok_or(Error::DivisionByZero)?;
            Ok(z.from_int(int(num)?) * d)
        }
    }
}

/// Comma-separated scalars of the given length.
pub fn parse_vector<F: Field>(z: &F, s: &str, len: usize) -> Result<Vec<F>, CliError> {
    let v = s
        .split(',')
        .map(|t| parse_scalar(z, t))
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != len {
        return Err(CliError::Config(format!(
            "expected {len} coordinates, got {}: {s:?}",
            v.len()
        )));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fo_core::ring::{PrimeField, Q};

    #[test]
    fn scalars_reduce_into_the_field() {
        let f = PrimeField::new(13).unwrap();
        assert_eq!(parse_scalar(&f.zero(), "-1").unwrap(), f.elem(12));
        assert_eq!(parse_scalar(&f.zero(), "1/2").unwrap(), f.elem(7));
        assert_eq!(parse_scalar(&Q::int(0), "-3/6").unwrap(), Q::new(-1, 2));
        assert!(parse_scalar(&f.zero(), "1/13").is_err());
        assert!(parse_vector(&f.zero(), "1,2", 3).is_err());
    }
}
