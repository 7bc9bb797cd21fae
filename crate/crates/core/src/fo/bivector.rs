//! The Poisson bivector on an affine chart of `ℙ^{n−1}`, recovered from
//! pointwise values by exact interpolation, and its Jacobi identity.
//!
//! On the chart `φ_j = 1` the coordinates are `u_a = φ_{vars[a]}`. The
//! coordinate vector field `∂_a` is the unit class `e_{vars[a]}` modulo `φ`,
//! and `du_a ∈ ⟨φ⟩^⊥` is fixed by `⟨du_a, e_l⟩ = δ` for `l ≠ j`, which forces
//! `⟨du_a, e_j⟩ = −u_a`. The bivector is `π^{ab} = ⟨du_b, π_φ(du_a)⟩`.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::mpoly::{monomials, MPoly};
use crate::cech::Setting;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::Field;
use crate::specseq::{D2Mode, ExtensionSS};

/// Largest total degree tried before interpolation is declared failed.
pub const MAX_DEGREE: u32 = 6;

#[derive(Clone, Debug)]
pub struct ChartBivector<F: Field> {
    pub n: usize,
    /// The `Ext¹` coordinate set to 1.
    pub chart: usize,
    /// `Ext¹` coordinate of each chart variable.
    pub vars: Vec<usize>,
    pub degree: u32,
    /// `entries[a][b] = π^{ab}`.
    pub entries: Vec<Vec<MPoly<F>>>,
    pub fit_points: usize,
    pub held_out: usize,
}

impl<F: Field> ChartBivector<F> {
    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    /// Values at a point of the chart; `u` is nonempty since `n ≥ 2`.
    pub fn eval(&self, u: &[F]) -> Matrix<F> {
        let rows: Vec<Vec<F>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|p| p.eval(u)).collect())
            .collect();
        Matrix::from_rows(&rows, self.dim(), &u[0].zero_like())
    }

    /// `π^{ab} = −π^{ba}` as polynomials.
    pub fn is_skew(&self) -> bool {
        let m = self.dim();
        (0..m).all(|a| (0..m).all(|b| self.entries[a][b].add(&self.entries[b][a]).is_zero()))
    }

    /// `{"chart", "vars", "degree", "entries": [[i, j, terms], …]}`.
    pub fn to_json(&self) -> Value {
        let mut entries = vec![];
        for (a, row) in self.entries.iter().enumerate() {
            for (b, p) in row.iter().enumerate() {
                if !p.is_zero() {
                    entries.push(json!([a, b, p.to_json()]));
                }
            }
        }
        json!({
            "chart": self.chart,
            "vars": self.vars,
            "degree": self.degree,
            "fit_points": self.fit_points,
            "held_out": self.held_out,
            "entries": entries,
        })
    }
}

fn chart_point<F: Field>(n: usize, chart: usize, vars: &[usize], u: &[F], one: &F) -> Vec<F> {
    let mut phi = vec![one.zero_like(); n];
    phi[chart] = one.clone();
    for (&i, x) in vars.iter().zip(u) {
        phi[i] = x.clone();
    }
    phi
}

/// `du_a` for every chart variable at the point `φ` with `φ_chart = 1`.
pub fn cotangent_basis<F: Field>(st: &Setting<F>, phi: &[F], chart: usize) -> Result<Vec<Vec<F>>> {
    let n = phi.len();
    let z = st.zero();
    let gt = st.ext.gram.transpose();
    (0..n)
        .filter(|&i| i != chart)
        .map(|i| {
            let mut r = vec![z.clone(); n];
            r[i] = z.one_like();
            r[chart] = -phi[i].clone();
            gt.solve(&r)
                .ok_or_else(|| Error::Falsified("Gram matrix is singular".into()))
        })
        .collect()
}

/// `[π^{ab}]` at the point `φ` with `φ_chart = 1`.
pub fn chart_matrix<F: Field>(st: &Setting<F>, phi: &[F], chart: usize) -> Result<Matrix<F>> {
    let z = st.zero();
    let du = cotangent_basis(st, phi, chart)?;
    let ss = ExtensionSS::new(st, phi, None, false)?;
    let images = du
        .iter()
        .map(|s| ss.d2(s, D2Mode::Zigzag))
        .collect::<Result<Vec<_>>>()?;
    let m = du.len();
    let mut out = Matrix::zeros(m, m, &z);
    for a in 0..m {
        for b in 0..m {
            out.set(a, b, st.ext.pair(&du[b], &images[a]));
        }
    }
    Ok(out)
}

struct Sampler<'a, F: Field> {
    st: &'a Setting<F>,
    chart: usize,
    vars: Vec<usize>,
    rng: ChaCha8Rng,
    seen: HashSet<String>,
    points: Vec<(Vec<F>, Matrix<F>)>,
}

impl<'a, F: Field> Sampler<'a, F> {
    /// Ensure at least `count` distinct evaluated points.
    fn fill(&mut self, count: usize) -> Result<()> {
        let z = self.st.zero();
        let mut fresh = vec![];
        let mut tries = 0;
        while self.points.len() + fresh.len() < count {
            tries += 1;
            if tries > 100 * count + 1000 {
                return Err(Error::Precondition(
                    "field too small for the interpolation sample".into(),
                ));
            }
            let u: Vec<F> = self.vars.iter().map(|_| z.random(&mut self.rng)).collect();
            if self.seen.insert(format!("{u:?}")) {
                fresh.push(u);
            }
        }
        let n = self.st.n() as usize;
        let one = z.one_like();
        let evaluated = fresh
            .into_par_iter()
            .map(|u| {
                let phi = chart_point(n, self.chart, &self.vars, &u, &one);
                chart_matrix(self.st, &phi, self.chart).map(|m| (u, m))
            })
            .collect::<Result<Vec<_>>>()?;
        self.points.extend(evaluated);
        Ok(())
    }
}

enum Fit<F: Field> {
    /// The sample does not determine a polynomial of this degree.
    Underdetermined,
    /// No polynomial of this degree passes through the sample.
    Inconsistent,
    Entries(Vec<Vec<MPoly<F>>>),
}

fn fit<F: Field>(nvars: usize, deg: u32, points: &[(Vec<F>, Matrix<F>)], z: &F) -> Fit<F> {
    let monos = monomials(nvars, deg);
    let rows: Vec<Vec<F>> = points
        .iter()
        .map(|(u, _)| {
            monos
                .iter()
                .map(|e| {
                    u.iter()
                        .zip(e)
                        .fold(z.one_like(), |acc, (x, &k)| acc * x.pow(k as u64))
                })
                .collect()
        })
        .collect();
    let v = Matrix::from_rows(&rows, monos.len(), z);
    if v.rank() < monos.len() {
        return Fit::Underdetermined;
    }
    let m = points.first().map_or(0, |(_, p)| p.rows());
    let mut entries = vec![vec![MPoly::zero(nvars, z); m]; m];
    for (a, row) in entries.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate() {
            let vals: Vec<F> = points.iter().map(|(_, p)| p.get(a, b).clone()).collect();
            let Some(c) = v.solve(&vals) else {
                return Fit::Inconsistent;
            };
            let mut poly = MPoly::zero(nvars, z);
            for (e, x) in monos.iter().zip(c) {
                poly.add_term(e.clone(), x);
            }
            *slot = poly;
        }
    }
    Fit::Entries(entries)
}

/// Interpolate the bivector on the chart `φ_chart = 1` with total degree at
/// most `degree_bound`, escalating to [`MAX_DEGREE`], validated on twice as
/// many held-out points as were used for the fit.
pub fn bivector_chart<F: Field>(
    st: &Setting<F>,
    chart: usize,
    degree_bound: u32,
    seed: u64,
) -> Result<ChartBivector<F>> {
    let n = st.n() as usize;
    if chart >= n {
        return Err(Error::Precondition(format!("chart {chart} out of range for n = {n}")));
    }
    let z = st.zero();
    let vars: Vec<usize> = (0..n).filter(|&i| i != chart).collect();
    let nvars = vars.len();
    let mut sampler = Sampler {
        st,
        chart,
        vars: vars.clone(),
        rng: ChaCha8Rng::seed_from_u64(seed),
        seen: HashSet::new(),
        points: vec![],
    };
    let p = z.characteristic();
    let capacity = if p == 0 {
        usize::MAX
    } else {
        (p as usize).saturating_pow(nvars as u32)
    };
    let mut degrees: Vec<u32> = (degree_bound..=MAX_DEGREE).collect();
    if degrees.is_empty() {
        degrees.push(degree_bound);
    }
    for deg in degrees {
        let need = monomials(nvars, deg).len();
        let mut size = need + 4;
        let entries = loop {
            sampler.fill(size)?;
            match fit(nvars, deg, &sampler.points[..size], &z) {
                Fit::Underdetermined => size += need,
                Fit::Inconsistent => break None,
                Fit::Entries(e) => break Some(e),
            }
        };
        let Some(entries) = entries else { continue };
        // a small chart is validated exhaustively instead
        let held = (2 * size).min(capacity.saturating_sub(size));
        if held == 0 {
            return Err(Error::Precondition(
                "field too small to hold out validation points".into(),
            ));
        }
        sampler.fill(size + held)?;
        let ok = sampler.points[size..size + held].iter().all(|(u, m)| {
            (0..nvars).all(|a| (0..nvars).all(|b| entries[a][b].eval(u) == *m.get(a, b)))
        });
        if ok {
            return Ok(ChartBivector {
                n,
                chart,
                vars,
                degree: deg,
                entries,
                fit_points: size,
                held_out: held,
            });
        }
    }
    Err(Error::Budget(format!(
        "chart bivector did not validate at degree {MAX_DEGREE}"
    )))
}

#[derive(Clone, Debug)]
pub struct JacobiReport<F: Field> {
    /// `(i, j, k)` with `i < j < k` and the Schouten residual.
    pub residuals: Vec<((usize, usize, usize), MPoly<F>)>,
}

impl<F: Field> JacobiReport<F> {
    pub fn holds(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.residuals
                .iter()
                .map(|((i, j, k), r)| json!({"ijk": [i, j, k], "residual": r.to_json()}))
                .collect(),
        )
    }
}

/// `Σ_l π^{il}∂_l π^{jk} + π^{jl}∂_l π^{ki} + π^{kl}∂_l π^{ij}` for every triple.
pub fn jacobi_check<F: Field>(bv: &ChartBivector<F>) -> JacobiReport<F> {
    let m = bv.dim();
    let p = &bv.entries;
    let term = |i: usize, j: usize, k: usize| {
        let mut acc = p[i][j].sub(&p[i][j]);
        for l in 0..m {
            acc = acc.add(&p[i][l].mul(&p[j][k].derivative(l)));
        }
        acc
    };
    let mut residuals = vec![];
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let r = term(i, j, k).add(&term(j, k, i)).add(&term(k, i, j));
                residuals.push(((i, j, k), r));
            }
        }
    }
    JacobiReport { residuals }
}
