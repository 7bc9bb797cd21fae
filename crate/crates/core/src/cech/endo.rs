//! Endomorphisms of a presented bundle as pairs of chart matrices.
//!
//! An endomorphism is `(M₀, M₁)` with `M₀` regular on `U₀` in the `U₀`
//! frame, `M₁` regular on `U₁` in the `U₁` frame and `M₁·g = g·M₀`. The same
//! linear map `(M₀, M₁) ↦ M₁·g − g·M₀` decides whether a first-order
//! deformation `g + ε·h` is trivial: that happens iff `M₁·g − g·M₀ = −h` is
//! solvable.

use super::bundle::{mat_add, mat_mul, mat_neg, Bundle, FracMatrix};
use super::complex::Budget;
use super::frac::{Ctx, Frac};
use crate::curve::{mono_dim, CoordPoly};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::Field;

#[derive(Clone, Debug)]
enum Unknown {
    /// Entry `(i, j)` of `M₀` is `m_deg`.
    U0 { i: usize, j: usize, deg: usize },
    /// Entry `(i, j)` of `M₁` is `m_deg / w^K`.
    U1 { i: usize, j: usize, deg: usize },
}

/// The linear system `(M₀, M₁) ↦ M₁·g − g·M₀` at a fixed truncation.
#[derive(Clone, Debug)]
pub struct ChartSystem<F: Field> {
    ctx: Ctx<F>,
    rank: usize,
    k: u32,
    /// Denominator exponent and pole-order cap of the equations.
    kk: u32,
    cap: usize,
    unknowns: Vec<Unknown>,
    pub matrix: Matrix<F>,
}

impl<F: Field> ChartSystem<F> {
    /// Requires a bundle without conditions at `P₀`.
    pub fn new(ctx: &Ctx<F>, b: &Bundle<F>, budget: Budget) -> Result<Self> {
        if b.p0_bound.iter().any(|&c| c != 0) {
            return Err(Error::Precondition(
                "chart system needs bundles trivial near P0".into(),
            ));
        }
        let n = ctx.n() as usize;
        let r = b.rank;
        let k = budget.k1;
        let d0 = budget.n_extra;
        let mut unknowns = vec![];
        for i in 0..r {
            for j in 0..r {
                for deg in (0..=d0).filter(|&d| d != 1) {
                    unknowns.push(Unknown::U0 { i, j, deg });
                }
                let top = (n * k as usize) as i64 - (b.inf_bound[i] - b.inf_bound[j]);
                for deg in (0..=top.max(-1)).map(|d| d as usize).filter(|&d| d != 1) {
                    unknowns.push(Unknown::U1 { i, j, deg });
                }
            }
        }
        let kg = b.max_k();
        let gdeg = b
            .g
            .iter()
            .flatten()
            .filter_map(|q| q.num.degree())
            .max()
            .unwrap_or(0);
        let kk = k + kg;
        let cap = n * kk as usize + d0 + gdeg + 2 * n + 4;
        let mut sys = ChartSystem {
            ctx: ctx.clone(),
            rank: r,
            k,
            kk,
            cap,
            unknowns,
            matrix: Matrix::zeros(0, 0, &ctx.zero()),
        };
        let z = ctx.zero();
        let cols = sys
            .unknowns
            .iter()
            .map(|u| {
                let (m0, m1) = sys.unit(u);
                let lhs = mat_add(ctx, &mat_mul(ctx, &m1, &b.g), &mat_neg(&mat_mul(ctx, &b.g, &m0)));
                sys.flatten(&lhs, kk)
            })
            .collect::<Result<Vec<_>>>()?;
        let rows = r * r * mono_dim(cap);
        sys.matrix = Matrix::from_cols(&cols, rows, &z);
        Ok(sys)
    }

    fn unit(&self, u: &Unknown) -> (FracMatrix<F>, FracMatrix<F>) {
        let z = self.ctx.zero();
        let mut m0 = vec![vec![Frac::zero(&z); self.rank]; self.rank];
        let mut m1 = m0.clone();
        match *u {
            Unknown::U0 { i, j, deg } => m0[i][j] = Frac::poly(CoordPoly::monomial(deg, &z)),
            Unknown::U1 { i, j, deg } => m1[i][j] = Frac::new(CoordPoly::monomial(deg, &z), self.k),
        }
        (m0, m1)
    }

    fn flatten(&self, m: &FracMatrix<F>, k: u32) -> Result<Vec<F>> {
        let mut out = vec![];
        for row in m {
            for x in row {
                out.extend(self.ctx.coords(x, k, self.cap)?);
            }
        }
        Ok(out)
    }

    fn assemble(&self, v: &[F]) -> (FracMatrix<F>, FracMatrix<F>) {
        let z = self.ctx.zero();
        let mut m0 = vec![vec![Frac::zero(&z); self.rank]; self.rank];
        let mut m1 = m0.clone();
        for (c, u) in v.iter().zip(&self.unknowns) {
            if c.is_zero() {
                continue;
            }
            let (a, b) = self.unit(u);
            let (a, b) = (scale(&a, c), scale(&b, c));
            m0 = mat_add(&self.ctx, &m0, &a);
            m1 = mat_add(&self.ctx, &m1, &b);
        }
        (m0, m1)
    }

    /// Basis of the endomorphism algebra as `(M₀, M₁)` pairs.
    pub fn kernel(&self) -> Vec<(FracMatrix<F>, FracMatrix<F>)> {
        self.matrix.kernel().iter().map(|v| self.assemble(v)).collect()
    }

    /// A solution of `M₁·g − g·M₀ = rhs`, if any.
    pub fn solve(&self, rhs: &FracMatrix<F>) -> Result<Option<(FracMatrix<F>, FracMatrix<F>)>> {
        let target = self.flatten(rhs, self.kk)?;
        Ok(self.matrix.solve(&target).map(|v| self.assemble(&v)))
    }
}

fn scale<F: Field>(m: &FracMatrix<F>, c: &F) -> FracMatrix<F> {
    m.iter().map(|r| r.iter().map(|x| x.scale(c)).collect()).collect()
}

/// `End(E)` with a basis of its traceless part, as `U₀` matrices.
#[derive(Clone, Debug)]
pub struct EndAlgebra<F: Field> {
    pub basis: Vec<(FracMatrix<F>, FracMatrix<F>)>,
    pub traceless: Vec<FracMatrix<F>>,
}

impl<F: Field> EndAlgebra<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Flattened coefficient vector of a polynomial matrix.
pub fn matrix_coords<F: Field>(ctx: &Ctx<F>, m: &FracMatrix<F>, cap: usize) -> Result<Vec<F>> {
    let mut out = vec![];
    for row in m {
        for x in row {
            out.extend(ctx.coords(x, 0, cap)?);
        }
    }
    Ok(out)
}

/// Largest pole order among the entries of a polynomial matrix.
pub fn matrix_degree<F: Field>(m: &FracMatrix<F>) -> usize {
    m.iter().flatten().filter_map(|x| x.num.degree()).max().unwrap_or(0)
}

/// Endomorphisms of `b` with a dimension cross-check at the bumped budget.
pub fn end_algebra<F: Field>(ctx: &Ctx<F>, b: &Bundle<F>, budget: Budget) -> Result<EndAlgebra<F>> {
    let b = b.slice0();
    let basis = ChartSystem::new(ctx, &b, budget)?.kernel();
    let again = ChartSystem::new(ctx, &b, budget.bumped())?.matrix;
    let dim_again = again.cols() - again.rank();
    if dim_again != basis.len() {
        return Err(Error::Budget(format!(
            "dim End changed from {} to {dim_again} under a larger budget",
            basis.len()
        )));
    }
    let z = ctx.zero();
    let half = z.from_int(2).inv().expect("characteristic is not 2");
    let r = b.rank;
    let mut projected = vec![];
    for (m0, _) in &basis {
        let mut tr = Frac::zero(&z);
        for (i, row) in m0.iter().enumerate() {
            tr = ctx.add(&tr, &row[i]);
        }
        if tr.num.degree().unwrap_or(0) > 0 {
            return Err(Error::Falsified("trace of an endomorphism is not constant".into()));
        }
        let t = tr.num.coeff(0) * half.clone();
        let mut m = m0.clone();
        for (i, row) in m.iter_mut().enumerate().take(r) {
            row[i] = ctx.sub(&row[i], &Frac::constant(t.clone()));
        }
        projected.push(m);
    }
    let cap = projected.iter().map(matrix_degree).max().unwrap_or(0);
    let mut span = crate::linalg::Span::new(r * r * mono_dim(cap), vec![]);
    let mut traceless = vec![];
    for m in projected {
        if span.push(matrix_coords(ctx, &m, cap)?) {
            traceless.push(m);
        }
    }
    if traceless.len() + 1 != basis.len() {
        return Err(Error::Falsified(
            "traceless endomorphisms do not have codimension one".into(),
        ));
    }
    Ok(EndAlgebra { basis, traceless })
}

/// Whether the deformation `g + ε·g_eps` carried by `b` is trivial.
pub fn deformation_is_trivial<F: Field>(ctx: &Ctx<F>, b: &Bundle<F>, budget: Budget) -> Result<bool> {
    let (h, _) = b
        .g_eps
        .as_ref()
        .ok_or_else(|| Error::Precondition("bundle carries no variation".into()))?;
    let sys = ChartSystem::new(ctx, &b.slice0(), budget)?;
    Ok(sys.solve(&mat_neg(h))?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::Setting;
    use crate::curve::shipped_fixtures;

    #[test]
    fn end_dimensions_generic_and_on_the_curve() {
        let st = Setting::from_fixture(&shipped_fixtures()[1]).unwrap();
        let z = st.zero();
        let phi = vec![z.from_int(3), z.from_int(7), z.from_int(1)];
        let e = st.extension(&phi, None);
        assert_eq!(end_algebra(&st.ctx, &e, st.budget).unwrap().dim(), 1);
        let p = st.ctx.cover().curve.point(z.from_int(0), z.from_int(1)).unwrap();
        let phi = st.ext.point_class(&p).unwrap();
        let e = st.extension(&phi, None);
        let end = end_algebra(&st.ctx, &e, st.budget).unwrap();
        assert_eq!(end.dim(), 3);
        assert_eq!(end.traceless.len(), 2);
    }
}
