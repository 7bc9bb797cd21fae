//! The Poisson map `π_φ: ⟨φ⟩^⊥ → Ext¹(V, O)/⟨φ⟩` at one point.

use crate::cech::{deformation_is_trivial, end_algebra, reduce_mod, Setting};
use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix, Span};
use crate::ring::Field;
use crate::specseq::{D2Mode, ExtensionSS};

#[derive(Clone, Debug)]
pub struct PoissonPoint<F: Field> {
    pub phi: Vec<F>,
    /// Coordinate of `φ` used to normalize modulo `⟨φ⟩`.
    pub chart: usize,
    /// Basis of `⟨φ⟩^⊥ ⊂ H⁰(V)`.
    pub domain: Vec<Vec<F>>,
    /// `π_φ` of each domain vector in `Ext¹` coordinates, zero at `chart`.
    pub images: Vec<Vec<F>>,
    /// `B[k][l] = ⟨π_φ(s_k), s_l⟩`.
    pub skew: Matrix<F>,
    pub rank: usize,
    /// `Ker π_φ` in `H⁰(V)` coordinates.
    pub kernel: Vec<Vec<F>>,
    /// Unit vectors of `Ext¹` completing `Im π_φ + ⟨φ⟩`.
    pub coker: Vec<Vec<F>>,
}

impl<F: Field> PoissonPoint<F> {
    /// Matrix of `π_φ` with rows the `Ext¹` coordinates other than `chart`.
    pub fn matrix(&self) -> Matrix<F> {
        let z = self.phi[0].zero_like();
        let rows: Vec<usize> = (0..self.phi.len()).filter(|&i| i != self.chart).collect();
        let cols: Vec<Vec<F>> = self
            .images
            .iter()
            .map(|v| rows.iter().map(|&i| v[i].clone()).collect())
            .collect();
        Matrix::from_cols(&cols, rows.len(), &z)
    }

    /// Whether the tangent vector `v` (an `Ext¹` class mod `φ`) lies in `Im π_φ`.
    pub fn in_image(&self, v: &[F]) -> bool {
        let r = reduce_mod(v, &self.phi, self.chart);
        Span::new(self.phi.len(), self.images.clone()).contains(&r)
    }
}

/// `π_φ` with `d₂` computed in the given mode.
pub fn fo_matrix_with<F: Field>(st: &Setting<F>, phi: &[F], mode: D2Mode) -> Result<PoissonPoint<F>> {
    let ss = ExtensionSS::new(st, phi, None, false)?;
    point_from_ss(&ss, mode)
}

pub fn fo_matrix<F: Field>(st: &Setting<F>, phi: &[F]) -> Result<PoissonPoint<F>> {
    fo_matrix_with(st, phi, D2Mode::Zigzag)
}

pub fn point_from_ss<F: Field>(ss: &ExtensionSS<'_, F>, mode: D2Mode) -> Result<PoissonPoint<F>> {
    let st = ss.st;
    let n = ss.n();
    let z = st.zero();
    let domain = ss.perp_basis();
    let images = domain
        .iter()
        .map(|s| ss.d2(s, mode))
        .collect::<Result<Vec<_>>>()?;
    let m = domain.len();
    let mut skew = Matrix::zeros(m, m, &z);
    for k in 0..m {
        let gi = st.ext.gram.mul_vec(&images[k]);
        for l in 0..m {
            skew.set(k, l, dot(&domain[l], &gi, &z));
        }
    }
    let img = Span::new(n, images.clone());
    let rank = img.dim();
    let kernel_coeffs = Matrix::from_cols(&images, n, &z).kernel();
    let kernel = kernel_coeffs
        .iter()
        .map(|c| {
            let mut v = vec![z.clone(); n];
            for (ck, s) in c.iter().zip(&domain) {
                for (vi, si) in v.iter_mut().zip(s) {
                    *vi = vi.clone() + ck.clone() * si.clone();
                }
            }
            v
        })
        .collect();
    let coker = quotient_span(&images, &ss.phi)
        .free_columns()
        .into_iter()
        .map(|i| {
            let mut v = vec![z.clone(); n];
            v[i] = z.one_like();
            v
        })
        .collect();
    Ok(PoissonPoint {
        phi: ss.phi.clone(),
        chart: ss.chart,
        domain,
        images,
        skew,
        rank,
        kernel,
        coker,
    })
}

/// `Im π_φ + ⟨φ⟩`; its free columns index the cokernel basis.
pub fn quotient_span<F: Field>(images: &[Vec<F>], phi: &[F]) -> Span<F> {
    let mut s = Span::new(phi.len(), images.to_vec());
    s.push(phi.to_vec());
    s
}

/// `dim End(E_φ)`.
pub fn end_dim<F: Field>(st: &Setting<F>, phi: &[F]) -> Result<usize> {
    Ok(end_algebra(&st.ctx, &st.extension(phi, None), st.budget)?.dim())
}

/// Rank of `π_φ`, checked against `n − dim End(E_φ)`.
pub fn fo_rank<F: Field>(st: &Setting<F>, phi: &[F]) -> Result<usize> {
    let pt = fo_matrix(st, phi)?;
    let e = end_dim(st, phi)?;
    if pt.rank + e != st.n() as usize {
        return Err(Error::Falsified(format!(
            "rank {} with dim End = {e} at n = {}",
            pt.rank,
            st.n()
        )));
    }
    Ok(pt.rank)
}

/// Whether the deformation `φ + ε·v` leaves `E_φ` unchanged to first order.
pub fn leaf_test<F: Field>(st: &Setting<F>, phi: &[F], v: &[F]) -> Result<bool> {
    let b = st.extension(phi, Some(v));
    deformation_is_trivial(&st.ctx, &b, st.budget)
}
