//! The intrinsic derivative `∂_vπ: Ker π_φ → Coker π_φ` from a run of the
//! spectral sequence over `k[ε]` with `φ̃ = φ + ε·v`.
//!
//! A kernel vector `α` is extended to `α + ε·s′ ∈ ⟨φ̃⟩^⊥`, pushed through
//! the zig-zag in the doubled complex, and the resulting class `c₀ + ε·c₁` is
//! normalized modulo `φ̃`. The `ε` part, taken modulo `Im π_φ + ⟨φ⟩`, is
//! `∂_vπ(α)`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fo::{quotient_span, PoissonPoint};
use crate::cech::{reduce_mod, Setting};
use crate::linalg::{dot, is_zero_vec, Matrix};
use crate::ring::Field;
use crate::specseq::{ExtensionSS, SUB_COMP};

#[derive(Clone, Debug)]
pub struct IntrinsicDerivative<F: Field> {
    pub phi: Vec<F>,
    pub v: Vec<F>,
    /// `ε` parts in `Ext¹` coordinates, one per kernel vector, before
    /// reduction modulo the image.
    pub raw: Vec<Vec<F>>,
    /// Columns: kernel basis; rows: cokernel basis.
    pub matrix: Matrix<F>,
}

impl<F: Field> IntrinsicDerivative<F> {
    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .matrix
            .row_vecs()
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| x.to_json()).collect()))
            .collect();
        json!({
            "phi": self.phi.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "v": self.v.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "matrix": rows,
        })
    }
}

fn ext_coords<F: Field>(st: &Setting<F>, block: &[F]) -> Result<Vec<F>> {
    st.ext.coords(&st.ctx.from_coords(block, st.budget.k1))
}

/// `∂_vπ` at the point described by `pt`.
pub fn intrinsic_derivative<F: Field>(
    st: &Setting<F>,
    pt: &PoissonPoint<F>,
    v: &[F],
) -> Result<IntrinsicDerivative<F>> {
    let phi = &pt.phi;
    let n = phi.len();
    let z = st.zero();
    let j = pt.chart;
    let ss = ExtensionSS::new(st, phi, Some(v), false)?;
    let dbl = ss.doubled()?;
    let c1 = ss.cx.c1_dim();
    let blk = ss.cx.block(SUB_COMP);
    let gphi = st.ext.gram.mul_vec(phi);
    let t = gphi
        .iter()
        .position(|x| !x.is_zero())
        .ok_or_else(|| Error::Precondition("φ pairs to zero with every section".into()))?;
    let quot = quotient_span(&pt.images, phi);
    let cols = quot.free_columns();
    let inv_j = phi[j].inv().expect("chart coordinate is nonzero");
    let mut raw = vec![];
    let mut out = vec![];
    for alpha in &pt.kernel {
        // α + ε·s′ with ⟨s′, φ⟩ = −⟨α, v⟩
        let mut s1 = vec![z.clone(); n];
        s1[t] = -st.ext.pair(alpha, v) * gphi[t].inv().expect("nonzero");
        let x = [ss.section_vector(alpha)?, ss.section_vector(&s1)?].concat();
        let y = dbl.zigzag(&x, -1)?;
        let c0 = ext_coords(st, &y[blk.clone()])?;
        let ce = ext_coords(st, &y[c1 + blk.start..c1 + blk.end])?;
        let mu0 = c0[j].clone() * inv_j.clone();
        let rest: Vec<F> = c0
            .iter()
            .zip(phi)
            .map(|(a, b)| a.clone() - mu0.clone() * b.clone())
            .collect();
        if !is_zero_vec(&rest) {
            return Err(Error::Falsified(
                "ε = 0 slice of the dual-number run gives a kernel vector a nonzero image".into(),
            ));
        }
        let mu1 = (ce[j].clone() - mu0.clone() * v[j].clone()) * inv_j.clone();
        let eps: Vec<F> = (0..n)
            .map(|i| ce[i].clone() - mu0.clone() * v[i].clone() - mu1.clone() * phi[i].clone())
            .collect();
        let red = quot.reduce(&eps);
        out.push(cols.iter().map(|&c| red[c].clone()).collect::<Vec<_>>());
        raw.push(eps);
    }
    Ok(IntrinsicDerivative {
        phi: phi.clone(),
        v: v.to_vec(),
        raw,
        matrix: Matrix::from_cols(&out, cols.len(), &z),
    })
}

/// Whether the `ε = 0` part of `d₂` over `k[ε]` equals the base-field `d₂` on
/// every vector of `⟨φ⟩^⊥`, both normalized modulo `φ`.
pub fn specialization_check<F: Field>(st: &Setting<F>, pt: &PoissonPoint<F>, v: &[F]) -> Result<bool> {
    let n = pt.phi.len();
    let z = st.zero();
    let ss = ExtensionSS::new(st, &pt.phi, Some(v), false)?;
    let dbl = ss.doubled()?;
    let blk = ss.cx.block(SUB_COMP);
    let gphi = st.ext.gram.mul_vec(&pt.phi);
    let t = gphi.iter().position(|x| !x.is_zero()).expect("φ pairs nontrivially");
    for (s, img) in pt.domain.iter().zip(&pt.images) {
        let mut s1 = vec![z.clone(); n];
        s1[t] = -st.ext.pair(s, v) * gphi[t].inv().expect("nonzero");
        let x = [ss.section_vector(s)?, ss.section_vector(&s1)?].concat();
        let y = dbl.zigzag(&x, -1)?;
        let c0 = reduce_mod(&ext_coords(st, &y[blk.clone()])?, &pt.phi, pt.chart);
        if c0 != *img {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `⟨α_j, ∂_vπ(α_i)⟩` for kernel vectors `α`.
pub fn derivative_form<F: Field>(st: &Setting<F>, pt: &PoissonPoint<F>, d: &IntrinsicDerivative<F>) -> Matrix<F> {
    let z = st.zero();
    let m = pt.kernel.len();
    let mut b = Matrix::zeros(m, m, &z);
    for (i, e) in d.raw.iter().enumerate() {
        let ge = st.ext.gram.mul_vec(e);
        for (k, a) in pt.kernel.iter().enumerate() {
            b.set(i, k, dot(a, &ge, &z));
        }
    }
    b
}
