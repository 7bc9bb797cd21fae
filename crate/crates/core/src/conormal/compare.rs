//! The conormal Lie bracket on `Ker π_φ` and its comparison with the
//! commutator bracket of `End(E_φ)₀`.
//!
//! With a kernel basis `α_i` and tangent vectors `v_k` dual to it,
//! `[α_i, α_j] = Σ_k ⟨α_j, ∂_{v_k}π(α_i)⟩ α_k`. The kernel is identified with
//! `End(E_φ)₀` by sending `α` to the traceless endomorphism whose
//! `O → E → E → V` component is `α`.

use serde_json::{json, Value};

use super::derivative::{derivative_form, intrinsic_derivative};
use super::lie::{end0_structure_constants, LieStructure};
use crate::cech::{
    deformation_class, end_algebra, mat_add, mat_apply, mat_mul, mat_neg, Frac, FracMatrix, Setting,
};
use crate::error::{Error, Result};
use crate::fo::{fo_matrix, PoissonPoint};
use crate::linalg::{is_zero_vec, Matrix};
use crate::ring::Field;
use crate::specseq::ExtensionSS;

/// Conormal bracket at `pt`, after checking that `∂_vπ` vanishes along `Im π_φ`.
pub fn conormal_bracket<F: Field>(st: &Setting<F>, pt: &PoissonPoint<F>) -> Result<LieStructure<F>> {
    let z = st.zero();
    let m = pt.kernel.len();
    let mut out = LieStructure::zero(m, &z, "conormal");
    if m == 0 {
        return Ok(out);
    }
    for im in &pt.images {
        if !intrinsic_derivative(st, pt, im)?.is_zero() {
            return Err(Error::Falsified(
                "intrinsic derivative is nonzero along the image of π".into(),
            ));
        }
    }
    let units: Vec<Vec<F>> = pt.coker.clone();
    // K[i][l] = ⟨α_i, w_l⟩; the dual tangent basis is v_k = Σ_l w_l (K⁻¹)_{lk}
    let mut k = Matrix::zeros(m, units.len(), &z);
    for (i, a) in pt.kernel.iter().enumerate() {
        for (l, w) in units.iter().enumerate() {
            k.set(i, l, st.ext.pair(a, w));
        }
    }
    let kinv = k
        .inverse()
        .ok_or_else(|| Error::Falsified("cokernel does not pair perfectly with the kernel".into()))?;
    let forms = units
        .iter()
        .map(|w| Ok(derivative_form(st, pt, &intrinsic_derivative(st, pt, w)?)))
        .collect::<Result<Vec<_>>>()?;
    for i in 0..m {
        for j in 0..m {
            for kk in 0..m {
                let mut acc = z.clone();
                for (l, f) in forms.iter().enumerate() {
                    acc = acc + kinv.get(l, kk).clone() * f.get(i, j).clone();
                }
                out.c[i][j][kk] = acc;
            }
        }
    }
    if !out.is_antisymmetric() {
        return Err(Error::Falsified("conormal bracket is not antisymmetric".into()));
    }
    Ok(out)
}

fn comb<F: Field>(st: &Setting<F>, coeffs: &[F], mats: &[FracMatrix<F>]) -> FracMatrix<F> {
    let z = st.zero();
    let r = mats[0].len();
    let mut acc = vec![vec![Frac::zero(&z); r]; r];
    for (c, m) in coeffs.iter().zip(mats) {
        if c.is_zero() {
            continue;
        }
        let scaled: FracMatrix<F> = m.iter().map(|row| row.iter().map(|x| x.scale(c)).collect()).collect();
        acc = mat_add(&st.ctx, &acc, &scaled);
    }
    acc
}

/// `H⁰(V)` coordinates of the `O → V` component of an endomorphism of `E_φ`.
pub fn quotient_component<F: Field>(st: &Setting<F>, m: &FracMatrix<F>) -> Result<Vec<F>> {
    st.ctx.coords(&m[1][0], 0, st.n() as usize)
}

/// The traceless endomorphisms `ι(α_i)` for the kernel basis of `pt`.
pub fn kernel_to_end0<F: Field>(st: &Setting<F>, pt: &PoissonPoint<F>) -> Result<Vec<FracMatrix<F>>> {
    let e = st.extension(&pt.phi, None);
    let end = end_algebra(&st.ctx, &e, st.budget)?;
    if end.traceless.len() != pt.kernel.len() {
        return Err(Error::Falsified(format!(
            "dim Ker π = {} but dim End₀ = {}",
            pt.kernel.len(),
            end.traceless.len()
        )));
    }
    if end.traceless.is_empty() {
        return Ok(vec![]);
    }
    let n = st.n() as usize;
    let cols = end
        .traceless
        .iter()
        .map(|m| quotient_component(st, m))
        .collect::<Result<Vec<_>>>()?;
    let p = Matrix::from_cols(&cols, n, &st.zero());
    pt.kernel
        .iter()
        .map(|a| {
            let c = p.solve(a).ok_or_else(|| {
                Error::Falsified("kernel vector is not the quotient part of an endomorphism".into())
            })?;
            Ok(comb(st, &c, &end.traceless))
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Comparison<F: Field> {
    pub phi: Vec<F>,
    pub ker_dim: usize,
    pub conormal: LieStructure<F>,
    pub end0: LieStructure<F>,
    /// `conormal = λ·end0`.
    pub scalar: Option<F>,
}

impl<F: Field> Comparison<F> {
    pub fn matched(&self) -> bool {
        self.scalar.is_some()
    }

    pub fn both_lie(&self) -> bool {
        [&self.conormal, &self.end0]
            .iter()
            .all(|l| l.is_antisymmetric() && l.satisfies_jacobi())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "phi": self.phi.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "ker_dim": self.ker_dim,
            "structure_constants_conormal": self.conormal.to_json(),
            "structure_constants_end0": self.end0.to_json(),
            "matching_scalar": self.scalar.as_ref().map(|x| x.to_json()),
            "verdict": if self.matched() && self.both_lie() { "match" } else { "mismatch" },
        })
    }
}

/// Conormal and commutator constants in matching bases at `φ`.
pub fn compare<F: Field>(st: &Setting<F>, phi: &[F]) -> Result<Comparison<F>> {
    let pt = fo_matrix(st, phi)?;
    let conormal = conormal_bracket(st, &pt)?;
    let iota = kernel_to_end0(st, &pt)?;
    let end0 = end0_structure_constants(&st.ctx, &iota)?;
    let scalar = conormal.matching_scalar(&end0);
    Ok(Comparison {
        phi: phi.to_vec(),
        ker_dim: pt.kernel.len(),
        conormal,
        end0,
        scalar,
    })
}

/// On `H⁰(End(E_φ)₀)`, the first-order part of the differential of the
/// complex over `k[ε]` agrees in `H¹` with `X ↦ [T, X]`, where `T` is the
/// deformation class of `E_{φ+εv}`. Returns the number of sections checked.
pub fn lemma_check<F: Field>(st: &Setting<F>, phi: &[F], v: &[F]) -> Result<usize> {
    let ctx = &st.ctx;
    let ss = ExtensionSS::new(st, phi, Some(v), false)?;
    let cx = &ss.cx;
    let de = cx.d_eps.as_ref().expect("varied bundle has d_eps");
    let t = deformation_class(ctx, &ss.extension);
    let coh = cx.cohomology();
    for x in &coh.h0 {
        let (s0, _) = cx.section(x);
        let s1 = mat_apply(ctx, &cx.bundle.g, &s0);
        // X in the U₁ frame of E; h, e, f are components 0, 1, 2
        let xm = vec![
            vec![s1[0].clone(), s1[1].clone()],
            vec![s1[2].clone(), s1[0].neg()],
        ];
        let br = mat_add(ctx, &mat_mul(ctx, &t, &xm), &mat_neg(&mat_mul(ctx, &xm, &t)));
        let direct = cx.cochain_coords(&[br[0][0].clone(), br[0][1].clone(), br[1][0].clone()])?;
        let from_eps = de.mul_vec(x);
        let diff: Vec<F> = direct
            .iter()
            .zip(&from_eps)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        if !is_zero_vec(&coh.classify(&diff)) {
            return Err(Error::Falsified(
                "dual-number differential disagrees with [T, −] on H⁰".into(),
            ));
        }
    }
    Ok(coh.h0.len())
}
