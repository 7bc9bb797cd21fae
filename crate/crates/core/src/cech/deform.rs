//! First-order deformations `g + ε·h` of presented bundles.
//!
//! The deformation class in the `U₁` frame is `T = h·g⁻¹`; deforming by a
//! cocycle `T` means taking `h = T·g`. The rules below compare the classes of
//! tensor products, duals and endomorphism bundles, computed from the
//! transition matrices, with the expected cocycles built from `T` alone.

use super::bundle::{mat_add, mat_eq, mat_mul, mat_neg, mat_transpose, Bundle, FracMatrix};
use super::frac::{Ctx, Frac};
use crate::error::{Error, Result};
use crate::ring::Field;

/// `g + ε·T·g`.
pub fn deform_bundle<F: Field>(ctx: &Ctx<F>, b: &Bundle<F>, t: &FracMatrix<F>) -> Bundle<F> {
    let mut out = b.slice0();
    let h = mat_mul(ctx, t, &b.g);
    let hinv = mat_neg(&mat_mul(ctx, &b.g_inv, t));
    out.g_eps = Some((h, hinv));
    out
}

/// `T = h·g⁻¹`, or zero for an undeformed bundle.
pub fn deformation_class<F: Field>(ctx: &Ctx<F>, b: &Bundle<F>) -> FracMatrix<F> {
    match &b.g_eps {
        Some((h, _)) => mat_mul(ctx, h, &b.g_inv),
        None => zeros(b.rank, b.rank, &ctx.zero()),
    }
}

fn zeros<F: Field>(r: usize, c: usize, z: &F) -> FracMatrix<F> {
    vec![vec![Frac::zero(z); c]; r]
}

fn identity<F: Field>(r: usize, z: &F) -> FracMatrix<F> {
    let mut m = zeros(r, r, z);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Frac::constant(z.one_like());
    }
    m
}

/// Kronecker product with row index `i·rows(b) + k`.
pub fn kron<F: Field>(ctx: &Ctx<F>, a: &FracMatrix<F>, b: &FracMatrix<F>) -> FracMatrix<F> {
    let (ra, ca, rb, cb) = (a.len(), a[0].len(), b.len(), b[0].len());
    let mut m = zeros(ra * rb, ca * cb, &ctx.zero());
    for i in 0..ra {
        for j in 0..ca {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    m[i * rb + k][j * cb + l] = ctx.mul(&a[i][j], &b[k][l]);
                }
            }
        }
    }
    m
}

/// The operator `Y ↦ [T, Y]` on `r × r` matrices in the coordinates `(i, j) ↦ i·r + j`.
pub fn ad_matrix<F: Field>(ctx: &Ctx<F>, t: &FracMatrix<F>) -> FracMatrix<F> {
    let r = t.len();
    let id = identity(r, &ctx.zero());
    // vec(TY) = (T ⊗ I)·vec(Y), vec(YT) = (I ⊗ Tᵀ)·vec(Y) for row-major vec
    mat_add(
        ctx,
        &kron(ctx, t, &id),
        &mat_neg(&kron(ctx, &id, &mat_transpose(t))),
    )
}

fn expect(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Falsified(format!("{what} rule fails at cocycle level")))
    }
}

/// The class of `X̃ ⊗ Ỹ` is `T_X ⊗ 1 + 1 ⊗ T_Y`.
pub fn check_tensor_rule<F: Field>(ctx: &Ctx<F>, x: &Bundle<F>, y: &Bundle<F>) -> Result<()> {
    let z = ctx.zero();
    let t = deformation_class(ctx, &Bundle::tensor(ctx, x, y));
    let expected = mat_add(
        ctx,
        &kron(ctx, &deformation_class(ctx, x), &identity(y.rank, &z)),
        &kron(ctx, &identity(x.rank, &z), &deformation_class(ctx, y)),
    );
    expect(mat_eq(ctx, &t, &expected), "tensor")
}

/// The class of `X̃^∨` is `−T_Xᵀ`.
pub fn check_dual_rule<F: Field>(ctx: &Ctx<F>, x: &Bundle<F>) -> Result<()> {
    let t = deformation_class(ctx, &Bundle::dual(ctx, x));
    let expected = mat_neg(&mat_transpose(&deformation_class(ctx, x)));
    expect(mat_eq(ctx, &t, &expected), "dual")
}

/// The class of `End(X̃)` is `[T_X, −]`.
pub fn check_end_rule<F: Field>(ctx: &Ctx<F>, x: &Bundle<F>) -> Result<()> {
    let t = deformation_class(ctx, &Bundle::hom(ctx, x, x));
    let expected = ad_matrix(ctx, &deformation_class(ctx, x));
    expect(mat_eq(ctx, &t, &expected), "endomorphism")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{shipped_fixtures, CoordPoly};
    use crate::ring::Fp;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_frac(ctx: &Ctx<Fp>, rng: &mut ChaCha8Rng) -> Frac<Fp> {
        let z = ctx.zero();
        let d = [0usize, 2, 3, 4, 5, 7][rng.gen_range(0..6)];
        Frac::new(CoordPoly::monomial(d, &z).scale(&z.random(rng)), rng.gen_range(0..3))
    }

    fn random_matrix(ctx: &Ctx<Fp>, r: usize, rng: &mut ChaCha8Rng) -> FracMatrix<Fp> {
        (0..r).map(|_| (0..r).map(|_| random_frac(ctx, rng)).collect()).collect()
    }

    #[test]
    fn deformation_rules_hold_for_lines_and_extensions() {
        let fx = &shipped_fixtures()[1];
        let st = crate::cech::Setting::from_fixture(fx).unwrap();
        let ctx = &st.ctx;
        let z = st.zero();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..4 {
            let l1 = Bundle::line(ctx, rng.gen_range(-3..4), 0);
            let l2 = Bundle::line(ctx, rng.gen_range(-3..4), 0);
            let x = deform_bundle(ctx, &l1, &random_matrix(ctx, 1, &mut rng));
            let y = deform_bundle(ctx, &l2, &random_matrix(ctx, 1, &mut rng));
            check_tensor_rule(ctx, &x, &y).unwrap();
            check_dual_rule(ctx, &x).unwrap();
            check_end_rule(ctx, &x).unwrap();
            let phi: Vec<Fp> = (0..3).map(|_| z.random(&mut rng)).collect();
            let e = deform_bundle(ctx, &st.extension(&phi, None), &random_matrix(ctx, 2, &mut rng));
            check_tensor_rule(ctx, &e, &y).unwrap();
            check_dual_rule(ctx, &e).unwrap();
            check_end_rule(ctx, &e).unwrap();
        }
        let e = st.extension(&[z.from_int(1), z, z], None);
        let zero = deform_bundle(ctx, &e, &vec![vec![Frac::zero(&z); 2]; 2]);
        assert!(deformation_is_trivial_zero(ctx, &zero));
    }

    fn deformation_is_trivial_zero(ctx: &Ctx<Fp>, b: &Bundle<Fp>) -> bool {
        crate::cech::deformation_is_trivial(ctx, b, crate::cech::default_budget(ctx.n())).unwrap()
    }
}
