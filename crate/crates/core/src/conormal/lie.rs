//! Finite-dimensional Lie algebras by structure constants.

use serde_json::{json, Value};

use crate::cech::{mat_add, mat_mul, mat_neg, matrix_coords, matrix_degree, Ctx, FracMatrix};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieStructure<F: Field> {
    /// `c[i][j][k]` with `[x_i, x_j] = Σ_k c[i][j][k] x_k`.
    pub c: Vec<Vec<Vec<F>>>,
    pub source: String,
    zero: F,
}

impl<F: Field> LieStructure<F> {
    pub fn zero(dim: usize, sample: &F, source: &str) -> Self {
        LieStructure {
            c: vec![vec![vec![sample.zero_like(); dim]; dim]; dim],
            source: source.into(),
            zero: sample.zero_like(),
        }
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    fn entries(&self) -> impl Iterator<Item = &F> {
        self.c.iter().flatten().flatten()
    }

    pub fn is_abelian(&self) -> bool {
        self.entries().all(|x| x.is_zero())
    }

    pub fn is_antisymmetric(&self) -> bool {
        let m = self.dim();
        (0..m).all(|i| {
            (0..m).all(|j| (0..m).all(|k| (self.c[i][j][k].clone() + self.c[j][i][k].clone()).is_zero()))
        })
    }

    pub fn satisfies_jacobi(&self) -> bool {
        let m = self.dim();
        let z = &self.zero;
        let c = &self.c;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        let mut acc = z.clone();
                        for t in 0..m {
                            acc = acc
                                + c[i][j][t].clone() * c[t][k][l].clone()
                                + c[j][k][t].clone() * c[t][i][l].clone()
                                + c[k][i][t].clone() * c[t][j][l].clone();
                        }
                        if !acc.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `λ ≠ 0` with `self = λ·other`; `1` when both vanish.
    pub fn matching_scalar(&self, other: &Self) -> Option<F> {
        if self.dim() != other.dim() {
            return None;
        }
        let pair = self.entries().zip(other.entries()).find(|(_, b)| !b.is_zero());
        let lambda = match pair {
            None => return self.is_abelian().then(|| self.zero.one_like()),
            Some((a, b)) => a.clone() * b.inv()?,
        };
        if lambda.is_zero() {
            return None;
        }
        self.entries()
            .zip(other.entries())
            .all(|(a, b)| *a == lambda.clone() * b.clone())
            .then_some(lambda)
    }

    pub fn to_json(&self) -> Value {
        let c: Vec<Value> = self
            .c
            .iter()
            .map(|r| {
                Value::Array(
                    r.iter()
                        .map(|v| Value::Array(v.iter().map(|x| x.to_json()).collect()))
                        .collect(),
                )
            })
            .collect();
        json!({"dim": self.dim(), "source": self.source, "constants": c})
    }
}

/// Commutator structure constants of the matrices `basis`, which must span a
/// subalgebra.
pub fn end0_structure_constants<F: Field>(ctx: &Ctx<F>, basis: &[FracMatrix<F>]) -> Result<LieStructure<F>> {
    let z = ctx.zero();
    let m = basis.len();
    let mut out = LieStructure::zero(m, &z, "end0");
    if m == 0 {
        return Ok(out);
    }
    let mut brackets = vec![];
    for a in basis {
        for b in basis {
            brackets.push(mat_add(ctx, &mat_mul(ctx, a, b), &mat_neg(&mat_mul(ctx, b, a))));
        }
    }
    let cap = basis.iter().chain(&brackets).map(matrix_degree).max().unwrap_or(0);
    let cols = basis
        .iter()
        .map(|x| matrix_coords(ctx, x, cap))
        .collect::<Result<Vec<_>>>()?;
    let rows = cols[0].len();
    let mat = Matrix::from_cols(&cols, rows, &z);
    for i in 0..m {
        for j in 0..m {
            let v = matrix_coords(ctx, &brackets[i * m + j], cap)?;
            out.c[i][j] = mat
                .solve(&v)
                .ok_or_else(|| Error::Falsified("commutator leaves the span of the basis".into()))?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PrimeField;

    /// `sl₂` in the basis `(h, e, f)`: `[h, e] = 2e`, `[h, f] = −2f`, `[e, f] = h`.
    fn sl2(f: &PrimeField) -> LieStructure<crate::ring::Fp> {
        let mut l = LieStructure::zero(3, &f.zero(), "sl2");
        l.c[0][1][1] = f.elem(2);
        l.c[1][0][1] = f.elem(-2);
        l.c[0][2][2] = f.elem(-2);
        l.c[2][0][2] = f.elem(2);
        l.c[1][2][0] = f.elem(1);
        l.c[2][1][0] = f.elem(-1);
        l
    }

    #[test]
    fn sl2_is_a_lie_algebra_and_scales() {
        let f = PrimeField::new(13).unwrap();
        let l = sl2(&f);
        assert!(l.is_antisymmetric() && l.satisfies_jacobi() && !l.is_abelian());
        let mut m = l.clone();
        for x in m.c.iter_mut().flatten().flatten() {
            *x = x.clone() * f.elem(5);
        }
        assert_eq!(m.matching_scalar(&l), Some(f.elem(5)));
        let mut broken = l.clone();
        broken.c[1][2][1] = f.elem(1);
        broken.c[2][1][1] = f.elem(-1);
        assert!(!broken.satisfies_jacobi());
        assert_eq!(broken.matching_scalar(&l), None);
    }
}
