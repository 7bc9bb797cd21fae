//! Coordinates on `Ext¹(V, O) = H¹(O(−n·O∞))` and its pairing with `H⁰(V)`.
//!
//! The basis of `Ext¹` is `e_d = m_d / w²` for
//! `d = 2n+1, 2n−1, 2n−2, …, n+1`, paired against the monomials
//! `m_a`, `a = 0, 2, 3, …, n` of `H⁰(V) = L(n·O∞)`. With this ordering the
//! Gram matrix `⟨m_{a_i}, e_{d_j}⟩` is triangular with nonzero diagonal.

use super::bundle::Bundle;
use super::complex::{Budget, CechComplex, Cohomology};
use super::frac::{Ctx, Frac};
use crate::curve::CoordPoly;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::{Field, Point};

/// Pole orders of the monomial basis of `L(n·O∞)`.
pub fn hom_degrees(n: u32) -> Vec<usize> {
    let n = n as usize;
    std::iter::once(0).chain(2..=n).collect()
}

/// Pole orders `d` of the numerators of the `Ext¹` basis `m_d / w²`.
pub fn ext_degrees(n: u32) -> Vec<usize> {
    hom_degrees(n).iter().map(|a| 2 * n as usize + 1 - a).collect()
}

#[derive(Clone, Debug)]
pub struct ExtSpace<F: Field> {
    pub ctx: Ctx<F>,
    pub cx: CechComplex<F>,
    pub coh: Cohomology<F>,
    pub basis: Vec<Frac<F>>,
    /// `gram[i][j] = ⟨m_{a_i}, e_j⟩`.
    pub gram: Matrix<F>,
    /// Inverse of the matrix whose columns are the classified basis cocycles.
    to_basis: Matrix<F>,
}

impl<F: Field> ExtSpace<F> {
    pub fn new(ctx: &Ctx<F>, budget: Budget) -> Result<Self> {
        let n = ctx.n();
        let z = ctx.zero();
        let line = Bundle::line(ctx, -(n as i64), 0);
        let cx = CechComplex::new(ctx, &line, budget)?;
        let coh = cx.cohomology();
        if coh.h1_dim() != n as usize {
            return Err(Error::Budget(format!(
                "h¹(O(−{n}·O∞)) came out as {}",
                coh.h1_dim()
            )));
        }
        let basis: Vec<Frac<F>> = ext_degrees(n)
            .into_iter()
            .map(|d| Frac::new(CoordPoly::monomial(d, &z), 2))
            .collect();
        let mut cols = vec![];
        for e in &basis {
            cols.push(coh.classify(&cx.cochain_coords(std::slice::from_ref(e))?));
        }
        let m = Matrix::from_cols(&cols, n as usize, &z);
        let to_basis = m
            .inverse()
            .ok_or_else(|| Error::Falsified("Ext¹ basis cocycles are dependent".into()))?;
        let homs = hom_degrees(n);
        let mut gram = Matrix::zeros(n as usize, n as usize, &z);
        for (i, &a) in homs.iter().enumerate() {
            let s = Frac::poly(CoordPoly::monomial(a, &z));
            for (j, e) in basis.iter().enumerate() {
                gram.set(i, j, ctx.residue(&ctx.mul(&s, e))?);
            }
        }
        Ok(ExtSpace {
            ctx: ctx.clone(),
            cx,
            coh,
            basis,
            gram,
            to_basis,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The cocycle `Σ c_i e_i`.
    pub fn element(&self, c: &[F]) -> Frac<F> {
        let mut acc = Frac::zero(&self.ctx.zero());
        for (x, e) in c.iter().zip(&self.basis) {
            if !x.is_zero() {
                acc = self.ctx.add(&acc, &e.scale(x));
            }
        }
        acc
    }

    /// Coordinates in the canonical basis of a `C¹` vector of `O(−n·O∞)`,
    /// read off the normal form.
    pub fn coords_vec(&self, c1: &[F]) -> Vec<F> {
        self.to_basis.mul_vec(&self.coh.classify(c1))
    }

    /// Coordinates in the canonical basis of a cocycle, through the Serre
    /// pairing against `H⁰(V)`; no truncation limit applies.
    pub fn coords(&self, f: &Frac<F>) -> Result<Vec<F>> {
        let rhs = self
            .hom_basis()
            .iter()
            .map(|m| self.ctx.residue(&self.ctx.mul(m, f)))
            .collect::<Result<Vec<_>>>()?;
        self.gram
            .solve(&rhs)
            .ok_or_else(|| Error::Falsified("Gram matrix is singular".into()))
    }

    /// Monomial basis of `H⁰(V)`.
    pub fn hom_basis(&self) -> Vec<Frac<F>> {
        let z = self.ctx.zero();
        hom_degrees(self.ctx.n())
            .into_iter()
            .map(|a| Frac::poly(CoordPoly::monomial(a, &z)))
            .collect()
    }

    /// The section `Σ s_i m_{a_i}` of `V`.
    pub fn section(&self, s: &[F]) -> Frac<F> {
        let mut acc = Frac::zero(&self.ctx.zero());
        for (x, m) in s.iter().zip(self.hom_basis()) {
            if !x.is_zero() {
                acc = self.ctx.add(&acc, &m.scale(x));
            }
        }
        acc
    }

    /// Serre pairing of section coordinates with `Ext¹` coordinates.
    pub fn pair(&self, s: &[F], phi: &[F]) -> F {
        crate::linalg::dot(s, &self.gram.mul_vec(phi), &self.ctx.zero())
    }

    /// The class `φ_P` with `⟨s, φ_P⟩ = s(P)` for every `s ∈ H⁰(V)`; at O∞ the
    /// value of `s` is its leading coefficient.
    pub fn point_class(&self, p: &Point<F>) -> Result<Vec<F>> {
        let z = self.ctx.zero();
        let n = self.ctx.n() as usize;
        let ev: Vec<F> = match p.coords() {
            None => {
                let mut v = vec![z.clone(); n];
                v[n - 1] = z.one_like();
                v
            }
            Some((x, y)) => hom_degrees(n as u32)
                .into_iter()
                .map(|a| CoordPoly::monomial(a, &z).eval(x, y))
                .collect(),
        };
        self.gram
            .solve(&ev)
            .ok_or_else(|| Error::Falsified("Gram matrix is singular".into()))
    }
}

/// Index used to normalize modulo `⟨φ⟩`: the last nonzero coordinate.
pub fn chart_index<F: Field>(phi: &[F]) -> Option<usize> {
    phi.iter().rposition(|x| !x.is_zero())
}

/// `v − (v_j/φ_j)·φ`, which vanishes at `j`.
pub fn reduce_mod<F: Field>(v: &[F], phi: &[F], j: usize) -> Vec<F> {
    let c = v[j].clone() * phi[j].inv().expect("chart coordinate is nonzero");
    v.iter()
        .zip(phi)
        .map(|(a, b)| a.clone() - c.clone() * b.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Fixture;

    #[test]
    fn gram_is_triangular_and_point_classes_evaluate() {
        let fx = Fixture { p: 13, a: 1, b: 1, n: 3, p0: [10, 6] };
        let ctx = Ctx::new(fx.cover().unwrap(), 8, 80).unwrap();
        let b = Bundle::line(&ctx, -3, 0);
        let ext = ExtSpace::new(&ctx, Budget::for_bundle(&b, 3)).unwrap();
        for i in 0..3 {
            assert!(!ext.gram.get(i, i).is_zero());
            for j in 0..i {
                assert!(ext.gram.get(j, i).is_zero() || ext.gram.get(i, j).is_zero());
            }
        }
        for (i, e) in ext.basis.iter().enumerate() {
            let c = ext.coords(e).unwrap();
            for (j, x) in c.iter().enumerate() {
                assert_eq!(x.is_one(), i == j);
            }
        }
        let p = ctx.cover().curve.point(ctx.zero().from_int(0), ctx.zero().from_int(1)).unwrap();
        let phi = ext.point_class(&p).unwrap();
        for (i, m) in ext.hom_basis().iter().enumerate() {
            let mut s = vec![ctx.zero(); 3];
            s[i] = ctx.one();
            assert_eq!(ext.pair(&s, &phi), m.num.eval(&ctx.zero(), &ctx.one()));
        }
    }
}
