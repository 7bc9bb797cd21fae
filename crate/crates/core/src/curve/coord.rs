//! The affine coordinate ring `A = k[x, y]/(y² − x³ − ax − b)`.
//!
//! Elements are `u(x) + v(x)·y`. The monomial of pole order `d` at O∞ is
//! `x^{d/2}` for even `d` and `x^{(d−3)/2}·y` for odd `d ≥ 3`; there is no
//! monomial of pole order 1. Coordinates are indexed by pole order with that
//! gap removed, so the pole order of an element is read off its top coordinate.

use std::fmt;

use crate::ring::{Field, FnFieldElem, Poly, Weierstrass};

/// Number of monomials of pole order at most `max_deg`.
pub fn mono_dim(max_deg: usize) -> usize {
    max_deg.max(1)
}

/// Coordinate index of the monomial of pole order `d` (`d ≠ 1`).
pub fn mono_index(d: usize) -> usize {
    debug_assert!(d != 1);
    if d == 0 {
        0
    } else {
        d - 1
    }
}

/// Pole order of the monomial at coordinate index `i`.
pub fn mono_degree(i: usize) -> usize {
    if i == 0 {
        0
    } else {
        i + 1
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CoordPoly<F: Field> {
    pub u: Poly<F>,
    pub v: Poly<F>,
}

impl<F: Field> CoordPoly<F> {
    pub fn new(u: Poly<F>, v: Poly<F>) -> Self {
        CoordPoly { u, v }
    }

    pub fn zero(sample: &F) -> Self {
        CoordPoly::new(Poly::zero(sample), Poly::zero(sample))
    }

    pub fn constant(c: F) -> Self {
        let z = c.zero_like();
        CoordPoly::new(Poly::constant(c), Poly::zero(&z))
    }

    pub fn monomial(d: usize, sample: &F) -> Self {
        let z = sample.zero_like();
        let one = z.one_like();
        let mut c = vec![z.clone(); d / 2 + 1];
        if d % 2 == 0 {
            c[d / 2] = one;
            CoordPoly::new(Poly::new(c, z.clone()), Poly::zero(&z))
        } else {
            assert!(d >= 3, "no monomial of pole order 1");
            c[(d - 3) / 2] = one;
            CoordPoly::new(Poly::zero(&z), Poly::new(c, z.clone()))
        }
    }

    pub fn sample(&self) -> &F {
        self.u.sample()
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    /// Pole order at O∞; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        let du = self.u.degree().map(|d| 2 * d);
        let dv = self.v.degree().map(|d| 2 * d + 3);
        du.max(dv)
    }

    /// Coefficient of the monomial of pole order `d`.
    pub fn coeff(&self, d: usize) -> F {
        if d % 2 == 0 {
            self.u.coeff(d / 2)
        } else if d >= 3 {
            self.v.coeff((d - 3) / 2)
        } else {
            self.sample().zero_like()
        }
    }

    /// Coordinates up to pole order `max_deg`; `None` if the element does not fit.
    pub fn to_coords(&self, max_deg: usize) -> Option<Vec<F>> {
        if self.degree().is_some_and(|d| d > max_deg) {
            return None;
        }
        Some(
            (0..mono_dim(max_deg))
                .map(|i| self.coeff(mono_degree(i)))
                .collect(),
        )
    }

    pub fn from_coords(c: &[F], sample: &F) -> Self {
        let z = sample.zero_like();
        let mut u = vec![];
        let mut v = vec![];
        for (i, x) in c.iter().enumerate() {
            let d = mono_degree(i);
            if d % 2 == 0 {
                let k = d / 2;
                if u.len() <= k {
                    u.resize(k + 1, z.clone());
                }
                u[k] = x.clone();
            } else {
                let k = (d - 3) / 2;
                if v.len() <= k {
                    v.resize(k + 1, z.clone());
                }
                v[k] = x.clone();
            }
        }
        CoordPoly::new(Poly::new(u, z.clone()), Poly::new(v, z))
    }

    pub fn add(&self, o: &Self) -> Self {
        CoordPoly::new(self.u.add(&o.u), self.v.add(&o.v))
    }

    pub fn sub(&self, o: &Self) -> Self {
        CoordPoly::new(self.u.sub(&o.u), self.v.sub(&o.v))
    }

    pub fn neg(&self) -> Self {
        CoordPoly::new(self.u.neg(), self.v.neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        CoordPoly::new(self.u.scale(c), self.v.scale(c))
    }

    /// Product, reducing `y²` by `rhs = x³ + ax + b`.
    pub fn mul(&self, o: &Self, rhs: &Poly<F>) -> Self {
        let u = self.u.mul(&o.u).add(&self.v.mul(&o.v).mul(rhs));
        let v = self.u.mul(&o.v).add(&self.v.mul(&o.u));
        CoordPoly::new(u, v)
    }

    pub fn eval(&self, x: &F, y: &F) -> F {
        self.u.eval(x) + self.v.eval(x) * y.clone()
    }

    pub fn to_fn(&self, curve: &Weierstrass<F>) -> FnFieldElem<F> {
        FnFieldElem::from_polys(curve, self.u.clone(), self.v.clone())
    }

    /// The element as a coordinate-ring element, if it is one.
    pub fn from_fn(f: &FnFieldElem<F>) -> Option<Self> {
        if !f.is_regular_affine() {
            return None;
        }
        let c = f.u().den().coeff(0).inv()?;
        let d = f.v().den().coeff(0).inv()?;
        Some(CoordPoly::new(f.u().num().scale(&c), f.v().num().scale(&d)))
    }
}

impl<F: Field> fmt::Debug for CoordPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + {:?}·y", self.u, self.v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PrimeField;

    #[test]
    fn monomial_coordinates_round_trip() {
        let f = PrimeField::new(31).unwrap();
        for d in [0usize, 2, 3, 4, 5, 8, 11] {
            let m = CoordPoly::monomial(d, &f.zero());
            assert_eq!(m.degree(), Some(d));
            let c = m.to_coords(12).unwrap();
            assert_eq!(c[mono_index(d)], f.one());
            assert_eq!(CoordPoly::from_coords(&c, &f.zero()), m);
        }
    }

    #[test]
    fn pole_orders_add_under_multiplication() {
        let f = PrimeField::new(31).unwrap();
        let rhs = Poly::new(vec![f.elem(5), f.elem(1), f.zero(), f.one()], f.zero());
        for a in [0usize, 2, 3, 5] {
            for b in [2usize, 3, 4, 7] {
                let p = CoordPoly::monomial(a, &f.zero()).mul(&CoordPoly::monomial(b, &f.zero()), &rhs);
                assert_eq!(p.degree(), Some(a + b));
            }
        }
    }
}
