//! The function field `k(C) = k(x)[y]/(y² − x³ − ax − b)` and local expansions.

use std::fmt;

use super::field::Field;
use super::laurent::Laurent;
use super::poly::{Poly, RatFunc};
use crate::error::{Error, Result};

/// Short Weierstrass coefficients `(a, b)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Weierstrass<F: Field> {
    pub a: F,
    pub b: F,
}

impl<F: Field> Weierstrass<F> {
    pub fn new(a: F, b: F) -> Self {
        Weierstrass { a, b }
    }

    /// `x³ + ax + b`.
    pub fn rhs(&self) -> Poly<F> {
        let z = self.a.zero_like();
        Poly::new(
            vec![self.b.clone(), self.a.clone(), z.clone(), z.one_like()],
            z,
        )
    }

    pub fn discriminant_part(&self) -> F {
        let z = &self.a;
        z.from_int(4) * self.a.pow(3) + z.from_int(27) * self.b.clone() * self.b.clone()
    }

    pub fn contains(&self, x: &F, y: &F) -> bool {
        y.clone() * y.clone() == self.rhs().eval(x)
    }
}

/// A point of the projective curve.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Point<F: Field> {
    Infinity,
    Affine(F, F),
}

impl<F: Field> Point<F> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn coords(&self) -> Option<(&F, &F)> {
        match self {
            Point::Infinity => None,
            Point::Affine(x, y) => Some((x, y)),
        }
    }
}

impl<F: Field> fmt::Debug for Point<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O∞"),
            Point::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

/// `u(x) + v(x)·y` on a fixed curve.
#[derive(Clone, PartialEq, Eq)]
pub struct FnFieldElem<F: Field> {
    curve: Weierstrass<F>,
    u: RatFunc<F>,
    v: RatFunc<F>,
}

impl<F: Field> FnFieldElem<F> {
    pub fn new(curve: &Weierstrass<F>, u: RatFunc<F>, v: RatFunc<F>) -> Self {
        FnFieldElem {
            curve: curve.clone(),
            u,
            v,
        }
    }

    pub fn from_polys(curve: &Weierstrass<F>, u: Poly<F>, v: Poly<F>) -> Self {
        Self::new(curve, RatFunc::from_poly(u), RatFunc::from_poly(v))
    }

    pub fn constant(curve: &Weierstrass<F>, c: F) -> Self {
        let z = c.zero_like();
        Self::new(curve, RatFunc::constant(c), RatFunc::zero(&z))
    }

    pub fn x(curve: &Weierstrass<F>) -> Self {
        let z = curve.a.zero_like();
        Self::from_polys(curve, Poly::x(&z), Poly::zero(&z))
    }

    pub fn y(curve: &Weierstrass<F>) -> Self {
        let z = curve.a.zero_like();
        Self::new(curve, RatFunc::zero(&z), RatFunc::constant(z.one_like()))
    }

    pub fn curve(&self) -> &Weierstrass<F> {
        &self.curve
    }

    pub fn u(&self) -> &RatFunc<F> {
        &self.u
    }

    pub fn v(&self) -> &RatFunc<F> {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    /// True when both parts are polynomials (an element of the coordinate ring).
    pub fn is_regular_affine(&self) -> bool {
        self.u.is_polynomial() && self.v.is_polynomial()
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.curve != o.curve {
            return Err(Error::CurveMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(Self::new(&self.curve, self.u.add(&o.u), self.v.add(&o.v)))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(Self::new(&self.curve, self.u.sub(&o.u), self.v.sub(&o.v)))
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.curve, self.u.neg(), self.v.neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        let k = RatFunc::constant(c.clone());
        Self::new(&self.curve, self.u.mul(&k), self.v.mul(&k))
    }

    /// `ff_mul`: product reduced through `y² = x³ + ax + b`.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let rhs = self.curve.rhs();
        let u = self.u.mul(&o.u).add(&self.v.mul(&o.v).mul_poly(&rhs));
        let v = self.u.mul(&o.v).add(&self.v.mul(&o.u));
        Ok(Self::new(&self.curve, u, v))
    }

    /// Norm `u² − v²(x³ + ax + b)` to `k(x)`.
    pub fn norm(&self) -> RatFunc<F> {
        self.u
            .mul(&self.u)
            .sub(&self.v.mul(&self.v).mul_poly(&self.curve.rhs()))
    }

    /// `ff_inv` via the conjugate `u − v·y`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ni = self.norm().inv()?;
        Ok(Self::new(&self.curve, self.u.mul(&ni), self.v.neg().mul(&ni)))
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::constant(&self.curve, self.curve.a.one_like());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Value at an affine point where the function is regular.
    pub fn eval(&self, x: &F, y: &F) -> Option<F> {
        Some(self.u.eval(x)? + self.v.eval(x)? * y.clone())
    }

    fn expand_with(&self, xs: &Laurent<F>, ys: &Laurent<F>) -> Option<Laurent<F>> {
        let rf = |r: &RatFunc<F>| -> Option<Laurent<F>> {
            let n = Laurent::eval_poly(r.num(), xs)?;
            let d = Laurent::eval_poly(r.den(), xs)?;
            Some(n.mul(&d.inv()?))
        };
        let len = xs.precision() - xs.valuation();
        let zero = Laurent::zero(len + 64, &self.curve.a);
        let u = if self.u.is_zero() { zero.clone() } else { rf(&self.u)? };
        let v = if self.v.is_zero() { zero } else { rf(&self.v)?.mul(ys) };
        Some(u.add(&v))
    }

    /// `expand_at`: Laurent expansion at `p` in the designated uniformizer,
    /// exact for all exponents below `order`.
    pub fn expand_at(&self, p: &Point<F>, order: i64) -> Result<Laurent<F>> {
        let mut len = (order.unsigned_abs() as usize) + 8;
        for _ in 0..6 {
            let (xs, ys) = local_xy(&self.curve, p, len)?;
            if let Some(s) = self.expand_with(&xs, &ys) {
                if s.precision() >= order {
                    return Ok(s.truncated(order));
                }
            }
            len *= 2;
        }
        Err(Error::Precision(format!(
            "expansion at {p:?} to order {order}"
        )))
    }

    /// `valuation_at`: order of vanishing at `p` (negative for poles).
    pub fn valuation_at(&self, p: &Point<F>) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::Precondition("valuation of zero".into()));
        }
        let mut len = 16usize;
        for _ in 0..8 {
            let (xs, ys) = local_xy(&self.curve, p, len)?;
            if let Some(s) = self.expand_with(&xs, &ys) {
                if !s.is_zero() {
                    return Ok(s.valuation());
                }
            }
            len *= 2;
        }
        Err(Error::Precision(format!("valuation at {p:?}")))
    }

    /// `residue_at`: residue of `f·ω` at `p`, with `ω = dx/(2y)`.
    pub fn residue_at(&self, p: &Point<F>) -> Result<F> {
        if self.is_zero() {
            return Err(Error::Precondition("residue of zero".into()));
        }
        let mut len = 24usize;
        for _ in 0..6 {
            let (xs, ys) = local_xy(&self.curve, p, len)?;
            if let Some(s) = self.expand_with(&xs, &ys) {
                let om = omega_factor(&xs, &ys);
                if let Some(c) = s.mul(&om).coeff(-1) {
                    return Ok(c);
                }
            }
            len *= 2;
        }
        Err(Error::Precision(format!("residue at {p:?}")))
    }
}

impl<F: Field> fmt::Debug for FnFieldElem<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + {:?}·y", self.u, self.v)
    }
}

/// `(dx/dt)/(2y)`, so that `ω = omega_factor·dt`.
pub fn omega_factor<F: Field>(xs: &Laurent<F>, ys: &Laurent<F>) -> Laurent<F> {
    let two = xs.sample().from_int(2);
    xs.derivative()
        .mul(&ys.scale(&two).inv().expect("y has a finite expansion"))
}

/// Expansions of `x` and `y` at `p` with relative length `len`.
///
/// Uniformizers: `t = −x/y` at O∞ (so `y·t³ → −1`), `x − x₀` at affine points
/// with `y₀ ≠ 0`, and `y` at points of order two.
pub fn local_xy<F: Field>(
    curve: &Weierstrass<F>,
    p: &Point<F>,
    len: usize,
) -> Result<(Laurent<F>, Laurent<F>)> {
    let zero = curve.a.zero_like();
    let one = zero.one_like();
    let len = len.max(2);
    match p {
        Point::Infinity => {
            // w = z³ + a z w² + b w³ with x = z/w, y = −1/w
            let prec = len as i64 + 3;
            let z = Laurent::t(prec, &zero);
            let z3 = z.pow(3).truncated(prec);
            let mut w = z3.clone();
            for _ in 0..len {
                let w2 = w.mul(&w);
                let next = z3
                    .add(&z.mul(&w2).scale(&curve.a))
                    .add(&w2.mul(&w).scale(&curve.b))
                    .truncated(prec);
                if next == w {
                    break;
                }
                w = next;
            }
            let wi = w.inv().expect("w has valuation 3");
            Ok((z.mul(&wi), wi.neg()))
        }
        Point::Affine(x0, y0) => {
            if !curve.contains(x0, y0) {
                return Err(Error::Precondition(format!("{p:?} is not on the curve")));
            }
            let rhs = curve.rhs();
            if !y0.is_zero() {
                // t = x − x0; y_k from y² = f(x0 + t)
                let mut fk = vec![zero.clone(); len];
                let shifted = shift_poly(&rhs, x0);
                for (k, c) in fk.iter_mut().enumerate() {
                    *c = shifted.coeff(k);
                }
                let inv2y0 = (y0.clone() + y0.clone()).inv().unwrap();
                let mut y = vec![zero.clone(); len];
                y[0] = y0.clone();
                for k in 1..len {
                    let mut s = zero.clone();
                    for i in 1..k {
                        s = s + y[i].clone() * y[k - i].clone();
                    }
                    y[k] = (fk[k].clone() - s) * inv2y0.clone();
                }
                let mut xv = vec![x0.clone(), one.clone()];
                xv.resize(len, zero.clone());
                Ok((Laurent::new(0, xv, &zero), Laurent::new(0, y, &zero)))
            } else {
                // t = y; x = x0 + u, f'(x0) u + 3 x0 u² + u³ = t²
                let fp = rhs.derivative().eval(x0);
                let fpi = fp
                    .inv()
                    .ok_or_else(|| Error::Precondition("singular curve".into()))?;
                let prec = len as i64 + 1;
                let t = Laurent::t(prec, &zero);
                let t2 = t.mul(&t).truncated(prec);
                let three_x0 = zero.from_int(3) * x0.clone();
                let mut u = t2.scale(&fpi);
                for _ in 0..len {
                    let u2 = u.mul(&u);
                    let next = t2
                        .sub(&u2.scale(&three_x0))
                        .sub(&u2.mul(&u))
                        .scale(&fpi)
                        .truncated(prec);
                    if next == u {
                        break;
                    }
                    u = next;
                }
                let xs = u.add_const(x0);
                Ok((xs, t))
            }
        }
    }
}

/// Coefficients of `f(x0 + t)` as a polynomial in `t`.
fn shift_poly<F: Field>(f: &Poly<F>, x0: &F) -> Poly<F> {
    let z = x0.zero_like();
    let lin = Poly::new(vec![x0.clone(), z.one_like()], z.clone());
    let mut acc = Poly::zero(&z);
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(&lin).add(&Poly::constant(c.clone()));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::field::{Fp, PrimeField};

    fn curve() -> Weierstrass<Fp> {
        let f = PrimeField::new(101).unwrap();
        Weierstrass::new(f.elem(2), f.elem(3))
    }

    #[test]
    fn y_squared_reduces() {
        let c = curve();
        let y = FnFieldElem::y(&c);
        let yy = y.mul(&y).unwrap();
        assert_eq!(yy, FnFieldElem::from_polys(&c, c.rhs(), Poly::zero(&c.a)));
    }

    #[test]
    fn inverse_round_trip() {
        let c = curve();
        let f = FnFieldElem::x(&c).add(&FnFieldElem::y(&c)).unwrap();
        let one = f.mul(&f.inv().unwrap()).unwrap();
        assert_eq!(one, FnFieldElem::constant(&c, c.a.one_like()));
    }

    #[test]
    fn orders_at_infinity() {
        let c = curve();
        assert_eq!(FnFieldElem::x(&c).valuation_at(&Point::Infinity), Ok(-2));
        assert_eq!(FnFieldElem::y(&c).valuation_at(&Point::Infinity), Ok(-3));
        let (xs, ys) = local_xy(&c, &Point::Infinity, 12).unwrap();
        let yt3 = ys.mul(&Laurent::t(20, &c.a).pow(3));
        assert_eq!(yt3.coeff(0), Some(-c.a.one_like()));
        assert!(xs.valuation() == -2);
    }

    #[test]
    fn series_satisfy_the_curve_equation() {
        let c = curve();
        let f = PrimeField::new(101).unwrap();
        let mut pts = vec![Point::Infinity];
        for x in 0..101 {
            let x = f.elem(x);
            if let Some(y) = c.rhs().eval(&x).sqrt() {
                pts.push(Point::Affine(x, y));
            }
        }
        for p in pts.iter().take(12) {
            let (xs, ys) = local_xy(&c, p, 20).unwrap();
            let lhs = ys.mul(&ys);
            let rhs = Laurent::eval_poly(&c.rhs(), &xs).unwrap();
            let diff = lhs.sub(&rhs);
            assert!(diff.is_zero(), "{p:?}: {diff:?}");
            assert!(diff.precision() >= 10);
        }
    }
}
