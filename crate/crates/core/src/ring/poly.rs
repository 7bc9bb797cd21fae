//! Dense univariate polynomials and reduced rational functions.

use std::fmt;

use super::field::Field;
use crate::error::{Error, Result};

/// Dense univariate polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<F: Field> {
    coeffs: Vec<F>,
    zero: F,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>, zero: F) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            coeffs,
            zero: zero.zero_like(),
        }
    }

    pub fn zero(sample: &F) -> Self {
        Poly::new(vec![], sample.zero_like())
    }

    pub fn constant(c: F) -> Self {
        let z = c.zero_like();
        Poly::new(vec![c], z)
    }

    /// The monomial `x`.
    pub fn x(sample: &F) -> Self {
        Poly::new(vec![sample.zero_like(), sample.one_like()], sample.zero_like())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn sample(&self) -> &F {
        &self.zero
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect();
        Poly::new(c, self.zero.clone())
    }

    pub fn neg(&self) -> Self {
        Poly::new(
            self.coeffs.iter().map(|c| -c.clone()).collect(),
            self.zero.clone(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &F) -> Self {
        Poly::new(
            self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
            self.zero.clone(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.zero);
        }
        let mut c = vec![self.zero.clone(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(c, self.zero.clone())
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn divrem(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        let lead_inv = d.lead().inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Some((Poly::zero(&self.zero), self.clone()));
        }
        let mut q = vec![self.zero.clone(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].clone() * lead_inv.clone();
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[i + j] = r[i + j].clone() - c.clone() * dj.clone();
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        Some((
            Poly::new(q, self.zero.clone()),
            Poly::new(r, self.zero.clone()),
        ))
    }

    pub fn monic(&self) -> Self {
        match self.lead().inv() {
            Some(i) => self.scale(&i),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = self.zero.clone();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * self.zero.from_int(i as i64))
            .collect();
        Poly::new(c, self.zero.clone())
    }

    /// Roots in the base field, for finite fields (brute force).
    pub fn roots(&self) -> Vec<F> {
        match self.zero.elements() {
            Some(all) => all.into_iter().filter(|x| self.eval(x).is_zero()).collect(),
            None => vec![],
        }
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

/// A univariate rational function `num/den`, reduced, with monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero(num.sample()));
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.divrem(&g).unwrap();
        let (mut d, _) = den.divrem(&g).unwrap();
        let li = d.lead().inv().unwrap();
        n = n.scale(&li);
        d = d.scale(&li);
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        let one = Poly::constant(p.sample().one_like());
        RatFunc { num: p, den: one }
    }

    pub fn zero(sample: &F) -> Self {
        RatFunc::from_poly(Poly::zero(sample))
    }

    pub fn constant(c: F) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn sample(&self) -> &F {
        self.num.sample()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .unwrap()
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn mul_poly(&self, p: &Poly<F>) -> Self {
        RatFunc::new(self.num.mul(p), self.den.clone()).unwrap()
    }

    pub fn inv(&self) -> Result<Self> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn eval(&self, x: &F) -> Option<F> {
        self.den.eval(x).inv().map(|i| self.num.eval(x) * i)
    }
}

impl<F: Field> fmt::Debug for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::field::PrimeField;

    #[test]
    fn divrem_reconstructs() {
        let f = PrimeField::new(13).unwrap();
        let a = Poly::new(vec![f.elem(3), f.elem(0), f.elem(5), f.elem(1)], f.zero());
        let b = Poly::new(vec![f.elem(1), f.elem(2)], f.zero());
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
    }

    #[test]
    fn ratfunc_reduces() {
        let f = PrimeField::new(13).unwrap();
        let x = Poly::x(&f.zero());
        let xm1 = x.sub(&Poly::constant(f.one()));
        let r = RatFunc::new(x.mul(&xm1), xm1.mul(&xm1)).unwrap();
        assert_eq!(r.num(), &x);
        assert_eq!(r.den(), &xm1);
    }
}
