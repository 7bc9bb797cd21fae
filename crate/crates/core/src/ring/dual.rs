//! Dual numbers `a + εb` with `ε² = 0`.
//!
//! Generic over any commutative ring-like carrier, so the same type works for
//! scalars, function-field elements and cochain entries.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Field;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dual<R> {
    pub re: R,
    pub eps: R,
}

impl<R> Dual<R> {
    pub fn new(re: R, eps: R) -> Self {
        Dual { re, eps }
    }
}

impl<R: Clone> Dual<R> {
    /// The `ε = 0` slice.
    pub fn slice0(&self) -> R {
        self.re.clone()
    }
}

impl<F: Field> Dual<F> {
    pub fn constant(re: F) -> Self {
        let z = re.zero_like();
        Dual { re, eps: z }
    }

    pub fn epsilon(sample: &F) -> Self {
        Dual {
            re: sample.zero_like(),
            eps: sample.one_like(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !self.re.is_zero()
    }

    /// `(a + εb)⁻¹ = a⁻¹ − ε b a⁻²`.
    pub fn inv(&self) -> Option<Self> {
        let ai = self.re.inv()?;
        Some(Dual {
            re: ai.clone(),
            eps: -(self.eps.clone() * ai.clone() * ai),
        })
    }
}

impl<R: Add<Output = R>> Add for Dual<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual {
            re: self.re + o.re,
            eps: self.eps + o.eps,
        }
    }
}

impl<R: Sub<Output = R>> Sub for Dual<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual {
            re: self.re - o.re,
            eps: self.eps - o.eps,
        }
    }
}

impl<R: Clone + Add<Output = R> + Mul<Output = R>> Mul for Dual<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Dual {
            re: self.re.clone() * o.re.clone(),
            eps: self.re * o.eps + self.eps * o.re,
        }
    }
}

impl<R: Neg<Output = R>> Neg for Dual<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual {
            re: -self.re,
            eps: -self.eps,
        }
    }
}

impl<R: fmt::Debug> fmt::Debug for Dual<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + ε·{:?}", self.re, self.eps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::field::PrimeField;

    #[test]
    fn epsilon_squares_to_zero() {
        let f = PrimeField::new(11).unwrap();
        let e = Dual::epsilon(&f.zero());
        assert!((e.clone() * e).is_zero());
    }

    #[test]
    fn units_invert() {
        let f = PrimeField::new(11).unwrap();
        let d = Dual::new(f.elem(3), f.elem(7));
        let i = d.inv().unwrap();
        let one = d * i;
        assert!(one.re.is_one() && one.eps.is_zero());
        assert!(Dual::new(f.zero(), f.one()).inv().is_none());
    }
}
