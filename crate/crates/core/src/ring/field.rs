//! Base fields: prime fields `F_p` (p > 3) and the rationals.
//!
//! Elements carry enough context (the modulus, for `F_p`) to manufacture
//! zeros and ones, so generic code never needs a separate field object.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::Value;

use crate::error::{Error, Result};

/// A commutative field with exact arithmetic.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int(&self, v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    /// All elements, for finite fields.
    fn elements(&self) -> Option<Vec<Self>>;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self;
    /// Exact JSON rendering: an integer residue or a reduced fraction string.
    fn to_json(&self) -> Value;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    fn try_div(&self, other: &Self) -> Result<Self> {
        other
            .inv()
            .map(|i| self.clone() * i)
            .ok_or(Error::DivisionByZero)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field `F_p`, used as a factory for [`Fp`] elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p <= 3 || p >= (1 << 31) || !is_prime(p) {
            return Err(Error::Precondition(format!(
                "modulus {p} must be a prime with 3 < p < 2^31"
            )));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: i64) -> Fp {
        Fp {
            v: v.rem_euclid(self.p as i64) as u64,
            p: self.p,
        }
    }

    pub fn zero(&self) -> Fp {
        self.elem(0)
    }

    pub fn one(&self) -> Fp {
        self.elem(1)
    }
}

/// An element of `F_p`; the modulus travels with the value.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    v: u64,
    p: u64,
}

impl Fp {
    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    /// A square root, if one exists (brute force for small moduli, Tonelli–Shanks otherwise).
    pub fn sqrt(&self) -> Option<Fp> {
        if self.v == 0 {
            return Some(*self);
        }
        if self.pow((self.p - 1) / 2).v != 1 {
            return None;
        }
        let p = self.p;
        let mut q = p - 1;
        let mut s = 0;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let f = self.field();
        let mut z = f.elem(2);
        while z.pow((p - 1) / 2).v == 1 {
            z = z + f.one();
        }
        let mut m = s;
        let mut c = z.pow(q);
        let mut t = self.pow(q);
        let mut r = self.pow((q + 1) / 2);
        while t.v != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2.v != 1 {
                t2 = t2 * t2;
                i += 1;
            }
            let b = c.pow(1 << (m - i - 1));
            m = i;
            c = b * b;
            t = t * c;
            r = r * b;
        }
        Some(r)
    }
}

impl Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        let s = self.v + o.v;
        Fp {
            v: if s >= self.p { s - self.p } else { s },
            p: self.p,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        Fp {
            v: if self.v >= o.v {
                self.v - o.v
            } else {
                self.v + self.p - o.v
            },
            p: self.p,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        Fp {
            v: (self.v * o.v) % self.p,
            p: self.p,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            v: if self.v == 0 { 0 } else { self.p - self.v },
            p: self.p,
        }
    }
}

impl Div for Fp {
    type Output = Fp;
    fn div(self, o: Fp) -> Fp {
        self * o.inv().expect("division by zero in F_p")
    }
}

impl Field for Fp {
    fn zero_like(&self) -> Self {
        Fp { v: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Fp { v: 1, p: self.p }
    }
    fn from_int(&self, v: i64) -> Self {
        self.field().elem(v)
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        // extended Euclid
        let (mut a, mut b) = (self.v as i64, self.p as i64);
        let (mut x0, mut x1) = (1i64, 0i64);
        while b != 0 {
            let q = a / b;
            (a, b) = (b, a - q * b);
            (x0, x1) = (x1, x0 - q * x1);
        }
        Some(self.from_int(x0))
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn elements(&self) -> Option<Vec<Self>> {
        Some((0..self.p).map(|v| Fp { v, p: self.p }).collect())
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        Fp {
            v: rng.gen_range(0..self.p),
            p: self.p,
        }
    }
    fn to_json(&self) -> Value {
        Value::from(self.v)
    }
}

/// A rational number.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Q(pub BigRational);

impl Q {
    pub fn new(num: i64, den: i64) -> Q {
        Q(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(v: i64) -> Q {
        Q::new(v, 1)
    }
}

impl Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Q {
    type Output = Q;
    fn add(self, o: Q) -> Q {
        Q(self.0 + o.0)
    }
}

impl Sub for Q {
    type Output = Q;
    fn sub(self, o: Q) -> Q {
        Q(self.0 - o.0)
    }
}

impl Mul for Q {
    type Output = Q;
    fn mul(self, o: Q) -> Q {
        Q(self.0 * o.0)
    }
}

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-self.0)
    }
}

impl Field for Q {
    fn zero_like(&self) -> Self {
        Q(BigRational::zero())
    }
    fn one_like(&self) -> Self {
        Q(BigRational::one())
    }
    fn from_int(&self, v: i64) -> Self {
        Q::int(v)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Q(self.0.recip()))
        }
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn elements(&self) -> Option<Vec<Self>> {
        None
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        Q::new(rng.gen_range(-20..=20), rng.gen_range(1..=6))
    }
    fn to_json(&self) -> Value {
        let n = self.0.numer();
        let d = self.0.denom();
        if d.is_one() {
            match n.to_i64() {
                Some(v) => Value::from(v),
                None => Value::from(n.to_string()),
            }
        } else {
            let sign = if n.is_negative() { "-" } else { "" };
            Value::from(format!("{sign}{}/{}", n.abs(), d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_and_composite_moduli() {
        assert!(PrimeField::new(3).is_err());
        assert!(PrimeField::new(15).is_err());
        assert!(PrimeField::new(7).is_ok());
    }

    #[test]
    fn inverse_round_trip() {
        let f = PrimeField::new(101).unwrap();
        for v in 1..101 {
            let a = f.elem(v);
            assert!((a * a.inv().unwrap()).is_one());
        }
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn sqrt_mod_p() {
        for p in [7u64, 13, 17, 97, 1009] {
            let f = PrimeField::new(p).unwrap();
            for v in 0..p as i64 {
                let a = f.elem(v);
                if let Some(r) = a.sqrt() {
                    assert_eq!(r * r, a);
                }
            }
        }
    }

    #[test]
    fn rational_json_is_reduced() {
        assert_eq!(Q::new(6, -4).to_json(), Value::from("-3/2"));
        assert_eq!(Q::new(4, 2).to_json(), Value::from(2));
    }
}
