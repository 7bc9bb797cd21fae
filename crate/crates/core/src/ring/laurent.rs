//! Truncated Laurent series `Σ_{e ≥ val} c_e t^e + O(t^prec)`.

use std::fmt;

use super::field::Field;
use super::poly::Poly;

/// A truncated Laurent series in a local uniformizer.
///
/// Coefficients are known for exponents `val..prec`; when the series is
/// nonzero the coefficient at `val` is nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct Laurent<F: Field> {
    val: i64,
    coeffs: Vec<F>,
    zero: F,
}

impl<F: Field> Laurent<F> {
    /// Series with coefficients starting at exponent `val`; leading zeros are absorbed.
    pub fn new(val: i64, coeffs: Vec<F>, sample: &F) -> Self {
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(i) => Laurent {
                val: val + i as i64,
                coeffs: coeffs[i..].to_vec(),
                zero: sample.zero_like(),
            },
            None => Laurent {
                val: val + coeffs.len() as i64,
                coeffs: vec![],
                zero: sample.zero_like(),
            },
        }
    }

    /// `O(t^prec)`.
    pub fn zero(prec: i64, sample: &F) -> Self {
        Laurent::new(prec, vec![], sample)
    }

    /// Constant `c + O(t^prec)`.
    pub fn constant(c: F, prec: i64) -> Self {
        let z = c.zero_like();
        if prec <= 0 {
            return Laurent::zero(prec, &z);
        }
        let mut v = vec![c];
        v.resize(prec as usize, z.clone());
        Laurent::new(0, v, &z)
    }

    /// The uniformizer `t + O(t^prec)`.
    pub fn t(prec: i64, sample: &F) -> Self {
        let mut v = vec![sample.one_like()];
        v.resize((prec - 1).max(1) as usize, sample.zero_like());
        Laurent::new(1, v, sample).truncated(prec)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient (the precision, for a zero series).
    pub fn valuation(&self) -> i64 {
        self.val
    }

    /// Exponents below this are known exactly.
    pub fn precision(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn sample(&self) -> &F {
        &self.zero
    }

    /// Coefficient of `t^e`, or `None` beyond the precision.
    pub fn coeff(&self, e: i64) -> Option<F> {
        if e >= self.precision() {
            None
        } else if e < self.val {
            Some(self.zero.clone())
        } else {
            Some(self.coeffs[(e - self.val) as usize].clone())
        }
    }

    pub fn truncated(&self, prec: i64) -> Self {
        if prec >= self.precision() {
            return self.clone();
        }
        if prec <= self.val {
            return Laurent::zero(prec, &self.zero);
        }
        Laurent::new(
            self.val,
            self.coeffs[..(prec - self.val) as usize].to_vec(),
            &self.zero,
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.precision().min(o.precision());
        let low = self.val.min(o.val).min(prec);
        let c = (low..prec)
            .map(|e| self.coeff(e).unwrap() + o.coeff(e).unwrap())
            .collect();
        Laurent::new(low, c, &self.zero)
    }

    pub fn neg(&self) -> Self {
        Laurent {
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            zero: self.zero.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &F) -> Self {
        Laurent::new(
            self.val,
            self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
            &self.zero,
        )
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Laurent {
            val: self.val + k,
            coeffs: self.coeffs.clone(),
            zero: self.zero.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Laurent::zero(self.val + o.val, &self.zero);
        }
        let len = self.coeffs.len().min(o.coeffs.len());
        let mut c = vec![self.zero.clone(); len];
        for i in 0..len {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..len - i {
                c[i + j] = c[i + j].clone() + self.coeffs[i].clone() * o.coeffs[j].clone();
            }
        }
        Laurent::new(self.val + o.val, c, &self.zero)
    }

    /// Coefficient of `t^e` in `self·o` without forming the product.
    pub fn product_coeff(&self, o: &Self, e: i64) -> Option<F> {
        let prec = (self.val + o.precision()).min(o.val + self.precision());
        if e >= prec {
            return None;
        }
        let mut acc = self.zero.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            let j = e - self.val - i as i64 - o.val;
            if j < 0 {
                break;
            }
            if let Some(b) = o.coeffs.get(j as usize) {
                acc = acc + a.clone() * b.clone();
            }
        }
        Some(acc)
    }

    /// Multiplicative inverse; `None` for a zero series.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let len = self.coeffs.len();
        let a0i = self.coeffs[0].inv()?;
        let mut r = vec![self.zero.clone(); len];
        r[0] = a0i.clone();
        for k in 1..len {
            let mut s = self.zero.clone();
            for i in 1..=k {
                s = s + self.coeffs[i].clone() * r[k - i].clone();
            }
            r[k] = -(s * a0i.clone());
        }
        Some(Laurent::new(-self.val, r, &self.zero))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Laurent::constant(self.zero.one_like(), self.coeffs.len() as i64);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal derivative in `t`.
    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.clone() * self.zero.from_int(self.val + i as i64))
            .collect();
        let out = Laurent::new(self.val - 1, c, &self.zero);
        if self.is_zero() {
            Laurent::zero(self.val - 1, &self.zero)
        } else {
            out
        }
    }

    /// Add an exact constant without losing precision.
    pub fn add_const(&self, c: &F) -> Self {
        let prec = self.precision();
        if prec <= 0 || c.is_zero() {
            return self.clone();
        }
        let low = self.val.min(0);
        let v = (low..prec)
            .map(|e| {
                let x = self.coeff(e).unwrap();
                if e == 0 {
                    x + c.clone()
                } else {
                    x
                }
            })
            .collect();
        Laurent::new(low, v, &self.zero)
    }

    /// Evaluate a polynomial at this series; `None` for the zero polynomial.
    /// A constant polynomial gets the relative precision of `at`.
    pub fn eval_poly(p: &Poly<F>, at: &Self) -> Option<Self> {
        let d = p.degree()?;
        if d == 0 {
            return Some(Laurent::constant(p.coeff(0), at.coeffs.len() as i64));
        }
        let mut pw = at.clone();
        let mut acc = at.scale(&p.coeff(1));
        for i in 2..=d {
            pw = pw.mul(at);
            acc = acc.add(&pw.scale(&p.coeff(i)));
        }
        Some(acc.add_const(&p.coeff(0)))
    }
}

impl<F: Field> fmt::Debug for Laurent<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{}·{:?} + O(t^{})", self.val, self.coeffs, self.precision())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::field::PrimeField;

    #[test]
    fn inverse_of_one_minus_t_is_geometric() {
        let f = PrimeField::new(17).unwrap();
        let s = Laurent::new(0, vec![f.one(), -f.one(), f.zero(), f.zero()], &f.zero());
        let i = s.inv().unwrap();
        for e in 0..4 {
            assert_eq!(i.coeff(e), Some(f.one()));
        }
        assert_eq!(i.coeff(4), None);
    }

    #[test]
    fn precision_is_tracked_through_products() {
        let f = PrimeField::new(17).unwrap();
        let a = Laurent::new(-2, vec![f.one(); 5], &f.zero());
        let b = Laurent::new(3, vec![f.one(); 3], &f.zero());
        let c = a.mul(&b);
        assert_eq!(c.valuation(), 1);
        assert_eq!(c.precision(), 4);
    }
}
