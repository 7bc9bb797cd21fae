//! Sparse multivariate polynomials over a field.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::ring::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly<F: Field> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, F>,
    zero: F,
}

impl<F: Field> MPoly<F> {
    pub fn zero(nvars: usize, sample: &F) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
            zero: sample.zero_like(),
        }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        let mut p = Self::zero(nvars, &c);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize, sample: &F) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars, sample);
        p.add_term(e, sample.one_like());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &F)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        let mut r = Self::zero(self.nvars, &self.zero);
        for (e, c) in &self.terms {
            r.terms.insert(e.clone(), -c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut r = Self::zero(self.nvars, &self.zero);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), c.clone() * s.clone());
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.nvars, &self.zero);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1.clone() * c2.clone());
            }
        }
        r
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut r = Self::zero(self.nvars, &self.zero);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            r.add_term(e2, c.clone() * self.zero.from_int(e[var] as i64));
        }
        r
    }

    pub fn eval(&self, x: &[F]) -> F {
        let mut acc = self.zero.clone();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                t = t * xi.pow(k as u64);
            }
            acc = acc + t;
        }
        acc
    }

    /// `[[exponents, coefficient], …]`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| json!([e, c.to_json()]))
                .collect(),
        )
    }
}

/// All exponent vectors in `nvars` variables of total degree `≤ deg`, graded.
pub fn monomials(nvars: usize, deg: u32) -> Vec<Vec<u32>> {
    let mut out = vec![];
    for d in 0..=deg {
        let mut cur = vec![0u32; nvars];
        fill(&mut out, &mut cur, 0, d);
    }
    out
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, i: usize, left: u32) {
    if cur.is_empty() {
        if left == 0 {
            out.push(vec![]);
        }
        return;
    }
    if i == cur.len() - 1 {
        cur[i] = left;
        out.push(cur.clone());
        cur[i] = 0;
        return;
    }
    for k in (0..=left).rev() {
        cur[i] = k;
        fill(out, cur, i + 1, left - k);
    }
    cur[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PrimeField;

    #[test]
    fn monomial_counts_are_binomial() {
        assert_eq!(monomials(2, 4).len(), 15);
        assert_eq!(monomials(3, 4).len(), 35);
        assert_eq!(monomials(3, 6).len(), 84);
    }

    #[test]
    fn product_rule_for_derivatives() {
        let f = PrimeField::new(53).unwrap();
        let x = MPoly::var(2, 0, &f.zero());
        let y = MPoly::var(2, 1, &f.zero());
        let p = x.mul(&x).add(&y.scale(&f.elem(3)));
        let q = x.mul(&y).add(&MPoly::constant(2, f.elem(7)));
        let lhs = p.mul(&q).derivative(0);
        let rhs = p.derivative(0).mul(&q).add(&p.mul(&q.derivative(0)));
        assert_eq!(lhs, rhs);
        assert_eq!(p.eval(&[f.elem(2), f.elem(1)]), f.elem(7));
    }
}
