//! Elements of `A[1/w]` written as `num / w^k`, and the shared arithmetic context.

use std::fmt;
use std::sync::Arc;

use crate::curve::{CoordPoly, Cover};
use crate::error::{Error, Result};
use crate::ring::fnfield::{local_xy, omega_factor};
use crate::ring::{Field, FnFieldElem, Laurent, Point};

/// `num / w^k` with `w` the Miller function of the cover.
#[derive(Clone, PartialEq, Eq)]
pub struct Frac<F: Field> {
    pub num: CoordPoly<F>,
    pub k: u32,
}

impl<F: Field> Frac<F> {
    pub fn new(num: CoordPoly<F>, k: u32) -> Self {
        Frac { num, k }
    }

    pub fn poly(num: CoordPoly<F>) -> Self {
        Frac { num, k: 0 }
    }

    pub fn zero(sample: &F) -> Self {
        Frac::poly(CoordPoly::zero(sample))
    }

    pub fn constant(c: F) -> Self {
        Frac::poly(CoordPoly::constant(c))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn neg(&self) -> Self {
        Frac::new(self.num.neg(), self.k)
    }

    pub fn scale(&self, c: &F) -> Self {
        Frac::new(self.num.scale(c), self.k)
    }

    pub fn sample(&self) -> &F {
        self.num.sample()
    }
}

impl<F: Field> fmt::Debug for Frac<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/w^{}", self.num, self.k)
    }
}

struct Inner<F: Field> {
    cover: Cover<F>,
    w_pows: Vec<CoordPoly<F>>,
    /// `res[K][d] = res_{O∞}(m_d · w^{−K} · ω)`
    res: Vec<Vec<F>>,
}

/// Cover plus cached powers of `w` and residues at O∞; cheap to clone and share.
#[derive(Clone)]
pub struct Ctx<F: Field> {
    inner: Arc<Inner<F>>,
}

impl<F: Field> fmt::Debug for Ctx<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ctx(n = {}, P0 = {:?})", self.inner.cover.n, self.inner.cover.p0)
    }
}

impl<F: Field> Ctx<F> {
    /// Context able to take residues of `p/w^K` with `K ≤ kmax` and pole order of `p` ≤ `dmax`.
    pub fn new(cover: Cover<F>, kmax: u32, dmax: usize) -> Result<Self> {
        let mut w_pows = vec![CoordPoly::constant(cover.curve.zero().one_like())];
        for k in 1..=kmax as usize + 4 {
            let next = cover.mul(&w_pows[k - 1], &cover.w);
            w_pows.push(next);
        }
        let res = residue_table(&cover, kmax, dmax)?;
        Ok(Ctx {
            inner: Arc::new(Inner { cover, w_pows, res }),
        })
    }

    pub fn cover(&self) -> &Cover<F> {
        &self.inner.cover
    }

    pub fn n(&self) -> u32 {
        self.inner.cover.n
    }

    pub fn zero(&self) -> F {
        self.inner.cover.curve.zero()
    }

    pub fn one(&self) -> F {
        self.zero().one_like()
    }

    pub fn kmax(&self) -> u32 {
        self.inner.res.len() as u32 - 1
    }

    pub fn dmax(&self) -> usize {
        self.inner.res[0].len() - 1
    }

    pub fn w_pow(&self, k: u32) -> CoordPoly<F> {
        match self.inner.w_pows.get(k as usize) {
            Some(p) => p.clone(),
            None => {
                let mut acc = self.inner.w_pows.last().unwrap().clone();
                for _ in self.inner.w_pows.len()..=k as usize {
                    acc = self.inner.cover.mul(&acc, &self.inner.cover.w);
                }
                acc
            }
        }
    }

    pub fn pmul(&self, a: &CoordPoly<F>, b: &CoordPoly<F>) -> CoordPoly<F> {
        self.inner.cover.mul(a, b)
    }

    pub fn mul(&self, a: &Frac<F>, b: &Frac<F>) -> Frac<F> {
        if a.is_zero() || b.is_zero() {
            return Frac::zero(&self.zero());
        }
        Frac::new(self.pmul(&a.num, &b.num), a.k + b.k)
    }

    /// Rewrite over `w^k` (requires `k ≥ a.k`).
    pub fn lift(&self, a: &Frac<F>, k: u32) -> Frac<F> {
        assert!(k >= a.k, "cannot lower the denominator exponent");
        if a.k == k || a.is_zero() {
            return Frac::new(a.num.clone(), k);
        }
        Frac::new(self.pmul(&a.num, &self.w_pow(k - a.k)), k)
    }

    pub fn add(&self, a: &Frac<F>, b: &Frac<F>) -> Frac<F> {
        let k = a.k.max(b.k);
        Frac::new(self.lift(a, k).num.add(&self.lift(b, k).num), k)
    }

    pub fn sub(&self, a: &Frac<F>, b: &Frac<F>) -> Frac<F> {
        self.add(a, &b.neg())
    }

    pub fn eq(&self, a: &Frac<F>, b: &Frac<F>) -> bool {
        self.sub(a, b).is_zero()
    }

    /// Numerator coordinates over `w^k` with pole order ≤ `max_deg`.
    pub fn coords(&self, a: &Frac<F>, k: u32, max_deg: usize) -> Result<Vec<F>> {
        if a.k > k {
            return Err(Error::Budget(format!(
                "cochain with w^{} exceeds denominator budget w^{k}",
                a.k
            )));
        }
        self.lift(a, k).num.to_coords(max_deg).ok_or_else(|| {
            Error::Budget(format!("cochain exceeds pole-order budget {max_deg}"))
        })
    }

    pub fn from_coords(&self, c: &[F], k: u32) -> Frac<F> {
        Frac::new(CoordPoly::from_coords(c, &self.zero()), k)
    }

    pub fn to_fn(&self, a: &Frac<F>) -> Result<FnFieldElem<F>> {
        let w = &self.inner.cover.curve.w;
        a.num.to_fn(w).mul(&self.w_pow(a.k).to_fn(w).inv()?)
    }

    /// `res_{O∞}(a·ω)`.
    pub fn residue(&self, a: &Frac<F>) -> Result<F> {
        let mut acc = self.zero();
        let d = match a.num.degree() {
            Some(d) => d,
            None => return Ok(acc),
        };
        let row = self
            .inner
            .res
            .get(a.k as usize)
            .ok_or_else(|| Error::Precision(format!("residue table lacks w^{}", a.k)))?;
        if d >= row.len() {
            return Err(Error::Precision(format!("residue table lacks pole order {d}")));
        }
        for e in (0..=d).filter(|&e| e != 1) {
            let c = a.num.coeff(e);
            if !c.is_zero() {
                acc = acc + c * row[e].clone();
            }
        }
        Ok(acc)
    }
}

fn residue_table<F: Field>(cover: &Cover<F>, kmax: u32, dmax: usize) -> Result<Vec<Vec<F>>> {
    let z = cover.curve.zero();
    let len = dmax + 12;
    let (xs, ys) = local_xy(&cover.curve.w, &Point::Infinity, len)?;
    let om = omega_factor(&xs, &ys);
    let wl = {
        let u = Laurent::eval_poly(&cover.w.u, &xs);
        let v = Laurent::eval_poly(&cover.w.v, &xs).map(|v| v.mul(&ys));
        match (u, v) {
            (Some(u), Some(v)) => u.add(&v),
            (Some(u), None) => u,
            (None, Some(v)) => v,
            (None, None) => unreachable!("w is nonzero"),
        }
    };
    let winv = wl.inv().expect("w is nonzero");
    // monomial series m_d for d = 0..=dmax
    let mut mono: Vec<Option<Laurent<F>>> = vec![None; dmax + 1];
    let mut xp = Laurent::constant(z.one_like(), len as i64);
    for i in 0..=dmax / 2 {
        if 2 * i <= dmax {
            mono[2 * i] = Some(xp.clone());
        }
        if 2 * i + 3 <= dmax {
            mono[2 * i + 3] = Some(xp.mul(&ys));
        }
        xp = xp.mul(&xs);
    }
    let mut table = vec![];
    let mut s = om;
    for k in 0..=kmax {
        let mut row = vec![z.clone(); dmax + 1];
        for d in 0..=dmax {
            if let Some(m) = &mono[d] {
                let c = m.product_coeff(&s, -1).ok_or_else(|| {
                    Error::Precision(format!("residue of m_{d}/w^{k} beyond series precision"))
                })?;
                row[d] = c;
            }
        }
        table.push(row);
        s = s.mul(&winv);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Fixture;

    #[test]
    fn residue_table_matches_direct_expansion() {
        let fx = Fixture { p: 13, a: 1, b: 1, n: 3, p0: [10, 6] };
        let ctx = Ctx::new(fx.cover().unwrap(), 3, 20).unwrap();
        assert!(ctx.residue(&Frac::constant(ctx.one())).unwrap().is_zero());
        let f = ctx.to_fn(&Frac::new(CoordPoly::monomial(5, &ctx.zero()), 2)).unwrap();
        let direct = f.residue_at(&Point::Infinity).unwrap();
        let table = ctx.residue(&Frac::new(CoordPoly::monomial(5, &ctx.zero()), 2)).unwrap();
        assert_eq!(direct, table);
    }
}
