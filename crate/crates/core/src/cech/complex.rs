//! The truncated two-term Čech complex of a bundle and its cohomology.
//!
//! `C⁰` is spanned by sections over `U₀` (numerators of bounded pole order)
//! and over `U₁` (`m_e/w^{K₁}` regular at O∞ to the required order).
//! `C¹` holds, per component, the numerator of a cochain written over `w^{K₁}`
//! with pole order at most a cap `≥ n·K₁ + N`, enlarged where off-diagonal
//! transition entries need room. The differential is
//! `δ(s₀, s₁) = g·s₀ − s₁`, landing in the `U₁` frame.

use super::bundle::Bundle;
use super::frac::{Ctx, Frac};
use crate::curve::{mono_degree, mono_dim, CoordPoly};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Span};
use crate::ring::Field;

/// Truncation parameters: `N` extra pole order in `C¹` and the denominator exponent `K₁`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub n_extra: usize,
    pub k1: u32,
}

impl Budget {
    pub fn for_bundle<F: Field>(b: &Bundle<F>, n: u32) -> Self {
        let k0 = b
            .p0_bound
            .iter()
            .map(|&c| if c < 0 { ((-c) as u32).div_ceil(n) } else { 0 })
            .max()
            .unwrap_or(0);
        Budget {
            n_extra: 6 * n as usize + 12,
            k1: (b.max_k() + k0 + 2).max(2),
        }
    }

    pub fn bumped(&self) -> Self {
        Budget {
            n_extra: self.n_extra + 5,
            k1: self.k1 + 1,
        }
    }

    pub fn max(&self, o: &Self) -> Self {
        Budget {
            n_extra: self.n_extra.max(o.n_extra),
            k1: self.k1.max(o.k1),
        }
    }
}

#[derive(Clone, Debug)]
pub enum C0Gen<F: Field> {
    /// `e_comp · num / w^k` over `U₀`.
    U0 { comp: usize, num: CoordPoly<F>, k: u32 },
    /// `e_comp · m_deg / w^{K₁}` over `U₁`.
    U1 { comp: usize, deg: usize },
}

impl<F: Field> C0Gen<F> {
    pub fn comp(&self) -> usize {
        match self {
            C0Gen::U0 { comp, .. } | C0Gen::U1 { comp, .. } => *comp,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CechComplex<F: Field> {
    pub ctx: Ctx<F>,
    pub bundle: Bundle<F>,
    pub budget: Budget,
    /// Pole-order cap of the `C¹` numerators, per component.
    pub caps: Vec<usize>,
    /// Start of each component's block in `C¹`; the last entry is the total.
    pub offsets: Vec<usize>,
    pub c0: Vec<C0Gen<F>>,
    pub d: Matrix<F>,
    /// Variation of the differential, present when the bundle carries one.
    pub d_eps: Option<Matrix<F>>,
}

impl<F: Field> CechComplex<F> {
    pub fn new(ctx: &Ctx<F>, bundle: &Bundle<F>, budget: Budget) -> Result<Self> {
        let n = ctx.n() as i64;
        let k1 = budget.k1;
        if k1 < 2 {
            return Err(Error::Budget("K1 must be at least 2".into()));
        }
        let z = ctx.zero();
        let r = bundle.rank;
        let k0: Vec<u32> = bundle
            .p0_bound
            .iter()
            .map(|&b| if b < 0 { ((-b) as u32).div_ceil(n as u32) } else { 0 })
            .collect();
        // entries (i, j, degree, k) of g and its variation
        let mut entries = vec![];
        let mut scan = |mat: &Vec<Vec<Frac<F>>>| -> Result<()> {
            for (i, row) in mat.iter().enumerate() {
                for (j, q) in row.iter().enumerate() {
                    if q.is_zero() {
                        continue;
                    }
                    if q.k + k0[j] > k1 {
                        return Err(Error::Budget(format!(
                            "transition needs w^{} but K1 = {k1}",
                            q.k + k0[j]
                        )));
                    }
                    entries.push((i, j, q.num.degree().unwrap() as i64, q.k));
                }
            }
            Ok(())
        };
        scan(&bundle.g)?;
        if let Some((ge, _)) = &bundle.g_eps {
            scan(ge)?;
        }
        // Each component gets U₀ numerators up to N beyond what its own C¹
        // block absorbs; C¹ caps grow until every image fits.
        let base = n * k1 as i64 + budget.n_extra as i64;
        let mut caps = vec![base; r];
        let n0_of = |caps: &[i64], j: usize| caps[j] - n * (k1 - k0[j]) as i64;
        let mut stable = false;
        for _ in 0..4 * r + 4 {
            let mut next = caps.clone();
            for &(i, j, dq, kq) in &entries {
                let need = n0_of(&caps, j) + dq + n * (k1 - kq - k0[j]) as i64;
                next[i] = next[i].max(need);
            }
            if next == caps {
                stable = true;
                break;
            }
            caps = next;
        }
        if !stable {
            return Err(Error::Budget("pole-order caps do not settle".into()));
        }
        let mut c0 = vec![];
        for j in 0..r {
            let b = bundle.p0_bound[j];
            let order = (n * k0[j] as i64 + b).max(0) as usize;
            let n0 = n0_of(&caps, j);
            if n0 >= 0 {
                let n0 = n0 as usize;
                let dim = mono_dim(n0);
                let allowed: Vec<usize> = (0..dim).filter(|&i| mono_degree(i) <= n0).collect();
                if order == 0 {
                    for &i in &allowed {
                        c0.push(C0Gen::U0 {
                            comp: j,
                            num: CoordPoly::monomial(mono_degree(i), &z),
                            k: k0[j],
                        });
                    }
                } else {
                    let cond = ctx.cover().jet_conditions(n0, order)?;
                    let sub = cond.select(&(0..order).collect::<Vec<_>>(), &allowed);
                    // echelon from the top so generators have distinct leading degrees
                    let ker = Span::with_priority(
                        allowed.len(),
                        sub.kernel(),
                        &(0..allowed.len()).rev().collect::<Vec<_>>(),
                    )
                    .basis()
                    .to_vec();
                    for kv in ker {
                        let mut v = vec![z.clone(); dim];
                        for (t, &i) in allowed.iter().enumerate() {
                            v[i] = kv[t].clone();
                        }
                        c0.push(C0Gen::U0 {
                            comp: j,
                            num: CoordPoly::from_coords(&v, &z),
                            k: k0[j],
                        });
                    }
                }
            }
            let top = n * k1 as i64 - bundle.inf_bound[j];
            if top >= 0 {
                for e in (0..=top as usize).filter(|&e| e != 1) {
                    c0.push(C0Gen::U1 { comp: j, deg: e });
                }
            }
        }
        let caps: Vec<usize> = caps.into_iter().map(|c| c as usize).collect();
        let mut offsets = vec![0];
        for &c in &caps {
            offsets.push(offsets.last().unwrap() + mono_dim(c));
        }
        let mut cx = CechComplex {
            ctx: ctx.clone(),
            bundle: bundle.clone(),
            budget,
            caps,
            offsets,
            c0,
            d: Matrix::zeros(0, 0, &z),
            d_eps: None,
        };
        cx.d = cx.differential(&bundle.g, true)?;
        if let Some((ge, _)) = &bundle.g_eps {
            cx.d_eps = Some(cx.differential(ge, false)?);
        }
        Ok(cx)
    }

    fn differential(&self, g: &[Vec<Frac<F>>], with_u1: bool) -> Result<Matrix<F>> {
        let z = self.ctx.zero();
        let mut d = Matrix::zeros(self.c1_dim(), self.c0_dim(), &z);
        for (col, gen) in self.c0.iter().enumerate() {
            let image: Vec<Frac<F>> = match gen {
                C0Gen::U0 { comp, num, k } => {
                    let s = Frac::new(num.clone(), *k);
                    (0..self.bundle.rank)
                        .map(|i| self.ctx.mul(&g[i][*comp], &s))
                        .collect()
                }
                C0Gen::U1 { comp, deg } => {
                    if !with_u1 {
                        continue;
                    }
                    (0..self.bundle.rank)
                        .map(|i| {
                            if i == *comp {
                                Frac::new(CoordPoly::monomial(*deg, &z).neg(), self.budget.k1)
                            } else {
                                Frac::zero(&z)
                            }
                        })
                        .collect()
                }
            };
            let v = self.cochain_coords(&image)?;
            for (row, x) in v.into_iter().enumerate() {
                if !x.is_zero() {
                    d.set(row, col, x);
                }
            }
        }
        Ok(d)
    }

    pub fn rank(&self) -> usize {
        self.bundle.rank
    }

    /// Coordinate range of component `i` in `C¹`.
    pub fn block(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    fn comp_of(&self, idx: usize) -> usize {
        self.offsets.partition_point(|&o| o <= idx) - 1
    }

    pub fn c0_dim(&self) -> usize {
        self.c0.len()
    }

    pub fn c1_dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn c0_level(&self, idx: usize) -> i32 {
        self.bundle.level[self.c0[idx].comp()]
    }

    pub fn c1_level(&self, idx: usize) -> i32 {
        self.bundle.level[self.comp_of(idx)]
    }

    /// `C¹` coordinates of a cochain given per component in the `U₁` frame.
    pub fn cochain_coords(&self, c: &[Frac<F>]) -> Result<Vec<F>> {
        assert_eq!(c.len(), self.bundle.rank);
        let mut out = Vec::with_capacity(self.c1_dim());
        for (x, &cap) in c.iter().zip(&self.caps) {
            out.extend(self.ctx.coords(x, self.budget.k1, cap)?);
        }
        Ok(out)
    }

    pub fn cochain(&self, v: &[F]) -> Vec<Frac<F>> {
        (0..self.bundle.rank)
            .map(|i| self.ctx.from_coords(&v[self.block(i)], self.budget.k1))
            .collect()
    }

    /// The `(s₀, s₁)` pair of a `C⁰` vector, componentwise.
    pub fn section(&self, v: &[F]) -> (Vec<Frac<F>>, Vec<Frac<F>>) {
        let z = self.ctx.zero();
        let r = self.bundle.rank;
        let mut s0 = vec![Frac::zero(&z); r];
        let mut s1 = vec![Frac::zero(&z); r];
        for (c, gen) in v.iter().zip(&self.c0) {
            if c.is_zero() {
                continue;
            }
            match gen {
                C0Gen::U0 { comp, num, k } => {
                    s0[*comp] = self.ctx.add(&s0[*comp], &Frac::new(num.scale(c), *k));
                }
                C0Gen::U1 { comp, deg } => {
                    let t = Frac::new(CoordPoly::monomial(*deg, &z).scale(c), self.budget.k1);
                    s1[*comp] = self.ctx.add(&s1[*comp], &t);
                }
            }
        }
        (s0, s1)
    }

    /// The `C⁰` vector of a pair `(s₀, s₁)`; fails if it is outside the truncation.
    pub fn c0_vector(&self, s0: &[Frac<F>], s1: &[Frac<F>]) -> Result<Vec<F>> {
        let z = self.ctx.zero();
        let mut out = vec![z.clone(); self.c0_dim()];
        for comp in 0..self.bundle.rank {
            let u0: Vec<usize> = (0..self.c0.len())
                .filter(|&i| matches!(&self.c0[i], C0Gen::U0 { comp: c, .. } if *c == comp))
                .collect();
            if !s0[comp].is_zero() {
                let (k0, deg) = match u0.first().map(|&i| &self.c0[i]) {
                    Some(C0Gen::U0 { k, .. }) => (*k, self.c0_u0_cap(&u0)),
                    _ => return Err(Error::Budget(format!("no U0 sections in component {comp}"))),
                };
                let target = self.ctx.coords(&s0[comp], k0, deg)?;
                let cols: Vec<Vec<F>> = u0
                    .iter()
                    .map(|&i| match &self.c0[i] {
                        C0Gen::U0 { num, .. } => num.to_coords(deg).expect("generator fits"),
                        C0Gen::U1 { .. } => unreachable!(),
                    })
                    .collect();
                let sol = Matrix::from_cols(&cols, target.len(), &z)
                    .solve(&target)
                    .ok_or_else(|| Error::Budget(format!("U0 section outside truncation in component {comp}")))?;
                for (t, &i) in u0.iter().enumerate() {
                    out[i] = sol[t].clone();
                }
            }
            if !s1[comp].is_zero() {
                let top = self.ctx.n() as i64 * self.budget.k1 as i64 - self.bundle.inf_bound[comp];
                if top < 0 {
                    return Err(Error::Budget(format!("no U1 sections in component {comp}")));
                }
                let c = self.ctx.coords(&s1[comp], self.budget.k1, top as usize)?;
                for (i, gen) in self.c0.iter().enumerate() {
                    if let C0Gen::U1 { comp: cc, deg } = gen {
                        if *cc == comp {
                            out[i] = c[crate::curve::mono_index(*deg)].clone();
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn c0_u0_cap(&self, idx: &[usize]) -> usize {
        idx.iter()
            .filter_map(|&i| match &self.c0[i] {
                C0Gen::U0 { num, .. } => num.degree(),
                C0Gen::U1 { .. } => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Column priority for normal forms: high pole order first.
    pub fn priority(&self) -> Vec<usize> {
        let mut cols: Vec<usize> = (0..self.c1_dim()).collect();
        cols.sort_by_key(|&c| {
            let i = self.comp_of(c);
            (std::cmp::Reverse(c - self.offsets[i]), i)
        });
        cols
    }

    pub fn cohomology(&self) -> Cohomology<F> {
        let h0 = self.d.kernel();
        let image = Span::with_priority(self.c1_dim(), self.d.col_vecs(), &self.priority());
        let h1_cols = image.free_columns();
        Cohomology { h0, image, h1_cols }
    }

    /// Preimage of a coboundary under `δ`.
    pub fn solve(&self, c: &[F]) -> Option<Vec<F>> {
        self.d.solve(c)
    }
}

/// `H⁰` as the kernel of `δ`; `H¹` with normal forms relative to the image.
#[derive(Clone, Debug)]
pub struct Cohomology<F: Field> {
    pub h0: Vec<Vec<F>>,
    pub image: Span<F>,
    /// Coordinates of `C¹` not hit by pivots; unit vectors there represent a basis of `H¹`.
    pub h1_cols: Vec<usize>,
}

impl<F: Field> Cohomology<F> {
    pub fn h0_dim(&self) -> usize {
        self.h0.len()
    }

    pub fn h1_dim(&self) -> usize {
        self.h1_cols.len()
    }

    pub fn nf(&self, c: &[F]) -> Vec<F> {
        self.image.reduce(c)
    }

    /// Coordinates of the class of `c` in the unit-vector basis.
    pub fn classify(&self, c: &[F]) -> Vec<F> {
        let r = self.nf(c);
        self.h1_cols.iter().map(|&i| r[i].clone()).collect()
    }

    pub fn is_coboundary(&self, c: &[F]) -> bool {
        self.image.contains(c)
    }
}

/// `(h⁰, h¹)` at the given budget, cross-checked against a bumped budget.
pub fn stable_dims<F: Field>(ctx: &Ctx<F>, bundle: &Bundle<F>, budget: Budget) -> Result<(usize, usize)> {
    let a = CechComplex::new(ctx, bundle, budget)?.cohomology();
    let b = CechComplex::new(ctx, bundle, budget.bumped())?.cohomology();
    let (da, db) = ((a.h0_dim(), a.h1_dim()), (b.h0_dim(), b.h1_dim()));
    if da != db {
        return Err(Error::Budget(format!(
            "dimensions {da:?} at {budget:?} but {db:?} at {:?}",
            budget.bumped()
        )));
    }
    Ok(da)
}

/// Serre pairing `Σ_i res_{O∞}(x_i · c_i · ω)` of a dual section (in the `U₁`
/// frame) against a cocycle; `perm[i]` names the cocycle component paired with `x_i`
/// and `weight[i]` scales that term.
pub fn serre_pairing<F: Field>(
    ctx: &Ctx<F>,
    x: &[Frac<F>],
    c: &[Frac<F>],
    perm: &[usize],
    weight: &[F],
) -> Result<F> {
    let mut acc = ctx.zero();
    for i in 0..x.len() {
        if x[i].is_zero() || c[perm[i]].is_zero() || weight[i].is_zero() {
            continue;
        }
        acc = acc + weight[i].clone() * ctx.residue(&ctx.mul(&x[i], &c[perm[i]]))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Fixture;

    fn ctx() -> Ctx<crate::ring::Fp> {
        let fx = Fixture { p: 13, a: 1, b: 1, n: 3, p0: [10, 6] };
        Ctx::new(fx.cover().unwrap(), 8, 80).unwrap()
    }

    #[test]
    fn line_bundle_dimensions_obey_riemann_roch() {
        let ctx = ctx();
        for (a, c, expect) in [
            (0, 0, (1, 1)),
            (2, 0, (2, 0)),
            (5, 0, (5, 0)),
            (-3, 0, (0, 3)),
            (-1, 0, (0, 1)),
            (1, 1, (2, 0)),
            (-2, -1, (0, 3)),
            (-1, 1, (0, 0)),
            (-3, 3, (1, 1)),
            (4, -2, (2, 0)),
        ] {
            let b = Bundle::line(&ctx, a, c);
            let dims = stable_dims(&ctx, &b, Budget::for_bundle(&b, 3)).unwrap();
            assert_eq!(dims, expect, "O({a}·O∞ + {c}·P0)");
        }
    }

    #[test]
    fn global_sections_glue() {
        let ctx = ctx();
        let b = Bundle::line(&ctx, 4, 0);
        let cx = CechComplex::new(&ctx, &b, Budget::for_bundle(&b, 3)).unwrap();
        for v in cx.cohomology().h0 {
            let (s0, s1) = cx.section(&v);
            assert!(ctx.eq(&s0[0], &s1[0]));
        }
    }
}
