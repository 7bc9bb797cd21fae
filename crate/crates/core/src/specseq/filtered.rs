//! Spectral sequence of a two-term filtered complex `C⁰ → C¹`.
//!
//! The filtration is by coordinates: each basis vector of `C⁰` and `C¹` has a
//! level, and `F^p` is spanned by the basis vectors of level `≥ p`. The
//! differential must not lower levels.

use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, Matrix, Span, SubQuotient};
use crate::ring::Field;

#[derive(Clone, Debug)]
pub struct FilteredComplex<F: Field> {
    pub d: Matrix<F>,
    pub level0: Vec<i32>,
    pub level1: Vec<i32>,
}

/// `E_r^p` in degrees 0 and 1 for every `p` of one page, with `d_r`.
#[derive(Clone, Debug)]
pub struct Page<F: Field> {
    pub r: i32,
    pub p_min: i32,
    pub e0: Vec<SubQuotient<F>>,
    pub e1: Vec<SubQuotient<F>>,
    /// `d[k]` maps `E_r^{p_min + k}` (degree 0) to `E_r^{p_min + k + r}` (degree 1);
    /// `None` when the target is outside the filtration range.
    pub d: Vec<Option<Matrix<F>>>,
}

impl<F: Field> Page<F> {
    pub fn dims0(&self) -> Vec<usize> {
        self.e0.iter().map(|s| s.dim()).collect()
    }

    pub fn dims1(&self) -> Vec<usize> {
        self.e1.iter().map(|s| s.dim()).collect()
    }

    pub fn e0_at(&self, p: i32) -> Option<&SubQuotient<F>> {
        self.e0.get(usize::try_from(p - self.p_min).ok()?)
    }

    pub fn e1_at(&self, p: i32) -> Option<&SubQuotient<F>> {
        self.e1.get(usize::try_from(p - self.p_min).ok()?)
    }
}

impl<F: Field> FilteredComplex<F> {
    pub fn new(d: Matrix<F>, level0: Vec<i32>, level1: Vec<i32>) -> Result<Self> {
        let fc = FilteredComplex { d, level0, level1 };
        for j in 0..fc.d.cols() {
            for i in 0..fc.d.rows() {
                if !fc.d.get(i, j).is_zero() && fc.level1[i] < fc.level0[j] {
                    return Err(Error::Precondition(format!(
                        "differential lowers the filtration at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(fc)
    }

    fn zero(&self) -> F {
        self.d.sample().zero_like()
    }

    pub fn p_range(&self) -> (i32, i32) {
        let all = self.level0.iter().chain(&self.level1);
        (
            all.clone().copied().min().unwrap_or(0),
            all.copied().max().unwrap_or(0),
        )
    }

    fn cols_at_least(levels: &[i32], p: i32) -> Vec<usize> {
        (0..levels.len()).filter(|&i| levels[i] >= p).collect()
    }

    fn unit_span(&self, dim: usize, idx: &[usize]) -> Span<F> {
        let z = self.zero();
        let gens = idx
            .iter()
            .map(|&i| {
                let mut v = vec![z.clone(); dim];
                v[i] = z.one_like();
                v
            })
            .collect();
        Span::new(dim, gens)
    }

    /// `F^p C¹`.
    pub fn f1(&self, p: i32) -> Span<F> {
        self.unit_span(self.level1.len(), &Self::cols_at_least(&self.level1, p))
    }

    /// `Z_r^p = F^p C⁰ ∩ d⁻¹(F^{p+r} C¹)`.
    pub fn z0(&self, r: i32, p: i32) -> Span<F> {
        let z = self.zero();
        let n0 = self.level0.len();
        let cols = Self::cols_at_least(&self.level0, p);
        if r <= 0 {
            return self.unit_span(n0, &cols);
        }
        let rows: Vec<usize> = (0..self.level1.len())
            .filter(|&i| self.level1[i] < p + r)
            .collect();
        if cols.is_empty() {
            return Span::new(n0, vec![]);
        }
        let ker = if rows.is_empty() {
            (0..cols.len())
                .map(|k| {
                    let mut v = vec![z.clone(); cols.len()];
                    v[k] = z.one_like();
                    v
                })
                .collect()
        } else {
            self.d.select(&rows, &cols).kernel()
        };
        let gens = ker
            .into_iter()
            .map(|k| {
                let mut v = vec![z.clone(); n0];
                for (t, &c) in cols.iter().enumerate() {
                    v[c] = k[t].clone();
                }
                v
            })
            .collect();
        Span::new(n0, gens)
    }

    fn image(&self, s: &Span<F>) -> Span<F> {
        Span::new(
            self.level1.len(),
            s.basis().iter().map(|v| self.d.mul_vec(v)).collect(),
        )
    }

    pub fn page(&self, r: i32) -> Page<F> {
        let (lo, hi) = self.p_range();
        let mut e0 = vec![];
        let mut e1 = vec![];
        for p in lo..=hi {
            let num0 = self.z0(r, p);
            let den0 = self.z0(r - 1, p + 1);
            e0.push(SubQuotient::new(num0, den0));
            let num1 = self.f1(p);
            let den1 = self.f1(p + 1).sum(&self.image(&self.z0(r - 1, p - r + 1)));
            e1.push(SubQuotient::new(num1, den1));
        }
        let mut d = vec![];
        for p in lo..=hi {
            let src = &e0[(p - lo) as usize];
            let tgt = usize::try_from(p + r - lo).ok().and_then(|k| e1.get(k));
            d.push(tgt.map(|t| {
                let cols: Vec<Vec<F>> = src
                    .reps()
                    .iter()
                    .map(|x| {
                        t.coords(&self.d.mul_vec(x))
                            .expect("d_r lands in the filtration step")
                    })
                    .collect();
                Matrix::from_cols(&cols, t.dim(), &self.zero())
            }));
        }
        Page {
            r,
            p_min: lo,
            e0,
            e1,
            d,
        }
    }

    /// Checks `dim E_{r+1} = dim H(E_r, d_r)` at every `p`.
    pub fn check_homology(&self, page: &Page<F>, next: &Page<F>) -> Result<()> {
        let len = page.e0.len();
        for k in 0..len {
            let rank_out = page.d[k].as_ref().map_or(0, |m| m.rank());
            let rank_in = (0..len)
                .filter(|&s| s as i32 + page.r == k as i32)
                .map(|s| page.d[s].as_ref().map_or(0, |m| m.rank()))
                .sum::<usize>();
            let h0 = page.e0[k].dim() - rank_out;
            let h1 = page.e1[k].dim() - rank_in;
            if next.e0[k].dim() != h0 || next.e1[k].dim() != h1 {
                return Err(Error::Falsified(format!(
                    "page {} at p = {} is not the homology of page {}",
                    next.r,
                    page.p_min + k as i32,
                    page.r
                )));
            }
        }
        Ok(())
    }

    /// Whether two pages have the same subquotients as subspaces of the cochains.
    pub fn same_page(a: &Page<F>, b: &Page<F>) -> bool {
        let eq = |x: &SubQuotient<F>, y: &SubQuotient<F>| {
            x.num.sum(&x.den).same_as(&y.num.sum(&y.den)) && x.den.same_as(&y.den)
        };
        a.e0.len() == b.e0.len()
            && a.e0.iter().zip(&b.e0).all(|(x, y)| eq(x, y))
            && a.e1.iter().zip(&b.e1).all(|(x, y)| eq(x, y))
    }

    /// `(dim H⁰, dim H¹)` of the underlying complex.
    pub fn cohomology_dims(&self) -> (usize, usize) {
        let rk = self.d.rank();
        (self.level0.len() - rk, self.level1.len() - rk)
    }

    /// The generic recipe for `d₂`: for `x ∈ F^p C⁰` whose `E₁` class is a `d₁`-cycle,
    /// find `y ∈ F^{p+1} C⁰` with `d(x + y) ∈ F^{p+2} C¹` and return `d(x + y)`.
    pub fn zigzag(&self, x: &[F], p: i32) -> Result<Vec<F>> {
        let z = self.zero();
        let dx = self.d.mul_vec(x);
        let rows: Vec<usize> = (0..self.level1.len())
            .filter(|&i| self.level1[i] < p + 2)
            .collect();
        if rows.iter().any(|&i| self.level1[i] < p && !dx[i].is_zero()) {
            return Err(Error::Precondition("x is not in F^p".into()));
        }
        let cols = Self::cols_at_least(&self.level0, p + 1);
        let rhs: Vec<F> = rows.iter().map(|&i| -dx[i].clone()).collect();
        let y = if is_zero_vec(&rhs) {
            vec![z.clone(); self.level0.len()]
        } else {
            let sub = self.d.select(&rows, &cols);
            let sol = sub.solve(&rhs).ok_or_else(|| {
                Error::Precondition("class is not a d₁-cycle; d₂ is undefined".into())
            })?;
            let mut y = vec![z.clone(); self.level0.len()];
            for (t, &c) in cols.iter().enumerate() {
                y[c] = sol[t].clone();
            }
            y
        };
        let xy: Vec<F> = x.iter().zip(&y).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(self.d.mul_vec(&xy))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PrimeField;

    /// `C⁰ = k² → C¹ = k²` with an isomorphism that raises the level by 2.
    #[test]
    fn pages_of_a_shifted_isomorphism() {
        let f = PrimeField::new(7).unwrap();
        let z = f.zero();
        let d = Matrix::from_rows(
            &[vec![z, z], vec![f.one(), z], vec![z, z], vec![z, f.elem(3)]],
            2,
            &z,
        );
        let fc = FilteredComplex::new(d, vec![0, 1], vec![0, 2, 1, 3]).unwrap();
        let e1 = fc.page(1);
        let e2 = fc.page(2);
        let e3 = fc.page(3);
        fc.check_homology(&e1, &e2).unwrap();
        fc.check_homology(&e2, &e3).unwrap();
        assert_eq!(e2.dims0(), vec![1, 1, 0, 0]);
        assert_eq!(e3.dims0(), vec![0, 0, 0, 0]);
        assert_eq!(e3.dims1(), vec![1, 1, 0, 0]);
        assert_eq!(fc.cohomology_dims(), (0, 2));
        let out = fc.zigzag(&[f.one(), z], 0).unwrap();
        assert_eq!(out, vec![z, f.one(), z, z]);
    }
}
