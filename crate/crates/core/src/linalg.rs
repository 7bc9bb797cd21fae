//! Dense exact linear algebra over a [`Field`].
//!
//! Everything reduces to [`Span`]: a fully reduced row-echelon basis of the span
//! of a list of vectors, with a configurable pivot priority and optional
//! tracking of how each basis row combines the original generators.

use std::fmt;

use crate::ring::Field;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
    zero: F,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize, sample: &F) -> Self {
        let zero = sample.zero_like();
        Matrix {
            rows,
            cols,
            data: vec![zero.clone(); rows * cols],
            zero,
        }
    }

    pub fn identity(n: usize, sample: &F) -> Self {
        let mut m = Matrix::zeros(n, n, sample);
        for i in 0..n {
            m.set(i, i, sample.one_like());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<F>], cols: usize, sample: &F) -> Self {
        let mut m = Matrix::zeros(rows.len(), cols, sample);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.data[i * cols..(i + 1) * cols].clone_from_slice(r);
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<F>], rows: usize, sample: &F) -> Self {
        let mut m = Matrix::zeros(rows, cols.len(), sample);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn sample(&self) -> &F {
        &self.zero
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows, &self.zero);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&o.data) {
            *a = a.clone() + b.clone();
        }
        m
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-self.zero.one_like()))
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut m = self.clone();
        for a in m.data.iter_mut() {
            *a = a.clone() * s.clone();
        }
        m
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut m = Matrix::zeros(self.rows, o.cols, &self.zero);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * m.cols + j;
                        m.data[idx] = m.data[idx].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| dot(self.row(i), v, &self.zero))
            .collect()
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Matrix::zeros(rows.len(), cols.len(), &self.zero);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        Span::new(self.cols, self.row_vecs()).dim()
    }

    /// Basis of the right null space `{x : Ax = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        Span::new(self.cols, self.row_vecs()).orthogonal_kernel()
    }

    /// Some solution of `Ax = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        let cols = self.col_vecs();
        let span = Span::tracked(self.rows, cols);
        span.coordinates(b)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let span = Span::tracked(self.rows, self.col_vecs());
        if span.dim() != self.rows {
            return None;
        }
        let n = self.rows;
        let mut inv = Matrix::zeros(n, n, &self.zero);
        for j in 0..n {
            let mut e = vec![self.zero.clone(); n];
            e[j] = self.zero.one_like();
            let x = span.coordinates(&e)?;
            for (i, v) in x.into_iter().enumerate() {
                inv.set(i, j, v);
            }
        }
        Some(inv)
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}×{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

pub fn dot<F: Field>(a: &[F], b: &[F], zero: &F) -> F {
    let mut s = zero.clone();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s = s + x.clone() * y.clone();
        }
    }
    s
}

pub fn is_zero_vec<F: Field>(v: &[F]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn add_vec<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub_vec<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale_vec<F: Field>(a: &[F], s: &F) -> Vec<F> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

/// `a += s·b`, touching only the nonzero positions `nz` of `b`.
fn axpy_sparse<F: Field>(a: &mut [F], s: &F, b: &[F], nz: &[usize]) {
    for &j in nz {
        a[j] = a[j].clone() + s.clone() * b[j].clone();
    }
}

fn nonzeros<F: Field>(v: &[F]) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| i)
        .collect()
}

/// Reduced row-echelon basis of a span.
///
/// Pivots are chosen by a priority list of columns: when a new vector is
/// inserted its pivot is its nonzero column earliest in the priority order.
/// Every stored row is zero in every other row's pivot column.
#[derive(Clone)]
pub struct Span<F: Field> {
    ambient: usize,
    rows: Vec<Vec<F>>,
    nz: Vec<Vec<usize>>,
    pivots: Vec<usize>,
    rank_of: Vec<usize>,
    combos: Option<Vec<Vec<F>>>,
    ngens: usize,
    pivot_row: Vec<Option<usize>>,
    zero: Option<F>,
}

impl<F: Field> Span<F> {
    pub fn new(ambient: usize, gens: Vec<Vec<F>>) -> Self {
        let order: Vec<usize> = (0..ambient).collect();
        Self::build(ambient, gens, &order, false)
    }

    /// Span that also records each basis row as a combination of the generators,
    /// enabling [`Span::coordinates`].
    pub fn tracked(ambient: usize, gens: Vec<Vec<F>>) -> Self {
        let order: Vec<usize> = (0..ambient).collect();
        Self::build(ambient, gens, &order, true)
    }

    /// Span with a pivot priority order (a permutation of `0..ambient`).
    pub fn with_priority(ambient: usize, gens: Vec<Vec<F>>, priority: &[usize]) -> Self {
        Self::build(ambient, gens, priority, false)
    }

    fn build(ambient: usize, gens: Vec<Vec<F>>, priority: &[usize], track: bool) -> Self {
        let zero = gens.first().and_then(|g| g.first()).map(|x| x.zero_like());
        let mut rank_of = vec![usize::MAX; ambient];
        for (r, &c) in priority.iter().enumerate() {
            rank_of[c] = r;
        }
        let ngens = gens.len();
        let mut s = Span {
            ambient,
            rows: vec![],
            nz: vec![],
            pivots: vec![],
            rank_of,
            combos: if track { Some(vec![]) } else { None },
            ngens,
            pivot_row: vec![None; ambient],
            zero,
        };
        for (gi, g) in gens.into_iter().enumerate() {
            assert_eq!(g.len(), ambient, "vector length mismatch");
            let combo = if track {
                let z = g[0].zero_like();
                let mut c = vec![z.clone(); ngens];
                c[gi] = z.one_like();
                Some(c)
            } else {
                None
            };
            s.insert(g, combo);
        }
        s
    }

    fn reduce_with_combo(&self, v: &mut Vec<F>, mut combo: Option<&mut Vec<F>>) {
        for (k, &pc) in self.pivots.iter().enumerate() {
            if v[pc].is_zero() {
                continue;
            }
            let c = -v[pc].clone();
            axpy_sparse(v, &c, &self.rows[k], &self.nz[k]);
            if let (Some(cb), Some(all)) = (combo.as_deref_mut(), self.combos.as_ref()) {
                let nzc = nonzeros(&all[k]);
                axpy_sparse(cb, &c, &all[k], &nzc);
            }
        }
    }

    fn insert(&mut self, mut v: Vec<F>, mut combo: Option<Vec<F>>) -> bool {
        self.reduce_with_combo(&mut v, combo.as_mut());
        let nz = nonzeros(&v);
        let pc = match nz.iter().min_by_key(|&&j| self.rank_of[j]) {
            Some(&j) => j,
            None => return false,
        };
        let inv = v[pc].inv().expect("nonzero pivot");
        let nzv = nz;
        for &j in &nzv {
            v[j] = v[j].clone() * inv.clone();
        }
        if let Some(c) = combo.as_mut() {
            for x in c.iter_mut() {
                *x = x.clone() * inv.clone();
            }
        }
        // clear the new pivot column in existing rows
        for k in 0..self.rows.len() {
            if self.rows[k][pc].is_zero() {
                continue;
            }
            let c = -self.rows[k][pc].clone();
            let row = &mut self.rows[k];
            axpy_sparse(row, &c, &v, &nzv);
            self.nz[k] = nonzeros(row);
            if let (Some(all), Some(cv)) = (self.combos.as_mut(), combo.as_ref()) {
                let nzc = nonzeros(cv);
                axpy_sparse(&mut all[k], &c, cv, &nzc);
            }
        }
        self.pivot_row[pc] = Some(self.rows.len());
        self.rows.push(v);
        self.nz.push(nzv);
        self.pivots.push(pc);
        if let (Some(all), Some(c)) = (self.combos.as_mut(), combo) {
            all.push(c);
        }
        true
    }

    /// Add a vector; returns whether the span grew. Not available on tracked spans.
    pub fn push(&mut self, v: Vec<F>) -> bool {
        assert!(self.combos.is_none(), "cannot extend a tracked span");
        if self.zero.is_none() {
            self.zero = v.first().map(|x| x.zero_like());
        }
        self.insert(v, None)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Normal form of `v`: zero in every pivot column.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut w = v.to_vec();
        self.reduce_with_combo(&mut w, None);
        w
    }

    pub fn contains(&self, v: &[F]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Coefficients of `v` in the original generators (tracked spans only).
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        let combos = self.combos.as_ref().expect("span is not tracked");
        if !self.contains(v) {
            return None;
        }
        let zero = v.first().map(|x| x.zero_like()).or(self.zero.clone())?;
        let mut out = vec![zero; self.ngens];
        for (k, &pc) in self.pivots.iter().enumerate() {
            if v[pc].is_zero() {
                continue;
            }
            let nzc = nonzeros(&combos[k]);
            axpy_sparse(&mut out, &v[pc], &combos[k], &nzc);
        }
        Some(out)
    }

    /// Coefficients of `v` in the echelon basis rows.
    pub fn basis_coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc].clone()).collect())
    }

    /// Null space of the matrix whose rows span this space.
    pub fn orthogonal_kernel(&self) -> Vec<Vec<F>> {
        let zero = match &self.zero {
            Some(z) => z.clone(),
            None => return vec![],
        };
        let free: Vec<usize> = (0..self.ambient)
            .filter(|&j| self.pivot_row[j].is_none())
            .collect();
        free.iter()
            .map(|&fcol| {
                let mut x = vec![zero.clone(); self.ambient];
                x[fcol] = zero.one_like();
                for (k, &pc) in self.pivots.iter().enumerate() {
                    x[pc] = -self.rows[k][fcol].clone();
                }
                x
            })
            .collect()
    }

    /// Columns that are not pivots: a basis of a complement, as coordinate positions.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ambient)
            .filter(|&j| self.pivot_row[j].is_none())
            .collect()
    }

    pub fn sum(&self, o: &Self) -> Self {
        let mut s = Span::new(self.ambient, self.rows.clone());
        for v in o.basis() {
            s.push(v.clone());
        }
        s
    }

    pub fn contains_span(&self, o: &Self) -> bool {
        o.basis().iter().all(|v| self.contains(v))
    }

    pub fn same_as(&self, o: &Self) -> bool {
        self.dim() == o.dim() && self.contains_span(o)
    }

    pub fn intersection(&self, o: &Self) -> Self {
        // x = Σ a_i u_i = Σ b_j v_j  ⇔  (a, −b) in the kernel of [U; V]ᵀ
        let zero = match self.zero.clone().or(o.zero.clone()) {
            Some(z) => z,
            None => return Span::new(self.ambient, vec![]),
        };
        let m = self.dim();
        let mut cols: Vec<Vec<F>> = self.rows.clone();
        cols.extend(o.rows.iter().cloned());
        if cols.is_empty() {
            return Span::new(self.ambient, vec![]);
        }
        let a = Matrix::from_cols(&cols, self.ambient, &zero);
        let ker = a.kernel();
        let vecs = ker
            .iter()
            .map(|k| {
                let mut x = vec![zero.clone(); self.ambient];
                for (i, c) in k[..m].iter().enumerate() {
                    if !c.is_zero() {
                        x = add_vec(&x, &scale_vec(&self.rows[i], c));
                    }
                }
                x
            })
            .collect();
        Span::new(self.ambient, vecs)
    }
}

impl<F: Field> fmt::Debug for Span<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Span(dim {} in {})", self.dim(), self.ambient)
    }
}

/// A subquotient `num / den` (with `den ⊆ num`) and a chosen basis of representatives.
#[derive(Clone, Debug)]
pub struct SubQuotient<F: Field> {
    pub num: Span<F>,
    pub den: Span<F>,
    reps: Vec<Vec<F>>,
    solver: Span<F>,
}

impl<F: Field> SubQuotient<F> {
    pub fn new(num: Span<F>, den: Span<F>) -> Self {
        debug_assert!(num.contains_span(&den));
        let mut acc = den.clone();
        let mut reps = vec![];
        for v in num.basis() {
            if acc.push(v.clone()) {
                reps.push(v.clone());
            }
        }
        let reduced: Vec<Vec<F>> = reps.iter().map(|r| den.reduce(r)).collect();
        let solver = Span::tracked(num.ambient(), reduced);
        SubQuotient {
            num,
            den,
            reps,
            solver,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[Vec<F>] {
        &self.reps
    }

    /// Coordinates of the class of `v` in the representative basis; `None` if `v ∉ num`.
    pub fn coords(&self, v: &[F]) -> Option<Vec<F>> {
        if !self.num.contains(v) {
            return None;
        }
        if self.reps.is_empty() {
            return Some(vec![]);
        }
        self.solver.coordinates(&self.den.reduce(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Fp, PrimeField};

    fn m(rows: &[&[i64]], f: PrimeField) -> Matrix<Fp> {
        let r: Vec<Vec<Fp>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| f.elem(x)).collect())
            .collect();
        Matrix::from_rows(&r, rows[0].len(), &f.zero())
    }

    #[test]
    fn kernel_is_annihilated() {
        let f = PrimeField::new(7).unwrap();
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 1], &[3, 6, 9, 5]], f);
        let k = a.kernel();
        assert_eq!(k.len(), 4 - a.rank());
        for v in &k {
            assert!(is_zero_vec(&a.mul_vec(v)));
        }
    }

    #[test]
    fn inverse_and_solve() {
        let f = PrimeField::new(11).unwrap();
        let a = m(&[&[2, 1, 0], &[0, 3, 1], &[1, 0, 4]], f);
        let i = a.inverse().unwrap();
        assert_eq!(a.mul(&i), Matrix::identity(3, &f.zero()));
        let b = vec![f.elem(1), f.elem(2), f.elem(3)];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
    }

    #[test]
    fn intersection_of_planes() {
        let f = PrimeField::new(13).unwrap();
        let e = |v: &[i64]| v.iter().map(|&x| f.elem(x)).collect::<Vec<_>>();
        let a = Span::new(3, vec![e(&[1, 0, 0]), e(&[0, 1, 0])]);
        let b = Span::new(3, vec![e(&[0, 1, 0]), e(&[0, 0, 1])]);
        let c = a.intersection(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&e(&[0, 5, 0])));
    }

    #[test]
    fn subquotient_coordinates() {
        let f = PrimeField::new(13).unwrap();
        let e = |v: &[i64]| v.iter().map(|&x| f.elem(x)).collect::<Vec<_>>();
        let num = Span::new(3, vec![e(&[1, 0, 0]), e(&[0, 1, 0])]);
        let den = Span::new(3, vec![e(&[1, 1, 0])]);
        let q = SubQuotient::new(num, den);
        assert_eq!(q.dim(), 1);
        let c1 = q.coords(&e(&[1, 0, 0])).unwrap();
        let c2 = q.coords(&e(&[0, 1, 0])).unwrap();
        assert_eq!(c1[0], -c2[0]);
        assert!(q.coords(&e(&[0, 0, 1])).is_none());
    }
}
