//! Elliptic curves in short Weierstrass form: group law, torsion, Miller
//! functions and Riemann–Roch spaces supported at O∞ and an auxiliary point.

pub mod coord;

use serde::{Deserialize, Serialize};

pub use coord::{mono_degree, mono_dim, mono_index, CoordPoly};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::{Field, FnFieldElem, Fp, Point, Poly, PrimeField, Weierstrass};

pub type CurvePoint<F> = Point<F>;

/// A nonsingular curve `y² = x³ + ax + b`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Curve<F: Field> {
    pub w: Weierstrass<F>,
    rhs: Poly<F>,
}

impl<F: Field> Curve<F> {
    pub fn new(a: F, b: F) -> Result<Self> {
        let w = Weierstrass::new(a, b);
        if w.discriminant_part().is_zero() {
            return Err(Error::Precondition("singular curve: 4a³ + 27b² = 0".into()));
        }
        let rhs = w.rhs();
        Ok(Curve { w, rhs })
    }

    pub fn a(&self) -> &F {
        &self.w.a
    }

    pub fn b(&self) -> &F {
        &self.w.b
    }

    pub fn zero(&self) -> F {
        self.w.a.zero_like()
    }

    /// `x³ + ax + b`.
    pub fn rhs(&self) -> &Poly<F> {
        &self.rhs
    }

    pub fn contains(&self, p: &Point<F>) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => self.w.contains(x, y),
        }
    }

    pub fn point(&self, x: F, y: F) -> Result<Point<F>> {
        let p = Point::Affine(x, y);
        if !self.contains(&p) {
            return Err(Error::Precondition(format!("{p:?} is not on the curve")));
        }
        Ok(p)
    }

    pub fn neg(&self, p: &Point<F>) -> Point<F> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), -y.clone()),
        }
    }

    /// Slope of the chord or tangent through `p`, `q`; `None` when vertical.
    fn slope(&self, p: &Point<F>, q: &Point<F>) -> Option<F> {
        let (x1, y1) = p.coords()?;
        let (x2, y2) = q.coords()?;
        if x1 != x2 {
            return Some((y2.clone() - y1.clone()) * (x2.clone() - x1.clone()).inv().unwrap());
        }
        if y1 != y2 || y1.is_zero() {
            return None;
        }
        let num = self.zero().from_int(3) * x1.clone() * x1.clone() + self.w.a.clone();
        Some(num * (y1.clone() + y1.clone()).inv().unwrap())
    }

    /// `group_add`: chord–tangent law with identity O∞.
    pub fn add(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        match (p, q) {
            (Point::Infinity, _) => q.clone(),
            (_, Point::Infinity) => p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, _)) => match self.slope(p, q) {
                None => Point::Infinity,
                Some(l) => {
                    let x3 = l.clone() * l.clone() - x1.clone() - x2.clone();
                    let y3 = l * (x1.clone() - x3.clone()) - y1.clone();
                    Point::Affine(x3, y3)
                }
            },
        }
    }

    pub fn mul(&self, k: i64, p: &Point<F>) -> Point<F> {
        let mut base = if k < 0 { self.neg(p) } else { p.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Point::Infinity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// All rational points, O∞ first (finite fields only).
    pub fn points(&self) -> Vec<Point<F>> {
        let mut out = vec![Point::Infinity];
        if let Some(xs) = self.zero().elements() {
            let ys = self.zero().elements().unwrap();
            for x in xs {
                let r = self.rhs.eval(&x);
                for y in &ys {
                    if y.clone() * y.clone() == r {
                        out.push(Point::Affine(x.clone(), y.clone()));
                    }
                }
            }
        }
        out
    }

    /// Exact order of `p`, searched up to `bound`.
    pub fn order(&self, p: &Point<F>, bound: u64) -> Option<u64> {
        let mut q = p.clone();
        for k in 1..=bound {
            if q.is_infinity() {
                return Some(k);
            }
            q = self.add(&q, p);
        }
        None
    }

    /// `find_n_torsion`: a rational point of exact order `n`, first in enumeration order.
    pub fn find_n_torsion(&self, n: u32) -> Result<Point<F>> {
        if n < 2 {
            return Err(Error::Precondition("torsion order must be at least 2".into()));
        }
        if self.zero().elements().is_none() {
            return Err(Error::Precondition(
                "torsion search needs a finite field; pass P0 explicitly".into(),
            ));
        }
        self.points()
            .into_iter()
            .find(|p| !p.is_infinity() && self.order(p, n as u64) == Some(n as u64))
            .ok_or(Error::NoTorsion(n))
    }

    /// The line through `p`, `q` (tangent if equal) divided by the vertical at `p + q`.
    fn miller_step(&self, p: &Point<F>, q: &Point<F>) -> Result<FnFieldElem<F>> {
        let z = self.zero();
        let x = FnFieldElem::x(&self.w);
        let y = FnFieldElem::y(&self.w);
        let one = FnFieldElem::constant(&self.w, z.one_like());
        let (xp, yp) = match p.coords() {
            Some(c) => c,
            None => return Ok(one),
        };
        if q.is_infinity() {
            return Ok(one);
        }
        let line = match self.slope(p, q) {
            None => x.sub(&FnFieldElem::constant(&self.w, xp.clone()))?,
            Some(l) => y
                .sub(&FnFieldElem::constant(&self.w, yp.clone()))?
                .sub(&x.sub(&FnFieldElem::constant(&self.w, xp.clone()))?.scale(&l))?,
        };
        let s = self.add(p, q);
        let vert = match s.coords() {
            None => one,
            Some((xs, _)) => x.sub(&FnFieldElem::constant(&self.w, xs.clone()))?,
        };
        line.mul(&vert.inv()?)
    }

    /// `miller_function`: `w_n` with divisor `n·P₀ − n·O∞`, normalized so its
    /// top monomial has coefficient 1.
    pub fn miller_function(&self, n: u32, p0: &Point<F>) -> Result<CoordPoly<F>> {
        if p0.is_infinity() || !self.contains(p0) || !self.mul(n as i64, p0).is_infinity() {
            return Err(Error::Precondition(format!(
                "{p0:?} is not a nonzero {n}-torsion point"
            )));
        }
        let z = self.zero();
        let mut f = FnFieldElem::constant(&self.w, z.one_like());
        let mut t = p0.clone();
        let bits: Vec<bool> = (0..32 - n.leading_zeros())
            .rev()
            .map(|i| (n >> i) & 1 == 1)
            .collect();
        for &bit in &bits[1..] {
            f = f.mul(&f)?.mul(&self.miller_step(&t, &t)?)?;
            t = self.add(&t, &t);
            if bit {
                f = f.mul(&self.miller_step(&t, p0)?)?;
                t = self.add(&t, p0);
            }
        }
        let w = CoordPoly::from_fn(&f).ok_or_else(|| {
            Error::Precondition("Miller accumulation did not land in the coordinate ring".into())
        })?;
        let d = w.degree().expect("nonzero");
        let lead = w.coeff(d).inv().expect("nonzero lead");
        Ok(w.scale(&lead))
    }
}

/// A divisor as a list of distinct points with multiplicities.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Divisor<F: Field> {
    pub terms: Vec<(Point<F>, i64)>,
}

impl<F: Field> Divisor<F> {
    pub fn new(terms: Vec<(Point<F>, i64)>) -> Result<Self> {
        for (i, (p, _)) in terms.iter().enumerate() {
            if terms[..i].iter().any(|(q, _)| q == p) {
                return Err(Error::Precondition(format!("repeated point {p:?}")));
            }
        }
        Ok(Divisor {
            terms: terms.into_iter().filter(|(_, m)| *m != 0).collect(),
        })
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(_, m)| m).sum()
    }

    pub fn mult(&self, p: &Point<F>) -> i64 {
        self.terms
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, m)| *m)
            .unwrap_or(0)
    }
}

/// The two-chart cover `U₀ = C ∖ O∞`, `U₁ = C ∖ P₀` with its Miller function.
#[derive(Clone, Debug)]
pub struct Cover<F: Field> {
    pub curve: Curve<F>,
    pub n: u32,
    pub p0: Point<F>,
    pub w: CoordPoly<F>,
}

impl<F: Field> Cover<F> {
    pub fn new(curve: Curve<F>, n: u32, p0: Point<F>) -> Result<Self> {
        let w = curve.miller_function(n, &p0)?;
        Ok(Cover { curve, n, p0, w })
    }

    /// Multiply in the coordinate ring.
    pub fn mul(&self, a: &CoordPoly<F>, b: &CoordPoly<F>) -> CoordPoly<F> {
        a.mul(b, self.curve.rhs())
    }

    pub fn w_pow(&self, k: u32) -> CoordPoly<F> {
        let mut acc = CoordPoly::constant(self.curve.zero().one_like());
        for _ in 0..k {
            acc = self.mul(&acc, &self.w);
        }
        acc
    }

    /// Linear conditions `val_{P₀}(p) ≥ order` on coordinates of pole order ≤ `max_deg`:
    /// one row per Taylor coefficient at P₀.
    pub fn jet_conditions(&self, max_deg: usize, order: usize) -> Result<Matrix<F>> {
        let z = self.curve.zero();
        let dim = mono_dim(max_deg);
        let mut m = Matrix::zeros(order, dim, &z);
        for i in 0..dim {
            let mono = CoordPoly::monomial(mono_degree(i), &z).to_fn(&self.curve.w);
            let s = mono.expand_at(&self.p0, order as i64)?;
            for e in 0..order {
                m.set(e, i, s.coeff(e as i64).expect("expanded to order"));
            }
        }
        Ok(m)
    }

    /// `rr_basis`: basis of `L(D)` for `D` supported on `{O∞, P₀}`, as `p/w^K`.
    pub fn rr_basis(&self, d: &Divisor<F>) -> Result<Vec<(CoordPoly<F>, u32)>> {
        for (p, _) in &d.terms {
            if !p.is_infinity() && *p != self.p0 {
                return Err(Error::Precondition(format!(
                    "divisor support {p:?} outside {{O∞, P₀}}"
                )));
            }
        }
        let a = d.mult(&Point::Infinity);
        let c = d.mult(&self.p0);
        let n = self.n as i64;
        let k = if c > 0 { (c + n - 1) / n } else { 0 };
        // val_{O∞}(p/w^K) = nK − deg p ≥ −a
        let max_deg = n * k + a;
        if max_deg < 0 {
            return Ok(vec![]);
        }
        let max_deg = max_deg as usize;
        let jet = (n * k - c) as usize;
        let z = self.curve.zero();
        let dim = mono_dim(max_deg);
        let allowed: Vec<usize> = (0..dim).filter(|&i| mono_degree(i) <= max_deg).collect();
        let vecs: Vec<Vec<F>> = if jet == 0 {
            allowed
                .iter()
                .map(|&i| {
                    let mut v = vec![z.clone(); dim];
                    v[i] = z.one_like();
                    v
                })
                .collect()
        } else {
            let cond = self.jet_conditions(max_deg, jet)?;
            let sub = cond.select(&(0..jet).collect::<Vec<_>>(), &allowed);
            sub.kernel()
                .into_iter()
                .map(|kv| {
                    let mut v = vec![z.clone(); dim];
                    for (j, &i) in allowed.iter().enumerate() {
                        v[i] = kv[j].clone();
                    }
                    v
                })
                .collect()
        };
        Ok(vecs
            .into_iter()
            .map(|v| (CoordPoly::from_coords(&v, &z), k as u32))
            .collect())
    }
}

/// Curve and torsion data for one test configuration over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub p: u64,
    pub a: i64,
    pub b: i64,
    pub n: u32,
    #[serde(rename = "P0")]
    pub p0: [i64; 2],
}

impl Fixture {
    pub fn field(&self) -> Result<PrimeField> {
        PrimeField::new(self.p)
    }

    pub fn cover(&self) -> Result<Cover<Fp>> {
        let f = self.field()?;
        let curve = Curve::new(f.elem(self.a), f.elem(self.b))?;
        let p0 = curve.point(f.elem(self.p0[0]), f.elem(self.p0[1]))?;
        Cover::new(curve, self.n, p0)
    }
}

/// One small configuration per `n ∈ {2, 3, 4, 5}`; every `P₀` has exact order `n`.
pub fn shipped_fixtures() -> Vec<Fixture> {
    vec![
        Fixture { p: 11, a: 1, b: 1, n: 2, p0: [2, 0] },
        Fixture { p: 13, a: 1, b: 1, n: 3, p0: [10, 6] },
        Fixture { p: 13, a: 1, b: 2, n: 4, p0: [1, 2] },
        Fixture { p: 31, a: 1, b: 8, n: 5, p0: [19, 2] },
    ]
}

/// Configurations over primes above 50, for polynomial identities in chart coordinates.
pub fn large_fixtures() -> Vec<Fixture> {
    vec![
        Fixture { p: 53, a: 1, b: 51, n: 2, p0: [1, 0] },
        Fixture { p: 53, a: 1, b: 2, n: 3, p0: [14, 2] },
        Fixture { p: 53, a: 1, b: 2, n: 4, p0: [1, 2] },
        Fixture { p: 61, a: 1, b: 1, n: 5, p0: [18, 19] },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_have_exact_torsion() {
        for fx in shipped_fixtures().into_iter().chain(large_fixtures()) {
            let c = fx.cover().unwrap();
            assert_eq!(c.curve.order(&c.p0, 100), Some(fx.n as u64), "{fx:?}");
        }
    }

    fn curve(p: u64, a: i64, b: i64) -> Curve<Fp> {
        let f = PrimeField::new(p).unwrap();
        Curve::new(f.elem(a), f.elem(b)).unwrap()
    }

    #[test]
    fn identity_and_inverse() {
        let c = curve(13, 1, 1);
        assert_eq!(c.points().len(), 18);
        for p in c.points() {
            assert_eq!(c.add(&p, &Point::Infinity), p);
            assert!(c.add(&p, &c.neg(&p)).is_infinity());
        }
    }

    #[test]
    fn two_torsion_miller_function_is_vertical_line() {
        let c = curve(11, 1, 1);
        {
            let p0 = c.find_n_torsion(2).unwrap();
            let w = c.miller_function(2, &p0).unwrap();
            let (x0, _) = p0.coords().unwrap();
            assert_eq!(w.u, Poly::new(vec![-x0.clone(), x0.one_like()], x0.zero_like()));
            assert!(w.v.is_zero());
        }
    }

    #[test]
    fn rr_basis_at_infinity_is_monomial() {
        let c = curve(11, 1, 1);
        let p0 = c.find_n_torsion(2).unwrap();
        let cover = Cover::new(c, 2, p0).unwrap();
        for a in 1..7 {
            let d = Divisor::new(vec![(Point::Infinity, a)]).unwrap();
            let basis = cover.rr_basis(&d).unwrap();
            assert_eq!(basis.len() as i64, a);
        }
        let d0 = Divisor::new(vec![]).unwrap();
        assert_eq!(cover.rr_basis(&d0).unwrap().len(), 1);
    }
}
