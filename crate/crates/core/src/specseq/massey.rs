//! The spectral sequence of `End(E_φ)` (or its traceless part) filtered by
//! `O ⊂ E_φ`, and three computations of `d₂: E₂^{−1} → E₂^{1}`.
//!
//! Component order: traceless `(h, e, f)`, full `(α, β, γ, δ)` for
//! `[[α, β], [γ, δ]]`. In both cases component 1 is `Hom(V, O)` (level 1) and
//! component 2 is `Hom(O, V)` (level −1).

use super::filtered::FilteredComplex;
use crate::cech::{
    chart_index, reduce_mod, Bundle, CechComplex, Frac, Setting,
};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::Field;

pub const SUB_COMP: usize = 1;
pub const QUOT_COMP: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum D2Mode {
    Zigzag,
    Construction1,
    Construction2,
}

pub struct ExtensionSS<'a, F: Field> {
    pub st: &'a Setting<F>,
    pub phi: Vec<F>,
    pub v: Option<Vec<F>>,
    /// Coordinate used to normalize modulo `⟨φ⟩`.
    pub chart: usize,
    pub bundle: Bundle<F>,
    pub extension: Bundle<F>,
    pub cx: CechComplex<F>,
    pub fc: FilteredComplex<F>,
}

impl<'a, F: Field> ExtensionSS<'a, F> {
    /// Filtered Čech complex of `End(E_φ)` (`full`) or `End(E_φ)₀`; with `v`, the
    /// bundle carries the variation `φ + ε·v`.
    pub fn new(st: &'a Setting<F>, phi: &[F], v: Option<&[F]>, full: bool) -> Result<Self> {
        let chart = chart_index(phi)
            .ok_or_else(|| Error::Precondition("φ must be a nonzero class".into()))?;
        let ctx = &st.ctx;
        let extension = st.extension(phi, v);
        let bundle = if full {
            Bundle::hom(ctx, &extension, &extension)
        } else {
            Bundle::traceless_end(ctx, &extension)
        };
        let cx = CechComplex::new(ctx, &bundle, st.budget)?;
        let fc = filtered(&cx)?;
        Ok(ExtensionSS {
            st,
            phi: phi.to_vec(),
            v: v.map(|v| v.to_vec()),
            chart,
            bundle,
            extension,
            cx,
            fc,
        })
    }

    pub fn n(&self) -> usize {
        self.st.n() as usize
    }

    /// `C⁰` vector of the global section `s ∈ H⁰(V)` placed in `Hom(O, V)`.
    pub fn section_vector(&self, s: &[F]) -> Result<Vec<F>> {
        let z = self.st.zero();
        let sec = self.st.ext.section(s);
        let mut s0 = vec![Frac::zero(&z); self.bundle.rank];
        s0[QUOT_COMP] = sec;
        self.cx.c0_vector(&s0, &s0)
    }

    /// The `Hom(V, O)` block of a `C¹` vector.
    pub fn sub_block<'b>(&self, c1: &'b [F]) -> &'b [F] {
        &c1[self.cx.block(SUB_COMP)]
    }

    /// `Ext¹` coordinates of a `Hom(V, O)` block, normalized modulo `φ`.
    pub fn quotient_coords(&self, block: &[F]) -> Result<Vec<F>> {
        let c = self.st.ctx.from_coords(block, self.st.budget.k1);
        Ok(reduce_mod(&self.st.ext.coords(&c)?, &self.phi, self.chart))
    }

    pub fn d2(&self, s: &[F], mode: D2Mode) -> Result<Vec<F>> {
        match mode {
            D2Mode::Zigzag => self.d2_zigzag(s),
            D2Mode::Construction1 => self.construction1(s),
            D2Mode::Construction2 => self.construction2(s),
        }
    }

    pub fn d2_zigzag(&self, s: &[F]) -> Result<Vec<F>> {
        let x = self.section_vector(s)?;
        let out = self.fc.zigzag(&x, -1)?;
        self.quotient_coords(self.sub_block(&out))
    }

    /// Lift `s` to `s' ∈ H⁰(E)`, compose with `φ` in `Ext¹(V, E)` and factor
    /// through `O → E`.
    pub fn construction1(&self, s: &[F]) -> Result<Vec<F>> {
        let st = self.st;
        let ctx = &st.ctx;
        let sec = st.ext.section(s);
        let cx_e = CechComplex::new(ctx, &self.extension.slice0(), st.budget)?;
        let lift = u1_from_u0(&cx_e, lift_section(&cx_e, 1, &sec)?.0);
        let f = st.ext.element(&self.phi);
        let v = Bundle::line(ctx, st.n() as i64, 0);
        let hom = Bundle::hom(ctx, &v, &self.extension.slice0());
        let cx_h = CechComplex::new(ctx, &hom, st.budget)?;
        let target: Vec<Frac<F>> = lift.iter().map(|x| ctx.mul(x, &f)).collect();
        let z = st.zero();
        let images = st
            .ext
            .basis
            .iter()
            .map(|e| vec![e.clone(), Frac::zero(&z)])
            .collect::<Vec<_>>();
        self.factor(&cx_h, &target, &images, false)
    }

    /// Lift `s` to `s' ∈ H⁰(Hom(E, V))`, compose with `φ` in `Ext¹(E, O)` and
    /// factor through `E → V`; the result is negated.
    pub fn construction2(&self, s: &[F]) -> Result<Vec<F>> {
        let st = self.st;
        let ctx = &st.ctx;
        let sec = st.ext.section(s);
        let v = Bundle::line(ctx, st.n() as i64, 0);
        let e = self.extension.slice0();
        let cx_l = CechComplex::new(ctx, &Bundle::hom(ctx, &e, &v), st.budget)?;
        let lift = u1_from_u0(&cx_l, lift_section(&cx_l, 0, &sec)?.0);
        let f = st.ext.element(&self.phi);
        let dual = Bundle::dual(ctx, &e);
        let cx_h = CechComplex::new(ctx, &dual, st.budget)?;
        let target: Vec<Frac<F>> = lift.iter().map(|x| ctx.mul(&f, x)).collect();
        let z = st.zero();
        let images = st
            .ext
            .basis
            .iter()
            .map(|e| vec![Frac::zero(&z), e.clone()])
            .collect::<Vec<_>>();
        self.factor(&cx_h, &target, &images, true)
    }

    /// Solve `Σ c_i [images_i] = [target]` in `H¹` of `cx`, normalized modulo `φ`.
    fn factor(
        &self,
        cx: &CechComplex<F>,
        target: &[Frac<F>],
        images: &[Vec<Frac<F>>],
        negate: bool,
    ) -> Result<Vec<F>> {
        let coh = cx.cohomology();
        let t = coh.classify(&cx.cochain_coords(target)?);
        let cols = images
            .iter()
            .map(|im| Ok(coh.classify(&cx.cochain_coords(im)?)))
            .collect::<Result<Vec<_>>>()?;
        let m = Matrix::from_cols(&cols, coh.h1_dim(), &self.st.zero());
        let c = m.solve(&t).ok_or_else(|| {
            Error::Precondition("composite does not factor; s is not a d₁-cycle".into())
        })?;
        let c = if negate {
            c.into_iter().map(|x| -x).collect()
        } else {
            c
        };
        Ok(reduce_mod(&c, &self.phi, self.chart))
    }

    /// Value of the first-page differential `E₁^{−1} → E₁^{0}` on `s`, read
    /// through the residue pairing with `1 ∈ H⁰(O)`.
    pub fn d1_residue(&self, s: &[F]) -> Result<F> {
        let x = self.section_vector(s)?;
        let dx = self.cx.cochain(&self.cx.d.mul_vec(&x));
        self.st.ctx.residue(&dx[0])
    }

    /// Whether `s` satisfies the `d₁`-cycle condition `⟨s, φ⟩ = 0`.
    pub fn admissible(&self, s: &[F]) -> bool {
        self.st.ext.pair(s, &self.phi).is_zero()
    }

    /// Basis of `⟨φ⟩^⊥ ⊂ H⁰(V)`.
    pub fn perp_basis(&self) -> Vec<Vec<F>> {
        let z = self.st.zero();
        let row = self.st.ext.gram.mul_vec(&self.phi);
        let m = Matrix::from_rows(&[row], self.n(), &z);
        m.kernel()
    }

    /// The doubled complex over `k` computing the complex over `k[ε]`:
    /// `C ⊕ εC` with `d̃(x + εy) = dx + ε(d′x + dy)`.
    pub fn doubled(&self) -> Result<FilteredComplex<F>> {
        let de = self
            .cx
            .d_eps
            .as_ref()
            .ok_or_else(|| Error::Precondition("bundle carries no variation".into()))?;
        let d = &self.cx.d;
        let (r, c) = (d.rows(), d.cols());
        let z = self.st.zero();
        let mut m = Matrix::zeros(2 * r, 2 * c, &z);
        for i in 0..r {
            for j in 0..c {
                let x = d.get(i, j);
                if !x.is_zero() {
                    m.set(i, j, x.clone());
                    m.set(r + i, c + j, x.clone());
                }
                let y = de.get(i, j);
                if !y.is_zero() {
                    m.set(r + i, j, y.clone());
                }
            }
        }
        let l0 = [self.fc.level0.clone(), self.fc.level0.clone()].concat();
        let l1 = [self.fc.level1.clone(), self.fc.level1.clone()].concat();
        FilteredComplex::new(m, l0, l1)
    }
}

/// The filtered complex of a Čech complex, filtered by component levels.
pub fn filtered<F: Field>(cx: &CechComplex<F>) -> Result<FilteredComplex<F>> {
    let l0 = (0..cx.c0_dim()).map(|i| cx.c0_level(i)).collect();
    let l1 = (0..cx.c1_dim()).map(|i| cx.c1_level(i)).collect();
    FilteredComplex::new(cx.d.clone(), l0, l1)
}

/// `g·s₀`: the `U₁` frame values of a global section with small denominators.
fn u1_from_u0<F: Field>(cx: &CechComplex<F>, s0: Vec<Frac<F>>) -> Vec<Frac<F>> {
    crate::cech::bundle::mat_apply(&cx.ctx, &cx.bundle.g, &s0)
}

/// A global section of `cx` whose component `comp` equals `sec` on both charts;
/// returns its `(s₀, s₁)` pair.
pub fn lift_section<F: Field>(
    cx: &CechComplex<F>,
    comp: usize,
    sec: &Frac<F>,
) -> Result<(Vec<Frac<F>>, Vec<Frac<F>>)> {
    let z = cx.ctx.zero();
    let mut s = vec![Frac::zero(&z); cx.rank()];
    s[comp] = sec.clone();
    let fixed = cx.c0_vector(&s, &s)?;
    let free: Vec<usize> = (0..cx.c0_dim()).filter(|&i| cx.c0[i].comp() != comp).collect();
    let rhs: Vec<F> = cx.d.mul_vec(&fixed).into_iter().map(|x| -x).collect();
    let rows: Vec<usize> = (0..cx.c1_dim()).collect();
    let sol = cx
        .d
        .select(&rows, &free)
        .solve(&rhs)
        .ok_or_else(|| Error::Precondition("section does not lift".into()))?;
    let mut x = fixed;
    for (t, &i) in free.iter().enumerate() {
        x[i] = sol[t].clone();
    }
    Ok(cx.section(&x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::shipped_fixtures;
    use crate::ring::Fp;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_vec(n: usize, z: &Fp, rng: &mut ChaCha8Rng) -> Vec<Fp> {
        (0..n).map(|_| z.random(rng)).collect()
    }

    #[test]
    fn pages_and_three_d2_agree() {
        let fx = &shipped_fixtures()[1];
        let st = Setting::from_fixture(fx).unwrap();
        let z = st.zero();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let phi = random_vec(3, &z, &mut rng);
        let ss = ExtensionSS::new(&st, &phi, None, false).unwrap();
        let e1 = ss.fc.page(1);
        assert_eq!(e1.dims0(), vec![3, 1, 0]);
        assert_eq!(e1.dims1(), vec![0, 1, 3]);
        let e2 = ss.fc.page(2);
        let e3 = ss.fc.page(3);
        let e4 = ss.fc.page(4);
        ss.fc.check_homology(&e1, &e2).unwrap();
        ss.fc.check_homology(&e2, &e3).unwrap();
        assert!(FilteredComplex::same_page(&e3, &e4));
        for s in ss.perp_basis() {
            assert!(ss.admissible(&s));
            let a = ss.d2(&s, D2Mode::Zigzag).unwrap();
            let b = ss.d2(&s, D2Mode::Construction1).unwrap();
            let c = ss.d2(&s, D2Mode::Construction2).unwrap();
            assert_eq!(a, b);
            assert_eq!(a, c);
        }
    }
}
