//! Vector bundles presented on the two-chart cover.
//!
//! A section is a pair `(s₀, s₁)` of column vectors over `U₀` and `U₁` with
//! `s₁ = g·s₀` on the overlap. Coordinates are functions; the `U₁` frame
//! carries a lower bound `m_i` on the valuation at O∞ of coordinate `i`, and
//! the `U₀` frame a lower bound `b_i` on the valuation at P₀.

use super::frac::{Ctx, Frac};
use crate::ring::Field;

pub type FracMatrix<F> = Vec<Vec<Frac<F>>>;

#[derive(Clone, Debug)]
pub struct Bundle<F: Field> {
    pub rank: usize,
    /// `U₁` frame = `g` · `U₀` frame.
    pub g: FracMatrix<F>,
    pub g_inv: FracMatrix<F>,
    /// First-order variation `g + ε·g_eps` and the matching variation of `g⁻¹`.
    pub g_eps: Option<(FracMatrix<F>, FracMatrix<F>)>,
    /// Lower bounds for valuations at O∞ in the `U₁` frame.
    pub inf_bound: Vec<i64>,
    /// Lower bounds for valuations at P₀ in the `U₀` frame.
    pub p0_bound: Vec<i64>,
    /// Level of each coordinate; filtration degree of a Hom entry is the level difference.
    pub level: Vec<i32>,
    pub labels: Vec<String>,
}

fn identity<F: Field>(r: usize, z: &F) -> FracMatrix<F> {
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if i == j {
                        Frac::constant(z.one_like())
                    } else {
                        Frac::zero(z)
                    }
                })
                .collect()
        })
        .collect()
}

fn zeros<F: Field>(r: usize, c: usize, z: &F) -> FracMatrix<F> {
    vec![vec![Frac::zero(z); c]; r]
}

pub fn mat_mul<F: Field>(ctx: &Ctx<F>, a: &FracMatrix<F>, b: &FracMatrix<F>) -> FracMatrix<F> {
    let z = ctx.zero();
    let (r, m, c) = (a.len(), b.len(), b.first().map_or(0, |x| x.len()));
    let mut out = zeros(r, c, &z);
    for i in 0..r {
        for j in 0..c {
            let mut acc = Frac::zero(&z);
            for k in 0..m {
                if !a[i][k].is_zero() && !b[k][j].is_zero() {
                    acc = ctx.add(&acc, &ctx.mul(&a[i][k], &b[k][j]));
                }
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn mat_add<F: Field>(ctx: &Ctx<F>, a: &FracMatrix<F>, b: &FracMatrix<F>) -> FracMatrix<F> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| ctx.add(x, y)).collect())
        .collect()
}

pub fn mat_neg<F: Field>(a: &FracMatrix<F>) -> FracMatrix<F> {
    a.iter().map(|r| r.iter().map(|x| x.neg()).collect()).collect()
}

pub fn mat_transpose<F: Field>(a: &FracMatrix<F>) -> FracMatrix<F> {
    let c = a.first().map_or(0, |x| x.len());
    (0..c)
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn mat_eq<F: Field>(ctx: &Ctx<F>, a: &FracMatrix<F>, b: &FracMatrix<F>) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(ra, rb)| ra.len() == rb.len() && ra.iter().zip(rb).all(|(x, y)| ctx.eq(x, y)))
}

pub fn mat_apply<F: Field>(ctx: &Ctx<F>, a: &FracMatrix<F>, v: &[Frac<F>]) -> Vec<Frac<F>> {
    let col: FracMatrix<F> = v.iter().map(|x| vec![x.clone()]).collect();
    mat_mul(ctx, a, &col).into_iter().map(|mut r| r.remove(0)).collect()
}

impl<F: Field> Bundle<F> {
    /// `O(d_inf·O∞ + d_p0·P₀)`.
    pub fn line(ctx: &Ctx<F>, d_inf: i64, d_p0: i64) -> Self {
        let z = ctx.zero();
        let label = match (d_inf, d_p0) {
            (0, 0) => "O".to_string(),
            (d, 0) => format!("O({d}·O∞)"),
            (d, e) => format!("O({d}·O∞ + {e}·P0)"),
        };
        Bundle {
            rank: 1,
            g: identity(1, &z),
            g_inv: identity(1, &z),
            g_eps: None,
            inf_bound: vec![-d_inf],
            p0_bound: vec![-d_p0],
            level: vec![0],
            labels: vec![label],
        }
    }

    /// Direct sum.
    pub fn sum(ctx: &Ctx<F>, a: &Self, b: &Self) -> Self {
        let z = ctx.zero();
        let r = a.rank + b.rank;
        let block = |x: &FracMatrix<F>, y: &FracMatrix<F>| -> FracMatrix<F> {
            let mut m = zeros(r, r, &z);
            for i in 0..a.rank {
                for j in 0..a.rank {
                    m[i][j] = x[i][j].clone();
                }
            }
            for i in 0..b.rank {
                for j in 0..b.rank {
                    m[a.rank + i][a.rank + j] = y[i][j].clone();
                }
            }
            m
        };
        let g_eps = match (&a.g_eps, &b.g_eps) {
            (None, None) => None,
            _ => {
                let (ae, ai) = a.eps_or_zero(&z);
                let (be, bi) = b.eps_or_zero(&z);
                Some((block(&ae, &be), block(&ai, &bi)))
            }
        };
        Bundle {
            rank: r,
            g: block(&a.g, &b.g),
            g_inv: block(&a.g_inv, &b.g_inv),
            g_eps,
            inf_bound: [a.inf_bound.clone(), b.inf_bound.clone()].concat(),
            p0_bound: [a.p0_bound.clone(), b.p0_bound.clone()].concat(),
            level: [a.level.clone(), b.level.clone()].concat(),
            labels: [a.labels.clone(), b.labels.clone()].concat(),
        }
    }

    fn eps_or_zero(&self, z: &F) -> (FracMatrix<F>, FracMatrix<F>) {
        match &self.g_eps {
            Some(p) => p.clone(),
            None => (zeros(self.rank, self.rank, z), zeros(self.rank, self.rank, z)),
        }
    }

    /// The extension `0 → O → E → V → 0` glued by the cocycle `f` (or `f + ε·f_eps`):
    /// `g = [[1, −f], [0, 1]]` with `V = O(n·O∞)`.
    pub fn extension(ctx: &Ctx<F>, f: &Frac<F>, f_eps: Option<&Frac<F>>) -> Self {
        let z = ctx.zero();
        let one = Frac::constant(z.one_like());
        let zero = Frac::zero(&z);
        let g = vec![vec![one.clone(), f.neg()], vec![zero.clone(), one.clone()]];
        let g_inv = vec![vec![one.clone(), f.clone()], vec![zero.clone(), one]];
        let g_eps = f_eps.map(|fe| {
            (
                vec![vec![zero.clone(), fe.neg()], vec![zero.clone(), zero.clone()]],
                vec![vec![zero.clone(), fe.clone()], vec![zero.clone(), zero.clone()]],
            )
        });
        Bundle {
            rank: 2,
            g,
            g_inv,
            g_eps,
            inf_bound: vec![0, -(ctx.n() as i64)],
            p0_bound: vec![0, 0],
            level: vec![1, 0],
            labels: vec!["O".into(), "V".into()],
        }
    }

    /// `Hom(X, Y)`, coordinates `(i, j) ↦ i·rank(X) + j` for the entry `H_ij`;
    /// transition `H ↦ g_Y·H·g_X⁻¹`.
    pub fn hom(ctx: &Ctx<F>, x: &Self, y: &Self) -> Self {
        let z = ctx.zero();
        let (rx, ry) = (x.rank, y.rank);
        let r = rx * ry;
        let kron = |gy: &FracMatrix<F>, gxi: &FracMatrix<F>| -> FracMatrix<F> {
            let mut m = zeros(r, r, &z);
            for i in 0..ry {
                for j in 0..rx {
                    for k in 0..ry {
                        for l in 0..rx {
                            if gy[i][k].is_zero() || gxi[l][j].is_zero() {
                                continue;
                            }
                            m[i * rx + j][k * rx + l] = ctx.mul(&gy[i][k], &gxi[l][j]);
                        }
                    }
                }
            }
            m
        };
        let g = kron(&y.g, &x.g_inv);
        let g_inv = kron(&y.g_inv, &x.g);
        let g_eps = match (&x.g_eps, &y.g_eps) {
            (None, None) => None,
            _ => {
                let (xe, xie) = x.eps_or_zero(&z);
                let (ye, yie) = y.eps_or_zero(&z);
                let d = mat_add(ctx, &kron(&ye, &x.g_inv), &kron(&y.g, &xie));
                let di = mat_add(ctx, &kron(&yie, &x.g), &kron(&y.g_inv, &xe));
                Some((d, di))
            }
        };
        let mut inf_bound = vec![0; r];
        let mut p0_bound = vec![0; r];
        let mut level = vec![0; r];
        let mut labels = vec![String::new(); r];
        for i in 0..ry {
            for j in 0..rx {
                let c = i * rx + j;
                inf_bound[c] = y.inf_bound[i] - x.inf_bound[j];
                p0_bound[c] = y.p0_bound[i] - x.p0_bound[j];
                level[c] = y.level[i] - x.level[j];
                labels[c] = format!("Hom({},{})", x.labels[j], y.labels[i]);
            }
        }
        Bundle {
            rank: r,
            g,
            g_inv,
            g_eps,
            inf_bound,
            p0_bound,
            level,
            labels,
        }
    }

    /// `Hom(X, O)`.
    pub fn dual(ctx: &Ctx<F>, x: &Self) -> Self {
        Bundle::hom(ctx, x, &Bundle::line(ctx, 0, 0))
    }

    /// `X ⊗ Y` with coordinates `(i, j) ↦ i·rank(Y) + j`.
    pub fn tensor(ctx: &Ctx<F>, x: &Self, y: &Self) -> Self {
        Bundle::hom(ctx, &Bundle::dual(ctx, y), x)
    }

    /// Traceless endomorphisms of a rank-2 bundle in the basis
    /// `h = diag(1, −1)`, `e = E₁₂`, `f = E₂₁`.
    pub fn traceless_end(ctx: &Ctx<F>, e: &Self) -> Self {
        assert_eq!(e.rank, 2, "traceless_end expects rank 2");
        let end = Bundle::hom(ctx, e, e);
        let z = ctx.zero();
        let one = Frac::constant(z.one_like());
        let half = Frac::constant(z.from_int(2).inv().expect("characteristic is not 2"));
        let zero = Frac::zero(&z);
        // inclusion (h, e, f) → (α, β, γ, δ) and a left inverse
        let inc = vec![
            vec![one.clone(), zero.clone(), zero.clone()],
            vec![zero.clone(), one.clone(), zero.clone()],
            vec![zero.clone(), zero.clone(), one.clone()],
            vec![one.neg(), zero.clone(), zero.clone()],
        ];
        let proj = vec![
            vec![half.clone(), zero.clone(), zero.clone(), half.neg()],
            vec![zero.clone(), one.clone(), zero.clone(), zero.clone()],
            vec![zero.clone(), zero.clone(), one.clone(), zero.clone()],
        ];
        let conj = |m: &FracMatrix<F>| mat_mul(ctx, &proj, &mat_mul(ctx, m, &inc));
        let g_eps = end
            .g_eps
            .as_ref()
            .map(|(d, di)| (conj(d), conj(di)));
        Bundle {
            rank: 3,
            g: conj(&end.g),
            g_inv: conj(&end.g_inv),
            g_eps,
            inf_bound: vec![end.inf_bound[0], end.inf_bound[1], end.inf_bound[2]],
            p0_bound: vec![end.p0_bound[0], end.p0_bound[1], end.p0_bound[2]],
            level: vec![0, end.level[1], end.level[2]],
            labels: vec!["h".into(), end.labels[1].clone(), end.labels[2].clone()],
        }
    }

    /// Largest denominator exponent in `g`, `g⁻¹` and their variations.
    pub fn max_k(&self) -> u32 {
        let mut k = 0;
        let mut scan = |m: &FracMatrix<F>| {
            for r in m {
                for x in r {
                    if !x.is_zero() {
                        k = k.max(x.k);
                    }
                }
            }
        };
        scan(&self.g);
        scan(&self.g_inv);
        if let Some((a, b)) = &self.g_eps {
            scan(a);
            scan(b);
        }
        k
    }

    /// The `ε = 0` slice.
    pub fn slice0(&self) -> Self {
        let mut b = self.clone();
        b.g_eps = None;
        b
    }
}
