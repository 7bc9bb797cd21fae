//! Shared context for one `(curve, n, P₀)` configuration: residue tables sized
//! for every pairing the pipeline takes, one truncation budget used by all
//! complexes, and the coordinates on `Ext¹(V, O)`.

use super::bundle::Bundle;
use super::complex::Budget;
use super::ext::ExtSpace;
use super::frac::{Ctx, Frac};
use crate::curve::{Cover, Fixture};
use crate::error::Result;
use crate::ring::{Field, Fp};

#[derive(Clone, Debug)]
pub struct Setting<F: Field> {
    pub ctx: Ctx<F>,
    pub budget: Budget,
    pub ext: ExtSpace<F>,
}

/// Default shared budget: `N = 6n + 12`, `K₁ = 6` (the traceless endomorphism
/// bundle of an extension has transitions over `w⁴`).
pub fn default_budget(n: u32) -> Budget {
    Budget {
        n_extra: 6 * n as usize + 12,
        k1: 6,
    }
}

impl<F: Field> Setting<F> {
    pub fn new(cover: Cover<F>, budget: Budget) -> Result<Self> {
        let n = cover.n as usize;
        let big = budget.bumped();
        let kmax = 2 * big.k1 + 2;
        let dmax = 2 * n * (big.k1 as usize + 1) + big.n_extra + n + 8;
        let ctx = Ctx::new(cover, kmax, dmax)?;
        Self::with_ctx(&ctx, budget)
    }

    /// Reuse a context; its tables must cover `budget`.
    pub fn with_ctx(ctx: &Ctx<F>, budget: Budget) -> Result<Self> {
        let ext = ExtSpace::new(ctx, budget)?;
        Ok(Setting {
            ctx: ctx.clone(),
            budget,
            ext,
        })
    }

    /// Same configuration at the bumped budget, sharing residue tables.
    pub fn bumped(&self) -> Result<Self> {
        Self::with_ctx(&self.ctx, self.budget.bumped())
    }

    pub fn n(&self) -> u32 {
        self.ctx.n()
    }

    pub fn zero(&self) -> F {
        self.ctx.zero()
    }

    /// `E_φ` for `φ` in canonical coordinates, optionally varied along `v`.
    pub fn extension(&self, phi: &[F], v: Option<&[F]>) -> Bundle<F> {
        let f = self.ext.element(phi);
        let fv: Option<Frac<F>> = v.map(|v| self.ext.element(v));
        Bundle::extension(&self.ctx, &f, fv.as_ref())
    }
}

impl Setting<Fp> {
    pub fn from_fixture(fx: &Fixture) -> Result<Self> {
        Self::new(fx.cover()?, default_budget(fx.n))
    }
}
