//! The acceptance suite: ten exact checks over the shipped fixtures, each
//! reported as one pass/fail outcome.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cech::{
    check_dual_rule, check_end_rule, check_tensor_rule, deform_bundle, stable_dims, Bundle, Ctx, Frac,
    FracMatrix, Setting,
};
use crate::conormal::{compare, lemma_check, specialization_check};
use crate::curve::{large_fixtures, shipped_fixtures, CoordPoly, Fixture};
use crate::error::{Error, Result};
use crate::fo::{
    bivector_chart, chart_matrix, check_rank_stable, end_dim, fo_matrix, jacobi_check, leaf_test,
    point_classes, projective_points, random_point, rank_sweep, secant, PoissonPoint,
};
use crate::linalg::{add_vec, scale_vec};
use crate::ring::{Field, Fp};
use crate::specseq::{D2Mode, ExtensionSS, FilteredComplex};

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "dimension facts"),
    (2, "spectral sequence degenerates at E3"),
    (3, "three d2 constructions agree"),
    (4, "rank formula"),
    (5, "skewness and homogeneity"),
    (6, "Jacobi identity of chart bivectors"),
    (7, "symplectic leaf criterion"),
    (8, "conormal bracket matches End0"),
    (9, "deformation calculus"),
    (10, "stability of truncation"),
];

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub detail: String,
    pub error: Option<Error>,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.error.is_none()
    }

    pub fn line(&self) -> String {
        let tag = if self.pass() { "PASS" } else { "FAIL" };
        match &self.error {
            None => format!("{tag} {:>2} {}: {}", self.id, self.name, self.detail),
            Some(e) => format!("{tag} {:>2} {}: {e}", self.id, self.name),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "name": self.name,
            "pass": self.pass(),
            "detail": self.detail,
            "error": self.error.as_ref().map(|e| e.to_string()),
        })
    }
}

fn settings(fixtures: &[Fixture]) -> Result<Vec<(Fixture, Setting<Fp>)>> {
    fixtures
        .iter()
        .map(|fx| Ok((fx.clone(), Setting::from_fixture(fx)?)))
        .collect()
}

fn rng_for(seed: u64, id: u8, k: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ ((id as u64) << 32) ^ k as u64)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Falsified(msg()))
    }
}

/// A random vector of `⟨φ⟩^⊥`.
fn random_perp(pt: &PoissonPoint<Fp>, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let z = pt.phi[0].zero_like();
    let mut s = vec![z.clone(); pt.phi.len()];
    for b in &pt.domain {
        s = add_vec(&s, &scale_vec(b, &z.random(rng)));
    }
    s
}

fn nonzero(z: &Fp, rng: &mut ChaCha8Rng) -> Fp {
    loop {
        let x = z.random(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

fn c1_dimensions() -> Result<String> {
    for (fx, st) in settings(&shipped_fixtures())? {
        let n = fx.n as usize;
        let (h0, _) = stable_dims(&st.ctx, &Bundle::line(&st.ctx, n as i64, 0), st.budget)?;
        let (_, h1) = stable_dims(&st.ctx, &Bundle::line(&st.ctx, -(n as i64), 0), st.budget)?;
        ensure(h0 == n && h1 == n && st.ext.dim() == n, || {
            format!("n = {n}: h0(O(nO)) = {h0}, h1(O(-nO)) = {h1}")
        })?;
    }
    Ok("h0(O(n·O∞)) = h1(O(−n·O∞)) = n for n = 2, 3, 4, 5".into())
}

fn c2_degeneration(seed: u64) -> Result<String> {
    let mut total = 0;
    for (k, (fx, st)) in settings(&shipped_fixtures())?.into_iter().enumerate() {
        let mut rng = rng_for(seed, 2, k);
        let phis: Vec<Vec<Fp>> = (0..10).map(|_| random_point(&st, &mut rng)).collect();
        phis.par_iter()
            .map(|phi| {
                let ss = ExtensionSS::new(&st, phi, None, false)?;
                let pages: Vec<_> = (1..=4).map(|r| ss.fc.page(r)).collect();
                for w in pages.windows(2) {
                    ss.fc.check_homology(&w[0], &w[1])?;
                }
                ensure(FilteredComplex::same_page(&pages[2], &pages[3]), || {
                    format!("n = {}: E3 ≠ E4 at {phi:?}", fx.n)
                })?;
                let (h0, h1) = stable_dims(&st.ctx, &ss.bundle, st.budget)?;
                let e3 = &pages[2];
                let (s0, s1): (usize, usize) = (e3.dims0().iter().sum(), e3.dims1().iter().sum());
                ensure(s0 == h0 && s1 == h1, || {
                    format!("n = {}: E3 totals ({s0}, {s1}) vs H ({h0}, {h1})", fx.n)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        total += phis.len();
    }
    Ok(format!("{total} points: E3 = E4 and totals match H(End0)"))
}

fn c3_d2_agreement(seed: u64) -> Result<String> {
    let mut total = 0;
    for (k, (_, st)) in settings(&shipped_fixtures())?.into_iter().enumerate() {
        let mut rng = rng_for(seed, 3, k);
        let jobs: Vec<(Vec<Fp>, u64)> = (0..5).map(|_| (random_point(&st, &mut rng), rng.gen())).collect();
        let counts = jobs
            .par_iter()
            .map(|(phi, s)| {
                let mut rng = ChaCha8Rng::seed_from_u64(*s);
                let ss = ExtensionSS::new(&st, phi, None, false)?;
                let pt = fo_matrix(&st, phi)?;
                for _ in 0..5 {
                    let s = random_perp(&pt, &mut rng);
                    ensure(ss.admissible(&s), || "sampled class is not admissible".into())?;
                    let a = ss.d2(&s, D2Mode::Zigzag)?;
                    let b = ss.d2(&s, D2Mode::Construction1)?;
                    let c = ss.d2(&s, D2Mode::Construction2)?;
                    ensure(a == b && a == c, || format!("d2 disagree at {phi:?}, s = {s:?}"))?;
                }
                Ok(5)
            })
            .collect::<Result<Vec<usize>>>()?;
        total += counts.iter().sum::<usize>();
    }
    Ok(format!("{total} classes agree in all three modes"))
}

fn c4_rank_formula(seed: u64) -> Result<String> {
    let fixtures = shipped_fixtures();
    let mut notes = vec![];
    for (k, (fx, st)) in settings(&fixtures)?.into_iter().enumerate() {
        let n = fx.n as usize;
        let points = if n == 3 {
            projective_points(&st.zero().elements().expect("finite field"), 3)
        } else {
            let mut rng = rng_for(seed, 4, k);
            (0..50).map(|_| random_point(&st, &mut rng)).collect()
        };
        let sweep = rank_sweep(&st, &points)?;
        if let Some(bad) = sweep.iter().find(|e| !e.consistent(n)) {
            return Err(Error::Falsified(format!(
                "n = {n}: rank {} with dim End = {} at {:?}",
                bad.rank, bad.end_dim, bad.phi
            )));
        }
        let low = sweep.iter().filter(|e| e.rank < generic_rank(fx.n)).count();
        notes.push(format!("n={n}: {} pts, {low} degenerate", points.len()));
    }
    Ok(notes.join("; "))
}

fn c5_skew_homogeneity(seed: u64) -> Result<String> {
    let mut total = 0;
    for (k, (_, st)) in settings(&shipped_fixtures())?.into_iter().enumerate() {
        let mut rng = rng_for(seed, 5, k);
        let z = st.zero();
        let mut phis: Vec<Vec<Fp>> = (0..4).map(|_| random_point(&st, &mut rng)).collect();
        phis.push(point_classes(&st)?[1].1.clone());
        for phi in &phis {
            let pt = fo_matrix(&st, phi)?;
            let m = pt.domain.len();
            let skew = (0..m).all(|a| (0..m).all(|b| (pt.skew.get(a, b).clone() + pt.skew.get(b, a).clone()).is_zero()));
            ensure(skew && pt.rank % 2 == 0, || format!("B not skew at {phi:?}"))?;
            for _ in 0..5 {
                let lam = nonzero(&z, &mut rng);
                let scaled = scale_vec(phi, &lam);
                let ss = ExtensionSS::new(&st, &scaled, None, false)?;
                for (s, img) in pt.domain.iter().zip(&pt.images) {
                    let got = ss.d2_zigzag(s)?;
                    ensure(got == scale_vec(img, &(lam.clone() * lam.clone())), || {
                        format!("π(λφ) ≠ λ²π(φ) at {phi:?}, λ = {lam}")
                    })?;
                }
            }
            total += 1;
        }
    }
    Ok(format!("{total} points, 5 scalars each"))
}

fn c6_jacobi(seed: u64) -> Result<String> {
    let mut notes = vec![];
    for (k, (fx, st)) in settings(&large_fixtures())?.into_iter().enumerate() {
        let n = fx.n as usize;
        let bv = bivector_chart(&st, n - 1, 4, seed ^ k as u64)?;
        ensure(bv.is_skew(), || format!("n = {n}: fitted bivector is not skew"))?;
        let rep = jacobi_check(&bv);
        ensure(rep.holds(), || format!("n = {n}: nonzero Schouten residual"))?;
        let mut rng = rng_for(seed, 6, k);
        for _ in 0..10 {
            let u: Vec<Fp> = bv.vars.iter().map(|_| st.zero().random(&mut rng)).collect();
            let mut phi = vec![st.zero(); n];
            phi[bv.chart] = st.zero().one_like();
            for (&i, x) in bv.vars.iter().zip(&u) {
                phi[i] = x.clone();
            }
            ensure(chart_matrix(&st, &phi, bv.chart)? == bv.eval(&u), || {
                format!("n = {n}: fitted bivector misses a fresh point")
            })?;
        }
        notes.push(format!("n={n} p={} deg≤{} ({} triples)", fx.p, bv.degree, rep.residuals.len()));
    }
    Ok(notes.join("; "))
}

fn leaf_points(st: &Setting<Fp>, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<Fp>>> {
    let mut phis: Vec<Vec<Fp>> = (0..8).map(|_| random_point(st, rng)).collect();
    let classes = point_classes(st)?;
    phis.extend(classes.iter().skip(1).take(2).map(|(_, c)| c.clone()));
    Ok(phis)
}

fn c7_leaves(seed: u64) -> Result<String> {
    let mut total = 0;
    let mut degenerate = 0;
    for (k, (fx, st)) in settings(&shipped_fixtures())?.into_iter().enumerate() {
        let mut rng = rng_for(seed, 7, k);
        let phis = leaf_points(&st, &mut rng)?;
        let generic = generic_rank(fx.n);
        let results = phis
            .par_iter()
            .enumerate()
            .map(|(i, phi)| {
                let mut rng = rng_for(seed, 70, i);
                let z = st.zero();
                let pt = fo_matrix(&st, phi)?;
                ensure(leaf_test(&st, phi, &vec![z.clone(); phi.len()])?, || "v = 0 not trivial".into())?;
                let img_true = pt
                    .images
                    .iter()
                    .map(|v| leaf_test(&st, phi, v))
                    .collect::<Result<Vec<_>>>()?;
                ensure(img_true.iter().all(|&b| b), || format!("image direction not trivial at {phi:?}"))?;
                for v in &pt.coker {
                    ensure(!leaf_test(&st, phi, v)?, || format!("transverse direction trivial at {phi:?}"))?;
                }
                for _ in 0..2 {
                    let mut v = vec![z.clone(); phi.len()];
                    for im in &pt.images {
                        v = add_vec(&v, &scale_vec(im, &z.random(&mut rng)));
                    }
                    ensure(leaf_test(&st, phi, &v)?, || "combination of images not trivial".into())?;
                    if let Some(c) = pt.coker.first() {
                        let w = add_vec(&v, &scale_vec(c, &nonzero(&z, &mut rng)));
                        ensure(!leaf_test(&st, phi, &w)?, || "mixed direction trivial".into())?;
                    }
                }
                Ok(pt.rank < generic)
            })
            .collect::<Result<Vec<bool>>>()?;
        total += results.len();
        degenerate += results.iter().filter(|&&d| d).count();
    }
    Ok(format!("{total} points ({degenerate} degenerate): trivial directions = Im π"))
}

/// Rank of `π` at a generic point.
fn generic_rank(n: u32) -> usize {
    let n = n as usize;
    if n % 2 == 1 {
        n - 1
    } else {
        n - 2
    }
}

/// Degenerate points used for the conormal comparison.
fn degenerate_points(fx: &Fixture, st: &Setting<Fp>) -> Result<Vec<Vec<Fp>>> {
    let generic = generic_rank(fx.n);
    match fx.n {
        3 => {
            let pts = projective_points(&st.zero().elements().expect("finite field"), 3);
            Ok(rank_sweep(st, &pts)?
                .into_iter()
                .filter(|e| e.rank < generic)
                .map(|e| e.phi)
                .collect())
        }
        _ => {
            let classes: Vec<Vec<Fp>> = point_classes(st)?.into_iter().map(|(_, c)| c).collect();
            let take = if fx.n == 4 { 6 } else { 3 };
            let mut out: Vec<Vec<Fp>> = classes.iter().take(take).cloned().collect();
            let one = st.zero().one_like();
            for w in classes[take..].windows(2).take(6) {
                let s = secant(&w[0], &w[1], &one, &one);
                if s.iter().any(|x| !x.is_zero()) && fo_matrix(st, &s)?.rank < generic {
                    out.push(s);
                }
            }
            Ok(out)
        }
    }
}

fn c8_conormal(seed: u64) -> Result<String> {
    let mut notes = vec![];
    for (k, (fx, st)) in settings(&shipped_fixtures())?.into_iter().enumerate() {
        if fx.n < 3 {
            continue;
        }
        let pts = degenerate_points(&fx, &st)?;
        let need = if fx.n == 3 { 1 } else { 5 };
        ensure(pts.len() >= need, || format!("n = {}: only {} degenerate points", fx.n, pts.len()))?;
        let scalars = pts
            .par_iter()
            .enumerate()
            .map(|(i, phi)| {
                let c = compare(&st, phi)?;
                ensure(c.ker_dim > 0 && c.matched() && c.both_lie(), || {
                    format!("n = {}: conormal vs End0 mismatch at {phi:?}", fx.n)
                })?;
                let mut rng = rng_for(seed, 8, k * 1000 + i);
                let v = random_point(&st, &mut rng);
                lemma_check(&st, phi, &v)?;
                let pt = fo_matrix(&st, phi)?;
                ensure(specialization_check(&st, &pt, &v)?, || "ε = 0 slice differs".into())?;
                Ok(c.scalar.expect("matched").to_string())
            })
            .collect::<Result<Vec<_>>>()?;
        let mut uniq = scalars.clone();
        uniq.sort();
        uniq.dedup();
        notes.push(format!("n={}: {} pts, λ ∈ {{{}}}", fx.n, pts.len(), uniq.join(", ")));
    }
    Ok(notes.join("; "))
}

fn random_frac(ctx: &Ctx<Fp>, rng: &mut ChaCha8Rng) -> Frac<Fp> {
    let z = ctx.zero();
    let d = [0usize, 2, 3, 4, 5, 7][rng.gen_range(0..6)];
    Frac::new(CoordPoly::monomial(d, &z).scale(&z.random(rng)), rng.gen_range(0..3))
}

fn random_matrix(ctx: &Ctx<Fp>, r: usize, rng: &mut ChaCha8Rng) -> FracMatrix<Fp> {
    (0..r).map(|_| (0..r).map(|_| random_frac(ctx, rng)).collect()).collect()
}

fn c9_deformations(seed: u64) -> Result<String> {
    let mut count = 0;
    for (k, (_, st)) in settings(&shipped_fixtures()[1..3])?.into_iter().enumerate() {
        let ctx = &st.ctx;
        let mut rng = rng_for(seed, 9, k);
        for _ in 0..4 {
            let l1 = Bundle::line(ctx, rng.gen_range(-3..4), 0);
            let l2 = Bundle::line(ctx, rng.gen_range(-3..4), 0);
            let x = deform_bundle(ctx, &l1, &random_matrix(ctx, 1, &mut rng));
            let y = deform_bundle(ctx, &l2, &random_matrix(ctx, 1, &mut rng));
            let phi = random_point(&st, &mut rng);
            let e = deform_bundle(ctx, &st.extension(&phi, None), &random_matrix(ctx, 2, &mut rng));
            for (a, b) in [(&x, &y), (&e, &y), (&x, &e), (&e, &e)] {
                check_tensor_rule(ctx, a, b)?;
            }
            for b in [&x, &e] {
                check_dual_rule(ctx, b)?;
                check_end_rule(ctx, b)?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} random configurations: tensor, dual and End rules hold"))
}

fn c10_stability(seed: u64) -> Result<String> {
    let mut total = 0;
    for (k, (_, st)) in settings(&shipped_fixtures())?.into_iter().enumerate() {
        let bumped = st.bumped()?;
        let mut rng = rng_for(seed, 10, k);
        let mut phis: Vec<Vec<Fp>> = (0..3).map(|_| random_point(&st, &mut rng)).collect();
        phis.push(point_classes(&st)?[1].1.clone());
        phis.par_iter()
            .map(|phi| {
                check_rank_stable(&st, &bumped, phi)?;
                end_dim(&st, phi)?;
                let a = ExtensionSS::new(&st, phi, None, false)?.fc.page(3);
                let b = ExtensionSS::new(&bumped, phi, None, false)?.fc.page(3);
                if a.dims0() != b.dims0() || a.dims1() != b.dims1() {
                    return Err(Error::Budget(format!("E3 changed under N → N + 5 at {phi:?}")));
                }
                stable_dims(&st.ctx, &Bundle::traceless_end(&st.ctx, &st.extension(phi, None)), st.budget)?;
                Ok(())
            })
            .collect::<Result<Vec<_>>>()?;
        total += phis.len();
    }
    Ok(format!("{total} points: ranks, End and E3 unchanged under N → N + 5"))
}

pub fn run_criterion(id: u8, seed: u64) -> Outcome {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .unwrap_or("unknown");
    let res = match id {
        1 => c1_dimensions(),
        2 => c2_degeneration(seed),
        3 => c3_d2_agreement(seed),
        4 => c4_rank_formula(seed),
        5 => c5_skew_homogeneity(seed),
        6 => c6_jacobi(seed),
        7 => c7_leaves(seed),
        8 => c8_conormal(seed),
        9 => c9_deformations(seed),
        10 => c10_stability(seed),
        _ => Err(Error::Precondition(format!("no criterion {id}"))),
    };
    match res {
        Ok(detail) => Outcome { id, name, detail, error: None },
        Err(e) => Outcome { id, name, detail: String::new(), error: Some(e) },
    }
}

pub fn run_all(seed: u64) -> Vec<Outcome> {
    CRITERIA.iter().map(|(id, _)| run_criterion(*id, seed)).collect()
}
