//! Sampling points of `ℙ Ext¹(V, O)`: exhaustive enumeration, random points,
//! point classes `φ_P` and secants through two of them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::point::{end_dim, fo_matrix};
use crate::cech::Setting;
use crate::error::{Error, Result};
use crate::ring::{Field, Point};

/// All points of `ℙ^{n−1}` over a finite field, normalized so that the last
/// nonzero coordinate is 1.
pub fn projective_points<F: Field>(elements: &[F], n: usize) -> Vec<Vec<F>> {
    let z = elements[0].zero_like();
    let mut out = vec![];
    for lead in 0..n {
        // coordinates before `lead` are free, `lead` is 1, the rest vanish
        let mut cur = vec![z.clone(); n];
        cur[lead] = z.one_like();
        let mut idx = vec![0usize; lead];
        loop {
            for (i, &k) in idx.iter().enumerate() {
                cur[i] = elements[k].clone();
            }
            out.push(cur.clone());
            let mut pos = 0;
            while pos < lead {
                idx[pos] += 1;
                if idx[pos] < elements.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == lead {
                break;
            }
        }
    }
    out
}

pub fn random_point<F: Field, R: Rng + ?Sized>(st: &Setting<F>, rng: &mut R) -> Vec<F> {
    let z = st.zero();
    let n = st.n() as usize;
    loop {
        let v: Vec<F> = (0..n).map(|_| z.random(rng)).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// `count` random points from a generator seeded with `seed`.
pub fn random_points<F: Field>(st: &Setting<F>, count: usize, seed: u64) -> Vec<Vec<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_point(st, &mut rng)).collect()
}

/// `φ_P` for every point of the curve, including `O∞`.
pub fn point_classes<F: Field>(st: &Setting<F>) -> Result<Vec<(Point<F>, Vec<F>)>> {
    st.ctx
        .cover()
        .curve
        .points()
        .into_iter()
        .map(|p| st.ext.point_class(&p).map(|c| (p, c)))
        .collect()
}

/// `a·φ_P + b·φ_Q`.
pub fn secant<F: Field>(p: &[F], q: &[F], a: &F, b: &F) -> Vec<F> {
    p.iter()
        .zip(q)
        .map(|(x, y)| a.clone() * x.clone() + b.clone() * y.clone())
        .collect()
}

#[derive(Clone, Debug)]
pub struct SweepEntry<F: Field> {
    pub phi: Vec<F>,
    pub rank: usize,
    pub end_dim: usize,
}

impl<F: Field> SweepEntry<F> {
    pub fn consistent(&self, n: usize) -> bool {
        self.rank + self.end_dim == n && self.rank % 2 == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "phi": self.phi.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "rank": self.rank,
            "end_dim": self.end_dim,
        })
    }
}

/// Rank of `π_φ` and `dim End(E_φ)` at every point, in input order.
pub fn rank_sweep<F: Field>(st: &Setting<F>, points: &[Vec<F>]) -> Result<Vec<SweepEntry<F>>> {
    points
        .par_iter()
        .map(|phi| {
            Ok(SweepEntry {
                phi: phi.clone(),
                rank: fo_matrix(st, phi)?.rank,
                end_dim: end_dim(st, phi)?,
            })
        })
        .collect()
}

/// Recompute the rank at the bumped budget; a change aborts with a budget error.
pub fn check_rank_stable<F: Field>(st: &Setting<F>, bumped: &Setting<F>, phi: &[F]) -> Result<usize> {
    let a = fo_matrix(st, phi)?.rank;
    let b = fo_matrix(bumped, phi)?.rank;
    if a != b {
        return Err(Error::Budget(format!("rank changed from {a} to {b}")));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PrimeField;

    #[test]
    fn projective_plane_over_f5_has_31_points() {
        let f = PrimeField::new(5).unwrap();
        let els = f.zero().elements().unwrap();
        let pts = projective_points(&els, 3);
        assert_eq!(pts.len(), 31);
        let mut uniq: Vec<String> = pts.iter().map(|p| format!("{p:?}")).collect();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), 31);
        assert!(pts.iter().all(|p| p.iter().rev().find(|x| !x.is_zero()).unwrap().is_one()));
    }
}
