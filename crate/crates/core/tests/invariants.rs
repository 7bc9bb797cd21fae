use std::sync::OnceLock;

use proptest::prelude::*;

use fo_core::cech::Setting;
use fo_core::conormal::intrinsic_derivative;
use fo_core::curve::{shipped_fixtures, Curve, Fixture};
use fo_core::fo::{fo_matrix, monomials, point_classes, projective_points, MPoly};
use fo_core::linalg::add_vec;
use fo_core::ring::{Field, Fp, PrimeField};

fn fixture(n: u32) -> Fixture {
    shipped_fixtures().into_iter().find(|f| f.n == n).unwrap()
}

fn setting(n: u32) -> &'static Setting<Fp> {
    static CELLS: [OnceLock<Setting<Fp>>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CELLS[n as usize - 2].get_or_init(|| Setting::from_fixture(&fixture(n)).unwrap())
}

fn to_fp(f: &PrimeField, v: &[i64]) -> Vec<Fp> {
    v.iter().map(|&x| f.elem(x)).collect()
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// `#E(F_p)` from Euler's criterion, without the curve module.
fn count_by_legendre(p: u64, a: u64, b: u64) -> usize {
    let mut count = 1;
    for x in 0..p {
        let r = (x * x % p * x + a * x + b) % p;
        count += match r {
            0 => 1,
            _ if pow_mod(r, (p - 1) / 2, p) == 1 => 2,
            _ => 0,
        };
    }
    count
}

#[test]
fn point_counts_match_legendre_sums() {
    for (p, a, b) in [(11, 1, 1), (13, 1, 1), (13, 1, 2), (31, 1, 8), (53, 1, 2)] {
        let f = PrimeField::new(p).unwrap();
        let c = Curve::new(f.elem(a as i64), f.elem(b as i64)).unwrap();
        assert_eq!(c.points().len(), count_by_legendre(p, a, b), "p = {p}");
    }
}

#[test]
fn miller_function_vanishes_only_at_p0() {
    for fx in shipped_fixtures() {
        let cover = fx.cover().unwrap();
        for p in cover.curve.points() {
            let Some((x, y)) = p.coords() else { continue };
            assert_eq!(cover.w.eval(x, y).is_zero(), p == cover.p0, "{p:?} for n = {}", fx.n);
        }
        // pole order n at O∞
        assert_eq!(cover.w.degree(), Some(fx.n as usize));
    }
}

#[test]
fn projective_space_has_the_right_size() {
    for (p, n) in [(5u64, 2usize), (7, 3), (5, 4)] {
        let f = PrimeField::new(p).unwrap();
        let pts = projective_points(&f.zero().elements().unwrap(), n);
        assert_eq!(pts.len() as u64, (p.pow(n as u32) - 1) / (p - 1));
    }
}

#[test]
fn point_classes_are_rank_zero_in_the_plane() {
    let st = setting(3);
    for (p, phi) in point_classes(st).unwrap() {
        assert_eq!(fo_matrix(st, &phi).unwrap().rank, 0, "{p:?}");
    }
}

fn mpoly(f: &PrimeField, nvars: usize, coeffs: &[i64]) -> MPoly<Fp> {
    let mut p = MPoly::zero(nvars, &f.zero());
    for (e, &c) in monomials(nvars, 3).into_iter().zip(coeffs) {
        p.add_term(e, f.elem(c));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivative_obeys_leibniz(
        a in prop::collection::vec(-50i64..50, 20),
        b in prop::collection::vec(-50i64..50, 20),
        var in 0usize..3,
    ) {
        let f = PrimeField::new(53).unwrap();
        let (p, q) = (mpoly(&f, 3, &a), mpoly(&f, 3, &b));
        let lhs = p.mul(&q).derivative(var);
        let rhs = p.derivative(var).mul(&q).add(&p.mul(&q.derivative(var)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_ring_map(
        a in prop::collection::vec(-50i64..50, 20),
        b in prop::collection::vec(-50i64..50, 20),
        x in prop::collection::vec(0i64..53, 3),
    ) {
        let f = PrimeField::new(53).unwrap();
        let (p, q) = (mpoly(&f, 3, &a), mpoly(&f, 3, &b));
        let x = to_fp(&f, &x);
        prop_assert_eq!(p.mul(&q).eval(&x), p.eval(&x) * q.eval(&x));
        prop_assert_eq!(p.add(&q).eval(&x), p.eval(&x) + q.eval(&x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn skew_form_is_alternating_with_even_rank(n in 3u32..=4, raw in prop::collection::vec(0i64..13, 4)) {
        let st = setting(n);
        let f = PrimeField::new(13).unwrap();
        let phi = to_fp(&f, &raw[..n as usize]);
        prop_assume!(phi.iter().any(|x| !x.is_zero()));
        let pt = fo_matrix(st, &phi).unwrap();
        let b = &pt.skew;
        for i in 0..b.rows() {
            prop_assert!(b.get(i, i).is_zero());
            for j in 0..b.cols() {
                prop_assert_eq!(b.get(i, j).clone(), -b.get(j, i).clone());
            }
        }
        prop_assert_eq!(pt.rank % 2, 0);
        prop_assert_eq!(b.rank(), pt.rank);
    }

    #[test]
    fn intrinsic_derivative_is_linear_in_v(
        k in 0usize..18,
        v in prop::collection::vec(0i64..13, 3),
        w in prop::collection::vec(0i64..13, 3),
        c in 1i64..13,
    ) {
        let st = setting(3);
        let f = PrimeField::new(13).unwrap();
        let classes = point_classes(st).unwrap();
        let phi = classes[k % classes.len()].1.clone();
        let pt = fo_matrix(st, &phi).unwrap();
        let (v, w) = (to_fp(&f, &v), to_fp(&f, &w));
        let d = |u: &[Fp]| intrinsic_derivative(st, &pt, u).unwrap().matrix;
        prop_assert_eq!(d(&add_vec(&v, &w)), d(&v).add(&d(&w)));
        let cv: Vec<Fp> = v.iter().map(|x| x.clone() * f.elem(c)).collect();
        prop_assert_eq!(d(&cv), d(&v).scale(&f.elem(c)));
        // moving along φ itself changes nothing
        prop_assert!(d(&phi).is_zero());
    }
}
