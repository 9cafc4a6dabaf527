mod common;

use common::{assert_close, factorial, qpow, quat};
use proptest::prelude::*;
use qfock::bank::builtin;
use qfock::berezin::BerezinContext;
use qfock::measure::{Atom, DiscreteMeasure};
use qfock::quad::QuadratureRule;
use qfock::toeplitz::{
    adjoint_symbol, berezin_symbol, slice_isometry_apply, toeplitz_matrix_fn, toeplitz_matrix_measure, QuatMatrix,
    SliceIsometry,
};
use qfock::fock::FockElement;
use qfock::quat::orthogonal_unit;
use qfock::{Quat, SliceFunction, Unit};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn max_entry_gap(a: &QuatMatrix, b: &QuatMatrix) -> f64 {
    let n = a.size();
    (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).map(|(r, c)| (a.get(r, c) - b.get(r, c)).norm()).fold(0.0, f64::max)
}

fn vec_norm(v: &[Quat]) -> f64 {
    v.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
}

fn random_quat(rng: &mut ChaCha8Rng) -> Quat {
    Quat::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn chi_is_multiplicative(a in prop::collection::vec(quat(1.0), 16), b in prop::collection::vec(quat(1.0), 16)) {
        let ma = QuatMatrix::from_fn(4, |r, c| a[4 * r + c]);
        let mb = QuatMatrix::from_fn(4, |r, c| b[4 * r + c]);
        let lhs = ma.mul(&mb).unwrap().chi();
        let rhs = &ma.chi() * &mb.chi();
        prop_assert!((lhs - rhs).norm() < 1e-12);
        let adj = ma.adjoint().chi();
        prop_assert!((adj - ma.chi().adjoint()).norm() < 1e-14);
    }
}

#[test]
fn real_part_is_tridiagonal() {
    let rule = QuadratureRule::default();
    for alpha in [0.5f64, 1.0, 2.0] {
        let n = 10;
        let t = toeplitz_matrix_fn(&builtin("re", alpha).unwrap(), alpha, n, Unit::J, &rule).unwrap();
        let oracle = QuatMatrix::from_fn(n, |m, k| {
            if m == k + 1 {
                Quat::real(0.5 * (m as f64 / alpha).sqrt())
            } else if k == m + 1 {
                Quat::real(0.5 * (k as f64 / alpha).sqrt())
            } else {
                Quat::ZERO
            }
        });
        assert!(max_entry_gap(&t.matrix, &oracle) < 1e-10, "alpha {alpha}");
    }
}

#[test]
fn symbol_map_is_linear() {
    let rule = QuadratureRule::default();
    let f = builtin("mixed", 1.0).unwrap();
    let g = builtin("cos_re", 1.0).unwrap();
    let sum = toeplitz_matrix_fn(&f.add(&g.scale(-2.5)), 1.0, 8, Unit::I, &rule).unwrap();
    let tf = toeplitz_matrix_fn(&f, 1.0, 8, Unit::I, &rule).unwrap();
    let tg = toeplitz_matrix_fn(&g.scale(2.5), 1.0, 8, Unit::I, &rule).unwrap();
    assert!(max_entry_gap(&sum.matrix, &tf.matrix.sub(&tg.matrix).unwrap()) < 1e-12);
    let other_slice = toeplitz_matrix_fn(&f, 1.0, 8, Unit::new([0.0, 1.0, 1.0]).unwrap(), &rule).unwrap();
    assert!(max_entry_gap(&tf.matrix, &other_slice.matrix) < 1e-9);
}

#[test]
fn measure_sections_match_gram_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let alpha = 1.3;
    let n = 7;
    let atoms: Vec<Atom> = (0..15)
        .map(|_| Atom { point: random_quat(&mut rng) * 2.0, weight: rng.random_range(0.1..2.0) })
        .collect();
    let mu = DiscreteMeasure::new(atoms.clone()).unwrap();
    let t = toeplitz_matrix_measure(&mu, alpha, n, &[Quat::ZERO]).unwrap();
    let c = |k: usize| (alpha.powi(k as i32) / factorial(k)).sqrt();
    let oracle = QuatMatrix::from_fn(n, |m, k| {
        atoms
            .iter()
            .map(|a| qpow(a.point.conj(), m) * qpow(a.point, k) * (a.weight * c(m) * c(k) * (-alpha * a.point.norm_sqr()).exp()))
            .sum()
    });
    assert!(max_entry_gap(&t.matrix, &oracle) < 1e-12);
    assert!(t.matrix.min_eigenvalue() > -1e-12, "positive measures give positive operators");
    assert!(max_entry_gap(&t.matrix, &t.matrix.adjoint()) < 1e-14);
}

#[test]
fn single_real_atom_has_rank_one() {
    for t in [0.0f64, 0.7, -1.5] {
        let mu = DiscreteMeasure::new(vec![Atom { point: Quat::real(t), weight: 1.0 }]).unwrap();
        let mut s = toeplitz_matrix_measure(&mu, 1.0, 8, &[Quat::ZERO]).unwrap().matrix.singular_values();
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!(s[0] > 0.0);
        assert!(s.iter().skip(1).all(|v| *v < 1e-12 * s[0]), "t {t}: {s:?}");
        let e0: f64 = (0..8).map(|k| (t * t).powi(k) / factorial(k as usize)).sum::<f64>() * (-t * t).exp();
        assert!((s[0] - e0).abs() < 1e-12, "t {t}: {} vs {e0}", s[0]);
    }
}

#[test]
fn volume_density_gives_identity() {
    let rule = QuadratureRule::default();
    for alpha in [0.7, 1.0] {
        let mu = DiscreteMeasure::from_density(|_| 1.0, alpha, &rule).unwrap();
        let t = toeplitz_matrix_measure(&mu, alpha, 8, &[Quat::ZERO]).unwrap();
        assert!(max_entry_gap(&t.matrix, &QuatMatrix::identity(8)) < 1e-10, "alpha {alpha}");
    }
}

#[test]
fn operator_norm_matches_probing() {
    let rule = QuadratureRule::default();
    let t = toeplitz_matrix_fn(&builtin("mixed", 1.0).unwrap(), 1.0, 10, Unit::I, &rule).unwrap();
    let m = &t.matrix;
    let norm = m.operator_norm();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut best = 0.0f64;
    for _ in 0..200 {
        let v: Vec<Quat> = (0..10).map(|_| random_quat(&mut rng)).collect();
        let r = vec_norm(&m.apply(&v)) / vec_norm(&v);
        assert!(r <= norm * (1.0 + 1e-10));
        best = best.max(r);
    }
    let gram = m.adjoint().mul(m).unwrap();
    let mut v: Vec<Quat> = (0..10).map(|_| random_quat(&mut rng)).collect();
    for _ in 0..300 {
        let w = gram.apply(&v);
        let s = vec_norm(&w);
        v = w.into_iter().map(|q| q * (1.0 / s)).collect();
    }
    best = best.max(vec_norm(&m.apply(&v)) / vec_norm(&v));
    assert!(best >= 0.98 * norm, "{best} vs {norm}");
}

#[test]
fn adjoint_symbol_examples() {
    let (i, j) = (Unit::I, Unit::J);
    let q = builtin("q", 1.0).unwrap();
    let a = adjoint_symbol(&q, i, j).unwrap();
    for z in [Quat::new(0.3, 0.5, 0.0, 0.0), Quat::new(-1.0, 0.2, 0.4, -0.3)] {
        assert_close(a.eval(z), z.conj(), 1e-14, "intrinsic symbol is conjugated");
    }
    let c = adjoint_symbol(&SliceFunction::constant(Quat::J), i, j).unwrap();
    assert_close(c.eval(Quat::new(0.4, 0.1, 0.2, 0.3)), -Quat::J, 1e-14, "j");
    let rule = QuadratureRule::default();
    let f = builtin("mixed", 1.0).unwrap();
    let tf = toeplitz_matrix_fn(&f, 1.0, 8, i, &rule).unwrap();
    let tg = toeplitz_matrix_fn(&adjoint_symbol(&f, i, j).unwrap(), 1.0, 8, i, &rule).unwrap();
    assert!(max_entry_gap(&tg.matrix, &tf.matrix.adjoint()) < 1e-10);
    assert!(adjoint_symbol(&f, i, i).is_err());
}

#[test]
fn berezin_symbol_at_origin_is_the_mean() {
    let rule = QuadratureRule::default();
    let ctx = BerezinContext::new(1.0).unwrap();
    for name in ["mixed", "gauss_bump", "sawtooth"] {
        let f = builtin(name, 1.0).unwrap();
        let t = toeplitz_matrix_fn(&f, 1.0, 8, Unit::I, &rule).unwrap();
        let mean: Quat = rule.integrate_slice_shifted(|w| f.eval(w), Unit::I, 1.0, f.gauss_rate()).unwrap();
        let rows = berezin_symbol(&t, Some(&f), &[Quat::ZERO], &ctx).unwrap();
        assert_close(Quat::from_array(rows[0].operator), mean, 1e-12, name);
        assert_close(t.matrix.get(0, 0), mean, 1e-12, name);
        assert!(rows[0].trusted);
    }
}

#[test]
fn constant_units_act_as_slice_isometries() {
    let rule = QuadratureRule::default();
    let (i, j) = (Unit::I, orthogonal_unit(Unit::I));
    for (which, c) in [(SliceIsometry::I, i.quat()), (SliceIsometry::J, j.quat()), (SliceIsometry::IJ, i.quat() * j.quat())] {
        let t = toeplitz_matrix_fn(&SliceFunction::constant(c), 1.0, 6, i, &rule).unwrap();
        assert!(max_entry_gap(&t.matrix, &which.matrix(6, i, j).unwrap()) < 1e-12, "{which:?}");
        let g = FockElement::new(vec![Quat::ONE, Quat::new(0.0, 1.0, 2.0, 0.0), Quat::K], 1.0).unwrap();
        let s = slice_isometry_apply(which, &g, i, j).unwrap();
        assert!((s.norm().unwrap() - g.norm().unwrap()).abs() < 1e-14, "isometry");
        let z = Quat::new(0.2, -0.3, 0.5, 0.1);
        assert_close(s.eval(z), t_apply(&t.matrix, &g).eval(z), 1e-12, "matrix and map agree");
    }
}

fn t_apply(m: &QuatMatrix, g: &FockElement) -> FockElement {
    let n = m.size();
    let scale = |k: usize| (g.alpha.powi(k as i32) / factorial(k)).sqrt();
    let v: Vec<Quat> = (0..n).map(|k| g.coeffs().get(k).copied().unwrap_or(Quat::ZERO) * (1.0 / scale(k))).collect();
    let w = m.apply(&v);
    FockElement::new(w.iter().enumerate().map(|(k, c)| *c * scale(k)).collect(), g.alpha).unwrap()
}
