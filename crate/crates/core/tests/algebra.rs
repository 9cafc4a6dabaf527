mod common;

use common::{assert_close, poly, quat, unit};
use proptest::prelude::*;
use qfock::bank::builtin;
use qfock::quat::{
    join_in_frame, orthogonal_unit, slice_decompose, sphere_integrate, split_in_frame, SphereRule,
};
use qfock::slice::{
    intrinsic_basis_decompose, is_intrinsic, represent_from_slice, star_product, IntrinsicMode, SampleGrid,
};
use qfock::{Quat, RegularPolynomial, SliceFunction, Unit};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_recomposes(q in quat(5.0)) {
        let s = slice_decompose(q);
        prop_assert!(s.y >= 0.0);
        assert_close(s.recompose(), q, 1e-14, "recompose");
        assert_close(s.unit.point(s.x, s.y), q, 1e-14, "point");
    }

    #[test]
    fn orthogonal_unit_anticommutes(u in unit()) {
        let j = orthogonal_unit(u);
        let (a, b) = (u.quat(), j.quat());
        assert_close(a * b + b * a, Quat::ZERO, 1e-14, "anticommutator");
        assert_close(b * b, -Quat::ONE, 1e-14, "square");
    }

    #[test]
    fn frame_split_round_trips(q in quat(3.0), u in unit()) {
        let j = orthogonal_unit(u);
        let (z1, z2) = split_in_frame(q, u, j);
        assert_close(join_in_frame(z1, z2, u, j), q, 1e-14, "join");
        let rebuilt = Quat::from_complex(z1, u) + Quat::from_complex(z2, u) * j.quat();
        assert_close(rebuilt, q, 1e-14, "z1 + z2 J");
    }

    #[test]
    fn norm_is_multiplicative(p in quat(3.0), q in quat(3.0), r in quat(3.0)) {
        prop_assert!(((p * q).norm() - p.norm() * q.norm()).abs() < 1e-13);
        assert_close((p * q) * r, p * (q * r), 1e-12, "associativity");
        assert_close((p * q).conj(), q.conj() * p.conj(), 1e-13, "conjugate reverses");
    }

    #[test]
    fn stems_have_parity(p in poly(6, 1.0), x in -2.0..2.0f64, y in 0.0..2.0f64) {
        let f: SliceFunction = p.into();
        let (a, b) = f.stem(x, y);
        let (a2, b2) = f.stem(x, -y);
        assert_close(a2, a, 1e-12 * (1.0 + a.norm()), "even part");
        assert_close(b2, -b, 1e-12 * (1.0 + b.norm()), "odd part");
        prop_assert!(f.parity_defect(&SampleGrid::default()) < 1e-10);
    }

    #[test]
    fn representation_reconstructs_other_slices(
        p in poly(5, 1.0),
        i in unit(),
        j in unit(),
        x in -1.5..1.5f64,
        y in 0.05..1.5f64,
    ) {
        prop_assume!((i.dot(j).abs() - 1.0).abs() > 1e-3);
        let f: SliceFunction = p.clone().into();
        let r = represent_from_slice(f.eval_on(j, x, y), f.eval_on(j, x, -y), j, i);
        let direct = p.eval(i.point(x, y));
        assert_close(r, direct, 1e-11 * (1.0 + direct.norm()), "representation");
    }

    #[test]
    fn star_is_convolution_of_coefficients(p in poly(4, 1.0), q in poly(4, 1.0), z in quat(1.5)) {
        let s = p.star(&q);
        let mut c = vec![Quat::ZERO; p.coeffs.len() + q.coeffs.len() - 1];
        for (m, a) in p.coeffs.iter().enumerate() {
            for (n, b) in q.coeffs.iter().enumerate() {
                c[m + n] += *a * *b;
            }
        }
        let oracle = RegularPolynomial::new(c).eval(z);
        assert_close(s.eval(z), oracle, 1e-11 * (1.0 + oracle.norm()), "coefficients");
        let sf = star_product(&p.clone().into(), &q.clone().into());
        assert_close(sf.eval(z), oracle, 1e-11 * (1.0 + oracle.norm()), "stem route");
    }

    #[test]
    fn star_is_associative(p in poly(3, 1.0), q in poly(3, 1.0), z in quat(1.5)) {
        let mixed = builtin("mixed", 1.0).unwrap();
        let (f, g): (SliceFunction, SliceFunction) = (p.into(), q.into());
        let left = star_product(&star_product(&f, &mixed), &g).eval(z);
        let right = star_product(&f, &star_product(&mixed, &g)).eval(z);
        assert_close(left, right, 1e-11 * (1.0 + left.norm()), "associativity");
    }

    #[test]
    fn basis_decomposition_reconstructs(z in quat(2.0), i in unit()) {
        let j = orthogonal_unit(i);
        let f = builtin("mixed", 1.0).unwrap();
        let h = intrinsic_basis_decompose(&f, i, j).unwrap();
        let frame = [Quat::ONE, i.quat(), j.quat(), i.quat() * j.quat()];
        let sum: Quat = h.iter().zip(frame).map(|(hl, e)| hl.eval(z) * e).sum();
        assert_close(sum, f.eval(z), 1e-13, "reconstruction");
    }
}

#[test]
fn star_does_not_commute() {
    let i = SliceFunction::constant(Quat::I);
    let j = SliceFunction::constant(Quat::J);
    let q = Quat::new(0.2, 0.1, -0.3, 0.5);
    assert_close(star_product(&i, &j).eval(q), Quat::K, 1e-15, "i*j");
    assert_close(star_product(&j, &i).eval(q), -Quat::K, 1e-15, "j*i");
}

#[test]
fn sphere_moments() {
    let rules = [
        SphereRule::Lebedev26,
        SphereRule::Lebedev50,
        SphereRule::ProductGaussLegendre { n_theta: 8, n_phi: 16 },
    ];
    for rule in rules {
        let m = |g: fn([f64; 3]) -> f64| sphere_integrate(&rule, |u| Quat::real(g(u.vec()))).unwrap().re;
        assert!((m(|_| 1.0) - 1.0).abs() < 1e-14, "{rule:?}");
        assert!((m(|v| v[0] * v[0]) - 1.0 / 3.0).abs() < 1e-14, "{rule:?}");
        assert!((m(|v| v[0].powi(4)) - 0.2).abs() < 1e-14, "{rule:?}");
        assert!((m(|v| v[0] * v[0] * v[1] * v[1]) - 1.0 / 15.0).abs() < 1e-14, "{rule:?}");
        assert!(m(|v| v[0] * v[1] * v[2]).abs() < 1e-14, "{rule:?}");
    }
}

#[test]
fn intrinsic_modes_agree() {
    let grid = SampleGrid::uniform(1.8, 7);
    let exp_real: SliceFunction = RegularPolynomial::new(
        (0..20).map(|n| Quat::real(1.0 / common::factorial(n))).collect(),
    )
    .into();
    let positives = ["one", "q", "q2", "qbar", "re", "abs2", "cos_re", "erf_step", "gauss_bump", "sawtooth"];
    let negatives = ["const_j", "mixed"];
    let mut cases: Vec<(String, SliceFunction, bool)> = Vec::new();
    for n in positives {
        cases.push((n.into(), builtin(n, 1.0).unwrap(), true));
    }
    for n in negatives {
        cases.push((n.into(), builtin(n, 1.0).unwrap(), false));
    }
    cases.push(("exp".into(), exp_real, true));
    cases.push(("i q".into(), RegularPolynomial::monomial(1, Quat::I).into(), false));
    cases.push(("slice exponential".into(), builtin("exp_fixed_point", 1.0).unwrap(), false));
    for (name, f, expected) in &cases {
        for mode in IntrinsicMode::all_default() {
            let r = is_intrinsic(f, mode, &grid, 1e-10).unwrap();
            assert_eq!(r.holds, *expected, "{name} under {mode:?}: {r:?}");
            assert_eq!(r.witness.is_some(), !expected, "{name} under {mode:?}");
        }
    }
}

#[test]
fn zero_unit_is_rejected() {
    assert!(Unit::new([0.0, 0.0, 0.0]).is_err());
    assert!(Unit::new([f64::NAN, 1.0, 0.0]).is_err());
}
