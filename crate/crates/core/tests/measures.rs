mod common;

use common::{quat, unit};
use proptest::prelude::*;
use qfock::bank::builtin;
use qfock::fock::KernelContext;
use qfock::measure::{
    averaging_function, box_mass, carleson_profile, decays, intrinsic_average_identity, probe_lattice, Atom,
    DiscreteMeasure, SymmetricBox,
};
use qfock::quad::{DiskRule, QuadratureRule};
use qfock::{Quat, Unit};

fn rotate(mu: &DiscreteMeasure, u: Quat) -> DiscreteMeasure {
    let inv = u.conj() * (1.0 / u.norm_sqr());
    let atoms = mu.atoms().iter().map(|a| Atom { point: u * a.point * inv, weight: a.weight }).collect();
    DiscreteMeasure::new(atoms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sparse_lattice_boxes_hold_at_most_four_atoms(z in quat(4.0), r in 0.3..1.5f64, u in unit()) {
        let mu = DiscreteMeasure::lattice(u, 2.0 * r, (0.1, -0.2), 6.0, 1.0).unwrap();
        let b = SymmetricBox::new(z, r).unwrap();
        prop_assert!(box_mass(&mu, &b) <= 4.0);
    }

    #[test]
    fn box_mass_is_additive_and_rotation_invariant(z in quat(3.0), r in 0.3..2.0f64, rot in quat(1.0)) {
        prop_assume!(rot.norm() > 0.1);
        let a = DiscreteMeasure::lattice(Unit::I, 0.7, (0.0, 0.0), 3.0, 0.5).unwrap();
        let b = DiscreteMeasure::rings(Unit::new([1.0, 1.0, 0.0]).unwrap(), 3, 8, |n| 1.0 / n as f64).unwrap();
        let bx = SymmetricBox::new(z, r).unwrap();
        let sum = box_mass(&a, &bx) + box_mass(&b, &bx);
        prop_assert!((box_mass(&a.merged(&b), &bx) - sum).abs() < 1e-12);
        let m = a.merged(&b);
        let parts: f64 = m.by_unit(1e-9).iter().map(|(_, p)| box_mass(p, &bx)).sum::<f64>() + box_mass(&m.real_part(), &bx);
        prop_assert!((parts - sum).abs() < 1e-12);
        // shrink the radius slightly so atoms on the boundary do not flip under rounding
        let inner = SymmetricBox::new(z, r * (1.0 - 1e-9)).unwrap();
        prop_assert!((box_mass(&rotate(&m, rot), &bx) - box_mass(&m, &bx)).abs() < 1e-12
            || (box_mass(&rotate(&m, rot), &inner) - box_mass(&m, &inner)).abs() < 1e-12);
    }
}

#[test]
fn gaussian_measures_are_normalized() {
    let rule = QuadratureRule::default();
    for alpha in [0.5, 1.0, 2.0] {
        let one: f64 = rule.integrate_global(|_| 1.0, alpha).unwrap();
        assert!((one - 1.0).abs() < 1e-14);
        let second: f64 = rule.integrate_global(|w: Quat| w.norm_sqr(), alpha).unwrap();
        assert!((second - 1.0 / alpha).abs() < 1e-13, "alpha {alpha}: {second}");
        let odd: Quat = rule.integrate_global(|w: Quat| w, alpha).unwrap();
        assert!(odd.norm() < 1e-14);
    }
}

#[test]
fn averaging_function_examples() {
    let atom = DiscreteMeasure::new(vec![Atom { point: Quat::new(1.0, 0.0, 1.0, 0.0), weight: 2.0 }]).unwrap();
    let pi = std::f64::consts::PI;
    // the box around 1+I contains 1+J, since it is the union over all slices
    let v = averaging_function(&atom, Quat::new(1.0, 1.0, 0.0, 0.0), 0.5).unwrap();
    assert!((v - 2.0 / (pi * 0.25)).abs() < 1e-14);
    // and around the conjugate point
    assert!(averaging_function(&atom, Quat::new(1.0, -1.0, 0.0, 0.0), 0.5).unwrap() > 0.0);
    assert_eq!(averaging_function(&atom, Quat::real(1.0), 0.5).unwrap(), 0.0);
    assert!(averaging_function(&atom, Quat::ZERO, -1.0).is_err());
}

#[test]
fn intrinsic_average_examples() {
    let disk = DiskRule { n_r: 400, n_theta: 64 };
    let rule = QuadratureRule::default();
    let f = builtin("abs2", 1.0).unwrap();
    let pi = std::f64::consts::PI;
    for (x0, y0, r) in [(1.0, 1.0, 1.0), (0.0, 0.5, 0.3), (-2.0, 3.0, 1.5)] {
        let (global, slice) = intrinsic_average_identity(&f, Unit::K.point(x0, y0), r, Unit::J, &disk, &rule).unwrap();
        let oracle = pi * r * r * (x0 * x0 + y0 * y0 + r * r / 2.0);
        assert!((slice - oracle).abs() < 1e-5 * oracle, "{slice} vs {oracle}");
        assert!((global - slice).abs() < 1e-12 * oracle);
    }
    let not_real = builtin("q", 1.0).unwrap();
    assert!(intrinsic_average_identity(&not_real, Quat::ONE, 0.5, Unit::I, &disk, &rule).is_err());
}

#[test]
fn json_round_trip() {
    let mu = DiscreteMeasure::rings(Unit::new([0.3, -1.0, 2.0]).unwrap(), 2, 5, |n| n as f64)
        .unwrap()
        .merged(&DiscreteMeasure::new(vec![Atom { point: Quat::real(-0.5), weight: 0.25 }]).unwrap());
    let back = DiscreteMeasure::from_json(&mu.to_json()).unwrap();
    assert_eq!(back.len(), mu.len());
    for (a, b) in mu.atoms().iter().zip(back.atoms()) {
        assert!((a.point - b.point).norm() < 1e-14);
        assert_eq!(a.weight, b.weight);
    }
    let bad = [
        r#"{"atoms":[{"x":0,"y":-1,"unit":[1,0,0],"w":1}]}"#,
        r#"{"atoms":[{"x":0,"y":1,"unit":[0,0,0],"w":1}]}"#,
        r#"{"atoms":[{"x":0,"y":1,"unit":[1,0,0],"w":-1}]}"#,
        r#"{"atoms":[{"x":0,"y":1,"unit":[1,0,0],"w":1,"extra":2}]}"#,
        r#"{"points":[]}"#,
    ];
    for text in bad {
        assert!(DiscreteMeasure::from_json(text).is_err(), "{text}");
    }
    let real = DiscreteMeasure::from_json(r#"{"atoms":[{"x":2,"y":0,"unit":[0,0,0],"w":1}]}"#).unwrap();
    assert_eq!(real.atoms()[0].point, Quat::real(2.0));
}

#[test]
fn carleson_profile_of_a_lattice() {
    let ctx = KernelContext::new(1.0).unwrap();
    let mu = DiscreteMeasure::lattice(Unit::I, 1.0, (0.5, 0.5), 8.0, 1.0).unwrap();
    let probes = probe_lattice(3.0, 1.0, &[Unit::I, Unit::J]);
    let prof = carleson_profile(&mu, &ctx, 2.0, &probes, 1.0).unwrap();
    assert_eq!(prof.rows.len(), probes.len());
    let (a, b) = prof.comparability();
    assert!(a > 0.0 && b > 0.0 && a * b > 1.0 - 1e-12 && a * b < 1.0 + 1e-12);
    assert!(a < 10.0 && b < 10.0, "{a}, {b}");
    let zero = carleson_profile(&DiscreteMeasure::empty(), &ctx, 2.0, &probes, 1.0).unwrap();
    assert_eq!(zero.comparability(), (0.0, 0.0));
}

#[test]
fn decay_predicate() {
    assert!(decays(&[0.0, 2.0, 1.0, 0.1], 0.1));
    assert!(!decays(&[1.0, 1.0, 1.0], 0.5));
    assert!(decays(&[0.0, 0.0], 0.1));
    assert!(decays(&[], 0.1));
}
