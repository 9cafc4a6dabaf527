#![allow(dead_code)]

use proptest::prelude::*;
use qfock::{Quat, RegularPolynomial, Unit};

pub fn quat(r: f64) -> impl Strategy<Value = Quat> {
    prop::array::uniform4(-r..r).prop_map(Quat::from_array)
}

pub fn unit() -> impl Strategy<Value = Unit> {
    prop::array::uniform3(-1.0..1.0f64)
        .prop_filter("direction away from zero", |v| v.iter().map(|c| c * c).sum::<f64>() > 1e-2)
        .prop_map(|v| Unit::new(v).expect("nonzero"))
}

pub fn poly(max_degree: usize, r: f64) -> impl Strategy<Value = RegularPolynomial> {
    prop::collection::vec(quat(r), 1..=max_degree + 1).prop_map(RegularPolynomial::new)
}

pub fn assert_close(a: Quat, b: Quat, tol: f64, what: &str) {
    let d = (a - b).norm();
    assert!(d <= tol, "{what}: |{a} - {b}| = {d:e} > {tol:e}");
}

/// `qⁿ` by repeated multiplication.
pub fn qpow(q: Quat, n: usize) -> Quat {
    (0..n).fold(Quat::ONE, |acc, _| acc * q)
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}
