//! Named test symbols and the JSON description of slice functions.
//!
//! A function is described by one of
//! `{"kind":"poly","coeffs":[[re,i,j,k], …]}`,
//! `{"kind":"gauss_mod","rate":x,"k":k}` or `{"kind":"builtin","name":…}`.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use crate::berezin::exponential_fixed_point;
use crate::error::{Error, Result};
use crate::quat::{Quat, Unit};
use crate::slice::{RegularPolynomial, SliceFunction, Tag};

/// Serialized form of a slice function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    Poly { coeffs: Vec<[f64; 4]> },
    GaussMod { rate: f64, k: usize },
    Builtin { name: String },
}

impl FunctionSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    /// Builds the function; `alpha` is used by builtins that depend on it.
    pub fn build(&self, alpha: f64) -> Result<SliceFunction> {
        match self {
            FunctionSpec::Poly { coeffs } => {
                if coeffs.iter().flatten().any(|c| !c.is_finite()) {
                    return Err(Error::Format("polynomial coefficients must be finite".into()));
                }
                Ok(RegularPolynomial::new(coeffs.iter().map(|c| Quat::from_array(*c)).collect()).into())
            }
            FunctionSpec::GaussMod { rate, k } => {
                if !rate.is_finite() {
                    return Err(Error::Format("gauss_mod rate must be finite".into()));
                }
                Ok(SliceFunction::gauss_mod(*rate, *k))
            }
            FunctionSpec::Builtin { name } => builtin(name, alpha),
        }
    }
}

/// Catalog entry of a builtin symbol.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BuiltinInfo {
    pub name: &'static str,
    pub description: &'static str,
    /// `sup |f|`, when finite.
    pub sup_norm: Option<f64>,
    /// Real-valued and nonnegative.
    pub nonnegative: bool,
}

const CATALOG: &[BuiltinInfo] = &[
    BuiltinInfo { name: "one", description: "constant 1", sup_norm: Some(1.0), nonnegative: true },
    BuiltinInfo { name: "zero", description: "constant 0", sup_norm: Some(0.0), nonnegative: true },
    BuiltinInfo { name: "const_j", description: "constant unit j", sup_norm: Some(1.0), nonnegative: false },
    BuiltinInfo { name: "q", description: "identity q", sup_norm: None, nonnegative: false },
    BuiltinInfo { name: "q2", description: "q squared", sup_norm: None, nonnegative: false },
    BuiltinInfo { name: "qbar", description: "conjugate of q", sup_norm: None, nonnegative: false },
    BuiltinInfo { name: "re", description: "real part Re q", sup_norm: None, nonnegative: false },
    BuiltinInfo { name: "abs2", description: "|q|^2", sup_norm: None, nonnegative: true },
    BuiltinInfo { name: "cos_re", description: "cos(Re q)", sup_norm: Some(1.0), nonnegative: false },
    BuiltinInfo { name: "erf_step", description: "erf(Re q), a smoothed step", sup_norm: Some(1.0), nonnegative: false },
    BuiltinInfo { name: "bump", description: "(1 - |q|^2/4)^3 on |q| < 2, else 0", sup_norm: Some(1.0), nonnegative: true },
    BuiltinInfo { name: "gauss_bump", description: "exp(-|q|^2)", sup_norm: Some(1.0), nonnegative: true },
    BuiltinInfo { name: "sawtooth", description: "triangle wave of Re q with period 2", sup_norm: Some(1.0), nonnegative: true },
    BuiltinInfo { name: "mixed", description: "bounded slice function with quaternion stem", sup_norm: Some(2.0), nonnegative: false },
    BuiltinInfo {
        name: "exp_fixed_point",
        description: "exp(sqrt(2 alpha pi)(1+i)(x+y)) on C_i, fixed by the Berezin transform",
        sup_norm: None,
        nonnegative: false,
    },
];

pub fn catalog() -> &'static [BuiltinInfo] {
    CATALOG
}

pub fn builtin_info(name: &str) -> Option<&'static BuiltinInfo> {
    CATALOG.iter().find(|b| b.name == name)
}

fn triangle(x: f64) -> f64 {
    let t = x.rem_euclid(2.0);
    1.0 - (t - 1.0).abs()
}

/// The builtin symbol `name`.
pub fn builtin(name: &str, alpha: f64) -> Result<SliceFunction> {
    let f = match name {
        "one" => SliceFunction::constant(Quat::ONE),
        "zero" => SliceFunction::constant(Quat::ZERO),
        "const_j" => SliceFunction::constant(Quat::J),
        "q" => SliceFunction::identity(),
        "q2" => RegularPolynomial::monomial(2, Quat::ONE).into(),
        "qbar" => SliceFunction::intrinsic(|x, y| (x, -y)),
        "re" => SliceFunction::intrinsic(|x, _| (x, 0.0)),
        "abs2" => SliceFunction::intrinsic(|x, y| (x * x + y * y, 0.0)),
        "cos_re" => SliceFunction::intrinsic(|x, _| (x.cos(), 0.0)),
        "erf_step" => SliceFunction::intrinsic(|x, _| (erf(x), 0.0)),
        "bump" => SliceFunction::intrinsic(|x, y| {
            let t = 1.0 - (x * x + y * y) / 4.0;
            (if t > 0.0 { t * t * t } else { 0.0 }, 0.0)
        }),
        "gauss_bump" => SliceFunction::gauss_mod(1.0, 0),
        "sawtooth" => SliceFunction::intrinsic(|x, _| (triangle(x), 0.0)),
        "mixed" => SliceFunction::from_stem(Tag::Generic, |x, y| {
            let (cx, sx, cy, sy) = (x.cos(), x.sin(), y.cos(), y.sin());
            let a = Quat::new(0.5 * cx, 0.0, 0.5 * cy, 0.3 * cx * cy);
            let b = Quat::new(0.4 * sy, 0.2 * sx * sy, 0.0, 0.5 * sy * cx);
            (a, b)
        }),
        "exp_fixed_point" => exponential_fixed_point(alpha, Unit::I),
        _ => {
            let hint = nearest(name, CATALOG.iter().map(|b| b.name)).map(|s| format!("; did you mean `{s}`?")).unwrap_or_default();
            return Err(Error::Format(format!("unknown builtin `{name}`{hint}")));
        }
    };
    Ok(f)
}

/// Levenshtein distance.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.chars().enumerate() {
        let mut cur = vec![i + 1; b.len() + 1];
        for (j, cb) in b.iter().enumerate() {
            cur[j + 1] = (prev[j] + usize::from(ca != *cb)).min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        prev = cur;
    }
    prev[b.len()]
}

/// Closest candidate within edit distance `max(2, len/3)`.
pub fn nearest<'a, I: IntoIterator<Item = &'a str>>(name: &str, candidates: I) -> Option<&'a str> {
    let limit = (name.chars().count() / 3).max(2);
    candidates
        .into_iter()
        .map(|c| (edit_distance(name, c), c))
        .filter(|(d, _)| *d <= limit)
        .min_by_key(|(d, _)| *d)
        .map(|(_, c)| c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_catalog_entry_builds() {
        for b in catalog() {
            let f = builtin(b.name, 1.0).unwrap();
            let v = f.eval(Quat::new(0.3, 0.2, -0.4, 0.1));
            assert!(v.is_finite(), "{}", b.name);
            if let Some(s) = b.sup_norm {
                assert!(v.norm() <= s + 1e-12, "{}", b.name);
            }
        }
    }

    #[test]
    fn conjugate_builtin() {
        let f = builtin("qbar", 1.0).unwrap();
        let q = Quat::new(0.3, 0.2, -0.4, 0.1);
        assert!((f.eval(q) - q.conj()).norm() < 1e-15);
    }

    #[test]
    fn json_forms() {
        let f = FunctionSpec::from_json(r#"{"kind":"poly","coeffs":[[0,0,0,0],[1,0,0,0]]}"#).unwrap();
        assert_eq!(f.build(1.0).unwrap().eval(Quat::J), Quat::J);
        let g = FunctionSpec::from_json(r#"{"kind":"gauss_mod","rate":1.0,"k":0}"#).unwrap();
        assert!((g.build(1.0).unwrap().eval(Quat::ONE).re - (-1.0f64).exp()).abs() < 1e-15);
        assert!(FunctionSpec::from_json(r#"{"kind":"spline"}"#).is_err());
        let e = FunctionSpec::Builtin { name: "sawtoth".into() }.build(1.0).unwrap_err();
        assert!(e.to_string().contains("sawtooth"));
    }
}
