use qfock::bank::builtin;
use qfock::berezin::BerezinContext;
use qfock::measure::{Atom, DiscreteMeasure};
use qfock::quad::QuadratureRule;
use qfock::quat::orthogonal_unit;
use qfock::toeplitz::{
    adjoint_symbol, berezin_symbol, bounded_compact_proxy, toeplitz_matrix_fn, toeplitz_matrix_measure, ProxyConfig,
    ProxyReport, Symbol, ToeplitzTruncation,
};
use qfock::{Quat, Unit};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::output::{num, quat_cols, Artifacts, Check, Outcome};

#[derive(Serialize)]
struct MatrixFile {
    alpha: f64,
    size: usize,
    /// Row-major entries `[re, i, j, k]` in the orthonormal monomial basis.
    entries: Vec<Vec<[f64; 4]>>,
}

fn probes(radius: f64) -> Vec<Quat> {
    let mut out = Vec::new();
    for u in [Unit::I, Unit::J, Unit::new([1.0, 1.0, 1.0]).expect("nonzero")] {
        for m in 0..=4 {
            let rho = radius * m as f64 / 4.0;
            for a in 0..4 {
                let th = std::f64::consts::PI * (a as f64 + 0.5) / 4.0;
                out.push(u.point(rho * th.cos(), rho * th.sin()));
            }
        }
    }
    out
}

pub fn toeplitz(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Outcome> {
    let alpha = cfg.params.alpha.unwrap_or(1.0);
    let n = cfg.params.n.unwrap_or(24);
    let tol = cfg.params.tolerance.unwrap_or(1e-4);
    let rule = QuadratureRule::default();
    let (t, symbol, label): (ToeplitzTruncation, _, String) = match &cfg.measure {
        Some((mu, name)) => (toeplitz_matrix_measure(mu, alpha, n, &[Quat::ZERO])?, None, name.clone()),
        None => {
            let (f, name) = cfg.symbol_or("mixed", alpha)?;
            (toeplitz_matrix_fn(&f, alpha, n, Unit::I, &rule)?, Some(f), name)
        }
    };
    let radius = cfg.params.radius.unwrap_or(t.trusted_radius());
    art.json("toeplitz-matrix.json", &MatrixFile { alpha, size: n, entries: t.matrix.to_rows() })?;
    let table = berezin_symbol(&t, symbol.as_ref(), &probes(radius), &BerezinContext::new(alpha)?)?;
    let mut worst = 0.0f64;
    let rows = table.iter().map(|row| {
        let gap = row.gap.map(|g| Quat::from_array(g).norm());
        if row.trusted {
            worst = worst.max(gap.unwrap_or(0.0));
        }
        let mut v: Vec<String> = row.z.iter().map(|x| num(*x)).collect();
        v.extend(quat_cols(Quat::from_array(row.operator)));
        match row.symbol {
            Some(s) => v.extend(quat_cols(Quat::from_array(s))),
            None => v.extend(std::iter::repeat_n(String::new(), 4)),
        }
        v.push(gap.map(num).unwrap_or_default());
        v.push(row.trusted.to_string());
        v
    });
    let rows: Vec<Vec<String>> = rows.collect();
    let header = [
        "z_re", "z_i", "z_j", "z_k", "kernel_form_re", "kernel_form_i", "kernel_form_j", "kernel_form_k", "transform_re",
        "transform_i", "transform_j", "transform_k", "gap", "trusted",
    ];
    art.csv("toeplitz.csv", &header, rows)?;
    let mut out = Outcome::default();
    out.note("symbol", label);
    out.note("alpha", alpha);
    out.note("size", n);
    out.note("operator_norm", t.matrix.operator_norm());
    out.note("singular_values", t.matrix.singular_values());
    out.note("trusted_radius", t.trusted_radius());
    if symbol.is_some() {
        out.check(Check::at_most("kernel form matches the Berezin transform inside the trusted radius", worst, tol));
    }
    Ok(out)
}

pub fn toeplitz_adjoint(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Outcome> {
    let alpha = cfg.params.alpha.unwrap_or(1.0);
    let n = cfg.params.n.unwrap_or(12);
    let tol = cfg.params.tolerance.unwrap_or(1e-8);
    let (f, label) = cfg.symbol_or("const_j", alpha)?;
    let rule = QuadratureRule::default();
    let (i, j) = (Unit::I, orthogonal_unit(Unit::I));
    let tf = toeplitz_matrix_fn(&f, alpha, n, i, &rule)?;
    let tg = toeplitz_matrix_fn(&adjoint_symbol(&f, i, j)?, alpha, n, i, &rule)?;
    let adj = tf.matrix.adjoint();
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            let d = (adj.get(r, c) - tg.matrix.get(r, c)).norm();
            worst = worst.max(d);
            rows.push(vec![r.to_string(), c.to_string(), num(d)]);
        }
    }
    art.csv("toeplitz-adjoint.csv", &["row", "column", "adjoint_minus_adjoint_symbol"], rows)?;
    let mut out = Outcome::default();
    out.note("symbol", label);
    out.note("size", n);
    out.note("max_deviation", worst);
    out.check(Check::at_most("adjoint matrix equals the matrix of the adjoint symbol", worst, tol));
    Ok(out)
}

fn default_bank(alpha: f64) -> qfock::Result<Vec<(&'static str, Symbol, Option<(bool, bool)>)>> {
    Ok(vec![
        ("atom at origin", Symbol::Measure(DiscreteMeasure::new(vec![Atom { point: Quat::ZERO, weight: 1.0 }])?), Some((true, true))),
        ("unit lattice", Symbol::Measure(DiscreteMeasure::lattice(Unit::I, 1.0, (0.0, 0.0), 8.0, 1.0)?), Some((true, false))),
        (
            "rings with weights 1/n^2",
            Symbol::Measure(DiscreteMeasure::rings(Unit::I, 10, 32, |n| 1.0 / (n * n) as f64)?),
            Some((true, true)),
        ),
        (
            "rings with weights n^2",
            Symbol::Measure(DiscreteMeasure::rings(Unit::I, 10, 32, |n| (n * n) as f64)?),
            Some((false, false)),
        ),
        ("constant 1", Symbol::Function(builtin("one", alpha)?), Some((true, false))),
        ("gaussian bump", Symbol::Function(builtin("gauss_bump", alpha)?), Some((true, true))),
        ("real part", Symbol::Function(builtin("re", alpha)?), Some((false, false))),
        ("constant j", Symbol::Function(builtin("const_j", alpha)?), Some((true, false))),
    ])
}

pub fn bounded_compact(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Outcome> {
    let alpha = cfg.params.alpha.unwrap_or(1.0);
    let mut pc = ProxyConfig::new(alpha)?;
    if let Some(s) = &cfg.params.sizes {
        pc.sizes = s.clone();
    }
    let cases: Vec<(String, Symbol, Option<(bool, bool)>)> = match (&cfg.symbol, &cfg.measure) {
        (_, Some((mu, name))) => vec![(name.clone(), Symbol::Measure(mu.clone()), None)],
        (Some(_), None) => {
            let (f, name) = cfg.symbol_or("one", alpha)?;
            vec![(name, Symbol::Function(f), None)]
        }
        (None, None) => default_bank(alpha)?.into_iter().map(|(n, s, e)| (n.to_string(), s, e)).collect(),
    };
    let mut out = Outcome::default();
    let mut rows = Vec::new();
    let mut reports = serde_json::Map::new();
    for (name, sym, expected) in cases {
        let rep: ProxyReport = bounded_compact_proxy(&sym, &pc)?;
        let flag = |b: bool| b.to_string();
        let exp = |sel: fn((bool, bool)) -> bool| expected.map(|e| sel(e).to_string()).unwrap_or_default();
        rows.push(vec![
            name.clone(),
            num(rep.norm_growth),
            flag(rep.norm_bounded),
            flag(rep.berezin_bounded),
            flag(rep.berezin_vanishing),
            flag(rep.box_bounded),
            flag(rep.box_vanishing),
            flag(rep.kernel_decay),
            flag(rep.bounded),
            flag(rep.compact),
            flag(rep.consistent),
            exp(|e| e.0),
            exp(|e| e.1),
        ]);
        out.check(Check::flag(format!("{name}: criteria agree"), rep.consistent));
        if let Some((b, c)) = expected {
            out.check(Check::flag(format!("{name}: bounded = {b}, compact = {c}"), rep.bounded == b && rep.compact == c));
        }
        reports.insert(name, serde_json::to_value(&rep).expect("report serializes"));
    }
    let header = [
        "symbol",
        "norm_growth_per_doubling",
        "norms_bounded",
        "berezin_bounded",
        "berezin_vanishing",
        "box_bounded",
        "box_vanishing",
        "kernel_image_decays",
        "bounded",
        "compact",
        "consistent",
        "expected_bounded",
        "expected_compact",
    ];
    art.csv("bounded-compact.csv", &header, rows)?;
    out.note("alpha", alpha);
    out.note("sizes", &pc.sizes);
    out.note("reports", reports);
    Ok(out)
}
