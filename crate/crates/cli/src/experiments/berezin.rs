use qfock::berezin::{
    berezin as transform, berezin_at, default_probes, fixed_point_suite, semigroup_check, BerezinContext,
};
use qfock::Unit;

use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::output::{num, quat_cols, Artifacts, Check, Outcome};

const UNITS: [Unit; 3] = [Unit::I, Unit::J, Unit::K];

pub fn berezin(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Outcome> {
    let alpha = cfg.params.alpha.unwrap_or(1.0);
    let window = cfg.params.window.unwrap_or(3.0);
    let n = cfg.params.grid_n.unwrap_or(7).max(2);
    let tol = cfg.params.tolerance.unwrap_or(1e-8);
    let (f, label) = cfg.symbol_or("cos_re", alpha)?;
    let ctx = BerezinContext::new(alpha)?;
    let g = transform(&f, &ctx)?;
    let step = 2.0 * window / (n - 1) as f64;
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for (ui, u) in UNITS.iter().enumerate() {
        for a in 0..n {
            for b in 0..n {
                let (x, y) = (-window + step * a as f64, -window + step * b as f64);
                let v = g.eval_on(*u, x, y);
                worst = worst.max((v - berezin_at(&f, &ctx, *u, x, y)).norm() / v.norm().max(1.0));
                let mut row = vec![num(x), num(y), ui.to_string()];
                row.extend(quat_cols(v));
                rows.push(row);
            }
        }
    }
    art.csv("berezin.csv", &["x", "y", "unit_index", "transform_re", "transform_i", "transform_j", "transform_k"], rows)?;
    let mut out = Outcome::default();
    out.note("symbol", label);
    out.note("alpha", alpha);
    out.note("units", UNITS.map(|u| u.vec()));
    out.check(Check::at_most("stem convolution agrees with slice evaluation", worst, tol));
    Ok(out)
}

pub fn semigroup(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Outcome> {
    let alpha = cfg.params.alpha.unwrap_or(1.0);
    let beta = cfg.params.beta.unwrap_or(1.0);
    let tol = cfg.params.tolerance.unwrap_or(1e-8);
    let (f, label) = cfg.symbol_or("cos_re", alpha)?;
    let ctx = BerezinContext::new(alpha)?;
    let probes = default_probes(2.0);
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for q in &probes {
        let d = semigroup_check(&f, &ctx, beta, std::slice::from_ref(q))?;
        worst = worst.max(d);
        let mut row: Vec<String> = quat_cols(*q).into();
        row.push(num(d));
        rows.push(row);
    }
    art.csv("semigroup.csv", &["probe_re", "probe_i", "probe_j", "probe_k", "composition_deviation"], rows)?;
    let mut out = Outcome::default();
    out.note("symbol", label);
    out.note("alpha", alpha);
    out.note("beta", beta);
    out.note("combined_weight", alpha * beta / (alpha + beta));
    out.check(Check::at_most("B_alpha B_beta equals B_(alpha beta/(alpha+beta))", worst, tol));
    Ok(out)
}

pub fn fixed_points(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Outcome> {
    let alpha = cfg.params.alpha.unwrap_or(1.0);
    let ctx = BerezinContext::new(alpha)?;
    let suite = fixed_point_suite(&ctx, &default_probes(1.5))?;
    let expected = [
        ("constant", "fixed, constant"),
        ("bounded-cosine", "not fixed"),
        ("harmonic-real-part", "fixed, harmonic"),
        ("exponential-8-alpha-pi", "fixed, not harmonic"),
    ];
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    let rows = suite.iter().map(|c| {
        let mut row = vec![c.name.clone(), num(c.deviation), num(c.laplacian)];
        row.extend(c.oscillation.iter().map(|o| opt(*o)));
        row.push(c.fixed.to_string());
        row.push(c.verdict.clone());
        row
    });
    let header =
        ["case", "transform_deviation", "laplacian_max", "oscillation_1", "oscillation_4", "oscillation_16", "fixed", "verdict"];
    art.csv("fixed-points.csv", &header, rows)?;
    let mut out = Outcome::default();
    out.note("alpha", alpha);
    for (name, want) in expected {
        let got = suite.iter().find(|c| c.name == name).map(|c| c.verdict.as_str()).unwrap_or("missing");
        out.check(Check::flag(format!("{name}: {want}"), got == want));
    }
    Ok(out)
}
