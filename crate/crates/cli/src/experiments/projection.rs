use qfock::bank::FunctionSpec;
use qfock::fock::FockElement;
use qfock::proj::{apply_p, default_probe_ks, default_probe_xs, schur_verify, threshold_probe};
use qfock::quad::QuadratureRule;
use qfock::{Quat, Unit};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::output::{num, quat_cols, Artifacts, Check, Outcome};

pub fn probe_projection(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Outcome> {
    let p = cfg.params.p.unwrap_or(2.0);
    let alpha = cfg.params.alpha.unwrap_or(1.0);
    let beta = cfg.params.beta.unwrap_or(1.0);
    let rep = threshold_probe(p, alpha, beta, &default_probe_xs(), &default_probe_ks())?;
    let rows = rep.rows.iter().map(|r| vec![num(p), num(alpha), num(beta), r.k.to_string(), num(r.x), num(r.ratio)]);
    art.csv("probe-projection.csv", &["p", "alpha", "beta", "k", "x", "ratio"], rows)?;
    let mut out = Outcome::default();
    out.note("criterion", &rep.criterion);
    out.note("balanced", rep.balanced);
    out.note("growth_per_doubling", rep.growth);
    out.note("bounded", rep.bounded);
    out.note("expected_bounded", rep.expected_bounded());
    out.check(Check::flag("verdict matches p >= 1 and p alpha = 2 beta", rep.verdict_correct()));
    Ok(out)
}

pub fn schur(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Outcome> {
    let p = cfg.params.p.unwrap_or(2.0);
    let alpha = cfg.params.alpha.unwrap_or(1.0);
    let beta = cfg.params.beta.unwrap_or(1.0);
    let xs = cfg.params.xs.clone().unwrap_or_else(|| vec![0.0, 0.5, 1.0, 2.0]);
    let rep = schur_verify(alpha, beta, p, &xs, &QuadratureRule::default())?;
    let rows = [
        ("delta", rep.delta),
        ("row_constant", rep.c_row),
        ("column_constant", rep.c_col),
        ("exponent_gap", rep.exponent_gap),
        ("bound", rep.bound()),
        ("sampled_row_ratio", rep.sampled_row_ratio),
    ];
    art.csv("schur.csv", &["quantity", "value"], rows.iter().map(|(k, v)| vec![k.to_string(), num(*v)]))?;
    let mut out = Outcome::default();
    out.note("p", p);
    out.note("alpha", alpha);
    out.note("beta", beta);
    out.note("balanced", rep.balanced);
    out.note("bound", rep.bound().is_finite().then_some(rep.bound()));
    if rep.balanced {
        out.check(Check::flag("estimates close up with a finite constant", rep.bound().is_finite()));
        if !xs.is_empty() {
            out.check(Check::at_most(
                "quadrature row integral matches the closed-form estimate",
                (rep.sampled_row_ratio - 1.0).abs(),
                1e-6,
            ));
        }
    } else {
        out.check(Check::flag("estimates do not close up off the balance line", rep.bound().is_infinite()));
    }
    Ok(out)
}

pub fn range_preimage(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Outcome> {
    let alpha = cfg.params.alpha.unwrap_or(1.0);
    let beta = cfg.params.beta.unwrap_or(0.5);
    let gamma = match cfg.params.gamma {
        Some(g) => g,
        None => {
            let d = 2.0 * alpha - beta;
            if !(d > 0.0) {
                return Err(CliError::Config(format!("no admissible gamma: 2 alpha - beta = {d} is not positive")));
            }
            alpha * alpha / d
        }
    };
    let tol = cfg.params.tolerance.unwrap_or(1e-8);
    let coeffs = match &cfg.symbol {
        Some(s) => match &s.spec {
            FunctionSpec::Poly { coeffs } => coeffs.iter().map(|c| Quat::from_array(*c)).collect(),
            _ => return Err(CliError::Config("range-preimage needs a polynomial symbol".into())),
        },
        None => vec![Quat::ONE, Quat::J, Quat::new(0.0, 0.5, 0.0, 0.5)],
    };
    let f = FockElement::new(coeffs, alpha)?;
    let g = qfock::proj::range_preimage(&f, alpha, beta, gamma).map_err(|e| CliError::Config(e.to_string()))?;
    let n = f.coeffs().len() + 3;
    let pg = apply_p(&g, alpha, Unit::I, n, &QuadratureRule::default())?;
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for k in 0..n {
        let want = f.coeffs().get(k).copied().unwrap_or(Quat::ZERO);
        let got = pg.coeffs()[k];
        let d = (got - want).norm();
        worst = worst.max(d);
        let mut row = vec![k.to_string()];
        row.extend(quat_cols(want));
        row.extend(quat_cols(got));
        row.push(num(d));
        rows.push(row);
    }
    let header = [
        "k", "target_re", "target_i", "target_j", "target_k", "projected_re", "projected_i", "projected_j", "projected_k",
        "deviation",
    ];
    art.csv("range-preimage.csv", &header, rows)?;
    let mut out = Outcome::default();
    out.note("alpha", alpha);
    out.note("beta", beta);
    out.note("gamma", gamma);
    out.check(Check::at_most("projection of the preimage reproduces the target coefficients", worst, tol));
    Ok(out)
}
