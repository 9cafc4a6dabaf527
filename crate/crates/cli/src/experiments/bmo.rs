use qfock::bmo::{bmo_norm, decomposition_check, BmoConfig, CenterGrid, SeminormReport};

use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::output::{num, Artifacts, Check, Outcome};

pub fn bmo(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Outcome> {
    let alpha = cfg.params.alpha.unwrap_or(1.0);
    let p = cfg.params.p.unwrap_or(2.0);
    let r = cfg.params.r.unwrap_or(1.0);
    let (f, label) = cfg.symbol_or("cos_re", alpha)?;
    let mut bc = BmoConfig::default();
    bc.grid = CenterGrid {
        window: cfg.params.window.unwrap_or(6.0),
        n: cfg.params.grid_n.unwrap_or(7).max(2),
        ..bc.grid
    };
    let mo = bmo_norm(&f, p, r, &bc);
    let dec = decomposition_check(&f, p, r, alpha, &bc)?;
    let reports: [&SeminormReport; 5] =
        [&mo, &dec.bo_average, &dec.ba_average_remainder, &dec.bo_berezin, &dec.ba_berezin_remainder];
    let rows = (0..mo.rows.len()).map(|i| {
        let c = &mo.rows[i];
        let mut row = vec![c.unit_index.to_string(), num(c.x), num(c.y)];
        row.extend(reports.iter().map(|rep| num(rep.rows[i].value)));
        row
    });
    let header = [
        "unit_index",
        "x",
        "y",
        "mean_oscillation",
        "average_oscillation",
        "average_remainder_berezin_mean",
        "transform_oscillation",
        "transform_remainder_berezin_mean",
    ];
    art.csv("bmo.csv", &header, rows)?;
    let names = ["mean_oscillation", "average_oscillation", "average_remainder", "transform_oscillation", "transform_remainder"];
    let mut out = Outcome::default();
    out.note("symbol", label);
    for (name, rep) in names.iter().zip(reports) {
        out.note(name, serde_json::json!({"sup": rep.value, "inner_sup": rep.inner_value, "finite_on_window": rep.finite_on_window()}));
    }
    out.check(Check::flag(
        "mean oscillation finite iff both decompositions are finite",
        mo.finite_on_window() == dec.all_finite(),
    ));
    Ok(out)
}
