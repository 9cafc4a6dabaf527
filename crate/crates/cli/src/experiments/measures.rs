use qfock::fock::KernelContext;
use qfock::measure::{carleson_profile, decays, probe_lattice, vanishing_profile, DiscreteMeasure};
use qfock::Unit;

use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::output::{num, Artifacts, Check, Outcome};

/// Largest admissible ratio between the kernel and box suprema.
const COMPARABILITY_LIMIT: f64 = 10.0;

/// Largest ratio of the last ring maximum to the peak for a vanishing profile.
const DECAY_FACTOR: f64 = 0.2;

fn measure_or(cfg: &ExperimentConfig, default: impl FnOnce() -> qfock::Result<DiscreteMeasure>, label: &str) -> CliResult<(DiscreteMeasure, String)> {
    match &cfg.measure {
        Some((mu, name)) => Ok((mu.clone(), name.clone())),
        None => Ok((default()?, label.into())),
    }
}

pub fn carleson(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Outcome> {
    let alpha = cfg.params.alpha.unwrap_or(1.0);
    let p = cfg.params.p.unwrap_or(2.0);
    let r = cfg.params.r.unwrap_or(1.0);
    let radius = cfg.params.radius.unwrap_or(4.0);
    let spacing = cfg.params.spacing.unwrap_or(1.0);
    let (mu, label) = measure_or(cfg, || DiscreteMeasure::lattice(Unit::I, 1.0, (0.0, 0.0), 8.0, 1.0), "unit lattice")?;
    let ctx = KernelContext::new(alpha)?;
    let mut units: Vec<Unit> = mu.by_unit(1e-9).into_iter().map(|(u, _)| u).take(3).collect();
    if units.is_empty() {
        units.push(Unit::I);
    }
    let probes = probe_lattice(radius, spacing, &units);
    let prof = carleson_profile(&mu, &ctx, p, &probes, r)?;
    let rows = prof.rows.iter().map(|row| {
        let mut v: Vec<String> = row.probe.iter().map(|x| num(*x)).collect();
        v.push(num(row.kernel));
        v.push(num(row.box_mass));
        v
    });
    art.csv("carleson.csv", &["probe_re", "probe_i", "probe_j", "probe_k", "kernel_integral", "box_mass"], rows)?;
    let (kb, bk) = prof.comparability();
    let mut out = Outcome::default();
    out.note("measure", label);
    out.note("atoms", mu.len());
    out.note("sup_kernel_integral", prof.sup_kernel);
    out.note("sup_box_mass", prof.sup_box);
    out.note("kernel_over_box", kb);
    out.note("box_over_kernel", bk);
    out.check(Check::at_most(
        "kernel integrals and box masses are comparable",
        kb.max(bk),
        COMPARABILITY_LIMIT,
    ));
    Ok(out)
}

pub fn vanishing_carleson(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Outcome> {
    let alpha = cfg.params.alpha.unwrap_or(1.0);
    let p = cfg.params.p.unwrap_or(2.0);
    let r = cfg.params.r.unwrap_or(1.0);
    let radii = cfg.params.radii.clone().unwrap_or_else(|| (0..=6).map(f64::from).collect());
    let angles = cfg.params.angles.unwrap_or(64);
    let (mu, label) = measure_or(
        cfg,
        || DiscreteMeasure::rings(Unit::I, 10, 32, |n| 1.0 / (n * n) as f64),
        "rings with weights 1/n^2",
    )?;
    let ctx = KernelContext::new(alpha)?;
    let unit = mu.by_unit(1e-9).first().map(|(u, _)| *u).unwrap_or(Unit::I);
    let prof = vanishing_profile(&mu, &ctx, p, unit, &radii, r, angles)?;
    let rows = prof.iter().map(|row| vec![num(row.radius), num(row.kernel_max), num(row.box_max)]);
    art.csv("vanishing-carleson.csv", &["radius", "kernel_integral_max", "box_mass_max"], rows)?;
    let kernel: Vec<f64> = prof.iter().map(|r| r.kernel_max).collect();
    let boxes: Vec<f64> = prof.iter().map(|r| r.box_max).collect();
    let (kv, bv) = (decays(&kernel, DECAY_FACTOR), decays(&boxes, DECAY_FACTOR));
    let mut out = Outcome::default();
    out.note("measure", label);
    out.note("kernel_vanishes", kv);
    out.note("box_vanishes", bv);
    out.check(Check::flag("kernel and box profiles agree on vanishing", kv == bv));
    Ok(out)
}
