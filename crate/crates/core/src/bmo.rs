//! Grid estimators for the `BMO^p_r`, `BO` and `BA^p` seminorms on slices,
//! the averaging function `f̂_r` and the two decompositions of `BMO` symbols.

use serde::Serialize;

use crate::berezin::{berezin, BerezinContext};
use crate::error::Result;
use crate::quad::DiskRule;
use crate::quat::{Quat, Unit};
use crate::slice::{SliceFunction, Tag};

/// Centers `x + yI` with `|x|, |y| ≤ window` on an `n × n` grid of each unit.
#[derive(Clone, Debug, PartialEq)]
pub struct CenterGrid {
    pub window: f64,
    pub n: usize,
    pub units: Vec<Unit>,
}

impl Default for CenterGrid {
    fn default() -> Self {
        CenterGrid { window: 6.0, n: 9, units: vec![Unit::I, Unit::J, Unit::K] }
    }
}

impl CenterGrid {
    /// `(unit index, x, y)` triples.
    pub fn centers(&self) -> Vec<(usize, f64, f64)> {
        let n = self.n.max(2);
        let step = 2.0 * self.window / (n - 1) as f64;
        let mut out = Vec::with_capacity(n * n * self.units.len());
        for u in 0..self.units.len() {
            for a in 0..n {
                for b in 0..n {
                    out.push((u, -self.window + step * a as f64, -self.window + step * b as f64));
                }
            }
        }
        out
    }
}

/// Rules used by the estimators.
#[derive(Clone, Debug)]
pub struct BmoConfig {
    pub grid: CenterGrid,
    /// Disk rule for mean values.
    pub disk: DiskRule,
    /// Disk samples for local suprema.
    pub sup_disk: DiskRule,
    pub berezin_nodes: usize,
}

impl Default for BmoConfig {
    fn default() -> Self {
        BmoConfig {
            grid: CenterGrid::default(),
            disk: DiskRule { n_r: 24, n_theta: 24 },
            sup_disk: DiskRule { n_r: 12, n_theta: 24 },
            berezin_nodes: 20,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum SeminormKind {
    Bmo { p: f64, r: f64 },
    Bo { r: f64 },
    Ba { p: f64, alpha: f64 },
}

/// Local quantity at one center.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CenterRow {
    pub unit_index: usize,
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

/// Grid supremum of a local quantity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeminormReport {
    pub kind: SeminormKind,
    /// Supremum over all centers.
    pub value: f64,
    /// Supremum over centers with `|x|, |y| ≤ window/2`.
    pub inner_value: f64,
    pub window: f64,
    /// Supremum per unit of the grid.
    pub per_slice: Vec<f64>,
    pub rows: Vec<CenterRow>,
}

impl SeminormReport {
    /// Bounded on the window: the supremum over the full window exceeds the
    /// one over the half window by at most a factor 1.25.
    pub fn finite_on_window(&self) -> bool {
        self.value.is_finite() && self.value <= 1.25 * self.inner_value + 1e-9
    }
}

fn report<F: Fn(Unit, f64, f64) -> f64>(kind: SeminormKind, grid: &CenterGrid, local: F) -> SeminormReport {
    let mut rows = Vec::new();
    let mut per_slice = vec![0.0f64; grid.units.len()];
    let (mut value, mut inner) = (0.0f64, 0.0f64);
    for (u, x, y) in grid.centers() {
        let v = local(grid.units[u], x, y);
        let v = if v.is_nan() { f64::INFINITY } else { v };
        value = value.max(v);
        per_slice[u] = per_slice[u].max(v);
        if x.abs() <= grid.window / 2.0 + 1e-12 && y.abs() <= grid.window / 2.0 + 1e-12 {
            inner = inner.max(v);
        }
        rows.push(CenterRow { unit_index: u, x, y, value: v });
    }
    SeminormReport { kind, value, inner_value: inner, window: grid.window, per_slice, rows }
}

/// `f̂_r`: the disk average of radius `r`, as a slice function (the stem is
/// averaged, which preserves stem parity).
pub fn disk_average_function(f: &SliceFunction, r: f64, disk: &DiskRule) -> SliceFunction {
    let nodes = disk.nodes(0.0, 0.0, r);
    let g = f.clone();
    let tag = if f.is_tagged_intrinsic() { Tag::Intrinsic } else { Tag::Generic };
    SliceFunction::from_stem(tag, move |x, y| {
        let (mut a, mut b) = (Quat::ZERO, Quat::ZERO);
        for &(s, t, w) in &nodes {
            let (fa, fb) = g.stem(x + s, y + t);
            a += fa * w;
            b += fb * w;
        }
        (a, b)
    })
}

/// `sup_z MO_{p,r}(f)(z)^{1/p}`, `MO = (1/πr²)∫_{B(z,r)} |f − f̂_r(z)|^p dm`.
pub fn bmo_norm(f: &SliceFunction, p: f64, r: f64, cfg: &BmoConfig) -> SeminormReport {
    let nodes = cfg.disk.nodes(0.0, 0.0, r);
    report(SeminormKind::Bmo { p, r }, &cfg.grid, |u, x, y| {
        let vals: Vec<(Quat, f64)> = nodes.iter().map(|(s, t, w)| (f.eval_on(u, x + s, y + t), *w)).collect();
        let mean = vals.iter().fold(Quat::ZERO, |acc, (v, w)| acc + *v * *w);
        vals.iter().map(|(v, w)| (*v - mean).norm().powf(p) * w).sum::<f64>().powf(1.0 / p)
    })
}

/// `sup_z ω_r(f)(z)`, `ω_r(f)(z) = sup{|f(z) − f(w)| : w ∈ B(z,r)}`.
pub fn bo_seminorm(f: &SliceFunction, r: f64, cfg: &BmoConfig) -> SeminormReport {
    let samples = cfg.sup_disk.closed_samples(0.0, 0.0, r);
    report(SeminormKind::Bo { r }, &cfg.grid, |u, x, y| {
        let c = f.eval_on(u, x, y);
        samples.iter().map(|(s, t)| (f.eval_on(u, x + s, y + t) - c).norm()).fold(0.0, f64::max)
    })
}

/// `(sup_z B_α(|f|^p)(z))^{1/p}` on the slices of the grid.
pub fn ba_norm(f: &SliceFunction, p: f64, alpha: f64, cfg: &BmoConfig) -> Result<SeminormReport> {
    let ctx = BerezinContext::new(alpha)?.with_nodes(cfg.berezin_nodes);
    let nodes = ctx.offsets();
    Ok(report(SeminormKind::Ba { p, alpha }, &cfg.grid, |u, x, y| {
        nodes.iter().map(|(s, t, w)| f.eval_on(u, x + s, y + t).norm().powf(p) * w).sum::<f64>().powf(1.0 / p)
    }))
}

/// The four seminorms of the two `BO + BA^p` decompositions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionReport {
    /// `BO` seminorm of `f̂_r`.
    pub bo_average: SeminormReport,
    /// `BA^p` norm of `f − f̂_r`.
    pub ba_average_remainder: SeminormReport,
    /// `BO` seminorm of `f̃`.
    pub bo_berezin: SeminormReport,
    /// `BA^p` norm of `f − f̃`.
    pub ba_berezin_remainder: SeminormReport,
}

impl DecompositionReport {
    pub fn all_finite(&self) -> bool {
        [&self.bo_average, &self.ba_average_remainder, &self.bo_berezin, &self.ba_berezin_remainder]
            .iter()
            .all(|r| r.finite_on_window())
    }

    pub fn values(&self) -> [f64; 4] {
        [self.bo_average.value, self.ba_average_remainder.value, self.bo_berezin.value, self.ba_berezin_remainder.value]
    }
}

pub fn decomposition_check(f: &SliceFunction, p: f64, r: f64, alpha: f64, cfg: &BmoConfig) -> Result<DecompositionReport> {
    let avg = disk_average_function(f, r, &cfg.disk);
    let ctx = BerezinContext::new(alpha)?.with_nodes(cfg.berezin_nodes);
    let ft = berezin(f, &ctx)?;
    Ok(DecompositionReport {
        bo_average: bo_seminorm(&avg, r, cfg),
        ba_average_remainder: ba_norm(&f.add(&avg.scale(-1.0)), p, alpha, cfg)?,
        bo_berezin: bo_seminorm(&ft, r, cfg),
        ba_berezin_remainder: ba_norm(&f.add(&ft.scale(-1.0)), p, alpha, cfg)?,
    })
}
