//! Finite positive measures on ℍ, symmetric boxes `S(z,r)`, averaging
//! functions and Fock–Carleson profiles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::KernelContext;
use crate::quad::{DiskRule, QuadratureRule};
use crate::quat::{slice_decompose, Quat, Unit};
use crate::slice::SliceFunction;

/// A point mass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub point: Quat,
    pub weight: f64,
}

/// A finite list of nonnegative atoms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DiscreteMeasure {
    atoms: Vec<Atom>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomRecord {
    x: f64,
    y: f64,
    unit: [f64; 3],
    w: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureFile {
    atoms: Vec<AtomRecord>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            if !(a.weight >= 0.0) || !a.weight.is_finite() || !a.point.is_finite() {
                return Err(Error::Param(format!("atom at {} has invalid weight {}", a.point, a.weight)));
            }
        }
        Ok(DiscreteMeasure { atoms })
    }

    pub fn empty() -> Self {
        DiscreteMeasure::default()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Concatenation of atom lists.
    pub fn merged(&self, other: &DiscreteMeasure) -> DiscreteMeasure {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        DiscreteMeasure { atoms }
    }

    /// Atoms on the real axis.
    pub fn real_part(&self) -> DiscreteMeasure {
        DiscreteMeasure { atoms: self.atoms.iter().copied().filter(|a| a.point.imag_norm() == 0.0).collect() }
    }

    /// Atoms off the real axis.
    pub fn off_axis(&self) -> DiscreteMeasure {
        DiscreteMeasure { atoms: self.atoms.iter().copied().filter(|a| a.point.imag_norm() != 0.0).collect() }
    }

    /// Off-axis atoms grouped by their unit (units closer than `tol` merge).
    pub fn by_unit(&self, tol: f64) -> Vec<(Unit, DiscreteMeasure)> {
        let mut groups: Vec<(Unit, DiscreteMeasure)> = Vec::new();
        for a in self.off_axis().atoms {
            let u = slice_decompose(a.point).unit;
            match groups.iter_mut().find(|(v, _)| (v.quat() - u.quat()).norm() <= tol) {
                Some((_, m)) => m.atoms.push(a),
                None => groups.push((u, DiscreteMeasure { atoms: vec![a] })),
            }
        }
        groups
    }

    /// Parses `{"atoms":[{"x":…,"y":…,"unit":[u1,u2,u3],"w":…}, …]}`.
    ///
    /// Units are normalized; `y` must be nonnegative. A zero unit is
    /// accepted for atoms on the real axis.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: MeasureFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let mut atoms = Vec::with_capacity(file.atoms.len());
        for (n, r) in file.atoms.into_iter().enumerate() {
            if !(r.y >= 0.0) {
                return Err(Error::Format(format!("atom {n}: y must be nonnegative, got {}", r.y)));
            }
            let unit = if r.y == 0.0 && r.unit == [0.0; 3] {
                Unit::I
            } else {
                Unit::new(r.unit).map_err(|e| Error::Format(format!("atom {n}: {e}")))?
            };
            atoms.push(Atom { point: unit.point(r.x, r.y), weight: r.w });
        }
        Self::new(atoms)
    }

    pub fn to_json(&self) -> String {
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                let s = slice_decompose(a.point);
                AtomRecord { x: s.x, y: s.y, unit: s.unit.vec(), w: a.weight }
            })
            .collect();
        serde_json::to_string(&MeasureFile { atoms }).expect("measure serializes")
    }

    /// Square lattice `offset + spacing·(m, n)` on the slice of `unit`,
    /// truncated to the disk of radius `window`.
    pub fn lattice(unit: Unit, spacing: f64, offset: (f64, f64), window: f64, weight: f64) -> Result<Self> {
        if !(spacing > 0.0) || !(window > 0.0) {
            return Err(Error::Param("lattice needs positive spacing and window".into()));
        }
        let n = (window / spacing).ceil() as i64 + 1;
        let mut atoms = Vec::new();
        for a in -n..=n {
            for b in -n..=n {
                let (x, y) = (offset.0 + spacing * a as f64, offset.1 + spacing * b as f64);
                if x * x + y * y <= window * window {
                    atoms.push(Atom { point: unit.point(x, y), weight });
                }
            }
        }
        Self::new(atoms)
    }

    /// `per_ring` equally spaced atoms on each circle `|z| = n` (`n = 1..=rings`)
    /// of the slice of `unit`, with weight `weight(n)`.
    pub fn rings<W: Fn(usize) -> f64>(unit: Unit, rings: usize, per_ring: usize, weight: W) -> Result<Self> {
        let mut atoms = Vec::new();
        for n in 1..=rings {
            for k in 0..per_ring {
                let th = 2.0 * std::f64::consts::PI * k as f64 / per_ring as f64;
                atoms.push(Atom { point: unit.point(n as f64 * th.cos(), n as f64 * th.sin()), weight: weight(n) });
            }
        }
        Self::new(atoms)
    }

    /// Discretization of `f·dλ_α·e^{α|w|²}` on the nodes of `rule`.
    ///
    /// With this normalization the Toeplitz operator of the measure equals
    /// the Toeplitz operator of the function symbol `f`.
    pub fn from_density<F: Fn(Quat) -> f64>(f: F, alpha: f64, rule: &QuadratureRule) -> Result<Self> {
        let mut atoms = Vec::new();
        for (u, su) in rule.sphere_nodes() {
            for (x, y, w) in rule.slice.nodes(alpha) {
                let p = u.point(x, y);
                let v = f(p);
                if v < 0.0 {
                    return Err(Error::Param(format!("density is negative at {p}")));
                }
                atoms.push(Atom { point: p, weight: su * w * v * (alpha * p.norm_sqr()).exp() });
            }
        }
        Self::new(atoms)
    }

    /// `Σ w_a |K_α(z,a)|² e^{-α|a|²}` must be finite at each probe.
    pub fn kernel_integrability(&self, ctx: &KernelContext, probes: &[Quat]) -> Result<()> {
        for z in probes {
            let mut s = 0.0;
            for a in &self.atoms {
                s += a.weight * ctx.kernel(*z, a.point)?.norm_sqr() * (-ctx.alpha * a.point.norm_sqr()).exp();
            }
            if !s.is_finite() {
                return Err(Error::Integrability { probe: z.to_string(), detail: "kernel mass is not finite".into() });
            }
        }
        Ok(())
    }
}

/// `S(z,r) = ⋃_J B_J(z_J, r)` with `z_J = x₀ + y₀J`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetricBox {
    pub x0: f64,
    pub y0: f64,
    pub radius: f64,
}

impl SymmetricBox {
    pub fn new(center: Quat, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Param(format!("box radius must be positive, got {radius}")));
        }
        let s = slice_decompose(center);
        Ok(SymmetricBox { x0: s.x, y0: s.y, radius })
    }

    /// `w ∈ S(z,r)` iff `|w − z_{I_w}| ≤ r` on the slice of `w`.
    pub fn contains(&self, w: Quat) -> bool {
        let s = slice_decompose(w);
        let (dx, dy) = (s.x - self.x0, s.y - self.y0);
        dx * dx + dy * dy <= self.radius * self.radius
    }
}

/// `μ(S(z,r))`.
pub fn box_mass(mu: &DiscreteMeasure, b: &SymmetricBox) -> f64 {
    mu.atoms.iter().filter(|a| b.contains(a.point)).map(|a| a.weight).sum()
}

/// `μ̂_r(z) = μ(S(z,r))/(πr²)`.
pub fn averaging_function(mu: &DiscreteMeasure, z: Quat, r: f64) -> Result<f64> {
    let b = SymmetricBox::new(z, r)?;
    Ok(box_mass(mu, &b) / (std::f64::consts::PI * r * r))
}

/// `∫ |k_z(w) e^{-α|w|²/2}|^p dμ(w)`.
pub fn kernel_quantity(mu: &DiscreteMeasure, ctx: &KernelContext, p: f64, z: Quat) -> Result<f64> {
    let mut s = 0.0;
    for a in &mu.atoms {
        let k = ctx.kernel(a.point, z)?.norm() * (-ctx.alpha * (a.point.norm_sqr() + z.norm_sqr()) / 2.0).exp();
        s += a.weight * k.powf(p);
    }
    Ok(s)
}

/// One probe of a Carleson profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfileRow {
    pub probe: [f64; 4],
    pub kernel: f64,
    pub box_mass: f64,
}

/// Suprema of the kernel quantity and the box mass over a probe set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CarlesonProfile {
    pub sup_kernel: f64,
    pub sup_box: f64,
    pub rows: Vec<ProfileRow>,
}

impl CarlesonProfile {
    /// `(sup_kernel/sup_box, sup_box/sup_kernel)`; both 0 for the zero measure.
    pub fn comparability(&self) -> (f64, f64) {
        if self.sup_kernel == 0.0 && self.sup_box == 0.0 {
            return (0.0, 0.0);
        }
        (self.sup_kernel / self.sup_box, self.sup_box / self.sup_kernel)
    }
}

pub fn carleson_profile(mu: &DiscreteMeasure, ctx: &KernelContext, p: f64, probes: &[Quat], r: f64) -> Result<CarlesonProfile> {
    let mut rows = Vec::with_capacity(probes.len());
    let (mut sk, mut sb) = (0.0f64, 0.0f64);
    for z in probes {
        let kernel = kernel_quantity(mu, ctx, p, *z)?;
        let bm = box_mass(mu, &SymmetricBox::new(*z, r)?);
        sk = sk.max(kernel);
        sb = sb.max(bm);
        rows.push(ProfileRow { probe: z.to_array(), kernel, box_mass: bm });
    }
    Ok(CarlesonProfile { sup_kernel: sk, sup_box: sb, rows })
}

/// Probe centers `x + yI` on a square grid of the upper half-disk of radius
/// `radius` in each listed slice; real-axis points appear once.
pub fn probe_lattice(radius: f64, spacing: f64, slices: &[Unit]) -> Vec<Quat> {
    let n = (radius / spacing).floor() as i64;
    let mut out = Vec::new();
    for a in -n..=n {
        let x = a as f64 * spacing;
        out.push(Quat::real(x));
        for u in slices {
            for b in 1..=n {
                let y = b as f64 * spacing;
                if x * x + y * y <= radius * radius + 1e-12 {
                    out.push(u.point(x, y));
                }
            }
        }
    }
    out
}

/// Maxima over the circle `|z| = R` of one slice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VanishingRow {
    pub radius: f64,
    pub kernel_max: f64,
    pub box_max: f64,
}

pub fn vanishing_profile(
    mu: &DiscreteMeasure,
    ctx: &KernelContext,
    p: f64,
    unit: Unit,
    radii: &[f64],
    r: f64,
    n_angles: usize,
) -> Result<Vec<VanishingRow>> {
    let mut out = Vec::with_capacity(radii.len());
    for &rad in radii {
        let (mut km, mut bm) = (0.0f64, 0.0f64);
        for k in 0..n_angles {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n_angles as f64;
            let z = unit.point(rad * th.cos(), rad * th.sin());
            km = km.max(kernel_quantity(mu, ctx, p, z)?);
            bm = bm.max(box_mass(mu, &SymmetricBox::new(z, r)?));
        }
        out.push(VanishingRow { radius: rad, kernel_max: km, box_max: bm });
    }
    Ok(out)
}

/// True when the last entry is at most `factor` times the first nonzero
/// maximum of the sequence (or the sequence is identically zero).
pub fn decays(values: &[f64], factor: f64) -> bool {
    let peak = values.iter().copied().fold(0.0, f64::max);
    match values.last() {
        None => true,
        Some(&last) => peak == 0.0 || last <= factor * peak,
    }
}

/// `∫_{S(z,r)} f dV` (sphere average of full disks `B_I(z_I,r)`, evaluated
/// at the actual points `x + yI`) and the single-slice integral
/// `∫_{B_I(z_I,r)} f dm`, for real-valued `f`.
pub fn intrinsic_average_identity(
    f: &SliceFunction,
    z: Quat,
    r: f64,
    unit: Unit,
    disk: &DiskRule,
    rule: &QuadratureRule,
) -> Result<(f64, f64)> {
    let s = slice_decompose(z);
    let area = std::f64::consts::PI * r * r;
    let disk_integral = |u: Unit| -> Result<f64> {
        let mut acc = 0.0;
        for (x, y, w) in disk.nodes(s.x, s.y, r) {
            let v = f.eval_on(u, x, y);
            if v.imag_norm() > 1e-12 * v.norm().max(1.0) {
                return Err(Error::NotReal(v.imag_norm()));
            }
            acc += v.re * w;
        }
        Ok(acc * area)
    };
    let slice = disk_integral(unit)?;
    let mut global = 0.0;
    for (u, w) in rule.sphere_nodes() {
        global += w * disk_integral(*u)?;
    }
    Ok((global, slice))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_contains_rotations_of_center() {
        let b = SymmetricBox::new(Quat::new(1.0, 2.0, 0.0, 0.0), 0.1).unwrap();
        assert!(b.contains(Quat::new(1.0, 0.0, 2.0, 0.0)));
        assert!(b.contains(Quat::new(1.0, 0.0, 0.0, -2.0)));
        assert!(!b.contains(Quat::new(1.0, 0.0, 2.2, 0.0)));
    }

    #[test]
    fn disintegration_partitions() {
        let mu = DiscreteMeasure::new(vec![
            Atom { point: Quat::real(0.5), weight: 1.0 },
            Atom { point: Quat::new(0.0, 0.0, 1.0, 0.0), weight: 2.0 },
            Atom { point: Quat::new(0.0, 0.0, 2.0, 0.0), weight: 3.0 },
        ])
        .unwrap();
        assert_eq!(mu.real_part().len() + mu.off_axis().len(), mu.len());
        let g = mu.by_unit(1e-12);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].1.total_mass(), 5.0);
    }

    #[test]
    fn json_round_trip_normalizes_units() {
        let text = r#"{"atoms":[{"x":1.0,"y":2.0,"unit":[0.0,3.0,0.0],"w":0.5},{"x":-1.0,"y":0.0,"unit":[0,0,0],"w":1.0}]}"#;
        let mu = DiscreteMeasure::from_json(text).unwrap();
        assert_eq!(mu.atoms()[0].point, Quat::new(1.0, 0.0, 2.0, 0.0));
        let back = DiscreteMeasure::from_json(&mu.to_json()).unwrap();
        assert_eq!(back, mu);
        assert!(DiscreteMeasure::from_json(r#"{"atoms":[{"x":0,"y":-1,"unit":[1,0,0],"w":1}]}"#).is_err());
        assert!(DiscreteMeasure::from_json(r#"{"atoms":[{"x":0,"y":1,"unit":[1,0,0],"w":-1}]}"#).is_err());
    }

    #[test]
    fn decay_verdicts() {
        assert!(decays(&[1.0, 0.5, 0.05], 0.2));
        assert!(!decays(&[1.0, 1.1, 0.9], 0.2));
        assert!(decays(&[0.0, 0.0], 0.2));
    }
}
