//! Finite sections of Toeplitz operators on `F²_α` in the orthonormal basis
//! `eₙ(z) = zⁿ√(αⁿ/n!)`, with function and measure symbols.
//!
//! Operators are right-linear: a matrix `M` acts on coefficient columns by
//! left multiplication, `T(Σ eₙcₙ) = Σ eₘ(Σ Mₘₙcₙ)`. Spectral quantities go
//! through the complex embedding `χ(a + bj) = [[a, b], [−b̄, ā]]`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::berezin::{berezin, BerezinContext};
use crate::error::{Error, Result};
use crate::fock::{FockElement, KernelContext};
use crate::measure::{averaging_function, kernel_quantity, DiscreteMeasure};
use crate::quad::{check_alpha, DiskRule, QuadratureRule};
use crate::quat::{check_orthogonal, join_in_frame, orthogonal_unit, slice_decompose, split_in_frame, Quat, Unit};
use crate::slice::{extend_from_slice, SliceFunction};

/// Square quaternion matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct QuatMatrix {
    n: usize,
    data: Vec<Quat>,
}

impl QuatMatrix {
    pub fn zeros(n: usize) -> Self {
        QuatMatrix { n, data: vec![Quat::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![Quat::ONE; n])
    }

    pub fn diagonal(d: &[Quat]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, *v);
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Quat>(n: usize, mut f: F) -> Self {
        let mut m = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> Quat {
        self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Quat) {
        self.data[r * self.n + c] = v;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |r, c| self.get(c, r).conj())
    }

    pub fn mul(&self, other: &QuatMatrix) -> Result<Self> {
        self.same_size(other)?;
        Ok(Self::from_fn(self.n, |r, c| (0..self.n).map(|k| self.get(r, k) * other.get(k, c)).sum()))
    }

    pub fn add(&self, other: &QuatMatrix) -> Result<Self> {
        self.same_size(other)?;
        Ok(Self::from_fn(self.n, |r, c| self.get(r, c) + other.get(r, c)))
    }

    pub fn sub(&self, other: &QuatMatrix) -> Result<Self> {
        self.same_size(other)?;
        Ok(Self::from_fn(self.n, |r, c| self.get(r, c) - other.get(r, c)))
    }

    fn same_size(&self, other: &QuatMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Param(format!("matrix sizes differ: {} vs {}", self.n, other.n)));
        }
        Ok(())
    }

    /// `M v` for a coefficient column.
    pub fn apply(&self, v: &[Quat]) -> Vec<Quat> {
        (0..self.n).map(|r| (0..self.n.min(v.len())).map(|c| self.get(r, c) * v[c]).sum()).collect()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `χ(M)` in `ℂ^{2n×2n}`.
    pub fn chi(&self) -> DMatrix<Complex64> {
        let n = self.n;
        let mut m = DMatrix::from_element(2 * n, 2 * n, Complex64::new(0.0, 0.0));
        for r in 0..n {
            for c in 0..n {
                let q = self.get(r, c);
                let a = Complex64::new(q.re, q.i);
                let b = Complex64::new(q.j, q.k);
                m[(2 * r, 2 * c)] = a;
                m[(2 * r, 2 * c + 1)] = b;
                m[(2 * r + 1, 2 * c)] = -b.conj();
                m[(2 * r + 1, 2 * c + 1)] = a.conj();
            }
        }
        m
    }

    /// Singular values, descending; each singular value of `χ(M)` appears
    /// twice and is reported once.
    pub fn singular_values(&self) -> Vec<f64> {
        if self.n == 0 {
            return Vec::new();
        }
        let mut s: Vec<f64> = self.chi().singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s.into_iter().step_by(2).collect()
    }

    pub fn operator_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// Smallest eigenvalue of `χ(M)`, for Hermitian `M`.
    pub fn min_eigenvalue(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let h = self.chi();
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Entries as `[re, i, j, k]`, row by row.
    pub fn to_rows(&self) -> Vec<Vec<[f64; 4]>> {
        (0..self.n).map(|r| (0..self.n).map(|c| self.get(r, c).to_array()).collect()).collect()
    }
}

/// `eₙ(z) = zⁿ√(αⁿ/n!)` for `n < count` at a complex point.
fn basis_values(z: Complex64, alpha: f64, count: usize, scale: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(count);
    let mut e = Complex64::new(scale, 0.0);
    for n in 0..count {
        if n > 0 {
            e = e * z * (alpha / n as f64).sqrt();
        }
        out.push(e);
    }
    out
}

/// Matrix of `T_f` or `T_μ` with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ToeplitzTruncation {
    pub alpha: f64,
    pub matrix: QuatMatrix,
}

impl ToeplitzTruncation {
    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    /// `|z| ≤ 0.6√(N/α)`, where the section resolves normalized kernels.
    pub fn trusted_radius(&self) -> f64 {
        0.6 * (self.size() as f64 / self.alpha).sqrt()
    }
}

/// `Mₘₙ = ⟨f⋆eₙ, eₘ⟩_α`, computed on the slice of `unit` through the split
/// `f = F₀ + F₁J`: `Mₘₙ = ∫ conj(eₘ)eₙF₀ dλ + (∫ conj(eₘ)eₙF₁ dλ)·J`.
pub fn toeplitz_matrix_fn(f: &SliceFunction, alpha: f64, n: usize, unit: Unit, rule: &QuadratureRule) -> Result<ToeplitzTruncation> {
    check_alpha(alpha)?;
    let shift = f.gauss_rate();
    check_alpha(alpha + shift)?;
    let j = orthogonal_unit(unit);
    let zero = Complex64::new(0.0, 0.0);
    let mut a = vec![zero; n * n];
    let mut b = vec![zero; n * n];
    let mut abs_all = vec![0.0; n * n];
    let mut abs_outer = vec![0.0; n * n];
    for nd in rule.slice.shifted_nodes(alpha, shift) {
        let (f0, f1) = split_in_frame(f.eval_on(unit, nd.x, nd.y), unit, j);
        let mag = f0.norm() + f1.norm();
        let e = basis_values(Complex64::new(nd.x, nd.y), alpha, n, 1.0);
        for m in 0..n {
            let em = e[m].conj() * nd.weight;
            for c in 0..n {
                let w = em * e[c];
                a[m * n + c] += w * f0;
                b[m * n + c] += w * f1;
                let s = w.norm() * mag;
                abs_all[m * n + c] += s;
                if nd.outer {
                    abs_outer[m * n + c] += s;
                }
            }
        }
    }
    let mut mat = QuatMatrix::zeros(n);
    for idx in 0..n * n {
        if abs_all[idx] > 0.0 {
            let tail = abs_outer[idx] / abs_all[idx];
            if tail > rule.tail_tol || !tail.is_finite() {
                return Err(Error::Window(tail));
            }
        }
        mat.data[idx] = join_in_frame(a[idx], b[idx], unit, j);
    }
    Ok(ToeplitzTruncation { alpha, matrix: mat })
}

/// `Mₘₙ = Σ_a w_a conj(eₘ(a)) eₙ(a) e^{-α|a|²}`, after checking that
/// `Σ w_a |K_α(z,a)|² e^{-α|a|²}` is finite at `probes`.
pub fn toeplitz_matrix_measure(mu: &DiscreteMeasure, alpha: f64, n: usize, probes: &[Quat]) -> Result<ToeplitzTruncation> {
    let ctx = KernelContext::new(alpha)?;
    mu.kernel_integrability(&ctx, probes)?;
    let mut mat = QuatMatrix::zeros(n);
    for atom in mu.atoms() {
        let s = slice_decompose(atom.point);
        let damp = (-alpha * atom.point.norm_sqr() / 2.0).exp();
        let e = basis_values(Complex64::new(s.x, s.y), alpha, n, damp);
        for m in 0..n {
            for c in 0..n {
                let v = e[m].conj() * e[c] * atom.weight;
                mat.data[m * n + c] += Quat::from_complex(v, s.unit);
            }
        }
    }
    Ok(ToeplitzTruncation { alpha, matrix: mat })
}

/// Symbol `g` with `T_g = T_f*`: on the slice of `i`, with `f = A + BJ`,
/// `g = C + DJ` where `C = Ā` and `D(z) = −B(z̄)`.
pub fn adjoint_symbol(f: &SliceFunction, i: Unit, j: Unit) -> Result<SliceFunction> {
    check_orthogonal(i, j)?;
    let f = f.clone();
    Ok(extend_from_slice(
        move |q| {
            let (x, y) = (q.re, q.dot(i.quat()));
            let (a, _) = split_in_frame(f.eval_on(i, x, y), i, j);
            let (_, b) = split_in_frame(f.eval_on(i, x, -y), i, j);
            join_in_frame(a.conj(), -b, i, j)
        },
        i,
    ))
}

/// Coefficients of the normalized kernel `k_z = K_α(·,z)e^{-α|z|²/2}` in the
/// orthonormal basis: `cₙ = conj(eₙ(z)) e^{-α|z|²/2}`.
pub fn normalized_kernel_coeffs(z: Quat, alpha: f64, n: usize) -> Vec<Quat> {
    let s = slice_decompose(z);
    let damp = (-alpha * z.norm_sqr() / 2.0).exp();
    basis_values(Complex64::new(s.x, s.y), alpha, n, damp)
        .into_iter()
        .map(|e| Quat::from_complex(e.conj(), s.unit))
        .collect()
}

/// `⟨M v, v⟩ = Σ conj(vₘ)(Mv)ₘ`.
pub fn quadratic_form(m: &QuatMatrix, v: &[Quat]) -> Quat {
    m.apply(v).iter().zip(v).map(|(a, b)| b.conj() * *a).sum()
}

/// Berezin symbol of a section at one probe.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BerezinRow {
    pub z: [f64; 4],
    /// `⟨T k_z, k_z⟩_α` from the section.
    pub operator: [f64; 4],
    /// `f̃(z)` for function symbols.
    pub symbol: Option<[f64; 4]>,
    /// `⟨T k_z, k_z⟩_α − f̃(z)`.
    pub gap: Option<[f64; 4]>,
    /// `|z|` within the trusted radius of the section.
    pub trusted: bool,
}

pub fn berezin_symbol(
    t: &ToeplitzTruncation,
    symbol: Option<&SliceFunction>,
    probes: &[Quat],
    ctx: &BerezinContext,
) -> Result<Vec<BerezinRow>> {
    let ft = match symbol {
        Some(f) => Some(berezin(f, &ctx.with_alpha(t.alpha)?)?),
        None => None,
    };
    let mut rows = Vec::with_capacity(probes.len());
    for z in probes {
        let c = normalized_kernel_coeffs(*z, t.alpha, t.size());
        let op = quadratic_form(&t.matrix, &c);
        let sym = ft.as_ref().map(|g| g.eval(*z));
        rows.push(BerezinRow {
            z: z.to_array(),
            operator: op.to_array(),
            symbol: sym.map(Quat::to_array),
            gap: sym.map(|s| (op - s).to_array()),
            trusted: z.norm() <= t.trusted_radius(),
        });
    }
    Ok(rows)
}

/// Right-linear isometries `g ↦ u⋆g` for `u ∈ {I, J, IJ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SliceIsometry {
    I,
    J,
    IJ,
}

impl SliceIsometry {
    pub fn unit(self, i: Unit, j: Unit) -> Result<Quat> {
        check_orthogonal(i, j)?;
        Ok(match self {
            SliceIsometry::I => i.quat(),
            SliceIsometry::J => j.quat(),
            SliceIsometry::IJ => i.quat() * j.quat(),
        })
    }

    /// Matrix in the orthonormal basis: `diag(u)`.
    pub fn matrix(self, n: usize, i: Unit, j: Unit) -> Result<QuatMatrix> {
        Ok(QuatMatrix::diagonal(&vec![self.unit(i, j)?; n]))
    }
}

/// `S g = u⋆g`; on `ℂ_I` with `g = H + KJ`, `S_I g = (H − KJ)I`.
pub fn slice_isometry_apply(which: SliceIsometry, g: &FockElement, i: Unit, j: Unit) -> Result<FockElement> {
    let u = which.unit(i, j)?;
    FockElement::new(g.coeffs().iter().map(|c| u * *c).collect(), g.alpha)
}

/// A Toeplitz symbol.
#[derive(Clone, Debug)]
pub enum Symbol {
    Function(SliceFunction),
    Measure(DiscreteMeasure),
}

/// Window and truncation settings of the boundedness/compactness proxies.
#[derive(Clone, Debug)]
pub struct ProxyConfig {
    pub alpha: f64,
    pub sizes: Vec<usize>,
    /// Radii of the probe rings for the Berezin and box profiles.
    pub radii: Vec<f64>,
    pub units: Vec<Unit>,
    pub n_angles: usize,
    /// Box radius.
    pub r: f64,
    pub rule: QuadratureRule,
}

impl ProxyConfig {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(ProxyConfig {
            alpha,
            sizes: vec![8, 16, 32],
            radii: (0..=6).map(|r| r as f64).collect(),
            units: vec![Unit::I, Unit::J],
            n_angles: 12,
            r: 1.0,
            rule: QuadratureRule::default(),
        })
    }

    fn ring(&self, rad: f64) -> Vec<Quat> {
        let mut out = Vec::new();
        for u in &self.units {
            for a in 0..self.n_angles {
                let th = 2.0 * std::f64::consts::PI * a as f64 / self.n_angles as f64;
                out.push(u.point(rad * th.cos(), rad * th.sin()));
            }
        }
        out
    }
}

/// Boundedness and compactness evidence for one symbol.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProxyReport {
    /// `(N, ‖T_N‖)`.
    pub norms: Vec<(usize, f64)>,
    /// Norm ratio over the last doubling of `N`.
    pub norm_growth: f64,
    pub norm_bounded: bool,
    /// `(R, max over the ring)` of the Berezin-type quantity.
    pub berezin_profile: Vec<(f64, f64)>,
    pub berezin_bounded: bool,
    pub berezin_vanishing: bool,
    /// `(R, max over the ring)` of box averages.
    pub box_profile: Vec<(f64, f64)>,
    pub box_bounded: bool,
    pub box_vanishing: bool,
    /// `(R, max ‖T k_z‖ on |z| = R)` at `R` and `2R`.
    pub kernel_images: [(f64, f64); 2],
    pub kernel_decay: bool,
    pub bounded: bool,
    pub compact: bool,
    /// All bounded criteria agree, and for bounded symbols all compact
    /// criteria agree.
    pub consistent: bool,
}

/// Norm growth factor per doubling of `N` below which sections count as bounded.
pub const NORM_GROWTH_LIMIT: f64 = 1.1;

fn bounded_profile(profile: &[(f64, f64)]) -> bool {
    let r_max = profile.last().map_or(0.0, |r| r.0);
    let peak = profile.iter().map(|r| r.1).fold(0.0, f64::max);
    let inner = profile.iter().filter(|r| r.0 <= r_max / 2.0).map(|r| r.1).fold(0.0, f64::max);
    peak.is_finite() && peak <= 1.25 * inner + 1e-12
}

fn vanishing_profile(profile: &[(f64, f64)]) -> bool {
    let peak = profile.iter().map(|r| r.1).fold(0.0, f64::max);
    profile.last().is_none_or(|r| r.1 <= 0.1 * peak)
}

pub fn bounded_compact_proxy(symbol: &Symbol, cfg: &ProxyConfig) -> Result<ProxyReport> {
    let alpha = cfg.alpha;
    let kctx = KernelContext::new(alpha)?;
    let probes: Vec<Quat> = cfg.radii.iter().flat_map(|r| cfg.ring(*r)).collect();
    let section = |n: usize| match symbol {
        Symbol::Function(f) => toeplitz_matrix_fn(f, alpha, n, Unit::I, &cfg.rule),
        Symbol::Measure(mu) => toeplitz_matrix_measure(mu, alpha, n, &probes),
    };
    let mut norms = Vec::new();
    let mut largest = None;
    for &n in &cfg.sizes {
        let t = section(n)?;
        norms.push((n, t.matrix.operator_norm()));
        largest = Some(t);
    }
    let largest = largest.ok_or_else(|| Error::Param("no truncation sizes".into()))?;
    let norm_growth = match norms.len() {
        0 | 1 => 1.0,
        l => {
            let (n0, v0) = norms[l - 2];
            let (n1, v1) = norms[l - 1];
            let d = (n1 as f64 / n0 as f64).log2();
            if v0 > 0.0 {
                (v1 / v0).powf(1.0 / d)
            } else if v1 > 0.0 {
                f64::INFINITY
            } else {
                1.0
            }
        }
    };
    let norm_bounded = norm_growth < NORM_GROWTH_LIMIT;

    let bctx = BerezinContext::new(alpha)?;
    let disk = DiskRule { n_r: 16, n_theta: 16 };
    let ft = match symbol {
        Symbol::Function(f) => Some(berezin(f, &bctx)?),
        Symbol::Measure(_) => None,
    };
    let (mut bp, mut xp) = (Vec::new(), Vec::new());
    for &rad in &cfg.radii {
        let (mut bm, mut xm) = (0.0f64, 0.0f64);
        for z in cfg.ring(rad) {
            let (b, x) = match symbol {
                Symbol::Function(f) => {
                    let s = slice_decompose(z);
                    let b = ft.as_ref().map_or(0.0, |g| g.eval(z).norm());
                    let x: f64 = disk.average(s.x, s.y, cfg.r, |x, y| f.eval_on(s.unit, x, y).norm());
                    (b, x)
                }
                Symbol::Measure(mu) => (kernel_quantity(mu, &kctx, 2.0, z)?, averaging_function(mu, z, cfg.r)?),
            };
            bm = bm.max(b);
            xm = xm.max(x);
        }
        bp.push((rad, bm));
        xp.push((rad, xm));
    }

    let r2 = 0.55 * (largest.size() as f64 / alpha).sqrt();
    let mut kernel_images = [(r2 / 2.0, 0.0f64), (r2, 0.0f64)];
    for slot in kernel_images.iter_mut() {
        for z in cfg.ring(slot.0) {
            let c = normalized_kernel_coeffs(z, alpha, largest.size());
            let v = largest.matrix.apply(&c).iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
            slot.1 = slot.1.max(v);
        }
    }
    let kernel_decay = kernel_images[1].1 < 0.5 * kernel_images[0].1;

    let berezin_bounded = bounded_profile(&bp);
    let box_bounded = bounded_profile(&xp);
    let berezin_vanishing = vanishing_profile(&bp);
    let box_vanishing = vanishing_profile(&xp);
    let bounded = norm_bounded;
    let compact = bounded && kernel_decay;
    let consistent = norm_bounded == berezin_bounded
        && norm_bounded == box_bounded
        && (!bounded || (kernel_decay == berezin_vanishing && kernel_decay == box_vanishing));
    Ok(ProxyReport {
        norms,
        norm_growth,
        norm_bounded,
        berezin_profile: bp,
        berezin_bounded,
        berezin_vanishing,
        box_profile: xp,
        box_bounded,
        box_vanishing,
        kernel_images,
        kernel_decay,
        bounded,
        compact,
        consistent,
    })
}
