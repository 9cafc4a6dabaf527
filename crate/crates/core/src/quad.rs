//! Quadrature over slices, over ℍ (sphere of units × slice) and over disks.
//!
//! Gaussian measures: `dλ_{α,I} = (α/π)e^{-α|z|²} dm` on a slice and
//! `dλ_α = ∫_𝕊 dλ_{α,I} dσ(I)` on ℍ, both probability measures.

use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gauss;
use crate::quat::{Quat, SphereRule, Unit};

/// Values that can be accumulated by a quadrature rule.
pub trait Integrand: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Quat {
    fn zero() -> Self {
        Quat::ZERO
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// One node of a slice rule; `outer` marks the outermost ring.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceNode {
    pub x: f64,
    pub y: f64,
    pub weight: f64,
    pub outer: bool,
}

/// Tensor Gauss–Hermite rule on a slice.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceRule {
    t: Vec<f64>,
    w: Vec<f64>,
}

impl SliceRule {
    /// `n × n` tensor rule; exact for polynomials of degree `< 2n` in each
    /// coordinate times the Gaussian weight.
    pub fn gauss_hermite(n: usize) -> Self {
        let (t, w) = gauss::hermite(n);
        let s = std::f64::consts::PI.sqrt();
        SliceRule { t, w: w.into_iter().map(|v| v / s).collect() }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Standardized 1-D nodes and weights (weights sum to one) for the
    /// weight `e^{-t²}/√π`.
    pub fn one_d(&self) -> (&[f64], &[f64]) {
        (&self.t, &self.w)
    }

    /// `∫ g dλ_{α,I}` over a slice, with `g` given in slice coordinates.
    ///
    /// Nodes are placed for `λ_{α+shift}`; choose `shift = x` when
    /// `g = e^{-x|z|²}·h` so that only `h` is sampled. Returns the value
    /// and the share of the absolute sum carried by the outermost ring of
    /// nodes.
    pub fn integrate_xy<T, F>(&self, alpha: f64, shift: f64, g: F) -> (T, f64)
    where
        T: Integrand,
        F: Fn(f64, f64) -> T,
    {
        let mut acc = T::zero();
        let (mut abs_all, mut abs_outer) = (0.0, 0.0);
        for nd in self.shifted_nodes(alpha, shift) {
            let v = g(nd.x, nd.y) * nd.weight;
            acc = acc + v;
            let m = v.magnitude();
            abs_all += m;
            if nd.outer {
                abs_outer += m;
            }
        }
        let tail = if abs_all > 0.0 { abs_outer / abs_all } else { 0.0 };
        (acc, tail)
    }

    /// Nodes for `∫ g dλ_{α,I}` placed for `λ_{α+shift}`; weights include
    /// the compensating factor `α/(α+shift)·e^{shift|w|²}`.
    pub fn shifted_nodes(&self, alpha: f64, shift: f64) -> Vec<SliceNode> {
        let ar = alpha + shift;
        let sc = 1.0 / ar.sqrt();
        let n = self.t.len();
        let mut out = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let (x, y) = (self.t[a] * sc, self.t[b] * sc);
                let mut weight = self.w[a] * self.w[b] * alpha / ar;
                if shift != 0.0 {
                    weight *= (shift * (x * x + y * y)).exp();
                }
                let outer = a == 0 || b == 0 || a == n - 1 || b == n - 1;
                out.push(SliceNode { x, y, weight, outer });
            }
        }
        out
    }

    /// Nodes `(x, y, weight)` of the rule for `λ_α` (weights sum to one).
    pub fn nodes(&self, alpha: f64) -> Vec<(f64, f64, f64)> {
        let sc = 1.0 / alpha.sqrt();
        let mut out = Vec::with_capacity(self.t.len() * self.t.len());
        for a in 0..self.t.len() {
            for b in 0..self.t.len() {
                out.push((self.t[a] * sc, self.t[b] * sc, self.w[a] * self.w[b]));
            }
        }
        out
    }
}

/// Slice rule plus sphere rule, with a tolerance for the window check.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub slice: SliceRule,
    pub sphere_rule: SphereRule,
    sphere: Vec<(Unit, f64)>,
    /// Maximal share of the outermost node ring before a window error.
    pub tail_tol: f64,
}

impl QuadratureRule {
    pub fn new(n_hermite: usize, sphere_rule: SphereRule) -> Result<Self> {
        if n_hermite == 0 {
            return Err(Error::Param("Gauss-Hermite rule needs at least one node".into()));
        }
        Ok(QuadratureRule {
            slice: SliceRule::gauss_hermite(n_hermite),
            sphere_rule,
            sphere: sphere_rule.nodes()?,
            tail_tol: 1e-6,
        })
    }

    pub fn with_tail_tol(mut self, tol: f64) -> Self {
        self.tail_tol = tol;
        self
    }

    pub fn sphere_nodes(&self) -> &[(Unit, f64)] {
        &self.sphere
    }

    fn check(&self, tail: f64) -> Result<()> {
        if tail > self.tail_tol || !tail.is_finite() {
            return Err(Error::Window(tail));
        }
        Ok(())
    }

    /// `∫_{ℂ_I} g dλ_{α,I}`.
    pub fn integrate_slice<T, F>(&self, g: F, unit: Unit, alpha: f64) -> Result<T>
    where
        T: Integrand,
        F: Fn(Quat) -> T,
    {
        self.integrate_slice_shifted(g, unit, alpha, 0.0)
    }

    /// As [`integrate_slice`](Self::integrate_slice) with nodes adapted to `λ_{α+shift}`.
    pub fn integrate_slice_shifted<T, F>(&self, g: F, unit: Unit, alpha: f64, shift: f64) -> Result<T>
    where
        T: Integrand,
        F: Fn(Quat) -> T,
    {
        check_alpha(alpha)?;
        check_alpha(alpha + shift)?;
        let (v, tail) = self.slice.integrate_xy(alpha, shift, |x, y| g(unit.point(x, y)));
        self.check(tail)?;
        Ok(v)
    }

    /// `∫_ℍ g dλ_α`, as the sphere average of full-slice integrals.
    pub fn integrate_global<T, F>(&self, g: F, alpha: f64) -> Result<T>
    where
        T: Integrand,
        F: Fn(Quat) -> T,
    {
        self.integrate_global_shifted(g, alpha, 0.0)
    }

    pub fn integrate_global_shifted<T, F>(&self, g: F, alpha: f64, shift: f64) -> Result<T>
    where
        T: Integrand,
        F: Fn(Quat) -> T,
    {
        let mut acc = T::zero();
        for (u, w) in &self.sphere {
            acc = acc + self.integrate_slice_shifted(&g, *u, alpha, shift)? * *w;
        }
        Ok(acc)
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule::new(48, SphereRule::default()).expect("default rule is valid")
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Param(format!("Gaussian weight must be positive and finite, got {alpha}")));
    }
    Ok(())
}

/// Polar midpoint rule on a disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskRule {
    pub n_r: usize,
    pub n_theta: usize,
}

impl Default for DiskRule {
    fn default() -> Self {
        DiskRule { n_r: 32, n_theta: 32 }
    }
}

impl DiskRule {
    /// Nodes `(x, y, weight)` in the disk of radius `r` around `(x0, y0)`;
    /// weights sum to one.
    pub fn nodes(&self, x0: f64, y0: f64, r: f64) -> Vec<(f64, f64, f64)> {
        let dr = r / self.n_r as f64;
        let dt = 2.0 * std::f64::consts::PI / self.n_theta as f64;
        let area = std::f64::consts::PI * r * r;
        let mut out = Vec::with_capacity(self.n_r * self.n_theta);
        for a in 0..self.n_r {
            let rho = (a as f64 + 0.5) * dr;
            for b in 0..self.n_theta {
                let th = (b as f64 + 0.5) * dt;
                out.push((x0 + rho * th.cos(), y0 + rho * th.sin(), rho * dr * dt / area));
            }
        }
        out
    }

    /// Mean value `(1/πr²)∫_{B((x0,y0),r)} g dm`.
    pub fn average<T: Integrand, F: Fn(f64, f64) -> T>(&self, x0: f64, y0: f64, r: f64, g: F) -> T {
        self.nodes(x0, y0, r).into_iter().fold(T::zero(), |acc, (x, y, w)| acc + g(x, y) * w)
    }

    /// Points of the closed disk (center, interior rings and boundary) used
    /// for suprema.
    pub fn closed_samples(&self, x0: f64, y0: f64, r: f64) -> Vec<(f64, f64)> {
        let mut out = vec![(x0, y0)];
        let dt = 2.0 * std::f64::consts::PI / self.n_theta as f64;
        for a in 1..=self.n_r {
            let rho = r * a as f64 / self.n_r as f64;
            for b in 0..self.n_theta {
                let th = b as f64 * dt;
                out.push((x0 + rho * th.cos(), y0 + rho * th.sin()));
            }
        }
        out
    }
}
