//! The reproducing kernel `K_α(z,w) = Σ αⁿ zⁿ w̄ⁿ / n!`, normalized kernels,
//! truncated Fock-space elements, inner products and Fock norms.

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::quad::{check_alpha, QuadratureRule};
use crate::quat::{slice_decompose, Quat, Unit};
use crate::slice::{RegularPolynomial, SliceFunction, Tag};

/// Weight `α` together with the truncation policy of the kernel series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelContext {
    pub alpha: f64,
    pub max_terms: usize,
    /// Bound on `(s^{N+1}/(N+1)!)·e^s` with `s = α|z||w|`.
    pub tail_tol: f64,
    /// Largest admissible `s`.
    pub cap: f64,
}

impl KernelContext {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(KernelContext { alpha, max_terms: 4000, tail_tol: 1e-14, cap: 700.0 })
    }

    pub fn with_truncation(mut self, max_terms: usize, tail_tol: f64) -> Self {
        self.max_terms = max_terms;
        self.tail_tol = tail_tol;
        self
    }

    /// Number of terms kept for the argument `s = α|z||w|`.
    pub fn terms_for(&self, s: f64) -> Result<usize> {
        if s > self.cap || !s.is_finite() {
            return Err(Error::KernelOverflow(s));
        }
        if s == 0.0 {
            return Ok(1);
        }
        let target = self.tail_tol.ln() - s;
        let ls = s.ln();
        let mut n = 0usize;
        // keep terms 0..=n while the tail after n exceeds the bound
        loop {
            let m = (n + 1) as f64;
            if m * ls - ln_gamma(m + 1.0) <= target && m > s {
                return Ok(n + 1);
            }
            n += 1;
            if n >= self.max_terms {
                return Err(Error::Truncation(self.max_terms));
            }
        }
    }

    /// Truncated series `Σ_{n≤N} αⁿ zⁿ w̄ⁿ / n!`.
    pub fn kernel(&self, z: Quat, w: Quat) -> Result<Quat> {
        let (nz, nw) = (z.norm(), w.norm());
        let s = self.alpha * nz * nw;
        let terms = self.terms_for(s)?;
        if s == 0.0 {
            return Ok(Quat::ONE);
        }
        // balance the two power sequences so each stays below e^{s/2}
        let lam = (nw / nz).sqrt();
        let zs = z * (self.alpha.sqrt() * lam);
        let ws = w.conj() * (self.alpha.sqrt() / lam);
        let (mut u, mut v) = (Quat::ONE, Quat::ONE);
        let mut acc = Quat::ONE;
        for n in 1..terms {
            let r = 1.0 / (n as f64).sqrt();
            u = zs * u * r;
            v = v * ws * r;
            acc += u * v;
        }
        Ok(acc)
    }

    /// Closed form through the representation formula: with `J` the unit of
    /// `w` and `z = x + yI`, `K = ½(1−IJ)e^{α z_J w̄} + ½(1+IJ)e^{α z̄_J w̄}`.
    pub fn kernel_by_representation(&self, z: Quat, w: Quat) -> Quat {
        let sz = slice_decompose(z);
        let sw = slice_decompose(w);
        let wbar = Complex64::new(sw.x, -sw.y);
        let e1 = (Complex64::new(sz.x, sz.y) * wbar * self.alpha).exp();
        let e2 = (Complex64::new(sz.x, -sz.y) * wbar * self.alpha).exp();
        let ij = sz.unit.quat() * sw.unit.quat();
        (Quat::ONE - ij) * Quat::from_complex(e1, sw.unit) * 0.5
            + (Quat::ONE + ij) * Quat::from_complex(e2, sw.unit) * 0.5
    }

    /// `k_z(w) = K_α(w,z)·e^{-α|z|²/2}` as a slice function of `w`.
    pub fn normalized_kernel(&self, z: Quat) -> SliceFunction {
        let alpha = self.alpha;
        let zbar = z.conj();
        let damp = (-alpha * z.norm_sqr() / 2.0).exp();
        let nz = z.norm();
        let ctx = *self;
        SliceFunction::from_stem(Tag::Generic, move |x, y| {
            let zeta = Complex64::new(x, y);
            let s = alpha * zeta.norm() * nz;
            let terms = ctx.terms_for(s).unwrap_or(ctx.max_terms);
            let lam = if s > 0.0 { (zeta.norm() / nz).sqrt() } else { 1.0 };
            let zs = zeta * (alpha.sqrt() / lam);
            let cs = zbar * (alpha.sqrt() * lam);
            let (mut p, mut c) = (Complex64::new(1.0, 0.0), Quat::ONE);
            let (mut a, mut b) = (Quat::ONE, Quat::ZERO);
            for n in 1..terms {
                let r = 1.0 / (n as f64).sqrt();
                p = p * zs * r;
                c = c * cs * r;
                a += c * p.re;
                b += c * p.im;
            }
            (a * damp, b * damp)
        })
    }
}

/// `‖zⁿ‖²_{2,α} = n!/αⁿ`.
pub fn monomial_norm(alpha: f64, n: usize) -> Result<f64> {
    check_alpha(alpha)?;
    let v = if n <= 170 {
        (1..=n).fold(1.0, |acc, k| acc * k as f64 / alpha)
    } else {
        (ln_gamma(n as f64 + 1.0) - n as f64 * alpha.ln()).exp()
    };
    if !v.is_finite() || v == 0.0 {
        return Err(Error::Range(n));
    }
    Ok(v)
}

/// A finite truncation `Σ qⁿ aₙ` of an element of the Fock space `F²_α`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockElement {
    pub poly: RegularPolynomial,
    pub alpha: f64,
}

impl FockElement {
    pub fn new(coeffs: Vec<Quat>, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(FockElement { poly: RegularPolynomial::new(coeffs), alpha })
    }

    pub fn from_poly(poly: RegularPolynomial, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(FockElement { poly, alpha })
    }

    /// First `n` coefficients of `K_α(·,z) = Σ qⁿ (αⁿ z̄ⁿ/n!)`.
    pub fn kernel_section(z: Quat, alpha: f64, n: usize) -> Result<Self> {
        check_alpha(alpha)?;
        let mut c = Vec::with_capacity(n);
        let mut t = Quat::ONE;
        for m in 0..n {
            if m > 0 {
                t = t * z.conj() * (alpha / m as f64);
            }
            c.push(t);
        }
        Self::new(c, alpha)
    }

    pub fn coeffs(&self) -> &[Quat] {
        &self.poly.coeffs
    }

    pub fn eval(&self, q: Quat) -> Quat {
        self.poly.eval(q)
    }

    pub fn to_slice_function(&self) -> SliceFunction {
        self.poly.clone().into()
    }

    fn weights(&self, n: usize) -> Result<Vec<f64>> {
        (0..n).map(|m| monomial_norm(self.alpha, m)).collect()
    }

    /// `Σ |aₙ|² n!/αⁿ`.
    pub fn norm_sq(&self) -> Result<f64> {
        let w = self.weights(self.poly.coeffs.len())?;
        Ok(self.poly.coeffs.iter().zip(w).map(|(c, w)| c.norm_sqr() * w).sum())
    }

    pub fn norm(&self) -> Result<f64> {
        Ok(self.norm_sq()?.sqrt())
    }

    /// `⟨f,g⟩_α = Σ conj(bₙ)·aₙ·n!/αⁿ`, right-linear in `f`.
    pub fn inner(&self, g: &FockElement) -> Result<Quat> {
        if self.alpha != g.alpha {
            return Err(Error::AlphaMismatch(self.alpha, g.alpha));
        }
        let n = self.poly.coeffs.len().min(g.poly.coeffs.len());
        let w = self.weights(n)?;
        Ok((0..n).map(|m| g.poly.coeffs[m].conj() * self.poly.coeffs[m] * w[m]).sum())
    }

    pub fn add(&self, g: &FockElement) -> Result<FockElement> {
        if self.alpha != g.alpha {
            return Err(Error::AlphaMismatch(self.alpha, g.alpha));
        }
        Ok(FockElement { poly: self.poly.add(&g.poly), alpha: self.alpha })
    }

    pub fn mul_right(&self, c: Quat) -> FockElement {
        FockElement { poly: self.poly.mul_right(c), alpha: self.alpha }
    }
}

/// Reconstructs `⟨x,y⟩` from the eight norms `‖x ± y·e‖²`, `e ∈ {1,i,j,k}`.
pub fn polarization_inner(x: &FockElement, y: &FockElement) -> Result<Quat> {
    let mut parts = [0.0; 4];
    for (c, e) in [Quat::ONE, Quat::I, Quat::J, Quat::K].into_iter().enumerate() {
        let ye = y.mul_right(e);
        let plus = x.add(&ye)?.norm_sq()?;
        let minus = x.add(&ye.mul_right(-Quat::ONE))?.norm_sq()?;
        parts[c] = 0.25 * (plus - minus);
    }
    Ok(Quat::from_array(parts))
}

/// `‖f‖_{p,α,I} = (∫_{ℂ_I} |f|^p dλ_{pα/2,I})^{1/p}`, i.e. the slice norm
/// `(αp/2π)∫|f e^{-α|z|²/2}|^p dm`.
pub fn slice_p_norm(f: &SliceFunction, p: f64, alpha: f64, unit: Unit, rule: &QuadratureRule) -> Result<f64> {
    check_p(p)?;
    let v: f64 = rule.integrate_slice_shifted(
        |q| f.eval(q).norm().powf(p),
        unit,
        p * alpha / 2.0,
        p * f.gauss_rate(),
    )?;
    Ok(v.powf(1.0 / p))
}

/// `‖f‖_{p,α} = ((αp/π)∫_ℍ |f e^{-α|z|²/2}|^p dV)^{1/p}`, the sphere average
/// of the slice norms raised to `p`.
pub fn global_p_norm(f: &SliceFunction, p: f64, alpha: f64, rule: &QuadratureRule) -> Result<f64> {
    check_p(p)?;
    let v: f64 = rule.integrate_global_shifted(|q| f.eval(q).norm().powf(p), p * alpha / 2.0, p * f.gauss_rate())?;
    Ok(v.powf(1.0 / p))
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::Param(format!("exponent p must be positive, got {p}")));
    }
    Ok(())
}

/// Largest `|f(z)|e^{-α|z|²/2}/‖f‖_{p,α}` over the samples.
pub fn pointwise_bound_check(f: &FockElement, p: f64, samples: &[Quat], rule: &QuadratureRule) -> Result<f64> {
    let norm = if p == 2.0 { f.norm()? } else { global_p_norm(&f.to_slice_function(), p, f.alpha, rule)? };
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(samples
        .iter()
        .map(|z| f.eval(*z).norm() * (-f.alpha * z.norm_sqr() / 2.0).exp() / norm)
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_at_origin_is_one() {
        let ctx = KernelContext::new(1.3).unwrap();
        assert_eq!(ctx.kernel(Quat::new(1.0, 2.0, 0.0, -1.0), Quat::ZERO).unwrap(), Quat::ONE);
    }

    #[test]
    fn kernel_i_j() {
        let ctx = KernelContext::new(1.0).unwrap();
        let k = ctx.kernel(Quat::I, Quat::J).unwrap();
        let want = Quat::new(1f64.cosh(), 0.0, 0.0, -1f64.sinh());
        assert!(k.max_abs_diff(want) < 1e-14);
    }

    #[test]
    fn overflow_guard() {
        let ctx = KernelContext::new(1.0).unwrap();
        assert!(matches!(ctx.kernel(Quat::real(30.0), Quat::real(30.0)), Err(Error::KernelOverflow(_))));
    }

    #[test]
    fn monomial_norm_values() {
        assert_eq!(monomial_norm(1.0, 0).unwrap(), 1.0);
        assert!((monomial_norm(1.0, 3).unwrap() - 6.0).abs() < 1e-12);
        assert!((monomial_norm(2.0, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(monomial_norm(0.01, 200), Err(Error::Range(200))));
    }

    #[test]
    fn inner_right_linearity_example() {
        let f = FockElement::new(vec![Quat::ZERO, Quat::J], 1.0).unwrap();
        let g = FockElement::new(vec![Quat::ZERO, Quat::ONE], 1.0).unwrap();
        assert_eq!(f.inner(&g).unwrap(), Quat::J);
        let h = FockElement::new(vec![Quat::ZERO, Quat::ZERO, Quat::ONE], 1.0).unwrap();
        assert_eq!(g.inner(&h).unwrap(), Quat::ZERO);
    }

    #[test]
    fn normalized_kernel_at_its_center() {
        let ctx = KernelContext::new(1.0).unwrap();
        let z = Quat::new(0.4, 0.3, -0.5, 0.2);
        let v = ctx.normalized_kernel(z).eval(z);
        assert!(v.max_abs_diff(Quat::real((z.norm_sqr() / 2.0).exp())) < 1e-13);
        let k0 = ctx.normalized_kernel(Quat::ZERO);
        assert!(k0.eval(Quat::new(1.0, 2.0, 3.0, 4.0)).max_abs_diff(Quat::ONE) < 1e-15);
    }
}
