//! The projection `P_α`, its positive companion `Q_α`, the adjoint on
//! `L²(λ_β)`, Schur-test constants, boundedness probes and range preimages.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{FockElement, KernelContext};
use crate::quad::{check_alpha, QuadratureRule};
use crate::quat::{Quat, Unit};
use crate::slice::{RegularPolynomial, SliceFunction, Tag};

/// `cₙ = ∫ (α w̄)ⁿ/n! · f(w) dλ_{β,I}(w)` for `n < n_terms`, with nodes placed
/// for `λ_{β+f.gauss_rate}`.
pub fn coefficient_integrals(
    f: &SliceFunction,
    unit: Unit,
    alpha: f64,
    beta: f64,
    n_terms: usize,
    rule: &QuadratureRule,
) -> Result<Vec<Quat>> {
    check_alpha(alpha)?;
    check_alpha(beta)?;
    let shift = f.gauss_rate();
    check_alpha(beta + shift)?;
    let mut acc = vec![Quat::ZERO; n_terms];
    let mut abs_all = vec![0.0; n_terms];
    let mut abs_outer = vec![0.0; n_terms];
    for nd in rule.slice.shifted_nodes(beta, shift) {
        let fv = f.eval_on(unit, nd.x, nd.y) * nd.weight;
        let step = Complex64::new(nd.x, -nd.y) * alpha;
        let mut t = Complex64::new(1.0, 0.0);
        for n in 0..n_terms {
            if n > 0 {
                t = t * step / n as f64;
            }
            let v = Quat::from_complex(t, unit) * fv;
            acc[n] += v;
            let m = v.norm();
            abs_all[n] += m;
            if nd.outer {
                abs_outer[n] += m;
            }
        }
    }
    for n in 0..n_terms {
        if abs_all[n] > 0.0 {
            let tail = abs_outer[n] / abs_all[n];
            if tail > rule.tail_tol || !tail.is_finite() {
                return Err(Error::Window(tail));
            }
        }
        if !acc[n].is_finite() {
            return Err(Error::Window(f64::INFINITY));
        }
    }
    Ok(acc)
}

/// `P_α f` truncated to degree `< n_terms`, computed on the slice of `unit`.
///
/// For slice functions the result does not depend on the slice.
pub fn apply_p(f: &SliceFunction, alpha: f64, unit: Unit, n_terms: usize, rule: &QuadratureRule) -> Result<FockElement> {
    let c = coefficient_integrals(f, unit, alpha, alpha, n_terms, rule)?;
    FockElement::new(c, alpha)
}

fn kernel_or_nan(ctx: &KernelContext, z: Quat, w: Quat) -> Quat {
    ctx.kernel(z, w).unwrap_or(Quat::new(f64::NAN, 0.0, 0.0, 0.0))
}

/// `P_α f(z) = ∫_ℍ K_α(z,w) f(w) dλ_α(w)` by global quadrature.
pub fn apply_p_global(f: &SliceFunction, ctx: &KernelContext, z: Quat, rule: &QuadratureRule) -> Result<Quat> {
    let v: Quat = rule.integrate_global_shifted(|w| kernel_or_nan(ctx, z, w) * f.eval(w), ctx.alpha, f.gauss_rate())?;
    if !v.is_finite() {
        return Err(Error::KernelOverflow(ctx.alpha * z.norm()));
    }
    Ok(v)
}

/// `Q_α f(z) = ∫_ℍ |K_α(z,w)| f(w) dλ_α(w)` for `f ≥ 0`; `shift` absorbs a
/// Gaussian factor of `f` as in [`QuadratureRule::integrate_global_shifted`].
pub fn apply_q<F: Fn(Quat) -> f64>(f: F, ctx: &KernelContext, z: Quat, shift: f64, rule: &QuadratureRule) -> Result<f64> {
    let v: f64 = rule.integrate_global_shifted(
        |w| {
            let fv = f(w);
            if fv < 0.0 {
                f64::NAN
            } else {
                kernel_or_nan(ctx, z, w).norm() * fv
            }
        },
        ctx.alpha,
        shift,
    )?;
    if v.is_nan() {
        return Err(Error::Param(format!("Q_α needs a nonnegative finite integrand near {z}")));
    }
    Ok(v)
}

/// `∫_ℍ |e_*^{t z w̄}| dλ_α(w)` for real `t ≠ 0`.
pub fn kernel_abs_integral(t: f64, alpha: f64, z: Quat, rule: &QuadratureRule) -> Result<f64> {
    if t == 0.0 {
        return Ok(1.0);
    }
    let ctx = KernelContext::new(t.abs())?;
    let zs = if t < 0.0 { -z } else { z };
    let v: f64 = rule.integrate_global(|w| kernel_or_nan(&ctx, zs, w).norm(), alpha)?;
    if !v.is_finite() {
        return Err(Error::KernelOverflow(t.abs() * z.norm()));
    }
    Ok(v)
}

/// Adjoint of `P_α` on `L²(λ_β)`:
/// `P*f(z) = (α/β)e^{(β−α)|z|²} Σ zⁿ cₙ` with `cₙ = (αⁿ/n!)∫ w̄ⁿ f dλ_β`.
pub fn adjoint_p(
    f: &SliceFunction,
    alpha: f64,
    beta: f64,
    unit: Unit,
    n_terms: usize,
    rule: &QuadratureRule,
) -> Result<SliceFunction> {
    let c = coefficient_integrals(f, unit, alpha, beta, n_terms, rule)?;
    Ok(weighted_polynomial(RegularPolynomial::new(c), alpha / beta, alpha - beta))
}

/// `c·e^{-rate|z|²}·p(z)` as a slice function.
fn weighted_polynomial(p: RegularPolynomial, c: f64, rate: f64) -> SliceFunction {
    SliceFunction::from_stem(Tag::Generic, move |x, y| {
        let g = c * (-rate * (x * x + y * y)).exp();
        let (a, b) = p.stem(x, y);
        (a * g, b * g)
    })
    .with_gauss_rate(rate)
}

/// `⟨f, g⟩_{L²(λ_β)} = ∫ conj(g)·f dλ_β` on one slice.
pub fn l2_inner(f: &SliceFunction, g: &SliceFunction, beta: f64, unit: Unit, rule: &QuadratureRule) -> Result<Quat> {
    let shift = f.gauss_rate() + g.gauss_rate();
    rule.integrate_slice_shifted(|w| g.eval(w).conj() * f.eval(w), unit, beta, shift)
}

/// Outcome of the Schur test for `Q_α` on `L^p(λ_β)` with `h(z) = e^{δ|z|²}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchurReport {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    /// Constant of the row estimate (`∞` when its Gaussian integral diverges).
    pub c_row: f64,
    /// Constant of the column estimate.
    pub c_col: f64,
    /// Exponent mismatch of the two estimates (zero when both close up).
    pub exponent_gap: f64,
    /// Largest ratio of the quadrature row integral to `C_row·h(z)^q` at the
    /// sampled `z` (for `p = 1`: the Fubini column integral to its closed form).
    pub sampled_row_ratio: f64,
    pub balanced: bool,
}

impl SchurReport {
    /// `max(C_row, C_col)` when the estimates close up, else `∞`.
    pub fn bound(&self) -> f64 {
        if self.balanced && self.exponent_gap.abs() < 1e-12 {
            self.c_row.max(self.c_col)
        } else {
            f64::INFINITY
        }
    }
}

fn balanced(p: f64, alpha: f64, beta: f64) -> bool {
    (p * alpha - 2.0 * beta).abs() <= 1e-12 * (p * alpha).max(2.0 * beta)
}

/// Closed-form Schur constants with `δ = α/(2q)`; `p = 1` uses the Fubini
/// estimate `(α/β)e^{(β−α+α²/(4β))|w|²}`.
///
/// When `pα ≠ 2β` the report carries the nonzero exponent gap instead of a
/// bound. `samples` are real points where the row integral is evaluated by
/// quadrature.
pub fn schur_verify(alpha: f64, beta: f64, p: f64, samples: &[f64], rule: &QuadratureRule) -> Result<SchurReport> {
    check_alpha(alpha)?;
    check_alpha(beta)?;
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Param(format!("Schur test needs 1 ≤ p < ∞, got {p}")));
    }
    let bal = balanced(p, alpha, beta);
    if p == 1.0 {
        let gap = beta - alpha + alpha * alpha / (4.0 * beta);
        let c = alpha / beta;
        let mut sampled = 0.0f64;
        for &x in samples {
            let col = c * ((beta - alpha) * x * x).exp() * kernel_abs_integral(alpha, beta, Quat::real(x), rule)?;
            sampled = sampled.max(col / (c * (gap * x * x).exp()));
        }
        return Ok(SchurReport {
            p,
            alpha,
            beta,
            delta: 0.0,
            c_row: c,
            c_col: c,
            exponent_gap: gap,
            sampled_row_ratio: sampled,
            balanced: bal,
        });
    }
    let q = p / (p - 1.0);
    let delta = alpha / (2.0 * q);
    let (ar, bc) = (alpha - q * delta, beta - p * delta);
    let c_row = if ar > 0.0 { alpha / ar } else { f64::INFINITY };
    let c_col = if bc > 0.0 { alpha / bc } else { f64::INFINITY };
    let row_gap = if ar > 0.0 { alpha * alpha / (4.0 * ar) - q * delta } else { f64::INFINITY };
    let col_gap = if bc > 0.0 { beta - alpha + alpha * alpha / (4.0 * bc) - p * delta } else { f64::INFINITY };
    let exponent_gap = if row_gap.abs() > col_gap.abs() { row_gap } else { col_gap };
    let mut sampled = 0.0f64;
    if ar > 0.0 {
        for &x in samples {
            let i = c_row * kernel_abs_integral(alpha, ar, Quat::real(x), rule)?;
            sampled = sampled.max(i / (c_row * (q * delta * x * x).exp()));
        }
    }
    Ok(SchurReport { p, alpha, beta, delta, c_row, c_col, exponent_gap, sampled_row_ratio: sampled, balanced: bal })
}

/// Closed-form ratio `‖P_α f_{x,k}‖_{p,β} / ‖f_{x,k}‖_{p,β}` for
/// `f_{x,k}(z) = e^{-x|z|²}zᵏ`, in logarithmic form.
pub fn projection_log_ratio(p: f64, alpha: f64, beta: f64, x: f64, k: usize) -> f64 {
    let k = k as f64;
    (1.0 + k) * (alpha / (alpha + x)).ln() + (k / 2.0 + 1.0 / p) * ((p * x + beta) / beta).ln()
}

/// Closed-form log-ratio `‖P*_α f_{x,k}‖_{q,β} / ‖f_{x,k}‖_{q,β}` for the
/// adjoint on the dual space; `+∞` when `P*f_{x,k} ∉ L^q(λ_β)`. For `p = 1`
/// the dual exponent is `∞` and sup norms are used.
pub fn adjoint_log_ratio(p: f64, alpha: f64, beta: f64, x: f64, k: usize) -> f64 {
    let kf = k as f64;
    if p == 1.0 {
        if beta >= alpha {
            return f64::INFINITY;
        }
        // sup |z|^k e^{-c|z|²} = (k/(2c))^{k/2} e^{-k/2}
        let log_sup = |c: f64| if k == 0 { 0.0 } else { kf / 2.0 * (kf / (2.0 * c)).ln() - kf / 2.0 };
        return (kf + 1.0) * (alpha / (beta + x)).ln() + log_sup(alpha - beta) - log_sup(x);
    }
    let q = p / (p - 1.0);
    let den = beta - q * (beta - alpha);
    if den <= 0.0 {
        return f64::INFINITY;
    }
    (kf + 1.0) * (alpha / (beta + x)).ln() + (kf / 2.0 + 1.0 / q) * ((q * x + beta) / den).ln()
}

/// One line of a threshold probe.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbeRow {
    pub k: usize,
    pub x: f64,
    pub projection_ratio: f64,
    pub adjoint_ratio: f64,
    /// `max(projection_ratio, adjoint_ratio)`.
    pub ratio: f64,
}

/// Bounded/unbounded verdict for `P_α` on `L^p(λ_β)` from the ratio
/// sequences of the `f_{x,k}` bank.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorProbeReport {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    /// The inequality the verdict is compared against.
    pub criterion: String,
    pub balanced: bool,
    pub rows: Vec<ProbeRow>,
    /// Largest ratio growth over the last doubling of `k`.
    pub growth: f64,
    pub bounded: bool,
}

impl OperatorProbeReport {
    /// Expected verdict: bounded iff `p ≥ 1` and `pα = 2β`.
    pub fn expected_bounded(&self) -> bool {
        self.p >= 1.0 && self.balanced
    }

    pub fn verdict_correct(&self) -> bool {
        self.bounded == self.expected_bounded()
    }
}

/// Growth factor per doubling of `k` above which a ratio sequence counts
/// as unbounded.
pub const GROWTH_LIMIT: f64 = 1.05;

/// Default `x` values of the probe bank.
pub fn default_probe_xs() -> Vec<f64> {
    vec![0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
}

/// Default `k` values (successive doublings up to 40).
pub fn default_probe_ks() -> Vec<usize> {
    vec![5, 10, 20, 40]
}

pub fn threshold_probe(p: f64, alpha: f64, beta: f64, xs: &[f64], ks: &[usize]) -> Result<OperatorProbeReport> {
    check_alpha(alpha)?;
    check_alpha(beta)?;
    if ks.len() < 2 || xs.is_empty() {
        return Err(Error::Param("threshold probe needs at least two k values and one x".into()));
    }
    let bal = balanced(p, alpha, beta);
    let criterion = "p*alpha = 2*beta and p >= 1".to_string();
    let mut rows = Vec::new();
    let mut growth = 0.0f64;
    let (k_prev, k_last) = (ks[ks.len() - 2], ks[ks.len() - 1]);
    for &x in xs {
        let mut lr_prev = 0.0;
        for &k in ks {
            let (lp, la) = if p >= 1.0 {
                (projection_log_ratio(p, alpha, beta, x, k), adjoint_log_ratio(p, alpha, beta, x, k))
            } else {
                (f64::INFINITY, f64::INFINITY)
            };
            let lr = lp.max(la);
            rows.push(ProbeRow { k, x, projection_ratio: lp.exp(), adjoint_ratio: la.exp(), ratio: lr.exp() });
            if k == k_prev {
                lr_prev = lr;
            }
            if k == k_last {
                let g = if lr.is_infinite() {
                    f64::INFINITY
                } else {
                    // normalize to one doubling
                    let doublings = (k_last as f64 / k_prev as f64).log2();
                    ((lr - lr_prev) / doublings).exp()
                };
                growth = growth.max(g);
            }
        }
    }
    let bounded = p >= 1.0 && growth < GROWTH_LIMIT;
    Ok(OperatorProbeReport { p, alpha, beta, criterion, balanced: bal, rows, growth, bounded })
}

/// Preimage `g(z) = (α/γ)f((α/γ)z)e^{(β−α)|z|²}` with `P_α g = f`, valid when
/// `α²/γ = 2α − β`.
pub fn range_preimage(f: &FockElement, alpha: f64, beta: f64, gamma: f64) -> Result<SliceFunction> {
    check_alpha(alpha)?;
    check_alpha(beta)?;
    check_alpha(gamma)?;
    let lhs = alpha * alpha / gamma;
    let rhs = 2.0 * alpha - beta;
    if (lhs - rhs).abs() > 1e-12 * lhs.abs().max(rhs.abs()).max(1.0) {
        return Err(Error::Param(format!("range preimage needs α²/γ = 2α−β, got {lhs} vs {rhs}")));
    }
    let c = alpha / gamma;
    let mut s = 1.0;
    let coeffs = f
        .coeffs()
        .iter()
        .map(|a| {
            let v = *a * s;
            s *= c;
            v
        })
        .collect();
    Ok(weighted_polynomial(RegularPolynomial::new(coeffs), c, alpha - beta))
}
