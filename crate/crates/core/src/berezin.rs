//! The slice-wise Berezin transform `B_α f(z) = (α/π)∫_{ℂ_I} e^{-α|w−z|²} f(w) dm`,
//! its semigroup structure, iterates, the slice Laplacian and fixed points.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{check_alpha, SliceRule};
use crate::quat::{Quat, Unit};
use crate::slice::{extend_from_slice, SliceFunction, Tag};

/// Weight `α`, the Gauss–Hermite rule of the convolution and the
/// configuration of the integrability surrogate.
#[derive(Clone, Debug)]
pub struct BerezinContext {
    pub alpha: f64,
    pub rule: SliceRule,
    /// Exponent of the integrability condition.
    pub ip_p: f64,
    /// Slice points `(x, y)` of the unit `i` where integrability is checked.
    pub ip_probes: Vec<(f64, f64)>,
    /// Largest admissible share of the outermost node ring.
    pub tail_tol: f64,
}

impl BerezinContext {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(BerezinContext {
            alpha,
            rule: SliceRule::gauss_hermite(32),
            ip_p: 1.0,
            ip_probes: vec![(0.0, 0.0), (1.5, 0.0), (-0.7, 1.2), (0.4, 2.5)],
            tail_tol: 1e-6,
        })
    }

    pub fn with_nodes(mut self, n: usize) -> Self {
        self.rule = SliceRule::gauss_hermite(n.max(1));
        self
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(BerezinContext { alpha, ..self.clone() })
    }

    /// Offsets `(s, t, weight)` of the convolution kernel, weights summing to one.
    pub fn offsets(&self) -> Vec<(f64, f64, f64)> {
        self.rule.nodes(self.alpha)
    }

    /// Integrability surrogate: `∫_{ℂ_I} |K_α(z,w)|²|f(w)|^p dλ_{α,I}(w)` is
    /// finite at each probe of one slice.
    ///
    /// On the slice of `z` this equals `e^{α|z|²}·(α/π)∫ e^{-α|w−z|²}|f|^p dm`,
    /// so the check is a window test of the Gaussian convolution of `|f|^p`.
    pub fn check_integrability(&self, f: &SliceFunction) -> Result<()> {
        let nodes = self.offsets();
        let n = self.rule.len();
        for &(x, y) in &self.ip_probes {
            let (mut all, mut outer) = (0.0, 0.0);
            for (idx, (s, t, w)) in nodes.iter().enumerate() {
                let v = w * f.eval_on(Unit::I, x + s, y + t).norm().powf(self.ip_p);
                all += v;
                let (a, b) = (idx / n, idx % n);
                if a == 0 || b == 0 || a == n - 1 || b == n - 1 {
                    outer += v;
                }
            }
            let share = if all > 0.0 { outer / all } else { 0.0 };
            if !all.is_finite() || !(share <= self.tail_tol) {
                return Err(Error::Integrability {
                    probe: format!("({x}, {y})"),
                    detail: format!("outer-ring share {share:e} of the kernel integral"),
                });
            }
        }
        Ok(())
    }
}

fn convolve_stem(f: &SliceFunction, nodes: &[(f64, f64, f64)], x: f64, y: f64) -> (Quat, Quat) {
    let (mut a, mut b) = (Quat::ZERO, Quat::ZERO);
    for &(s, t, w) in nodes {
        let (fa, fb) = f.stem(x + s, y + t);
        a += fa * w;
        b += fb * w;
    }
    (a, b)
}

/// The Berezin transform `f̃ = B_α f` as a slice function whose stem is the
/// Gaussian convolution of the stem of `f`.
pub fn berezin(f: &SliceFunction, ctx: &BerezinContext) -> Result<SliceFunction> {
    ctx.check_integrability(f)?;
    Ok(berezin_unchecked(f, ctx))
}

fn berezin_unchecked(f: &SliceFunction, ctx: &BerezinContext) -> SliceFunction {
    let nodes = ctx.offsets();
    let g = f.clone();
    let tag = if f.is_tagged_intrinsic() { Tag::Intrinsic } else { Tag::Generic };
    SliceFunction::from_stem(tag, move |x, y| convolve_stem(&g, &nodes, x, y))
}

/// `B_α f` at one point, computed directly on the slice of the point.
pub fn berezin_at(f: &SliceFunction, ctx: &BerezinContext, unit: Unit, x: f64, y: f64) -> Quat {
    ctx.offsets()
        .into_iter()
        .fold(Quat::ZERO, |acc, (s, t, w)| acc + f.eval_on(unit, x + s, y + t) * w)
}

/// `max |B_α B_β f − B_{αβ/(α+β)} f|` over the probes.
pub fn semigroup_check(f: &SliceFunction, ctx: &BerezinContext, beta: f64, probes: &[Quat]) -> Result<f64> {
    let alpha = ctx.alpha;
    let cb = ctx.with_alpha(beta)?;
    let cc = ctx.with_alpha(alpha * beta / (alpha + beta))?;
    let nested = berezin(&berezin(f, &cb)?, ctx)?;
    let direct = berezin(f, &cc)?;
    Ok(probes.iter().map(|q| (nested.eval(*q) - direct.eval(*q)).norm()).fold(0.0, f64::max))
}

/// `B_α^n f`, through `B_α^n = B_{α/n}`.
pub fn iterate(f: &SliceFunction, n: usize, ctx: &BerezinContext) -> Result<SliceFunction> {
    if n == 0 {
        return Ok(f.clone());
    }
    berezin(f, &ctx.with_alpha(ctx.alpha / n as f64)?)
}

/// Lipschitz quotients of `B_α^n f` against `√2·2√(α/π)·‖f‖_∞/√n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LipschitzReport {
    pub n: usize,
    pub max_ratio: f64,
    pub bound: f64,
}

impl LipschitzReport {
    pub fn holds(&self) -> bool {
        self.max_ratio <= self.bound
    }
}

/// `sup_norm` is `‖f‖_∞`; each pair must lie in one slice.
pub fn iterate_lipschitz_probe(
    f: &SliceFunction,
    sup_norm: f64,
    n: usize,
    ctx: &BerezinContext,
    pairs: &[(Quat, Quat)],
) -> Result<LipschitzReport> {
    if n == 0 {
        return Err(Error::Param("iterate count must be positive".into()));
    }
    let g = iterate(f, n, ctx)?;
    let mut max_ratio = 0.0f64;
    for (z, w) in pairs {
        let d = (*z - *w).norm();
        if d == 0.0 {
            continue;
        }
        max_ratio = max_ratio.max((g.eval(*z) - g.eval(*w)).norm() / d);
    }
    let c = 2.0 * (ctx.alpha / std::f64::consts::PI).sqrt();
    let bound = std::f64::consts::SQRT_2 * c * sup_norm / (n as f64).sqrt();
    Ok(LipschitzReport { n, max_ratio, bound })
}

/// `(∂²_x + ∂²_y) f` on the slice of `q` by central differences of step `h`.
pub fn slice_laplacian(f: &SliceFunction, q: Quat, h: f64) -> Result<Quat> {
    let s = crate::quat::slice_decompose(q);
    if !(h >= 1e-5 * s.x.abs().max(s.y).max(1.0)) || !h.is_finite() {
        return Err(Error::Step(h));
    }
    let v = |dx: f64, dy: f64| f.eval_on(s.unit, s.x + dx, s.y + dy);
    Ok((v(h, 0.0) + v(-h, 0.0) + v(0.0, h) + v(0.0, -h) - v(0.0, 0.0) * 4.0) * (1.0 / (h * h)))
}

/// `f(x+yI) = e^{c(x+y)}` with `c = √(2απ)(1+I)`, extended from the slice of
/// `unit`. Its exponents satisfy `a² + b² = 8απI`, so `B_α f = f` while
/// `Δ f = 8απI·f`.
pub fn exponential_fixed_point(alpha: f64, unit: Unit) -> SliceFunction {
    let r = (2.0 * alpha * std::f64::consts::PI).sqrt();
    extend_from_slice(
        move |q| {
            let t = r * (q.re + q.dot(unit.quat()));
            // e^{t(1+I)} = e^t (cos t + I sin t)
            (unit.quat() * t.sin() + Quat::real(t.cos())) * t.exp()
        },
        unit,
    )
}

/// Verdict for one fixed-point scenario.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedPointCase {
    pub name: String,
    /// `max |f̃ − f| / max(1, |f|)` over the probes.
    pub deviation: f64,
    /// `max |Δ f|` over the probes.
    pub laplacian: f64,
    /// Oscillation `max − min` of `Re B^n f` on the probes for `n = 1, 4, 16`;
    /// `None` where `B_{α/n}` leaves the quadrature window.
    pub oscillation: Vec<Option<f64>>,
    pub fixed: bool,
    pub verdict: String,
}

/// Runs the constant, bounded non-constant, harmonic and `8απI` exponential
/// cases at `probes`.
pub fn fixed_point_suite(ctx: &BerezinContext, probes: &[Quat]) -> Result<Vec<FixedPointCase>> {
    let alpha = ctx.alpha;
    let cases: Vec<(&str, SliceFunction)> = vec![
        ("constant", SliceFunction::constant(Quat::real(5.0))),
        ("bounded-cosine", SliceFunction::intrinsic(|x, _| (x.cos(), 0.0))),
        ("harmonic-real-part", SliceFunction::intrinsic(|x, _| (x, 0.0))),
        ("exponential-8-alpha-pi", exponential_fixed_point(alpha, Unit::I)),
    ];
    let h = 1e-3;
    let mut out = Vec::new();
    for (name, f) in cases {
        let ft = berezin(&f, ctx)?;
        let (mut dev, mut lap) = (0.0f64, 0.0f64);
        for q in probes {
            let v = f.eval(*q);
            dev = dev.max((ft.eval(*q) - v).norm() / v.norm().max(1.0));
            lap = lap.max(slice_laplacian(&f, *q, h * q.norm().max(1.0))?.norm());
        }
        let mut oscillation = Vec::new();
        for n in [1usize, 4, 16] {
            let Ok(g) = iterate(&f, n, ctx) else {
                oscillation.push(None);
                continue;
            };
            let vals: Vec<f64> = probes.iter().map(|q| g.eval(*q).re).collect();
            let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
            oscillation.push(Some(hi - lo));
        }
        let fixed = dev < 1e-6;
        // finite differences of step h carry an O(h²) error on smooth data
        let harmonic = lap < 1e-4 * (1.0 + 8.0 * alpha * std::f64::consts::PI);
        let verdict = match (fixed, harmonic) {
            (true, true) if oscillation[0].is_some_and(|o| o < 1e-12) => "fixed, constant",
            (true, true) => "fixed, harmonic",
            (true, false) => "fixed, not harmonic",
            (false, _) => "not fixed",
        };
        out.push(FixedPointCase { name: name.into(), deviation: dev, laplacian: lap, oscillation, fixed, verdict: verdict.into() });
    }
    Ok(out)
}

/// Growth classes probed for `B_α f`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum GrowthClass {
    /// Bounded slice functions.
    LinfS,
    /// Vanishing at infinity (on the probed window).
    C0,
    /// `∫ |B f|^p dV < ∞` (on the probed window).
    LpV(f64),
}

/// Profile of `B_α f` on rings `|z| = R` of three slices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassVerdict {
    pub class: GrowthClass,
    /// `(R, max |B f| on the ring)`, or ring masses of `|B f|^p` for `LpV`.
    pub profile: Vec<(f64, f64)>,
    pub member: bool,
}

/// Membership of `B_α f` in a growth class, tested on rings up to `r_max`;
/// reported as a window verdict, never as a limit claim.
pub fn growth_class_probe(f: &SliceFunction, ctx: &BerezinContext, class: GrowthClass, r_max: f64) -> Result<ClassVerdict> {
    let g = berezin(f, ctx)?;
    let n_rings = 8;
    let n_ang = 48;
    let units = [Unit::I, Unit::J, Unit::K];
    let mut profile = Vec::new();
    for m in 0..=n_rings {
        let rad = r_max * m as f64 / n_rings as f64;
        let mut mx = 0.0f64;
        let mut mean_p = 0.0;
        for u in units {
            for a in 0..n_ang {
                let th = std::f64::consts::PI * a as f64 / (n_ang - 1) as f64;
                let v = g.eval(u.point(rad * th.cos(), rad * th.sin())).norm();
                mx = mx.max(v);
                if let GrowthClass::LpV(p) = class {
                    mean_p += v.powf(p) / (3 * n_ang) as f64;
                }
            }
        }
        match class {
            GrowthClass::LpV(_) => profile.push((rad, mean_p * 2.0 * std::f64::consts::PI * rad * r_max / n_rings as f64)),
            _ => profile.push((rad, mx)),
        }
    }
    let peak = profile.iter().map(|r| r.1).fold(0.0, f64::max);
    let inner = profile.iter().filter(|r| r.0 <= r_max / 2.0).map(|r| r.1).fold(0.0, f64::max);
    let last = profile.last().map_or(0.0, |r| r.1);
    let member = match class {
        GrowthClass::LinfS => peak.is_finite() && peak <= 1.25 * inner + 1e-12,
        GrowthClass::C0 => last <= 1e-3 * peak.max(f64::MIN_POSITIVE),
        GrowthClass::LpV(_) => {
            let total: f64 = profile.iter().map(|r| r.1).sum();
            total.is_finite() && last <= 1e-3 * total.max(f64::MIN_POSITIVE)
        }
    };
    Ok(ClassVerdict { class, profile, member })
}

/// `max_z (B_α f(z) − (α/β)B_β f(z))` for real `f ≥ 0` and `0 < β < α`;
/// nonpositive when the monotonicity inequality holds.
pub fn monotonicity_gap(f: &SliceFunction, ctx: &BerezinContext, beta: f64, probes: &[Quat]) -> Result<f64> {
    if !(beta > 0.0 && beta < ctx.alpha) {
        return Err(Error::Param(format!("monotonicity needs 0 < β < α, got β = {beta}")));
    }
    let ga = berezin(f, ctx)?;
    let gb = berezin(f, &ctx.with_alpha(beta)?)?;
    let r = ctx.alpha / beta;
    Ok(probes.iter().map(|q| ga.eval(*q).re - r * gb.eval(*q).re).fold(f64::NEG_INFINITY, f64::max))
}

/// `max |B_α f − f|` over the probes for each listed `α`.
pub fn c0_limit(f: &SliceFunction, ctx: &BerezinContext, alphas: &[f64], probes: &[Quat]) -> Result<Vec<f64>> {
    alphas
        .iter()
        .map(|&a| {
            let g = berezin(f, &ctx.with_alpha(a)?)?;
            Ok(probes.iter().map(|q| (g.eval(*q) - f.eval(*q)).norm()).fold(0.0, f64::max))
        })
        .collect()
}

/// Points `x + yI` with `|x|, y ≤ radius` on a small grid of the slices
/// `i`, `j`, `k` and `(i+j+k)/√3`, plus real points.
pub fn default_probes(radius: f64) -> Vec<Quat> {
    let units = [Unit::I, Unit::J, Unit::K, Unit::new([1.0, 1.0, 1.0]).expect("nonzero")];
    let steps = [-1.0, -0.35, 0.2, 0.75];
    let mut out = Vec::new();
    for &sx in &steps {
        out.push(Quat::real(sx * radius));
        for u in units {
            for sy in [0.3, 0.8] {
                out.push(u.point(sx * radius, sy * radius));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_moment() {
        let ctx = BerezinContext::new(2.0).unwrap();
        let f = SliceFunction::intrinsic(|x, y| (x * x + y * y, 0.0));
        let g = berezin(&f, &ctx).unwrap();
        let q = Quat::new(0.3, 0.0, 1.1, 0.0);
        assert!((g.eval(q).re - (q.norm_sqr() + 0.5)).abs() < 1e-12);
    }

    #[test]
    fn laplacian_of_norm_square() {
        let f = SliceFunction::intrinsic(|x, y| (x * x + y * y, 0.0));
        let l = slice_laplacian(&f, Quat::new(0.5, 0.0, 0.0, 1.0), 1e-3).unwrap();
        assert!((l.re - 4.0).abs() < 1e-6);
        assert!(matches!(slice_laplacian(&f, Quat::ONE, 1e-9), Err(Error::Step(_))));
    }

    #[test]
    fn exponential_is_fixed() {
        let ctx = BerezinContext::new(1.0).unwrap();
        let f = exponential_fixed_point(1.0, Unit::J);
        let g = berezin(&f, &ctx).unwrap();
        for q in default_probes(1.0) {
            let v = f.eval(q);
            assert!((g.eval(q) - v).norm() / v.norm() < 1e-6, "{q}");
        }
    }

    #[test]
    fn growing_function_fails_integrability() {
        let ctx = BerezinContext::new(1.0).unwrap();
        let f = SliceFunction::intrinsic(|x, y| ((2.0 * (x * x + y * y)).exp(), 0.0));
        assert!(matches!(berezin(&f, &ctx), Err(Error::Integrability { .. })));
    }
}
