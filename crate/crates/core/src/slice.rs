//! Slice functions `f(x+yI) = a(x,y) + I·b(x,y)` stored through their stem
//! pair, slice-regular polynomials with right coefficients, the
//! representation formula, extension from one slice, splitting, the
//! ⋆-product and intrinsicness predicates.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quat::{
    check_orthogonal, join_in_frame, orthogonal_unit, slice_decompose, split_in_frame, Quat, Unit,
};

/// Stem pair `(a, b)` evaluated at `(x, y)`; `a` even and `b` odd in `y`.
pub type StemFn = dyn Fn(f64, f64) -> (Quat, Quat) + Send + Sync;

/// What is known about a slice function by construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tag {
    /// A slice-regular polynomial `Σ qⁿ aₙ`.
    RegularPoly,
    /// Real-valued stem: preserves every slice.
    Intrinsic,
    Generic,
}

/// A slice function on ℍ.
#[derive(Clone)]
pub struct SliceFunction {
    stem: Arc<StemFn>,
    tag: Tag,
    poly: Option<Arc<RegularPolynomial>>,
    gauss_rate: f64,
}

impl fmt::Debug for SliceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SliceFunction")
            .field("tag", &self.tag)
            .field("poly", &self.poly)
            .field("gauss_rate", &self.gauss_rate)
            .finish()
    }
}

impl SliceFunction {
    pub fn from_stem<F>(tag: Tag, stem: F) -> Self
    where
        F: Fn(f64, f64) -> (Quat, Quat) + Send + Sync + 'static,
    {
        SliceFunction { stem: Arc::new(stem), tag, poly: None, gauss_rate: 0.0 }
    }

    /// Slice function with a real-valued stem.
    pub fn intrinsic<F>(stem: F) -> Self
    where
        F: Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static,
    {
        Self::from_stem(Tag::Intrinsic, move |x, y| {
            let (a, b) = stem(x, y);
            (Quat::real(a), Quat::real(b))
        })
    }

    pub fn constant(c: Quat) -> Self {
        RegularPolynomial::new(vec![c]).into()
    }

    /// `q ↦ q`.
    pub fn identity() -> Self {
        RegularPolynomial::new(vec![Quat::ZERO, Quat::ONE]).into()
    }

    /// `e^{-rate|q|²}·qᵏ`, the Gaussian-modulated monomial.
    pub fn gauss_mod(rate: f64, k: usize) -> Self {
        let p = RegularPolynomial::monomial(k, Quat::ONE);
        let mut f = SliceFunction::from_stem(Tag::Intrinsic, move |x, y| {
            let g = (-rate * (x * x + y * y)).exp();
            let (a, b) = p.stem(x, y);
            (a * g, b * g)
        });
        f.gauss_rate = rate;
        f
    }

    /// Records that `f = e^{-rate|q|²}·h` with `h` of at most polynomial
    /// growth, so quadrature can absorb the Gaussian factor.
    pub fn with_gauss_rate(mut self, rate: f64) -> Self {
        self.gauss_rate = rate;
        self
    }

    pub fn gauss_rate(&self) -> f64 {
        self.gauss_rate
    }

    pub fn tag(&self) -> Tag {
        self.tag
    }

    pub fn poly(&self) -> Option<&RegularPolynomial> {
        self.poly.as_deref()
    }

    /// True when the stem is real-valued by construction.
    pub fn is_tagged_intrinsic(&self) -> bool {
        match self.tag {
            Tag::Intrinsic => true,
            Tag::RegularPoly => self.poly.as_ref().is_some_and(|p| p.has_real_coeffs()),
            Tag::Generic => false,
        }
    }

    pub fn stem(&self, x: f64, y: f64) -> (Quat, Quat) {
        if y == 0.0 {
            return ((self.stem)(x, 0.0).0, Quat::ZERO);
        }
        (self.stem)(x, y)
    }

    pub fn eval(&self, q: Quat) -> Quat {
        if let Some(p) = &self.poly {
            return p.eval(q);
        }
        let s = slice_decompose(q);
        let (a, b) = self.stem(s.x, s.y);
        a + s.unit.quat() * b
    }

    /// Value at `x + y·unit` for any real `y`.
    pub fn eval_on(&self, unit: Unit, x: f64, y: f64) -> Quat {
        if let Some(p) = &self.poly {
            return p.eval(unit.point(x, y));
        }
        let (a, b) = self.stem(x, y);
        a + unit.quat() * b
    }

    /// Pointwise sum (stem-wise).
    pub fn add(&self, g: &SliceFunction) -> SliceFunction {
        let (f1, f2) = (self.clone(), g.clone());
        let tag = merge_tag(self, g);
        let mut out = SliceFunction::from_stem(tag, move |x, y| {
            let (a1, b1) = f1.stem(x, y);
            let (a2, b2) = f2.stem(x, y);
            (a1 + a2, b1 + b2)
        });
        if let (Some(p), Some(r)) = (self.poly(), g.poly()) {
            out = p.add(r).into();
        }
        out
    }

    /// `q ↦ f(q)·c` (constant on the right).
    pub fn mul_right(&self, c: Quat) -> SliceFunction {
        if let Some(p) = self.poly() {
            return p.mul_right(c).into();
        }
        let f = self.clone();
        let tag = if c.imag_norm() == 0.0 { self.tag } else { Tag::Generic };
        let mut out = SliceFunction::from_stem(tag, move |x, y| {
            let (a, b) = f.stem(x, y);
            (a * c, b * c)
        });
        out.gauss_rate = self.gauss_rate;
        out
    }

    /// `q ↦ s·f(q)` for real `s`.
    pub fn scale(&self, s: f64) -> SliceFunction {
        let mut out = self.mul_right(Quat::real(s));
        out.gauss_rate = self.gauss_rate;
        out
    }

    /// The slice function whose stem is `(conj a, conj b)`; it equals the
    /// pointwise conjugate for intrinsic `f`.
    pub fn stem_conj(&self) -> SliceFunction {
        let f = self.clone();
        let tag = if self.is_tagged_intrinsic() { Tag::Intrinsic } else { Tag::Generic };
        SliceFunction::from_stem(tag, move |x, y| {
            let (a, b) = f.stem(x, y);
            (a.conj(), b.conj())
        })
    }

    /// Largest parity violation `|a(x,-y)-a(x,y)|`, `|b(x,-y)+b(x,y)|` on the grid.
    pub fn parity_defect(&self, grid: &SampleGrid) -> f64 {
        let mut worst: f64 = 0.0;
        for &x in &grid.xs {
            for &y in &grid.ys {
                let (a1, b1) = (self.stem)(x, y);
                let (a2, b2) = (self.stem)(x, -y);
                worst = worst.max(a1.max_abs_diff(a2)).max((b1 + b2).norm());
            }
        }
        worst
    }
}

fn merge_tag(f: &SliceFunction, g: &SliceFunction) -> Tag {
    if f.is_tagged_intrinsic() && g.is_tagged_intrinsic() {
        Tag::Intrinsic
    } else {
        Tag::Generic
    }
}

/// Slice-regular polynomial `f(q) = Σ qⁿ aₙ` with right coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularPolynomial {
    pub coeffs: Vec<Quat>,
}

impl RegularPolynomial {
    pub fn new(coeffs: Vec<Quat>) -> Self {
        RegularPolynomial { coeffs }
    }

    /// `qⁿ·c`.
    pub fn monomial(n: usize, c: Quat) -> Self {
        let mut coeffs = vec![Quat::ZERO; n + 1];
        coeffs[n] = c;
        RegularPolynomial { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn has_real_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.imag_norm() == 0.0)
    }

    /// Horner evaluation `a₀ + q(a₁ + q(a₂ + …))`.
    pub fn eval(&self, q: Quat) -> Quat {
        let mut acc = Quat::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = q * acc + *c;
        }
        acc
    }

    /// Stem pair: with `(x+iy)ⁿ = Aₙ + iBₙ`, `a = Σ Aₙaₙ`, `b = Σ Bₙaₙ`.
    pub fn stem(&self, x: f64, y: f64) -> (Quat, Quat) {
        let z = Complex64::new(x, y);
        let mut p = Complex64::new(1.0, 0.0);
        let (mut a, mut b) = (Quat::ZERO, Quat::ZERO);
        for c in &self.coeffs {
            a += *c * p.re;
            b += *c * p.im;
            p *= z;
        }
        (a, b)
    }

    pub fn add(&self, other: &RegularPolynomial) -> RegularPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &Vec<Quat>, i: usize| v.get(i).copied().unwrap_or(Quat::ZERO);
        RegularPolynomial::new((0..n).map(|i| get(&self.coeffs, i) + get(&other.coeffs, i)).collect())
    }

    pub fn mul_right(&self, c: Quat) -> RegularPolynomial {
        RegularPolynomial::new(self.coeffs.iter().map(|a| *a * c).collect())
    }

    /// ⋆-product: `(Σ qⁿaₙ) ⋆ (Σ qᵐbₘ) = Σ q^{n+m} aₙbₘ`.
    pub fn star(&self, other: &RegularPolynomial) -> RegularPolynomial {
        let mut out = vec![Quat::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (n, a) in self.coeffs.iter().enumerate() {
            for (m, b) in other.coeffs.iter().enumerate() {
                out[n + m] += *a * *b;
            }
        }
        RegularPolynomial::new(out)
    }
}

impl From<RegularPolynomial> for SliceFunction {
    fn from(p: RegularPolynomial) -> SliceFunction {
        let p = Arc::new(p);
        let q = p.clone();
        SliceFunction {
            stem: Arc::new(move |x, y| q.stem(x, y)),
            tag: Tag::RegularPoly,
            poly: Some(p),
            gauss_rate: 0.0,
        }
    }
}

/// Representation formula: recovers `f(x+yI)` from `f(x+yJ)` and `f(x-yJ)`.
pub fn represent_from_slice(f_plus: Quat, f_minus: Quat, j: Unit, i: Unit) -> Quat {
    let ij = i.quat() * j.quat();
    (Quat::ONE - ij) * f_plus * 0.5 + (Quat::ONE + ij) * f_minus * 0.5
}

/// Extends a function given on the slice ℂ_I to a slice function on ℍ.
///
/// The closure receives points `x + yI` of the slice.
pub fn extend_from_slice<F>(f: F, unit: Unit) -> SliceFunction
where
    F: Fn(Quat) -> Quat + Send + Sync + 'static,
{
    SliceFunction::from_stem(Tag::Generic, move |x, y| {
        let fp = f(unit.point(x, y));
        let fm = f(unit.point(x, -y));
        ((fp + fm) * 0.5, unit.quat() * (fm - fp) * 0.5)
    })
}

/// Splitting on ℂ_I: `f(x+yI) = F + G·J` with `F, G ∈ ℂ_I`.
pub fn split_at(f: &SliceFunction, i: Unit, j: Unit, z: Complex64) -> Result<(Complex64, Complex64)> {
    check_orthogonal(i, j)?;
    Ok(split_in_frame(f.eval_on(i, z.re, z.im), i, j))
}

/// ⋆-product through the stem algebra `(a₁a₂ − b₁b₂, a₁b₂ + b₁a₂)`.
pub fn star_product(f: &SliceFunction, g: &SliceFunction) -> SliceFunction {
    let (f1, g1) = (f.clone(), g.clone());
    SliceFunction::from_stem(merge_tag(f, g), move |x, y| {
        let (a1, b1) = f1.stem(x, y);
        let (a2, b2) = g1.stem(x, y);
        (a1 * a2 - b1 * b2, a1 * b2 + b1 * a2)
    })
}

/// ⋆-product on one slice through the splitting:
/// `[F₀G₀ − F₁·conj(G₁(z̄))] + [F₀G₁ + F₁·conj(G₀(z̄))]·J`.
pub fn star_slicewise(f: &SliceFunction, g: &SliceFunction, i: Unit, z: Complex64) -> Quat {
    let j = orthogonal_unit(i);
    let (f0, f1) = split_in_frame(f.eval_on(i, z.re, z.im), i, j);
    let (g0, g1) = split_in_frame(g.eval_on(i, z.re, z.im), i, j);
    let (g0b, g1b) = split_in_frame(g.eval_on(i, z.re, -z.im), i, j);
    join_in_frame(f0 * g0 - f1 * g1b.conj(), f0 * g1 + f1 * g0b.conj(), i, j)
}

/// Sample points `(x, y)` with `y > 0` used by grid predicates.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl Default for SampleGrid {
    fn default() -> Self {
        SampleGrid { xs: vec![-1.7, -0.6, 0.0, 0.45, 1.3], ys: vec![0.3, 0.9, 1.6] }
    }
}

impl SampleGrid {
    pub fn uniform(half_width: f64, n: usize) -> Self {
        let step = 2.0 * half_width / (n.max(2) - 1) as f64;
        let xs: Vec<f64> = (0..n.max(2)).map(|i| -half_width + step * i as f64).collect();
        let ys = xs.iter().copied().filter(|y| *y > 0.0).collect();
        SampleGrid { xs, ys }
    }
}

/// Criterion used to decide intrinsicness on a grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IntrinsicMode {
    /// `f(ℂ_I) ⊆ ℂ_I` on two distinct slices.
    TwoSlices(Unit, Unit),
    /// `f(z̄) = conj f(z)` on three linearly independent slices.
    ThreeConj(Unit, Unit, Unit),
    /// Both of the above on a single slice.
    OneSliceConj(Unit),
    /// Real-valued stem components.
    StemReal,
}

impl IntrinsicMode {
    pub fn two_slices() -> Self {
        IntrinsicMode::TwoSlices(Unit::I, Unit::J)
    }
    pub fn three_conj() -> Self {
        IntrinsicMode::ThreeConj(Unit::I, Unit::J, Unit::K)
    }
    pub fn one_slice_conj() -> Self {
        IntrinsicMode::OneSliceConj(Unit::I)
    }
    pub fn all_default() -> [IntrinsicMode; 4] {
        [Self::two_slices(), Self::three_conj(), Self::one_slice_conj(), IntrinsicMode::StemReal]
    }
}

/// Outcome of an intrinsicness test; `witness` is the worst sample when it fails.
#[derive(Clone, Debug, PartialEq)]
pub struct IntrinsicReport {
    pub holds: bool,
    pub max_violation: f64,
    pub witness: Option<Quat>,
}

/// Decides intrinsicness of `f` on `grid` with absolute tolerance `tol`.
pub fn is_intrinsic(f: &SliceFunction, mode: IntrinsicMode, grid: &SampleGrid, tol: f64) -> Result<IntrinsicReport> {
    let mut worst = 0.0f64;
    let mut witness = None;
    let mut note = |v: f64, at: Quat| {
        if v > worst {
            worst = v;
            witness = Some(at);
        }
    };
    let off_slice = |v: Quat, u: Unit| (v - Quat::real(v.re) - u.quat() * v.dot(u.quat())).norm();
    let conj_defect = |u: Unit, x: f64, y: f64| (f.eval_on(u, x, -y) - f.eval_on(u, x, y).conj()).norm();
    match mode {
        IntrinsicMode::TwoSlices(u1, u2) => {
            if (u1.dot(u2).abs() - 1.0).abs() < 1e-12 {
                return Err(Error::DependentUnits);
            }
            for u in [u1, u2] {
                for &x in &grid.xs {
                    for &y in &grid.ys {
                        for s in [1.0, -1.0] {
                            note(off_slice(f.eval_on(u, x, s * y), u), u.point(x, s * y));
                        }
                    }
                }
            }
        }
        IntrinsicMode::ThreeConj(u1, u2, u3) => {
            let (a, b, c) = (u1.vec(), u2.vec(), u3.vec());
            let det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0]);
            if det.abs() < 1e-8 {
                return Err(Error::DependentUnits);
            }
            for u in [u1, u2, u3] {
                for &x in &grid.xs {
                    for &y in &grid.ys {
                        note(conj_defect(u, x, y), u.point(x, y));
                    }
                }
            }
        }
        IntrinsicMode::OneSliceConj(u) => {
            for &x in &grid.xs {
                for &y in &grid.ys {
                    note(conj_defect(u, x, y), u.point(x, y));
                    note(off_slice(f.eval_on(u, x, y), u), u.point(x, y));
                }
            }
        }
        IntrinsicMode::StemReal => {
            for &x in &grid.xs {
                for &y in &grid.ys {
                    let (a, b) = f.stem(x, y);
                    note(a.imag_norm().max(b.imag_norm()), Quat::new(x, y, 0.0, 0.0));
                }
            }
        }
    }
    let holds = worst <= tol;
    Ok(IntrinsicReport { holds, max_violation: worst, witness: if holds { None } else { witness } })
}

/// Writes `f = h₀ + h₁·I + h₂·J + h₃·IJ` with intrinsic `h_ℓ`.
pub fn intrinsic_basis_decompose(f: &SliceFunction, i: Unit, j: Unit) -> Result<[SliceFunction; 4]> {
    check_orthogonal(i, j)?;
    let frame = [Quat::ONE, i.quat(), j.quat(), i.quat() * j.quat()];
    Ok(frame.map(|e| {
        let f = f.clone();
        SliceFunction::intrinsic(move |x, y| {
            let (a, b) = f.stem(x, y);
            (a.dot(e), b.dot(e))
        })
    }))
}
