//! Real quaternions, imaginary units, slice coordinates and quadrature on
//! the sphere of imaginary units.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss;

/// A real quaternion `re + i·i + j·j + k·k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quat {
    pub re: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl Quat {
    pub const ZERO: Quat = Quat::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quat = Quat::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quat = Quat::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quat = Quat::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quat = Quat::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(re: f64, i: f64, j: f64, k: f64) -> Self {
        Quat { re, i, j, k }
    }

    pub const fn real(re: f64) -> Self {
        Quat::new(re, 0.0, 0.0, 0.0)
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        Quat::new(c[0], c[1], c[2], c[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.re, self.i, self.j, self.k]
    }

    /// Builds `re + v` from a real part and an imaginary 3-vector.
    pub fn from_parts(re: f64, v: [f64; 3]) -> Self {
        Quat::new(re, v[0], v[1], v[2])
    }

    pub fn imag(self) -> [f64; 3] {
        [self.i, self.j, self.k]
    }

    pub fn conj(self) -> Self {
        Quat::new(self.re, -self.i, -self.j, -self.k)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.i * self.i + self.j * self.j + self.k * self.k
    }

    pub fn norm(self) -> f64 {
        // hypot-style scaling keeps tiny and huge values representable
        let m = self.re.abs().max(self.i.abs()).max(self.j.abs()).max(self.k.abs());
        if m == 0.0 || !m.is_finite() {
            return m;
        }
        (self / m).norm_sqr().sqrt() * m
    }

    pub fn imag_norm(self) -> f64 {
        Quat::new(0.0, self.i, self.j, self.k).norm()
    }

    /// Euclidean inner product on ℝ⁴.
    pub fn dot(self, other: Quat) -> f64 {
        self.re * other.re + self.i * other.i + self.j * other.j + self.k * other.k
    }

    pub fn inv(self) -> Option<Self> {
        let n2 = self.norm_sqr();
        (n2 > 0.0).then(|| self.conj() / n2)
    }

    pub fn scale(self, s: f64) -> Self {
        Quat::new(self.re * s, self.i * s, self.j * s, self.k * s)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.i.is_finite() && self.j.is_finite() && self.k.is_finite()
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_diff(self, other: Quat) -> f64 {
        let d = self - other;
        d.re.abs().max(d.i.abs()).max(d.j.abs()).max(d.k.abs())
    }

    /// Embeds `z = a + b·i` of ℂ as `a + b·unit` in the slice of `unit`.
    pub fn from_complex(z: Complex64, unit: Unit) -> Self {
        Quat::real(z.re) + unit.quat() * z.im
    }
}

impl fmt::Display for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.re, self.i, self.j, self.k)
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, o: Quat) -> Quat {
        Quat::new(self.re + o.re, self.i + o.i, self.j + o.j, self.k + o.k)
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, o: Quat) -> Quat {
        Quat::new(self.re - o.re, self.i - o.i, self.j - o.j, self.k - o.k)
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        Quat::new(-self.re, -self.i, -self.j, -self.k)
    }
}

impl Mul for Quat {
    type Output = Quat;
    fn mul(self, o: Quat) -> Quat {
        Quat::new(
            self.re * o.re - self.i * o.i - self.j * o.j - self.k * o.k,
            self.re * o.i + self.i * o.re + self.j * o.k - self.k * o.j,
            self.re * o.j - self.i * o.k + self.j * o.re + self.k * o.i,
            self.re * o.k + self.i * o.j - self.j * o.i + self.k * o.re,
        )
    }
}

impl Mul<f64> for Quat {
    type Output = Quat;
    fn mul(self, s: f64) -> Quat {
        self.scale(s)
    }
}

impl Mul<Quat> for f64 {
    type Output = Quat;
    fn mul(self, q: Quat) -> Quat {
        q.scale(self)
    }
}

impl Div<f64> for Quat {
    type Output = Quat;
    fn div(self, s: f64) -> Quat {
        self.scale(1.0 / s)
    }
}

impl AddAssign for Quat {
    fn add_assign(&mut self, o: Quat) {
        *self = *self + o;
    }
}

impl SubAssign for Quat {
    fn sub_assign(&mut self, o: Quat) {
        *self = *self - o;
    }
}

impl MulAssign<f64> for Quat {
    fn mul_assign(&mut self, s: f64) {
        *self = self.scale(s);
    }
}

impl From<f64> for Quat {
    fn from(x: f64) -> Self {
        Quat::real(x)
    }
}

impl Sum for Quat {
    fn sum<It: Iterator<Item = Quat>>(iter: It) -> Quat {
        iter.fold(Quat::ZERO, |a, b| a + b)
    }
}

/// Hamilton product (free-function form of `a * b`).
pub fn qmul(a: Quat, b: Quat) -> Quat {
    a * b
}

/// An imaginary unit: a purely imaginary quaternion of norm one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Unit(Quat);

impl Unit {
    pub const I: Unit = Unit(Quat::I);
    pub const J: Unit = Unit(Quat::J);
    pub const K: Unit = Unit(Quat::K);

    /// Normalizes a nonzero 3-vector into a unit.
    pub fn new(v: [f64; 3]) -> Result<Unit> {
        let q = Quat::from_parts(0.0, v);
        let n = q.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NotUnit { re: 0.0, im: n });
        }
        Ok(Unit(q / n))
    }

    /// Accepts `q` only if it is already a unit imaginary quaternion.
    pub fn from_quat(q: Quat) -> Result<Unit> {
        let im = q.imag_norm();
        if q.re.abs() > 1e-12 || (im - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnit { re: q.re.abs(), im });
        }
        Ok(Unit(Quat::from_parts(0.0, q.imag()) / im))
    }

    pub fn quat(self) -> Quat {
        self.0
    }

    pub fn vec(self) -> [f64; 3] {
        self.0.imag()
    }

    pub fn neg(self) -> Unit {
        Unit(-self.0)
    }

    /// Real inner product of the two unit vectors.
    pub fn dot(self, other: Unit) -> f64 {
        self.0.dot(other.0)
    }

    /// The point `x + y·unit` of the slice.
    pub fn point(self, x: f64, y: f64) -> Quat {
        Quat::new(x, y * self.0.i, y * self.0.j, y * self.0.k)
    }
}

impl From<Unit> for [f64; 3] {
    fn from(u: Unit) -> [f64; 3] {
        u.vec()
    }
}

impl TryFrom<[f64; 3]> for Unit {
    type Error = Error;
    fn try_from(v: [f64; 3]) -> Result<Unit> {
        Unit::new(v)
    }
}

/// Slice coordinates `q = x + y·unit` with `y ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlicePoint {
    pub x: f64,
    pub y: f64,
    pub unit: Unit,
}

impl SlicePoint {
    pub fn recompose(&self) -> Quat {
        self.unit.point(self.x, self.y)
    }
}

/// Splits `q` into real part, imaginary modulus and imaginary direction.
///
/// Real inputs get the unit `i`.
pub fn slice_decompose(q: Quat) -> SlicePoint {
    let y = q.imag_norm();
    let unit = if y > 0.0 {
        Unit(Quat::from_parts(0.0, q.imag()) / y)
    } else {
        Unit::I
    };
    SlicePoint { x: q.re, y, unit }
}

/// A deterministic unit orthogonal to `u`.
///
/// Takes the coordinate axis following the dominant component of `u`
/// (cyclically i → j → k → i), removes its projection on `u`, normalizes,
/// and flips the sign so that the first nonzero component is positive.
pub fn orthogonal_unit(u: Unit) -> Unit {
    let v = u.vec();
    let mut m = 0;
    for c in 1..3 {
        if v[c].abs() > v[m].abs() + 1e-15 {
            m = c;
        }
    }
    let mut p = [0.0; 3];
    p[(m + 1) % 3] = 1.0;
    let d = p[0] * v[0] + p[1] * v[1] + p[2] * v[2];
    let mut w = [p[0] - d * v[0], p[1] - d * v[1], p[2] - d * v[2]];
    let n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
    for c in &mut w {
        *c /= n;
    }
    if let Some(first) = w.iter().find(|c| c.abs() > 1e-14) {
        if *first < 0.0 {
            for c in &mut w {
                *c = -*c;
            }
        }
    }
    Unit(Quat::from_parts(0.0, w))
}

/// Checks that `j` is orthogonal to `i` (as imaginary vectors).
pub fn check_orthogonal(i: Unit, j: Unit) -> Result<()> {
    let d = i.dot(j);
    if d.abs() > 1e-10 {
        return Err(Error::NotOrthogonal(d));
    }
    Ok(())
}

/// Components of `q` in the frame `(1, I, J, IJ)` as two elements of ℂ_I:
/// `q = z1 + z2·J`.
pub fn split_in_frame(q: Quat, i: Unit, j: Unit) -> (Complex64, Complex64) {
    let k = i.quat() * j.quat();
    (
        Complex64::new(q.re, q.dot(i.quat())),
        Complex64::new(q.dot(j.quat()), q.dot(k)),
    )
}

/// Inverse of [`split_in_frame`].
pub fn join_in_frame(z1: Complex64, z2: Complex64, i: Unit, j: Unit) -> Quat {
    Quat::from_complex(z1, i) + Quat::from_complex(z2, i) * j.quat()
}

/// Quadrature rules for the normalized surface measure on the sphere of
/// imaginary units.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SphereRule {
    /// Six vertices of the octahedron, degree 3.
    Octahedron,
    /// Twelve vertices of the icosahedron, degree 5.
    Icosahedron,
    /// 26-point octahedrally symmetric rule, degree 7.
    Lebedev26,
    /// 50-point octahedrally symmetric rule, degree 11.
    #[default]
    Lebedev50,
    /// Gauss–Legendre in `cos θ` times a uniform grid in `φ`.
    ProductGaussLegendre { n_theta: usize, n_phi: usize },
}

impl SphereRule {
    /// Largest total degree of polynomials integrated exactly.
    pub fn degree(&self) -> usize {
        match *self {
            SphereRule::Octahedron => 3,
            SphereRule::Icosahedron => 5,
            SphereRule::Lebedev26 => 7,
            SphereRule::Lebedev50 => 11,
            SphereRule::ProductGaussLegendre { n_theta, n_phi } => {
                (2 * n_theta).saturating_sub(1).min(n_phi.saturating_sub(1))
            }
        }
    }

    /// True when the node set is invariant under `I ↦ -I` with equal weights.
    pub fn is_antipodal(&self) -> bool {
        match *self {
            SphereRule::ProductGaussLegendre { n_phi, .. } => n_phi % 2 == 0,
            _ => true,
        }
    }

    /// Units and weights; weights are nonnegative and sum to one.
    pub fn nodes(&self) -> Result<Vec<(Unit, f64)>> {
        let mut out = Vec::new();
        match *self {
            SphereRule::Octahedron => push_axes(&mut out, 1.0 / 6.0),
            SphereRule::Icosahedron => {
                let g = (1.0 + 5f64.sqrt()) / 2.0;
                for (a, b) in [(1.0, g), (1.0, -g), (-1.0, g), (-1.0, -g)] {
                    for v in [[0.0, a, b], [a, b, 0.0], [b, 0.0, a]] {
                        out.push((Unit::new(v)?, 1.0 / 12.0));
                    }
                }
            }
            SphereRule::Lebedev26 => {
                push_axes(&mut out, 1.0 / 21.0);
                push_edges(&mut out, 4.0 / 105.0);
                push_corners(&mut out, 9.0 / 280.0);
            }
            SphereRule::Lebedev50 => {
                push_axes(&mut out, 0.012698412698412698);
                push_edges(&mut out, 0.022574955908289243);
                push_corners(&mut out, 0.02109375);
                let l = 1.0 / 11f64.sqrt();
                let m = 3.0 / 11f64.sqrt();
                for c in 0..3 {
                    for s in 0..8 {
                        let sg = |b: usize| if s >> b & 1 == 1 { -1.0 } else { 1.0 };
                        let mut v = [l * sg(0), l * sg(1), l * sg(2)];
                        v[c] = m * sg(c);
                        out.push((Unit::new(v)?, 0.020173335537918873));
                    }
                }
            }
            SphereRule::ProductGaussLegendre { n_theta, n_phi } => {
                if n_theta == 0 || n_phi == 0 {
                    return Err(Error::Param("sphere rule needs positive node counts".into()));
                }
                let (t, w) = gauss::legendre(n_theta);
                for (ct, wt) in t.iter().zip(&w) {
                    let st = (1.0 - ct * ct).max(0.0).sqrt();
                    for p in 0..n_phi {
                        let phi = 2.0 * std::f64::consts::PI * p as f64 / n_phi as f64;
                        let v = [st * phi.cos(), st * phi.sin(), *ct];
                        out.push((Unit::new(v)?, wt / (2.0 * n_phi as f64)));
                    }
                }
            }
        }
        Ok(out)
    }
}

fn push_axes(out: &mut Vec<(Unit, f64)>, w: f64) {
    for c in 0..3 {
        for s in [1.0, -1.0] {
            let mut v = [0.0; 3];
            v[c] = s;
            out.push((Unit(Quat::from_parts(0.0, v)), w));
        }
    }
}

fn push_edges(out: &mut Vec<(Unit, f64)>, w: f64) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for c in 0..3 {
        for (s1, s2) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let mut v = [0.0; 3];
            v[(c + 1) % 3] = s1 * h;
            v[(c + 2) % 3] = s2 * h;
            out.push((Unit(Quat::from_parts(0.0, v)), w));
        }
    }
}

fn push_corners(out: &mut Vec<(Unit, f64)>, w: f64) {
    let h = 1.0 / 3f64.sqrt();
    for s in 0..8 {
        let sg = |b: usize| if s >> b & 1 == 1 { -h } else { h };
        out.push((Unit(Quat::from_parts(0.0, [sg(0), sg(1), sg(2)])), w));
    }
}

/// Integrates `g` over the sphere of units with the given rule.
pub fn sphere_integrate<F: Fn(Unit) -> Quat>(rule: &SphereRule, g: F) -> Result<Quat> {
    Ok(rule.nodes()?.into_iter().map(|(u, w)| g(u) * w).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_products() {
        assert_eq!(Quat::I * Quat::J, Quat::K);
        assert_eq!(Quat::J * Quat::K, Quat::I);
        assert_eq!(Quat::K * Quat::I, Quat::J);
        assert_eq!(Quat::J * Quat::I, -Quat::K);
        for u in [Quat::I, Quat::J, Quat::K] {
            assert_eq!(u * u, -Quat::ONE);
        }
        let a = Quat::new(1.0, 1.0, 0.0, 0.0);
        let b = Quat::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(a * b, Quat::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn decompose_examples() {
        let p = slice_decompose(Quat::new(3.0, 0.0, 4.0, 0.0));
        assert_eq!((p.x, p.y), (3.0, 4.0));
        assert_eq!(p.unit, Unit::J);
        let p = slice_decompose(Quat::real(5.0));
        assert_eq!((p.x, p.y, p.unit), (5.0, 0.0, Unit::I));
        let p = slice_decompose(Quat::new(1.0, 1.0, 1.0, 1.0));
        assert!((p.y - 3f64.sqrt()).abs() < 1e-15);
        for c in p.unit.vec() {
            assert!((c - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn orthogonal_unit_examples() {
        assert_eq!(orthogonal_unit(Unit::I), Unit::J);
        assert_eq!(orthogonal_unit(Unit::J), Unit::K);
        assert_eq!(orthogonal_unit(Unit::K), Unit::I);
        let d = orthogonal_unit(Unit::new([1.0, 1.0, 0.0]).unwrap());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(d.quat().max_abs_diff(Quat::new(0.0, h, -h, 0.0)) < 1e-15);
    }

    #[test]
    fn split_example() {
        let q = Quat::new(1.0, 1.0, 2.0, 3.0);
        let (a, b) = split_in_frame(q, Unit::I, Unit::J);
        assert_eq!(a, Complex64::new(1.0, 1.0));
        assert_eq!(b, Complex64::new(2.0, 3.0));
        assert_eq!(join_in_frame(a, b, Unit::I, Unit::J), q);
    }

    #[test]
    fn unit_rejects_non_units() {
        assert!(Unit::from_quat(Quat::new(0.5, 1.0, 0.0, 0.0)).is_err());
        assert!(Unit::from_quat(Quat::new(0.0, 2.0, 0.0, 0.0)).is_err());
        assert!(Unit::new([0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn sphere_rules_normalized() {
        let rules = [
            SphereRule::Octahedron,
            SphereRule::Icosahedron,
            SphereRule::Lebedev26,
            SphereRule::Lebedev50,
            SphereRule::ProductGaussLegendre { n_theta: 6, n_phi: 12 },
        ];
        for r in rules {
            let nodes = r.nodes().unwrap();
            let s: f64 = nodes.iter().map(|(_, w)| w).sum();
            assert!((s - 1.0).abs() < 1e-14, "{r:?} sums to {s}");
            assert!(nodes.iter().all(|(_, w)| *w >= 0.0));
        }
    }
}
