//! One-dimensional Gauss rules, computed by Newton iteration on the
//! orthonormal three-term recurrences.

use std::f64::consts::PI;

/// Gauss–Hermite nodes and weights for the weight `exp(-t^2)` on the real line.
///
/// Weights sum to `sqrt(pi)`. Nodes are returned in increasing order.
pub fn hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Hermite rule needs at least one node");
    let pim4 = PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        for _ in 0..200 {
            let (p1, p2) = hermite_pair(n, z, pim4);
            let dz = p1 / ((2.0 * nf).sqrt() * p2);
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        let (_, p2) = hermite_pair(n, z, pim4);
        let pp = (2.0 * nf).sqrt() * p2;
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    x.reverse();
    w.reverse();
    (x, w)
}

fn hermite_pair(n: usize, z: f64, pim4: f64) -> (f64, f64) {
    let mut p1 = pim4;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, p2)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`; weights sum to 2.
pub fn legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p1, p2) = legendre_pair(n, z);
            let dz = p1 / (nf * (z * p1 - p2) / (z * z - 1.0));
            z -= dz;
            if dz.abs() <= 1e-16 {
                break;
            }
        }
        let (p1, p2) = legendre_pair(n, z);
        let pp = nf * (z * p1 - p2) / (z * z - 1.0);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn legendre_pair(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
    }
    (p1, p2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss_moment(k: u32) -> f64 {
        // ∫ t^k e^{-t^2} dt = Γ((k+1)/2) for even k
        if k % 2 == 1 {
            return 0.0;
        }
        let mut v = PI.sqrt();
        let mut j = 1;
        while j < k {
            v *= j as f64 / 2.0;
            j += 2;
        }
        v
    }

    #[test]
    fn hermite_exact_on_polynomials() {
        for n in [1usize, 2, 5, 12, 40, 80] {
            let (x, w) = hermite(n);
            for k in 0..(2 * n as u32).min(40) {
                let s: f64 = x.iter().zip(&w).map(|(t, wi)| t.powi(k as i32) * wi).sum();
                let exact = gauss_moment(k);
                let scale = gauss_moment(2 * (k / 2 + 1)).max(1.0);
                assert!(
                    (s - exact).abs() <= 1e-13 * scale,
                    "n={n} k={k} got {s} want {exact}"
                );
            }
        }
    }

    #[test]
    fn hermite_nodes_sorted_and_symmetric() {
        let (x, w) = hermite(31);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        for i in 0..31 {
            assert!((x[i] + x[30 - i]).abs() < 1e-13);
            assert!((w[i] - w[30 - i]).abs() < 1e-15);
        }
        assert!(x[15].abs() < 1e-14);
    }

    #[test]
    fn legendre_exact_on_polynomials() {
        for n in [1usize, 3, 8, 20] {
            let (x, w) = legendre(n);
            for k in 0..(2 * n as i32) {
                let s: f64 = x.iter().zip(&w).map(|(t, wi)| t.powi(k) * wi).sum();
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!((s - exact).abs() < 1e-13, "n={n} k={k}");
            }
        }
    }
}
