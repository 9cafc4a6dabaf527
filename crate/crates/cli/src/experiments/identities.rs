use num_complex::Complex64;
use qfock::bank::builtin;
use qfock::berezin::{berezin, default_probes, semigroup_check, BerezinContext};
use qfock::fock::{polarization_inner, FockElement, KernelContext};
use qfock::proj::{apply_p, l2_inner};
use qfock::quad::QuadratureRule;
use qfock::quat::orthogonal_unit;
use qfock::slice::{represent_from_slice, star_product, star_slicewise};
use qfock::toeplitz::{adjoint_symbol, toeplitz_matrix_fn};
use qfock::{Quat, RegularPolynomial, SliceFunction, Unit};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::output::{num, Artifacts, Check, Outcome};

struct Sampler(ChaCha8Rng);

impl Sampler {
    fn quat(&mut self, s: f64) -> Quat {
        let r = &mut self.0;
        Quat::new(r.random_range(-s..s), r.random_range(-s..s), r.random_range(-s..s), r.random_range(-s..s))
    }

    fn unit(&mut self) -> Unit {
        loop {
            let v = [self.0.random_range(-1.0..1.0), self.0.random_range(-1.0..1.0), self.0.random_range(-1.0..1.0)];
            if v.iter().map(|c| c * c).sum::<f64>() > 1e-2 {
                return Unit::new(v).expect("nonzero");
            }
        }
    }

    fn poly(&mut self, degree: usize) -> RegularPolynomial {
        RegularPolynomial::new((0..=degree).map(|_| self.quat(1.0)).collect())
    }
}

struct Row {
    identity: &'static str,
    samples: usize,
    deviation: f64,
    tolerance: f64,
}

pub fn identity_suite(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Outcome> {
    let alpha = cfg.params.alpha.unwrap_or(1.0);
    let n = cfg.params.samples.unwrap_or(100);
    let heavy = n.min(8);
    let mut s = Sampler(ChaCha8Rng::seed_from_u64(cfg.seed));
    let rule = QuadratureRule::default();
    let ctx = KernelContext::new(alpha)?;
    let mut rows = Vec::new();

    let mut d = 0.0f64;
    for _ in 0..n {
        let (p, q) = (s.quat(3.0), s.quat(3.0));
        d = d.max(((p * q).norm() - p.norm() * q.norm()).abs() / (1.0 + p.norm() * q.norm()));
    }
    rows.push(Row { identity: "norm of a quaternion product is the product of norms", samples: n, deviation: d, tolerance: 1e-14 });

    let mut d = 0.0f64;
    for _ in 0..n {
        let p = s.poly(4);
        let (i, j) = (s.unit(), s.unit());
        if (i.dot(j).abs() - 1.0).abs() < 1e-3 {
            continue;
        }
        let (x, y) = (s.0.random_range(-1.5..1.5), s.0.random_range(0.05..1.5));
        let f: SliceFunction = p.clone().into();
        let want = p.eval(i.point(x, y));
        let got = represent_from_slice(f.eval_on(j, x, y), f.eval_on(j, x, -y), j, i);
        d = d.max((got - want).norm() / (1.0 + want.norm()));
    }
    rows.push(Row { identity: "representation formula recovers one slice from another", samples: n, deviation: d, tolerance: 1e-11 });

    let mixed = builtin("mixed", alpha)?;
    let mut d = 0.0f64;
    for _ in 0..n {
        let f: SliceFunction = s.poly(3).into();
        let i = s.unit();
        let z = Complex64::new(s.0.random_range(-1.5..1.5), s.0.random_range(-1.5..1.5));
        let stem = star_product(&f, &mixed).eval(Quat::from_complex(z, i));
        let split = star_slicewise(&f, &mixed, i, z);
        d = d.max((stem - split).norm() / (1.0 + stem.norm()));
    }
    rows.push(Row { identity: "star product by stems equals star product by slice splitting", samples: n, deviation: d, tolerance: 1e-12 });

    let mut d = 0.0f64;
    for _ in 0..n {
        let (z, w) = (s.quat(1.5), s.quat(1.5));
        let scale = (alpha * z.norm() * w.norm()).exp();
        d = d.max((ctx.kernel(z, w)? - ctx.kernel_by_representation(z, w)).norm() / scale);
        d = d.max((ctx.kernel(z, w)? - ctx.kernel(w, z)?.conj()).norm() / scale);
    }
    rows.push(Row { identity: "kernel series equals its representation and is hermitian", samples: n, deviation: d, tolerance: 1e-12 });

    let mut d = 0.0f64;
    for _ in 0..n {
        let f = FockElement::from_poly(s.poly(5), alpha)?;
        let z = s.quat(1.5);
        let k = FockElement::kernel_section(z, alpha, 80)?;
        let want = f.eval(z);
        d = d.max((f.inner(&k)? - want).norm() / (1.0 + want.norm()));
    }
    rows.push(Row { identity: "inner product with the kernel section reproduces f(z)", samples: n, deviation: d, tolerance: 1e-12 });

    let mut d = 0.0f64;
    for _ in 0..n {
        let f = FockElement::from_poly(s.poly(4), alpha)?;
        let g = FockElement::from_poly(s.poly(4), alpha)?;
        let base = f.inner(&g)?;
        d = d.max((polarization_inner(&f, &g)? - base).norm() / (1.0 + base.norm()));
    }
    rows.push(Row { identity: "polarization of norms recovers the inner product", samples: n, deviation: d, tolerance: 1e-12 });

    let (mut dp, mut di) = (0.0f64, 0.0f64);
    for _ in 0..heavy {
        let p = s.poly(5);
        let u = s.unit();
        let f: SliceFunction = p.clone().into();
        let pf = apply_p(&f, alpha, u, 8, &rule)?;
        for k in 0..8 {
            let want = p.coeffs.get(k).copied().unwrap_or(Quat::ZERO);
            dp = dp.max((pf.coeffs()[k] - want).norm());
        }
        let g = FockElement::from_poly(s.poly(4), alpha)?;
        let fe = FockElement::from_poly(p, alpha)?;
        let series = fe.inner(&g)?;
        let integral = l2_inner(&f, &g.to_slice_function(), alpha, u, &rule)?;
        di = di.max((series - integral).norm() / (1.0 + series.norm()));
    }
    rows.push(Row { identity: "Gaussian projection fixes polynomials", samples: heavy, deviation: dp, tolerance: 1e-9 });
    rows.push(Row { identity: "Fock inner product equals the slice integral", samples: heavy, deviation: di, tolerance: 1e-9 });

    let bctx = BerezinContext::new(alpha)?;
    let probes = default_probes(2.0);
    let cos = berezin(&builtin("cos_re", alpha)?, &bctx)?;
    let damp = (-1.0 / (4.0 * alpha)).exp();
    let d = probes.iter().map(|q| (cos.eval(*q) - Quat::real(damp * q.re.cos())).norm()).fold(0.0, f64::max);
    rows.push(Row { identity: "Berezin transform damps cos(Re q) by exp(-1/(4 alpha))", samples: probes.len(), deviation: d, tolerance: 1e-12 });

    let few: Vec<Quat> = probes.iter().step_by(4).copied().collect();
    let mut d = 0.0f64;
    for name in ["cos_re", "abs2"] {
        d = d.max(semigroup_check(&builtin(name, alpha)?, &bctx, alpha, &few)?);
    }
    rows.push(Row { identity: "Berezin transforms compose with weight alpha beta/(alpha + beta)", samples: 2 * few.len(), deviation: d, tolerance: 1e-9 });

    let (i, j) = (Unit::I, orthogonal_unit(Unit::I));
    let tf = toeplitz_matrix_fn(&mixed, alpha, 8, i, &rule)?;
    let tg = toeplitz_matrix_fn(&adjoint_symbol(&mixed, i, j)?, alpha, 8, i, &rule)?;
    let diff = tf.matrix.adjoint().sub(&tg.matrix)?;
    rows.push(Row { identity: "Toeplitz adjoint is the operator of the adjoint symbol", samples: 64, deviation: diff.frobenius(), tolerance: 1e-9 });

    let mut out = Outcome::default();
    out.note("alpha", alpha);
    out.note("seed", cfg.seed);
    for r in &rows {
        out.check(Check::at_most(r.identity, r.deviation, r.tolerance));
    }
    let table = rows.iter().map(|r| {
        vec![r.identity.to_string(), r.samples.to_string(), num(r.deviation), num(r.tolerance), (r.deviation <= r.tolerance).to_string()]
    });
    art.csv("identity-suite.csv", &["identity", "samples", "max_deviation", "tolerance", "pass"], table)?;
    Ok(out)
}
