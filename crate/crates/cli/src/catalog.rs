//! Names, descriptions and accepted parameters of the experiments.

use serde::Serialize;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ExperimentInfo {
    pub name: &'static str,
    pub description: &'static str,
    /// Identities or characterizations the experiment checks.
    pub checks: &'static str,
    pub params: &'static [&'static str],
    pub inputs: &'static [&'static str],
}

pub const EXPERIMENTS: &[ExperimentInfo] = &[
    ExperimentInfo {
        name: "identity-suite",
        description: "randomized checks of the algebraic and kernel identities",
        checks: "product norm, representation formula, star product, kernel series, reproducing property, projection, inner products, Berezin heat factor and semigroup, Toeplitz adjoint",
        params: &["alpha", "samples"],
        inputs: &[],
    },
    ExperimentInfo {
        name: "probe-projection",
        description: "norm ratios of P_alpha on L^p(lambda_beta) along a Gaussian test bank",
        checks: "P_alpha bounded on L^p(lambda_beta) iff p >= 1 and p alpha = 2 beta",
        params: &["alpha", "beta", "p"],
        inputs: &[],
    },
    ExperimentInfo {
        name: "schur",
        description: "Schur-test constants for the absolute kernel operator",
        checks: "row and column Gaussian estimates close up with a finite constant iff p alpha = 2 beta",
        params: &["alpha", "beta", "p", "xs"],
        inputs: &[],
    },
    ExperimentInfo {
        name: "range-preimage",
        description: "explicit preimage of a Fock polynomial under P_alpha",
        checks: "P_alpha g = f for g(z) = (alpha/gamma) f(alpha z/gamma) exp((beta - alpha)|z|^2) with alpha^2/gamma = 2 alpha - beta",
        params: &["alpha", "beta", "gamma", "tolerance"],
        inputs: &["symbol"],
    },
    ExperimentInfo {
        name: "carleson",
        description: "kernel integrals against symmetric box masses of a discrete measure",
        checks: "Fock-Carleson condition equivalent to bounded box masses",
        params: &["alpha", "p", "r", "radius", "spacing"],
        inputs: &["measure"],
    },
    ExperimentInfo {
        name: "vanishing-carleson",
        description: "ring maxima of kernel integrals and box masses of a discrete measure",
        checks: "vanishing Fock-Carleson condition equivalent to vanishing box masses",
        params: &["alpha", "p", "r", "radii", "angles"],
        inputs: &["measure"],
    },
    ExperimentInfo {
        name: "berezin",
        description: "samples of the Berezin transform of a slice function",
        checks: "stem convolution agrees with direct slice evaluation",
        params: &["alpha", "window", "grid_n", "tolerance"],
        inputs: &["symbol"],
    },
    ExperimentInfo {
        name: "semigroup",
        description: "composition of Berezin transforms",
        checks: "B_alpha B_beta = B_(alpha beta/(alpha + beta))",
        params: &["alpha", "beta", "tolerance"],
        inputs: &["symbol"],
    },
    ExperimentInfo {
        name: "fixed-points",
        description: "fixed points of the Berezin transform",
        checks: "constants and harmonic functions are fixed; a bounded cosine is not; a non-harmonic exponential is fixed",
        params: &["alpha"],
        inputs: &[],
    },
    ExperimentInfo {
        name: "bmo",
        description: "per-center mean oscillation and the two BO + BA^p decompositions",
        checks: "BMO^p_r finite iff the averaging and Berezin decompositions are finite",
        params: &["alpha", "p", "r", "window", "grid_n"],
        inputs: &["symbol"],
    },
    ExperimentInfo {
        name: "toeplitz",
        description: "truncated Toeplitz matrix of a function or measure symbol with its Berezin table",
        checks: "<T k_z, k_z> equals the Berezin transform of the symbol inside the trusted radius",
        params: &["alpha", "n", "radius", "tolerance"],
        inputs: &["symbol", "measure"],
    },
    ExperimentInfo {
        name: "toeplitz-adjoint",
        description: "adjoint of a truncated Toeplitz matrix against the adjoint symbol",
        checks: "T_f* = T_g with g = conj(A) - B(conj z) J on the slice",
        params: &["alpha", "n", "tolerance"],
        inputs: &["symbol"],
    },
    ExperimentInfo {
        name: "bounded-compact",
        description: "boundedness and compactness proxies for Toeplitz symbols",
        checks: "norm growth, Berezin profile and box profile agree on boundedness and compactness",
        params: &["alpha", "sizes"],
        inputs: &["symbol", "measure"],
    },
];

pub fn find(name: &str) -> Option<&'static ExperimentInfo> {
    EXPERIMENTS.iter().find(|e| e.name == name)
}

pub fn unknown_message(name: &str) -> String {
    match qfock::bank::nearest(name, EXPERIMENTS.iter().map(|e| e.name)) {
        Some(s) => format!("unknown experiment `{name}`; did you mean `{s}`?"),
        None => format!("unknown experiment `{name}`; run `qfock list` for the catalog"),
    }
}
