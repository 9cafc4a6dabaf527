//! Experiment runners; each writes its tables and returns its checks.

mod berezin;
mod bmo;
mod identities;
mod measures;
mod projection;
mod toeplitz;

use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::output::{Artifacts, Outcome};

pub fn run(cfg: &ExperimentConfig, art: &mut Artifacts) -> CliResult<Outcome> {
    match cfg.info.name {
        "identity-suite" => identities::identity_suite(cfg, art),
        "probe-projection" => projection::probe_projection(cfg, art),
        "schur" => projection::schur(cfg, art),
        "range-preimage" => projection::range_preimage(cfg, art),
        "carleson" => measures::carleson(cfg, art),
        "vanishing-carleson" => measures::vanishing_carleson(cfg, art),
        "berezin" => berezin::berezin(cfg, art),
        "semigroup" => berezin::semigroup(cfg, art),
        "fixed-points" => berezin::fixed_points(cfg, art),
        "bmo" => bmo::bmo(cfg, art),
        "toeplitz" => toeplitz::toeplitz(cfg, art),
        "toeplitz-adjoint" => toeplitz::toeplitz_adjoint(cfg, art),
        "bounded-compact" => toeplitz::bounded_compact(cfg, art),
        other => unreachable!("catalog entry `{other}` has no runner"),
    }
}
