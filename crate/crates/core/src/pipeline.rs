//! The construction end to end: series, targets, prime search, certificate.

use num_bigint::BigInt;
use thiserror::Error;

use crate::certificate::{Certificate, Metadata, SearchRecord, SeriesDigest, FORMAT_VERSION};
use crate::search::{search_with_progress, SearchConfig, SearchError, SearchStats};
use crate::target::{assemble_curve, build_targets, linear_forms, TargetError};
use crate::tate::{build_bundle, TateError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Series(#[from] TateError),
    #[error(transparent)]
    Target(#[from] TargetError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

#[derive(Debug, Clone)]
pub struct Construction {
    /// Certificate with its check report embedded.
    pub certificate: Certificate,
    pub stats: SearchStats,
}

/// Runs the construction for `p` and verifies the result.
pub fn construct(
    p: u64,
    cfg: &SearchConfig,
    progress: impl FnMut(&SearchStats),
) -> Result<Construction, PipelineError> {
    let bundle = build_bundle(p)?;
    let target = build_targets(&bundle)?;
    let forms = linear_forms(&target);
    let sol = search_with_progress(&forms, &target, cfg, progress)?;
    let curve = assemble_curve(&target, &sol.x0, &sol.y0)?;
    let [xpp1, xpp2, xpp3] = bundle.xpp().map(|x| BigInt::from(x.residue().clone()));
    let certificate = Certificate {
        format_version: FORMAT_VERSION,
        p,
        r: target.r,
        s1: target.s1,
        s2: target.s2,
        x0: sol.x0,
        y0: sol.y0,
        q1: curve.q1,
        q2: curve.q2,
        q3: curve.q3,
        a0: curve.a0,
        b0: curve.b0,
        c0: curve.c0,
        series: SeriesDigest { xpp1, xpp2, xpp3 },
        primality: sol.evidence.to_vec(),
        metadata: Metadata {
            seed: cfg.seed,
            search: Some(SearchRecord {
                d_range: cfg.d_range,
                x_window: cfg.x_window,
                sieve_bound: cfg.sieve_bound,
                budget: cfg.budget,
                stream_index: sol.stream_index as u64,
                primality_tests: sol.stats.primality_tests,
            }),
            ..Metadata::default()
        },
        checks: None,
    }
    .with_checks();
    Ok(Construction { certificate, stats: sol.stats })
}
