use serde::{Deserialize, Serialize};

use super::certify::exact_feasible;
use super::{certify_with, CertifyConfig, FamilyKind, LabelEncoding, SelectionFamily};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionConfig {
    /// Largest family the search may produce.
    pub max_sets: usize,
    pub certify: CertifyConfig,
    /// Reject families that only pass a spot check and fall back to the
    /// singleton family, which certifies exactly at any strength.
    pub require_exact: bool,
}

impl Default for ConstructionConfig {
    fn default() -> Self {
        ConstructionConfig {
            max_sets: 1 << 22,
            certify: CertifyConfig::default(),
            require_exact: true,
        }
    }
}

pub fn construct_ssf(n_labels: u64, c: u64, seed: u64) -> Result<SelectionFamily> {
    construct_ssf_with(n_labels, c, seed, &ConstructionConfig::default())
}

/// Certified `(N,c)`-ssf by seeded search.
///
/// Candidate sets include each label independently with probability `1/c`;
/// the result is the shortest prefix of that seeded sequence that passes
/// certification. Once the prefix would reach `N` sets the singleton family
/// (which is strongly selective for every `c`) is returned instead. A
/// strength `c >= N` yields the singleton family directly.
pub fn construct_ssf_with(
    n_labels: u64,
    c: u64,
    seed: u64,
    cfg: &ConstructionConfig,
) -> Result<SelectionFamily> {
    if n_labels == 0 || c == 0 {
        return Err(Error::InvalidArgument(format!(
            "ssf needs N >= 1 and c >= 1 (N={n_labels}, c={c})"
        )));
    }
    search(
        FamilyKind::Ssf { c },
        n_labels,
        seed,
        LabelEncoding::Direct,
        c,
        c,
        cfg,
    )
}

/// `(N·N, c·c)`-ssf over ordered label pairs in row-major encoding.
pub fn construct_pair_ssf(
    n_labels: u64,
    c: u64,
    seed: u64,
    cfg: &ConstructionConfig,
) -> Result<SelectionFamily> {
    if n_labels == 0 || c == 0 {
        return Err(Error::InvalidArgument(format!(
            "pair ssf needs N >= 1 and c >= 1 (N={n_labels}, c={c})"
        )));
    }
    let space = n_labels
        .checked_mul(n_labels)
        .ok_or_else(|| Error::InvalidArgument("pair label space overflows".into()))?;
    let strength = c.saturating_mul(c);
    let encoding = LabelEncoding::RowMajorPairs { base: n_labels };
    search(
        FamilyKind::Ssf { c: strength },
        space,
        seed,
        encoding,
        strength,
        strength,
        cfg,
    )
}

pub fn construct_selector(k: u64, m: u64, n_labels: u64, seed: u64) -> Result<SelectionFamily> {
    construct_selector_with(k, m, n_labels, seed, &ConstructionConfig::default())
}

/// Certified `(k,m,N)`-selector; `m > k` is built as an `(m,m,N)`-selector.
/// Inclusion probability is `1/k` (after the rewrite).
pub fn construct_selector_with(
    k: u64,
    m: u64,
    n_labels: u64,
    seed: u64,
    cfg: &ConstructionConfig,
) -> Result<SelectionFamily> {
    if m == 0 || k == 0 || n_labels == 0 {
        return Err(Error::InvalidArgument(format!(
            "selector needs k, m, N >= 1 (k={k}, m={m}, N={n_labels})"
        )));
    }
    let k = k.max(m);
    search(
        FamilyKind::Selector { k, m },
        n_labels,
        seed,
        LabelEncoding::Direct,
        k,
        k,
        cfg,
    )
}

fn search(
    kind: FamilyKind,
    space: u64,
    seed: u64,
    encoding: LabelEncoding,
    strength: u64,
    den: u64,
    cfg: &ConstructionConfig,
) -> Result<SelectionFamily> {
    let cap_error = || Error::FamilySizeCap {
        kind: kind.describe(),
        n_labels: space,
        cap: cfg.max_sets,
    };
    let singletons = || -> Result<SelectionFamily> {
        if space > cfg.max_sets as u64 {
            return Err(cap_error());
        }
        let mut f = SelectionFamily::singletons(kind, space, seed, encoding);
        let cert = certify_with(&f, &cfg.certify);
        f.set_certified(cert.certified());
        Ok(f)
    };
    if strength >= space || (cfg.require_exact && !exact_feasible(kind, space, &cfg.certify)) {
        return singletons();
    }
    // Random prefixes only while they are shorter than the singleton family.
    let limit = usize::try_from(space - 1).unwrap_or(usize::MAX);
    let build = |len: usize| SelectionFamily::hashed(kind, space, seed, encoding, len, den);
    let passes = |len: usize| certify_with(&build(len), &cfg.certify);

    let mut failing = 0usize;
    let mut len = 1usize;
    loop {
        let probe = len.min(limit);
        if probe > cfg.max_sets {
            return Err(cap_error());
        }
        let cert = passes(probe);
        if cert.passed {
            // Certification is monotone in the prefix length (sampling reuses
            // the same subsets), so bisect for the shortest passing prefix.
            let (mut lo, mut hi, mut best) = (failing, probe, cert);
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                let c = passes(mid);
                if c.passed {
                    hi = mid;
                    best = c;
                } else {
                    lo = mid;
                }
            }
            if cfg.require_exact && !best.certified() {
                return singletons();
            }
            let mut f = build(hi);
            f.set_certified(best.certified());
            return Ok(f);
        }
        failing = probe;
        if probe >= limit {
            return singletons();
        }
        len = len.saturating_mul(2);
    }
}
