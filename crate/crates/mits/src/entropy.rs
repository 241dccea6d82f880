//! Entropy-driven dynamic sampling: per-step entropy, quantile thresholds
//! over the tree's entropy history, and the adjusted sample count
//! `N_i = N_base + delta_n` with delta clamped to [-2, 2].

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Adaptive entropy band edges (33rd / 67th percentiles of the history).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyThresholds {
    pub h_low: f64,
    pub h_high: f64,
    pub history_size: usize,
}

/// Dynamic sampling knobs.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n_base: usize,
    /// Proportional gain V_p.
    pub v_p: f64,
    /// Dynamic sampling stays off until this many entropies are recorded.
    pub min_history: usize,
    /// |delta_n| never exceeds this (fixed at 2).
    pub delta_cap: i64,
}

impl SamplerConfig {
    pub fn new(n_base: usize, v_p: f64, min_history: usize) -> Result<Self, EntropyError> {
        let cfg = Self { n_base, v_p, min_history, delta_cap: 2 };
        if n_base < 1 || v_p <= 0.0 || (n_base as i64) - cfg.delta_cap < 1 {
            return Err(EntropyError::BadConfig { n_base, v_p });
        }
        Ok(cfg)
    }
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { n_base: 3, v_p: 1.0, min_history: 10, delta_cap: 2 }
    }
}

#[derive(Debug, Error)]
pub enum EntropyError {
    #[error("empty entropy list")]
    Empty,
    #[error("negative entropy value {0}")]
    Negative(f64),
    #[error("invalid sampler config: n_base={n_base}, v_p={v_p}")]
    BadConfig { n_base: usize, v_p: f64 },
}

/// Step-level uncertainty: mean of the per-token full-vocabulary entropies.
pub fn step_entropy(token_entropies: &[f64]) -> Result<f64, EntropyError> {
    if token_entropies.is_empty() {
        return Err(EntropyError::Empty);
    }
    if let Some(&h) = token_entropies.iter().find(|h| **h < 0.0) {
        return Err(EntropyError::Negative(h));
    }
    Ok(token_entropies.iter().sum::<f64>() / token_entropies.len() as f64)
}

// Linear-interpolation percentile at sorted index p*(n-1).
fn percentile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = p * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// 33%/67% quantile thresholds over the entropy history.
pub fn thresholds(history: &[f64]) -> Result<EntropyThresholds, EntropyError> {
    if history.is_empty() {
        return Err(EntropyError::Empty);
    }
    let mut sorted = history.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(EntropyThresholds {
        h_low: percentile(&sorted, 0.33),
        h_high: percentile(&sorted, 0.67),
        history_size: history.len(),
    })
}

// Round-half-up to the nearest integer for non-negative x.
fn round_half_up(x: f64) -> i64 {
    (x + 0.5).floor() as i64
}

/// Sampling adjustment from the entropy band of `h_i`: +/- up to 2 outside
/// the moderate band, 0 inside it or when the band is degenerate.
pub fn delta_n(h_i: f64, th: &EntropyThresholds, cfg: &SamplerConfig) -> i64 {
    let band = th.h_high - th.h_low;
    if band <= 0.0 {
        return 0;
    }
    if h_i > th.h_high {
        let raw = round_half_up(2.0 * cfg.v_p * (h_i - th.h_high) / band);
        raw.min(cfg.delta_cap)
    } else if h_i < th.h_low {
        let raw = round_half_up(2.0 * cfg.v_p * (th.h_low - h_i) / band);
        (-raw).max(-cfg.delta_cap)
    } else {
        0
    }
}

/// Final candidate count for expanding a node whose step entropy is
/// `h_parent`, given the current entropy history. The dynamic adjustment is
/// gated off while the history is shorter than `min_history`.
pub fn sample_count(h_parent: f64, tree_history: &[f64], cfg: &SamplerConfig) -> usize {
    if tree_history.len() < cfg.min_history {
        return cfg.n_base;
    }
    let th = match thresholds(tree_history) {
        Ok(th) => th,
        Err(_) => return cfg.n_base,
    };
    let n = cfg.n_base as i64 + delta_n(h_parent, &th, cfg);
    n.max(1) as usize
}
