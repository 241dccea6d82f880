//! PMI scoring: per-step deltas, cumulative recurrence, length-normalized
//! path scores, and the sum/average ranking switch.
//!
//! All quantities are natural-log (nats). A path's cumulative PMI is the sum
//! of per-step deltas `log p(s_i | q, ctx) - log p(s_i | ctx)`; the normalized
//! form divides by the step count to remove length bias.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::StepScore;

/// Cumulative and length-normalized PMI of a path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathScore {
    pub cumulative: f64,
    pub n_steps: usize,
    pub normalized: f64,
}

impl PathScore {
    pub const ZERO: PathScore = PathScore { cumulative: 0.0, n_steps: 0, normalized: 0.0 };

    pub fn new(cumulative: f64, n_steps: usize) -> Self {
        let normalized = if n_steps == 0 { 0.0 } else { cumulative / n_steps as f64 };
        Self { cumulative, n_steps, normalized }
    }
}

/// How per-step PMI values aggregate into a path ranking score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    Sum,
    /// Length-normalized; the default.
    Average,
}

#[derive(Debug, Error)]
pub enum PmiError {
    #[error("non-finite log-probability: conditional={0}, marginal={1}")]
    NonFinite(f64, f64),
}

/// Per-step PMI contribution: `logp_conditional - logp_marginal`. May be
/// negative; no clamping.
pub fn pmi_delta(logp_conditional: f64, logp_marginal: f64) -> Result<f64, PmiError> {
    if !logp_conditional.is_finite() || !logp_marginal.is_finite() {
        return Err(PmiError::NonFinite(logp_conditional, logp_marginal));
    }
    Ok(logp_conditional - logp_marginal)
}

/// Extend a path score by one step (the incremental recurrence, starting from
/// `PathScore::ZERO`).
pub fn accumulate(prev: PathScore, delta: f64) -> PathScore {
    PathScore::new(prev.cumulative + delta, prev.n_steps + 1)
}

/// Direct-sum form over a whole list of step scores. Equals folding
/// [`accumulate`] over the per-step deltas.
pub fn batch_pmi(step_scores: &[StepScore]) -> PathScore {
    let cumulative: f64 = step_scores.iter().map(|s| s.pmi_delta).sum();
    PathScore::new(cumulative, step_scores.len())
}

/// Ranking score of a path under the chosen aggregation.
pub fn ranking_score(path: &PathScore, mode: Aggregation) -> f64 {
    match mode {
        Aggregation::Sum => path.cumulative,
        Aggregation::Average => path.normalized,
    }
}
