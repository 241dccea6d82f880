//! Final answer selection: top-K chain selection by ranking score,
//! frequency-weighted re-ranking, and a plain majority-vote utility.
//!
//! The weighted vote sorts complete chains by their ranking score, keeps the
//! top K, counts how often each answer appears among them, and re-ranks by
//! `score * Freq(answer) / K`. Consensus can therefore override a single
//! high-scoring outlier. Negative raw scores are used as-is; frequency then
//! scales magnitude regardless of sign, which is the literal definition.

use serde::Serialize;
use thiserror::Error;

use crate::pmi::{ranking_score, Aggregation};
use crate::types::ReasoningChain;

/// One row of the vote table.
#[derive(Debug, Clone, Serialize)]
pub struct VoteRow {
    /// Index into the caller's chain list.
    pub chain: usize,
    pub answer: String,
    pub raw_score: f64,
    pub frequency: usize,
    /// raw_score * frequency / K.
    pub weighted_score: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VoteResult {
    pub selected_chain: usize,
    pub selected_answer: String,
    /// Effective K after lowering to the number of complete chains.
    pub k: usize,
    pub table: Vec<VoteRow>,
}

#[derive(Debug, Error)]
pub enum VoteError {
    #[error("no complete chains to vote over")]
    NoCompleteChains,
}

/// Weighted vote with an arbitrary per-chain raw score.
pub fn weighted_vote_by<F>(
    chains: &[ReasoningChain],
    k: usize,
    raw_score: F,
) -> Result<VoteResult, VoteError>
where
    F: Fn(&ReasoningChain) -> f64,
{
    // Incomplete chains carry no prediction and are excluded up front.
    let mut complete: Vec<usize> = (0..chains.len())
        .filter(|&i| chains[i].complete && chains[i].answer.is_some())
        .collect();
    if complete.is_empty() {
        return Err(VoteError::NoCompleteChains);
    }
    // Sort by raw score descending; ties toward earlier chain creation order.
    complete.sort_by(|&a, &b| {
        raw_score(&chains[b])
            .partial_cmp(&raw_score(&chains[a]))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(chains[a].order.cmp(&chains[b].order))
    });
    let k = k.min(complete.len());
    let top = &complete[..k];

    let freq = |answer: &str| -> usize {
        top.iter()
            .filter(|&&i| chains[i].answer.as_deref() == Some(answer))
            .count()
    };
    let table: Vec<VoteRow> = top
        .iter()
        .map(|&i| {
            let answer = chains[i].answer.clone().unwrap();
            let raw = raw_score(&chains[i]);
            let frequency = freq(&answer);
            VoteRow {
                chain: i,
                weighted_score: raw * frequency as f64 / k as f64,
                answer,
                raw_score: raw,
                frequency,
            }
        })
        .collect();

    let best = table
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| {
            a.weighted_score
                .partial_cmp(&b.weighted_score)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(chains[b.chain].order.cmp(&chains[a.chain].order))
        })
        .map(|(i, _)| i)
        .unwrap();

    Ok(VoteResult {
        selected_chain: table[best].chain,
        selected_answer: table[best].answer.clone(),
        k,
        table,
    })
}

/// Frequency-weighted PMI vote over the top-K complete chains.
pub fn weighted_vote(
    chains: &[ReasoningChain],
    k: usize,
    mode: Aggregation,
) -> Result<VoteResult, VoteError> {
    weighted_vote_by(chains, k, |c| ranking_score(&c.score, mode))
}

/// Plain majority vote over all complete chains; ties break toward the
/// answer of the highest-scoring chain.
pub fn majority_vote(chains: &[ReasoningChain], mode: Aggregation) -> Result<String, VoteError> {
    let complete: Vec<&ReasoningChain> =
        chains.iter().filter(|c| c.complete && c.answer.is_some()).collect();
    if complete.is_empty() {
        return Err(VoteError::NoCompleteChains);
    }
    let mut counts: Vec<(String, usize, f64)> = Vec::new();
    for c in &complete {
        let answer = c.answer.clone().unwrap();
        let score = ranking_score(&c.score, mode);
        match counts.iter_mut().find(|(a, _, _)| *a == answer) {
            Some((_, n, best)) => {
                *n += 1;
                if score > *best {
                    *best = score;
                }
            }
            None => counts.push((answer, 1, score)),
        }
    }
    counts.sort_by(|a, b| {
        b.1.cmp(&a.1).then(b.2.partial_cmp(&a.2).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(counts[0].0.clone())
}
