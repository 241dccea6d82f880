//! Table-driven mock language model for offline tests and oracles.
//!
//! A [`MockTable`] maps a context key (the prior step texts, joined) to a
//! finite weighted distribution over next-step strings, separately for the
//! conditional and marginal context. Generation samples from the normalized
//! weights (tempered by `temperature`, seeded from `DecodeParams::seed`);
//! scoring returns the exact log of the normalized weight, decomposed over
//! each continuation's declared per-token split. Because every request's
//! randomness derives only from its seed, concurrent use cannot change
//! outputs.

use std::collections::HashMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    BackendError, ContextMode, DecodeParams, GenerationContext, LanguageModel, ScoredContinuation,
};

const KEY_SEPARATOR: char = '\u{1f}';

/// One weighted continuation with its declared token decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MockEntry {
    pub text: String,
    pub weight: f64,
    /// Token split; concatenation must equal `text`.
    pub tokens: Vec<String>,
}

impl MockEntry {
    pub fn new(text: impl Into<String>, weight: f64) -> Self {
        let text = text.into();
        let tokens = word_tokens(&text);
        Self { text, weight, tokens }
    }
}

/// Split into word-ish tokens whose concatenation equals the input exactly
/// (each token is a run of whitespace followed by a run of non-whitespace,
/// or a trailing run of either).
pub fn word_tokens(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut in_word = false;
    for ch in text.chars() {
        if ch.is_whitespace() {
            if in_word && !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
            in_word = false;
        } else {
            in_word = true;
        }
        current.push(ch);
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    if tokens.is_empty() {
        tokens.push(String::new());
    }
    tokens
}

/// The full planted distribution: context key -> weighted continuations,
/// for each context mode.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct MockTable {
    pub conditional: HashMap<String, Vec<MockEntry>>,
    pub marginal: HashMap<String, Vec<MockEntry>>,
}

impl MockTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Context key for a list of prior step texts.
    pub fn context_key(prior_steps: &[String]) -> String {
        prior_steps.join(&KEY_SEPARATOR.to_string())
    }

    pub fn add_conditional(&mut self, prior_steps: &[&str], entries: Vec<MockEntry>) -> &mut Self {
        let key = prior_steps.join(&KEY_SEPARATOR.to_string());
        self.conditional.insert(key, entries);
        self
    }

    pub fn add_marginal(&mut self, prior_steps: &[&str], entries: Vec<MockEntry>) -> &mut Self {
        let key = prior_steps.join(&KEY_SEPARATOR.to_string());
        self.marginal.insert(key, entries);
        self
    }

    pub fn from_json(json: &str) -> Result<Self, BackendError> {
        let table: MockTable = serde_json::from_str(json)
            .map_err(|e| BackendError::Config(format!("bad mock table JSON: {e}")))?;
        table.validate()?;
        Ok(table)
    }

    pub fn from_path(path: &Path) -> Result<Self, BackendError> {
        let json = std::fs::read_to_string(path)
            .map_err(|e| BackendError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&json)
    }

    pub fn validate(&self) -> Result<(), BackendError> {
        for (mode, map) in [("conditional", &self.conditional), ("marginal", &self.marginal)] {
            for (key, entries) in map {
                if entries.is_empty() {
                    return Err(BackendError::Config(format!(
                        "{mode} context {key:?} has no continuations"
                    )));
                }
                for e in entries {
                    if !(e.weight > 0.0) || !e.weight.is_finite() {
                        return Err(BackendError::Config(format!(
                            "{mode} context {key:?}: continuation {:?} has non-positive weight {}",
                            e.text, e.weight
                        )));
                    }
                    if e.tokens.concat() != e.text {
                        return Err(BackendError::Config(format!(
                            "{mode} context {key:?}: token split does not reassemble {:?}",
                            e.text
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Deterministic table-driven backend.
#[derive(Debug, Clone)]
pub struct MockBackend {
    table: MockTable,
}

impl MockBackend {
    pub fn new(table: MockTable) -> Result<Self, BackendError> {
        table.validate()?;
        Ok(Self { table })
    }

    fn entries(
        &self,
        mode: ContextMode,
        prior_steps: &[String],
    ) -> Result<&[MockEntry], BackendError> {
        let key = MockTable::context_key(prior_steps);
        let map = match mode {
            ContextMode::Conditional => &self.table.conditional,
            ContextMode::Marginal => &self.table.marginal,
        };
        map.get(&key).map(|v| v.as_slice()).ok_or_else(|| {
            BackendError::Scoring(format!("no {mode:?} table entry for context {key:?}"))
        })
    }
}

// Normalized log-weight of entry i within its context distribution.
fn normalized_logp(entries: &[MockEntry], i: usize) -> f64 {
    let total: f64 = entries.iter().map(|e| e.weight).sum();
    (entries[i].weight / total).ln()
}

// Spread a total logprob over n tokens so the per-token values sum exactly.
fn split_logprob(total: f64, n: usize) -> Vec<f64> {
    debug_assert!(n > 0);
    let per = total / n as f64;
    let mut out = vec![per; n];
    out[n - 1] = total - per * (n - 1) as f64;
    out
}

// Sampling probabilities tempered by 1/T, computed in log space.
fn tempered_probs(entries: &[MockEntry], temperature: f64) -> Vec<f64> {
    let t = temperature.max(1e-12);
    let logits: Vec<f64> = entries.iter().map(|e| e.weight.ln() / t).collect();
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

fn distribution_entropy(probs: &[f64]) -> f64 {
    -probs.iter().filter(|p| **p > 0.0).map(|p| p * p.ln()).sum::<f64>()
}

impl LanguageModel for MockBackend {
    fn generate_step(
        &self,
        ctx: &GenerationContext,
        params: &DecodeParams,
    ) -> Result<ScoredContinuation, BackendError> {
        if ctx.mode != ContextMode::Conditional {
            return Err(BackendError::InvalidRequest(
                "generate_step requires a conditional context".into(),
            ));
        }
        let entries = self.entries(ContextMode::Conditional, &ctx.prior_steps)?;
        let probs = tempered_probs(entries, params.temperature);
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let draw: f64 = rng.gen();
        let mut acc = 0.0;
        let mut chosen = entries.len() - 1;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if draw < acc {
                chosen = i;
                break;
            }
        }

        let entry = &entries[chosen];
        let mut tokens: Vec<&str> = entry.tokens.iter().map(String::as_str).collect();
        if tokens.len() > params.max_new_tokens {
            tokens.truncate(params.max_new_tokens.max(1));
        }
        let mut text = tokens.concat();
        if let Some(pos) = text.find(&params.stop_marker) {
            text.truncate(pos);
        }
        if text.is_empty() {
            return Err(BackendError::DegenerateOutput);
        }
        let n = tokens.len();
        let logp_total = normalized_logp(entries, chosen);
        let entropy = distribution_entropy(&probs);
        Ok(ScoredContinuation {
            text,
            token_logprobs: split_logprob(logp_total, n),
            token_entropies: Some(vec![entropy; n]),
        })
    }

    fn score_continuation(
        &self,
        ctx: &GenerationContext,
        text: &str,
    ) -> Result<ScoredContinuation, BackendError> {
        if text.is_empty() {
            return Err(BackendError::InvalidRequest("cannot score empty text".into()));
        }
        let entries = self.entries(ctx.mode, &ctx.prior_steps)?;
        let i = entries.iter().position(|e| e.text == text).ok_or_else(|| {
            BackendError::Scoring(format!(
                "continuation {:?} not in the {:?} table for this context",
                text, ctx.mode
            ))
        })?;
        let total = normalized_logp(entries, i);
        Ok(ScoredContinuation {
            text: text.to_string(),
            token_logprobs: split_logprob(total, entries[i].tokens.len()),
            token_entropies: None,
        })
    }
}
