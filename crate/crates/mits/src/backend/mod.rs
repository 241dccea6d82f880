//! The generate/score contract every language-model backend fulfils.
//!
//! A backend can do two things: sample one reasoning step given a context
//! (`generate_step`), and teacher-force an existing step text against a
//! context to get its per-token log-probabilities (`score_continuation`).
//! Contexts come in two flavours: *conditional* (instruction + question +
//! prior steps) and *marginal* (prior steps only; an empty marginal context
//! is just the BOS token). The log-probability gap between the two is the
//! step's PMI contribution.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::RunConfig;

pub mod http;
pub mod mock;

pub use http::HttpBackend;
pub use mock::{MockBackend, MockTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextMode {
    Conditional,
    Marginal,
}

/// The scoring/generation prefix for one step.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationContext {
    pub mode: ContextMode,
    /// Prompt preamble including the option list; conditional only.
    pub instruction: Option<String>,
    /// Question text (body plus option lines); conditional only.
    pub question: Option<String>,
    pub prior_steps: Vec<String>,
    /// 1-based index of the step about to be produced or scored.
    pub step_index: usize,
}

impl GenerationContext {
    pub fn conditional(
        instruction: impl Into<String>,
        question: impl Into<String>,
        prior_steps: Vec<String>,
    ) -> Self {
        let step_index = prior_steps.len() + 1;
        Self {
            mode: ContextMode::Conditional,
            instruction: Some(instruction.into()),
            question: Some(question.into()),
            prior_steps,
            step_index,
        }
    }

    /// Marginal context: prior step texts only, no instruction, no question.
    pub fn marginal(prior_steps: Vec<String>) -> Self {
        let step_index = prior_steps.len() + 1;
        Self {
            mode: ContextMode::Marginal,
            instruction: None,
            question: None,
            prior_steps,
            step_index,
        }
    }

    /// Render the full textual prefix for this context.
    ///
    /// Conditional contexts follow the plain-completion template: instruction
    /// block, a `Question:` line, the question text, each prior step under a
    /// `Step i:` header, and a trailing `Step n:` cue. Marginal contexts are
    /// the prior step texts alone (the backend's tokenizer supplies BOS).
    pub fn render_prompt(&self) -> String {
        let mut out = String::new();
        if self.mode == ContextMode::Conditional {
            if let Some(instruction) = &self.instruction {
                out.push_str(instruction);
                out.push('\n');
            }
            out.push_str("Question:\n");
            if let Some(q) = &self.question {
                out.push_str(q);
                out.push('\n');
            }
            for (i, step) in self.prior_steps.iter().enumerate() {
                out.push_str(&format!("Step {}:\n{}\n", i + 1, step));
            }
            out.push_str(&format!("Step {}:", self.step_index));
        } else {
            for step in &self.prior_steps {
                out.push_str(step);
                out.push('\n');
            }
        }
        out
    }
}

/// A generated or rescored step text with its per-token statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredContinuation {
    pub text: String,
    /// Per-token log-probabilities (nats) under the given context.
    pub token_logprobs: Vec<f64>,
    /// Per-token sampling-distribution entropies (nats); present for
    /// generation, absent for rescoring.
    pub token_entropies: Option<Vec<f64>>,
}

impl ScoredContinuation {
    pub fn total_logprob(&self) -> f64 {
        self.token_logprobs.iter().sum()
    }
}

/// Decode parameters for one generation request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeParams {
    pub temperature: f64,
    pub top_k: usize,
    pub top_p: f64,
    pub max_new_tokens: usize,
    /// Generation stops when this literal appears; the marker itself is
    /// excluded from the returned step text.
    pub stop_marker: String,
    pub seed: u64,
}

impl DecodeParams {
    pub fn from_config(cfg: &RunConfig, seed: u64) -> Self {
        Self {
            temperature: cfg.temperature,
            top_k: cfg.top_k,
            top_p: cfg.top_p,
            max_new_tokens: cfg.max_new_tokens,
            stop_marker: "\nStep".to_string(),
            seed,
        }
    }
}

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("transport error ({status:?}): {message}")]
    Transport { message: String, status: Option<u16>, retryable: bool },
    #[error("backend lacks required capability: {0}")]
    Capability(String),
    #[error("scoring error: {0}")]
    Scoring(String),
    #[error("backend configuration error: {0}")]
    Config(String),
    #[error("generation produced no text")]
    DegenerateOutput,
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

/// The generate/score contract. Implementations must accept concurrent
/// in-flight requests; per-request randomness comes only from
/// `DecodeParams::seed`.
pub trait LanguageModel: Send + Sync {
    fn generate_step(
        &self,
        ctx: &GenerationContext,
        params: &DecodeParams,
    ) -> Result<ScoredContinuation, BackendError>;

    fn score_continuation(
        &self,
        ctx: &GenerationContext,
        text: &str,
    ) -> Result<ScoredContinuation, BackendError>;
}

/// Splitmix64-style mixing of the run seed with per-candidate coordinates so
/// each request gets an independent, reproducible stream.
pub fn mix_seed(run_seed: u64, parent_index: u64, slot: u64) -> u64 {
    let mut z = run_seed
        .wrapping_add(parent_index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(slot.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
