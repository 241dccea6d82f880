//! Mutual-information-guided tree search for language-model reasoning.
//!
//! The engine grows a tree of reasoning steps one level at a time. Each
//! candidate step is scored twice — once with the question in context, once
//! without — and the difference of the two log-probabilities (the pointwise
//! mutual information of step and question) drives beam pruning, sampling
//! effort, and final answer selection.
//!
//! Crate layout:
//! - [`types`] — questions, steps, nodes, trees, chains, run configuration
//! - [`backend`] — the generate/score contract, a table-driven mock LM, and
//!   an HTTP client for OpenAI-compatible completions endpoints
//! - [`pmi`] — per-step deltas, cumulative recurrence, length normalization
//! - [`entropy`] — step entropy, quantile thresholds, dynamic sample counts
//! - [`search`] — level-synchronous expansion, beam pruning, chain extraction
//! - [`voting`] — frequency-weighted PMI voting and plain majority voting
//! - [`bench`] — dataset loading, prompt templates, trace dumps, benchmark runs

pub mod backend;
pub mod bench;
pub mod entropy;
pub mod pmi;
pub mod search;
pub mod types;
pub mod voting;

pub use types::{
    Question, ReasoningChain, ReasoningStep, RunConfig, SearchNode, SearchTree, StepScore,
};
