//! Shared domain types: questions, steps, nodes, trees, chains, configuration.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pmi::{Aggregation, PathScore};

/// A multiple-choice (or free-form) question to reason about.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Question {
    pub id: String,
    pub body: String,
    /// Ordered `(label, text)` pairs; may be empty for free-form questions.
    pub options: Vec<(String, String)>,
    pub gold_label: Option<String>,
}

impl Question {
    pub fn new(
        id: impl Into<String>,
        body: impl Into<String>,
        options: Vec<(String, String)>,
        gold_label: Option<String>,
    ) -> Result<Self, TypeError> {
        let q = Self { id: id.into(), body: body.into(), options, gold_label };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<(), TypeError> {
        if self.body.trim().is_empty() {
            return Err(TypeError::Invalid("question body is empty".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for (label, _) in &self.options {
            if label.is_empty() {
                return Err(TypeError::Invalid("empty option label".into()));
            }
            if !seen.insert(label.as_str()) {
                return Err(TypeError::Invalid(format!("duplicate option label {label:?}")));
            }
        }
        Ok(())
    }
}

/// One generated reasoning step with its sampling-time statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReasoningStep {
    pub text: String,
    /// Per-token log-probabilities (nats) under the full conditional context.
    pub token_logprobs_conditional: Vec<f64>,
    /// Per-token full-vocabulary entropies (nats) of the sampling distribution.
    pub token_entropies: Vec<f64>,
}

impl ReasoningStep {
    pub fn new(
        text: impl Into<String>,
        token_logprobs_conditional: Vec<f64>,
        token_entropies: Vec<f64>,
    ) -> Result<Self, TypeError> {
        let step = Self { text: text.into(), token_logprobs_conditional, token_entropies };
        step.validate()?;
        Ok(step)
    }

    pub fn validate(&self) -> Result<(), TypeError> {
        if self.text.is_empty() {
            return Err(TypeError::Invalid("step text is empty".into()));
        }
        if self.token_logprobs_conditional.is_empty()
            || self.token_logprobs_conditional.len() != self.token_entropies.len()
        {
            return Err(TypeError::Invalid(
                "token logprob and entropy lists must be equal and non-empty".into(),
            ));
        }
        if self.token_logprobs_conditional.iter().any(|lp| !lp.is_finite() || *lp > 0.0) {
            return Err(TypeError::Invalid("token logprobs must be finite and <= 0".into()));
        }
        if self.token_entropies.iter().any(|h| !h.is_finite() || *h < 0.0) {
            return Err(TypeError::Invalid("token entropies must be finite and >= 0".into()));
        }
        Ok(())
    }

    /// Total log-probability of the step under the conditional context.
    pub fn logp_conditional(&self) -> f64 {
        self.token_logprobs_conditional.iter().sum()
    }
}

/// Dual-context score of a single step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepScore {
    /// log p(s_i | q, s_1..s_{i-1}), nats.
    pub logp_conditional: f64,
    /// log p(s_i | s_1..s_{i-1}), nats.
    pub logp_marginal: f64,
    /// logp_conditional - logp_marginal.
    pub pmi_delta: f64,
}

impl StepScore {
    pub fn new(logp_conditional: f64, logp_marginal: f64) -> Result<Self, TypeError> {
        let pmi_delta = crate::pmi::pmi_delta(logp_conditional, logp_marginal)
            .map_err(|e| TypeError::Invalid(e.to_string()))?;
        Ok(Self { logp_conditional, logp_marginal, pmi_delta })
    }
}

/// A node of the search tree (the root is implicit and holds the question).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchNode {
    /// Global creation order within the tree, starting at 0. Pruned siblings
    /// consume indices too, so surviving paths show sparse index sequences.
    pub index: usize,
    /// Root is depth 0; every real node has depth >= 1.
    pub depth: usize,
    /// `None` means the parent is the root.
    pub parent: Option<usize>,
    pub step: ReasoningStep,
    pub score: StepScore,
    /// Running PMI sum along the root path (nats); root contributes 0.
    pub cumulative_pmi: f64,
    /// Running conditional log-probability along the root path (nats).
    pub cumulative_logp_cond: f64,
    /// Mean per-token entropy of this step (nats).
    pub step_entropy: f64,
    pub terminal: bool,
    /// Extracted answer label, present iff terminal.
    pub answer: Option<String>,
    /// Pruned nodes stay in the tree for tracing but leave the frontier.
    pub pruned: bool,
}

/// Frontier sizes and node counts recorded per expanded level.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LevelStat {
    pub depth: usize,
    pub frontier_size: usize,
    pub nodes_created: usize,
}

/// The search tree for one question. Single-writer: all mutation happens on
/// one control thread; snapshots may be shared read-only.
#[derive(Debug, Clone)]
pub struct SearchTree {
    pub question: Question,
    pub nodes: Vec<SearchNode>,
    /// One mean-entropy entry per created node, in creation order (H_{1:m}).
    pub entropy_history: Vec<f64>,
    /// Expansion points for the next level; `None` is the root.
    pub frontier: Vec<Option<usize>>,
    pub level_stats: Vec<LevelStat>,
}

impl SearchTree {
    /// Fresh tree: zero nodes, empty entropy history, frontier = {root}.
    pub fn new(question: Question) -> Result<Self, TypeError> {
        question.validate()?;
        Ok(Self {
            question,
            nodes: Vec::new(),
            entropy_history: Vec::new(),
            frontier: vec![None],
            level_stats: Vec::new(),
        })
    }

    /// Number of nodes created so far (symbol m).
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn depth_of(&self, parent: Option<usize>) -> usize {
        match parent {
            None => 0,
            Some(i) => self.nodes[i].depth,
        }
    }

    fn cumulative_of(&self, parent: Option<usize>) -> (f64, f64) {
        match parent {
            None => (0.0, 0.0),
            Some(i) => (self.nodes[i].cumulative_pmi, self.nodes[i].cumulative_logp_cond),
        }
    }

    /// Append a child under `parent`, extending cumulative scores and the
    /// entropy history. The new node's index equals the previous node count.
    pub fn attach_node(
        &mut self,
        parent: Option<usize>,
        step: ReasoningStep,
        score: StepScore,
        entropy: f64,
        max_depth: usize,
    ) -> Result<usize, TreeError> {
        if let Some(i) = parent {
            if i >= self.nodes.len() {
                return Err(TreeError::UnknownParent(i));
            }
            if self.nodes[i].terminal {
                return Err(TreeError::ParentTerminal(i));
            }
        }
        let parent_depth = self.depth_of(parent);
        if parent_depth >= max_depth {
            return Err(TreeError::DepthCapped { parent_depth, max_depth });
        }
        let (cum_pmi, cum_cond) = self.cumulative_of(parent);
        let index = self.nodes.len();
        self.nodes.push(SearchNode {
            index,
            depth: parent_depth + 1,
            parent,
            cumulative_pmi: cum_pmi + score.pmi_delta,
            cumulative_logp_cond: cum_cond + score.logp_conditional,
            step,
            score,
            step_entropy: entropy,
            terminal: false,
            answer: None,
            pruned: false,
        });
        self.entropy_history.push(entropy);
        Ok(index)
    }

    /// Root-to-node path as node indices (depth 1 first).
    pub fn path_to(&self, node: usize) -> Vec<usize> {
        let mut path = Vec::new();
        let mut cur = Some(node);
        while let Some(i) = cur {
            path.push(i);
            cur = self.nodes[i].parent;
        }
        path.reverse();
        path
    }

    /// Step texts along the root path of `parent` (empty for the root).
    pub fn prior_step_texts(&self, parent: Option<usize>) -> Vec<String> {
        match parent {
            None => Vec::new(),
            Some(i) => self.path_to(i).iter().map(|&j| self.nodes[j].step.text.clone()).collect(),
        }
    }
}

/// A root-to-terminal (or depth-capped) reasoning path.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReasoningChain {
    /// Node indices from depth 1 to the last step.
    pub node_indices: Vec<usize>,
    /// Cumulative / normalized PMI over the path.
    pub score: PathScore,
    /// Cumulative / normalized conditional log-probability over the path
    /// (used by the likelihood-only diagnostic ranking).
    pub likelihood: PathScore,
    /// Extracted answer label; present iff `complete`.
    pub answer: Option<String>,
    pub complete: bool,
    /// Creation order among extracted chains, used as a deterministic tie-break.
    pub order: usize,
}

/// Which per-path quantity drives ranking and voting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreSource {
    /// Normal operation: PMI-based scores.
    Pmi,
    /// Diagnostic: conditional log-probability only (ignores the marginal).
    ConditionalOnly,
}

/// All run hyperparameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Beam width B: non-terminal paths retained per level.
    pub beam_width: usize,
    /// Default candidate count per frontier node.
    pub n_base: usize,
    /// Proportional gain for dynamic sampling.
    pub v_p: f64,
    pub max_depth: usize,
    pub max_new_tokens: usize,
    pub temperature: f64,
    pub top_k: usize,
    pub top_p: f64,
    /// Top-K chains entering the weighted vote.
    pub vote_k: usize,
    pub aggregation: Aggregation,
    /// Full expansion without beam pruning (the -F variant).
    pub full_expand: bool,
    /// Dynamic sampling stays off until the entropy history has this many entries.
    pub dynamic_sampling_min_history: usize,
    pub seed: u64,
    /// Safety cap on total nodes per tree; full expansion truncates here.
    pub max_nodes: usize,
    pub score_source: ScoreSource,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            beam_width: 32,
            n_base: 3,
            v_p: 1.0,
            max_depth: 10,
            max_new_tokens: 512,
            temperature: 0.9,
            top_k: 100,
            top_p: 0.96,
            vote_k: 32,
            aggregation: Aggregation::Average,
            full_expand: false,
            dynamic_sampling_min_history: 10,
            seed: 0,
            max_nodes: 4096,
            score_source: ScoreSource::Pmi,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), TypeError> {
        if self.beam_width < 1 {
            return Err(TypeError::Invalid("beam_width must be >= 1".into()));
        }
        if self.n_base < 1 {
            return Err(TypeError::Invalid("n_base must be >= 1".into()));
        }
        if self.max_depth < 1 {
            return Err(TypeError::Invalid("max_depth must be >= 1".into()));
        }
        if self.vote_k < 1 {
            return Err(TypeError::Invalid("vote_k must be >= 1".into()));
        }
        if !(self.temperature > 0.0) {
            return Err(TypeError::Invalid("temperature must be > 0".into()));
        }
        if !(self.top_p > 0.0 && self.top_p <= 1.0) {
            return Err(TypeError::Invalid("top_p must be in (0, 1]".into()));
        }
        if self.v_p <= 0.0 {
            return Err(TypeError::Invalid("v_p must be > 0".into()));
        }
        if self.max_nodes < 1 {
            return Err(TypeError::Invalid("max_nodes must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum TypeError {
    #[error("invalid value: {0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("parent node {0} does not belong to this tree")]
    UnknownParent(usize),
    #[error("parent node {0} is terminal")]
    ParentTerminal(usize),
    #[error("parent at depth {parent_depth} is at the depth cap {max_depth}")]
    DepthCapped { parent_depth: usize, max_depth: usize },
}
