//! Level-synchronous tree construction: dynamic sampling proposes candidate
//! steps, dual-context scoring prices them, beam pruning keeps the top-B
//! non-terminal paths, and terminal paths are collected as reasoning chains.
//! Full expansion (no pruning) is a config flag, bounded by a node cap.

use std::sync::Arc;
use std::sync::OnceLock;

use regex::Regex;
use thiserror::Error;

use crate::backend::{
    mix_seed, BackendError, DecodeParams, GenerationContext, LanguageModel, ScoredContinuation,
};
use crate::entropy::{sample_count, SamplerConfig};
use crate::pmi::{ranking_score, PathScore};
use crate::types::{
    LevelStat, Question, ReasoningChain, ReasoningStep, RunConfig, ScoreSource, SearchTree,
    StepScore, TreeError,
};

/// Instruction preamble and question text used to build conditional contexts.
#[derive(Debug, Clone, PartialEq)]
pub struct PromptSpec {
    /// Task sentence + step-by-step sentence + bracket-answer sentence.
    pub instruction: String,
    /// Question body followed by the option lines.
    pub question_text: String,
}

/// Generator/evaluator pair. The evaluator defaults to the generator; when
/// the handles are distinct, conditional logprobs are rescored by the
/// evaluator instead of reusing the generator's sampling-time values.
#[derive(Clone)]
pub struct Backends {
    pub generator: Arc<dyn LanguageModel>,
    pub evaluator: Arc<dyn LanguageModel>,
}

impl Backends {
    pub fn shared(backend: Arc<dyn LanguageModel>) -> Self {
        Self { generator: backend.clone(), evaluator: backend }
    }

    pub fn split(generator: Arc<dyn LanguageModel>, evaluator: Arc<dyn LanguageModel>) -> Self {
        Self { generator, evaluator }
    }

    pub fn evaluator_is_generator(&self) -> bool {
        Arc::ptr_eq(&self.generator, &self.evaluator)
    }
}

/// One scored candidate awaiting the beam decision.
#[derive(Debug, Clone)]
pub struct FrontierCandidate {
    pub parent: Option<usize>,
    pub node: usize,
    pub candidate_cumulative: f64,
    pub candidate_normalized: f64,
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid run config: {0}")]
    Config(String),
    #[error("level at depth {depth} produced no usable candidate (last error: {last_error})")]
    LevelFailed { depth: usize, last_error: String },
    #[error("search produced no reasoning chains")]
    NoChains,
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Extract the answer label from a bracketed marker like `[B. False]`;
/// the last occurrence wins.
pub fn is_terminal(step_text: &str) -> Option<String> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| Regex::new(r"\[([A-Za-z0-9]+)\.[^\]]*\]").unwrap());
    re.captures_iter(step_text).last().map(|c| c[1].to_string())
}

/// Tree plus all extracted chains, in chain creation order.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub tree: SearchTree,
    pub chains: Vec<ReasoningChain>,
    /// True when the node cap cut expansion short.
    pub truncated: bool,
}

fn chain_from_node(
    tree: &SearchTree,
    node: usize,
    order: usize,
    complete: bool,
) -> ReasoningChain {
    let n = &tree.nodes[node];
    ReasoningChain {
        node_indices: tree.path_to(node),
        score: PathScore::new(n.cumulative_pmi, n.depth),
        likelihood: PathScore::new(n.cumulative_logp_cond, n.depth),
        answer: n.answer.clone(),
        complete,
        order,
    }
}

fn rank_key(tree: &SearchTree, node: usize, cfg: &RunConfig) -> f64 {
    let n = &tree.nodes[node];
    let path = match cfg.score_source {
        ScoreSource::Pmi => PathScore::new(n.cumulative_pmi, n.depth),
        ScoreSource::ConditionalOnly => PathScore::new(n.cumulative_logp_cond, n.depth),
    };
    ranking_score(&path, cfg.aggregation)
}

struct LevelContext<'a> {
    prompt: &'a PromptSpec,
    backends: &'a Backends,
    cfg: &'a RunConfig,
    sampler: SamplerConfig,
}

// Generate and dual-score one candidate; transport/scoring failures drop the
// candidate rather than aborting the level.
fn propose_candidate(
    tree: &SearchTree,
    parent: Option<usize>,
    slot: usize,
    lc: &LevelContext<'_>,
) -> Result<(ScoredContinuation, StepScore), BackendError> {
    let prior = tree.prior_step_texts(parent);
    let cond_ctx = GenerationContext::conditional(
        lc.prompt.instruction.clone(),
        lc.prompt.question_text.clone(),
        prior.clone(),
    );
    let parent_coord = parent.map(|i| i as u64).unwrap_or(u64::MAX);
    let seed = mix_seed(lc.cfg.seed, parent_coord, slot as u64);
    let params = DecodeParams::from_config(lc.cfg, seed);
    let generated = lc.backends.generator.generate_step(&cond_ctx, &params)?;

    let logp_conditional = if lc.backends.evaluator_is_generator() {
        generated.total_logprob()
    } else {
        lc.backends.evaluator.score_continuation(&cond_ctx, &generated.text)?.total_logprob()
    };
    let marg_ctx = GenerationContext::marginal(prior);
    let logp_marginal =
        lc.backends.evaluator.score_continuation(&marg_ctx, &generated.text)?.total_logprob();
    let score = StepScore::new(logp_conditional, logp_marginal)
        .map_err(|e| BackendError::Scoring(e.to_string()))?;
    Ok((generated, score))
}

/// Expand every frontier node by one level: sample candidates, score them in
/// both contexts, attach all of them (pruned or not) for tracing, collect
/// terminal chains, and keep the top-B non-terminal candidates as the new
/// frontier (all of them under full expansion).
pub fn expand_level(
    tree: &mut SearchTree,
    prompt: &PromptSpec,
    backends: &Backends,
    cfg: &RunConfig,
    chains: &mut Vec<ReasoningChain>,
) -> Result<bool, SearchError> {
    // Bypass the n_base - delta_cap >= 1 constructor check: sample_count
    // already floors the result at one candidate.
    let sampler = SamplerConfig {
        n_base: cfg.n_base,
        v_p: cfg.v_p,
        min_history: cfg.dynamic_sampling_min_history,
        delta_cap: 2,
    };
    let lc = LevelContext { prompt, backends, cfg, sampler };

    // Snapshot at the level barrier so intra-level completion order can never
    // influence thresholds.
    let frontier = tree.frontier.clone();
    let history_snapshot = tree.entropy_history.clone();
    let depth = frontier.first().map(|p| tree.depth_of_ref(*p)).unwrap_or(0) + 1;

    let mut survivors: Vec<usize> = Vec::new();
    let mut created = 0usize;
    let mut truncated = false;
    let mut last_error = String::from("none");

    for &parent in &frontier {
        let n = match parent {
            None => lc.sampler.n_base,
            Some(i) => sample_count(tree.nodes[i].step_entropy, &history_snapshot, &lc.sampler),
        };
        let mut seen_texts: Vec<String> = Vec::new();
        for slot in 0..n {
            if tree.node_count() >= cfg.max_nodes {
                eprintln!(
                    "warning: node cap {} reached at depth {depth}; truncating expansion",
                    cfg.max_nodes
                );
                truncated = true;
                break;
            }
            let (generated, score) = match propose_candidate(tree, parent, slot, &lc) {
                Ok(ok) => ok,
                Err(e) => {
                    eprintln!("warning: candidate dropped at depth {depth}: {e}");
                    last_error = e.to_string();
                    continue;
                }
            };
            let entropies = generated
                .token_entropies
                .clone()
                .unwrap_or_else(|| vec![0.0; generated.token_logprobs.len()]);
            let step = match ReasoningStep::new(
                generated.text.clone(),
                generated.token_logprobs.clone(),
                entropies.clone(),
            ) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("warning: candidate dropped at depth {depth}: {e}");
                    last_error = e.to_string();
                    continue;
                }
            };
            let entropy = crate::entropy::step_entropy(&step.token_entropies)
                .unwrap_or(0.0);
            let node = tree.attach_node(parent, step, score, entropy, cfg.max_depth)?;
            tree.nodes[node].step_entropy = entropy;
            created += 1;

            // Identical sampled texts under one parent add no information;
            // keep the first by sampling order, retain the rest only as
            // pruned trace nodes.
            if seen_texts.iter().any(|t| t == &generated.text) {
                tree.nodes[node].pruned = true;
                continue;
            }
            seen_texts.push(generated.text.clone());

            if let Some(label) = is_terminal(&generated.text) {
                tree.nodes[node].terminal = true;
                tree.nodes[node].answer = Some(label);
                chains.push(chain_from_node(tree, node, chains.len(), true));
            } else {
                survivors.push(node);
            }
        }
        if truncated {
            break;
        }
    }

    if created == 0 {
        return Err(SearchError::LevelFailed { depth, last_error });
    }

    // Beam decision over all non-terminal candidates pooled across parents;
    // ties break toward the lower node index.
    if !cfg.full_expand && survivors.len() > cfg.beam_width {
        survivors.sort_by(|&a, &b| {
            rank_key(tree, b, cfg)
                .partial_cmp(&rank_key(tree, a, cfg))
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        for &dropped in &survivors[cfg.beam_width..] {
            tree.nodes[dropped].pruned = true;
        }
        survivors.truncate(cfg.beam_width);
        survivors.sort_unstable();
    }

    tree.level_stats.push(LevelStat { depth, frontier_size: frontier.len(), nodes_created: created });
    tree.frontier = survivors.into_iter().map(Some).collect();
    Ok(truncated)
}

impl SearchTree {
    fn depth_of_ref(&self, parent: Option<usize>) -> usize {
        match parent {
            None => 0,
            Some(i) => self.nodes[i].depth,
        }
    }
}

/// Build the full tree for one question and extract all chains: terminal
/// paths are complete; depth-capped (or cap-truncated) frontier paths are
/// collected as incomplete.
pub fn run_search(
    question: &Question,
    prompt: &PromptSpec,
    backends: &Backends,
    cfg: &RunConfig,
) -> Result<SearchOutcome, SearchError> {
    cfg.validate().map_err(|e| SearchError::Config(e.to_string()))?;
    let mut tree =
        SearchTree::new(question.clone()).map_err(|e| SearchError::Config(e.to_string()))?;
    let mut chains = Vec::new();
    let mut truncated = false;

    while !tree.frontier.is_empty() {
        let frontier_depth = tree.depth_of_ref(tree.frontier[0]);
        if frontier_depth >= cfg.max_depth {
            break;
        }
        truncated = expand_level(&mut tree, prompt, backends, cfg, &mut chains)?;
        if truncated {
            break;
        }
    }

    // Whatever is still on the frontier ran out of depth (or node budget)
    // without an answer.
    for &node in tree.frontier.clone().iter().flatten() {
        chains.push(chain_from_node(&tree, node, chains.len(), false));
    }

    if chains.is_empty() {
        return Err(SearchError::NoChains);
    }
    Ok(SearchOutcome { tree, chains, truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::mock::{MockBackend, MockEntry, MockTable};
    use crate::pmi::Aggregation;

    fn question() -> Question {
        Question::new(
            "q1",
            "Is 2 even?",
            vec![("A".into(), "True".into()), ("B".into(), "False".into())],
            Some("A".into()),
        )
        .unwrap()
    }

    fn prompt() -> PromptSpec {
        PromptSpec {
            instruction: "Answer the question.".into(),
            question_text: "Is 2 even?\nA. True\nB. False".into(),
        }
    }

    fn shared(table: MockTable) -> Backends {
        Backends::shared(Arc::new(MockBackend::new(table).unwrap()))
    }

    // Every depth-1 step carries a bracketed answer.
    fn immediate_terminal_table() -> MockTable {
        let mut t = MockTable::new();
        t.add_conditional(
            &[],
            vec![
                MockEntry::new("Yes. [A. True]", 3.0),
                MockEntry::new("No. [B. False]", 1.0),
            ],
        );
        t.add_marginal(
            &[],
            vec![
                MockEntry::new("Yes. [A. True]", 1.0),
                MockEntry::new("No. [B. False]", 1.0),
            ],
        );
        t
    }

    // Two-level grammar: a reasoning step, then a terminal step.
    fn two_level_table() -> MockTable {
        let mut t = MockTable::new();
        let s1a = "Think about parity.";
        let s1b = "Consider the number 2.";
        t.add_conditional(
            &[],
            vec![MockEntry::new(s1a, 2.0), MockEntry::new(s1b, 1.0)],
        );
        t.add_marginal(
            &[],
            vec![MockEntry::new(s1a, 1.0), MockEntry::new(s1b, 3.0)],
        );
        for s1 in [s1a, s1b] {
            t.add_conditional(
                &[s1],
                vec![
                    MockEntry::new("So the answer is [A. True].", 3.0),
                    MockEntry::new("So the answer is [B. False].", 1.0),
                ],
            );
            t.add_marginal(
                &[s1],
                vec![
                    MockEntry::new("So the answer is [A. True].", 1.0),
                    MockEntry::new("So the answer is [B. False].", 1.0),
                ],
            );
        }
        t
    }

    #[test]
    fn terminal_detection_examples() {
        assert_eq!(is_terminal("...Therefore, the answer is [B. barn]."), Some("B".into()));
        assert_eq!(is_terminal("...The answer is [B. False]."), Some("B".into()));
        assert_eq!(is_terminal("Step reasoning with no brackets"), None);
        // Last occurrence wins.
        assert_eq!(is_terminal("[A. x] then finally [C. z]"), Some("C".into()));
    }

    #[test]
    fn immediate_terminals_yield_single_step_chains() {
        let cfg = RunConfig { seed: 5, ..RunConfig::default() };
        let out = run_search(&question(), &prompt(), &shared(immediate_terminal_table()), &cfg)
            .unwrap();
        assert!(!out.chains.is_empty());
        assert!(out.chains.iter().all(|c| c.complete && c.score.n_steps == 1));
        assert!(out.tree.frontier.is_empty());
    }

    #[test]
    fn gate_active_root_generates_n_base_children() {
        let cfg = RunConfig { seed: 1, ..RunConfig::default() };
        let mut tree = SearchTree::new(question()).unwrap();
        let mut chains = Vec::new();
        expand_level(
            &mut tree,
            &prompt(),
            &shared(immediate_terminal_table()),
            &cfg,
            &mut chains,
        )
        .unwrap();
        assert_eq!(tree.node_count(), 3);
    }

    #[test]
    fn beam_keeps_top_b_by_normalized_pmi() {
        // Three distinct non-terminal step texts with different PMI.
        let mut t = MockTable::new();
        t.add_conditional(
            &[],
            vec![
                MockEntry::new("alpha", 8.0),
                MockEntry::new("beta", 4.0),
                MockEntry::new("gamma", 1.0),
            ],
        );
        t.add_marginal(
            &[],
            vec![
                MockEntry::new("alpha", 1.0),
                MockEntry::new("beta", 4.0),
                MockEntry::new("gamma", 8.0),
            ],
        );
        for s in ["alpha", "beta", "gamma"] {
            t.add_conditional(&[s], vec![MockEntry::new("[A. True]", 1.0)]);
            t.add_marginal(&[s], vec![MockEntry::new("[A. True]", 1.0)]);
        }
        let cfg = RunConfig { beam_width: 2, n_base: 12, seed: 3, ..RunConfig::default() };
        let mut tree = SearchTree::new(question()).unwrap();
        let mut chains = Vec::new();
        expand_level(&mut tree, &prompt(), &shared(t), &cfg, &mut chains).unwrap();
        assert!(tree.frontier.len() <= 2);
        // alpha has the highest PMI and must survive; gamma the lowest.
        let surviving: Vec<&str> = tree
            .frontier
            .iter()
            .flatten()
            .map(|&i| tree.nodes[i].step.text.as_str())
            .collect();
        assert!(surviving.contains(&"alpha"));
        assert!(!surviving.contains(&"gamma"));
    }

    #[test]
    fn wide_beam_equals_full_expand() {
        let q = question();
        let cfg_beam = RunConfig {
            beam_width: 1000,
            n_base: 4,
            seed: 11,
            ..RunConfig::default()
        };
        let cfg_full = RunConfig { full_expand: true, ..cfg_beam.clone() };
        let b = shared(two_level_table());
        let a = run_search(&q, &prompt(), &b, &cfg_beam).unwrap();
        let f = run_search(&q, &prompt(), &b, &cfg_full).unwrap();
        let key = |c: &ReasoningChain| {
            (c.answer.clone(), format!("{:.12}", c.score.cumulative), c.score.n_steps)
        };
        let mut ka: Vec<_> = a.chains.iter().map(key).collect();
        let mut kf: Vec<_> = f.chains.iter().map(key).collect();
        ka.sort();
        kf.sort();
        assert_eq!(ka, kf);
    }

    #[test]
    fn depth_cap_flags_incomplete_chain() {
        // Non-terminal self-looping grammar: never answers.
        let mut t = MockTable::new();
        t.add_conditional(&[], vec![MockEntry::new("loop", 1.0)]);
        t.add_marginal(&[], vec![MockEntry::new("loop", 1.0)]);
        // Chains of "loop" repeated up to depth 3.
        let l1 = ["loop"];
        let l2 = ["loop", "loop"];
        for steps in [&l1[..], &l2[..]] {
            t.add_conditional(steps, vec![MockEntry::new("loop", 1.0)]);
            t.add_marginal(steps, vec![MockEntry::new("loop", 1.0)]);
        }
        let cfg = RunConfig { max_depth: 3, n_base: 1, seed: 0, ..RunConfig::default() };
        let out = run_search(&question(), &prompt(), &shared(t), &cfg).unwrap();
        assert_eq!(out.chains.len(), 1);
        assert!(!out.chains[0].complete);
        assert_eq!(out.chains[0].answer, None);
        assert_eq!(out.chains[0].score.n_steps, 3);
    }

    #[test]
    fn deterministic_across_runs() {
        let cfg = RunConfig { seed: 21, ..RunConfig::default() };
        let b = shared(two_level_table());
        let a = run_search(&question(), &prompt(), &b, &cfg).unwrap();
        let c = run_search(&question(), &prompt(), &b, &cfg).unwrap();
        let dump = |o: &SearchOutcome| {
            o.tree
                .nodes
                .iter()
                .map(|n| format!("{}|{}|{}|{:.15}", n.index, n.depth, n.step.text, n.cumulative_pmi))
                .collect::<Vec<_>>()
                .join(";")
        };
        assert_eq!(dump(&a), dump(&c));
        assert_eq!(a.chains.len(), c.chains.len());
    }

    #[test]
    fn node_cap_truncates_full_expansion() {
        let cfg = RunConfig {
            full_expand: true,
            max_nodes: 5,
            n_base: 4,
            seed: 2,
            ..RunConfig::default()
        };
        let out = run_search(&question(), &prompt(), &shared(two_level_table()), &cfg).unwrap();
        assert!(out.tree.node_count() <= 5);
    }

    #[test]
    fn aggregation_sum_ranks_by_cumulative() {
        let cfg = RunConfig { aggregation: Aggregation::Sum, seed: 9, ..RunConfig::default() };
        let out = run_search(&question(), &prompt(), &shared(two_level_table()), &cfg).unwrap();
        assert!(!out.chains.is_empty());
    }
}
