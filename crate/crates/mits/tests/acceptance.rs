//! Acceptance suite: one test per criterion, each printing a pass line.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mits::backend::mock::{word_tokens, MockBackend, MockEntry, MockTable};
use mits::backend::{
    BackendError, ContextMode, DecodeParams, GenerationContext, LanguageModel, ScoredContinuation,
};
use mits::bench::dataset::DatasetRecord;
use mits::bench::{fixtures, run_benchmark, trace, BenchOptions};
use mits::entropy::{delta_n, sample_count, step_entropy, thresholds, SamplerConfig};
use mits::pmi::{accumulate, batch_pmi, ranking_score, Aggregation, PathScore};
use mits::search::{run_search, Backends, PromptSpec};
use mits::types::{Question, ReasoningChain, RunConfig, ScoreSource, StepScore};
use mits::voting::{weighted_vote, weighted_vote_by};

fn question() -> Question {
    Question::new(
        "q",
        "Which branch is planted?",
        vec![("A".into(), "generic".into()), ("B".into(), "specific".into())],
        Some("B".into()),
    )
    .unwrap()
}

fn prompt() -> PromptSpec {
    PromptSpec {
        instruction: "Answer the question.".into(),
        question_text: "Which branch is planted?\nA. generic\nB. specific".into(),
    }
}

fn shared(table: MockTable) -> Backends {
    Backends::shared(Arc::new(MockBackend::new(table).unwrap()))
}

// ---------------------------------------------------------------------------
// 1. Pinned trace fixtures
// ---------------------------------------------------------------------------

#[test]
fn acceptance_01_fixture_suite() {
    let start = std::time::Instant::now();
    let results = fixtures::check_all(0.02);
    assert_eq!(results.len(), 12);
    for (line, ok) in &results {
        assert!(ok, "{line}");
    }
    assert!(start.elapsed().as_secs_f64() < 1.0);
    println!("PASS criterion 1: all 12 fixture nodes match recorded PMI within 0.02");
}

// ---------------------------------------------------------------------------
// 2. Recurrence vs direct sum
// ---------------------------------------------------------------------------

#[test]
fn acceptance_02_recurrence_equals_batch() {
    let start = std::time::Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=10);
        let scores: Vec<StepScore> = (0..n)
            .map(|_| {
                StepScore::new(-rng.gen_range(0.0..300.0), -rng.gen_range(0.0..300.0)).unwrap()
            })
            .collect();
        let direct = batch_pmi(&scores);
        let incremental = scores
            .iter()
            .fold(PathScore::ZERO, |acc, s| accumulate(acc, s.pmi_delta));
        assert!((direct.cumulative - incremental.cumulative).abs() <= 1e-9);
        assert!((direct.normalized - incremental.normalized).abs() <= 1e-9);
    }
    assert!(start.elapsed().as_secs_f64() < 1.0);
    println!("PASS criterion 2: 1000 random sequences, |incremental - direct| <= 1e-9");
}

// ---------------------------------------------------------------------------
// 3. Beam/full equivalence on random grammars
// ---------------------------------------------------------------------------

// Random two/three-level grammar with distinct step texts per context and
// bracketed answers at the leaves.
fn random_table(seed: u64) -> MockTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = MockTable::new();
    let labels = ["A", "B", "C"];
    let weight = |rng: &mut ChaCha8Rng| rng.gen_range(0.2..5.0f64);

    let root_steps: Vec<String> = (0..rng.gen_range(2..=4))
        .map(|i| format!("root thought {i} about the problem"))
        .collect();
    t.add_conditional(
        &[],
        root_steps.iter().map(|s| MockEntry::new(s.clone(), weight(&mut rng))).collect(),
    );
    let mut rng2 = ChaCha8Rng::seed_from_u64(seed ^ 0xdead);
    t.add_marginal(
        &[],
        root_steps.iter().map(|s| MockEntry::new(s.clone(), weight(&mut rng2))).collect(),
    );

    for s1 in &root_steps {
        // Mix of terminal and non-terminal continuations at depth 2.
        let mut entries = Vec::new();
        let mut texts = Vec::new();
        for j in 0..rng.gen_range(2..=3usize) {
            let text = if rng.gen_bool(0.5) {
                format!("so the answer is [{}. choice]", labels[j % labels.len()])
            } else {
                format!("further thought {j} on {s1}")
            };
            texts.push(text.clone());
            entries.push(MockEntry::new(text, weight(&mut rng)));
        }
        t.add_conditional(&[s1], entries.clone());
        t.add_marginal(
            &[s1],
            texts.iter().map(|x| MockEntry::new(x.clone(), weight(&mut rng2))).collect(),
        );
        // Depth-3 contexts under every non-terminal depth-2 step: all terminal.
        for text in &texts {
            if !text.contains('[') {
                let leaves: Vec<MockEntry> = (0..2)
                    .map(|j| {
                        MockEntry::new(
                            format!("conclude [{}. leaf {j}]", labels[j]),
                            weight(&mut rng),
                        )
                    })
                    .collect();
                let leaf_texts: Vec<String> =
                    leaves.iter().map(|e| e.text.clone()).collect();
                t.add_conditional(&[s1, text], leaves);
                t.add_marginal(
                    &[s1, text],
                    leaf_texts
                        .iter()
                        .map(|x| MockEntry::new(x.clone(), weight(&mut rng2)))
                        .collect(),
                );
            }
        }
    }
    t
}

fn chain_keys(chains: &[ReasoningChain]) -> Vec<(Option<String>, String, usize, bool)> {
    let mut keys: Vec<_> = chains
        .iter()
        .map(|c| {
            (c.answer.clone(), format!("{:.12}", c.score.cumulative), c.score.n_steps, c.complete)
        })
        .collect();
    keys.sort();
    keys
}

#[test]
fn acceptance_03_beam_full_equivalence() {
    let start = std::time::Instant::now();
    for seed in 0..50u64 {
        let table = random_table(seed);
        let backends = shared(table);
        let base = RunConfig {
            beam_width: 10_000, // >= any per-level candidate count
            n_base: 4,
            max_depth: 4,
            seed: seed.wrapping_mul(31).wrapping_add(7),
            ..RunConfig::default()
        };
        let full = RunConfig { full_expand: true, ..base.clone() };
        let a = run_search(&question(), &prompt(), &backends, &base).unwrap();
        let b = run_search(&question(), &prompt(), &backends, &full).unwrap();
        assert_eq!(chain_keys(&a.chains), chain_keys(&b.chains), "seed {seed}");
        let va = weighted_vote(&a.chains, base.vote_k, base.aggregation);
        let vb = weighted_vote(&b.chains, full.vote_k, full.aggregation);
        match (va, vb) {
            (Ok(x), Ok(y)) => assert_eq!(x.selected_answer, y.selected_answer, "seed {seed}"),
            (Err(_), Err(_)) => {}
            other => panic!("seed {seed}: vote outcomes diverge: {other:?}"),
        }
    }
    assert!(start.elapsed().as_secs_f64() < 10.0);
    println!("PASS criterion 3: beam (B >= all candidates) == full expansion on 50 seeded trees");
}

// ---------------------------------------------------------------------------
// 4. Entropy and thresholds
// ---------------------------------------------------------------------------

#[test]
fn acceptance_04_entropy_and_thresholds() {
    let uniform = (100f64).ln();
    assert!((step_entropy(&[uniform; 7]).unwrap() - uniform).abs() <= 1e-9);
    let history: Vec<f64> = (1..=100).map(f64::from).collect();
    let th = thresholds(&history).unwrap();
    assert!((th.h_low - 33.67).abs() <= 1e-9);
    assert!((th.h_high - 67.33).abs() <= 1e-9);
    let constant = thresholds(&[4.2; 9]).unwrap();
    assert_eq!(constant.h_low, constant.h_high);
    println!("PASS criterion 4: uniform entropy ln(100), thresholds (33.67, 67.33), constant history degenerate");
}

// ---------------------------------------------------------------------------
// 5. Dynamic sampling law
// ---------------------------------------------------------------------------

#[test]
fn acceptance_05_dynamic_sampling_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for _ in 0..10_000 {
        let h_low: f64 = rng.gen_range(-1.0..5.0);
        let h_high = h_low + rng.gen_range(0.0..4.0);
        let th = mits::entropy::EntropyThresholds { h_low, h_high, history_size: 20 };
        let cfg = SamplerConfig::new(3, rng.gen_range(0.05..4.0), 10).unwrap();
        let h1: f64 = rng.gen_range(-3.0..9.0);
        let h2: f64 = rng.gen_range(-3.0..9.0);
        let d1 = delta_n(h1, &th, &cfg);
        let d2 = delta_n(h2, &th, &cfg);
        assert!((-2..=2).contains(&d1));
        // Monotone in h.
        if h1 <= h2 {
            assert!(d1 <= d2, "h {h1} -> {d1}, h {h2} -> {d2}, band ({h_low},{h_high})");
        } else {
            assert!(d1 >= d2);
        }
        // Zero strictly inside the band.
        if h_high > h_low {
            let inside = h_low + (h_high - h_low) * rng.gen_range(0.001..0.999);
            assert_eq!(delta_n(inside, &th, &cfg), 0);
        }
    }
    // Gate and clamp with defaults.
    let defaults = SamplerConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(506);
    for _ in 0..1000 {
        let short: Vec<f64> = (0..rng.gen_range(0..10)).map(|_| rng.gen_range(0.0..5.0)).collect();
        assert_eq!(sample_count(rng.gen_range(-5.0..10.0), &short, &defaults), 3);
        let long: Vec<f64> = (0..rng.gen_range(10..40)).map(|_| rng.gen_range(0.0..5.0)).collect();
        let n = sample_count(rng.gen_range(-5.0..10.0), &long, &defaults);
        assert!((1..=5).contains(&n));
    }
    println!("PASS criterion 5: delta_n in [-2,2], monotone, zero in band; gate and [1,5] range hold");
}

// ---------------------------------------------------------------------------
// 6. Voting
// ---------------------------------------------------------------------------

fn vote_chain(score: f64, answer: &str, order: usize) -> ReasoningChain {
    ReasoningChain {
        node_indices: vec![],
        score: PathScore::new(score, 1),
        likelihood: PathScore::new(score, 1),
        answer: Some(answer.to_string()),
        complete: true,
        order,
    }
}

#[test]
fn acceptance_06_voting() {
    let chains = vec![
        vote_chain(3.0, "A", 0),
        vote_chain(2.0, "B", 1),
        vote_chain(1.9, "B", 2),
        vote_chain(1.8, "B", 3),
    ];
    let r = weighted_vote(&chains, 4, Aggregation::Average).unwrap();
    assert_eq!(r.selected_answer, "B");
    let expected = [0.75, 1.5, 1.425, 1.35];
    for (row, e) in r.table.iter().zip(expected) {
        assert!((row.weighted_score - e).abs() <= 1e-12);
    }
    let r1 = weighted_vote(&chains, 1, Aggregation::Average).unwrap();
    assert_eq!(r1.selected_answer, "A");

    // Positive-scale argmax invariance over random vote tables.
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=16);
        let chains: Vec<ReasoningChain> = (0..n)
            .map(|i| {
                vote_chain(rng.gen_range(0.01..40.0), ["A", "B", "C", "D"][rng.gen_range(0..4)], i)
            })
            .collect();
        let scale: f64 = rng.gen_range(0.001..1000.0);
        let scaled: Vec<ReasoningChain> = chains
            .iter()
            .map(|c| {
                let mut c2 = c.clone();
                c2.score = PathScore::new(c.score.cumulative * scale, c.score.n_steps);
                c2
            })
            .collect();
        let k = rng.gen_range(1..=10);
        let r1 = weighted_vote(&chains, k, Aggregation::Average).unwrap();
        let r2 = weighted_vote(&scaled, k, Aggregation::Average).unwrap();
        assert_eq!(r1.selected_chain, r2.selected_chain);
    }
    println!("PASS criterion 6: consensus override, K=1 argmax, scale invariance over 1000 tables");
}

// ---------------------------------------------------------------------------
// 7. End-to-end discrimination: PMI beats raw likelihood
// ---------------------------------------------------------------------------

const GENERIC_STEP: &str = "Let us think carefully about the question in general terms.";
const SPECIFIC_STEP: &str = "The planted fact specific to this question decides the matter.";
const GENERIC_FILLER: &str = "Common boilerplate continuation seen everywhere.";

fn planted_table() -> MockTable {
    let mut t = MockTable::new();
    // Generic branch: likely with or without the question (low PMI).
    // Specific branch: less likely overall but far less likely without the
    // question (high PMI).
    t.add_conditional(
        &[],
        vec![MockEntry::new(GENERIC_STEP, 0.6), MockEntry::new(SPECIFIC_STEP, 0.4)],
    );
    t.add_marginal(
        &[],
        vec![
            MockEntry::new(GENERIC_STEP, 0.85),
            MockEntry::new(SPECIFIC_STEP, 0.05),
            MockEntry::new(GENERIC_FILLER, 0.10),
        ],
    );
    let gen_a = "Hence the answer is [A. generic].";
    let gen_b = "Hence the answer is [B. specific].";
    t.add_conditional(
        &[GENERIC_STEP],
        vec![MockEntry::new(gen_a, 0.9), MockEntry::new(gen_b, 0.1)],
    );
    t.add_marginal(
        &[GENERIC_STEP],
        vec![
            MockEntry::new(gen_a, 0.7),
            MockEntry::new(gen_b, 0.1),
            MockEntry::new(GENERIC_FILLER, 0.2),
        ],
    );
    t.add_conditional(
        &[SPECIFIC_STEP],
        vec![MockEntry::new(gen_b, 0.8), MockEntry::new(gen_a, 0.2)],
    );
    t.add_marginal(
        &[SPECIFIC_STEP],
        vec![
            MockEntry::new(gen_b, 0.05),
            MockEntry::new(gen_a, 0.15),
            MockEntry::new(GENERIC_FILLER, 0.8),
        ],
    );
    t
}

// Exhaustive oracle: enumerate every root-to-leaf path in the table and
// compute exact normalized PMI and conditional likelihood.
fn enumerate_paths(t: &MockTable) -> Vec<(Vec<String>, f64, f64, Option<String>)> {
    fn normalized(entries: &[MockEntry], text: &str) -> f64 {
        let total: f64 = entries.iter().map(|e| e.weight).sum();
        let w = entries.iter().find(|e| e.text == text).map(|e| e.weight).unwrap_or(0.0);
        (w / total).ln()
    }
    let mut paths = Vec::new();
    let mut stack: Vec<(Vec<String>, f64, f64)> = vec![(vec![], 0.0, 0.0)];
    while let Some((steps, pmi, lik)) = stack.pop() {
        let key = MockTable::context_key(&steps);
        match t.conditional.get(&key) {
            Some(entries) => {
                for e in entries {
                    let lp_c = normalized(entries, &e.text);
                    let lp_m = t
                        .marginal
                        .get(&key)
                        .map(|m| normalized(m, &e.text))
                        .unwrap_or(f64::NEG_INFINITY);
                    let mut steps2 = steps.clone();
                    steps2.push(e.text.clone());
                    let pmi2 = pmi + (lp_c - lp_m);
                    let lik2 = lik + lp_c;
                    if mits::search::is_terminal(&e.text).is_some() {
                        let answer = mits::search::is_terminal(&e.text);
                        let n = steps2.len() as f64;
                        paths.push((steps2, pmi2 / n, lik2 / n, answer));
                    } else {
                        stack.push((steps2, pmi2, lik2));
                    }
                }
            }
            None => {
                let n = steps.len().max(1) as f64;
                paths.push((steps, pmi / n, lik / n, None));
            }
        }
    }
    paths
}

#[test]
fn acceptance_07_end_to_end_discrimination() {
    let start = std::time::Instant::now();
    let table = planted_table();

    // Ground truth from exhaustive enumeration.
    let paths = enumerate_paths(&table);
    let best_pmi = paths
        .iter()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    let best_lik = paths
        .iter()
        .max_by(|a, b| a.2.partial_cmp(&b.2).unwrap())
        .unwrap();
    assert_eq!(best_pmi.3.as_deref(), Some("B"), "planted branch must win on PMI");
    assert_eq!(best_lik.3.as_deref(), Some("A"), "generic branch must win on raw likelihood");

    let backends = shared(table);
    for seed in 0..20u64 {
        let cfg = RunConfig { n_base: 8, seed, ..RunConfig::default() };
        let out = run_search(&question(), &prompt(), &backends, &cfg).unwrap();
        // Every found chain must match an enumerated path exactly.
        for c in out.chains.iter().filter(|c| c.complete) {
            let found = paths.iter().any(|(_, pmi, _, ans)| {
                (pmi - c.score.normalized).abs() <= 1e-9 && *ans == c.answer
            });
            assert!(found, "seed {seed}: chain not in exhaustive enumeration");
        }
        let vote = weighted_vote(&out.chains, cfg.vote_k, cfg.aggregation).unwrap();
        assert_eq!(vote.selected_answer, "B", "seed {seed}: PMI ranking must pick the planted answer");

        // Likelihood-only diagnostic: pure argmax ranking by conditional
        // log-probability selects the generic branch instead.
        let diag_cfg = RunConfig { score_source: ScoreSource::ConditionalOnly, ..cfg.clone() };
        let diag = run_search(&question(), &prompt(), &backends, &diag_cfg).unwrap();
        let lik_vote = weighted_vote_by(&diag.chains, 1, |c| {
            ranking_score(&c.likelihood, Aggregation::Average)
        })
        .unwrap();
        assert_eq!(lik_vote.selected_answer, "A", "seed {seed}: likelihood-only must pick the generic answer");
    }
    assert!(start.elapsed().as_secs_f64() < 30.0);
    println!("PASS criterion 7: PMI selects planted answer, likelihood-only selects generic, 20/20 seeds");
}

// ---------------------------------------------------------------------------
// 8. Determinism across worker counts
// ---------------------------------------------------------------------------

#[test]
fn acceptance_08_determinism_across_workers() {
    let records: Vec<DatasetRecord> = (0..8)
        .map(|i| DatasetRecord {
            id: format!("q{i}"),
            question: "Which branch is planted?".into(),
            options: vec![("A".into(), "generic".into()), ("B".into(), "specific".into())],
            gold: "B".into(),
        })
        .collect();
    let backends = shared(planted_table());
    let cfg = RunConfig { n_base: 8, seed: 808, ..RunConfig::default() };

    let dir1 = tempfile::tempdir().unwrap();
    let dir8 = tempfile::tempdir().unwrap();
    let opts = |dir: &tempfile::TempDir, workers: usize| BenchOptions {
        workers,
        trace_dir: Some(dir.path().to_path_buf()),
        precise_traces: false,
    };
    let r1 = run_benchmark(&records, &backends, &cfg, &opts(&dir1, 1));
    let r8 = run_benchmark(&records, &backends, &cfg, &opts(&dir8, 8));

    // Reports are compared with wall-clock fields zeroed; everything else
    // must be byte-identical.
    assert_eq!(
        serde_json::to_string(&r1.normalized()).unwrap(),
        serde_json::to_string(&r8.normalized()).unwrap()
    );
    for rec in &records {
        let name = format!("trace_{}.json", rec.id);
        let t1 = std::fs::read(dir1.path().join(&name)).unwrap();
        let t8 = std::fs::read(dir8.path().join(&name)).unwrap();
        assert_eq!(t1, t8, "trace {name} differs between 1 and 8 workers");
    }
    println!("PASS criterion 8: byte-identical traces and reports with 1 vs 8 workers");
}

// ---------------------------------------------------------------------------
// 9. Trace round-trip and pinned reserialization
// ---------------------------------------------------------------------------

#[test]
fn acceptance_09_trace_round_trip() {
    let nodes = fixtures::strategyqa_chain();
    let dumped = trace::render_trace(&nodes);
    let parsed = trace::parse_trace(&dumped).unwrap();
    assert_eq!(trace::render_trace(&parsed), dumped, "dump -> parse -> dump must be byte-identical");

    // Exact field names and two-decimal values for the pinned chain.
    for pinned in [
        "\"index\": 3,",
        "\"depth\": 1,",
        "\"log p(S|q)\": -55.45,",
        "\"log p(S)\": -85.48,",
        "\"PMI\": 30.04",
        "\"index\": 8,",
        "\"PMI\": 9.02",
        "\"index\": 23,",
        "\"PMI\": 37.60",
        "\"index\": 42,",
        "\"log p(S|q)\": -90.02,",
        "\"log p(S)\": -140.89,",
        "\"PMI\": 50.87",
    ] {
        assert!(dumped.contains(pinned), "missing {pinned:?}");
    }
    assert_eq!(trace::render_trace(&[]), "[]\n");
    println!("PASS criterion 9: trace round-trip byte-identical; pinned chain fields exact");
}

// ---------------------------------------------------------------------------
// 10. Desk-scale performance envelope
// ---------------------------------------------------------------------------

// Procedural backend with unbounded depth: step texts depend only on
// (depth, seeded variant), logprobs and entropies are deterministic hashes.
// No step ever carries a bracketed answer, so trees run to the depth cap.
struct SyntheticBackend {
    variants: u64,
}

fn hash64(parts: &[u64]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &p in parts {
        h ^= p;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    h
}

fn hash_str(s: &str) -> u64 {
    hash64(&[s.bytes().fold(0u64, |a, b| a.wrapping_mul(31).wrapping_add(b as u64))])
}

impl LanguageModel for SyntheticBackend {
    fn generate_step(
        &self,
        ctx: &GenerationContext,
        params: &DecodeParams,
    ) -> Result<ScoredContinuation, BackendError> {
        let depth = ctx.prior_steps.len() as u64 + 1;
        let variant = hash64(&[params.seed, depth]) % self.variants;
        let text = format!("synthetic step depth {depth} variant {variant} of the argument");
        let tokens = word_tokens(&text);
        let scored = self.score_continuation(ctx, &text)?;
        let entropy =
            (hash64(&[hash_str(&text), depth]) % 3000) as f64 / 1000.0;
        Ok(ScoredContinuation {
            text,
            token_logprobs: scored.token_logprobs,
            token_entropies: Some(vec![entropy; tokens.len()]),
        })
    }

    fn score_continuation(
        &self,
        ctx: &GenerationContext,
        text: &str,
    ) -> Result<ScoredContinuation, BackendError> {
        let mode = match ctx.mode {
            ContextMode::Conditional => 1u64,
            ContextMode::Marginal => 2u64,
        };
        let n = word_tokens(text).len();
        let h = hash64(&[mode, hash_str(text), ctx.prior_steps.len() as u64]);
        let total = -1.0 - (h % 5000) as f64 / 100.0;
        let per = total / n as f64;
        let mut logprobs = vec![per; n];
        logprobs[n - 1] = total - per * (n - 1) as f64;
        Ok(ScoredContinuation { text: text.to_string(), token_logprobs: logprobs, token_entropies: None })
    }
}

#[test]
fn acceptance_10_performance_envelope() {
    let backends = Backends::shared(Arc::new(SyntheticBackend { variants: 64 }));
    let cfg = RunConfig { seed: 1010, ..RunConfig::default() }; // B=32, depth 10, n_base 3
    let start = std::time::Instant::now();
    let out = run_search(&question(), &prompt(), &backends, &cfg).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 5.0, "question took {elapsed:.2}s");
    assert_eq!(out.tree.level_stats.last().unwrap().depth, 10);

    // Work bound: per level and in total, nodes <= frontier * (n_base + 2).
    let mut bound = 0usize;
    for level in &out.tree.level_stats {
        assert!(level.nodes_created <= level.frontier_size * (cfg.n_base + 2));
        bound += level.frontier_size * (cfg.n_base + 2);
    }
    assert!(out.tree.node_count() <= bound);

    // Full expansion respects the node cap.
    let capped = RunConfig { full_expand: true, max_nodes: 500, ..cfg };
    let out = run_search(&question(), &prompt(), &backends, &capped).unwrap();
    assert!(out.tree.node_count() <= 500);
    assert!(out.truncated, "expansion should hit the cap");
    println!(
        "PASS criterion 10: depth-10 question in {elapsed:.2}s, node bound holds, cap respected"
    );
}
