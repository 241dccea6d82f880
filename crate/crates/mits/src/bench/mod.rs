//! Benchmark harness: run the search over a question set, vote, score
//! against gold labels, and persist traces and a results summary.

pub mod dataset;
pub mod fixtures;
pub mod prompt;
pub mod trace;

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::search::{run_search, Backends};
use crate::types::RunConfig;
use crate::voting::weighted_vote;
use dataset::DatasetRecord;

/// Harness options outside the search hyperparameters.
#[derive(Debug, Clone, Default)]
pub struct BenchOptions {
    /// Concurrent question workers; 0 or 1 means sequential.
    pub workers: usize,
    /// When set, one trace file per question is written here.
    pub trace_dir: Option<PathBuf>,
    /// Also write full-precision traces alongside the rounded ones.
    pub precise_traces: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuestionResult {
    pub id: String,
    pub selected: Option<String>,
    pub gold: String,
    pub correct: bool,
    /// Total candidate chains collected.
    pub chains: usize,
    /// Nodes created in the search tree.
    pub nodes: usize,
    pub wall_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Aggregate {
    pub total_questions: usize,
    pub correct: usize,
    pub accuracy_pct: f64,
    pub mean_seconds: f64,
    pub total_nodes: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub per_question: Vec<QuestionResult>,
    pub aggregate: Aggregate,
}

impl RunReport {
    /// Copy with wall-clock fields zeroed, for reproducibility comparisons.
    pub fn normalized(&self) -> RunReport {
        let mut r = self.clone();
        for q in &mut r.per_question {
            q.wall_seconds = 0.0;
        }
        r.aggregate.mean_seconds = 0.0;
        r
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

fn aggregate(per_question: &[QuestionResult]) -> Aggregate {
    let total = per_question.len();
    let correct = per_question.iter().filter(|q| q.correct).count();
    Aggregate {
        total_questions: total,
        correct,
        accuracy_pct: if total == 0 { 0.0 } else { correct as f64 / total as f64 * 100.0 },
        mean_seconds: if total == 0 {
            0.0
        } else {
            per_question.iter().map(|q| q.wall_seconds).sum::<f64>() / total as f64
        },
        total_nodes: per_question.iter().map(|q| q.nodes).sum(),
    }
}

fn run_question(
    record: &DatasetRecord,
    backends: &Backends,
    cfg: &RunConfig,
    opts: &BenchOptions,
) -> QuestionResult {
    let started = Instant::now();
    let question = record.to_question();
    let spec = prompt::prompt_spec(record);

    let mut result = QuestionResult {
        id: record.id.clone(),
        selected: None,
        gold: record.gold.clone(),
        correct: false,
        chains: 0,
        nodes: 0,
        wall_seconds: 0.0,
        error: None,
    };

    match run_search(&question, &spec, backends, cfg) {
        Ok(outcome) => {
            result.chains = outcome.chains.len();
            result.nodes = outcome.tree.node_count();
            match weighted_vote(&outcome.chains, cfg.vote_k, cfg.aggregation) {
                Ok(vote) => {
                    result.correct = vote.selected_answer == record.gold;
                    result.selected = Some(vote.selected_answer);
                }
                Err(e) => result.error = Some(e.to_string()),
            }
            if let Some(dir) = &opts.trace_dir {
                let path = dir.join(format!("trace_{}.json", record.id));
                if let Err(e) = trace::dump_trace(&outcome.tree, None, &path) {
                    eprintln!("warning: trace dump for {}: {e}", record.id);
                }
                if opts.precise_traces {
                    let nodes = trace::trace_from_tree(&outcome.tree, None);
                    let path = dir.join(format!("trace_{}_precise.json", record.id));
                    match trace::render_trace_precise(&nodes) {
                        Ok(s) => {
                            if let Err(e) = std::fs::write(&path, s) {
                                eprintln!("warning: precise trace for {}: {e}", record.id);
                            }
                        }
                        Err(e) => eprintln!("warning: precise trace for {}: {e}", record.id),
                    }
                }
            }
        }
        Err(e) => result.error = Some(e.to_string()),
    }
    result.wall_seconds = started.elapsed().as_secs_f64();
    result
}

/// Run the whole dataset; questions may be processed by several workers but
/// the report order always follows the dataset order. Per-question failures
/// are recorded as incorrect and the run continues.
pub fn run_benchmark(
    records: &[DatasetRecord],
    backends: &Backends,
    cfg: &RunConfig,
    opts: &BenchOptions,
) -> RunReport {
    let workers = opts.workers.max(1).min(records.len().max(1));
    let results: Vec<Option<QuestionResult>> = if workers <= 1 {
        records.iter().map(|r| Some(run_question(r, backends, cfg, opts))).collect()
    } else {
        let next = AtomicUsize::new(0);
        let slots: Mutex<Vec<Option<QuestionResult>>> = Mutex::new(vec![None; records.len()]);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    if i >= records.len() {
                        break;
                    }
                    let result = run_question(&records[i], backends, cfg, opts);
                    slots.lock().unwrap()[i] = Some(result);
                });
            }
        });
        slots.into_inner().unwrap()
    };
    let per_question: Vec<QuestionResult> = results.into_iter().flatten().collect();
    let aggregate = aggregate(&per_question);
    RunReport { config: cfg.clone(), per_question, aggregate }
}
