//! HTTP client for OpenAI-compatible `/v1/completions` endpoints that expose
//! per-token logprobs and prompt-echo scoring.
//!
//! Generation maps to a sampled completion with the stop marker as a stop
//! sequence and logprobs enabled. Scoring maps to an echo request over
//! context + text with `max_tokens = 0`, keeping only the trailing tokens
//! whose concatenation equals the scored text.
//!
//! Entropy caveat: the API exposes at most the top-N logprobs per position,
//! so per-token entropies are computed over those N candidates with the
//! remaining probability mass lumped into a single tail term. This
//! under-reports entropy for very flat distributions.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{
    BackendError, ContextMode, DecodeParams, GenerationContext, LanguageModel, ScoredContinuation,
};

/// How many alternatives to request per position for entropy estimation.
const DEFAULT_TOP_LOGPROBS: usize = 20;

#[derive(Debug, Clone)]
pub struct HttpBackend {
    client: reqwest::blocking::Client,
    url: String,
    model: String,
    auth: Option<String>,
    pub max_retries: u32,
    pub retry_base: Duration,
}

#[derive(Serialize)]
struct CompletionRequest<'a> {
    model: &'a str,
    prompt: &'a str,
    temperature: f64,
    top_p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    top_k: Option<usize>,
    max_tokens: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    stop: Option<Vec<&'a str>>,
    logprobs: usize,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    echo: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
struct CompletionResponse {
    choices: Vec<Choice>,
}

#[derive(Debug, Deserialize)]
struct Choice {
    text: String,
    logprobs: Option<LogprobBlock>,
}

#[derive(Debug, Deserialize)]
struct LogprobBlock {
    tokens: Vec<String>,
    token_logprobs: Vec<Option<f64>>,
    #[serde(default)]
    top_logprobs: Option<Vec<Option<std::collections::HashMap<String, f64>>>>,
}

impl HttpBackend {
    /// `endpoint` is either the server base URL or a full completions URL.
    pub fn new(
        endpoint: &str,
        model: impl Into<String>,
        auth: Option<String>,
    ) -> Result<Self, BackendError> {
        let base = endpoint.trim_end_matches('/');
        let url = if base.ends_with("/completions") {
            base.to_string()
        } else {
            format!("{base}/v1/completions")
        };
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(120))
            .build()
            .map_err(|e| BackendError::Config(format!("http client: {e}")))?;
        Ok(Self {
            client,
            url,
            model: model.into(),
            auth,
            max_retries: 3,
            retry_base: Duration::from_millis(200),
        })
    }

    /// Startup capability check: the endpoint must return a logprobs block.
    pub fn probe(&self) -> Result<(), BackendError> {
        let req = CompletionRequest {
            model: &self.model,
            prompt: "Hello",
            temperature: 1.0,
            top_p: 1.0,
            top_k: None,
            max_tokens: 1,
            stop: None,
            logprobs: 1,
            echo: false,
            seed: None,
        };
        let resp = self.post(&req)?;
        let choice = resp
            .choices
            .first()
            .ok_or_else(|| BackendError::Capability("empty choices in probe response".into()))?;
        if choice.logprobs.is_none() {
            return Err(BackendError::Capability(
                "endpoint does not return per-token logprobs".into(),
            ));
        }
        Ok(())
    }

    fn post(&self, body: &CompletionRequest<'_>) -> Result<CompletionResponse, BackendError> {
        let mut attempt = 0;
        loop {
            let mut req = self.client.post(&self.url).json(body);
            if let Some(token) = &self.auth {
                req = req.bearer_auth(token);
            }
            let result = req.send();
            let retry_after = |attempt: u32| self.retry_base * 2u32.saturating_pow(attempt);
            match result {
                Ok(resp) => {
                    let status = resp.status();
                    if status.is_success() {
                        return resp.json::<CompletionResponse>().map_err(|e| {
                            BackendError::Transport {
                                message: format!("bad response body: {e}"),
                                status: Some(status.as_u16()),
                                retryable: false,
                            }
                        });
                    }
                    let retryable = status.as_u16() == 429 || status.is_server_error();
                    if retryable && attempt < self.max_retries {
                        std::thread::sleep(retry_after(attempt));
                        attempt += 1;
                        continue;
                    }
                    let body = resp.text().unwrap_or_default();
                    return Err(BackendError::Transport {
                        message: format!("HTTP {status}: {body}"),
                        status: Some(status.as_u16()),
                        retryable,
                    });
                }
                Err(e) => {
                    if attempt < self.max_retries {
                        std::thread::sleep(retry_after(attempt));
                        attempt += 1;
                        continue;
                    }
                    return Err(BackendError::Transport {
                        message: e.to_string(),
                        status: None,
                        retryable: true,
                    });
                }
            }
        }
    }
}

// Entropy over the reported top-N candidates plus a lumped tail mass.
fn entropy_from_top(top: &std::collections::HashMap<String, f64>) -> f64 {
    let mut h = 0.0;
    let mut mass = 0.0;
    for lp in top.values() {
        let p = lp.exp();
        if p > 0.0 {
            h -= p * lp;
            mass += p;
        }
    }
    let tail = (1.0 - mass).max(0.0);
    if tail > 1e-12 {
        h -= tail * tail.ln();
    }
    h.max(0.0)
}

// Two-point fallback when only the sampled token's logprob is known.
fn entropy_from_single(logprob: f64) -> f64 {
    let p = logprob.exp().clamp(1e-12, 1.0 - 1e-12);
    let q = 1.0 - p;
    -(p * p.ln() + q * q.ln())
}

impl LanguageModel for HttpBackend {
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
        let prompt = ctx.render_prompt();
        let req = CompletionRequest {
            model: &self.model,
            prompt: &prompt,
            temperature: params.temperature,
            top_p: params.top_p,
            top_k: Some(params.top_k),
            max_tokens: params.max_new_tokens,
            stop: Some(vec![params.stop_marker.as_str()]),
            logprobs: DEFAULT_TOP_LOGPROBS,
            echo: false,
            seed: Some(params.seed),
        };
        let resp = self.post(&req)?;
        let choice = resp
            .choices
            .into_iter()
            .next()
            .ok_or_else(|| BackendError::Scoring("empty choices".into()))?;
        let mut text = choice.text;
        if let Some(pos) = text.find(&params.stop_marker) {
            text.truncate(pos);
        }
        if text.is_empty() {
            return Err(BackendError::DegenerateOutput);
        }
        let lp = choice
            .logprobs
            .ok_or_else(|| BackendError::Capability("response lacks logprobs".into()))?;
        let mut token_logprobs = Vec::new();
        let mut token_entropies = Vec::new();
        let mut consumed = 0usize;
        for (i, tok) in lp.tokens.iter().enumerate() {
            if consumed >= text.len() {
                break;
            }
            consumed += tok.len();
            let logprob = lp.token_logprobs.get(i).copied().flatten().ok_or_else(|| {
                BackendError::Scoring(format!("null logprob for generated token {i}"))
            })?;
            token_logprobs.push(logprob);
            let entropy = match lp.top_logprobs.as_ref().and_then(|t| t.get(i)).and_then(|m| m.as_ref())
            {
                Some(top) => entropy_from_top(top),
                None => entropy_from_single(logprob),
            };
            token_entropies.push(entropy);
        }
        if token_logprobs.is_empty() {
            return Err(BackendError::Scoring("no logprobs for generated text".into()));
        }
        Ok(ScoredContinuation { text, token_logprobs, token_entropies: Some(token_entropies) })
    }

    fn score_continuation(
        &self,
        ctx: &GenerationContext,
        text: &str,
    ) -> Result<ScoredContinuation, BackendError> {
        if text.is_empty() {
            return Err(BackendError::InvalidRequest("cannot score empty text".into()));
        }
        let prompt = format!("{}{}", ctx.render_prompt(), text);
        let req = CompletionRequest {
            model: &self.model,
            prompt: &prompt,
            temperature: 1.0,
            top_p: 1.0,
            top_k: None,
            max_tokens: 0,
            stop: None,
            logprobs: 0,
            echo: true,
            seed: None,
        };
        let resp = self.post(&req)?;
        let choice = resp
            .choices
            .into_iter()
            .next()
            .ok_or_else(|| BackendError::Scoring("empty choices".into()))?;
        let lp = choice
            .logprobs
            .ok_or_else(|| BackendError::Capability("echo response lacks logprobs".into()))?;

        // Walk back from the end collecting tokens until they reassemble the
        // scored text; a clean split must exist or the tokenizer crossed the
        // context/text boundary.
        let mut suffix = String::new();
        let mut start = lp.tokens.len();
        while start > 0 && suffix.len() < text.len() {
            start -= 1;
            suffix.insert_str(0, &lp.tokens[start]);
        }
        if suffix != text {
            return Err(BackendError::Scoring(format!(
                "tokenizer boundary mismatch: trailing tokens reassemble {:?}, expected {:?}",
                suffix, text
            )));
        }
        let mut token_logprobs = Vec::with_capacity(lp.tokens.len() - start);
        for i in start..lp.tokens.len() {
            let logprob = lp.token_logprobs.get(i).copied().flatten().ok_or_else(|| {
                BackendError::Scoring(format!("null logprob inside scored span at token {i}"))
            })?;
            token_logprobs.push(logprob);
        }
        Ok(ScoredContinuation { text: text.to_string(), token_logprobs, token_entropies: None })
    }
}
