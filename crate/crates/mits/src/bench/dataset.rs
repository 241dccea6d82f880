//! JSON-lines dataset ingestion for StrategyQA, ARC-Challenge,
//! CommonsenseQA, and a generic schema.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde_json::Value;
use thiserror::Error;

use crate::types::Question;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    StrategyQa,
    Arc,
    Csqa,
    Generic,
}

impl FromStr for DatasetFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "strategyqa" => Ok(Self::StrategyQa),
            "arc" => Ok(Self::Arc),
            "csqa" => Ok(Self::Csqa),
            "generic" => Ok(Self::Generic),
            other => Err(format!("unknown dataset format {other:?}")),
        }
    }
}

impl fmt::Display for DatasetFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::StrategyQa => "strategyqa",
            Self::Arc => "arc",
            Self::Csqa => "csqa",
            Self::Generic => "generic",
        };
        f.write_str(s)
    }
}

/// One validated question with its gold label.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRecord {
    pub id: String,
    pub question: String,
    pub options: Vec<(String, String)>,
    pub gold: String,
}

impl DatasetRecord {
    pub fn to_question(&self) -> Question {
        Question {
            id: self.id.clone(),
            body: self.question.clone(),
            options: self.options.clone(),
            gold_label: Some(self.gold.clone()),
        }
    }
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{} malformed line(s):\n{}", .0.len(), .0.join("\n"))]
    Malformed(Vec<String>),
    #[error("dataset is empty")]
    Empty,
}

fn str_field<'a>(v: &'a Value, keys: &[&str]) -> Option<&'a str> {
    keys.iter().find_map(|k| v.get(k).and_then(Value::as_str))
}

fn id_field(v: &Value, line: usize) -> String {
    str_field(v, &["id", "qid"])
        .map(String::from)
        .or_else(|| v.get("id").map(|x| x.to_string()))
        .unwrap_or_else(|| format!("line-{line}"))
}

fn parse_generic(v: &Value, line: usize) -> Result<DatasetRecord, String> {
    let question = str_field(v, &["question"])
        .ok_or_else(|| format!("line {line}: missing \"question\""))?
        .to_string();
    let gold = str_field(v, &["gold"])
        .ok_or_else(|| format!("line {line}: missing \"gold\""))?
        .to_string();
    let options = v
        .get("options")
        .and_then(Value::as_array)
        .ok_or_else(|| format!("line {line}: missing \"options\" array"))?
        .iter()
        .map(|o| {
            let label = str_field(o, &["label"])
                .ok_or_else(|| format!("line {line}: option missing \"label\""))?;
            let text = str_field(o, &["text"])
                .ok_or_else(|| format!("line {line}: option missing \"text\""))?;
            Ok((label.to_string(), text.to_string()))
        })
        .collect::<Result<Vec<_>, String>>()?;
    if !options.iter().any(|(l, _)| *l == gold) {
        return Err(format!("line {line}: gold label {gold:?} not among option labels"));
    }
    Ok(DatasetRecord { id: id_field(v, line), question, options, gold })
}

// Boolean records map to a fixed two-option layout: A=True, B=False.
fn parse_strategyqa(v: &Value, line: usize) -> Result<DatasetRecord, String> {
    let question = str_field(v, &["question"])
        .ok_or_else(|| format!("line {line}: missing \"question\""))?
        .to_string();
    let answer = v
        .get("answer")
        .and_then(Value::as_bool)
        .ok_or_else(|| format!("line {line}: missing boolean \"answer\""))?;
    Ok(DatasetRecord {
        id: id_field(v, line),
        question,
        options: vec![("A".into(), "True".into()), ("B".into(), "False".into())],
        gold: if answer { "A".into() } else { "B".into() },
    })
}

// ARC-Challenge / CommonsenseQA share the stem+choices+answerKey layout.
fn parse_choices(v: &Value, line: usize) -> Result<DatasetRecord, String> {
    let q = v
        .get("question")
        .ok_or_else(|| format!("line {line}: missing \"question\""))?;
    let stem = str_field(q, &["stem"])
        .or_else(|| q.as_str())
        .ok_or_else(|| format!("line {line}: missing question stem"))?
        .to_string();
    let choices = q
        .get("choices")
        .and_then(Value::as_array)
        .ok_or_else(|| format!("line {line}: missing \"choices\" array"))?;
    let options = choices
        .iter()
        .map(|c| {
            let label = str_field(c, &["label"])
                .ok_or_else(|| format!("line {line}: choice missing \"label\""))?;
            let text = str_field(c, &["text"])
                .ok_or_else(|| format!("line {line}: choice missing \"text\""))?;
            Ok((label.to_string(), text.to_string()))
        })
        .collect::<Result<Vec<_>, String>>()?;
    let gold = str_field(v, &["answerKey"])
        .ok_or_else(|| format!("line {line}: missing \"answerKey\""))?
        .to_string();
    if !options.iter().any(|(l, _)| *l == gold) {
        return Err(format!("line {line}: answerKey {gold:?} not among choice labels"));
    }
    Ok(DatasetRecord { id: id_field(v, line), question: stem, options, gold })
}

/// Parse JSON-lines content; every malformed line is reported with its
/// 1-based line number.
pub fn parse_dataset(content: &str, format: DatasetFormat) -> Result<Vec<DatasetRecord>, DatasetError> {
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for (i, raw) in content.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let value: Value = match serde_json::from_str(raw) {
            Ok(v) => v,
            Err(e) => {
                errors.push(format!("line {line}: invalid JSON: {e}"));
                continue;
            }
        };
        let parsed = match format {
            DatasetFormat::Generic => parse_generic(&value, line),
            DatasetFormat::StrategyQa => parse_strategyqa(&value, line),
            DatasetFormat::Arc | DatasetFormat::Csqa => parse_choices(&value, line),
        };
        match parsed {
            Ok(r) => records.push(r),
            Err(e) => errors.push(e),
        }
    }
    if !errors.is_empty() {
        return Err(DatasetError::Malformed(errors));
    }
    if records.is_empty() {
        return Err(DatasetError::Empty);
    }
    Ok(records)
}

pub fn load_dataset(path: &Path, format: DatasetFormat) -> Result<Vec<DatasetRecord>, DatasetError> {
    let content = std::fs::read_to_string(path)
        .map_err(|e| DatasetError::Io { path: path.display().to_string(), source: e })?;
    parse_dataset(&content, format)
}
