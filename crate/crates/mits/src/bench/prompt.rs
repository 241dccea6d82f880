//! Prompt templates for the step-by-step completion format.
//!
//! Three instruction variants: true/false questions (exactly A. True /
//! B. False), multiple choice, and free-form (no options). The rendered
//! prompt is a pure function of its inputs and golden-file pinned.

use crate::backend::GenerationContext;
use crate::bench::dataset::DatasetRecord;
use crate::search::PromptSpec;

const BOOLEAN_INSTRUCTION: &str = "You need to answer the question with true or false.\nLet's think this question step by step. Finally, please make decision from the options A or B. When you believe you've reached the final step, please output your final answer in square brackets like [A. True] or [B. False].";

const CHOICE_INSTRUCTION: &str = "You need to answer the question by choosing one of the given options.\nLet's think this question step by step. Finally, please make decision from the options. When you believe you've reached the final step, please output your final answer in square brackets like [A. option1], [B. option2], etc.";

const FREEFORM_INSTRUCTION: &str = "You need to answer the question.\nLet's think this question step by step. When you believe you've reached the final step, please output your final answer in square brackets.";

fn is_boolean(options: &[(String, String)]) -> bool {
    options.len() == 2
        && options[0] == ("A".to_string(), "True".to_string())
        && options[1] == ("B".to_string(), "False".to_string())
}

pub fn instruction_for(options: &[(String, String)]) -> &'static str {
    if options.is_empty() {
        FREEFORM_INSTRUCTION
    } else if is_boolean(options) {
        BOOLEAN_INSTRUCTION
    } else {
        CHOICE_INSTRUCTION
    }
}

/// Question body followed by one `<label>. <text>` line per option.
pub fn question_text(body: &str, options: &[(String, String)]) -> String {
    let mut out = body.to_string();
    for (label, text) in options {
        out.push_str(&format!("\n{label}. {text}"));
    }
    out
}

/// Instruction and question text for one record.
pub fn prompt_spec(record: &DatasetRecord) -> PromptSpec {
    PromptSpec {
        instruction: instruction_for(&record.options).to_string(),
        question_text: question_text(&record.question, &record.options),
    }
}

/// Full prompt for generating step `len(prior_steps) + 1`.
pub fn render_prompt(record: &DatasetRecord, prior_steps: &[String]) -> String {
    let spec = prompt_spec(record);
    GenerationContext::conditional(spec.instruction, spec.question_text, prior_steps.to_vec())
        .render_prompt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strategyqa_record() -> DatasetRecord {
        DatasetRecord {
            id: "s1".into(),
            question: "Is CAS number 8009-03-8 harmful for a rash?".into(),
            options: vec![("A".into(), "True".into()), ("B".into(), "False".into())],
            gold: "B".into(),
        }
    }

    #[test]
    fn boolean_prompt_matches_pinned_layout() {
        let expected = "You need to answer the question with true or false.\nLet's think this question step by step. Finally, please make decision from the options A or B. When you believe you've reached the final step, please output your final answer in square brackets like [A. True] or [B. False].\nQuestion:\nIs CAS number 8009-03-8 harmful for a rash?\nA. True\nB. False\nStep 1:";
        assert_eq!(render_prompt(&strategyqa_record(), &[]), expected);
    }

    #[test]
    fn prior_steps_render_with_headers_and_cue() {
        let p = render_prompt(
            &strategyqa_record(),
            &["First thought.".to_string(), "Second thought.".to_string()],
        );
        assert!(p.contains("Step 1:\nFirst thought.\n"));
        assert!(p.contains("Step 2:\nSecond thought.\n"));
        assert!(p.ends_with("Step 3:"));
    }

    #[test]
    fn empty_options_render_free_form() {
        let record = DatasetRecord {
            id: "f".into(),
            question: "What is 2+2?".into(),
            options: vec![],
            gold: "4".into(),
        };
        let p = render_prompt(&record, &[]);
        assert!(p.starts_with("You need to answer the question.\n"));
        assert!(!p.contains("\nA. "));
        assert!(p.contains("Question:\nWhat is 2+2?\n"));
    }

    #[test]
    fn render_is_pure() {
        let r = strategyqa_record();
        assert_eq!(render_prompt(&r, &[]), render_prompt(&r, &[]));
    }
}
