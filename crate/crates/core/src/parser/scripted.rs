use std::collections::HashMap;

use serde::Deserialize;

use super::{BaseParser, Committed, Decision, ParseContext, ParserError, PerturbationConfig, SlotValue};
use crate::sql::{SlotId, SlotKind};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScriptError {
    #[error("script: {0}")]
    Json(String),
    #[error("script entry {example}/{slot}: {message}")]
    Entry { example: String, slot: String, message: String },
    #[error("no scripted decision for {slot} of `{example}`")]
    Missing { example: String, slot: SlotId },
}

/// Fixed distribution for one slot of one example.
#[derive(Debug, Clone, PartialEq)]
pub struct ScriptEntry {
    pub slot: SlotId,
    pub options: Vec<SlotValue>,
    pub probs: Vec<f64>,
    /// Chosen-option probabilities of the perturbed passes.
    pub passes: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    slot: String,
    options: Vec<serde_json::Value>,
    probs: Vec<f64>,
    #[serde(default)]
    passes: Option<Vec<f64>>,
}

/// Replays scripted distributions keyed by example id and slot.
///
/// Count and presence slots missing from a script default to zero/false
/// with probability one, so short scripts describe plain select queries.
#[derive(Debug, Clone, Default)]
pub struct ScriptedParser {
    scripts: HashMap<String, Vec<ScriptEntry>>,
}

impl ScriptedParser {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `{"example_id": [{"slot", "options", "probs", "passes"?}]}`.
    pub fn from_json(text: &str) -> Result<Self, ScriptError> {
        let raw: HashMap<String, Vec<RawEntry>> = serde_json::from_str(text).map_err(|e| ScriptError::Json(e.to_string()))?;
        let mut parser = ScriptedParser::new();
        for (example, entries) in raw {
            for e in entries {
                let fail = |message: String| ScriptError::Entry {
                    example: example.clone(),
                    slot: e.slot.clone(),
                    message,
                };
                let slot: SlotId = e.slot.parse().map_err(|err: crate::sql::SlotIdParseError| fail(err.to_string()))?;
                let options = e
                    .options
                    .iter()
                    .map(|o| SlotValue::from_slot_json(slot.kind(), o))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|err| fail(err.to_string()))?;
                parser
                    .insert(
                        &example,
                        ScriptEntry {
                            slot,
                            options,
                            probs: e.probs,
                            passes: e.passes,
                        },
                    )
                    .map_err(|err| fail(err.to_string()))?;
            }
        }
        Ok(parser)
    }

    /// Adds or replaces the entry for `entry.slot`; the distribution is
    /// validated here rather than at prediction time.
    pub fn insert(&mut self, example: &str, entry: ScriptEntry) -> Result<(), ParserError> {
        Decision::new(entry.slot, entry.options.clone(), entry.probs.clone())?;
        if let Some(bad) = entry.options.iter().find(|o| !o.fits(entry.slot.kind())) {
            return Err(ParserError::InvalidDecision {
                slot: entry.slot,
                message: format!("option `{bad}` does not fit the slot"),
            });
        }
        let list = self.scripts.entry(example.to_string()).or_default();
        list.retain(|e| e.slot != entry.slot);
        list.push(entry);
        Ok(())
    }

    fn entry(&self, example: &str, slot: SlotId) -> Option<&ScriptEntry> {
        self.scripts.get(example)?.iter().find(|e| e.slot == slot)
    }
}

impl BaseParser for ScriptedParser {
    fn distribution(&self, ctx: &ParseContext<'_>, _partial: &[Committed], slot: SlotId) -> Result<Decision, ParserError> {
        if let Some(e) = self.entry(ctx.example_id, slot) {
            return Decision::new(slot, e.options.clone(), e.probs.clone());
        }
        let default = match slot.kind() {
            SlotKind::WhereCount | SlotKind::HavingCount => SlotValue::Count(0),
            SlotKind::GroupByPresent | SlotKind::OrderByPresent => SlotValue::Flag(false),
            _ => {
                return Err(ScriptError::Missing {
                    example: ctx.example_id.to_string(),
                    slot,
                }
                .into())
            }
        };
        Decision::new(slot, vec![default], vec![1.0])
    }

    /// Scripted passes apply to the unconstrained decision only; otherwise
    /// every pass repeats the chosen probability.
    fn perturbed_passes(
        &self,
        ctx: &ParseContext<'_>,
        _partial: &[Committed],
        decision: &Decision,
        config: &PerturbationConfig,
    ) -> Result<Vec<f64>, ParserError> {
        if let Some(e) = self.entry(ctx.example_id, decision.slot) {
            if let Some(passes) = &e.passes {
                if e.options == decision.options {
                    return Ok(passes.clone());
                }
            }
        }
        Ok(vec![decision.chosen_prob(); config.passes])
    }
}
