use std::io::{BufRead, Write};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::detector::DetectorConfig;
use crate::parser::{Committed, SlotValue};
use crate::sql::{SlotId, SqlQuery};

/// The user's reply to one question. `Left` marks a question the user
/// walked away from; it is logged but not counted as asked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Feedback {
    Yes,
    No,
    Left,
}

impl std::str::FromStr for Feedback {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "yes" => Ok(Feedback::Yes),
            "no" => Ok(Feedback::No),
            "left" => Ok(Feedback::Left),
            _ => Err(format!("unknown answer `{s}`, expected yes, no or left")),
        }
    }
}

/// Whether a question was about a correct prediction, and if not whether
/// the slot ended up correct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuestionCategory {
    Right,
    WrongSolved,
    WrongUnsolved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub slot: SlotId,
    pub value: SlotValue,
    pub question: String,
    pub rule: String,
    pub answer: Feedback,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<QuestionCategory>,
    pub at: DateTime<Utc>,
}

/// Full record of one session; one JSON object per line on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub example_id: String,
    pub table_id: String,
    pub question: String,
    pub seed: u64,
    pub k: usize,
    pub detector: DetectorConfig,
    pub events: Vec<Event>,
    /// Every committed slot, in order.
    pub committed: Vec<Committed>,
    pub early_exit: bool,
    pub final_query: Option<SqlQuery>,
    pub started_at: DateTime<Utc>,
    pub finished_at: Option<DateTime<Utc>>,
}

impl Transcript {
    /// Questions actually put to the user.
    pub fn question_count(&self) -> usize {
        self.events.iter().filter(|e| e.answer != Feedback::Left).count()
    }

    /// Questions about one slot.
    pub fn questions_for(&self, slot: SlotId) -> usize {
        self.events
            .iter()
            .filter(|e| e.slot == slot && e.answer != Feedback::Left)
            .count()
    }

    /// Recorded answers in order, for replay.
    pub fn answers(&self) -> Vec<Feedback> {
        self.events.iter().map(|e| e.answer).collect()
    }
}

pub fn write_transcripts<W: Write>(mut out: W, transcripts: &[Transcript]) -> std::io::Result<()> {
    for t in transcripts {
        serde_json::to_writer(&mut out, t)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_transcripts<R: BufRead>(input: R) -> Result<Vec<Transcript>, String> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| e.to_string())?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| format!("line {}: {e}", i + 1))?);
    }
    Ok(out)
}
