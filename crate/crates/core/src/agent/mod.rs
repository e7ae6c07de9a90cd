//! The interaction loop.
//!
//! A [`Session`] is a step machine: [`Session::advance`] lets the parser
//! commit slots until the detector flags one, which is returned as a
//! question; [`Session::respond`] applies the user's yes/no. A "no" forbids
//! the value and the parser proposes the next-best option for the same
//! slot, up to `k` alternatives; if all are rejected the original
//! prediction is kept. Committed slots are never revisited.

mod transcript;

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use chrono::Utc;
use serde::{Deserialize, Serialize};

use crate::db::Table;
use crate::detector::{self, DetectorConfig};
use crate::nlg::{Nlg, NlgError, QuestionContext};
use crate::parser::{BaseParser, Committed, ConstraintSet, Decision, ParseContext, ParserError, PartialQuery, Step};
use crate::sql::{Mode, SlotId, SqlQuery};

pub use transcript::{read_transcripts, write_transcripts, Event, Feedback, QuestionCategory, Transcript};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentConfig {
    /// Alternatives offered after the first "no" on a slot.
    pub k: usize,
    pub detector: DetectorConfig,
    pub mode: Mode,
    /// Seeds the perturbation passes of the dropout detector.
    pub seed: u64,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            k: 3,
            detector: DetectorConfig::Prob { p_star: 0.95 },
            mode: Mode::Wikisql,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AgentError {
    #[error(transparent)]
    Parser(#[from] ParserError),
    #[error(transparent)]
    Nlg(#[from] NlgError),
    #[error("no question is pending")]
    NoPendingQuestion,
    #[error("the session is finished")]
    Closed,
    #[error("parser re-predicted {got} while {expected} was pending")]
    UnexpectedSlot { expected: SlotId, got: SlotId },
    #[error("parser ended before the query was complete")]
    Incomplete,
}

/// Partial parse, constraints and per-slot question counts.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub partial: Vec<Committed>,
    pub constraints: ConstraintSet,
    pub questions: BTreeMap<SlotId, usize>,
    pub terminal: bool,
}

/// A question waiting for an answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AskedQuestion {
    pub slot: SlotId,
    pub value: crate::parser::SlotValue,
    pub prob: f64,
    pub text: String,
    pub rule: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Turn {
    Ask(AskedQuestion),
    Done(SqlQuery),
}

#[derive(Debug, Clone)]
struct Pending {
    decision: Decision,
    original: Committed,
    question: AskedQuestion,
    asked: usize,
}

pub struct Session {
    parser: Arc<dyn BaseParser>,
    nlg: Arc<Nlg>,
    table: Arc<Table>,
    question: String,
    config: AgentConfig,
    state: AgentState,
    pending: Option<Pending>,
    transcript: Transcript,
    user_left: bool,
    finished_turn: Option<SlotId>,
    result: Option<SqlQuery>,
}

impl Session {
    pub fn new(
        parser: Arc<dyn BaseParser>,
        nlg: Arc<Nlg>,
        table: Arc<Table>,
        example_id: &str,
        question: &str,
        config: AgentConfig,
    ) -> Session {
        let transcript = Transcript {
            example_id: example_id.to_string(),
            table_id: table.id.clone(),
            question: question.to_string(),
            seed: config.seed,
            k: config.k,
            detector: config.detector,
            events: Vec::new(),
            committed: Vec::new(),
            early_exit: false,
            final_query: None,
            started_at: Utc::now(),
            finished_at: None,
        };
        Session {
            parser,
            nlg,
            table,
            question: question.to_string(),
            config,
            state: AgentState::default(),
            pending: None,
            transcript,
            user_left: false,
            finished_turn: None,
            result: None,
        }
    }

    pub fn state(&self) -> &AgentState {
        &self.state
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn into_transcript(self) -> Transcript {
        self.transcript
    }

    pub fn pending_question(&self) -> Option<&AskedQuestion> {
        self.pending.as_ref().map(|p| &p.question)
    }

    pub fn result(&self) -> Option<&SqlQuery> {
        self.result.as_ref()
    }

    pub fn is_finished(&self) -> bool {
        self.result.is_some()
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    /// Committed slots replayed into a query skeleton.
    pub fn partial_query(&self) -> PartialQuery {
        PartialQuery::from_committed(self.state.partial.iter().map(|c| (c.slot, &c.value)), self.config.mode)
            .unwrap_or_default()
    }

    /// Slot whose question sequence ended with the last call, if any.
    pub fn take_finished_turn(&mut self) -> Option<SlotId> {
        self.finished_turn.take()
    }

    fn ctx(&self) -> ParseContext<'_> {
        ParseContext {
            example_id: &self.transcript.example_id,
            question: &self.question,
            table: &self.table,
            mode: self.config.mode,
        }
    }

    fn commit(&mut self, c: Committed) {
        self.state.partial.push(c.clone());
        self.transcript.committed.push(c);
    }

    fn ask(&self, decision: &Decision) -> Result<AskedQuestion, AgentError> {
        let pq = self.partial_query();
        let ctx = QuestionContext {
            mode: self.config.mode,
            table: &self.table.name,
            multi_table: false,
            partial: &pq,
        };
        let q = self.nlg.question(decision.slot, decision.chosen_value(), &ctx)?;
        Ok(AskedQuestion {
            slot: decision.slot,
            value: decision.chosen_value().clone(),
            prob: decision.chosen_prob(),
            text: q.text,
            rule: q.rule,
        })
    }

    /// Runs the parser until a question is needed or the query is done.
    /// Calling again with a question pending returns the same question.
    pub fn advance(&mut self) -> Result<Turn, AgentError> {
        if let Some(q) = &self.result {
            return Ok(Turn::Done(q.clone()));
        }
        if let Some(p) = &self.pending {
            return Ok(Turn::Ask(p.question.clone()));
        }
        loop {
            let step = self
                .parser
                .next_decision(&self.ctx(), &self.state.partial, &self.state.constraints)?;
            let d = match step {
                Step::Terminal => return self.finish(),
                Step::Decision(d) => d,
            };
            let verdict = if self.user_left {
                detector::assess(&DetectorConfig::Off, &d, |_| Ok::<_, ParserError>(Vec::new()))?
            } else {
                let seed = self.config.seed;
                let ctx = self.ctx();
                let partial = &self.state.partial;
                detector::assess(&self.config.detector, &d, |pc| {
                    let pc = crate::parser::PerturbationConfig { seed, ..*pc };
                    self.parser.perturbed_passes(&ctx, partial, &d, &pc)
                })?
            };
            let original = Committed {
                slot: d.slot,
                value: d.chosen_value().clone(),
                prob: d.chosen_prob(),
                passes: verdict.passes,
            };
            if !verdict.ask {
                self.commit(original);
                continue;
            }
            let question = self.ask(&d)?;
            self.pending = Some(Pending {
                decision: d,
                original,
                question: question.clone(),
                asked: 0,
            });
            return Ok(Turn::Ask(question));
        }
    }

    fn finish(&mut self) -> Result<Turn, AgentError> {
        let query = self
            .partial_query()
            .to_query(std::slice::from_ref(&self.table.id), self.config.mode)
            .ok_or(AgentError::Incomplete)?;
        self.state.terminal = true;
        self.transcript.final_query = Some(query.clone());
        self.transcript.finished_at = Some(Utc::now());
        self.result = Some(query.clone());
        Ok(Turn::Done(query))
    }

    fn log(&mut self, q: &AskedQuestion, answer: Feedback) {
        self.transcript.events.push(Event {
            slot: q.slot,
            value: q.value.clone(),
            question: q.text.clone(),
            rule: q.rule.clone(),
            answer,
            category: None,
            at: Utc::now(),
        });
    }

    /// Applies a yes/no answer to the pending question.
    pub fn respond(&mut self, answer: Feedback) -> Result<(), AgentError> {
        if answer == Feedback::Left {
            return self.leave();
        }
        if self.result.is_some() {
            return Err(AgentError::Closed);
        }
        let p = self.pending.take().ok_or(AgentError::NoPendingQuestion)?;
        let slot = p.decision.slot;
        self.log(&p.question, answer);
        let asked = p.asked + 1;
        *self.state.questions.entry(slot).or_default() += 1;
        if answer == Feedback::Yes {
            let passes = (p.decision.chosen_value() == &p.original.value)
                .then(|| p.original.passes.clone())
                .flatten();
            self.commit(Committed {
                slot,
                value: p.decision.chosen_value().clone(),
                prob: p.decision.chosen_prob(),
                passes,
            });
            self.finished_turn = Some(slot);
            return Ok(());
        }
        self.state.constraints.forbid(slot, p.decision.chosen_value().clone());
        if asked > self.config.k {
            self.commit(p.original);
            self.finished_turn = Some(slot);
            return Ok(());
        }
        let next = self
            .parser
            .next_decision(&self.ctx(), &self.state.partial, &self.state.constraints);
        let d = match next {
            Err(ParserError::AllForbidden(_)) => {
                self.commit(p.original);
                self.finished_turn = Some(slot);
                return Ok(());
            }
            Err(e) => return Err(e.into()),
            Ok(Step::Terminal) => return Err(AgentError::Incomplete),
            Ok(Step::Decision(d)) if d.slot != slot => {
                return Err(AgentError::UnexpectedSlot { expected: slot, got: d.slot })
            }
            Ok(Step::Decision(d)) => d,
        };
        if !detector::is_askable(&d) {
            // e.g. a non-empty HAVING after "no" to the empty one
            self.commit(Committed {
                slot,
                value: d.chosen_value().clone(),
                prob: d.chosen_prob(),
                passes: None,
            });
            self.finished_turn = Some(slot);
            return Ok(());
        }
        let question = self.ask(&d)?;
        self.pending = Some(Pending {
            decision: d,
            original: p.original,
            question,
            asked,
        });
        Ok(())
    }

    /// The user is gone: a pending slot keeps its original prediction and
    /// everything after it is committed without questions.
    pub fn leave(&mut self) -> Result<(), AgentError> {
        if self.result.is_some() {
            return Err(AgentError::Closed);
        }
        self.user_left = true;
        self.transcript.early_exit = true;
        if let Some(p) = self.pending.take() {
            self.log(&p.question, Feedback::Left);
            self.commit(p.original);
        }
        Ok(())
    }
}

/// Supplies answers to a running session.
pub trait Answerer {
    fn answer(&mut self, question: &AskedQuestion, partial: &[Committed]) -> Feedback;

    /// Called once all questions about `slot` are settled.
    fn turn_finished(&mut self, _slot: SlotId, _partial: &[Committed]) {}

    fn has_left(&self) -> bool {
        false
    }
}

/// Replays a fixed answer sequence; leaves once it runs out.
#[derive(Debug, Clone, Default)]
pub struct ScriptedAnswerer {
    answers: VecDeque<Feedback>,
}

impl ScriptedAnswerer {
    pub fn new(answers: impl IntoIterator<Item = Feedback>) -> Self {
        ScriptedAnswerer {
            answers: answers.into_iter().collect(),
        }
    }
}

impl Answerer for ScriptedAnswerer {
    fn answer(&mut self, _q: &AskedQuestion, _partial: &[Committed]) -> Feedback {
        self.answers.pop_front().unwrap_or(Feedback::Left)
    }
}

/// Session error with the transcript recorded up to the failure.
#[derive(Debug, Clone, thiserror::Error)]
#[error("{error}")]
pub struct SessionFailure {
    pub error: AgentError,
    pub transcript: Box<Transcript>,
}

/// Drives one session to completion.
pub fn run_session(
    parser: Arc<dyn BaseParser>,
    nlg: Arc<Nlg>,
    table: Arc<Table>,
    example_id: &str,
    question: &str,
    config: AgentConfig,
    answerer: &mut dyn Answerer,
) -> Result<(SqlQuery, Transcript), SessionFailure> {
    let mut session = Session::new(parser, nlg, table, example_id, question, config);
    let result = drive(&mut session, answerer);
    match result {
        Ok(q) => Ok((q, session.into_transcript())),
        Err(error) => Err(SessionFailure {
            error,
            transcript: Box::new(session.into_transcript()),
        }),
    }
}

fn drive(session: &mut Session, answerer: &mut dyn Answerer) -> Result<SqlQuery, AgentError> {
    loop {
        if answerer.has_left() && !session.user_left {
            session.leave()?;
        }
        match session.advance()? {
            Turn::Done(q) => return Ok(q),
            Turn::Ask(q) => {
                let a = answerer.answer(&q, &session.state.partial);
                session.respond(a)?;
                if let Some(slot) = session.take_finished_turn() {
                    answerer.turn_finished(slot, &session.state.partial);
                }
            }
        }
    }
}
