//! Interactive text-to-SQL parsing.
//!
//! A stepwise base parser fills SQL slots one at a time; an error detector
//! inspects each prediction's uncertainty and, when it is too high, the
//! question generator asks the user a yes/no question about it. Negative
//! feedback constrains the parser, which then proposes an alternative.
//!
//! - [`sql`]: query representation, canonical form and rendering
//! - [`db`]: in-memory tables and the executor used for execution accuracy
//! - [`parser`]: the parser interface, a scripted parser and a lexical one
//! - [`detector`]: probability / perturbation thresholding
//! - [`nlg`]: template-grammar question generation
//! - [`agent`]: the interaction loop and its state
//! - [`harness`]: simulated users, metrics and threshold search

pub mod sql;
pub mod db;
pub mod parser;
pub mod detector;
pub mod nlg;
pub mod agent;
pub mod harness;
pub mod synth;
