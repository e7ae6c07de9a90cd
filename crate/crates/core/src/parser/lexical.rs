//! Question analysis shared by the heuristic scorers.

use std::collections::HashSet;

use crate::db::{Cell, ColumnType, Table};
use crate::sql::Value;

/// Lowercased comparison form: plural `s` stripped from longer words.
pub(crate) fn norm(token: &str) -> String {
    let t = token.to_lowercase();
    if t.len() > 3 && t.ends_with('s') && !t.ends_with("ss") {
        t[..t.len() - 1].to_string()
    } else {
        t
    }
}

/// Alphanumeric runs; a `.` between digits stays inside the token.
pub(crate) fn tokenize(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut cur = String::new();
    for (i, &c) in chars.iter().enumerate() {
        let inner_dot = c == '.'
            && cur.chars().last().is_some_and(|p| p.is_ascii_digit())
            && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit());
        if c.is_alphanumeric() || inner_dot || (c == '-' && cur.is_empty() && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit())) {
            cur.push(c);
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn trigrams(text: &str) -> HashSet<String> {
    let padded: Vec<char> = format!(" {} ", text.to_lowercase()).chars().collect();
    padded.windows(3).map(|w| w.iter().collect()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SpanKind {
    Cell,
    Quoted,
    Number,
    Range,
    Capitalized,
}

/// A candidate condition value found in the question, over tokens
/// `start..end`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Span {
    pub value: Value,
    pub start: usize,
    pub end: usize,
    pub kind: SpanKind,
    /// Columns holding this exact text.
    pub cell_cols: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct Analysis {
    /// [`norm`] of each token.
    pub tokens: Vec<String>,
    pub question_trigrams: HashSet<String>,
    /// Value spans sorted by position.
    pub spans: Vec<Span>,
    /// Numbers read as row limits (`top 3`), by token position.
    pub limits: Vec<(usize, u32)>,
}

const LIMIT_CUES: &[&str] = &["top", "first"];

impl Analysis {
    pub fn new(question: &str, table: &Table) -> Analysis {
        let raw = tokenize(question);
        let tokens: Vec<String> = raw.iter().map(|t| norm(t)).collect();
        let lower: Vec<String> = raw.iter().map(|t| t.to_lowercase()).collect();
        let mut taken = vec![false; raw.len()];
        let mut spans = Vec::new();

        // verbatim cell values, longest first
        let mut matches: Vec<(usize, usize, String, usize)> = Vec::new();
        for (ci, col) in table.columns.iter().enumerate() {
            if col.ty != ColumnType::Text {
                continue;
            }
            let mut seen = HashSet::new();
            for row in &table.rows {
                let Cell::Text(text) = &row[ci] else { continue };
                if !seen.insert(text.as_str()) {
                    continue;
                }
                let cell: Vec<String> = tokenize(text).iter().map(|t| t.to_lowercase()).collect();
                if cell.is_empty() || cell.len() > lower.len() {
                    continue;
                }
                for s in 0..=lower.len() - cell.len() {
                    if lower[s..s + cell.len()] == cell[..] {
                        matches.push((s, s + cell.len(), text.clone(), ci));
                    }
                }
            }
        }
        matches.sort_by(|a, b| (b.1 - b.0).cmp(&(a.1 - a.0)).then(a.0.cmp(&b.0)).then(a.3.cmp(&b.3)));
        for (s, e, text, ci) in matches {
            if let Some(existing) = spans
                .iter_mut()
                .find(|sp: &&mut Span| sp.start == s && sp.end == e && sp.value == Value::Text(text.clone()))
            {
                if !existing.cell_cols.contains(&ci) {
                    existing.cell_cols.push(ci);
                }
                continue;
            }
            if taken[s..e].iter().any(|t| *t) {
                continue;
            }
            taken[s..e].iter_mut().for_each(|t| *t = true);
            spans.push(Span {
                value: Value::Text(text),
                start: s,
                end: e,
                kind: SpanKind::Cell,
                cell_cols: vec![ci],
            });
        }

        // quoted spans
        for (s, e, text) in quoted(question, &raw) {
            if taken[s..e].iter().any(|t| *t) {
                continue;
            }
            taken[s..e].iter_mut().for_each(|t| *t = true);
            spans.push(Span {
                value: Value::Text(text),
                start: s,
                end: e,
                kind: SpanKind::Quoted,
                cell_cols: vec![],
            });
        }

        // numbers, ranges and limits
        let mut limits = Vec::new();
        let mut i = 0;
        while i < raw.len() {
            let Some(n) = number(&raw[i]).filter(|_| !taken[i]) else {
                i += 1;
                continue;
            };
            let cue = i > 0 && LIMIT_CUES.contains(&lower[i - 1].as_str());
            if cue && n >= 1.0 && n.fract() == 0.0 && n <= u32::MAX as f64 {
                limits.push((i, n as u32));
                taken[i] = true;
                i += 1;
                continue;
            }
            let between = i > 0 && lower[i - 1] == "between";
            let upper = (i + 2 < raw.len() && lower[i + 1] == "and" && !taken[i + 2])
                .then(|| number(&raw[i + 2]))
                .flatten();
            if let (true, Some(m)) = (between, upper) {
                taken[i..=i + 2].iter_mut().for_each(|t| *t = true);
                spans.push(Span {
                    value: Value::Range(n, m),
                    start: i,
                    end: i + 3,
                    kind: SpanKind::Range,
                    cell_cols: vec![],
                });
                i += 3;
                continue;
            }
            taken[i] = true;
            spans.push(Span {
                value: Value::Number(n),
                start: i,
                end: i + 1,
                kind: SpanKind::Number,
                cell_cols: vec![],
            });
            i += 1;
        }

        // capitalized runs after the first token
        let mut i = 1;
        while i < raw.len() {
            let cap = |j: usize| !taken[j] && raw[j].chars().next().is_some_and(char::is_uppercase);
            if !cap(i) {
                i += 1;
                continue;
            }
            let start = i;
            while i < raw.len() && cap(i) {
                i += 1;
            }
            taken[start..i].iter_mut().for_each(|t| *t = true);
            spans.push(Span {
                value: Value::Text(raw[start..i].join(" ")),
                start,
                end: i,
                kind: SpanKind::Capitalized,
                cell_cols: vec![],
            });
        }

        spans.sort_by_key(|s| s.start);
        Analysis {
            question_trigrams: trigrams(question),
            tokens,
            spans,
            limits,
        }
    }

    /// Positions where `phrase` (normalized words) starts.
    pub fn find(&self, phrase: &str) -> Vec<usize> {
        let words: Vec<String> = phrase.split_whitespace().map(norm).collect();
        if words.is_empty() || words.len() > self.tokens.len() {
            return Vec::new();
        }
        (0..=self.tokens.len() - words.len())
            .filter(|&s| self.tokens[s..s + words.len()] == words[..])
            .collect()
    }

    /// Start positions of full mentions of a column name.
    pub fn mentions(&self, column: &str) -> Vec<usize> {
        self.find(&tokenize(column).join(" "))
    }

    /// Fraction of the column's name tokens present in the question.
    pub fn token_match(&self, column: &str) -> f64 {
        let words: Vec<String> = tokenize(column).iter().map(|t| norm(t)).collect();
        if words.is_empty() {
            return 0.0;
        }
        let hits = words.iter().filter(|w| self.tokens.contains(w)).count();
        hits as f64 / words.len() as f64
    }

    /// Share of the column name's character trigrams found in the question.
    pub fn trigram_overlap(&self, column: &str) -> f64 {
        let grams = trigrams(column);
        if grams.is_empty() {
            return 0.0;
        }
        grams.iter().filter(|g| self.question_trigrams.contains(*g)).count() as f64 / grams.len() as f64
    }
}

fn number(token: &str) -> Option<f64> {
    token.parse::<f64>().ok().filter(|n| n.is_finite())
}

/// Double-quoted stretches mapped back to token ranges.
fn quoted(question: &str, raw: &[String]) -> Vec<(usize, usize, String)> {
    let mut out = Vec::new();
    let parts: Vec<&str> = question.split('"').collect();
    let mut before = String::new();
    for (k, part) in parts.iter().enumerate() {
        if k % 2 == 1 && k + 1 < parts.len() {
            let start = tokenize(&before).len();
            let len = tokenize(part).len();
            if len > 0 && start + len <= raw.len() {
                out.push((start, start + len, part.trim().to_string()));
            }
        }
        before.push_str(part);
        before.push(' ');
    }
    out
}
