use super::user::same_value;
use crate::parser::{gold_derivation, BaseParser, Committed, ParseContext, ParserError, SketchError};
use crate::sql::{SlotId, SqlQuery};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RankError {
    #[error(transparent)]
    Sketch(#[from] SketchError),
    #[error(transparent)]
    Parser(#[from] ParserError),
}

/// 0-based rank of the gold value in the parser's distribution for every
/// slot of the gold derivation, with gold committed before each slot.
/// `None` when the parser never offers the gold value.
pub fn gold_ranks(parser: &dyn BaseParser, ctx: &ParseContext<'_>, gold: &SqlQuery) -> Result<Vec<(SlotId, Option<usize>)>, RankError> {
    let mut prefix: Vec<Committed> = Vec::new();
    let mut out = Vec::new();
    for (slot, value) in gold_derivation(gold, ctx.mode)? {
        let d = parser.distribution(ctx, &prefix, slot)?;
        let mut order: Vec<usize> = (0..d.options.len()).collect();
        // stable: ties keep option order, as argmax does
        order.sort_by(|&a, &b| d.probs[b].total_cmp(&d.probs[a]));
        let rank = order.iter().position(|&i| same_value(&d.options[i], &value));
        out.push((slot, rank));
        prefix.push(Committed {
            slot,
            value,
            prob: 1.0,
            passes: None,
        });
    }
    Ok(out)
}
