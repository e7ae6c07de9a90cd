use std::fmt;
use std::str::FromStr;

/// Address of one predicted SQL component.
///
/// The count/presence slots (`where.count`, `groupby.present`,
/// `having.count`, `orderby.present`) shape the sketch; apart from the
/// empty-HAVING case they are decided by the parser and never asked about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlotId {
    SelectCol,
    SelectAgg,
    WhereCount,
    WhereCol(usize),
    WhereOp(usize),
    WhereVal(usize),
    /// Connector between condition `i` and `i + 1`.
    WhereConn(usize),
    GroupByPresent,
    GroupByCol,
    HavingCount,
    HavingCol(usize),
    HavingAgg(usize),
    HavingOp(usize),
    HavingVal(usize),
    OrderByPresent,
    OrderByCol,
    OrderByAgg,
    /// Direction together with the optional limit.
    OrderByDir,
}

/// Slot identity with indices erased.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlotKind {
    SelectCol,
    SelectAgg,
    WhereCount,
    WhereCol,
    WhereOp,
    WhereVal,
    WhereConn,
    GroupByPresent,
    GroupByCol,
    HavingCount,
    HavingCol,
    HavingAgg,
    HavingOp,
    HavingVal,
    OrderByPresent,
    OrderByCol,
    OrderByAgg,
    OrderByDir,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Clause {
    Select,
    Where,
    GroupBy,
    Having,
    OrderBy,
}

impl SlotKind {
    pub const ALL: &'static [SlotKind] = &[
        SlotKind::SelectCol,
        SlotKind::SelectAgg,
        SlotKind::WhereCount,
        SlotKind::WhereCol,
        SlotKind::WhereOp,
        SlotKind::WhereVal,
        SlotKind::WhereConn,
        SlotKind::GroupByPresent,
        SlotKind::GroupByCol,
        SlotKind::HavingCount,
        SlotKind::HavingCol,
        SlotKind::HavingAgg,
        SlotKind::HavingOp,
        SlotKind::HavingVal,
        SlotKind::OrderByPresent,
        SlotKind::OrderByCol,
        SlotKind::OrderByAgg,
        SlotKind::OrderByDir,
    ];

    pub fn clause(self) -> Clause {
        use SlotKind::*;
        match self {
            SelectCol | SelectAgg => Clause::Select,
            WhereCount | WhereCol | WhereOp | WhereVal | WhereConn => Clause::Where,
            GroupByPresent | GroupByCol => Clause::GroupBy,
            HavingCount | HavingCol | HavingAgg | HavingOp | HavingVal => Clause::Having,
            OrderByPresent | OrderByCol | OrderByAgg | OrderByDir => Clause::OrderBy,
        }
    }

    /// Whether questions may ever be raised about this kind of slot.
    ///
    /// `having.count` is askable only for the empty-HAVING prediction; the
    /// grammar decides that per value.
    pub fn is_askable(self) -> bool {
        !matches!(
            self,
            SlotKind::WhereCount
                | SlotKind::GroupByPresent
                | SlotKind::OrderByPresent
                | SlotKind::HavingVal
        )
    }

    pub fn name(self) -> &'static str {
        use SlotKind::*;
        match self {
            SelectCol => "select.col",
            SelectAgg => "select.agg",
            WhereCount => "where.count",
            WhereCol => "where.col",
            WhereOp => "where.op",
            WhereVal => "where.val",
            WhereConn => "where.connector",
            GroupByPresent => "groupby.present",
            GroupByCol => "groupby.col",
            HavingCount => "having.count",
            HavingCol => "having.col",
            HavingAgg => "having.agg",
            HavingOp => "having.op",
            HavingVal => "having.val",
            OrderByPresent => "orderby.present",
            OrderByCol => "orderby.col",
            OrderByAgg => "orderby.agg",
            OrderByDir => "orderby.dir",
        }
    }
}

impl fmt::Display for SlotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SlotKind {
    type Err = SlotIdParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SlotKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| SlotIdParseError(s.to_string()))
    }
}

impl SlotId {
    pub fn kind(self) -> SlotKind {
        use SlotId::*;
        match self {
            SelectCol => SlotKind::SelectCol,
            SelectAgg => SlotKind::SelectAgg,
            WhereCount => SlotKind::WhereCount,
            WhereCol(_) => SlotKind::WhereCol,
            WhereOp(_) => SlotKind::WhereOp,
            WhereVal(_) => SlotKind::WhereVal,
            WhereConn(_) => SlotKind::WhereConn,
            GroupByPresent => SlotKind::GroupByPresent,
            GroupByCol => SlotKind::GroupByCol,
            HavingCount => SlotKind::HavingCount,
            HavingCol(_) => SlotKind::HavingCol,
            HavingAgg(_) => SlotKind::HavingAgg,
            HavingOp(_) => SlotKind::HavingOp,
            HavingVal(_) => SlotKind::HavingVal,
            OrderByPresent => SlotKind::OrderByPresent,
            OrderByCol => SlotKind::OrderByCol,
            OrderByAgg => SlotKind::OrderByAgg,
            OrderByDir => SlotKind::OrderByDir,
        }
    }

    pub fn index(self) -> Option<usize> {
        use SlotId::*;
        match self {
            WhereCol(i) | WhereOp(i) | WhereVal(i) | WhereConn(i) | HavingCol(i)
            | HavingAgg(i) | HavingOp(i) | HavingVal(i) => Some(i),
            _ => None,
        }
    }

    pub fn clause(self) -> Clause {
        self.kind().clause()
    }

    pub fn is_askable(self) -> bool {
        self.kind().is_askable()
    }

    fn from_kind(kind: SlotKind, index: Option<usize>) -> Option<SlotId> {
        use SlotKind as K;
        Some(match (kind, index) {
            (K::SelectCol, None) => SlotId::SelectCol,
            (K::SelectAgg, None) => SlotId::SelectAgg,
            (K::WhereCount, None) => SlotId::WhereCount,
            (K::WhereCol, Some(i)) => SlotId::WhereCol(i),
            (K::WhereOp, Some(i)) => SlotId::WhereOp(i),
            (K::WhereVal, Some(i)) => SlotId::WhereVal(i),
            (K::WhereConn, Some(i)) => SlotId::WhereConn(i),
            (K::GroupByPresent, None) => SlotId::GroupByPresent,
            (K::GroupByCol, None) => SlotId::GroupByCol,
            (K::HavingCount, None) => SlotId::HavingCount,
            (K::HavingCol, Some(i)) => SlotId::HavingCol(i),
            (K::HavingAgg, Some(i)) => SlotId::HavingAgg(i),
            (K::HavingOp, Some(i)) => SlotId::HavingOp(i),
            (K::HavingVal, Some(i)) => SlotId::HavingVal(i),
            (K::OrderByPresent, None) => SlotId::OrderByPresent,
            (K::OrderByCol, None) => SlotId::OrderByCol,
            (K::OrderByAgg, None) => SlotId::OrderByAgg,
            (K::OrderByDir, None) => SlotId::OrderByDir,
            _ => return None,
        })
    }
}

impl fmt::Display for SlotId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SlotId::*;
        match *self {
            WhereCol(i) => write!(f, "where[{i}].col"),
            WhereOp(i) => write!(f, "where[{i}].op"),
            WhereVal(i) => write!(f, "where[{i}].val"),
            WhereConn(i) => write!(f, "where.connector[{i}]"),
            HavingCol(i) => write!(f, "having[{i}].col"),
            HavingAgg(i) => write!(f, "having[{i}].agg"),
            HavingOp(i) => write!(f, "having[{i}].op"),
            HavingVal(i) => write!(f, "having[{i}].val"),
            other => f.write_str(other.kind().name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid slot id `{0}`")]
pub struct SlotIdParseError(pub String);

impl FromStr for SlotId {
    type Err = SlotIdParseError;

    /// Accepts `where[2].op`, `where.connector[0]`, `select.col`, ...
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SlotIdParseError(s.to_string());
        let (kind_name, index) = match (s.find('['), s.find(']')) {
            (Some(open), Some(close)) if open < close => {
                let index: usize = s[open + 1..close].parse().map_err(|_| err())?;
                let name = format!("{}{}", &s[..open], &s[close + 1..]);
                (name, Some(index))
            }
            (None, None) => (s.to_string(), None),
            _ => return Err(err()),
        };
        let kind: SlotKind = kind_name.parse().map_err(|_| err())?;
        SlotId::from_kind(kind, index).ok_or_else(err)
    }
}

impl serde::Serialize for SlotId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for SlotId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_parse_roundtrip() {
        let slots = [
            SlotId::SelectCol,
            SlotId::WhereCount,
            SlotId::WhereCol(0),
            SlotId::WhereVal(3),
            SlotId::WhereConn(1),
            SlotId::HavingAgg(0),
            SlotId::OrderByDir,
            SlotId::HavingCount,
        ];
        for slot in slots {
            let text = slot.to_string();
            assert_eq!(text.parse::<SlotId>().unwrap(), slot, "{text}");
        }
        assert_eq!(SlotId::WhereConn(1).to_string(), "where.connector[1]");
        assert_eq!(SlotId::WhereOp(2).to_string(), "where[2].op");
    }

    #[test]
    fn rejects_bad_ids() {
        for bad in ["select", "where.col", "where[x].col", "select[0].col", "where[1.col"] {
            assert!(bad.parse::<SlotId>().is_err(), "{bad}");
        }
    }

    #[test]
    fn where_count_is_internal() {
        assert!(!SlotId::WhereCount.is_askable());
        assert!(SlotId::WhereCol(0).is_askable());
    }
}
