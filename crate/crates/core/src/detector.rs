//! Error detectors: decide per decision whether to ask the user.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::parser::{Decision, PerturbationConfig, SlotValue};
use crate::sql::{SlotId, SlotKind, UnknownCode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectorKind {
    Prob,
    Dropout,
    Unlimit,
    Off,
}

impl FromStr for DetectorKind {
    type Err = UnknownCode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "prob" => Ok(DetectorKind::Prob),
            "dropout" => Ok(DetectorKind::Dropout),
            "unlimit" => Ok(DetectorKind::Unlimit),
            "off" => Ok(DetectorKind::Off),
            _ => Err(UnknownCode {
                kind: "detector",
                code: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DetectorKind::Prob => "prob",
            DetectorKind::Dropout => "dropout",
            DetectorKind::Unlimit => "unlimit",
            DetectorKind::Off => "off",
        })
    }
}

/// Active detector with exactly the parameters it needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DetectorConfig {
    Prob {
        p_star: f64,
    },
    Dropout {
        s_star: f64,
        #[serde(default)]
        perturbation: PerturbationConfig,
    },
    Unlimit,
    Off,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid detector config: {0}")]
pub struct DetectorConfigError(pub String);

impl DetectorConfig {
    pub fn kind(&self) -> DetectorKind {
        match self {
            DetectorConfig::Prob { .. } => DetectorKind::Prob,
            DetectorConfig::Dropout { .. } => DetectorKind::Dropout,
            DetectorConfig::Unlimit => DetectorKind::Unlimit,
            DetectorConfig::Off => DetectorKind::Off,
        }
    }

    pub fn validate(&self) -> Result<(), DetectorConfigError> {
        match *self {
            DetectorConfig::Prob { p_star } if !(p_star > 0.0 && p_star <= 1.0) => {
                Err(DetectorConfigError(format!("p* must lie in (0, 1], got {p_star}")))
            }
            DetectorConfig::Dropout { s_star, .. } if !(s_star > 0.0 && s_star.is_finite()) => {
                Err(DetectorConfigError(format!("s* must be positive, got {s_star}")))
            }
            DetectorConfig::Dropout { perturbation, .. } if perturbation.passes == 0 => {
                Err(DetectorConfigError("at least one perturbed pass is needed".into()))
            }
            DetectorConfig::Dropout { perturbation, .. } if !(0.0..1.0).contains(&perturbation.drop_rate) => Err(
                DetectorConfigError(format!("drop rate must lie in [0, 1), got {}", perturbation.drop_rate)),
            ),
            _ => Ok(()),
        }
    }

    /// Threshold of a thresholding detector.
    pub fn threshold(&self) -> Option<f64> {
        match *self {
            DetectorConfig::Prob { p_star } => Some(p_star),
            DetectorConfig::Dropout { s_star, .. } => Some(s_star),
            _ => None,
        }
    }

    /// Same detector with its threshold replaced.
    pub fn with_threshold(&self, t: f64) -> DetectorConfig {
        match *self {
            DetectorConfig::Prob { .. } => DetectorConfig::Prob { p_star: t },
            DetectorConfig::Dropout { perturbation, .. } => DetectorConfig::Dropout { s_star: t, perturbation },
            other => other,
        }
    }
}

/// Outcome of one detector check. `score` is the chosen probability for
/// the prob detector and the pass stddev for the dropout detector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub ask: bool,
    pub score: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passes: Option<Vec<f64>>,
}

/// Ask iff the chosen probability is strictly below `p_star`.
pub fn should_ask_prob(decision: &Decision, p_star: f64) -> bool {
    decision.chosen_prob() < p_star
}

/// Population standard deviation; zero for a single value.
pub fn population_stddev(values: &[f64]) -> f64 {
    // exact zero for constant input; the mean can carry rounding error
    if values.iter().all(|v| *v == values[0]) {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt()
}

/// Ask iff the stddev of `passes` is strictly above `s_star`; the stddev
/// is returned as the score.
pub fn should_ask_dropout(passes: &[f64], s_star: f64) -> (bool, f64) {
    let score = population_stddev(passes);
    (score > s_star, score)
}

/// Whether the chosen value of `decision` can be asked about at all.
/// HAVING's count is only asked when the prediction is an empty HAVING.
pub fn is_askable(decision: &Decision) -> bool {
    is_askable_value(decision.slot, decision.chosen_value())
}

/// [`is_askable`] for a bare slot/value pair.
pub fn is_askable_value(slot: SlotId, value: &SlotValue) -> bool {
    let kind = slot.kind();
    if kind == SlotKind::HavingCount {
        return value == &SlotValue::Count(0);
    }
    kind.is_askable()
}

/// Applies `config` to `decision`. `passes` is only invoked by the dropout
/// detector, and only for askable slots.
pub fn assess<E>(
    config: &DetectorConfig,
    decision: &Decision,
    passes: impl FnOnce(&PerturbationConfig) -> Result<Vec<f64>, E>,
) -> Result<Verdict, E> {
    if !is_askable(decision) {
        return Ok(Verdict {
            ask: false,
            score: None,
            passes: None,
        });
    }
    Ok(match config {
        DetectorConfig::Prob { p_star } => Verdict {
            ask: should_ask_prob(decision, *p_star),
            score: Some(decision.chosen_prob()),
            passes: None,
        },
        DetectorConfig::Dropout { s_star, perturbation } => {
            let values = passes(perturbation)?;
            let (ask, score) = should_ask_dropout(&values, *s_star);
            Verdict {
                ask,
                score: Some(score),
                passes: Some(values),
            }
        }
        DetectorConfig::Unlimit => Verdict {
            ask: true,
            score: None,
            passes: None,
        },
        DetectorConfig::Off => Verdict {
            ask: false,
            score: None,
            passes: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use std::convert::Infallible;

    use super::*;
    use crate::sql::Agg;
    use proptest::prelude::*;

    fn decision(slot: SlotId, p: f64) -> Decision {
        let (a, b) = match slot.kind() {
            SlotKind::WhereCount | SlotKind::HavingCount => (SlotValue::Count(0), SlotValue::Count(1)),
            _ => (SlotValue::Agg(Agg::Max), SlotValue::Agg(Agg::Min)),
        };
        Decision::new(slot, vec![a, b], vec![p, 1.0 - p]).unwrap()
    }

    fn never(_: &PerturbationConfig) -> Result<Vec<f64>, Infallible> {
        panic!("passes not expected")
    }

    #[test]
    fn prob_threshold_is_strict() {
        assert!(should_ask_prob(&decision(SlotId::SelectAgg, 0.9), 0.95));
        assert!(!should_ask_prob(&decision(SlotId::SelectAgg, 0.95), 0.95));
        let certain = Decision::new(SlotId::SelectAgg, vec![SlotValue::Agg(Agg::Max)], vec![1.0]).unwrap();
        assert!(!should_ask_prob(&certain, 1.0));
    }

    #[test]
    fn dropout_stddev() {
        assert_eq!(should_ask_dropout(&[0.8, 0.8, 0.8], 0.01), (false, 0.0));
        let (ask, score) = should_ask_dropout(&[0.4, 0.6], 0.05);
        assert!(ask);
        assert!((score - 0.1).abs() < 1e-12);
        assert_eq!(should_ask_dropout(&[0.3], 1e-9), (false, 0.0));
    }

    #[test]
    fn policies() {
        let d = decision(SlotId::SelectAgg, 0.5);
        assert!(!assess(&DetectorConfig::Off, &d, never).unwrap().ask);
        assert!(assess(&DetectorConfig::Unlimit, &d, never).unwrap().ask);
        let count = decision(SlotId::WhereCount, 0.5);
        assert!(!assess(&DetectorConfig::Unlimit, &count, never).unwrap().ask);
        let empty_having = decision(SlotId::HavingCount, 0.9);
        assert!(assess(&DetectorConfig::Unlimit, &empty_having, never).unwrap().ask);
        let some_having = decision(SlotId::HavingCount, 0.1);
        assert!(!assess(&DetectorConfig::Unlimit, &some_having, never).unwrap().ask);
    }

    #[test]
    fn config_validation_and_serde() {
        assert!(DetectorConfig::Prob { p_star: 0.0 }.validate().is_err());
        assert!(DetectorConfig::Prob { p_star: 1.0 }.validate().is_ok());
        assert!(DetectorConfig::Dropout { s_star: 0.0, perturbation: PerturbationConfig::default() }.validate().is_err());
        let c: DetectorConfig = serde_json::from_str(r#"{"kind":"prob","p_star":0.95}"#).unwrap();
        assert_eq!(c, DetectorConfig::Prob { p_star: 0.95 });
        let c: DetectorConfig = serde_json::from_str(r#"{"kind":"dropout","s_star":0.1}"#).unwrap();
        assert_eq!(c.kind(), DetectorKind::Dropout);
    }

    proptest! {
        #[test]
        fn prob_asks_are_nested(ps in proptest::collection::vec(0.0f64..=1.0, 1..30), a in 0.01f64..=1.0, b in 0.01f64..=1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            for p in ps {
                let d = decision(SlotId::SelectAgg, p);
                prop_assert!(!should_ask_prob(&d, lo) || should_ask_prob(&d, hi));
            }
        }

        #[test]
        fn dropout_asks_are_nested(passes in proptest::collection::vec(0.0f64..=1.0, 1..12), a in 0.001f64..0.5, b in 0.001f64..0.5) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(!should_ask_dropout(&passes, hi).0 || should_ask_dropout(&passes, lo).0);
        }

        #[test]
        fn constant_passes_never_ask(v in 0.0f64..=1.0, n in 1usize..20, s in 1e-9f64..1.0) {
            prop_assert!(!should_ask_dropout(&vec![v; n], s).0);
        }
    }
}
