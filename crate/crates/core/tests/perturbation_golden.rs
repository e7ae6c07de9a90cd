//! Perturbed passes of the lexical parser against a from-scratch
//! re-implementation of the seeded feature-dropping procedure, and against
//! vectors frozen in `golden/perturbation.json`.

use std::path::PathBuf;

use clarisql::db::{Cell, Column, ColumnType, Table};
use clarisql::parser::{BaseParser, Committed, HeuristicParser, ParseContext, PerturbationConfig, SlotValue};
use clarisql::sql::{Mode, SlotId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

const QUESTION: &str = "what is the maximum age of players from ohio";

fn t1() -> Table {
    let row = |p: &str, a: f64, pl: &str| vec![Cell::Text(p.into()), Cell::Number(a), Cell::Text(pl.into())];
    Table {
        id: "t1".into(),
        name: "players".into(),
        columns: vec![
            Column { name: "player".into(), ty: ColumnType::Text },
            Column { name: "age".into(), ty: ColumnType::Number },
            Column { name: "place".into(), ty: ColumnType::Text },
        ],
        rows: vec![row("ann", 30.0, "ohio"), row("bob", 25.0, "iowa"), row("cal", 30.0, "ohio")],
    }
}

/// Seed bytes: base (LE), example id, 0x1f, slot name, 0x1f, pass (LE u64);
/// the first 8 digest bytes read little-endian.
fn oracle_seed(base: u64, example: &str, slot: &str, pass: u64) -> u64 {
    let mut bytes = Vec::new();
    bytes.extend_from_slice(&base.to_le_bytes());
    bytes.extend_from_slice(example.as_bytes());
    bytes.push(0x1f);
    bytes.extend_from_slice(slot.as_bytes());
    bytes.push(0x1f);
    bytes.extend_from_slice(&pass.to_le_bytes());
    let d = Sha256::digest(&bytes);
    u64::from_le_bytes(d[..8].try_into().unwrap())
}

fn oracle_passes(contribs: &[Vec<f64>], chosen: usize, tau: f64, cfg: &PerturbationConfig, example: &str, slot: &str) -> Vec<f64> {
    let mut out = Vec::new();
    for pass in 0..cfg.passes as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(oracle_seed(cfg.seed, example, slot, pass));
        let mut scores = Vec::new();
        for option in contribs {
            let mut s = 0.0;
            for c in option {
                let u: f64 = rng.random();
                if u >= cfg.drop_rate {
                    s += c;
                }
            }
            scores.push(s);
        }
        let m = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = scores.iter().map(|s| ((s - m) / tau).exp()).collect();
        let z: f64 = exps.iter().sum();
        out.push(exps[chosen] / z);
    }
    out
}

fn fixture_vectors() -> Vec<(String, Vec<f64>, Vec<f64>)> {
    let table = t1();
    let parser = HeuristicParser::default();
    let ctx = ParseContext {
        example_id: "fixture",
        question: QUESTION,
        table: &table,
        mode: Mode::Wikisql,
    };
    let cfg = PerturbationConfig {
        passes: 10,
        drop_rate: 0.1,
        seed: 7,
    };
    let age = Committed {
        slot: SlotId::SelectCol,
        value: SlotValue::Column("age".into()),
        prob: 1.0,
        passes: None,
    };
    let mut out = Vec::new();
    for (slot, partial) in [(SlotId::SelectCol, vec![]), (SlotId::SelectAgg, vec![age])] {
        let decision = parser.distribution(&ctx, &partial, slot).unwrap();
        let got = parser.perturbed_passes(&ctx, &partial, &decision, &cfg).unwrap();
        let feats = parser.features(&ctx, &partial, slot).unwrap();
        let contribs: Vec<Vec<f64>> = feats.iter().map(|f| f.contributions.clone()).collect();
        let want = oracle_passes(&contribs, decision.chosen, parser.temperature_for(QUESTION), &cfg, "fixture", &slot.to_string());
        out.push((slot.to_string(), got, want));
    }
    out
}

#[test]
fn passes_match_the_oracle() {
    for (slot, got, want) in fixture_vectors() {
        assert_eq!(got.len(), 10);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12, "{slot}: {got:?} vs {want:?}");
        }
        // some pass differs from another: the drop actually bites
        assert!(got.iter().any(|p| *p != got[0]), "{slot}: {got:?}");
    }
}

#[test]
fn passes_match_the_golden_file() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/perturbation.json");
    let vectors = fixture_vectors();
    if std::env::var_os("CLARISQL_BLESS").is_some() {
        let frozen: serde_json::Map<String, serde_json::Value> =
            vectors.iter().map(|(s, _, want)| (s.clone(), serde_json::json!(want))).collect();
        std::fs::write(&path, serde_json::to_string_pretty(&frozen).unwrap() + "\n").unwrap();
    }
    let golden: serde_json::Map<String, serde_json::Value> =
        serde_json::from_str(&std::fs::read_to_string(&path).expect("golden file present")).unwrap();
    assert_eq!(golden.len(), vectors.len());
    for (slot, got, _) in vectors {
        let frozen: Vec<f64> = serde_json::from_value(golden[&slot].clone()).unwrap();
        assert_eq!(frozen.len(), got.len());
        for (g, f) in got.iter().zip(&frozen) {
            assert!((g - f).abs() < 1e-12, "{slot}: {got:?} vs {frozen:?}");
        }
    }
}
