use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::softmax;
use crate::sql::SlotId;

/// Feature-dropping settings for the uncertainty passes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationConfig {
    pub passes: usize,
    pub drop_rate: f64,
    pub seed: u64,
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        PerturbationConfig {
            passes: 10,
            drop_rate: 0.1,
            seed: 0,
        }
    }
}

/// Seed of pass `pass` for one decision. Each pass gets an independent
/// ChaCha8 stream, so reordering examples or slots does not shift draws.
pub fn pass_seed(base: u64, example_id: &str, slot: SlotId, pass: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(base.to_le_bytes());
    h.update(example_id.as_bytes());
    h.update([0x1f]);
    h.update(slot.to_string().as_bytes());
    h.update([0x1f]);
    h.update((pass as u64).to_le_bytes());
    let digest = h.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

/// Sum of contributions, skipping those with `keep[k] == false`.
pub(crate) fn score(contributions: &[f64], keep: impl Fn(usize) -> bool) -> f64 {
    contributions
        .iter()
        .enumerate()
        .filter(|(k, _)| keep(*k))
        .map(|(_, c)| c)
        .sum()
}

/// Probability of option `chosen` in each perturbed pass. Options are
/// visited in order and each contribution is dropped when a uniform draw
/// falls below the drop rate.
pub(crate) fn perturbed_chosen_probs(
    contributions: &[Vec<f64>],
    chosen: usize,
    temperature: f64,
    config: &PerturbationConfig,
    example_id: &str,
    slot: SlotId,
) -> Vec<f64> {
    (0..config.passes)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(pass_seed(config.seed, example_id, slot, i));
            let scores: Vec<f64> = contributions
                .iter()
                .map(|cs| {
                    let keep: Vec<bool> = cs.iter().map(|_| rng.random::<f64>() >= config.drop_rate).collect();
                    score(cs, |k| keep[k])
                })
                .collect();
            softmax(&scores, temperature)[chosen]
        })
        .collect()
}
