use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::catalog::{ScenarioGroup, ScenarioId};

/// FNV-1a, used to spread participant ids over seeds.
pub fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Seed for a participant when the request does not supply one.
pub fn participant_seed(base: u64, participant_id: &str) -> u64 {
    base ^ fnv1a(participant_id)
}

/// Group for the `n`-th assignment (zero based): A, B, C, A, ...
pub fn group_for(n: usize) -> ScenarioGroup {
    ScenarioGroup::ALL[n % ScenarioGroup::ALL.len()]
}

/// The group's four scenarios in a seeded Fisher-Yates order.
pub fn scenario_order(group: ScenarioGroup, seed: u64) -> Vec<ScenarioId> {
    let mut order = group.scenario_ids().to_vec();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}
