//! How participants are balanced across scenario groups and given a
//! reproducible scenario order.
//!
//! ```bash
//! cargo run --example assign_scenarios
//! ```

use lotforge::service::{group_for, participant_seed, scenario_order};

fn main() {
    let base_seed = 2024;
    for (n, participant) in ["ana", "bo", "cy", "dee", "eli", "fox"].iter().enumerate() {
        let group = group_for(n);
        let seed = participant_seed(base_seed, participant);
        let order = scenario_order(group, seed);
        let order: Vec<&str> = order.iter().map(|s| s.as_str()).collect();
        println!(
            "{participant:<4} group {group:?} seed {seed:>20} order {}",
            order.join(" ")
        );
    }
    // same participant, same seed, same order
    let a = scenario_order(group_for(0), participant_seed(base_seed, "ana"));
    let b = scenario_order(group_for(0), participant_seed(base_seed, "ana"));
    assert_eq!(a, b);
}
