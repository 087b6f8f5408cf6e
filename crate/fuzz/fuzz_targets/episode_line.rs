//! Episode JSONL line parser must never panic; accepted records must pass
//! their own invariants.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(line) = std::str::from_utf8(data) {
        if let Ok(ep) = aimcheck::dataset::parse_episode_line(line) {
            ep.check_invariants().expect("accepted episode is invariant-clean");
        }
    }
});
