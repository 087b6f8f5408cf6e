//! Feature JSONL line parser must never panic; accepted vectors must have
//! exactly 50 movement dims.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(line) = std::str::from_utf8(data) {
        if let Ok(v) = aimcheck::dataset::parse_feature_line(line) {
            assert_eq!(v.movement().len(), 50);
        }
    }
});
