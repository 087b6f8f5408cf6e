//! Checkpoint decoder must never panic; a successful decode must re-encode
//! to the same bytes.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(model) = aimcheck::nn::checkpoint::decode(data) {
        let bytes = aimcheck::nn::checkpoint::encode(&model);
        assert_eq!(bytes, data, "decode/encode must round-trip");
    }
});
