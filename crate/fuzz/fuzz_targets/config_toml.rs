//! Run-config TOML parser must never panic; accepted configs must satisfy
//! validate().

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(config) = aimcheck::config::RunConfig::from_toml_str(text) {
            config.validate().expect("accepted config validates");
        }
    }
});
