#![no_main]

use libfuzzer_sys::fuzz_target;
use semigroup_cm::input::parse_json;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse_json(s);
    }
});
