#![no_main]

use libfuzzer_sys::fuzz_target;
use semigroup_cm::input::parse_text;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(doc) = parse_text(s) {
            assert!(!doc.rows().is_empty());
        }
    }
});
