#![no_main]

use libfuzzer_sys::fuzz_target;
use semigroup_cm::input::parse_input;

fuzz_target!(|data: &[u8]| {
    let _ = parse_input(data);
});
