#![no_main]

use libfuzzer_sys::fuzz_target;
use semigroup_cm::cli::{run_command, Command, RunConfig, EXIT_INTERNAL};
use semigroup_cm::input::parse_input;
use semigroup_cm::semigroup::AffineSemigroup;

// small boxes keep each iteration cheap
const CONFIG: RunConfig = RunConfig {
    field: semigroup_cm::homology::FieldSpec::Rationals,
    bound: Some(2),
    degree: Some(2),
    format: semigroup_cm::cli::Format::Text,
};

fuzz_target!(|data: &[u8]| {
    let Ok(doc) = parse_input(data) else { return };
    if doc.generators.rows() > 8 || doc.rows().iter().flatten().any(|&x| x > 64) {
        return;
    }
    let Ok(s) = AffineSemigroup::new(&doc.generators) else { return };
    let _ = s.classify();
    let _ = s.is_standard();
    for cmd in [Command::Facets, Command::Complex, Command::Cm] {
        assert_ne!(run_command(cmd, &doc, &CONFIG).exit_code, EXIT_INTERNAL);
    }
});
