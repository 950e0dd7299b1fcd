#![no_main]

use densest_core::experiments::sweep::SweepSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = SweepSpec::from_json_str(text) else { return };
    let expected = spec.shapes.len() * spec.alpha.len() * spec.beta.len() * spec.distributions.len();
    if expected <= 4096 {
        assert_eq!(spec.cells().len(), expected);
    }
});
