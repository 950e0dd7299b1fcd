#![no_main]

use densest_core::instance::Instance;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(inst) = Instance::from_json_str(text) else { return };
    // Accepted documents re-serialize to an equivalent instance.
    let again = Instance::from_json_str(&inst.to_json_string().unwrap()).unwrap();
    assert_eq!(inst.k(), again.k());
});
