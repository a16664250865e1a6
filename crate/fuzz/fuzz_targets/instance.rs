#![no_main]

use bcm_core::io::parse_instance;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(inst) = parse_instance(text) {
        // Serializing and reading back must be lossless.
        let json = inst.to_json();
        assert_eq!(parse_instance(&json).unwrap().to_json(), json);
    }
});
