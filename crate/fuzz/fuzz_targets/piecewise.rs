#![no_main]

use bcm_core::io::parse_piecewise;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_piecewise(text);
    }
});
