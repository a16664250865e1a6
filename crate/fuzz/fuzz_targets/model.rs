#![no_main]

use bcm_core::io::parse_model;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = parse_model(text) {
        let _ = m.brute_force_minimum();
        let _ = bcm_core::diffusion::dual_bound(&m, &m.zero_shift());
    }
});
