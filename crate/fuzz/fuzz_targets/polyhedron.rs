#![no_main]

use bcm_core::io::parse_polyhedron;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = parse_polyhedron(text) {
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(parse_polyhedron(&json).unwrap(), p);
    }
});
