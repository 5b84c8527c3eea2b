#![no_main]

use dioph::format::{curve_to_json, parse_curve_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = parse_curve_json(s) {
        let again = parse_curve_json(&curve_to_json(&c)).expect("printed curve parses");
        assert_eq!(again, c);
    }
});
