#![no_main]

use dioph::format::{curve_to_text, parse_curve_text};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = parse_curve_text(s) {
        let again = parse_curve_text(&curve_to_text(&c)).expect("printed curve parses");
        assert_eq!(again, c);
    }
});
