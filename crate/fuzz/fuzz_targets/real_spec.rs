#![no_main]

use dioph::format::parse_real;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_real(s) {
        let again = parse_real(&r.to_spec()).expect("printed spec parses");
        assert_eq!(again, r);
    }
});
