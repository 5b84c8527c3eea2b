#![no_main]

use dioph::format::parse_psi;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_psi(s) {
        let again = parse_psi(&p.to_string()).expect("printed spec parses");
        assert_eq!(again, p);
    }
});
