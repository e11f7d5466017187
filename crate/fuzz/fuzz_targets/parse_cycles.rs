#![no_main]

use libfuzzer_sys::fuzz_target;
use sylow_core::perm::Perm;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for degree in [9, 27, 81] {
        if let Ok(perm) = Perm::parse_cycles(text, degree) {
            let again = Perm::parse_cycles(&perm.format_cycles(), degree).unwrap();
            assert_eq!(perm, again);
        }
    }
});
