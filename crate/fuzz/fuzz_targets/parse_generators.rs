#![no_main]

use libfuzzer_sys::fuzz_target;
use sylow_core::words::parse_generators;
use sylow_core::wreath::Params;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let params = Params::new(3, 3).unwrap();
    if let Ok(gens) = parse_generators(text, &params) {
        assert!(gens.iter().all(|g| g.degree() == params.degree()));
    }
});
