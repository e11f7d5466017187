#![no_main]

use libfuzzer_sys::fuzz_target;
use sylow_core::partition::PartitionSpec;
use sylow_core::wreath::Params;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let params = Params::new(2, 4).unwrap();
    if let Ok(spec) = PartitionSpec::parse(&params, text) {
        let again = PartitionSpec::parse(&params, &spec.format()).unwrap();
        assert_eq!(spec.indices(), again.indices());
    }
});
