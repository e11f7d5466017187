#![no_main]

use libfuzzer_sys::fuzz_target;
use sylow_core::perm::Perm;

fuzz_target!(|data: &[u8]| {
    if let Ok(perm) = serde_json::from_slice::<Perm>(data) {
        let text = serde_json::to_string(&perm).unwrap();
        assert_eq!(serde_json::from_str::<Perm>(&text).unwrap(), perm);
        assert!(perm.mul(&perm.inverse()).is_identity());
    }
});
