#![no_main]

use libfuzzer_sys::fuzz_target;
use sylow_core::corpus::{self, Entry};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(c) = corpus::load(text) else { return };
    for entry in c.entries.iter().take(4) {
        let (Entry::Decide { p, n, .. } | Entry::Uniserial { p, n, .. }) = entry;
        // Keep replays at desk scale.
        if (*p as u64).checked_pow(*n as u32).map_or(true, |d| d > 81) {
            continue;
        }
        let _ = corpus::replay(entry);
    }
});
