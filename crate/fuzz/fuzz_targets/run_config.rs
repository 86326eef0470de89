#![no_main]

use libfuzzer_sys::fuzz_target;
use rmt_snr::harness::RunConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = RunConfig::from_json(text) {
        // Resolution validates but does not run anything.
        let _ = config.resolve();
    }
});
