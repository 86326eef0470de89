#![no_main]

use libfuzzer_sys::fuzz_target;
use rmt_snr::harness::io::{format_matrix, parse_matrix};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = parse_matrix(text, "fuzz") {
        assert!(m.rows() > 0 && m.cols() > 0);
        assert!(m.as_slice().iter().all(|v| v.is_finite()));
        // Formatting is an exact round trip.
        assert_eq!(parse_matrix(&format_matrix(&m), "again").unwrap(), m);
    }
});
