#![no_main]

use libfuzzer_sys::fuzz_target;
use rmt_snr::harness::io::{format_psi, parse_psi, PsiInput};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(psi) = parse_psi(text, "fuzz") else {
        return;
    };
    assert_eq!(parse_psi(&format_psi(&psi), "again").unwrap(), psi);
    // Small inputs also go through the spectral path; errors are fine, panics are not.
    let small = match &psi {
        PsiInput::Diagonal(d) => d.len() <= 64,
        PsiInput::Dense(m) => m.rows() <= 16,
    };
    if small {
        if let Ok(spec) = psi.into_spectrum() {
            assert!(spec.eigenvalues().iter().all(|q| *q >= 0.0));
        }
    }
});
