#![no_main]

use catphase_harness::csvio;
use libfuzzer_sys::fuzz_target;

// The CSV loader must never panic, and whatever it accepts must survive a
// save/load round trip bit-identically.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rows) = csvio::parse_rows(text) {
        let rewritten = csvio::rows_to_string(&rows);
        let again = csvio::parse_rows(&rewritten).expect("round trip parses");
        assert_eq!(rows.len(), again.len());
        for (a, b) in rows.iter().zip(&again) {
            assert_eq!(a.scenario_id, b.scenario_id);
            assert_eq!(a.fidelity.to_bits(), b.fidelity.to_bits());
            assert_eq!(a.trace_error.to_bits(), b.trace_error.to_bits());
            assert_eq!(a.leakage.to_bits(), b.leakage.to_bits());
        }
    }
});
