#![no_main]

use catphase_harness::scenario::ScenarioConfig;
use libfuzzer_sys::fuzz_target;

// The scenario config parser must reject arbitrary input gracefully: no
// panics, and anything it does accept must expand into scenarios without
// panicking either.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = ScenarioConfig::from_json(text) {
        let _ = cfg.scenarios();
    }
});
