#![no_main]

use ginv::datasets::Dataset;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(d) = Dataset::from_json(s) {
            let again = Dataset::from_json(&d.to_json()).expect("round trip");
            assert_eq!(again.len(), d.len());
        }
    }
});
