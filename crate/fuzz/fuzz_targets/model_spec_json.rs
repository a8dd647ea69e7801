#![no_main]

use ginv::models::{Model, ModelSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(spec) = ModelSpec::from_json(s) {
            // Building may reject large or inconsistent specs but must not panic.
            if spec.n <= 3 {
                let _ = Model::new(spec);
            }
        }
    }
});
