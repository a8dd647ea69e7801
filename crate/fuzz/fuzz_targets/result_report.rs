#![no_main]

use ginv_cli::{render, ExperimentResult, Format};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(r) = ExperimentResult::from_json(s) {
            assert_eq!(render(&r, Format::Csv), render(&r, Format::Csv));
            let _ = render(&r, Format::Md);
        }
    }
});
