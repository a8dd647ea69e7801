#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(p) = ginv::observables::pauli_string(s) {
            let odd = s.trim().chars().filter(|&c| c == 'Y').count() % 2 == 1;
            assert_eq!(p.purely_imaginary, odd);
        }
    }
});
