#![no_main]

use ginv_cli::GraphArg;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(arg) = GraphArg::parse(s) {
            if let Ok(g) = arg.build() {
                if g.n() <= 6 {
                    let _ = g.automorphisms();
                }
            }
        }
    }
});
