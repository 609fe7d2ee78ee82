#![no_main]

use arabic_ir::eval::{parse_results_file, parse_summary_file};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_results_file(text);
        let _ = parse_summary_file(text);
    }
});
