#![no_main]

use arabic_ir::corpus::parse_queries;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_queries(text);
    }
});
