#![no_main]

use arabic_ir::morphology::PatternSet;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(set) = PatternSet::parse(text) {
        let again = PatternSet::parse(&set.to_file_string()).expect("rendered pattern file parses");
        assert_eq!(again.len(), set.len());
    }
});
