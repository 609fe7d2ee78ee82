#![no_main]

use arabic_ir::morphology::{light_stem, normalize_str, RootLexicon};
use arabic_ir::search::Query;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(q) = Query::parse("fuzz", text) {
        let again = normalize_str(q.normalized.as_str()).expect("normalized word normalizes");
        assert_eq!(again, q.normalized);
        if let Ok(root) = light_stem(&q.normalized, &RootLexicon::default()) {
            assert!((3..=4).contains(&root.arity()));
        }
    }
});
