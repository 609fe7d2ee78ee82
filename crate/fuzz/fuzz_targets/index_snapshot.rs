#![no_main]

use arabic_ir::index::{decode_snapshot, encode_snapshot};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(index) = decode_snapshot(data) {
        let bytes = encode_snapshot(&index);
        assert_eq!(decode_snapshot(&bytes).expect("re-encoded snapshot decodes"), index);
    }
});
