#![no_main]

use forcinglab::docs::{parse_poset, to_json, PosetDoc};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_poset(text) {
        let back = parse_poset(&to_json(&PosetDoc::of(&p))).unwrap();
        assert_eq!(back.elements(), p.elements());
        for a in 0..p.len() {
            for b in 0..p.len() {
                assert_eq!(back.leq(a, b), p.leq(a, b));
            }
        }
    }
});
