#![no_main]

use forcinglab::docs::parse_dense;
use forcinglab::filters::rasiowa_sikorski;
use forcinglab::fixtures;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let poset = fixtures::tree7();
    if let Ok(family) = parse_dense(text, &poset) {
        for p in 0..poset.len() {
            let g = rasiowa_sikorski(&poset, p, &family).unwrap();
            assert!(g.contains(p));
        }
    }
});
