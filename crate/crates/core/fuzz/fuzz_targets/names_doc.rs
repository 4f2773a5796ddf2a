#![no_main]

use std::sync::Arc;

use forcinglab::docs::parse_name_system;
use forcinglab::{fixtures, RegularAlgebra};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let alg = Arc::new(RegularAlgebra::build(fixtures::tree3()).unwrap());
    for regularize in [false, true] {
        if let Ok(system) = parse_name_system(text, alg.clone(), regularize) {
            let _ = system.to_bool_eps();
        }
    }
});
