#![no_main]

use std::sync::Arc;

use forcinglab::docs::{from_json, SignatureRef, ValuationDoc};
use forcinglab::{fixtures, RegularAlgebra};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = from_json::<ValuationDoc>(text) else { return };
    // signature paths would read arbitrary files
    if matches!(doc.signature, SignatureRef::Path(_)) {
        return;
    }
    let alg = Arc::new(RegularAlgebra::build(fixtures::tree3()).unwrap());
    for regularize in [false, true] {
        let _ = doc.build(alg.clone(), None, regularize);
    }
});
