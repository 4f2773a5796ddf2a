#![no_main]

use forcinglab::language::{parse_formula, Signature};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let sig = Signature::new([("R".to_string(), 1), ("S".to_string(), 2)], &["n0", "n1"]).unwrap();
    if let Ok(f) = parse_formula(text, &sig) {
        let printed = f.to_string();
        assert_eq!(parse_formula(&printed, &sig).unwrap(), f, "{printed}");
    }
});
