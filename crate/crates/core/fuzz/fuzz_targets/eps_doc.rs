#![no_main]

use forcinglab::docs::{parse_eps, to_json, EpsDoc};
use forcinglab::extensional::{check_e, sim_stages};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(e) = parse_eps(text) {
        let back = parse_eps(&to_json(&EpsDoc::of(&e))).unwrap();
        assert_eq!(back.pairs(), e.pairs());
        if e.len() <= 16 {
            let _ = sim_stages(&e);
            assert!(check_e(&e).is_pass());
        }
    }
});
