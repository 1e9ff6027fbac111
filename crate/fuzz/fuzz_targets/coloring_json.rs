#![no_main]

use libfuzzer_sys::fuzz_target;
use uvlab::graph::Coloring;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = Coloring::from_json(text) {
        assert_eq!(Coloring::from_json(&c.to_json()).unwrap(), c);
    }
});
