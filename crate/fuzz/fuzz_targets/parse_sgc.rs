#![no_main]

use libfuzzer_sys::fuzz_target;
use uvlab::graph::{expand, parse_sgc, write_sgc};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(c) = parse_sgc(text) else { return };
    // Whatever parses must re-serialize to an equivalent circuit.
    let again = parse_sgc(&write_sgc(&c)).expect("written circuit parses");
    assert_eq!((again.n(), again.m()), (c.n(), c.m()));
    if c.n() <= 4 {
        assert_eq!(expand(&again).ok(), expand(&c).ok());
    }
});
