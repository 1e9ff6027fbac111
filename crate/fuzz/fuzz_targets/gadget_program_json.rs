#![no_main]

use libfuzzer_sys::fuzz_target;
use uvlab::gadget::{single_qubit_proof_verifier, GadgetMode, GadgetProgram};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(p) = GadgetProgram::from_json(text) else { return };
    assert_eq!(GadgetProgram::from_json(&p.to_json()).unwrap(), p);
    if p.unitaries.len() <= 8 {
        let w = single_qubit_proof_verifier(0.5, &p, GadgetMode::Exact).unwrap();
        assert!((0.0..=1.0).contains(&w));
    }
});
