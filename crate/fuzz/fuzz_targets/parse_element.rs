#![no_main]

use libfuzzer_sys::fuzz_target;

// Round-trip invariant: anything that parses must re-parse from its own
// display to an equal element.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(e) = vn::parse::parse_element(s) {
        let printed = e.to_string();
        let back = vn::parse::parse_element(&printed).expect("display must re-parse");
        assert!(e.equal(&back).unwrap());
    }
});
