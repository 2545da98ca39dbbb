#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(gens) = vn::parse::parse_group(s) {
        for e in &gens {
            let back = vn::parse::parse_element(&e.to_string()).expect("display must re-parse");
            assert!(e.equal(&back).unwrap());
        }
    }
});
