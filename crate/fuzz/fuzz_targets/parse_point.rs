#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for arity in [2u8, 3, 5] {
        if let Ok(p) = vn::parse::parse_point(s, arity) {
            let printed = p.to_string();
            let back = vn::parse::parse_point(&printed, arity).expect("display must re-parse");
            assert_eq!(p, back);
        }
    }
});
