#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for arity in [2u8, 3] {
        if let Ok(c) = vn::parse::parse_clopen(s, arity) {
            let printed = c.to_string();
            let back = vn::parse::parse_clopen(&printed, arity).expect("display must re-parse");
            assert_eq!(c, back);
            // The canonical form is closed under double complement.
            assert_eq!(c.complement().complement(), c);
        }
    }
});
