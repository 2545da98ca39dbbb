#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(e) = vn::parse::parse_signed_element(s) {
        let printed = e.to_string();
        let back = vn::parse::parse_signed_element(&printed).expect("display must re-parse");
        assert!(vn::vbar::signed_equal(&e, &back));
    }
});
