#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(w) = vn::parse::parse_word(s) {
        let printed = w.to_string();
        let back = vn::parse::parse_word(&printed).expect("display must re-parse");
        assert_eq!(w, back);
        // Reduction is idempotent on arbitrary parsed words.
        let r = vn::words::reduce(&w);
        assert_eq!(r, vn::words::reduce(&r));
    }
});
