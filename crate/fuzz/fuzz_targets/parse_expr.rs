//! The expression parser must never panic on arbitrary input; errors come
//! back as `ParseError` with a byte offset inside the input.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(input) = std::str::from_utf8(data) else { return };
    if let Err(e) = kn_core::expr::parse(input) {
        assert!(e.offset <= input.len());
        assert!(!e.expected.is_empty());
    }
});
