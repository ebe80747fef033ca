//! The `--beta` rational literal decoder must never panic, and accepted
//! values must round-trip through their canonical rendering.

#![no_main]

use libfuzzer_sys::fuzz_target;

use kn_core::scalar::parse_rational;

fuzz_target!(|data: &[u8]| {
    let Ok(input) = std::str::from_utf8(data) else { return };
    if let Ok(value) = parse_rational(input) {
        let rendered = value.to_string();
        assert_eq!(parse_rational(&rendered).expect("canonical form parses"), value);
    }
});
