//! Rendering a parsed expression and re-parsing must reproduce the same
//! syntax tree (parse-render-parse stability).

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(input) = std::str::from_utf8(data) else { return };
    let Ok(ast) = kn_core::expr::parse(input) else { return };
    let rendered = ast.to_string();
    let reparsed = kn_core::expr::parse(&rendered)
        .unwrap_or_else(|e| panic!("rendering {:?} failed to re-parse: {}", rendered, e));
    assert_eq!(reparsed, ast, "round trip changed the tree for {:?}", rendered);
});
