#![no_main]

use density_core::word::{
    format_binary, format_triadic, parse_binary, parse_naturals, parse_triadic,
};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(w) = parse_binary(s) {
            assert_eq!(parse_binary(&format_binary(&w)).unwrap(), w);
        }
        if let Ok(w) = parse_triadic(s) {
            assert_eq!(parse_triadic(&format_triadic(&w)).unwrap(), w);
        }
        let _ = parse_naturals(s);
    }
});
