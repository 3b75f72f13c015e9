#![no_main]

use density_core::Rational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(r) = s.parse::<Rational>() {
            assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
        }
    }
});
