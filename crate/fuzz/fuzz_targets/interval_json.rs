#![no_main]

use density_realline::IntervalSet;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(a) = IntervalSet::from_json_str(s) {
            let back = serde_json::to_string(&a).unwrap();
            assert_eq!(IntervalSet::from_json_str(&back).unwrap(), a);
        }
    }
});
