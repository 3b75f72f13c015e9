#![no_main]

use density_cantor::CylinderSet;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(c) = CylinderSet::from_json_str(s) {
            let back = serde_json::to_string(&c.to_json()).unwrap();
            assert_eq!(CylinderSet::from_json_str(&back).unwrap(), c);
        }
    }
});
