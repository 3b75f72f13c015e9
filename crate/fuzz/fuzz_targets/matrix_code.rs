#![no_main]

use density_reductions::MatrixCode;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(z) = MatrixCode::parse_arg(s) {
            assert_eq!(z.to_text().parse::<MatrixCode>().unwrap(), z);
        }
    }
});
