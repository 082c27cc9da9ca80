#![no_main]
use libfuzzer_sys::fuzz_target;

use expohedron::io::parse_distribution_file;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = parse_distribution_file(text) {
        for d in &file.distributions {
            let dist = d.distribution().unwrap();
            let total: f64 = dist.entries().iter().map(|e| e.weight).sum();
            assert!(total.is_finite());
        }
    }
});
