#![no_main]
use libfuzzer_sys::fuzz_target;

use expohedron::io::parse_queries_csv;

fuzz_target!(|data: &str| {
    if let Ok(queries) = parse_queries_csv(data) {
        for q in &queries {
            assert!(q.relevances.values().iter().all(|r| (0.0..=1.0).contains(r)));
            let _ = q.check_interesting();
        }
    }
});
