#![no_main]
use libfuzzer_sys::fuzz_target;

use expohedron::io::parse_queries_jsonl;

fuzz_target!(|data: &str| {
    if let Ok(queries) = parse_queries_jsonl(data) {
        for q in &queries {
            assert!(q.relevances.values().iter().all(|r| r.is_finite()));
            if let Some(ids) = &q.item_ids {
                assert_eq!(ids.len(), q.relevances.len());
            }
        }
    }
});
