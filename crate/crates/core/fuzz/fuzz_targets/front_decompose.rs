#![no_main]
use libfuzzer_sys::fuzz_target;

use expohedron::gls_decompose;
use expohedron::io::parse_front_file;

fuzz_target!(|data: &str| {
    let Ok(file) = parse_front_file(data) else { return };
    for q in file.queries.iter().filter(|q| q.relevances.len() <= 12) {
        let Ok(model) = file.model.build(q.relevances.len()) else { continue };
        for p in &q.to_front().points {
            // points outside the polytope must be rejected, never panic
            if let Ok(dist) = gls_decompose(&p.exposure, &model) {
                assert!(dist.len() <= q.relevances.len());
            }
        }
    }
});
