#![no_main]
use libfuzzer_sys::fuzz_target;

use expohedron::io::{parse_front_file, to_json};

// accepted files must survive a serialize/parse round trip unchanged
fuzz_target!(|data: &str| {
    let Ok(file) = parse_front_file(data) else { return };
    let text = to_json(&file).unwrap();
    let again = parse_front_file(&text).unwrap();
    assert_eq!(to_json(&again).unwrap(), text);
});
