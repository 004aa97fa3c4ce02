#![no_main]

use hps_chem::spec::{parse_specification, serialize_specification};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = parse_specification(text) {
        let out = serialize_specification(&spec);
        let again = parse_specification(&out).expect("serialized specification parses");
        assert_eq!(serialize_specification(&again), out);
    }
});
