#![no_main]

use hps_chem::spec::ExtensionWitness;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(w) = ExtensionWitness::from_json(text) {
        let again = ExtensionWitness::from_json(&w.to_json()).expect("serialized witness parses");
        assert_eq!(again, w);
    }
});
