#![no_main]

use hps_chem::graph::{parse_graphs, serialize_graphs};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(graphs) = parse_graphs(text) {
        let out = serialize_graphs(&graphs);
        let again = parse_graphs(&out).expect("serialized graphs parse");
        assert_eq!(serialize_graphs(&again), out);
    }
});
