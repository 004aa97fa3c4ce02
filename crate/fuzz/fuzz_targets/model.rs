#![no_main]

use hps_core::splitter::{model_from_json, predict_hps};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(model) = model_from_json(text) {
        let x = vec![0.5; model.hyperplane.w.len()];
        let _ = predict_hps(&model, &x);
    }
});
