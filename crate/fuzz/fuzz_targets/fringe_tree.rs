#![no_main]

use hps_chem::fringe::RootedTree;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(tree) = RootedTree::parse(text) {
        let canon = tree.canonical();
        assert_eq!(RootedTree::parse(&canon).expect("canonical form parses").canonical(), canon);
    }
});
