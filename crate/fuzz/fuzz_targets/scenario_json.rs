#![no_main]

use boxlogic::{BoxWorldSpec, GammaIndex, Limits};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = BoxWorldSpec::from_json(text) {
        let again = BoxWorldSpec::from_json(&spec.to_json()).expect("written scenarios parse");
        assert_eq!(again, spec);
        let limits = Limits {
            gamma: 1 << 12,
            ..Limits::default()
        };
        if let Ok(g) = GammaIndex::build(&spec, &limits) {
            for id in spec.atom_ids().into_iter().take(64) {
                assert!(!g.atom(&spec, id).unwrap().is_empty());
            }
        }
    }
});
