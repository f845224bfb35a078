#![no_main]

use boxlogic::formats::{parse_pr_state, write_pr_state};
use boxlogic::states::validate_pr_state;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = parse_pr_state(text, None) {
        if p.spec().atom_count() > 4096 {
            return;
        }
        let _ = validate_pr_state(&p);
        let again = parse_pr_state(&write_pr_state(&p), Some(p.spec())).expect("written tables parse");
        assert_eq!(again, p);
    }
});
