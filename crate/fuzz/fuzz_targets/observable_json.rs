#![no_main]

use std::sync::OnceLock;

use boxlogic::formats::{parse_observable, write_observable};
use boxlogic::{BoxLogic, BoxWorldSpec, Limits};
use libfuzzer_sys::fuzz_target;

fn chsh() -> &'static BoxLogic {
    static BL: OnceLock<BoxLogic> = OnceLock::new();
    BL.get_or_init(|| BoxLogic::build(&BoxWorldSpec::chsh(), &Limits::default()).unwrap())
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let logic = chsh().logic();
    if let Ok(x) = parse_observable(text, logic) {
        let again = parse_observable(&write_observable(&x, logic), logic).expect("written observables parse");
        assert_eq!(again, x);
    }
});
