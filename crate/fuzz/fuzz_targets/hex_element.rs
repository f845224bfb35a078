#![no_main]

use boxlogic::BitSet;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&width, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let len = width as usize + 1;
    if let Ok(set) = BitSet::from_hex(len, text) {
        assert_eq!(set.len(), len);
        assert_eq!(BitSet::from_hex(len, &set.to_hex()).unwrap(), set);
        assert_eq!(set.to_hex(), text.to_ascii_lowercase());
    }
});
