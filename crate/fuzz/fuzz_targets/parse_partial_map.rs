#![no_main]

use libfuzzer_sys::fuzz_target;
use permscan::quasirandom::{l_delta, PartialMap};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Try a few ambient sizes; the text itself does not carry k.
    for k in [1usize, 5, 32] {
        if let Ok(map) = PartialMap::parse(k, text) {
            let back = PartialMap::parse(k, &map.to_text()).unwrap();
            assert_eq!(map, back);
            for delta in 1..=k.min(4) {
                let l = l_delta(&map, delta).unwrap();
                assert!(l <= map.len());
            }
        }
    }
});
