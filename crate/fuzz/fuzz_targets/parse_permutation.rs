#![no_main]

use libfuzzer_sys::fuzz_target;
use permscan::Permutation;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(perm) = text.parse::<Permutation>() {
        // One-line notation must round-trip exactly.
        let back: Permutation = perm.to_string().parse().unwrap();
        assert_eq!(perm, back);
        if !perm.is_empty() {
            // The inverse must compose to the identity.
            let inv = perm.inverse();
            for pos in 1..=perm.len() {
                assert_eq!(inv.at(perm.at(pos)), pos);
            }
        }
    }
});
