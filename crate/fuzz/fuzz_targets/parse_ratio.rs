#![no_main]

use libfuzzer_sys::fuzz_target;
use permscan::quasirandom::Ratio;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ratio) = text.parse::<Ratio>() {
        // The display form must parse back to the same reduced value.
        let back: Ratio = ratio.to_string().parse().unwrap();
        assert_eq!(ratio, back);
        // Threshold comparisons must be consistent with each other.
        for (l, k) in [(0usize, 1usize), (1, 1), (3, 7), (10, 10)] {
            if ratio.exceeds(l, k) {
                assert!(ratio.meets(l, k));
            }
        }
    }
});
