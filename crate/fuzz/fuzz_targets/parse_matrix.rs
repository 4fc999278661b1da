#![no_main]

use libfuzzer_sys::fuzz_target;
use permscan::scanning::{run_length, scan_thread};
use permscan::{Permutation, ZeroOneMatrix};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(matrix) = text.parse::<ZeroOneMatrix>() else {
        return;
    };
    // Text round-trip.
    let back: ZeroOneMatrix = matrix.to_string().parse().unwrap();
    assert_eq!(matrix, back);

    // Run lengths and a greedy scan must stay in bounds on any parsed input.
    let y = 1;
    for x in 1..=matrix.cols().min(64) {
        let r = run_length(&matrix, y, x).unwrap();
        assert!(r <= matrix.cols() - x + 1);
    }
    let k = matrix.rows().saturating_sub(1).min(3);
    if k >= 1 && matrix.cols() >= 1 {
        let pattern = Permutation::identity(k);
        let trace = scan_thread(&matrix, &pattern, 1, None).unwrap();
        assert!(trace.exposed.len() <= matrix.cols());
        if let Some(witness) = &trace.witness {
            for &(wy, wx) in witness {
                assert!(matrix.get(wy, wx));
            }
        }
    }
});
