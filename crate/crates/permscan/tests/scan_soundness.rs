//! Large-sample soundness sweep: an uncapped scan success is always a real
//! containment witness, and the matrix containment search concurs.

use permscan::matrix::ZeroOneMatrix;
use permscan::rng::derive_seed;
use permscan::scanning::scan_thread;
use permscan::Permutation;

#[test]
fn ten_thousand_uncapped_scans_are_sound() {
    let mut successes = 0u32;
    for t in 0..10_000u64 {
        let rows = 5 + (t % 5) as usize;
        let cols = 8 + (t % 17) as usize;
        let k = 1 + (t % 4) as usize;
        let offset = 1 + (t as usize % (rows - k));
        let m = ZeroOneMatrix::random(rows, cols, derive_seed(2024, t));
        let pi = Permutation::random(k, derive_seed(2025, t));
        let trace = scan_thread(&m, &pi, offset, None).unwrap();
        if !trace.success {
            assert_eq!(trace.exposed.len(), cols);
            continue;
        }
        successes += 1;
        let witness = trace.witness.as_ref().unwrap();
        assert_eq!(witness.len(), k);
        for (j, &(y, x)) in witness.iter().enumerate() {
            assert!(m.get(y, x), "trial {t}: witness reads a zero");
            assert_eq!(y, offset + pi.at(j + 1));
        }
        assert!(witness.windows(2).all(|w| w[0].1 < w[1].1));
        assert!(
            m.contains_permutation(&pi).is_some(),
            "trial {t}: scan found a copy the containment search missed"
        );
    }
    // The sweep must actually exercise the success path heavily.
    assert!(successes > 5_000, "only {successes} successes");
}
