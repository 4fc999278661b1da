//! The bridge between thread scanning and shift statistics: entries exposed
//! by two threads at offsets t < t' share at most L_{t'-t} rows.

use permscan::matrix::ZeroOneMatrix;
use permscan::quasirandom::{l_delta, PartialMap};
use permscan::rng::derive_seed;
use permscan::scanning::{common_exposed_rows, multi_thread_scan};
use permscan::Permutation;

#[test]
fn adjacent_threads_share_at_most_l1_rows() {
    for t in 0..1000u64 {
        let m = ZeroOneMatrix::random(12, 60, derive_seed(17, t));
        let pi = Permutation::random(5, derive_seed(18, t));
        let phi = PartialMap::from_permutation(&pi);
        let report = multi_thread_scan(&m, &pi, &[1, 2], None).unwrap();
        let rows = common_exposed_rows(&report.traces[0], &report.traces[1], m.cols());
        let bound = l_delta(&phi, 1).unwrap();
        assert!(
            rows.len() <= bound,
            "trial {t}: shared rows {rows:?} exceed L_1({pi}) = {bound}"
        );
    }
}

#[test]
fn overlap_rows_bounded_by_shift_length_for_all_offset_pairs() {
    for t in 0..300u64 {
        let m = ZeroOneMatrix::random(14, 50, derive_seed(21, t));
        let pi = Permutation::random(6, derive_seed(22, t));
        let phi = PartialMap::from_permutation(&pi);
        let offsets = [1usize, 3, 6];
        let report = multi_thread_scan(&m, &pi, &offsets, None).unwrap();
        for i in 0..offsets.len() {
            for j in i + 1..offsets.len() {
                let rows = common_exposed_rows(&report.traces[i], &report.traces[j], m.cols());
                let delta = offsets[j] - offsets[i];
                let bound = l_delta(&phi, delta).unwrap();
                assert!(
                    rows.len() <= bound,
                    "trial {t} offsets {:?}: {} shared rows, L_{delta} = {bound}",
                    (offsets[i], offsets[j]),
                    rows.len()
                );
            }
        }
    }
}

#[test]
fn capped_threads_obey_the_same_row_bound() {
    // The row-overlap argument only counts rows, so the cap does not loosen
    // it.
    for t in 0..300u64 {
        let m = ZeroOneMatrix::random(12, 40, derive_seed(31, t));
        let pi = Permutation::random(5, derive_seed(32, t));
        let phi = PartialMap::from_permutation(&pi);
        let report = multi_thread_scan(&m, &pi, &[2, 4], Some(3)).unwrap();
        let rows = common_exposed_rows(&report.traces[0], &report.traces[1], m.cols());
        let bound = l_delta(&phi, 2).unwrap();
        assert!(rows.len() <= bound, "trial {t}");
    }
}
