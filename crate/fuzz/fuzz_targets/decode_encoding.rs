#![no_main]

use arbitrary::Arbitrary;
use libfuzzer_sys::fuzz_target;
use permscan::structure::{decode_structured, Encoding, GraphEdge};

/// Small-int mirror of `Encoding` so the fuzzer can build arbitrary,
/// usually malformed, instances without huge allocations.
#[derive(Arbitrary, Debug)]
struct RawEncoding {
    k: u8,
    q: u8,
    b: u8,
    x: Vec<u8>,
    deltas: Vec<u8>,
    edges: Vec<(u8, u8, u8)>,
    representatives: Vec<(u8, u8)>,
}

fuzz_target!(|raw: RawEncoding| {
    let enc = Encoding {
        k: raw.k as usize,
        q: raw.q as usize,
        b: raw.b as usize,
        x: raw.x.iter().map(|&v| v as usize).collect(),
        deltas: raw.deltas.iter().map(|&d| d as usize).collect(),
        forest_edges: raw
            .edges
            .iter()
            .map(|&(b, a, w)| GraphEdge {
                b_side: b as usize,
                a_side: a as usize,
                witness_index: w as usize,
            })
            .collect(),
        representatives: raw
            .representatives
            .iter()
            .map(|&(v, val)| (v as usize, val as usize))
            .collect(),
    };
    // Decoding untrusted data must never panic; on success the result is a
    // valid injection covering exactly the encoded domain.
    if let Ok(map) = decode_structured(&enc) {
        assert_eq!(map.domain(), enc.x);
        assert_eq!(map.ambient(), enc.k);
    }
});
