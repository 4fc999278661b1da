//! Shift systems: families of shift witnesses whose union graph has few
//! connected components. Such a system pins down an injection everywhere
//! except one representative value per component, which yields a compact
//! forest encoding. A recursive extraction turns any permutation into a
//! quasirandom index set plus a structured remainder carrying a system.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::perm::Permutation;
use crate::quasirandom::{
    is_quasirandom_map, is_quasirandom_set, shift_witness, shift_witness_restricted, PartialMap,
    QuasirandomError, Ratio, ShiftWitness,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("edge endpoint {0} lies outside the vertex set")]
    VertexOutsideX(usize),
    #[error("shift system does not verify against the map")]
    InvalidSystem,
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("the map is already quasirandom at these parameters")]
    PreconditionViolated,
    #[error("decomposition exceeded {max} iterations")]
    IterationLimit { max: usize },
    #[error("internal invariant failed: {0}")]
    InternalInvariant(String),
    #[error("malformed encoding: {0}")]
    Malformed(String),
    #[error("decoded value {value} for vertex {vertex} leaves the ambient range")]
    ValueOutOfRange { vertex: usize, value: i64 },
    #[error("decoded map repeats value {value}")]
    NotInjective { value: usize },
    #[error("vertex {vertex} is unreachable from any representative")]
    DisconnectedRepresentative { vertex: usize },
    #[error(transparent)]
    Shift(#[from] QuasirandomError),
}

/// An edge of a union shift graph, oriented by the witness relation:
/// `value(a_side) = value(b_side) + delta(witness_index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphEdge {
    pub b_side: usize,
    pub a_side: usize,
    pub witness_index: usize,
}

/// Union of the witness graphs on a fixed vertex set, deduplicated to a
/// simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftGraph {
    vertices: Vec<usize>,
    edges: Vec<GraphEdge>,
    component_id: Vec<usize>,
    component_count: usize,
}

impl ShiftGraph {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    /// Components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut by_id: Vec<Vec<usize>> = vec![Vec::new(); self.component_count];
        for (i, &v) in self.vertices.iter().enumerate() {
            by_id[self.component_id[i]].push(v);
        }
        by_id.sort_by_key(|c| c[0]);
        by_id
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.a_side == v || e.b_side == v)
            .count()
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }
}

/// Build the union graph of the witnesses on vertex set `x`.
pub fn build_shift_graph(
    x: &[usize],
    witnesses: &[ShiftWitness],
) -> Result<ShiftGraph, StructureError> {
    let mut vertices: Vec<usize> = x.to_vec();
    vertices.sort_unstable();
    vertices.dedup();
    let index_of = |v: usize| vertices.binary_search(&v).ok();

    let mut seen_pairs = BTreeSet::new();
    let mut edges = Vec::new();
    let mut uf = UnionFind::new(vertices.len());
    let mut components = vertices.len();
    for (wi, w) in witnesses.iter().enumerate() {
        for &(b, a) in &w.pairs {
            if a == b {
                return Err(StructureError::LoopEdge(a));
            }
            let (ia, ib) = match (index_of(a), index_of(b)) {
                (Some(ia), Some(ib)) => (ia, ib),
                (None, _) => return Err(StructureError::VertexOutsideX(a)),
                (_, None) => return Err(StructureError::VertexOutsideX(b)),
            };
            if seen_pairs.insert((a.min(b), a.max(b))) {
                edges.push(GraphEdge {
                    b_side: b,
                    a_side: a,
                    witness_index: wi,
                });
                if uf.union(ia, ib) {
                    components -= 1;
                }
            }
        }
    }
    let mut root_to_id = vec![usize::MAX; vertices.len()];
    let mut next_id = 0;
    let component_id = (0..vertices.len())
        .map(|i| {
            let r = uf.find(i);
            if root_to_id[r] == usize::MAX {
                root_to_id[r] = next_id;
                next_id += 1;
            }
            root_to_id[r]
        })
        .collect();
    Ok(ShiftGraph {
        vertices,
        edges,
        component_id,
        component_count: components,
    })
}

/// A family of shift witnesses for one map, with a component budget `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftSystem {
    pub witnesses: Vec<ShiftWitness>,
    /// Claimed bound on the number of connected components of the union
    /// graph over the map's domain.
    pub b: usize,
}

impl ShiftSystem {
    pub fn q(&self) -> usize {
        self.witnesses.len()
    }

    pub fn deltas(&self) -> Vec<usize> {
        self.witnesses.iter().map(|w| w.delta).collect()
    }
}

/// Re-verify every witness against `phi` and count the union graph's
/// components over `phi`'s domain. True iff all witnesses hold and the
/// count is within the system's budget.
pub fn verify_shift_system(phi: &PartialMap, system: &ShiftSystem) -> (bool, usize) {
    let all_verify = system.witnesses.iter().all(|w| w.verify_on(phi));
    match build_shift_graph(&phi.domain(), &system.witnesses) {
        Ok(graph) => {
            let count = graph.component_count();
            (all_verify && count <= system.b, count)
        }
        Err(_) => (false, 0),
    }
}

/// Both sides of the budget inequality
/// `(b + q) ln k + k (ln q + 1) <= 10 k ln ln k`, natural logs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BudgetCheck {
    pub ok: bool,
    pub lhs: f64,
    pub rhs: f64,
}

pub fn budget_ok(q: usize, b: usize, k: usize) -> Result<BudgetCheck, StructureError> {
    if q < 1 || b < 1 {
        return Err(StructureError::BadParameters(format!(
            "q = {q} and b = {b} must both be >= 1"
        )));
    }
    let kf = k as f64;
    let lhs = (b + q) as f64 * kf.ln() + kf * ((q as f64).ln() + 1.0);
    let rhs = 10.0 * kf * kf.ln().ln();
    Ok(BudgetCheck {
        ok: lhs <= rhs,
        lhs,
        rhs,
    })
}

/// An edge kept in the spanning forest of a shift system's union graph.
pub type ForestEdge = GraphEdge;

/// All the data needed to reconstruct a structured map: ambient size, the
/// domain, the witness deltas, a spanning forest of the union graph, and
/// one anchored value per component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    pub k: usize,
    pub q: usize,
    pub b: usize,
    pub x: Vec<usize>,
    pub deltas: Vec<usize>,
    pub forest_edges: Vec<ForestEdge>,
    /// `(vertex, value)` anchors, one per component, keyed by the smallest
    /// vertex of the component.
    pub representatives: Vec<(usize, usize)>,
}

fn ceil_log2(x: usize) -> u64 {
    if x <= 1 {
        0
    } else {
        64 - ((x - 1) as u64).leading_zeros() as u64
    }
}

impl Encoding {
    /// Size of the encoding in bits: domain membership, deltas,
    /// representative values, and per-forest-edge witness tags with
    /// orientation.
    pub fn bit_size(&self) -> u64 {
        let value_bits = ceil_log2(self.k);
        let tag_bits = ceil_log2(self.q.max(1));
        self.k as u64
            + self.q as u64 * value_bits
            + self.representatives.len() as u64 * value_bits
            + self.forest_edges.len() as u64 * (tag_bits + 2)
    }
}

/// Encode a verified structured map: spanning forest by breadth-first
/// search from the smallest vertex of each component, representative =
/// that smallest vertex.
pub fn encode_structured(
    phi: &PartialMap,
    system: &ShiftSystem,
) -> Result<Encoding, StructureError> {
    let (ok, _) = verify_shift_system(phi, system);
    if !ok {
        return Err(StructureError::InvalidSystem);
    }
    let x = phi.domain();
    let graph = build_shift_graph(&x, &system.witnesses)?;
    let vertices = graph.vertices();
    let vindex = |v: usize| vertices.binary_search(&v).expect("vertex present");

    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertices.len()];
    for (ei, e) in graph.edges().iter().enumerate() {
        adjacency[vindex(e.a_side)].push((vindex(e.b_side), ei));
        adjacency[vindex(e.b_side)].push((vindex(e.a_side), ei));
    }
    for adj in &mut adjacency {
        adj.sort_unstable();
    }

    let mut visited = vec![false; vertices.len()];
    let mut forest_edges = Vec::new();
    let mut representatives = Vec::new();
    for start in 0..vertices.len() {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let rep_vertex = vertices[start];
        let rep_value = phi
            .value_at(rep_vertex)
            .ok_or(StructureError::InvalidSystem)?;
        representatives.push((rep_vertex, rep_value));
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &(w, ei) in &adjacency[u] {
                if !visited[w] {
                    visited[w] = true;
                    forest_edges.push(graph.edges()[ei]);
                    queue.push_back(w);
                }
            }
        }
    }
    Ok(Encoding {
        k: phi.ambient(),
        q: system.q(),
        b: system.b,
        x: vertices.to_vec(),
        deltas: system.deltas(),
        forest_edges,
        representatives,
    })
}

/// Reconstruct the map from an encoding by walking each forest component
/// from its representative, adding the witness delta along forward edges
/// and subtracting it along reversed ones.
///
/// Every malformation is rejected with an error, never a panic. Work and
/// memory are proportional to the encoding itself except for the final
/// map's value index, which is sized by the ambient `k`.
pub fn decode_structured(enc: &Encoding) -> Result<PartialMap, StructureError> {
    let k = enc.k;
    if enc.deltas.len() != enc.q {
        return Err(StructureError::Malformed(format!(
            "{} deltas for q = {}",
            enc.deltas.len(),
            enc.q
        )));
    }
    for &d in &enc.deltas {
        if d < 1 || d > k {
            return Err(StructureError::Malformed(format!(
                "delta {d} outside 1..={k}"
            )));
        }
    }
    if enc.x.windows(2).any(|w| w[0] >= w[1]) {
        return Err(StructureError::Malformed("domain not sorted unique".into()));
    }
    if enc.x.iter().any(|&v| v < 1 || v > k) {
        return Err(StructureError::Malformed(format!("domain outside 1..={k}")));
    }
    let vindex = |v: usize| enc.x.binary_search(&v).ok();

    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); enc.x.len()];
    for (ei, e) in enc.forest_edges.iter().enumerate() {
        if e.witness_index >= enc.q {
            return Err(StructureError::Malformed(format!(
                "edge tag {} out of range",
                e.witness_index
            )));
        }
        if e.a_side == e.b_side {
            return Err(StructureError::LoopEdge(e.a_side));
        }
        let (ia, ib) = match (vindex(e.a_side), vindex(e.b_side)) {
            (Some(ia), Some(ib)) => (ia, ib),
            _ => {
                return Err(StructureError::Malformed(format!(
                    "edge ({}, {}) leaves the domain",
                    e.b_side, e.a_side
                )))
            }
        };
        adjacency[ia].push((ib, ei));
        adjacency[ib].push((ia, ei));
    }

    let mut value: Vec<Option<usize>> = vec![None; enc.x.len()];
    for &(v, val) in &enc.representatives {
        let iv = vindex(v).ok_or_else(|| {
            StructureError::Malformed(format!("representative {v} outside the domain"))
        })?;
        if val < 1 || val > k {
            return Err(StructureError::ValueOutOfRange {
                vertex: v,
                value: val as i64,
            });
        }
        if value[iv].is_some() {
            return Err(StructureError::Malformed(format!(
                "vertex {v} re-anchored; one representative per component"
            )));
        }
        value[iv] = Some(val);
        let mut queue = std::collections::VecDeque::from([(iv, usize::MAX)]);
        while let Some((u, via)) = queue.pop_front() {
            for &(w, ei) in &adjacency[u] {
                if ei == via {
                    continue;
                }
                let edge = &enc.forest_edges[ei];
                let delta = enc.deltas[edge.witness_index] as i64;
                let u_vertex = enc.x[u];
                let base = value[u].expect("assigned before queueing") as i64;
                let next = if u_vertex == edge.b_side {
                    base + delta
                } else {
                    base - delta
                };
                if next < 1 || next > k as i64 {
                    return Err(StructureError::ValueOutOfRange {
                        vertex: enc.x[w],
                        value: next,
                    });
                }
                if value[w].is_some() {
                    return Err(StructureError::Malformed(
                        "cycle: forest edges reach a vertex twice".into(),
                    ));
                }
                value[w] = Some(next as usize);
                queue.push_back((w, ei));
            }
        }
    }

    let mut pairs = Vec::with_capacity(enc.x.len());
    for (i, &v) in enc.x.iter().enumerate() {
        let val = value[i].ok_or(StructureError::DisconnectedRepresentative { vertex: v })?;
        pairs.push((v, val));
    }
    // Injectivity check sized by the domain, not by the ambient k.
    let mut values: Vec<usize> = pairs.iter().map(|&(_, val)| val).collect();
    values.sort_unstable();
    if let Some(w) = values.windows(2).find(|w| w[0] == w[1]) {
        return Err(StructureError::NotInjective { value: w[0] });
    }
    PartialMap::new(k, pairs).map_err(StructureError::Shift)
}

/// Pull a structured part out of a non-quasirandom map: pick `q` deltas
/// with long shifts, take witnesses of length exactly `ceil(alpha * k)`,
/// and keep the largest `|X| / (2q)` components of their union graph.
/// The result is at least `alpha * k / 2` vertices carrying a system with
/// at most `k / q` components.
pub fn extract_structured_part(
    phi: &PartialMap,
    alpha: Ratio,
    q: usize,
) -> Result<(Vec<usize>, ShiftSystem), StructureError> {
    if q < 1 {
        return Err(StructureError::BadParameters("q must be >= 1".into()));
    }
    let k = phi.ambient();
    let (quasirandom, bad) = is_quasirandom_map(phi, alpha, q);
    if quasirandom {
        return Err(StructureError::PreconditionViolated);
    }
    let target_len = alpha.ceil_times(k);
    let deltas: Vec<usize> = bad.iter().copied().take(q).collect();
    let mut witnesses = Vec::with_capacity(q);
    for &delta in &deltas {
        let mut w = shift_witness(phi, delta)?;
        if w.pairs.len() < target_len {
            return Err(StructureError::InternalInvariant(format!(
                "witness for delta {delta} shorter than ceil(alpha k) = {target_len}"
            )));
        }
        w.pairs.truncate(target_len);
        witnesses.push(w);
    }

    let x = phi.domain();
    let graph = build_shift_graph(&x, &witnesses)?;
    let mut components = graph.components();
    components.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let budget = x.len() / (2 * q);
    let keep = budget.min(components.len());
    let mut y: Vec<usize> = components[..keep].iter().flatten().copied().collect();
    y.sort_unstable();

    if !alpha.half_meets(y.len(), k) {
        return Err(StructureError::InternalInvariant(format!(
            "|Y| = {} below alpha k / 2",
            y.len()
        )));
    }

    let in_y: BTreeSet<usize> = y.iter().copied().collect();
    let restricted: Vec<ShiftWitness> = witnesses
        .into_iter()
        .map(|w| ShiftWitness {
            delta: w.delta,
            pairs: w
                .pairs
                .into_iter()
                .filter(|&(b, a)| in_y.contains(&b) && in_y.contains(&a))
                .collect(),
        })
        .collect();
    let system = ShiftSystem {
        witnesses: restricted,
        b: k / q,
    };
    let restricted_graph = build_shift_graph(&y, &system.witnesses)?;
    if restricted_graph.component_count() > k / q {
        return Err(StructureError::InternalInvariant(format!(
            "{} components exceed k/q = {}",
            restricted_graph.component_count(),
            k / q
        )));
    }
    Ok((y, system))
}

/// One step of the decomposition loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IterationStep {
    pub case: u8,
    #[serde(rename = "Y")]
    pub y: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<usize>,
}

/// Partition of `1..=k` into a quasirandom index set `q_set` and a
/// structured remainder `z_set` carrying a verified shift system.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub q_set: Vec<usize>,
    pub z_set: Vec<usize>,
    pub system: ShiftSystem,
    pub trace: Vec<IterationStep>,
    pub q_final: usize,
    /// Measured component count of the final union graph on `z_set`.
    pub b_final: usize,
    /// Theoretical accumulation: `k/q` per extraction step.
    pub b_bound: usize,
}

/// Iteratively split `pi`: stop once the remaining index set is
/// `(2 alpha, q)`-quasirandom in `pi`; otherwise extract a structured part
/// (when the restricted map itself is far from quasirandom) or peel off
/// the indices shifted against already-removed ones.
pub fn decompose(
    pi: &Permutation,
    alpha: Ratio,
    q: usize,
    max_iter: usize,
) -> Result<Decomposition, StructureError> {
    let k = pi.len();
    if alpha.num() == 0 || 2 * alpha.num() > alpha.den() {
        return Err(StructureError::BadParameters(format!(
            "alpha = {alpha} must lie in (0, 1/2]"
        )));
    }
    if q < 1 {
        return Err(StructureError::BadParameters("q must be >= 1".into()));
    }
    let two_alpha = alpha.doubled();
    let mut x: Vec<usize> = (1..=k).collect();
    let mut z: Vec<usize> = Vec::new();
    let mut witnesses: Vec<ShiftWitness> = Vec::new();
    let mut trace: Vec<IterationStep> = Vec::new();
    let mut b_bound = 0usize;
    let mut expected_q = 0usize;

    loop {
        let (stop, set_bad) = is_quasirandom_set(pi, &x, two_alpha, q);
        if stop {
            break;
        }
        if trace.len() == max_iter {
            return Err(StructureError::IterationLimit { max: max_iter });
        }
        let phi = PartialMap::restriction(pi, &x);
        let (map_quasirandom, map_bad) = is_quasirandom_map(&phi, alpha, q);
        if !map_quasirandom {
            // Extract a structured chunk of the restricted map.
            let (y, sub) = extract_structured_part(&phi, alpha, q)?;
            expected_q += sub.q();
            b_bound += k / q;
            witnesses.extend(sub.witnesses);
            trace.push(IterationStep {
                case: 2,
                y: y.clone(),
                delta: None,
            });
            remove_from(&mut x, &y);
            z.extend(&y);
            z.sort_unstable();
        } else {
            // Some delta has a long shift into the current set whose pairs
            // mostly come from removed indices.
            let delta = set_bad
                .iter()
                .copied()
                .find(|d| !map_bad.contains(d))
                .ok_or_else(|| {
                    StructureError::InternalInvariant(
                        "no delta separates the set and map verdicts".into(),
                    )
                })?;
            let mut witness = shift_witness_restricted(pi, &x, delta)?;
            let target = two_alpha.ceil_times(k);
            if witness.pairs.len() < target {
                return Err(StructureError::InternalInvariant(format!(
                    "restricted witness shorter than ceil(2 alpha k) = {target}"
                )));
            }
            witness.pairs.truncate(target);
            let in_x: BTreeSet<usize> = x.iter().copied().collect();
            let new_pairs: Vec<(usize, usize)> = witness
                .pairs
                .iter()
                .copied()
                .filter(|(b, _)| !in_x.contains(b))
                .collect();
            let y: Vec<usize> = new_pairs.iter().map(|&(_, a)| a).collect();
            if !alpha.exceeds(y.len(), k) {
                return Err(StructureError::InternalInvariant(format!(
                    "|Y| = {} not above alpha k",
                    y.len()
                )));
            }
            let before = build_shift_graph(&z, &witnesses)?.component_count();
            witnesses.push(ShiftWitness {
                delta,
                pairs: new_pairs,
            });
            expected_q += 1;
            let mut z_next = z.clone();
            z_next.extend(&y);
            z_next.sort_unstable();
            let after = build_shift_graph(&z_next, &witnesses)?.component_count();
            if after != before {
                return Err(StructureError::InternalInvariant(format!(
                    "components changed {before} -> {after} on a paired append"
                )));
            }
            trace.push(IterationStep {
                case: 3,
                y: y.clone(),
                delta: Some(delta),
            });
            remove_from(&mut x, &y);
            z = z_next;
        }
    }

    let b_final = build_shift_graph(&z, &witnesses)?.component_count();
    let system = ShiftSystem {
        witnesses,
        b: b_final,
    };
    let decomposition = Decomposition {
        q_set: x,
        z_set: z,
        system,
        q_final: 0,
        b_final,
        b_bound,
        trace,
    };
    let decomposition = Decomposition {
        q_final: decomposition.system.q(),
        ..decomposition
    };
    check_postconditions(pi, &decomposition, alpha, expected_q)?;
    Ok(decomposition)
}

fn remove_from(x: &mut Vec<usize>, y: &[usize]) {
    let gone: BTreeSet<usize> = y.iter().copied().collect();
    x.retain(|v| !gone.contains(v));
}

fn check_postconditions(
    pi: &Permutation,
    d: &Decomposition,
    alpha: Ratio,
    expected_q: usize,
) -> Result<(), StructureError> {
    let k = pi.len();
    let fail = |m: String| Err(StructureError::InternalInvariant(m));
    let mut seen = vec![false; k + 1];
    for &v in d.q_set.iter().chain(&d.z_set) {
        if v < 1 || v > k || seen[v] {
            return fail(format!("{v} breaks the partition"));
        }
        seen[v] = true;
    }
    if seen[1..].iter().any(|&s| !s) {
        return fail("partition does not cover 1..=k".into());
    }
    if d.q_final != expected_q {
        return fail(format!(
            "q_final {} differs from per-case accounting {expected_q}",
            d.q_final
        ));
    }
    if !d.z_set.is_empty() {
        let phi = PartialMap::restriction(pi, &d.z_set);
        let (ok, count) = verify_shift_system(&phi, &d.system);
        if !ok || count != d.b_final {
            return fail(format!(
                "final system fails to verify (count {count}, b_final {})",
                d.b_final
            ));
        }
        if d.b_bound > 0 && d.b_final > d.b_bound {
            return fail(format!(
                "measured components {} exceed the bound {}",
                d.b_final, d.b_bound
            ));
        }
    }
    // Every pass removes at least alpha k / 2 indices.
    let limit = (2 * alpha.den() as u128).div_ceil(alpha.num() as u128) as usize;
    if d.trace.len() > limit {
        return fail(format!(
            "{} iterations exceed ceil(2/alpha) = {limit}",
            d.trace.len()
        ));
    }
    Ok(())
}

impl Decomposition {
    /// Report shape: sets, per-iteration steps, final system size, both
    /// sides of the budget inequality, and the encoding size in bits.
    pub fn report_json(&self, pi: &Permutation) -> serde_json::Value {
        let k = pi.len();
        let budget = if self.q_final >= 1 && self.b_final >= 1 {
            budget_ok(self.q_final, self.b_final, k).ok()
        } else {
            None
        };
        let encoding_bits = if self.z_set.is_empty() {
            0
        } else {
            let phi = PartialMap::restriction(pi, &self.z_set);
            encode_structured(&phi, &self.system)
                .map(|e| e.bit_size())
                .unwrap_or(0)
        };
        serde_json::json!({
            "Q": self.q_set,
            "Z": self.z_set,
            "iterations": self.trace,
            "q_final": self.q_final,
            "b_final": self.b_final,
            "b_bound": self.b_bound,
            "budget": budget,
            "encoding_bits": encoding_bits,
        })
    }
}
