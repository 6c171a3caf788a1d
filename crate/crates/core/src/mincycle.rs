//! Minimum-weight cycles: label-setting search on the implicit covering for
//! a fixed start vertex and target index, and the per-class minimization
//! that fans the search out over the vertices of one basis cycle.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::complex::{Chain, SimplicialComplex, VertexId};
use crate::covering::CoveringVertex;
use crate::error::{Error, Result};
use crate::homology::HomologyBasis;
use crate::index::{GroupElement, IndexTable};

/// Nonnegative per-edge weights; extends to chains by summation.
#[derive(Clone, Debug)]
pub struct WeightFunction {
    weights: Vec<f64>,
}

impl WeightFunction {
    /// Weight 1.0 on every edge.
    pub fn unit(c: &SimplicialComplex) -> Self {
        WeightFunction { weights: vec![1.0; c.edge_count()] }
    }

    /// Explicit per-edge weights; rejects negative or non-finite entries.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        for &w in &weights {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::BadWeight(w));
            }
        }
        Ok(WeightFunction { weights })
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    pub fn get(&self, edge: usize) -> f64 {
        self.weights[edge]
    }

    pub fn set(&mut self, edge: usize, w: f64) -> Result<()> {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::BadWeight(w));
        }
        self.weights[edge] = w;
        Ok(())
    }

    /// Sum of member edge weights, in edge-id order; the empty chain weighs 0.
    pub fn chain_weight(&self, x: &Chain) -> f64 {
        x.members().map(|e| self.weights[e]).sum()
    }
}

/// Result of a minimum-cycle search.
#[derive(Clone, Debug)]
pub struct MinCycleResult {
    /// The mod-2 cycle; edges the witness traverses twice cancel here.
    pub cycle: Chain,
    /// Weight of `cycle`.
    pub weight: f64,
    /// Settled path through the covering, start and end over the same base
    /// vertex. Empty for the zero cycle.
    pub witness: Vec<CoveringVertex>,
    /// Weight of the witness path with edge multiplicities.
    pub witness_weight: f64,
    /// Index of the homology class searched.
    pub class_index: GroupElement,
}

/// One settled state, for inspection of the search order.
#[derive(Clone, Debug)]
pub struct SearchLog {
    pub settled: Vec<(VertexId, GroupElement, f64)>,
}

/// Frontier of the label-setting search over (vertex, sheet) states.
struct SearchState {
    rank: usize,
    dist: Vec<f64>,
    pred: Vec<u32>,
    settled: Vec<bool>,
    heap: BinaryHeap<HeapEntry>,
}

const NO_PRED: u32 = u32::MAX;

impl SearchState {
    fn new(c: &SimplicialComplex, rank: usize) -> Result<Self> {
        let wide = (c.vertex_count() as u128) << rank;
        if wide > 1 << 27 {
            return Err(Error::BudgetExceeded(format!(
                "search state space {} x 2^{rank} is too large",
                c.vertex_count()
            )));
        }
        let states = wide as usize;
        Ok(SearchState {
            rank,
            dist: vec![f64::INFINITY; states],
            pred: vec![NO_PRED; states],
            settled: vec![false; states],
            heap: BinaryHeap::new(),
        })
    }

    #[inline]
    fn id(&self, v: VertexId, g: GroupElement) -> usize {
        v.index() << self.rank | g.bits() as usize
    }

    #[inline]
    fn state(&self, id: usize) -> (VertexId, GroupElement) {
        (
            VertexId((id >> self.rank) as u32),
            GroupElement::from_bits((id & ((1usize << self.rank) - 1)) as u64, self.rank),
        )
    }
}

/// Heap entry ordered so the minimum (distance, vertex, sheet) pops first.
#[derive(Clone, Copy, Debug)]
struct HeapEntry {
    dist: f64,
    vertex: VertexId,
    sheet: GroupElement,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
            .then_with(|| other.sheet.cmp(&self.sheet))
    }
}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimum-weight cycle through `u` with index `i != 0`.
///
/// Runs a label-setting search from `(u, 0)` to `(u, i)` on the implicit
/// covering; stale heap entries are skipped, each state settles once. Ties
/// break on smaller vertex id, then coordinate-lexicographically smaller
/// sheet, so results are identical across runs.
pub fn min_cycle_fixed_vertex_index(
    t: &IndexTable,
    c: &SimplicialComplex,
    l: &WeightFunction,
    u: VertexId,
    i: GroupElement,
) -> Result<MinCycleResult> {
    min_cycle_fixed_vertex_index_logged(t, c, l, u, i, None)
}

/// Same as [`min_cycle_fixed_vertex_index`] with an optional settle log.
pub fn min_cycle_fixed_vertex_index_logged(
    t: &IndexTable,
    c: &SimplicialComplex,
    l: &WeightFunction,
    u: VertexId,
    i: GroupElement,
    mut log: Option<&mut SearchLog>,
) -> Result<MinCycleResult> {
    if i.rank() != t.rank() {
        return Err(Error::DimensionMismatch(format!(
            "index has rank {}, table has rank {}",
            i.rank(),
            t.rank()
        )));
    }
    if i.is_zero() {
        return Err(Error::IndexZero);
    }
    if u.index() >= c.vertex_count() {
        return Err(Error::DimensionMismatch(format!("vertex {u} out of range")));
    }
    let mut st = SearchState::new(c, t.rank())?;
    let start = CoveringVertex { base: u, sheet: GroupElement::zero(t.rank()) };
    let start_id = st.id(start.base, start.sheet);
    st.dist[start_id] = 0.0;
    st.settled[start_id] = true;
    if let Some(log) = log.as_deref_mut() {
        log.settled.push((u, start.sheet, 0.0));
    }
    // seed the frontier with the neighbors of the start state
    for &w in c.neighbors(u) {
        let e = c.edge_id(u, w).expect("adjacent");
        let j = t.edge_index(e);
        let id = st.id(w, j);
        let d = l.get(e);
        if d < st.dist[id] {
            st.dist[id] = d;
            st.pred[id] = start_id as u32;
            st.heap.push(HeapEntry { dist: d, vertex: w, sheet: j });
        }
    }
    let target = st.id(u, i);
    let mut found = false;
    while let Some(HeapEntry { dist, vertex, sheet }) = st.heap.pop() {
        let id = st.id(vertex, sheet);
        if st.settled[id] {
            continue; // stale entry
        }
        debug_assert_eq!(dist, st.dist[id]);
        if id == target {
            found = true;
            if let Some(log) = log.as_deref_mut() {
                log.settled.push((vertex, sheet, dist));
            }
            break;
        }
        st.settled[id] = true;
        if let Some(log) = log.as_deref_mut() {
            log.settled.push((vertex, sheet, dist));
        }
        for &w in c.neighbors(vertex) {
            let e = c.edge_id(vertex, w).expect("adjacent");
            let j = sheet.xor(&t.edge_index(e));
            let nid = st.id(w, j);
            if st.settled[nid] {
                continue;
            }
            let nd = dist + l.get(e);
            if nd < st.dist[nid] {
                st.dist[nid] = nd;
                st.pred[nid] = id as u32;
                st.heap.push(HeapEntry { dist: nd, vertex: w, sheet: j });
            }
        }
    }
    if !found {
        return Err(Error::Unreachable);
    }
    // walk the predecessor chain back from (u, i) to (u, 0)
    let mut cycle = c.empty_chain(1);
    let mut rev = vec![st.state(target)];
    let mut cur = target;
    while cur != start_id {
        let prev = st.pred[cur] as usize;
        debug_assert_ne!(st.pred[cur], NO_PRED);
        let (pv, _) = st.state(prev);
        let (cv, _) = st.state(cur);
        cycle.toggle(c.edge_id(pv, cv).expect("adjacent"));
        rev.push(st.state(prev));
        cur = prev;
    }
    rev.reverse();
    let witness: Vec<CoveringVertex> =
        rev.into_iter().map(|(base, sheet)| CoveringVertex { base, sheet }).collect();
    debug_assert!(c.boundary_chain(&cycle).expect("1-chain").is_zero());
    debug_assert_eq!(t.index_of_chain(&cycle).bits(), i.bits());
    Ok(MinCycleResult {
        weight: l.chain_weight(&cycle),
        cycle,
        witness,
        witness_weight: st.dist[target],
        class_index: i,
    })
}

/// Minimum-weight cycle in the homology class of the cycle `x`.
///
/// A zero index short-circuits to the zero cycle. Otherwise the search runs
/// from every vertex of the lowest-coordinate basis cycle with that
/// coordinate set, in parallel, and the lightest result wins (ties go to the
/// smaller start vertex).
pub fn min_cycle_in_class(
    t: &IndexTable,
    c: &SimplicialComplex,
    l: &WeightFunction,
    basis: &HomologyBasis,
    x: &Chain,
) -> Result<MinCycleResult> {
    if x.dim() != 1 {
        return Err(Error::DimensionMismatch(format!("expected a 1-chain, got {}", x.dim())));
    }
    if !c.boundary_chain(x)?.is_zero() {
        return Err(Error::NotACycle);
    }
    let i = t.index_of_chain(x);
    if i.is_zero() {
        return Ok(MinCycleResult {
            cycle: c.empty_chain(1),
            weight: 0.0,
            witness: Vec::new(),
            witness_weight: 0.0,
            class_index: i,
        });
    }
    let k = (0..t.rank()).find(|&k| i.bit(k)).expect("nonzero index");
    let mut verts: std::collections::BTreeSet<VertexId> = Default::default();
    let n = c.dim();
    for id in basis.cycle(k).members() {
        verts.extend(c.simplex_vertices(n - 1, id).iter().copied());
    }
    let verts: Vec<VertexId> = verts.into_iter().collect();
    let best = verts
        .par_iter()
        .map(|&v| min_cycle_fixed_vertex_index(t, c, l, v, i).map(|r| (v, r)))
        .try_reduce_with(|a, b| {
            Ok(match a.1.weight.total_cmp(&b.1.weight).then_with(|| a.0.cmp(&b.0)) {
                Ordering::Greater => b,
                _ => a,
            })
        })
        .expect("basis cycle has vertices")?;
    Ok(best.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::IndexTable;
    use crate::meshes;

    fn setup(b: &meshes::MeshBundle) -> IndexTable {
        IndexTable::build(&b.complex, &b.hn1_basis).unwrap()
    }

    #[test]
    fn chain_weight_examples() {
        let b = meshes::rp2_6().unwrap();
        let l = WeightFunction::unit(&b.complex);
        assert_eq!(l.chain_weight(&b.complex.empty_chain(1)), 0.0);
        assert_eq!(l.chain_weight(&b.h1_basis[0]), 3.0);
        let mut two = b.complex.empty_chain(1);
        two.toggle(0);
        two.toggle(1);
        let mut lw = WeightFunction::unit(&b.complex);
        lw.set(0, 1.5).unwrap();
        lw.set(1, 2.25).unwrap();
        assert_eq!(lw.chain_weight(&two), 3.75);
    }

    #[test]
    fn negative_weight_rejected() {
        assert!(matches!(WeightFunction::from_weights(vec![1.0, -0.5]), Err(Error::BadWeight(_))));
        assert!(matches!(
            WeightFunction::from_weights(vec![f64::NAN]),
            Err(Error::BadWeight(_))
        ));
    }

    #[test]
    fn zero_index_rejected() {
        let b = meshes::rp2_6().unwrap();
        let t = setup(&b);
        let l = WeightFunction::unit(&b.complex);
        let res = min_cycle_fixed_vertex_index(&t, &b.complex, &l, VertexId(0), GroupElement::zero(1));
        assert!(matches!(res, Err(Error::IndexZero)));
    }

    #[test]
    fn generator_class_minimum_is_three_from_every_loop_vertex() {
        let b = meshes::rp2_6().unwrap();
        let t = setup(&b);
        let l = WeightFunction::unit(&b.complex);
        let i = GroupElement::from_bits(1, 1);
        for u in [0u32, 1, 2] {
            let r = min_cycle_fixed_vertex_index(&t, &b.complex, &l, VertexId(u), i).unwrap();
            assert_eq!(r.weight, 3.0, "from vertex {u}");
            assert_eq!(r.witness.first().unwrap().base, VertexId(u));
            assert_eq!(r.witness.last().unwrap().base, VertexId(u));
            assert!(r.weight <= r.witness_weight);
        }
    }

    #[test]
    fn witness_sheets_follow_edge_indices() {
        let b = meshes::torus_grid(3, 3).unwrap();
        let t = setup(&b);
        let l = WeightFunction::unit(&b.complex);
        let i = t.index_of_chain(&b.h1_basis[0]);
        let r = min_cycle_fixed_vertex_index(&t, &b.complex, &l, VertexId(0), i).unwrap();
        for w in r.witness.windows(2) {
            let e = b.complex.edge_id(w[0].base, w[1].base).unwrap();
            assert_eq!(w[1].sheet.bits(), w[0].sheet.xor(&t.edge_index(e)).bits());
        }
    }

    #[test]
    fn settled_distances_are_nondecreasing_and_unique() {
        let b = meshes::torus_grid(3, 3).unwrap();
        let t = setup(&b);
        let l = WeightFunction::unit(&b.complex);
        let i = t.index_of_chain(&b.h1_basis[1]);
        let mut log = SearchLog { settled: Vec::new() };
        min_cycle_fixed_vertex_index_logged(&t, &b.complex, &l, VertexId(0), i, Some(&mut log))
            .unwrap();
        let mut seen = std::collections::HashSet::new();
        let mut last = 0.0f64;
        for &(v, g, d) in &log.settled {
            assert!(d >= last, "settled distances must not decrease");
            last = d;
            assert!(seen.insert((v, g.bits())), "state settled twice");
        }
    }

    #[test]
    fn bounding_input_returns_zero_cycle() {
        let b = meshes::torus_grid(3, 3).unwrap();
        let t = setup(&b);
        let l = WeightFunction::unit(&b.complex);
        let mut tri = b.complex.empty_chain(2);
        tri.toggle(0);
        let x = b.complex.boundary_chain(&tri).unwrap();
        let r = min_cycle_in_class(&t, &b.complex, &l, &b.hn1_basis, &x).unwrap();
        assert!(r.cycle.is_zero());
        assert_eq!(r.weight, 0.0);
        assert!(r.witness.is_empty());
    }

    #[test]
    fn five_edge_cycle_reduces_to_three() {
        let b = meshes::rp2_6().unwrap();
        let t = setup(&b);
        let l = WeightFunction::unit(&b.complex);
        // generator loop plus two triangle boundaries: still the generator class
        let mut x = b.h1_basis[0].clone();
        for f in [0usize, 1] {
            let mut tri = b.complex.empty_chain(2);
            tri.toggle(f);
            x.xor_assign(&b.complex.boundary_chain(&tri).unwrap());
        }
        assert!(x.simplex_count() > 3);
        let r = min_cycle_in_class(&t, &b.complex, &l, &b.hn1_basis, &x).unwrap();
        assert_eq!(r.weight, 3.0);
        assert_eq!(t.index_of_chain(&r.cycle).bits(), t.index_of_chain(&x).bits());
    }

    #[test]
    fn expensive_generator_edges_are_avoided() {
        let b = meshes::rp2_6().unwrap();
        let t = setup(&b);
        let mut l = WeightFunction::unit(&b.complex);
        for e in b.h1_basis[0].members() {
            l.set(e, 10.0).unwrap();
        }
        let r = min_cycle_in_class(&t, &b.complex, &l, &b.hn1_basis, &b.h1_basis[0]).unwrap();
        assert_eq!(r.weight, 3.0);
        for e in r.cycle.members() {
            assert!(!b.h1_basis[0].contains(e), "optimal cycle uses an expensive edge");
        }
    }

    #[test]
    fn repeated_runs_are_identical() {
        let b = meshes::torus_grid(3, 3).unwrap();
        let t = setup(&b);
        let l = WeightFunction::unit(&b.complex);
        let x = b.h1_basis[0].xor(&b.h1_basis[1]);
        let a = min_cycle_in_class(&t, &b.complex, &l, &b.hn1_basis, &x).unwrap();
        let bres = min_cycle_in_class(&t, &b.complex, &l, &b.hn1_basis, &x).unwrap();
        assert_eq!(a.cycle, bres.cycle);
        assert_eq!(a.weight, bres.weight);
        assert_eq!(a.witness, bres.witness);
    }
}
