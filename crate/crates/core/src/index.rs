//! Per-edge index vectors in `Z_2^r` relative to a family of simple
//! codimension-1 cycles, plus evaluation on arbitrary 1-chains.
//!
//! For each basis cycle the builder walks, at every vertex of the cycle, one
//! local side of the cycle inside that vertex's star, toggling the index bit
//! of each edge whose crossing count is odd. Cycle edges themselves are then
//! indexed by checking whether the two local sides agree across the edge.
//! The result is linear on chains and computes the mod-2 intersection index
//! with each basis cycle on every 1-cycle.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use rayon::prelude::*;

use crate::complex::{Chain, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::homology::{self, HomologyBasis};
use crate::z2::{BitVec, Z2Matrix};

/// Element of the deck group `Z_2^r` (also the value type of the index
/// function). Coordinate `k` is stored in bit `k`; `r <= 64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement {
    bits: u64,
    rank: u32,
}

impl GroupElement {
    pub fn zero(rank: usize) -> Self {
        assert!(rank <= 64);
        GroupElement { bits: 0, rank: rank as u32 }
    }

    pub fn from_bits(bits: u64, rank: usize) -> Self {
        assert!(rank <= 64);
        assert!(rank == 64 || bits < (1u64 << rank), "bits out of range for rank");
        GroupElement { bits, rank: rank as u32 }
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn bit(&self, k: usize) -> bool {
        debug_assert!(k < self.rank as usize);
        self.bits >> k & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    #[must_use]
    pub fn xor(&self, other: &GroupElement) -> GroupElement {
        debug_assert_eq!(self.rank, other.rank);
        GroupElement { bits: self.bits ^ other.bits, rank: self.rank }
    }

    /// Coordinates as a `b0 b1 ... b_{r-1}` string, e.g. `"01"` for r=2.
    pub fn to_bit_string(&self) -> String {
        (0..self.rank as usize)
            .map(|k| if self.bit(k) { '1' } else { '0' })
            .collect()
    }

    pub fn from_bit_string(s: &str) -> Option<Self> {
        if s.len() > 64 {
            return None;
        }
        let mut bits = 0u64;
        for (k, ch) in s.chars().enumerate() {
            match ch {
                '1' => bits |= 1 << k,
                '0' => {}
                _ => return None,
            }
        }
        Some(GroupElement { bits, rank: s.len() as u32 })
    }
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_bit_string())
    }
}

impl Ord for GroupElement {
    /// Coordinate-lexicographic: at the lowest differing coordinate the
    /// element with that bit unset is smaller.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        debug_assert_eq!(self.rank, other.rank);
        let d = self.bits ^ other.bits;
        if d == 0 {
            return std::cmp::Ordering::Equal;
        }
        let bit = 1u64 << d.trailing_zeros();
        if self.bits & bit == 0 {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Audit data for the pass over one cycle vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexAudit {
    /// Edges at this vertex toggled an odd number of times (the list
    /// consulted when indexing cycle edges).
    pub toggled_edges: BTreeSet<usize>,
    /// Top simplices visited while walking this vertex's local side,
    /// seeds included.
    pub visited_tops: BTreeSet<usize>,
    /// Extra seeds taken after a fruitless first walk.
    pub reseeds: u32,
}

/// Audit data for one basis cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleAudit {
    pub cycle_vertices: Vec<VertexId>,
    pub per_vertex: BTreeMap<VertexId, VertexAudit>,
}

/// Instrumentation for the whole build.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildStats {
    /// Ridge crossings; each ridge is crossed at most once per vertex pass.
    pub crossings: u64,
    pub reseeds: u64,
}

/// Per-edge index vectors `J(a)` plus the per-cycle audit structures.
#[derive(Clone, Debug)]
pub struct IndexTable {
    rank: usize,
    edge_bits: Vec<u64>,
    m_chains: Vec<Chain>,
    audits: Vec<CycleAudit>,
    stats: BuildStats,
}

impl IndexTable {
    /// Runs the per-cycle edge-indexing construction for every basis cycle.
    ///
    /// The complex must be a closed pseudomanifold and every basis cycle
    /// must be simple. Passes over distinct cycles write disjoint
    /// coordinates, so they run in parallel.
    pub fn build(c: &SimplicialComplex, basis: &HomologyBasis) -> Result<IndexTable> {
        let r = basis.rank();
        if r > 64 {
            return Err(Error::RankTooLarge(r));
        }
        let report = c.verify_closed_pseudomanifold();
        if !report.is_ok() {
            return Err(Error::NonManifold(format!(
                "{} bad ridges, {} components",
                report.bad_ridges.len(),
                report.components
            )));
        }
        for (k, z) in basis.cycles().iter().enumerate() {
            if !homology::is_simple_cycle(c, z)? {
                return Err(Error::NotSimpleBasis(k));
            }
        }
        let planes: Vec<CyclePlane> = basis
            .cycles()
            .par_iter()
            .map(|z| build_cycle_plane(c, z))
            .collect::<Result<_>>()?;
        let mut edge_bits = vec![0u64; c.edge_count()];
        let mut stats = BuildStats::default();
        let mut m_chains = Vec::with_capacity(r);
        let mut audits = Vec::with_capacity(r);
        for (k, plane) in planes.into_iter().enumerate() {
            for e in plane.j.iter_ones() {
                edge_bits[e] |= 1 << k;
            }
            stats.crossings += plane.crossings;
            stats.reseeds += plane.reseeds;
            m_chains.push(plane.m_chain);
            audits.push(plane.audit);
        }
        Ok(IndexTable { rank: r, edge_bits, m_chains, audits, stats })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn edge_count(&self) -> usize {
        self.edge_bits.len()
    }

    /// `J(a)` for the edge with the given id.
    pub fn edge_index(&self, edge: usize) -> GroupElement {
        GroupElement { bits: self.edge_bits[edge], rank: self.rank as u32 }
    }

    /// The chain of edges with coordinate `k` set.
    pub fn m_chain(&self, k: usize) -> &Chain {
        &self.m_chains[k]
    }

    pub fn audit(&self, k: usize) -> &CycleAudit {
        &self.audits[k]
    }

    pub fn stats(&self) -> BuildStats {
        self.stats
    }

    /// `J(x)`: XOR of the per-edge vectors over the chain members.
    pub fn index_of_chain(&self, x: &Chain) -> GroupElement {
        debug_assert_eq!(x.dim(), 1);
        let mut bits = 0u64;
        for e in x.members() {
            bits ^= self.edge_bits[e];
        }
        GroupElement { bits, rank: self.rank as u32 }
    }

    /// Debug dump: per-edge hex-encoded vectors and per-vertex audit sets.
    /// Key order is stable.
    pub fn to_json(&self, c: &SimplicialComplex) -> serde_json::Value {
        let edges: Vec<serde_json::Value> = (0..self.edge_bits.len())
            .map(|e| {
                let vs = c.simplex_vertices(1, e);
                serde_json::json!({
                    "edge": [vs[0].0, vs[1].0],
                    "j": format!("{:#x}", self.edge_bits[e]),
                })
            })
            .collect();
        let audits: Vec<serde_json::Value> = self
            .audits
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let per_vertex: Vec<serde_json::Value> = a
                    .per_vertex
                    .iter()
                    .map(|(v, va)| {
                        serde_json::json!({
                            "vertex": v.0,
                            "toggled_edges": va.toggled_edges.iter().copied().collect::<Vec<_>>(),
                            "visited_tops": va.visited_tops.iter().copied().collect::<Vec<_>>(),
                            "reseeds": va.reseeds,
                        })
                    })
                    .collect();
                serde_json::json!({
                    "k": k,
                    "m_edges": self.m_chains[k].members().collect::<Vec<_>>(),
                    "per_vertex": per_vertex,
                })
            })
            .collect();
        serde_json::json!({
            "rank": self.rank,
            "edges": edges,
            "audit": audits,
            "stats": { "crossings": self.stats.crossings, "reseeds": self.stats.reseeds },
        })
    }
}

/// Matrix `B[j][k]` = coordinate `k` of `J(cycles[j])`; rows are cycles,
/// columns are index coordinates.
pub fn index_form_matrix(t: &IndexTable, cycles: &[Chain]) -> Z2Matrix {
    let rows = cycles
        .iter()
        .map(|z| {
            let g = t.index_of_chain(z);
            let ones: Vec<usize> = (0..t.rank()).filter(|&k| g.bit(k)).collect();
            BitVec::from_indices(t.rank(), &ones)
        })
        .collect();
    Z2Matrix::from_rows(rows)
}

/// Intersection index of the 1-cycle `x` with the single simple
/// (n-1)-cycle `z`, via a one-coordinate run of the index construction.
pub fn single_cycle_index(c: &SimplicialComplex, z: &Chain, x: &Chain) -> Result<bool> {
    let report = c.verify_closed_pseudomanifold();
    if !report.is_ok() {
        return Err(Error::NonManifold(format!(
            "{} bad ridges, {} components",
            report.bad_ridges.len(),
            report.components
        )));
    }
    if !homology::is_simple_cycle(c, z)? {
        return Err(Error::NotSimple("argument cycle".into()));
    }
    if x.dim() != 1 {
        return Err(Error::DimensionMismatch(format!("expected a 1-chain, got {}", x.dim())));
    }
    if !c.boundary_chain(x)?.is_zero() {
        return Err(Error::NotACycle);
    }
    let plane = build_cycle_plane(c, z)?;
    let mut bit = false;
    for e in x.members() {
        bit ^= plane.j.get(e);
    }
    Ok(bit)
}

struct CyclePlane {
    j: BitVec,
    m_chain: Chain,
    audit: CycleAudit,
    crossings: u64,
    reseeds: u64,
}

/// One full pass (vertex walks plus cycle-edge indexing) for a single cycle.
fn build_cycle_plane(c: &SimplicialComplex, cycle: &Chain) -> Result<CyclePlane> {
    let n = c.dim();
    debug_assert_eq!(cycle.dim(), n - 1);
    let cycle_faces: HashSet<usize> = cycle.members().collect();
    let mut cycle_vertices: BTreeSet<VertexId> = BTreeSet::new();
    let mut cycle_edges: BTreeSet<usize> = BTreeSet::new();
    for id in cycle.members() {
        let s = c.simplex_vertices(n - 1, id);
        for &v in s {
            cycle_vertices.insert(v);
        }
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                cycle_edges.insert(c.edge_id(s[i], s[j]).expect("edge of stored simplex"));
            }
        }
    }

    let mut j = BitVec::zeros(c.edge_count());
    let mut m_chain = c.empty_chain(1);
    let mut per_vertex: BTreeMap<VertexId, VertexAudit> = BTreeMap::new();
    let mut crossings = 0u64;
    let mut reseeds = 0u64;

    for &u in &cycle_vertices {
        let star = c.top_star(u);
        let mut visited: HashSet<u32> = HashSet::new();
        let mut crossed: HashSet<usize> = HashSet::new();
        let mut toggled: BTreeSet<usize> = BTreeSet::new();
        let mut sigma: BTreeSet<usize> = BTreeSet::new();
        let mut seeds_taken = 0u32;
        let mut face_buf: Vec<VertexId> = Vec::with_capacity(n);

        loop {
            let Some(&seed) = star.iter().find(|t| !visited.contains(t)) else {
                break;
            };
            seeds_taken += 1;
            visited.insert(seed);
            sigma.insert(seed as usize);
            let mut queue: VecDeque<u32> = VecDeque::new();
            queue.push_back(seed);
            while let Some(t) = queue.pop_front() {
                let s = c.simplex_vertices(n, t as usize).to_vec();
                for &dropped in s.iter().filter(|&&w| w != u) {
                    face_buf.clear();
                    face_buf.extend(s.iter().copied().filter(|&w| w != dropped));
                    let f = c
                        .simplex_id(n - 1, &face_buf)
                        .expect("face of stored simplex");
                    if cycle_faces.contains(&f) || crossed.contains(&f) {
                        continue;
                    }
                    let Some(&other) = c.cofaces(n - 1, f).iter().find(|&&o| o != t) else {
                        continue;
                    };
                    if visited.contains(&other) {
                        continue;
                    }
                    // cross the ridge into the unvisited simplex
                    let fresh = crossed.insert(f);
                    debug_assert!(fresh, "ridge crossed twice");
                    crossings += 1;
                    visited.insert(other);
                    sigma.insert(other as usize);
                    queue.push_back(other);
                    for &w in face_buf.iter().filter(|&&w| w != u) {
                        let a = c.edge_id(u, w).expect("edge of stored simplex");
                        if !cycle_edges.contains(&a) {
                            j.toggle(a);
                            m_chain.toggle(a);
                            if !toggled.remove(&a) {
                                toggled.insert(a);
                            }
                        }
                    }
                }
            }
            if !toggled.is_empty() {
                break;
            }
        }
        if toggled.is_empty() {
            return Err(Error::EmptyLocalSide(u.0));
        }
        reseeds += (seeds_taken - 1) as u64;
        per_vertex.insert(
            u,
            VertexAudit { toggled_edges: toggled, visited_tops: sigma, reseeds: seeds_taken - 1 },
        );
    }

    // index the cycle edges themselves: an edge stays unindexed exactly when
    // some triangle witnesses that the two local sides agree across it
    for &a in &cycle_edges {
        let ev = c.simplex_vertices(1, a);
        let (u, v) = (ev[0], ev[1]);
        let mu = &per_vertex[&u].toggled_edges;
        let mv = &per_vertex[&v].toggled_edges;
        let mut witnessed = false;
        for &t in c.cofaces(1, a) {
            let tv = c.simplex_vertices(2, t as usize);
            let w = *tv.iter().find(|&&x| x != u && x != v).expect("third vertex");
            let b = c.edge_id(u, w).expect("triangle side");
            let cc = c.edge_id(v, w).expect("triangle side");
            if mu.contains(&b) && mv.contains(&cc) {
                witnessed = true;
                break;
            }
        }
        if !witnessed {
            debug_assert!(!j.get(a), "cycle edge toggled during vertex walks");
            j.set(a, true);
            m_chain.toggle(a);
        }
    }

    Ok(CyclePlane {
        j,
        m_chain,
        audit: CycleAudit {
            cycle_vertices: cycle_vertices.into_iter().collect(),
            per_vertex,
        },
        crossings,
        reseeds,
    })
}
