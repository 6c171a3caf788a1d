//! Simplicial schemes of triangulated closed manifolds: simplex tables,
//! chains with mod-2 addition, boundaries, and incidence queries.
//!
//! Simplices of each dimension are stored in lexicographic order by vertex
//! list; the position in that order is the simplex id. Rebuilding from the
//! same top simplices always yields identical ids.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::z2::{BitVec, Z2Matrix};

/// Dense 0-based vertex index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Mod-2 chain of `dim`-simplices, stored as a membership bit-vector over
/// the dense simplex ids of that dimension.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Chain {
    dim: usize,
    bits: BitVec,
}

impl Chain {
    pub fn empty(dim: usize, simplex_count: usize) -> Self {
        Chain { dim, bits: BitVec::zeros(simplex_count) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn contains(&self, id: usize) -> bool {
        self.bits.get(id)
    }

    pub fn toggle(&mut self, id: usize) {
        self.bits.toggle(id);
    }

    pub fn xor_assign(&mut self, other: &Chain) {
        assert_eq!(self.dim, other.dim, "chain dimensions differ");
        self.bits.xor_assign(&other.bits);
    }

    pub fn xor(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn simplex_count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    pub(crate) fn from_bits(dim: usize, bits: BitVec) -> Self {
        Chain { dim, bits }
    }
}

/// Flat storage for all simplices of one dimension, sorted lexicographically.
#[derive(Clone, Debug)]
struct SimplexTable {
    stride: usize,
    verts: Vec<VertexId>,
}

impl SimplexTable {
    fn count(&self) -> usize {
        if self.stride == 0 { 0 } else { self.verts.len() / self.stride }
    }

    fn get(&self, id: usize) -> &[VertexId] {
        &self.verts[id * self.stride..(id + 1) * self.stride]
    }

    fn position(&self, key: &[VertexId]) -> Option<usize> {
        debug_assert_eq!(key.len(), self.stride);
        let n = self.count();
        let (mut lo, mut hi) = (0usize, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(key) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

/// Report from the closed-pseudomanifold check.
#[derive(Clone, Debug)]
pub struct PseudomanifoldReport {
    /// Ridges ((n-1)-simplices) with a coface count other than two,
    /// as (ridge id, coface count).
    pub bad_ridges: Vec<(usize, usize)>,
    /// Number of strong-connectivity components of the top simplices.
    pub components: usize,
}

impl PseudomanifoldReport {
    pub fn is_ok(&self) -> bool {
        self.bad_ridges.is_empty() && self.components == 1
    }
}

/// Immutable simplicial scheme built from its top-dimensional simplices by
/// downward closure. Safe to share across threads after construction.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    dim: usize,
    tables: Vec<SimplexTable>,
    /// cofaces[k][i]: ids of (k+1)-simplices containing k-simplex i, ascending.
    cofaces: Vec<Vec<Vec<u32>>>,
    /// Top simplices containing each vertex, ascending.
    vertex_tops: Vec<Vec<u32>>,
    /// Neighbors of each vertex in the 1-skeleton, ascending.
    neighbors: Vec<Vec<VertexId>>,
}

impl SimplicialComplex {
    /// Builds the downward closure of the given top `n`-simplices.
    ///
    /// Vertex ids must be dense `0..V`. Duplicate top simplices and tuples of
    /// the wrong arity are rejected; closedness is *not* checked here (see
    /// [`Self::verify_closed_pseudomanifold`]).
    pub fn from_top_simplices(n: usize, tops: &[Vec<VertexId>]) -> Result<Self> {
        if tops.is_empty() {
            return Err(Error::EmptyComplex);
        }
        let mut canon: Vec<Vec<VertexId>> = Vec::with_capacity(tops.len());
        for t in tops {
            if t.len() != n + 1 {
                return Err(Error::BadArity { expected: n + 1, got: t.len() });
            }
            let mut s = t.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::DegenerateSimplex(format!("{s:?}")));
            }
            canon.push(s);
        }
        {
            let mut seen = BTreeSet::new();
            for s in &canon {
                if !seen.insert(s.clone()) {
                    return Err(Error::DuplicateSimplex(format!("{s:?}")));
                }
            }
        }
        let vertex_set: BTreeSet<VertexId> = canon.iter().flatten().copied().collect();
        let nv = vertex_set.len();
        if let Some(&max) = vertex_set.iter().next_back() {
            if max.index() + 1 != nv {
                return Err(Error::SparseVertexIds { expected: nv, found: max.0 });
            }
        }

        // closure, per dimension, sorted
        let mut sets: Vec<BTreeSet<Vec<VertexId>>> = vec![BTreeSet::new(); n + 1];
        for s in &canon {
            let m = s.len();
            for mask in 1u32..(1 << m) {
                let sub: Vec<VertexId> = (0..m)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| s[i])
                    .collect();
                sets[sub.len() - 1].insert(sub);
            }
        }
        let tables: Vec<SimplexTable> = sets
            .into_iter()
            .enumerate()
            .map(|(k, set)| {
                let mut verts = Vec::with_capacity(set.len() * (k + 1));
                for s in set {
                    verts.extend(s);
                }
                SimplexTable { stride: k + 1, verts }
            })
            .collect();

        let mut complex = SimplicialComplex {
            dim: n,
            tables,
            cofaces: Vec::new(),
            vertex_tops: Vec::new(),
            neighbors: Vec::new(),
        };
        complex.build_incidence();
        Ok(complex)
    }

    fn build_incidence(&mut self) {
        let n = self.dim;
        let mut cofaces: Vec<Vec<Vec<u32>>> = (0..n)
            .map(|k| vec![Vec::new(); self.tables[k].count()])
            .collect();
        let mut face_buf: Vec<VertexId> = Vec::with_capacity(n + 1);
        for k in 1..=n {
            // split so we can read table k while writing cofaces[k-1]
            for id in 0..self.tables[k].count() {
                let s = self.tables[k].get(id).to_vec();
                for drop in 0..s.len() {
                    face_buf.clear();
                    face_buf.extend(s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v));
                    let f = self.tables[k - 1]
                        .position(&face_buf)
                        .expect("closure contains every face");
                    cofaces[k - 1][f].push(id as u32);
                }
            }
        }
        let nv = self.tables[0].count();
        let mut vertex_tops = vec![Vec::new(); nv];
        for id in 0..self.tables[n].count() {
            for &v in self.tables[n].get(id) {
                vertex_tops[v.index()].push(id as u32);
            }
        }
        let mut neighbors: Vec<Vec<VertexId>> = vec![Vec::new(); nv];
        if n >= 1 {
            for e in 0..self.tables[1].count() {
                let ev = self.tables[1].get(e);
                neighbors[ev[0].index()].push(ev[1]);
                neighbors[ev[1].index()].push(ev[0]);
            }
        }
        for l in &mut neighbors {
            l.sort_unstable();
        }
        self.cofaces = cofaces;
        self.vertex_tops = vertex_tops;
        self.neighbors = neighbors;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn simplex_count(&self, k: usize) -> usize {
        if k <= self.dim { self.tables[k].count() } else { 0 }
    }

    pub fn vertex_count(&self) -> usize {
        self.simplex_count(0)
    }

    pub fn edge_count(&self) -> usize {
        self.simplex_count(1)
    }

    /// Vertices of the `k`-simplex with the given id, ascending.
    pub fn simplex_vertices(&self, k: usize, id: usize) -> &[VertexId] {
        self.tables[k].get(id)
    }

    /// Dense id of a simplex given by its sorted vertex list.
    pub fn simplex_id(&self, k: usize, verts: &[VertexId]) -> Option<usize> {
        if k > self.dim || verts.len() != k + 1 {
            return None;
        }
        self.tables[k].position(verts)
    }

    pub fn edge_id(&self, a: VertexId, b: VertexId) -> Option<usize> {
        let key = if a <= b { [a, b] } else { [b, a] };
        self.tables[1].position(&key)
    }

    /// Ids of (k+1)-simplices containing the given k-simplex, ascending.
    pub fn cofaces(&self, k: usize, id: usize) -> &[u32] {
        &self.cofaces[k][id]
    }

    /// Top simplices containing a vertex, ascending.
    pub fn top_star(&self, v: VertexId) -> &[u32] {
        &self.vertex_tops[v.index()]
    }

    /// Vertices adjacent to `v` in the 1-skeleton, ascending.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.neighbors[v.index()]
    }

    pub fn empty_chain(&self, k: usize) -> Chain {
        Chain::empty(k, self.simplex_count(k))
    }

    /// Chain from explicit simplices given as vertex lists.
    pub fn chain_from_simplices(&self, k: usize, simplices: &[Vec<VertexId>]) -> Result<Chain> {
        let mut c = self.empty_chain(k);
        for s in simplices {
            let mut key = s.clone();
            key.sort_unstable();
            let id = self
                .simplex_id(k, &key)
                .ok_or_else(|| Error::UnknownSimplex(format!("{key:?}")))?;
            c.toggle(id);
        }
        Ok(c)
    }

    /// Mod-2 boundary of a `k`-chain, `1 <= k <= n`.
    pub fn boundary_chain(&self, c: &Chain) -> Result<Chain> {
        let k = c.dim();
        if k == 0 || k > self.dim {
            return Err(Error::BadDimension(k));
        }
        let mut out = self.empty_chain(k - 1);
        let mut face_buf: Vec<VertexId> = Vec::with_capacity(k + 1);
        for id in c.members() {
            let s = self.tables[k].get(id);
            for drop in 0..s.len() {
                face_buf.clear();
                face_buf.extend(s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v));
                let f = self.tables[k - 1].position(&face_buf).expect("face in closure");
                out.toggle(f);
            }
        }
        Ok(out)
    }

    /// Boundary matrix of dimension `k`: rows are (k-1)-simplices, columns
    /// are k-simplices.
    pub fn boundary_matrix(&self, k: usize) -> Result<Z2Matrix> {
        if k == 0 || k > self.dim {
            return Err(Error::BadDimension(k));
        }
        let mut m = Z2Matrix::zeros(self.simplex_count(k - 1), self.simplex_count(k));
        let mut face_buf: Vec<VertexId> = Vec::with_capacity(k + 1);
        for id in 0..self.tables[k].count() {
            let s = self.tables[k].get(id).to_vec();
            for drop in 0..s.len() {
                face_buf.clear();
                face_buf.extend(s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v));
                let f = self.tables[k - 1].position(&face_buf).expect("face in closure");
                m.set(f, id, true);
            }
        }
        Ok(m)
    }

    /// Checks that every ridge has exactly two top cofaces and that the top
    /// simplices are strongly connected through ridges.
    pub fn verify_closed_pseudomanifold(&self) -> PseudomanifoldReport {
        let n = self.dim;
        if n == 0 {
            return PseudomanifoldReport {
                bad_ridges: Vec::new(),
                components: self.tables[0].count(),
            };
        }
        let ridge_cofaces = &self.cofaces[n - 1];
        let bad_ridges: Vec<(usize, usize)> = ridge_cofaces
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() != 2)
            .map(|(i, c)| (i, c.len()))
            .collect();
        // strong connectivity across ridges with exactly two cofaces
        let ntop = self.tables[n].count();
        let mut seen = vec![false; ntop];
        let mut components = 0;
        for start in 0..ntop {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(t) = stack.pop() {
                let s = self.tables[n].get(t).to_vec();
                for drop in 0..s.len() {
                    let face: Vec<VertexId> = s
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != drop)
                        .map(|(_, &v)| v)
                        .collect();
                    let f = self.tables[n - 1].position(&face).expect("face in closure");
                    let cof = &ridge_cofaces[f];
                    if cof.len() != 2 {
                        continue;
                    }
                    for &o in cof {
                        let o = o as usize;
                        if !seen[o] {
                            seen[o] = true;
                            stack.push(o);
                        }
                    }
                }
            }
        }
        PseudomanifoldReport { bad_ridges, components }
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dim)
            .map(|k| {
                let c = self.simplex_count(k) as i64;
                if k % 2 == 0 { c } else { -c }
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn v(ids: &[u32]) -> Vec<VertexId> {
        ids.iter().map(|&i| VertexId(i)).collect()
    }

    fn tetra_boundary() -> SimplicialComplex {
        let tops = vec![v(&[0, 1, 2]), v(&[0, 1, 3]), v(&[0, 2, 3]), v(&[1, 2, 3])];
        SimplicialComplex::from_top_simplices(2, &tops).unwrap()
    }

    #[test]
    fn tetra_boundary_counts() {
        let c = tetra_boundary();
        assert_eq!(c.simplex_count(0), 4);
        assert_eq!(c.simplex_count(1), 6);
        assert_eq!(c.simplex_count(2), 4);
        assert_eq!(c.euler_characteristic(), 2);
    }

    #[test]
    fn duplicate_top_simplex_rejected() {
        let tops = vec![v(&[0, 1, 2]), v(&[2, 1, 0])];
        assert!(matches!(
            SimplicialComplex::from_top_simplices(2, &tops),
            Err(Error::DuplicateSimplex(_))
        ));
    }

    #[test]
    fn bad_arity_rejected() {
        let tops = vec![v(&[0, 1, 2, 3])];
        assert!(matches!(
            SimplicialComplex::from_top_simplices(2, &tops),
            Err(Error::BadArity { expected: 3, got: 4 })
        ));
    }

    #[test]
    fn degenerate_and_sparse_rejected() {
        assert!(matches!(
            SimplicialComplex::from_top_simplices(2, &[v(&[0, 0, 1])]),
            Err(Error::DegenerateSimplex(_))
        ));
        assert!(matches!(
            SimplicialComplex::from_top_simplices(2, &[v(&[0, 1, 5])]),
            Err(Error::SparseVertexIds { .. })
        ));
    }

    #[test]
    fn triangle_boundary_is_its_edges() {
        let c = tetra_boundary();
        let t = c.chain_from_simplices(2, &[v(&[0, 1, 2])]).unwrap();
        let b = c.boundary_chain(&t).unwrap();
        let edges: Vec<Vec<VertexId>> =
            b.members().map(|id| c.simplex_vertices(1, id).to_vec()).collect();
        assert_eq!(edges, vec![v(&[0, 1]), v(&[0, 2]), v(&[1, 2])]);
    }

    #[test]
    fn boundary_of_empty_chain_is_empty() {
        let c = tetra_boundary();
        let b = c.boundary_chain(&c.empty_chain(2)).unwrap();
        assert!(b.is_zero());
    }

    #[test]
    fn boundary_of_boundary_vanishes_on_all_face_generators() {
        let c = tetra_boundary();
        for id in 0..c.simplex_count(2) {
            let mut t = c.empty_chain(2);
            t.toggle(id);
            let bb = c.boundary_chain(&c.boundary_chain(&t).unwrap()).unwrap();
            assert!(bb.is_zero());
        }
    }

    #[test]
    fn pseudomanifold_check_tetra_ok_single_triangle_not() {
        assert!(tetra_boundary().verify_closed_pseudomanifold().is_ok());
        let open = SimplicialComplex::from_top_simplices(2, &[v(&[0, 1, 2])]).unwrap();
        let rep = open.verify_closed_pseudomanifold();
        assert!(!rep.is_ok());
        assert_eq!(rep.bad_ridges.len(), 3);
        assert!(rep.bad_ridges.iter().all(|&(_, c)| c == 1));
    }

    #[test]
    fn disconnected_tops_reported() {
        // two disjoint triangle pairs sharing no ridge
        let tops = vec![v(&[0, 1, 2]), v(&[3, 4, 5])];
        let c = SimplicialComplex::from_top_simplices(2, &tops).unwrap();
        assert_eq!(c.verify_closed_pseudomanifold().components, 2);
    }

    #[test]
    fn rebuild_yields_identical_indexing() {
        let tops = vec![v(&[1, 2, 3]), v(&[0, 2, 3]), v(&[0, 1, 3]), v(&[0, 1, 2])];
        let a = SimplicialComplex::from_top_simplices(2, &tops).unwrap();
        let b = tetra_boundary();
        for k in 0..=2 {
            assert_eq!(a.simplex_count(k), b.simplex_count(k));
            for id in 0..a.simplex_count(k) {
                assert_eq!(a.simplex_vertices(k, id), b.simplex_vertices(k, id));
            }
        }
    }

    #[test]
    fn incidence_queries() {
        let c = tetra_boundary();
        let e = c.edge_id(VertexId(0), VertexId(1)).unwrap();
        assert_eq!(c.cofaces(1, e).len(), 2);
        assert_eq!(c.top_star(VertexId(0)).len(), 3);
        assert_eq!(c.neighbors(VertexId(0)), &[VertexId(1), VertexId(2), VertexId(3)]);
    }
}
