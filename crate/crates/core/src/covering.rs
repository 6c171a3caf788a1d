//! The regular covering with deck group `Z_2^r`, kept implicit: adjacency,
//! path lifting, the deck action, and a desk-scale materialization used only
//! to verify the covering axioms.
//!
//! A covering vertex is a pair (base vertex, sheet); two covering vertices
//! are adjacent when their bases are adjacent and the sheets differ by the
//! index vector of the base edge. The optimization path only ever calls
//! [`covering_neighbors`]; the explicit complex exists for verification.

use crate::complex::{SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::index::{GroupElement, IndexTable};

/// Vertex of the covering complex: a base vertex with a sheet label.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CoveringVertex {
    pub base: VertexId,
    pub sheet: GroupElement,
}

impl std::fmt::Display for CoveringVertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}@{}", self.base, self.sheet)
    }
}

/// Neighbors of a covering vertex, in base adjacency order: each base
/// neighbor `w` lifts to `(w, sheet + J([base, w]))`.
pub fn covering_neighbors(
    t: &IndexTable,
    c: &SimplicialComplex,
    vhat: CoveringVertex,
) -> Vec<CoveringVertex> {
    c.neighbors(vhat.base)
        .iter()
        .map(|&w| {
            let e = c.edge_id(vhat.base, w).expect("adjacent vertices share an edge");
            CoveringVertex { base: w, sheet: vhat.sheet.xor(&t.edge_index(e)) }
        })
        .collect()
}

/// Translation of the sheet by a deck element; a free action commuting with
/// the projection.
pub fn deck_act(g: GroupElement, vhat: CoveringVertex) -> CoveringVertex {
    CoveringVertex { base: vhat.base, sheet: g.xor(&vhat.sheet) }
}

/// Lifts an edge path (given by its vertex sequence) starting on sheet `g0`.
/// Entry `i` is `(path[i], g0 + J(first i edges))`.
pub fn lift_path(
    t: &IndexTable,
    c: &SimplicialComplex,
    path: &[VertexId],
    g0: GroupElement,
) -> Result<Vec<CoveringVertex>> {
    if path.is_empty() {
        return Err(Error::NotAPath("empty vertex sequence".into()));
    }
    let mut out = Vec::with_capacity(path.len());
    let mut sheet = g0;
    out.push(CoveringVertex { base: path[0], sheet });
    for w in path.windows(2) {
        let e = c
            .edge_id(w[0], w[1])
            .ok_or_else(|| Error::NotAPath(format!("{} and {} are not adjacent", w[0], w[1])))?;
        sheet = sheet.xor(&t.edge_index(e));
        out.push(CoveringVertex { base: w[1], sheet });
    }
    Ok(out)
}

/// Explicit covering complex over `V x Z_2^r`, for verification only.
#[derive(Clone, Debug)]
pub struct MaterializedCover {
    pub complex: SimplicialComplex,
    /// Base vertex and sheet of each cover vertex id.
    pub fibers: Vec<CoveringVertex>,
    pub rank: usize,
}

impl MaterializedCover {
    /// Cover vertex id of `(base, sheet)`.
    pub fn vertex_id(&self, vhat: CoveringVertex) -> VertexId {
        VertexId(((vhat.base.index() as u64) << self.rank | vhat.sheet.bits()) as u32)
    }

    /// Base simplex under the projection (vertex-wise, sorted).
    pub fn project_simplex(&self, k: usize, id: usize) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = self
            .complex
            .simplex_vertices(k, id)
            .iter()
            .map(|w| self.fibers[w.index()].base)
            .collect();
        vs.sort_unstable();
        vs
    }

    /// Image of a cover simplex under the deck action, if present.
    pub fn act_on_simplex(&self, g: GroupElement, k: usize, id: usize) -> Option<usize> {
        let mut vs: Vec<VertexId> = self
            .complex
            .simplex_vertices(k, id)
            .iter()
            .map(|w| self.vertex_id(deck_act(g, self.fibers[w.index()])))
            .collect();
        vs.sort_unstable();
        self.complex.simplex_id(k, &vs)
    }
}

/// Builds the explicit cover: one lift of every top simplex per sheet
/// assignment of its lowest vertex, the rest forced by the edge indices.
/// The total cell count must stay within `max_cells`.
pub fn materialize_cover(
    t: &IndexTable,
    c: &SimplicialComplex,
    max_cells: u64,
) -> Result<MaterializedCover> {
    let r = t.rank();
    let sheets: u64 = 1u64 << r;
    let total_cells: u64 = (0..=c.dim())
        .map(|k| c.simplex_count(k) as u64)
        .sum::<u64>()
        .saturating_mul(sheets);
    if total_cells > max_cells {
        return Err(Error::BudgetExceeded(format!(
            "materialization needs {total_cells} cells, budget is {max_cells}"
        )));
    }
    let n = c.dim();
    let mut tops = Vec::with_capacity(c.simplex_count(n) * sheets as usize);
    for id in 0..c.simplex_count(n) {
        let s = c.simplex_vertices(n, id);
        for g0 in 0..sheets {
            let g0 = GroupElement::from_bits(g0, r);
            let lift: Vec<VertexId> = s
                .iter()
                .map(|&w| {
                    let sheet = if w == s[0] {
                        g0
                    } else {
                        let e = c.edge_id(s[0], w).expect("edge of stored simplex");
                        g0.xor(&t.edge_index(e))
                    };
                    VertexId(((w.index() as u64) << r | sheet.bits()) as u32)
                })
                .collect();
            tops.push(lift);
        }
    }
    let complex = SimplicialComplex::from_top_simplices(n, &tops)?;
    let fibers: Vec<CoveringVertex> = (0..complex.vertex_count())
        .map(|id| CoveringVertex {
            base: VertexId((id as u64 >> r) as u32),
            sheet: GroupElement::from_bits(id as u64 & (sheets - 1), r),
        })
        .collect();
    Ok(MaterializedCover { complex, fibers, rank: r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::IndexTable;
    use crate::meshes;

    fn rp2_table() -> (meshes::MeshBundle, IndexTable) {
        let b = meshes::rp2_6().unwrap();
        let t = IndexTable::build(&b.complex, &b.hn1_basis).unwrap();
        (b, t)
    }

    #[test]
    fn trivial_cover_neighbors_match_base() {
        let b = meshes::sphere_tet().unwrap();
        let t = IndexTable::build(&b.complex, &b.hn1_basis).unwrap();
        let vhat = CoveringVertex { base: VertexId(0), sheet: GroupElement::zero(0) };
        let ns = covering_neighbors(&t, &b.complex, vhat);
        let bases: Vec<VertexId> = ns.iter().map(|x| x.base).collect();
        assert_eq!(bases, b.complex.neighbors(VertexId(0)));
        assert!(ns.iter().all(|x| x.sheet.is_zero()));
    }

    #[test]
    fn indexed_edge_switches_sheet() {
        let (b, t) = rp2_table();
        // some edge with J = 1 exists (the index plane is nonempty)
        let e = (0..b.complex.edge_count())
            .find(|&e| !t.edge_index(e).is_zero())
            .expect("indexed edge");
        let vs = b.complex.simplex_vertices(1, e);
        let vhat = CoveringVertex { base: vs[0], sheet: GroupElement::zero(1) };
        let ns = covering_neighbors(&t, &b.complex, vhat);
        let lifted = ns.iter().find(|x| x.base == vs[1]).unwrap();
        assert_eq!(lifted.sheet.bits(), 1);
    }

    #[test]
    fn neighbor_relation_is_symmetric() {
        let (b, t) = rp2_table();
        for base in 0..b.complex.vertex_count() {
            for sheet in 0..2 {
                let vhat = CoveringVertex {
                    base: VertexId(base as u32),
                    sheet: GroupElement::from_bits(sheet, 1),
                };
                for w in covering_neighbors(&t, &b.complex, vhat) {
                    assert!(covering_neighbors(&t, &b.complex, w).contains(&vhat));
                }
            }
        }
    }

    #[test]
    fn lift_of_triangle_boundary_returns_to_start() {
        let (b, t) = rp2_table();
        let tri = b.complex.simplex_vertices(2, 0).to_vec();
        let path = vec![tri[0], tri[1], tri[2], tri[0]];
        let lifted = lift_path(&t, &b.complex, &path, GroupElement::zero(1)).unwrap();
        assert_eq!(lifted.first(), lifted.last());
    }

    #[test]
    fn lift_of_generator_loop_switches_sheet_and_doubles_back() {
        let (b, t) = rp2_table();
        let path = vec![VertexId(0), VertexId(1), VertexId(2), VertexId(0)];
        let lifted = lift_path(&t, &b.complex, &path, GroupElement::zero(1)).unwrap();
        assert_eq!(lifted.last().unwrap().sheet.bits(), 1);
        let twice =
            vec![VertexId(0), VertexId(1), VertexId(2), VertexId(0), VertexId(1), VertexId(2), VertexId(0)];
        let lifted = lift_path(&t, &b.complex, &twice, GroupElement::zero(1)).unwrap();
        assert!(lifted.last().unwrap().sheet.is_zero());
    }

    #[test]
    fn non_adjacent_path_rejected() {
        let (b, t) = rp2_table();
        // all vertex pairs are edges on this mesh, so break adjacency by repetition
        let bad = lift_path(&t, &b.complex, &[VertexId(3), VertexId(3)], GroupElement::zero(1));
        assert!(matches!(bad, Err(Error::NotAPath(_))));
    }

    #[test]
    fn deck_action_is_an_involution_with_identity() {
        let (_, t) = rp2_table();
        let _ = &t;
        let vhat = CoveringVertex { base: VertexId(3), sheet: GroupElement::from_bits(1, 1) };
        assert_eq!(deck_act(GroupElement::zero(1), vhat), vhat);
        let g = GroupElement::from_bits(1, 1);
        assert_eq!(deck_act(g, deck_act(g, vhat)), vhat);
    }

    #[test]
    fn projective_plane_double_cover_is_a_sphere() {
        let (b, t) = rp2_table();
        let mc = materialize_cover(&t, &b.complex, 1_000_000).unwrap();
        assert_eq!(mc.complex.simplex_count(0), 12);
        assert_eq!(mc.complex.simplex_count(1), 30);
        assert_eq!(mc.complex.simplex_count(2), 20);
        assert_eq!(mc.complex.euler_characteristic(), 2);
        assert!(mc.complex.verify_closed_pseudomanifold().is_ok());
    }

    #[test]
    fn torus_four_sheet_cover_counts() {
        let b = meshes::torus_grid(3, 3).unwrap();
        let t = IndexTable::build(&b.complex, &b.hn1_basis).unwrap();
        let mc = materialize_cover(&t, &b.complex, 1_000_000).unwrap();
        assert_eq!(mc.complex.simplex_count(0), 36);
        assert_eq!(mc.complex.euler_characteristic(), 0);
    }

    #[test]
    fn budget_is_enforced() {
        let (b, t) = rp2_table();
        assert!(matches!(
            materialize_cover(&t, &b.complex, 10),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn deck_action_permutes_cover_simplices() {
        let (b, t) = rp2_table();
        let mc = materialize_cover(&t, &b.complex, 1_000_000).unwrap();
        let g = GroupElement::from_bits(1, 1);
        for k in 0..=2 {
            for id in 0..mc.complex.simplex_count(k) {
                let img = mc.act_on_simplex(g, k, id);
                assert!(img.is_some(), "dim {k} simplex {id} not mapped");
                assert_ne!(img, Some(id), "nonzero deck element fixes a simplex");
            }
        }
    }
}
