//! Z2 Betti numbers, codimension-1 cycle bases, homologous-ness tests, and
//! the simplicity check required of basis cycles.

use crate::complex::{Chain, SimplicialComplex};
use crate::error::{Error, Result};
use crate::z2::XorBasis;

/// A validated family of independent (in homology) cycles of one dimension.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    dim: usize,
    cycles: Vec<Chain>,
}

impl HomologyBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.cycles.len()
    }

    pub fn cycles(&self) -> &[Chain] {
        &self.cycles
    }

    pub fn cycle(&self, k: usize) -> &Chain {
        &self.cycles[k]
    }
}

/// Z2 Betti number `dim ker d_k - rank d_{k+1}`.
pub fn betti_z2(c: &SimplicialComplex, k: usize) -> Result<usize> {
    if k > c.dim() {
        return Err(Error::BadDimension(k));
    }
    let kernel_dim = if k == 0 {
        c.vertex_count()
    } else {
        let dk = c.boundary_matrix(k)?;
        dk.ncols() - dk.rank()
    };
    let image_rank = if k == c.dim() { 0 } else { c.boundary_matrix(k + 1)?.rank() };
    Ok(kernel_dim - image_rank)
}

/// Whether the 1-cycle `z` bounds, i.e. `d2 w = z` is solvable.
pub fn is_null_homologous(c: &SimplicialComplex, z: &Chain) -> Result<bool> {
    if z.dim() != 1 {
        return Err(Error::DimensionMismatch(format!("expected a 1-chain, got dim {}", z.dim())));
    }
    if !c.boundary_chain(z)?.is_zero() {
        return Err(Error::NotACycle);
    }
    Ok(c.boundary_matrix(2)?.solve(z.bits())?.is_some())
}

/// Whether the (n-1)-cycle `z` is a connected closed (n-1)-pseudomanifold
/// subcomplex: every (n-2)-face of its simplices lies in exactly two of
/// them, and they are strongly connected through those faces.
pub fn is_simple_cycle(c: &SimplicialComplex, z: &Chain) -> Result<bool> {
    let n = c.dim();
    if n < 2 || z.dim() != n - 1 {
        return Err(Error::DimensionMismatch(format!(
            "expected a {}-chain on an n>=2 complex, got dim {}",
            n.saturating_sub(1),
            z.dim()
        )));
    }
    if !c.boundary_chain(z)?.is_zero() {
        return Err(Error::NotACycle);
    }
    let members: Vec<usize> = z.members().collect();
    if members.is_empty() {
        return Ok(false);
    }
    // count incidences of (n-2)-faces within z
    let mut face_members: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &id in &members {
        let s = c.simplex_vertices(n - 1, id).to_vec();
        for drop in 0..s.len() {
            let face: Vec<_> = s
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != drop)
                .map(|(_, &v)| v)
                .collect();
            let f = c.simplex_id(n - 2, &face).expect("face of stored simplex");
            face_members.entry(f).or_default().push(id);
        }
    }
    if face_members.values().any(|m| m.len() != 2) {
        return Ok(false);
    }
    // strong connectivity through shared (n-2)-faces
    let pos: std::collections::BTreeMap<usize, usize> =
        members.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut adj = vec![Vec::new(); members.len()];
    for m in face_members.values() {
        let (a, b) = (pos[&m[0]], pos[&m[1]]);
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; members.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut reached = 1;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                reached += 1;
                stack.push(y);
            }
        }
    }
    Ok(reached == members.len())
}

/// Returns a rank-`r` family of simple (n-1)-cycles independent in homology.
///
/// Supplied cycles are validated and passed through. Without a supplied
/// family the basis is read off the boundary matrices; if any of those
/// cycles fails the simplicity check the caller must supply one.
pub fn hn1_basis(c: &SimplicialComplex, supplied: Option<Vec<Chain>>) -> Result<HomologyBasis> {
    let n = c.dim();
    if n < 2 {
        return Err(Error::BadDimension(n));
    }
    let r = betti_z2(c, n - 1)?;
    match supplied {
        Some(cycles) => {
            if cycles.len() != r {
                return Err(Error::NotIndependent(format!(
                    "supplied {} cycles, homology rank is {r}",
                    cycles.len()
                )));
            }
            for (i, z) in cycles.iter().enumerate() {
                if z.dim() != n - 1 {
                    return Err(Error::DimensionMismatch(format!(
                        "basis cycle {i} has dim {}, expected {}",
                        z.dim(),
                        n - 1
                    )));
                }
                if !c.boundary_chain(z)?.is_zero() {
                    return Err(Error::NotACycle);
                }
                if !is_simple_cycle(c, z)? {
                    return Err(Error::NotSimpleBasis(i));
                }
            }
            check_independent(c, &cycles)?;
            Ok(HomologyBasis { dim: n - 1, cycles })
        }
        None => {
            let cycles = matrix_basis(c, n - 1, r)?;
            for (i, z) in cycles.iter().enumerate() {
                if !is_simple_cycle(c, z)? {
                    return Err(Error::NotSimple(format!(
                        "matrix-derived basis cycle {i} is not simple; supply a basis"
                    )));
                }
            }
            Ok(HomologyBasis { dim: n - 1, cycles })
        }
    }
}

/// Errors unless no nonzero GF(2) combination of `cycles` bounds.
fn check_independent(c: &SimplicialComplex, cycles: &[Chain]) -> Result<()> {
    let n = c.dim();
    if cycles.is_empty() {
        return Ok(());
    }
    // independent modulo boundaries iff stacking them on the boundary
    // image raises the rank by one each time
    let mut span = XorBasis::new();
    if n - 1 < n {
        let dn = c.boundary_matrix(n)?;
        for col in 0..dn.ncols() {
            let mut v = crate::z2::BitVec::zeros(dn.nrows());
            for r in 0..dn.nrows() {
                if dn.get(r, col) {
                    v.set(r, true);
                }
            }
            span.insert(v);
        }
    }
    for (i, z) in cycles.iter().enumerate() {
        if !span.insert(z.bits().clone()) {
            return Err(Error::NotIndependent(format!(
                "cycle {i} is a combination of boundaries and earlier cycles"
            )));
        }
    }
    Ok(())
}

/// First `r` kernel vectors of `d_k` independent modulo the image of `d_{k+1}`.
fn matrix_basis(c: &SimplicialComplex, k: usize, r: usize) -> Result<Vec<Chain>> {
    let dk = c.boundary_matrix(k)?;
    let mut span = XorBasis::new();
    if k < c.dim() {
        let dk1 = c.boundary_matrix(k + 1)?;
        for col in 0..dk1.ncols() {
            let mut v = crate::z2::BitVec::zeros(dk1.nrows());
            for row in 0..dk1.nrows() {
                if dk1.get(row, col) {
                    v.set(row, true);
                }
            }
            span.insert(v);
        }
    }
    let mut out = Vec::new();
    for v in dk.kernel_basis() {
        if out.len() == r {
            break;
        }
        if span.insert(v.clone()) {
            out.push(Chain::from_bits(k, v));
        }
    }
    debug_assert_eq!(out.len(), r);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::VertexId;

    fn v(ids: &[u32]) -> Vec<VertexId> {
        ids.iter().map(|&i| VertexId(i)).collect()
    }

    fn tetra() -> SimplicialComplex {
        let tops = vec![v(&[0, 1, 2]), v(&[0, 1, 3]), v(&[0, 2, 3]), v(&[1, 2, 3])];
        SimplicialComplex::from_top_simplices(2, &tops).unwrap()
    }

    #[test]
    fn sphere_has_no_1_homology() {
        assert_eq!(betti_z2(&tetra(), 0).unwrap(), 1);
        assert_eq!(betti_z2(&tetra(), 1).unwrap(), 0);
        assert_eq!(betti_z2(&tetra(), 2).unwrap(), 1);
    }

    #[test]
    fn triangle_boundary_bounds() {
        let c = tetra();
        let t = c.chain_from_simplices(2, &[v(&[0, 1, 2])]).unwrap();
        let b = c.boundary_chain(&t).unwrap();
        assert!(is_null_homologous(&c, &b).unwrap());
    }

    #[test]
    fn empty_chain_bounds() {
        let c = tetra();
        assert!(is_null_homologous(&c, &c.empty_chain(1)).unwrap());
    }

    #[test]
    fn non_cycle_rejected() {
        let c = tetra();
        let mut z = c.empty_chain(1);
        z.toggle(0);
        assert!(matches!(is_null_homologous(&c, &z), Err(Error::NotACycle)));
        assert!(matches!(is_simple_cycle(&c, &z), Err(Error::NotACycle)));
    }

    #[test]
    fn sphere_basis_is_empty() {
        let b = hn1_basis(&tetra(), None).unwrap();
        assert_eq!(b.rank(), 0);
    }

    #[test]
    fn triangle_loop_is_simple() {
        let c = tetra();
        let z = c
            .chain_from_simplices(1, &[v(&[0, 1]), v(&[1, 2]), v(&[0, 2])])
            .unwrap();
        assert!(is_simple_cycle(&c, &z).unwrap());
    }

    #[test]
    fn empty_cycle_is_not_simple() {
        let c = tetra();
        assert!(!is_simple_cycle(&c, &c.empty_chain(1)).unwrap());
    }
}
