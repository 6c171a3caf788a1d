//! Bundled mesh generators with curated simple codimension-1 bases and
//! curated 1-cycle bases.
//!
//! Every generator output is a closed pseudomanifold and its curated bases
//! are validated (cycles, simple, independent) at construction time, so the
//! default pipeline never depends on automatic basis extraction.

use crate::complex::{Chain, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::homology::{hn1_basis, HomologyBasis};

/// A generated complex together with its curated bases.
#[derive(Clone, Debug)]
pub struct MeshBundle {
    pub name: String,
    pub complex: SimplicialComplex,
    /// Simple (n-1)-cycles forming a homology basis.
    pub hn1_basis: HomologyBasis,
    /// 1-cycles forming a homology basis of dimension one.
    pub h1_basis: Vec<Chain>,
}

fn bundle(
    name: &str,
    n: usize,
    tops: Vec<Vec<VertexId>>,
    hn1: Vec<Vec<Vec<VertexId>>>,
    h1: Vec<Vec<(u32, u32)>>,
) -> Result<MeshBundle> {
    let complex = SimplicialComplex::from_top_simplices(n, &tops)?;
    let report = complex.verify_closed_pseudomanifold();
    if !report.is_ok() {
        return Err(Error::NonManifold(format!(
            "generator {name}: {} bad ridges, {} components",
            report.bad_ridges.len(),
            report.components
        )));
    }
    let cycles = hn1
        .into_iter()
        .map(|simps| complex.chain_from_simplices(n - 1, &simps))
        .collect::<Result<Vec<_>>>()?;
    let hn1_basis = hn1_basis(&complex, Some(cycles))?;
    let h1_basis = h1
        .into_iter()
        .map(|edges| edge_loop(&complex, &edges))
        .collect::<Result<Vec<_>>>()?;
    for z in &h1_basis {
        if !complex.boundary_chain(z)?.is_zero() {
            return Err(Error::NotACycle);
        }
    }
    Ok(MeshBundle { name: name.to_string(), complex, hn1_basis, h1_basis })
}

fn edge_loop(c: &SimplicialComplex, edges: &[(u32, u32)]) -> Result<Chain> {
    let simps: Vec<Vec<VertexId>> =
        edges.iter().map(|&(a, b)| vec![VertexId(a), VertexId(b)]).collect();
    c.chain_from_simplices(1, &simps)
}

fn v(ids: &[u32]) -> Vec<VertexId> {
    ids.iter().map(|&i| VertexId(i)).collect()
}

/// Boundary of one tetrahedron: the smallest closed surface.
pub fn sphere_tet() -> Result<MeshBundle> {
    let tops = vec![v(&[0, 1, 2]), v(&[0, 1, 3]), v(&[0, 2, 3]), v(&[1, 2, 3])];
    bundle("sphere_tet", 2, tops, vec![], vec![])
}

/// Six-vertex triangulation of the projective plane.
pub fn rp2_6() -> Result<MeshBundle> {
    let tops = vec![
        v(&[0, 1, 3]),
        v(&[0, 1, 4]),
        v(&[0, 2, 3]),
        v(&[0, 2, 5]),
        v(&[0, 4, 5]),
        v(&[1, 2, 4]),
        v(&[1, 2, 5]),
        v(&[1, 3, 5]),
        v(&[2, 3, 4]),
        v(&[3, 4, 5]),
    ];
    let gen_loop = vec![v(&[0, 1]), v(&[1, 2]), v(&[0, 2])];
    bundle("rp2_6", 2, tops, vec![gen_loop], vec![vec![(0, 1), (1, 2), (0, 2)]])
}

fn grid_vertex(p: usize, q: usize, i: usize, j: usize) -> u32 {
    ((i % p) * q + (j % q)) as u32
}

fn torus_tops(p: usize, q: usize) -> Vec<Vec<VertexId>> {
    let mut tops = Vec::with_capacity(2 * p * q);
    for i in 0..p {
        for j in 0..q {
            let a = grid_vertex(p, q, i, j);
            let b = grid_vertex(p, q, i + 1, j);
            let c = grid_vertex(p, q, i, j + 1);
            let d = grid_vertex(p, q, i + 1, j + 1);
            tops.push(v(&[a, b, d]));
            tops.push(v(&[a, d, c]));
        }
    }
    tops
}

/// p-by-q grid torus, each square split along the increasing diagonal.
pub fn torus_grid(p: usize, q: usize) -> Result<MeshBundle> {
    if p < 3 || q < 3 {
        return Err(Error::BadParams(format!("torus_grid({p},{q}): sides must be >= 3")));
    }
    let meridian: Vec<Vec<VertexId>> = (0..p)
        .map(|i| v(&[grid_vertex(p, q, i, 0), grid_vertex(p, q, i + 1, 0)]))
        .collect();
    let longitude: Vec<Vec<VertexId>> = (0..q)
        .map(|j| v(&[grid_vertex(p, q, 0, j), grid_vertex(p, q, 0, j + 1)]))
        .collect();
    let h1 = vec![
        (0..p).map(|i| (grid_vertex(p, q, i, 0), grid_vertex(p, q, i + 1, 0))).collect(),
        (0..q).map(|j| (grid_vertex(p, q, 0, j), grid_vertex(p, q, 0, j + 1))).collect(),
    ];
    bundle(
        &format!("torus_grid_{p}x{q}"),
        2,
        torus_tops(p, q),
        vec![meridian, longitude],
        h1,
    )
}

/// The row-`row` loop on a [`torus_grid`] complex; test fixture for
/// homologous-but-disjoint cycles.
pub fn torus_row_loop(c: &SimplicialComplex, p: usize, q: usize, row: usize) -> Result<Chain> {
    let simps: Vec<Vec<VertexId>> = (0..p)
        .map(|i| v(&[grid_vertex(p, q, i, row), grid_vertex(p, q, i + 1, row)]))
        .collect();
    c.chain_from_simplices(1, &simps)
}

fn klein_vertex(p: usize, q: usize, i: usize, j: usize) -> u32 {
    let mut i = i % p;
    let mut j = j;
    if j >= q {
        i = (p - i) % p;
        j -= q;
    }
    (i * q + j) as u32
}

/// p-by-q grid Klein bottle: plain wrap in the first direction, flipped
/// wrap in the second.
pub fn klein_grid(p: usize, q: usize) -> Result<MeshBundle> {
    if p < 3 || q < 3 {
        return Err(Error::BadParams(format!("klein_grid({p},{q}): sides must be >= 3")));
    }
    let mut tops = Vec::with_capacity(2 * p * q);
    for i in 0..p {
        for j in 0..q {
            let a = klein_vertex(p, q, i, j);
            let b = klein_vertex(p, q, i + 1, j);
            let c = klein_vertex(p, q, i, j + 1);
            let d = klein_vertex(p, q, i + 1, j + 1);
            tops.push(v(&[a, b, d]));
            tops.push(v(&[a, d, c]));
        }
    }
    // row loop has an annulus neighborhood, column loop a Moebius one
    let row: Vec<Vec<VertexId>> = (0..p)
        .map(|i| v(&[klein_vertex(p, q, i, 0), klein_vertex(p, q, i + 1, 0)]))
        .collect();
    let col: Vec<Vec<VertexId>> = (0..q)
        .map(|j| v(&[klein_vertex(p, q, 0, j), klein_vertex(p, q, 0, j + 1)]))
        .collect();
    let h1 = vec![
        (0..p).map(|i| (klein_vertex(p, q, i, 0), klein_vertex(p, q, i + 1, 0))).collect(),
        (0..q).map(|j| (klein_vertex(p, q, 0, j), klein_vertex(p, q, 0, j + 1))).collect(),
    ];
    bundle(&format!("klein_grid_{p}x{q}"), 2, tops, vec![row, col], h1)
}

/// Genus-2 surface: two 3x3 grid tori glued along a removed triangle.
pub fn genus2_polygon() -> Result<MeshBundle> {
    let p = 3;
    let q = 3;
    let removed = {
        let mut t = [
            grid_vertex(p, q, 1, 1),
            grid_vertex(p, q, 2, 1),
            grid_vertex(p, q, 2, 2),
        ];
        t.sort_unstable();
        t
    };
    let keep = |t: &Vec<VertexId>| {
        let mut s: Vec<u32> = t.iter().map(|x| x.0).collect();
        s.sort_unstable();
        s != removed
    };
    let torus1: Vec<Vec<VertexId>> = torus_tops(p, q).into_iter().filter(keep).collect();
    // second copy: glued vertices keep their ids, the rest shift past 8,
    // assigned in ascending order of the original id
    let glued: std::collections::BTreeSet<u32> = removed.iter().copied().collect();
    let fresh: Vec<u32> = (0..(p * q) as u32).filter(|x| !glued.contains(x)).collect();
    let map2 = |x: u32| -> u32 {
        if glued.contains(&x) {
            x
        } else {
            9 + fresh.iter().position(|&y| y == x).unwrap() as u32
        }
    };
    let torus2: Vec<Vec<VertexId>> = torus_tops(p, q)
        .into_iter()
        .filter(keep)
        .map(|t| t.iter().map(|x| VertexId(map2(x.0))).collect())
        .collect();
    let tops: Vec<Vec<VertexId>> = torus1.into_iter().chain(torus2).collect();

    let le = |a: u32, b: u32| if a <= b { (a, b) } else { (b, a) };
    let loops: Vec<Vec<(u32, u32)>> = vec![
        (0..p).map(|i| le(grid_vertex(p, q, i, 0), grid_vertex(p, q, i + 1, 0))).collect(),
        (0..q).map(|j| le(grid_vertex(p, q, 0, j), grid_vertex(p, q, 0, j + 1))).collect(),
        (0..p)
            .map(|i| le(map2(grid_vertex(p, q, i, 0)), map2(grid_vertex(p, q, i + 1, 0))))
            .collect(),
        (0..q)
            .map(|j| le(map2(grid_vertex(p, q, 0, j)), map2(grid_vertex(p, q, 0, j + 1))))
            .collect(),
    ];
    let hn1: Vec<Vec<Vec<VertexId>>> = loops
        .iter()
        .map(|l| l.iter().map(|&(a, b)| v(&[a, b])).collect())
        .collect();
    bundle("genus2_polygon", 2, tops, hn1, loops)
}

fn cube_vertex(p: usize, q: usize, s: usize, i: usize, j: usize, k: usize) -> u32 {
    ((i % p) * q * s + (j % q) * s + (k % s)) as u32
}

/// p-by-q-by-s grid 3-torus; each cube is split into six tetrahedra sharing
/// the main diagonal, consistently across faces.
pub fn torus3_grid(p: usize, q: usize, s: usize) -> Result<MeshBundle> {
    if p < 3 || q < 3 || s < 3 {
        return Err(Error::BadParams(format!("torus3_grid({p},{q},{s}): sides must be >= 3")));
    }
    const PERMS: [[usize; 3]; 6] =
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut tops = Vec::with_capacity(6 * p * q * s);
    for i in 0..p {
        for j in 0..q {
            for k in 0..s {
                for perm in PERMS {
                    let mut pt = [i, j, k];
                    let mut verts = vec![cube_vertex(p, q, s, pt[0], pt[1], pt[2])];
                    for ax in perm {
                        pt[ax] += 1;
                        verts.push(cube_vertex(p, q, s, pt[0], pt[1], pt[2]));
                    }
                    tops.push(verts.into_iter().map(VertexId).collect());
                }
            }
        }
    }
    let complex = SimplicialComplex::from_top_simplices(3, &tops)?;
    let report = complex.verify_closed_pseudomanifold();
    if !report.is_ok() {
        return Err(Error::NonManifold(format!(
            "torus3_grid: {} bad ridges, {} components",
            report.bad_ridges.len(),
            report.components
        )));
    }
    // basis 2-cycles: the coordinate tori i=0, j=0, k=0
    let coord = |vtx: u32, axis: usize| -> usize {
        let vtx = vtx as usize;
        match axis {
            0 => vtx / (q * s),
            1 => (vtx / s) % q,
            _ => vtx % s,
        }
    };
    let mut planes = Vec::new();
    for axis in 0..3 {
        let mut plane = complex.empty_chain(2);
        for id in 0..complex.simplex_count(2) {
            let verts = complex.simplex_vertices(2, id);
            if verts.iter().all(|w| coord(w.0, axis) == 0) {
                plane.toggle(id);
            }
        }
        planes.push(plane);
    }
    let hn1 = hn1_basis(&complex, Some(planes))?;
    let mut h1 = Vec::new();
    for axis in 0..3 {
        let step = |t: usize| match axis {
            0 => cube_vertex(p, q, s, t, 0, 0),
            1 => cube_vertex(p, q, s, 0, t, 0),
            _ => cube_vertex(p, q, s, 0, 0, t),
        };
        let len = [p, q, s][axis];
        let simps: Vec<Vec<VertexId>> = (0..len).map(|t| v(&[step(t), step(t + 1)])).collect();
        h1.push(complex.chain_from_simplices(1, &simps)?);
    }
    Ok(MeshBundle {
        name: format!("torus3_grid_{p}x{q}x{s}"),
        complex,
        hn1_basis: hn1,
        h1_basis: h1,
    })
}

/// Resolves a bundled-mesh name such as `rp2_6`, `torus_grid:3x3`,
/// `klein_grid:4x4`, or `torus3_grid:3x3x3`.
pub fn bundled(name: &str) -> Result<MeshBundle> {
    let (family, params) = match name.split_once(':') {
        Some((f, p)) => (f, Some(p)),
        None => (name, None),
    };
    let dims = |p: &str, want: usize| -> Result<Vec<usize>> {
        let parts: Vec<usize> = p
            .split('x')
            .map(|s| s.parse::<usize>().map_err(|_| Error::BadParams(format!("bad size {s:?}"))))
            .collect::<Result<_>>()?;
        if parts.len() != want {
            return Err(Error::BadParams(format!("expected {want} sizes, got {}", parts.len())));
        }
        Ok(parts)
    };
    match (family, params) {
        ("sphere_tet", None) => sphere_tet(),
        ("rp2_6", None) => rp2_6(),
        ("genus2_polygon", None) => genus2_polygon(),
        ("torus_grid", Some(p)) => {
            let d = dims(p, 2)?;
            torus_grid(d[0], d[1])
        }
        ("klein_grid", Some(p)) => {
            let d = dims(p, 2)?;
            klein_grid(d[0], d[1])
        }
        ("torus3_grid", Some(p)) => {
            let d = dims(p, 3)?;
            torus3_grid(d[0], d[1], d[2])
        }
        _ => Err(Error::BadParams(format!(
            "unknown mesh {name:?}; expected sphere_tet, rp2_6, genus2_polygon, \
             torus_grid:PxQ, klein_grid:PxQ, or torus3_grid:PxQxS"
        ))),
    }
}

/// The six bundles exercised by the verification suite.
pub fn acceptance_meshes() -> Vec<MeshBundle> {
    vec![
        sphere_tet().expect("sphere_tet"),
        rp2_6().expect("rp2_6"),
        torus_grid(3, 3).expect("torus_grid(3,3)"),
        klein_grid(4, 4).expect("klein_grid(4,4)"),
        genus2_polygon().expect("genus2_polygon"),
        torus3_grid(3, 3, 3).expect("torus3_grid(3,3,3)"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::betti_z2;

    #[test]
    fn generator_counts_and_euler() {
        let cases: Vec<(MeshBundle, [usize; 3], i64)> = vec![
            (sphere_tet().unwrap(), [4, 6, 4], 2),
            (rp2_6().unwrap(), [6, 15, 10], 1),
            (torus_grid(3, 3).unwrap(), [9, 27, 18], 0),
            (klein_grid(4, 4).unwrap(), [16, 48, 32], 0),
            (genus2_polygon().unwrap(), [15, 51, 34], -2),
        ];
        for (b, counts, chi) in cases {
            for (k, &want) in counts.iter().enumerate() {
                assert_eq!(b.complex.simplex_count(k), want, "{} dim {k}", b.name);
            }
            assert_eq!(b.complex.euler_characteristic(), chi, "{}", b.name);
        }
    }

    #[test]
    fn torus3_counts_and_betti() {
        let b = torus3_grid(3, 3, 3).unwrap();
        assert_eq!(b.complex.simplex_count(0), 27);
        assert_eq!(b.complex.simplex_count(1), 189);
        assert_eq!(b.complex.simplex_count(2), 324);
        assert_eq!(b.complex.simplex_count(3), 162);
        let betti: Vec<usize> = (0..=3).map(|k| betti_z2(&b.complex, k).unwrap()).collect();
        assert_eq!(betti, vec![1, 3, 3, 1]);
        assert_eq!(b.hn1_basis.rank(), 3);
    }

    #[test]
    fn all_generators_are_closed_pseudomanifolds() {
        for b in acceptance_meshes() {
            assert!(b.complex.verify_closed_pseudomanifold().is_ok(), "{}", b.name);
        }
    }

    #[test]
    fn betti_one_matches_curated_rank() {
        for b in acceptance_meshes() {
            let b1 = betti_z2(&b.complex, 1).unwrap();
            assert_eq!(b1, b.h1_basis.len(), "{}", b.name);
            let r = betti_z2(&b.complex, b.complex.dim() - 1).unwrap();
            assert_eq!(r, b.hn1_basis.rank(), "{}", b.name);
        }
    }

    #[test]
    fn small_sides_rejected() {
        assert!(matches!(torus_grid(2, 3), Err(Error::BadParams(_))));
        assert!(matches!(klein_grid(3, 2), Err(Error::BadParams(_))));
        assert!(matches!(torus3_grid(3, 2, 3), Err(Error::BadParams(_))));
    }

    #[test]
    fn bundled_name_parsing() {
        assert_eq!(bundled("torus_grid:3x3").unwrap().name, "torus_grid_3x3");
        assert!(matches!(bundled("moebius"), Err(Error::BadParams(_))));
        assert!(matches!(bundled("torus_grid:3"), Err(Error::BadParams(_))));
    }
}
