//! Independent brute-force verifiers: exhaustive minimum over a homology
//! coset, and intersection-form invariants computed from simplicial cup
//! products on surfaces. Used by tests and the `verify` pipeline only; the
//! optimization path never calls into this module.

use rayon::prelude::*;

use crate::complex::{Chain, SimplicialComplex};
use crate::error::{Error, Result};
use crate::index::{index_form_matrix, IndexTable};
use crate::mincycle::WeightFunction;
use crate::z2::{BitVec, XorBasis, Z2Matrix};

/// Exact minimum over the coset `x + image(d2)`.
#[derive(Clone, Debug)]
pub struct CosetMin {
    pub weight: f64,
    pub argmin: Chain,
    /// Number of chains enumerated (`2^rank(d2)`).
    pub enumerated: u64,
}

/// Congruence invariants of a symmetric GF(2) bilinear form: its rank and
/// whether the associated diagonal (a linear functional over GF(2)) is
/// nonzero anywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormInvariants {
    pub rank: usize,
    pub has_odd_diagonal: bool,
}

#[derive(Clone, Copy)]
struct Generator {
    edges: [(u32, f64); 3],
}

struct Best {
    weight: f64,
    bits: Vec<u64>,
}

/// Exhaustive minimum-weight chain in the homology class of the 1-cycle
/// `x`, enumerated by Gray-code toggles over an independent set of triangle
/// boundaries. Requires `2^rank(d2) <= budget`. The argmin tie-break is the
/// coordinate-lexicographically smallest edge bit-vector, so the result is
/// identical across runs and worker counts.
pub fn brute_min_in_class(
    c: &SimplicialComplex,
    l: &WeightFunction,
    x: &Chain,
    budget: u64,
) -> Result<CosetMin> {
    if x.dim() != 1 {
        return Err(Error::DimensionMismatch(format!("expected a 1-chain, got {}", x.dim())));
    }
    if !c.boundary_chain(x)?.is_zero() {
        return Err(Error::NotACycle);
    }
    let d2 = c.boundary_matrix(2)?;
    let pivot_cols = d2.rref().pivot_cols;
    let m = pivot_cols.len();
    if m >= 64 || (1u128 << m) > budget as u128 {
        return Err(Error::BudgetExceeded(format!(
            "coset has 2^{m} elements, budget is {budget}"
        )));
    }
    let gens: Vec<Generator> = pivot_cols
        .iter()
        .map(|&tri| {
            let vs = c.simplex_vertices(2, tri);
            let mut edges = [(0u32, 0.0f64); 3];
            let mut idx = 0;
            for i in 0..3 {
                for j in i + 1..3 {
                    let e = c.edge_id(vs[i], vs[j]).expect("triangle side");
                    edges[idx] = (e as u32, l.get(e));
                    idx += 1;
                }
            }
            Generator { edges }
        })
        .collect();

    let words = c.edge_count().div_ceil(64);
    let start: Vec<u64> = {
        let mut w = vec![0u64; words];
        w.copy_from_slice(&x.bits().words()[..words]);
        w
    };
    let weights: Vec<f64> = (0..c.edge_count()).map(|e| l.get(e)).collect();

    // partition the high generators across tasks; each task walks the low
    // generators in Gray order
    let split = if m <= 16 { 0 } else { 6.min(m) };
    let low = m - split;
    let tasks: Vec<u64> = (0..(1u64 << split)).collect();
    let results: Vec<Best> = tasks
        .par_iter()
        .map(|&prefix| {
            let mut z = start.clone();
            for b in 0..split {
                if prefix >> b & 1 == 1 {
                    for &(e, _) in &gens[low + b].edges {
                        z[(e >> 6) as usize] ^= 1u64 << (e & 63);
                    }
                }
            }
            gray_scan(&mut z, &gens[..low], &weights)
        })
        .collect();

    let best = results
        .into_iter()
        .reduce(|a, b| match a.weight.total_cmp(&b.weight) {
            std::cmp::Ordering::Less => a,
            std::cmp::Ordering::Greater => b,
            std::cmp::Ordering::Equal => {
                if lex_le(&a.bits, &b.bits) {
                    a
                } else {
                    b
                }
            }
        })
        .expect("at least one task");

    let mut argmin = c.empty_chain(1);
    for e in 0..c.edge_count() {
        if best.bits[e >> 6] >> (e & 63) & 1 == 1 {
            argmin.toggle(e);
        }
    }
    Ok(CosetMin { weight: best.weight, argmin, enumerated: 1u64 << m })
}

fn exact_weight(z: &[u64], weights: &[f64]) -> f64 {
    let mut total = 0.0;
    for (wi, &word) in z.iter().enumerate() {
        let mut w = word;
        while w != 0 {
            let b = w.trailing_zeros() as usize;
            total += weights[wi * 64 + b];
            w &= w - 1;
        }
    }
    total
}

/// True when `a` precedes `b` in the coordinate-lexicographic order (at the
/// lowest differing bit, unset sorts first).
fn lex_le(a: &[u64], b: &[u64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        let d = x ^ y;
        if d != 0 {
            return x & (1 << d.trailing_zeros()) == 0;
        }
    }
    true
}

/// Walks all combinations of `gens` in Gray order starting from `z`.
/// The running weight is re-synchronized on every improvement and
/// periodically, so accumulated float drift cannot hide the optimum.
fn gray_scan(z: &mut [u64], gens: &[Generator], weights: &[f64]) -> Best {
    const SLACK: f64 = 1e-9;
    const RESYNC: u64 = 1 << 22;
    let mut running = exact_weight(z, weights);
    let mut best = Best { weight: running, bits: z.to_vec() };
    let steps = 1u64 << gens.len();
    for s in 1..steps {
        let t = s.trailing_zeros() as usize;
        for &(e, w) in &gens[t].edges {
            let word = (e >> 6) as usize;
            let mask = 1u64 << (e & 63);
            z[word] ^= mask;
            if z[word] & mask != 0 {
                running += w;
            } else {
                running -= w;
            }
        }
        if running < best.weight + SLACK {
            let exact = exact_weight(z, weights);
            running = exact;
            if exact < best.weight
                || (exact == best.weight && lex_le(z, &best.bits) && z != &best.bits[..])
            {
                best.weight = exact;
                best.bits.copy_from_slice(z);
            }
        } else if s % RESYNC == 0 {
            running = exact_weight(z, weights);
        }
    }
    best
}

/// Cup-product intersection-form invariants of a closed surface: computes a
/// cocycle basis of the first cohomology by elimination, evaluates the cup
/// product against the sum of all triangles using the global vertex order,
/// and reads off (rank, odd diagonal present).
pub fn cup_form_invariants(c: &SimplicialComplex) -> Result<FormInvariants> {
    if c.dim() != 2 {
        return Err(Error::BadDimension(c.dim()));
    }
    let report = c.verify_closed_pseudomanifold();
    if !report.is_ok() {
        return Err(Error::NonManifold(format!(
            "{} bad ridges, {} components",
            report.bad_ridges.len(),
            report.components
        )));
    }
    // cocycles: kernel of the coboundary into 2-cochains
    let delta1 = c.boundary_matrix(2)?.transpose();
    let cocycles = delta1.kernel_basis();
    // coboundaries: column span of the coboundary out of 0-cochains
    let delta0 = c.boundary_matrix(1)?.transpose();
    let mut span = XorBasis::new();
    for v in 0..delta0.ncols() {
        let mut col = BitVec::zeros(delta0.nrows());
        for e in 0..delta0.nrows() {
            if delta0.get(e, v) {
                col.set(e, true);
            }
        }
        span.insert(col);
    }
    let b1 = crate::homology::betti_z2(c, 1)?;
    let mut h1: Vec<BitVec> = Vec::with_capacity(b1);
    for z in cocycles {
        if h1.len() == b1 {
            break;
        }
        if span.insert(z.clone()) {
            h1.push(z);
        }
    }
    debug_assert_eq!(h1.len(), b1);
    // pair cup products against the fundamental 2-cycle (all triangles)
    let mut form = Z2Matrix::zeros(b1, b1);
    for tri in 0..c.simplex_count(2) {
        let vs = c.simplex_vertices(2, tri);
        let e01 = c.edge_id(vs[0], vs[1]).expect("triangle side");
        let e12 = c.edge_id(vs[1], vs[2]).expect("triangle side");
        for a in 0..b1 {
            if !h1[a].get(e01) {
                continue;
            }
            for b in 0..b1 {
                if h1[b].get(e12) {
                    let cur = form.get(a, b);
                    form.set(a, b, !cur);
                }
            }
        }
    }
    for a in 0..b1 {
        for b in 0..b1 {
            debug_assert_eq!(form.get(a, b), form.get(b, a), "cup pairing must be symmetric");
        }
    }
    Ok(FormInvariants {
        rank: form.rank(),
        has_odd_diagonal: (0..b1).any(|i| form.get(i, i)),
    })
}

/// Invariants of the form induced by the index function on 1-cycles that
/// correspond, in order, to the table's basis cycles (so the matrix is the
/// pairing of the basis with itself).
pub fn index_form_invariants(t: &IndexTable, cycles: &[Chain]) -> Result<FormInvariants> {
    if cycles.len() != t.rank() {
        return Err(Error::DimensionMismatch(format!(
            "{} cycles for a rank-{} table",
            cycles.len(),
            t.rank()
        )));
    }
    let m = index_form_matrix(t, cycles);
    Ok(FormInvariants {
        rank: m.rank(),
        has_odd_diagonal: (0..t.rank()).any(|i| m.get(i, i)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meshes;

    #[test]
    fn bounding_class_minimum_is_empty() {
        let b = meshes::rp2_6().unwrap();
        let l = WeightFunction::unit(&b.complex);
        let mut tri = b.complex.empty_chain(2);
        tri.toggle(0);
        let x = b.complex.boundary_chain(&tri).unwrap();
        let r = brute_min_in_class(&b.complex, &l, &x, 1 << 20).unwrap();
        assert_eq!(r.weight, 0.0);
        assert!(r.argmin.is_zero());
        assert_eq!(r.enumerated, 1 << 9);
    }

    #[test]
    fn projective_plane_generator_minimum_is_three() {
        let b = meshes::rp2_6().unwrap();
        let l = WeightFunction::unit(&b.complex);
        let r = brute_min_in_class(&b.complex, &l, &b.h1_basis[0], 1 << 20).unwrap();
        assert_eq!(r.weight, 3.0);
        assert_eq!(r.argmin.simplex_count(), 3);
    }

    #[test]
    fn torus_meridian_minimum_is_three() {
        let b = meshes::torus_grid(3, 3).unwrap();
        let l = WeightFunction::unit(&b.complex);
        let r = brute_min_in_class(&b.complex, &l, &b.h1_basis[0], 1 << 20).unwrap();
        assert_eq!(r.weight, 3.0);
        assert_eq!(r.enumerated, 1 << 17);
    }

    #[test]
    fn budget_is_enforced() {
        let b = meshes::torus_grid(3, 3).unwrap();
        let l = WeightFunction::unit(&b.complex);
        assert!(matches!(
            brute_min_in_class(&b.complex, &l, &b.h1_basis[0], 1 << 10),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn minimum_is_monotone_in_edge_weights() {
        let b = meshes::rp2_6().unwrap();
        let l = WeightFunction::unit(&b.complex);
        let base = brute_min_in_class(&b.complex, &l, &b.h1_basis[0], 1 << 20).unwrap();
        let e = base.argmin.members().next().unwrap();
        let mut heavier = WeightFunction::unit(&b.complex);
        heavier.set(e, 2.0).unwrap();
        let bumped = brute_min_in_class(&b.complex, &heavier, &b.h1_basis[0], 1 << 20).unwrap();
        assert!(bumped.weight >= base.weight);
    }

    #[test]
    fn cup_invariants_of_bundled_surfaces() {
        let cases = [
            ("sphere_tet", 0, false),
            ("rp2_6", 1, true),
            ("torus_grid:3x3", 2, false),
            ("klein_grid:4x4", 2, true),
            ("genus2_polygon", 4, false),
        ];
        for (name, rank, odd) in cases {
            let b = meshes::bundled(name).unwrap();
            let inv = cup_form_invariants(&b.complex).unwrap();
            assert_eq!(inv, FormInvariants { rank, has_odd_diagonal: odd }, "{name}");
        }
    }

    #[test]
    fn cup_oracle_rejects_non_surfaces() {
        let b = meshes::torus3_grid(3, 3, 3).unwrap();
        assert!(matches!(cup_form_invariants(&b.complex), Err(Error::BadDimension(3))));
    }
}
