//! Text formats: `smesh` meshes, chain files, and weight files.
//!
//! smesh grammar: line 1 `dim n`; line 2 `vertices N`; then one top simplex
//! per line as n+1 whitespace-separated vertex labels. `#` starts a comment.
//! Labels may be arbitrary tokens; they are remapped to dense 0-based ids
//! (numeric labels sort numerically, otherwise lexicographically) and the
//! mapping is reported. Serialization always emits the canonical dense form,
//! so parse-serialize round-trips are exact on canonical files.

use std::collections::BTreeMap;

use crate::complex::{Chain, SimplicialComplex, VertexId};
use crate::covering::MaterializedCover;
use crate::error::{Error, Result};
use crate::mincycle::WeightFunction;

/// Dense id to original label mapping produced by the parser.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap {
    labels: Vec<String>,
    by_label: BTreeMap<String, u32>,
}

impl LabelMap {
    fn new(labels: Vec<String>) -> Self {
        let by_label = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i as u32))
            .collect();
        LabelMap { labels, by_label }
    }

    /// Identity map over dense ids, for meshes built in memory.
    pub fn identity(vertex_count: usize) -> Self {
        Self::new((0..vertex_count).map(|i| i.to_string()).collect())
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.index()]
    }

    pub fn id(&self, label: &str) -> Option<VertexId> {
        self.by_label.get(label).copied().map(VertexId)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// True when every label is just its dense id.
    pub fn is_identity(&self) -> bool {
        self.labels.iter().enumerate().all(|(i, l)| l == &i.to_string())
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses an smesh file. Closedness (and strong connectivity) is enforced
/// unless `allow_open` is set.
pub fn parse_mesh(text: &str, allow_open: bool) -> Result<(SimplicialComplex, LabelMap)> {
    let mut lines = content_lines(text);
    let (ln, dim_line) = lines.next().ok_or_else(|| parse_err(1, "missing `dim n` line"))?;
    let n: usize = match dim_line.split_whitespace().collect::<Vec<_>>()[..] {
        ["dim", d] => d.parse().map_err(|_| parse_err(ln, format!("bad dimension {d:?}")))?,
        _ => return Err(parse_err(ln, "expected `dim n`")),
    };
    if n == 0 {
        return Err(parse_err(ln, "dimension must be positive"));
    }
    let (ln, vert_line) =
        lines.next().ok_or_else(|| parse_err(ln, "missing `vertices N` line"))?;
    let declared: usize = match vert_line.split_whitespace().collect::<Vec<_>>()[..] {
        ["vertices", v] => {
            v.parse().map_err(|_| parse_err(ln, format!("bad vertex count {v:?}")))?
        }
        _ => return Err(parse_err(ln, "expected `vertices N`")),
    };
    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
    let mut seen: BTreeMap<String, ()> = BTreeMap::new();
    for (ln, line) in lines {
        let toks: Vec<String> = line.split_whitespace().map(str::to_string).collect();
        if toks.len() != n + 1 {
            return Err(parse_err(
                ln,
                format!("top simplex needs {} labels under dim {n}, got {}", n + 1, toks.len()),
            ));
        }
        for t in &toks {
            seen.insert(t.clone(), ());
        }
        rows.push((ln, toks));
    }
    if rows.is_empty() {
        return Err(parse_err(1, "no top simplices"));
    }
    if seen.len() != declared {
        return Err(parse_err(
            1,
            format!("declared {declared} vertices, found {} distinct labels", seen.len()),
        ));
    }
    // dense remap: numeric when all labels parse as distinct integers
    let mut labels: Vec<String> = seen.into_keys().collect();
    let numeric: Option<Vec<u64>> = labels.iter().map(|l| l.parse::<u64>().ok()).collect();
    match numeric {
        Some(nums) if nums.len() == labels.len() => {
            let mut pairs: Vec<(u64, String)> = nums.into_iter().zip(labels).collect();
            pairs.sort();
            labels = pairs.into_iter().map(|(_, l)| l).collect();
        }
        _ => labels.sort(),
    }
    let map = LabelMap::new(labels);
    let mut tops = Vec::with_capacity(rows.len());
    for (ln, toks) in rows {
        let mut s: Vec<VertexId> = Vec::with_capacity(toks.len());
        for t in &toks {
            s.push(map.id(t).expect("label collected above"));
        }
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(parse_err(ln, format!("repeated vertex in {toks:?}")));
        }
        tops.push(s);
    }
    let complex = SimplicialComplex::from_top_simplices(n, &tops)?;
    if !allow_open {
        let report = complex.verify_closed_pseudomanifold();
        if !report.is_ok() {
            return Err(Error::NonManifold(format!(
                "{} ridges with coface count != 2, {} components",
                report.bad_ridges.len(),
                report.components
            )));
        }
    }
    Ok((complex, map))
}

/// Canonical smesh serialization with dense numeric labels.
pub fn serialize_mesh(c: &SimplicialComplex) -> String {
    let n = c.dim();
    let mut out = String::new();
    out.push_str(&format!("dim {n}\n"));
    out.push_str(&format!("vertices {}\n", c.vertex_count()));
    for id in 0..c.simplex_count(n) {
        let vs = c.simplex_vertices(n, id);
        let line: Vec<String> = vs.iter().map(|v| v.0.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// smesh serialization of a materialized cover with `base@sheet-bits` labels.
pub fn serialize_cover(mc: &MaterializedCover) -> String {
    let c = &mc.complex;
    let n = c.dim();
    let mut out = String::new();
    out.push_str(&format!("dim {n}\n"));
    out.push_str(&format!("vertices {}\n", c.vertex_count()));
    for id in 0..c.simplex_count(n) {
        let line: Vec<String> = c
            .simplex_vertices(n, id)
            .iter()
            .map(|&w| mc.fibers[w.index()].to_string())
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a chain file: one simplex per line as vertex labels, dimension
/// inferred from the arity of the first line.
pub fn parse_chain(text: &str, c: &SimplicialComplex, map: &LabelMap) -> Result<Chain> {
    let mut dim: Option<usize> = None;
    let mut simplices: Vec<Vec<VertexId>> = Vec::new();
    for (ln, line) in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match dim {
            None => {
                if toks.is_empty() || toks.len() > c.dim() + 1 {
                    return Err(parse_err(ln, format!("bad simplex arity {}", toks.len())));
                }
                dim = Some(toks.len() - 1);
            }
            Some(d) => {
                if toks.len() != d + 1 {
                    return Err(parse_err(
                        ln,
                        format!("expected {} labels per line, got {}", d + 1, toks.len()),
                    ));
                }
            }
        }
        let mut s = Vec::with_capacity(toks.len());
        for t in &toks {
            s.push(map.id(t).ok_or_else(|| parse_err(ln, format!("unknown label {t:?}")))?);
        }
        simplices.push(s);
    }
    let dim = dim.ok_or_else(|| parse_err(1, "empty chain file"))?;
    c.chain_from_simplices(dim, &simplices)
}

/// One simplex per line, dense ids, sorted by simplex id.
pub fn serialize_chain(c: &SimplicialComplex, chain: &Chain) -> String {
    let mut out = String::new();
    for id in chain.members() {
        let line: Vec<String> = c
            .simplex_vertices(chain.dim(), id)
            .iter()
            .map(|v| v.0.to_string())
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a weight file of `u v weight` lines; edges not mentioned default
/// to 1.0. Negative, non-finite, repeated, or unknown edges are rejected.
pub fn parse_weights(text: &str, c: &SimplicialComplex, map: &LabelMap) -> Result<WeightFunction> {
    let mut weights = vec![1.0f64; c.edge_count()];
    let mut seen = vec![false; c.edge_count()];
    for (ln, line) in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [a, b, w] = toks[..] else {
            return Err(parse_err(ln, "expected `u v weight`"));
        };
        let va = map.id(a).ok_or_else(|| parse_err(ln, format!("unknown label {a:?}")))?;
        let vb = map.id(b).ok_or_else(|| parse_err(ln, format!("unknown label {b:?}")))?;
        let e = c
            .edge_id(va, vb)
            .ok_or_else(|| parse_err(ln, format!("no edge between {a:?} and {b:?}")))?;
        if seen[e] {
            return Err(parse_err(ln, format!("edge {a} {b} given twice")));
        }
        seen[e] = true;
        let w: f64 = w.parse().map_err(|_| parse_err(ln, format!("bad weight {w:?}")))?;
        if !w.is_finite() || w < 0.0 {
            return Err(parse_err(ln, format!("negative or non-finite weight {w}")));
        }
        weights[e] = w;
    }
    WeightFunction::from_weights(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::betti_z2;
    use crate::meshes;

    #[test]
    fn canonical_round_trip_on_bundled_meshes() {
        for b in meshes::acceptance_meshes() {
            let text = serialize_mesh(&b.complex);
            let (parsed, map) = parse_mesh(&text, false).unwrap();
            assert!(map.is_identity(), "{}", b.name);
            assert_eq!(serialize_mesh(&parsed), text, "{}", b.name);
        }
    }

    #[test]
    fn arbitrary_labels_are_remapped_with_mapping_reported() {
        let text = "dim 2\nvertices 4\na b c\na b d\na c d\nb c d\n";
        let (c, map) = parse_mesh(text, false).unwrap();
        assert_eq!(c.vertex_count(), 4);
        assert_eq!(map.labels(), &["a", "b", "c", "d"]);
        assert!(!map.is_identity());
        assert_eq!(c.euler_characteristic(), 2);
    }

    #[test]
    fn numeric_labels_sort_numerically() {
        let text = "dim 2\nvertices 4\n0 2 10\n0 2 30\n0 10 30\n2 10 30\n";
        let (_, map) = parse_mesh(text, false).unwrap();
        assert_eq!(map.labels(), &["0", "2", "10", "30"]);
    }

    #[test]
    fn arity_error_carries_line_number() {
        let text = "dim 2\nvertices 4\n0 1 2\n0 1 2 3\n";
        match parse_mesh(text, true) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn open_complex_needs_allow_open() {
        let text = "dim 2\nvertices 3\n0 1 2\n";
        assert!(matches!(parse_mesh(text, false), Err(Error::NonManifold(_))));
        assert!(parse_mesh(text, true).is_ok());
    }

    #[test]
    fn reparsed_mesh_has_same_homology() {
        let b = meshes::rp2_6().unwrap();
        let (c, _) = parse_mesh(&serialize_mesh(&b.complex), false).unwrap();
        assert_eq!(betti_z2(&c, 1).unwrap(), 1);
    }

    #[test]
    fn chain_round_trip() {
        let b = meshes::torus_grid(3, 3).unwrap();
        let map = LabelMap::identity(b.complex.vertex_count());
        let text = serialize_chain(&b.complex, &b.h1_basis[0]);
        let parsed = parse_chain(&text, &b.complex, &map).unwrap();
        assert_eq!(&parsed, &b.h1_basis[0]);
    }

    #[test]
    fn chain_with_unknown_simplex_rejected() {
        let b = meshes::sphere_tet().unwrap();
        let map = LabelMap::identity(4);
        assert!(matches!(
            parse_chain("0 9\n", &b.complex, &map),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn weight_file_defaults_and_rejections() {
        let b = meshes::sphere_tet().unwrap();
        let map = LabelMap::identity(4);
        let w = parse_weights("0 1 2.5\n", &b.complex, &map).unwrap();
        let e01 = b.complex.edge_id(VertexId(0), VertexId(1)).unwrap();
        let e02 = b.complex.edge_id(VertexId(0), VertexId(2)).unwrap();
        assert_eq!(w.get(e01), 2.5);
        assert_eq!(w.get(e02), 1.0);
        assert!(parse_weights("0 1 -2\n", &b.complex, &map).is_err());
        assert!(parse_weights("0 1 1\n1 0 2\n", &b.complex, &map).is_err());
        assert!(parse_weights("0 9 1\n", &b.complex, &map).is_err());
    }

    #[test]
    fn cover_export_labels_carry_sheets() {
        let b = meshes::rp2_6().unwrap();
        let t = crate::index::IndexTable::build(&b.complex, &b.hn1_basis).unwrap();
        let mc = crate::covering::materialize_cover(&t, &b.complex, 1 << 20).unwrap();
        let text = serialize_cover(&mc);
        assert!(text.contains('@'));
        let (parsed, _) = parse_mesh(&text, false).unwrap();
        assert_eq!(parsed.vertex_count(), 12);
        assert_eq!(parsed.euler_characteristic(), 2);
    }
}
