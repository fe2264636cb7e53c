//! Finite views of the completed graph and structural comparisons.
//!
//! A window collects the completed graph's vertices with offsets bounded
//! by a degree, together with the unit steps between them, as a colored
//! multigraph. Windows support isomorphism testing against other windows
//! or against the 1-skeleton of an ordinary presentation, and back the
//! rank-1 comparison with the classical construction that glues a chain
//! of new edges onto every vertex that receives nothing.

use std::collections::HashMap;

use crate::degree::Degree;
use crate::presentation::{Presentation, PresentationBuilder, VertexId};
use crate::report::Report;

use super::{ExtError, ExtVertex, Extension};

/// One edge of a finite colored multigraph view.
#[derive(Clone, Debug)]
pub struct SkelEdge {
    pub color: usize,
    pub source: usize,
    pub range: usize,
    pub label: String,
}

/// A finite colored multigraph: the 1-skeleton of a presentation or of a
/// window into a completed graph.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub rank: usize,
    pub labels: Vec<String>,
    pub edges: Vec<SkelEdge>,
}

impl Skeleton {
    pub fn from_presentation(p: &Presentation) -> Skeleton {
        let labels = p.vertices().map(|v| p.vertex_name(v).to_string()).collect();
        let edges = p
            .edge_ids()
            .map(|e| {
                let edge = p.edge(e);
                SkelEdge {
                    color: edge.color,
                    source: edge.source.0,
                    range: edge.range.0,
                    label: edge.name.clone(),
                }
            })
            .collect();
        Skeleton {
            rank: p.rank(),
            labels,
            edges,
        }
    }

    /// The window of the completed graph with offsets bounded by `q`.
    /// Vertices are the window vertices; edges are the degree-one paths
    /// whose source also lies in the window.
    pub fn from_extension(ext: &Extension, q: &Degree) -> Skeleton {
        let verts = ext.window_vertices(q);
        let index: HashMap<ExtVertex, usize> = verts
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let labels = verts.iter().map(|v| ext.vertex_label(v)).collect();
        let mut edges = Vec::new();
        for (vi, v) in verts.iter().enumerate() {
            for color in 0..ext.rank() {
                let unit = Degree::unit(ext.rank(), color);
                for f in ext.paths(v, &unit) {
                    if let Some(&si) = index.get(&ext.source(&f)) {
                        edges.push(SkelEdge {
                            color,
                            source: si,
                            range: vi,
                            label: ext.path_label(&f),
                        });
                    }
                }
            }
        }
        Skeleton {
            rank: ext.rank(),
            labels,
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn multiplicities(&self) -> HashMap<(usize, usize, usize), u32> {
        let mut m = HashMap::new();
        for e in &self.edges {
            *m.entry((e.source, e.range, e.color)).or_insert(0) += 1;
        }
        m
    }

    /// Per-vertex degree signature, refined per color, used to prune the
    /// isomorphism search.
    fn signatures(&self) -> Vec<Vec<u32>> {
        let n = self.vertex_count();
        let mut sig = vec![vec![0u32; 3 * self.rank]; n];
        for e in &self.edges {
            sig[e.range][e.color] += 1;
            sig[e.source][self.rank + e.color] += 1;
            if e.source == e.range {
                sig[e.source][2 * self.rank + e.color] += 1;
            }
        }
        sig
    }

    /// Color-preserving multigraph isomorphism, by backtracking over vertex
    /// assignments with degree-signature pruning.
    pub fn isomorphic(&self, other: &Skeleton) -> bool {
        if self.rank != other.rank
            || self.vertex_count() != other.vertex_count()
            || self.edge_count() != other.edge_count()
        {
            return false;
        }
        let mut per_color_a = vec![0usize; self.rank];
        let mut per_color_b = vec![0usize; self.rank];
        for e in &self.edges {
            per_color_a[e.color] += 1;
        }
        for e in &other.edges {
            per_color_b[e.color] += 1;
        }
        if per_color_a != per_color_b {
            return false;
        }

        let sig_a = self.signatures();
        let sig_b = other.signatures();
        let n = self.vertex_count();
        let mut candidates: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).filter(|&b| sig_a[a] == sig_b[b]).collect())
            .collect();
        if candidates.iter().any(|c| c.is_empty()) {
            return false;
        }
        // Assign the most constrained vertices first.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| candidates[a].len());
        for c in candidates.iter_mut() {
            c.sort_unstable();
        }

        let search = Search {
            rank: self.rank,
            order,
            candidates,
            mult_a: self.multiplicities(),
            mult_b: other.multiplicities(),
        };
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        search.run(0, &mut map, &mut used)
    }
}

/// Immutable context of the isomorphism backtracking.
struct Search {
    rank: usize,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    mult_a: HashMap<(usize, usize, usize), u32>,
    mult_b: HashMap<(usize, usize, usize), u32>,
}

impl Search {
    /// Mapping `a -> b` must preserve edge multiplicities against every
    /// already assigned vertex, in both directions and every color.
    fn consistent(&self, map: &[usize], assigned: &[usize], a: usize, b: usize) -> bool {
        for &u in assigned.iter().chain(std::iter::once(&a)) {
            let w = if u == a { b } else { map[u] };
            for color in 0..self.rank {
                let fwd_a = self.mult_a.get(&(a, u, color)).copied().unwrap_or(0);
                let fwd_b = self.mult_b.get(&(b, w, color)).copied().unwrap_or(0);
                if fwd_a != fwd_b {
                    return false;
                }
                let back_a = self.mult_a.get(&(u, a, color)).copied().unwrap_or(0);
                let back_b = self.mult_b.get(&(w, b, color)).copied().unwrap_or(0);
                if back_a != back_b {
                    return false;
                }
            }
        }
        true
    }

    fn run(&self, pos: usize, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if pos == self.order.len() {
            return true;
        }
        let a = self.order[pos];
        let assigned = &self.order[..pos];
        for &b in &self.candidates[a] {
            if used[b] {
                continue;
            }
            if !self.consistent(map, assigned, a, b) {
                continue;
            }
            map[a] = b;
            used[b] = true;
            if self.run(pos + 1, map, used) {
                return true;
            }
            map[a] = usize::MAX;
            used[b] = false;
        }
        false
    }
}

/// Whether the window of the completion of `ext` at bound `q` is isomorphic,
/// as a colored multigraph, to the 1-skeleton of `other`.
pub fn windows_isomorphic(ext: &Extension, q: &Degree, other: &Presentation) -> bool {
    Skeleton::from_extension(ext, q).isomorphic(&Skeleton::from_presentation(other))
}

/// Names of the chain vertices glued above a vertex that receives nothing.
struct HeadNames {
    // chains[v] lists the new vertex names above v, nearest first.
    chains: Vec<Vec<String>>,
}

fn fresh_name(taken: &mut std::collections::HashSet<String>, base: String) -> String {
    let mut name = base;
    while !taken.insert(name.clone()) {
        name.push('_');
    }
    name
}

/// The classical rank-1 construction: onto every vertex that receives no
/// edge, glue a chain of `bound` new edges so that every vertex of the
/// result receives at least one edge within `bound` steps.
pub fn add_heads(p: &Presentation, bound: u32) -> Result<Presentation, ExtError> {
    Ok(add_heads_named(p, bound)?.0)
}

fn add_heads_named(p: &Presentation, bound: u32) -> Result<(Presentation, HeadNames), ExtError> {
    if p.rank() != 1 {
        return Err(ExtError::Precondition(
            "adding head chains is defined for rank-1 presentations".into(),
        ));
    }
    let mut taken: std::collections::HashSet<String> = p
        .vertices()
        .map(|v| p.vertex_name(v).to_string())
        .chain(p.edge_ids().map(|e| p.edge(e).name.clone()))
        .collect();
    let mut b = PresentationBuilder::new(1);
    for v in p.vertices() {
        b.vertex(p.vertex_name(v));
    }
    for e in p.edge_ids() {
        let edge = p.edge(e);
        b.edge(
            &edge.name,
            edge.color + 1,
            p.vertex_name(edge.source),
            p.vertex_name(edge.range),
        );
    }
    let mut chains = vec![Vec::new(); p.vertex_count()];
    for v in p.vertices() {
        if !p.receives_nothing(v) {
            continue;
        }
        let mut below = p.vertex_name(v).to_string();
        for i in 1..=bound {
            let vname = fresh_name(&mut taken, format!("{}_h{}", p.vertex_name(v), i));
            let ename = fresh_name(&mut taken, format!("{}_he{}", p.vertex_name(v), i));
            b.vertex(&vname);
            b.edge(&ename, 1, &vname, &below);
            chains[v.0].push(vname.clone());
            below = vname;
        }
    }
    let built = b
        .build()
        .map_err(|e| ExtError::Precondition(format!("head construction failed: {}", e)))?;
    Ok((built, HeadNames { chains }))
}

/// Compares the completion of a rank-1 presentation against the head-chain
/// construction, within offset bound `bound`: the window vertices must
/// biject onto the vertices of the chained graph, in-edges must correspond
/// at every vertex whose in-edges all lie in the window, and path counts
/// from original vertices must agree at every length up to the bound.
pub fn compare_add_heads(p: &Presentation, bound: u32) -> Result<Report, ExtError> {
    let (gamma, heads) = add_heads_named(p, bound)?;
    let ext = Extension::new(p);
    let q = Degree::new(vec![bound]);
    let wv = ext.window_vertices(&q);

    let mut report = Report::new();

    // Vertex bijection: Base(v) -> v, New(v, i) -> i-th chain vertex over v.
    let mut phi: HashMap<ExtVertex, VertexId> = HashMap::new();
    let mut bijection: Result<String, String> = Ok(String::new());
    for v in &wv {
        let target = match v {
            ExtVertex::Base(w) => gamma.vertex(p.vertex_name(*w)),
            ExtVertex::New { base, offset } => {
                let i = offset.get(0) as usize;
                heads.chains[base.0].get(i - 1).and_then(|n| gamma.vertex(n))
            }
        };
        match target {
            Some(t) => {
                phi.insert(v.clone(), t);
            }
            None => {
                bijection = Err(format!(
                    "window vertex {} has no counterpart in the chained graph",
                    ext.vertex_label(v)
                ));
                break;
            }
        }
    }
    if bijection.is_ok() {
        let distinct: std::collections::HashSet<VertexId> = phi.values().copied().collect();
        if distinct.len() != wv.len() {
            bijection = Err("window vertices map onto fewer chained vertices".into());
        } else if wv.len() != gamma.vertex_count() {
            bijection = Err(format!(
                "window has {} vertices, chained graph has {}",
                wv.len(),
                gamma.vertex_count()
            ));
        } else {
            bijection = Ok(format!(
                "{} window vertices match the chained graph exactly",
                wv.len()
            ));
        }
    }
    let bijection_ok = bijection.is_ok();
    report.add("head-vertex-bijection", bijection);

    // In-edge correspondence at interior vertices: those whose completed
    // in-edges all have sources inside the window. The outermost chain
    // vertices are frontier, not interior, and are rightly skipped.
    let mut edge_outcome: Result<String, String> = Ok(String::new());
    let mut interior = 0usize;
    if bijection_ok {
        'outer: for v in &wv {
            let unit = Degree::unit(1, 0);
            let mut sources = Vec::new();
            let mut all_inside = true;
            for f in ext.paths(v, &unit) {
                match phi.get(&ext.source(&f)) {
                    Some(&s) => sources.push(gamma.vertex_name(s).to_string()),
                    None => {
                        all_inside = false;
                        break;
                    }
                }
            }
            if !all_inside {
                continue;
            }
            interior += 1;
            let mut expected: Vec<String> = gamma
                .received(phi[v], 0)
                .iter()
                .map(|&e| gamma.vertex_name(gamma.edge(e).source).to_string())
                .collect();
            sources.sort();
            expected.sort();
            if sources != expected {
                edge_outcome = Err(format!(
                    "in-edges differ at {}: window sees [{}], chained graph sees [{}]",
                    ext.vertex_label(v),
                    sources.join(", "),
                    expected.join(", ")
                ));
                break 'outer;
            }
        }
        if edge_outcome.is_ok() {
            edge_outcome = Ok(format!(
                "in-edge multisets agree at {} interior vertices",
                interior
            ));
        }
    } else {
        edge_outcome = Err("skipped: no vertex bijection".into());
    }
    report.add("head-edge-correspondence", edge_outcome);

    // Path counts from original vertices agree at every length up to the
    // bound: a window path of length n from an original vertex overshoots
    // by at most n <= bound, so nothing is cut off on either side.
    let mut count_outcome: Result<String, String> = Ok(String::new());
    let mut checked = 0usize;
    if bijection_ok {
        'outer2: for v in p.vertices() {
            for n in 1..=bound {
                let d = Degree::new(vec![n]);
                let here = ext.paths(&ExtVertex::Base(v), &d).len();
                let there = gamma
                    .paths(phi[&ExtVertex::Base(v)], &d)
                    .len();
                checked += 1;
                if here != there {
                    count_outcome = Err(format!(
                        "{} paths of length {} at {} in the window, {} in the chained graph",
                        here,
                        n,
                        p.vertex_name(v),
                        there
                    ));
                    break 'outer2;
                }
            }
        }
        if count_outcome.is_ok() {
            count_outcome = Ok(format!("{} vertex/length pairs agree", checked));
        }
    } else {
        count_outcome = Err("skipped: no vertex bijection".into());
    }
    report.add("head-path-counts", count_outcome);

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demos;
    use crate::presentation::omega;

    fn deg(c: &[u32]) -> Degree {
        Degree::new(c.to_vec())
    }

    #[test]
    fn window_skeleton_of_filled_square_is_a_grid() {
        let p = demos::example42();
        let ext = Extension::new(&p);
        let skel = Skeleton::from_extension(&ext, &deg(&[2, 2]));
        assert_eq!(skel.vertex_count(), 16);
        assert_eq!(skel.edge_count(), 24);
        let grid = omega(&deg(&[3, 3]));
        assert!(windows_isomorphic(&ext, &deg(&[2, 2]), &grid));
    }

    #[test]
    fn window_skeleton_of_two_sheets_is_not_a_grid() {
        let p = demos::example43();
        let ext = Extension::new(&p);
        assert!(!windows_isomorphic(&ext, &deg(&[2, 2]), &omega(&deg(&[3, 3]))));
    }

    #[test]
    fn isomorphism_detects_relabeling_and_rejects_redirection() {
        let p = demos::example42();
        let a = Skeleton::from_presentation(&p);
        // Same square with scrambled names.
        let mut b = PresentationBuilder::new(2);
        for name in ["x", "y", "z", "w"] {
            b.vertex(name);
        }
        b.edge("p", 1, "y", "x")
            .edge("q", 1, "w", "z")
            .edge("r", 2, "z", "x")
            .edge("s", 2, "w", "y");
        let renamed = b.build().unwrap();
        assert!(a.isomorphic(&Skeleton::from_presentation(&renamed)));

        // Redirect one edge: same counts, different shape.
        let mut c = PresentationBuilder::new(2);
        for name in ["x", "y", "z", "w"] {
            c.vertex(name);
        }
        c.edge("p", 1, "y", "x")
            .edge("q", 1, "w", "z")
            .edge("r", 2, "z", "x")
            .edge("s", 2, "w", "x");
        let redirected = c.build().unwrap();
        assert!(!a.isomorphic(&Skeleton::from_presentation(&redirected)));
    }

    #[test]
    fn isomorphism_respects_colors() {
        // Two parallel edges of one color vs one edge of each color.
        let mut a = PresentationBuilder::new(2);
        a.vertex("u").vertex("v");
        a.edge("e", 1, "u", "v").edge("f", 1, "u", "v");
        let one_color = a.build().unwrap();
        let mut b = PresentationBuilder::new(2);
        b.vertex("u").vertex("v");
        b.edge("e", 1, "u", "v").edge("f", 2, "u", "v");
        let two_colors = b.build().unwrap();
        assert!(!Skeleton::from_presentation(&one_color)
            .isomorphic(&Skeleton::from_presentation(&two_colors)));
    }

    #[test]
    fn add_heads_attaches_chains_at_silent_vertices() {
        let p = demos::example41a();
        let gamma = add_heads(&p, 3).unwrap();
        // w receives nothing and gains a 3-chain; v receives the edge a.
        assert_eq!(gamma.vertex_count(), 2 + 3);
        assert_eq!(gamma.edge_count(), 1 + 3);
        let silent: Vec<_> = gamma
            .vertices()
            .filter(|&v| gamma.receives_nothing(v))
            .collect();
        assert_eq!(silent.len(), 1, "only the chain end stays silent");
    }

    #[test]
    fn add_heads_requires_rank_one() {
        let p = demos::example42();
        assert!(matches!(
            add_heads(&p, 2),
            Err(ExtError::Precondition(_))
        ));
    }

    #[test]
    fn completion_matches_head_chains_on_rank_one_demos() {
        for name in ["example41a", "example41b"] {
            let p = demos::by_name(name).unwrap();
            let report = compare_add_heads(&p, 3).unwrap();
            assert!(report.pass(), "{}: {}", name, report.render());
        }
    }

    #[test]
    fn head_comparison_counts_interior_vertices() {
        let p = demos::example41a();
        let report = compare_add_heads(&p, 2).unwrap();
        assert!(report.pass(), "{}", report.render());
        let detail = &report.find("head-edge-correspondence").unwrap().detail;
        // Interior vertices: v, w, and the first chain vertex; the chain end
        // has an in-edge beyond the window and is frontier.
        assert!(detail.contains("3 interior"), "detail: {}", detail);
    }
}
