//! Degree-based analysis of a presentation: complete paths, sources,
//! local convexity, exhaustive sets, and flatness.
//!
//! A complete path at `v` is one that ends at a vertex receiving no edge
//! of any color; these play the role of maximal histories and index the
//! matrix model in [`crate::ck`]. Flatness of a vertex in a set of
//! directions asks for a complete path that never moves in those
//! directions; it controls which displaced vertices exist after source
//! removal in [`crate::desingularize`].

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::degree::{ColorSet, Degree, ExtendedDegree};
use crate::path::{Path, PathError};
use crate::presentation::{Presentation, VertexId};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("presentation has a directed cycle in its 1-skeleton")]
    Cyclic,
    #[error("path `{0}` does not have the required range vertex")]
    NotAtVertex(String),
    #[error("the path set is empty")]
    EmptySet,
    #[error("bound {bound} is smaller than the joined degree {needed} of the set")]
    BoundTooSmall { bound: Degree, needed: Degree },
    #[error("path `{0}` does not end at a vertex receiving nothing")]
    NotBoundary(String),
    #[error(transparent)]
    Path(#[from] PathError),
}

/// A finite path whose source receives no edges of any color. Such paths
/// cannot be extended and represent the finite points of the boundary.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BoundaryPath {
    path: Path,
}

impl BoundaryPath {
    /// Wrap a path after checking that its source receives nothing.
    pub fn new(p: &Presentation, path: Path) -> Result<BoundaryPath, AnalysisError> {
        if p.receives_nothing(p.path_source(&path)) {
            Ok(BoundaryPath { path })
        } else {
            Err(AnalysisError::NotBoundary(p.path_label(&path)))
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn finite_degree(&self) -> Degree {
        self.path.degree()
    }

    pub fn degree(&self) -> ExtendedDegree {
        ExtendedDegree::finite(&self.path.degree())
    }
}

/// Witness that local convexity fails: two unit steps at `vertex` where
/// the source of `first` cannot take a step in the color of `second`.
#[derive(Clone, Debug)]
pub struct ConvexityWitness {
    pub vertex: String,
    pub first: String,
    pub second: String,
    pub missing_color: usize,
}

impl fmt::Display for ConvexityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at {}: edges {} and {} meet, but the source of {} receives no color-{} edge",
            self.vertex,
            self.first,
            self.second,
            self.first,
            self.missing_color + 1
        )
    }
}

/// Minimal common extensions of `f` and `g`: pairs `(alpha, beta)` with
/// `f.alpha = g.beta` of degree `d(f) v d(g)`. Empty when the ranges
/// differ or no common extension exists.
pub fn minimal_extensions(
    p: &Presentation,
    f: &Path,
    g: &Path,
) -> Result<Vec<(Path, Path)>, PathError> {
    if f.range() != g.range() {
        return Ok(Vec::new());
    }
    let join = f.degree().join(&g.degree());
    let mut out = Vec::new();
    for alpha in p.paths(p.path_source(f), &join.sub(&f.degree())) {
        let total = p.compose(f, &alpha)?;
        let (prefix, beta) = p.split(&total, &g.degree())?;
        if prefix == *g {
            out.push((alpha, beta));
        }
    }
    out.sort();
    Ok(out)
}

/// Decide whether some power box at `v` is empty: `v` admits no path of
/// degree `(B,..,B)` where `B` is the number of vertices. Pigeonhole on
/// color chains makes this exact: once a direction dies it stays dead,
/// and a direction that survives `B` steps cycles forever.
pub fn is_source(p: &Presentation, v: VertexId) -> bool {
    let b = p.vertex_count();
    let mut current: HashSet<VertexId> = HashSet::from([v]);
    for color in 0..p.rank() {
        for _ in 0..b {
            let mut next = HashSet::new();
            for &u in &current {
                for &e in p.received(u, color) {
                    next.insert(p.edge(e).source);
                }
            }
            current = next;
            if current.is_empty() {
                return true;
            }
        }
    }
    false
}

/// Reference search for [`is_source`]: scan every degree in the box
/// `(cap,..,cap)` for an empty path set. Exponentially wasteful but
/// directly matches the definition; used to cross-check the fast test.
pub fn naive_source_search(p: &Presentation, v: VertexId, cap: u32) -> bool {
    let box_deg = Degree::new(vec![cap; p.rank()]);
    let mut table: HashMap<Degree, HashSet<VertexId>> = HashMap::new();
    table.insert(Degree::zero(p.rank()), HashSet::from([v]));
    for n in box_deg.descents() {
        if n.is_zero() {
            continue;
        }
        let color = (0..p.rank()).find(|&c| n.get(c) > 0).unwrap();
        let prev = n.sub(&Degree::unit(p.rank(), color));
        let mut cur = HashSet::new();
        for &u in table.get(&prev).expect("descents enumerate predecessors first") {
            for &e in p.received(u, color) {
                cur.insert(p.edge(e).source);
            }
        }
        if cur.is_empty() {
            return true;
        }
        table.insert(n, cur);
    }
    table.values().any(|s| s.is_empty())
}

/// Check local convexity: whenever unit steps of two different colors
/// leave the same vertex, each step's source must admit a step in the
/// other color. Returns the first violation in declaration order.
pub fn local_convexity(p: &Presentation) -> Result<(), ConvexityWitness> {
    for v in p.vertices() {
        for i in 0..p.rank() {
            for j in 0..p.rank() {
                if i == j {
                    continue;
                }
                for &e in p.received(v, i) {
                    if p.received(v, j).is_empty() {
                        continue;
                    }
                    let src = p.edge(e).source;
                    if p.received(src, j).is_empty() {
                        let other = p.received(v, j)[0];
                        return Err(ConvexityWitness {
                            vertex: p.vertex_name(v).to_string(),
                            first: p.edge(e).name.clone(),
                            second: p.edge(other).name.clone(),
                            missing_color: j,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn is_locally_convex(p: &Presentation) -> bool {
    local_convexity(p).is_ok()
}

/// Bounded exhaustivity: every degree-limited complete path at `v` of
/// degree at most `bound` must share a common extension with some member
/// of `set`. Requires `set` nonempty, based at `v`, with joined degree
/// at most `bound`.
pub fn is_exhaustive(
    p: &Presentation,
    v: VertexId,
    set: &[Path],
    bound: &Degree,
) -> Result<bool, AnalysisError> {
    if set.is_empty() {
        return Err(AnalysisError::EmptySet);
    }
    let mut needed = Degree::zero(p.rank());
    for f in set {
        if f.range() != v {
            return Err(AnalysisError::NotAtVertex(p.path_label(f)));
        }
        needed = needed.join(&f.degree());
    }
    if !needed.leq(bound) {
        return Err(AnalysisError::BoundTooSmall {
            bound: bound.clone(),
            needed,
        });
    }
    for mu in p.paths_leq(v, bound) {
        let mut met = false;
        for f in set {
            if !minimal_extensions(p, f, &mu)?.is_empty() {
                met = true;
                break;
            }
        }
        if !met {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True when the 1-skeleton has no directed cycle.
pub fn is_acyclic(p: &Presentation) -> bool {
    // 0 = unseen, 1 = on stack, 2 = done.
    let mut state = vec![0u8; p.vertex_count()];
    fn visit(p: &Presentation, u: VertexId, state: &mut [u8]) -> bool {
        state[u.0] = 1;
        for color in 0..p.rank() {
            for &e in p.received(u, color) {
                let w = p.edge(e).source;
                match state[w.0] {
                    0 => {
                        if !visit(p, w, state) {
                            return false;
                        }
                    }
                    1 => return false,
                    _ => {}
                }
            }
        }
        state[u.0] = 2;
        true
    }
    for v in p.vertices() {
        if state[v.0] == 0 && !visit(p, v, &mut state) {
            return false;
        }
    }
    true
}

/// All complete paths with range `v`, sorted canonically. Requires an
/// acyclic presentation so that the set is finite.
pub fn boundary_paths(p: &Presentation, v: VertexId) -> Result<Vec<BoundaryPath>, AnalysisError> {
    if !is_acyclic(p) {
        return Err(AnalysisError::Cyclic);
    }
    let b = p.vertex_count() as u32;
    let cap = Degree::new(vec![b.saturating_sub(1); p.rank()]);
    let mut out = Vec::new();
    for n in cap.descents() {
        // Any path in an acyclic skeleton visits distinct vertices.
        if n.total() + 1 > b {
            continue;
        }
        for f in p.paths(v, &n) {
            if p.receives_nothing(p.path_source(&f)) {
                out.push(BoundaryPath { path: f });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Complete paths over all vertices, sorted canonically.
pub fn all_boundary_paths(p: &Presentation) -> Result<Vec<BoundaryPath>, AnalysisError> {
    let mut out = Vec::new();
    for v in p.vertices() {
        out.extend(boundary_paths(p, v)?);
    }
    out.sort();
    Ok(out)
}

fn reach(p: &Presentation, start: VertexId, allowed: &ColorSet) -> HashSet<VertexId> {
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for color in allowed.iter() {
            for &e in p.received(u, color) {
                let w = p.edge(e).source;
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
    }
    seen
}

/// Flatness of `v` away from the colors in `avoid`: does some complete
/// path (finite or pumped through cycles) leave `v` without ever moving
/// in an avoided direction?
///
/// Acyclic case, exact: reach a vertex receiving nothing along edges of
/// the remaining colors. Cyclic case: for each split of the remaining
/// colors into finished and unfinished ones, walk freely away from the
/// avoided colors, then demand that every vertex from the commit point on
/// receives neither avoided nor finished colors, ending either at a full
/// sink (nothing unfinished) or inside a strongly connected piece whose
/// internal edges cover every unfinished color. For rank >= 3 the walk
/// only inspects a staircase of the underlying grid, so the cyclic search
/// is validated against [`flat_bruteforce`] on the built-in examples.
pub fn flat(p: &Presentation, v: VertexId, avoid: &ColorSet) -> bool {
    assert_eq!(avoid.rank(), p.rank());
    if is_acyclic(p) {
        return reach(p, v, &avoid.complement())
            .iter()
            .any(|&u| p.receives_nothing(u));
    }
    flat_search(p, v, avoid)
}

fn flat_search(p: &Presentation, v: VertexId, avoid: &ColorSet) -> bool {
    let phase1 = reach(p, v, &avoid.complement());
    for finished in avoid.subsets_of_complement() {
        let blocked = avoid.union(&finished);
        let unfinished = blocked.complement();
        let clean =
            |u: VertexId| blocked.iter().all(|c| p.received(u, c).is_empty());
        if unfinished.is_empty() {
            if phase1.iter().any(|&u| p.receives_nothing(u)) {
                return true;
            }
            continue;
        }
        // Phase 2: walk only unfinished colors through clean vertices.
        let entries: Vec<VertexId> = phase1.iter().copied().filter(|&u| clean(u)).collect();
        let mut seen: HashSet<VertexId> = entries.iter().copied().collect();
        let mut stack = entries;
        while let Some(u) = stack.pop() {
            for color in unfinished.iter() {
                for &e in p.received(u, color) {
                    let w = p.edge(e).source;
                    if clean(w) && seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
        }
        if seen.is_empty() {
            continue;
        }
        // A closed walk covering all unfinished colors exists exactly
        // when one strongly connected component's internal edges do.
        let nodes: Vec<VertexId> = {
            let mut n: Vec<VertexId> = seen.iter().copied().collect();
            n.sort();
            n
        };
        let mut assigned: HashSet<VertexId> = HashSet::new();
        for &u in &nodes {
            if assigned.contains(&u) {
                continue;
            }
            let fwd = reach_in(p, u, &seen, &unfinished, false);
            let bwd = reach_in(p, u, &seen, &unfinished, true);
            let scc: HashSet<VertexId> = fwd.intersection(&bwd).copied().collect();
            let mut internal_colors = ColorSet::empty(p.rank());
            for &x in &scc {
                for color in unfinished.iter() {
                    for &e in p.received(x, color) {
                        if scc.contains(&p.edge(e).source) {
                            internal_colors.insert(color);
                        }
                    }
                }
            }
            if unfinished.is_subset(&internal_colors) {
                return true;
            }
            assigned.extend(scc);
        }
    }
    false
}

/// Reachability inside a vertex set along the given colors; `backward`
/// follows edges from source to range instead.
fn reach_in(
    p: &Presentation,
    start: VertexId,
    inside: &HashSet<VertexId>,
    colors: &ColorSet,
    backward: bool,
) -> HashSet<VertexId> {
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        if backward {
            // Edges whose source is u, range inside.
            for e in p.edge_ids() {
                let edge = p.edge(e);
                if colors.contains(edge.color)
                    && edge.source == u
                    && inside.contains(&edge.range)
                    && seen.insert(edge.range)
                {
                    stack.push(edge.range);
                }
            }
        } else {
            for color in colors.iter() {
                for &e in p.received(u, color) {
                    let w = p.edge(e).source;
                    if inside.contains(&w) && seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
        }
    }
    seen
}

/// Literal bounded enumeration behind [`flat`]: scan every path from `v`
/// that avoids the given colors up to degree `(cap,..,cap)`, accepting a
/// path into a vertex receiving nothing, or a committed tail that hits
/// the cap wall in every unfinished direction through vertices clean of
/// the avoided and finished colors. With `cap >= 2 * |vertices|` a wall
/// hit guarantees a pumpable cycle.
pub fn flat_bruteforce(p: &Presentation, v: VertexId, avoid: &ColorSet, cap: u32) -> bool {
    let mut free_box = vec![0u32; p.rank()];
    for c in avoid.complement().iter() {
        free_box[c] = cap;
    }
    let free_box = Degree::new(free_box);
    for n in free_box.descents() {
        for f1 in p.paths(v, &n) {
            let u = p.path_source(&f1);
            if p.receives_nothing(u) {
                return true;
            }
            for finished in avoid.subsets_of_complement() {
                let blocked = avoid.union(&finished);
                let unfinished = blocked.complement();
                if unfinished.is_empty() {
                    continue;
                }
                let clean =
                    |x: VertexId| blocked.iter().all(|c| p.received(x, c).is_empty());
                let mut wall = vec![0u32; p.rank()];
                for c in unfinished.iter() {
                    wall[c] = cap;
                }
                let wall = Degree::new(wall);
                for f2 in p.paths(u, &wall) {
                    let mut ok = clean(u);
                    if ok {
                        for e in f2.word() {
                            if !clean(p.edge(e).source) {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if ok {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Default cap for [`flat_bruteforce`].
pub fn default_flat_cap(p: &Presentation) -> u32 {
    2 * p.vertex_count() as u32
}
