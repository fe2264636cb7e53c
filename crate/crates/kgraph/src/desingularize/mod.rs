//! Source removal by boundary-path completion.
//!
//! A finitely presented k-graph may have sources: vertices that receive no
//! edge of some color. This module embeds such a graph into a larger one
//! with no sources, built from the original paths plus formal extensions
//! that record how far a boundary path has been shifted in each color.
//!
//! Elements are kept in a canonical form, [`ExtPath`], on which range,
//! source, composition and factorization are given by closed formulas.
//! The [`raw`] submodule implements the underlying definition directly
//! (equivalence classes of pairs of boundary paths and degree intervals)
//! and serves as an oracle for the canonical arithmetic.

use std::collections::BTreeMap;

use crate::analysis::{self, AnalysisError, BoundaryPath};
use crate::degree::{ColorSet, Degree};
use crate::path::{Path, PathError};
use crate::presentation::{Presentation, VertexId};

pub mod raw;
pub mod verify;
pub mod window;

pub use verify::{verify_axioms, VerifyOptions};
pub use window::{add_heads, compare_add_heads, windows_isomorphic, Skeleton};

/// Errors from extension arithmetic.
#[derive(Debug, thiserror::Error)]
pub enum ExtError {
    /// The source of the first element differs from the range of the second.
    #[error("not composable: source {0} does not match range {1}")]
    NonComposable(String, String),
    /// A factorization degree exceeded the degree of the element.
    #[error("degree {0} is out of range")]
    OutOfRange(Degree),
    /// Data that does not describe an element of the completed graph.
    #[error("invalid extension element: {0}")]
    InvalidForm(String),
    /// A stated precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// Vertex of the completed graph: an original vertex, or a formal vertex
/// sitting `offset` steps beyond `base` along adjoined boundary directions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ExtVertex {
    Base(VertexId),
    New { base: VertexId, offset: Degree },
}

/// Morphism of the completed graph in canonical form.
///
/// `Base` wraps an ordinary path. `New` is a path that has been pushed
/// `offset` steps past the range of its `shadow` and has total degree
/// `degree`; the shadow records the part still visible in the original
/// graph. Invariants, maintained by every constructor here:
///
/// - `offset` is supported only on colors where the shadow has degree 0,
/// - `d(shadow) <= degree`,
/// - `offset + degree - d(shadow)` is nonzero (else the element is `Base`),
/// - the shadow's source admits arbitrarily long paths avoiding the
///   support of `offset + degree - d(shadow)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ExtPath {
    Base(Path),
    New {
        shadow: Path,
        offset: Degree,
        degree: Degree,
    },
}

/// The source-free completion of a presentation.
///
/// Holds the base presentation together with a table of which vertices
/// admit arbitrarily long paths avoiding each color set, which is the
/// realizability condition for formal vertices and paths.
pub struct Extension<'a> {
    p: &'a Presentation,
    // flat_table[v][mask] for rank <= FLAT_TABLE_MAX_RANK, else empty and
    // queries fall through to analysis::flat.
    flat_table: Vec<Vec<bool>>,
}

const FLAT_TABLE_MAX_RANK: usize = 12;

impl<'a> Extension<'a> {
    pub fn new(p: &'a Presentation) -> Extension<'a> {
        let k = p.rank();
        let mut flat_table = Vec::new();
        if k <= FLAT_TABLE_MAX_RANK {
            for v in p.vertices() {
                let row: Vec<bool> = (0..(1u32 << k))
                    .map(|mask| analysis::flat(p, v, &colorset_from_mask(k, mask)))
                    .collect();
                flat_table.push(row);
            }
        }
        Extension { p, flat_table }
    }

    pub fn presentation(&self) -> &Presentation {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.p.rank()
    }

    /// Whether `v` admits arbitrarily long paths avoiding all colors in `avoid`.
    pub fn flat(&self, v: VertexId, avoid: &ColorSet) -> bool {
        if self.flat_table.is_empty() {
            return analysis::flat(self.p, v, avoid);
        }
        let mask = avoid.iter().fold(0usize, |m, c| m | (1 << c));
        self.flat_table[v.0][mask]
    }

    /// Human-readable vertex label, such as `v3` or `v3+(1,1)`.
    pub fn vertex_label(&self, v: &ExtVertex) -> String {
        match v {
            ExtVertex::Base(w) => self.p.vertex_name(*w).to_string(),
            ExtVertex::New { base, offset } => {
                format!("{}+{}", self.p.vertex_name(*base), offset)
            }
        }
    }

    /// Human-readable path label, such as `lam.alpha` or `[mu|+(0,1)|deg (1,1)]`.
    pub fn path_label(&self, f: &ExtPath) -> String {
        match f {
            ExtPath::Base(g) => self.p.path_label(g),
            ExtPath::New {
                shadow,
                offset,
                degree,
            } => format!(
                "[{}|+{}|deg {}]",
                self.p.path_label(shadow),
                offset,
                degree
            ),
        }
    }

    /// Whether `v` names an actual vertex of the completed graph.
    pub fn vertex_is_valid(&self, v: &ExtVertex) -> bool {
        match v {
            ExtVertex::Base(_) => true,
            ExtVertex::New { base, offset } => {
                !offset.is_zero() && self.flat(*base, &offset.support())
            }
        }
    }

    /// Builds a `New` element from parts, normalizing to `Base` when the
    /// formal part vanishes and rejecting data that violates an invariant.
    pub fn make_new(
        &self,
        shadow: Path,
        offset: Degree,
        degree: Degree,
    ) -> Result<ExtPath, ExtError> {
        let d = shadow.degree();
        for c in offset.support().iter() {
            if d.get(c) != 0 {
                return Err(ExtError::InvalidForm(format!(
                    "offset color {} overlaps shadow degree {}",
                    c + 1,
                    d
                )));
            }
        }
        if !d.leq(&degree) {
            return Err(ExtError::InvalidForm(format!(
                "shadow degree {} exceeds total degree {}",
                d, degree
            )));
        }
        let tail = offset.add(&degree).sub(&d);
        if tail.is_zero() {
            return Ok(ExtPath::Base(shadow));
        }
        let src = self.p.path_source(&shadow);
        if !self.flat(src, &tail.support()) {
            return Err(ExtError::InvalidForm(format!(
                "source {} does not avoid colors {}",
                self.p.vertex_name(src),
                tail.support()
            )));
        }
        Ok(ExtPath::New {
            shadow,
            offset,
            degree,
        })
    }

    /// Whether `f` satisfies all canonical-form invariants.
    pub fn path_is_valid(&self, f: &ExtPath) -> bool {
        match f {
            ExtPath::Base(g) => self.p.path_is_well_formed(g),
            ExtPath::New {
                shadow,
                offset,
                degree,
            } => {
                self.p.path_is_well_formed(shadow)
                    && matches!(
                        self.make_new(shadow.clone(), offset.clone(), degree.clone()),
                        Ok(ExtPath::New { .. })
                    )
            }
        }
    }

    pub fn range(&self, f: &ExtPath) -> ExtVertex {
        match f {
            ExtPath::Base(g) => ExtVertex::Base(g.range()),
            ExtPath::New { shadow, offset, .. } => {
                if offset.is_zero() {
                    ExtVertex::Base(shadow.range())
                } else {
                    ExtVertex::New {
                        base: shadow.range(),
                        offset: offset.clone(),
                    }
                }
            }
        }
    }

    pub fn source(&self, f: &ExtPath) -> ExtVertex {
        match f {
            ExtPath::Base(g) => ExtVertex::Base(self.p.path_source(g)),
            ExtPath::New {
                shadow,
                offset,
                degree,
            } => ExtVertex::New {
                base: self.p.path_source(shadow),
                offset: offset.add(degree).sub(&shadow.degree()),
            },
        }
    }

    pub fn degree(&self, f: &ExtPath) -> Degree {
        match f {
            ExtPath::Base(g) => g.degree(),
            ExtPath::New { degree, .. } => degree.clone(),
        }
    }

    pub fn identity(&self, v: &ExtVertex) -> ExtPath {
        let k = self.p.rank();
        match v {
            ExtVertex::Base(w) => ExtPath::Base(Path::identity(*w, k)),
            ExtVertex::New { base, offset } => ExtPath::New {
                shadow: Path::identity(*base, k),
                offset: offset.clone(),
                degree: Degree::zero(k),
            },
        }
    }

    pub fn compose(&self, f: &ExtPath, g: &ExtPath) -> Result<ExtPath, ExtError> {
        let non_composable = || {
            ExtError::NonComposable(
                self.vertex_label(&self.source(f)),
                self.vertex_label(&self.range(g)),
            )
        };
        match (f, g) {
            (ExtPath::Base(a), ExtPath::Base(b)) => Ok(ExtPath::Base(self.p.compose(a, b)?)),
            (ExtPath::Base(a), ExtPath::New { shadow, offset, degree }) => {
                if !offset.is_zero() || shadow.range() != self.p.path_source(a) {
                    return Err(non_composable());
                }
                let joined = self.p.compose(a, shadow)?;
                let total = a.degree().add(degree);
                self.make_new(joined, Degree::zero(self.p.rank()), total)
            }
            (ExtPath::New { .. }, ExtPath::Base(_)) => {
                // The source of a New element is always a formal vertex.
                Err(non_composable())
            }
            (
                ExtPath::New {
                    shadow: mu,
                    offset: c,
                    degree: gdeg,
                },
                ExtPath::New {
                    shadow: nu,
                    offset: c2,
                    degree: g2,
                },
            ) => {
                let src_off = c.add(gdeg).sub(&mu.degree());
                if c2 != &src_off || nu.range() != self.p.path_source(mu) {
                    return Err(non_composable());
                }
                let joined = self.p.compose(mu, nu)?;
                self.make_new(joined, c.clone(), gdeg.add(g2))
            }
        }
    }

    /// Splits `f` into composable factors with the first of degree `a`.
    pub fn split(&self, f: &ExtPath, a: &Degree) -> Result<(ExtPath, ExtPath), ExtError> {
        if !a.leq(&self.degree(f)) {
            return Err(ExtError::OutOfRange(a.clone()));
        }
        match f {
            ExtPath::Base(g) => {
                let (l, r) = self.p.split(g, a)?;
                Ok((ExtPath::Base(l), ExtPath::Base(r)))
            }
            ExtPath::New {
                shadow,
                offset,
                degree,
            } => {
                // The left factor keeps the part of the shadow visible within
                // offset + a; the rest of the shadow moves to the right factor.
                let t = offset.add(a).meet(&shadow.degree());
                let (ls, rs) = self.p.split(shadow, &t)?;
                let left = self.make_new(ls, offset.clone(), a.clone())?;
                let right = self.make_new(rs, offset.add(a).sub(&t), degree.sub(a))?;
                Ok((left, right))
            }
        }
    }

    /// The segment of `f` between degrees `m` and `n`.
    pub fn segment(&self, f: &ExtPath, m: &Degree, n: &Degree) -> Result<ExtPath, ExtError> {
        if !m.leq(n) {
            return Err(ExtError::OutOfRange(m.clone()));
        }
        let (_, rest) = self.split(f, m)?;
        let (mid, _) = self.split(&rest, &n.sub(m))?;
        Ok(mid)
    }

    /// All paths of the completed graph with range `v` and degree `n`,
    /// sorted deterministically.
    pub fn paths(&self, v: &ExtVertex, n: &Degree) -> Vec<ExtPath> {
        let mut out = Vec::new();
        match v {
            ExtVertex::Base(w) => {
                for lam in self.p.paths(*w, n) {
                    out.push(ExtPath::Base(lam));
                }
                for m in n.descents() {
                    if &m == n {
                        continue;
                    }
                    let tail = n.sub(&m).support();
                    for mu in self.p.paths(*w, &m) {
                        if self.flat(self.p.path_source(&mu), &tail) {
                            out.push(ExtPath::New {
                                shadow: mu,
                                offset: Degree::zero(self.p.rank()),
                                degree: n.clone(),
                            });
                        }
                    }
                }
            }
            ExtVertex::New { base, offset } => {
                let supp = offset.support();
                for m in n.descents() {
                    if m.support().iter().any(|c| supp.contains(c)) {
                        continue;
                    }
                    let tail = offset.add(n).sub(&m).support();
                    for mu in self.p.paths(*base, &m) {
                        if self.flat(self.p.path_source(&mu), &tail) {
                            out.push(ExtPath::New {
                                shadow: mu,
                                offset: offset.clone(),
                                degree: n.clone(),
                            });
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// All paths with range `v` and degree at most `q`, sorted by degree
    /// in the order of `q.descents()` and within a degree deterministically.
    pub fn paths_up_to(&self, v: &ExtVertex, q: &Degree) -> Vec<ExtPath> {
        let mut out = Vec::new();
        for n in q.descents() {
            out.extend(self.paths(v, &n));
        }
        out
    }

    /// Vertices of the completed graph with offsets bounded by `q`:
    /// every original vertex, plus each realizable formal vertex.
    pub fn window_vertices(&self, q: &Degree) -> Vec<ExtVertex> {
        let mut out: Vec<ExtVertex> = self.p.vertices().map(ExtVertex::Base).collect();
        for w in self.p.vertices() {
            for c in q.descents() {
                if c.is_zero() {
                    continue;
                }
                if self.flat(w, &c.support()) {
                    out.push(ExtVertex::New {
                        base: w,
                        offset: c,
                    });
                }
            }
        }
        out.sort();
        out
    }

    /// Canonical vertex for the class of `x` shifted by `m`.
    pub fn canonical_vertex(
        &self,
        x: &BoundaryPath,
        m: &Degree,
    ) -> Result<ExtVertex, ExtError> {
        let dx = x.finite_degree();
        let t = m.meet(&dx);
        let base = self.p.vertex_at(x.path(), &t)?;
        let off = m.sub(&t);
        if off.is_zero() {
            Ok(ExtVertex::Base(base))
        } else {
            let v = ExtVertex::New { base, offset: off };
            debug_assert!(self.vertex_is_valid(&v));
            Ok(v)
        }
    }

    /// Canonical path for the class of `x` between shifts `m` and `n`.
    pub fn canonical_path(
        &self,
        x: &BoundaryPath,
        m: &Degree,
        n: &Degree,
    ) -> Result<ExtPath, ExtError> {
        if !m.leq(n) {
            return Err(ExtError::OutOfRange(m.clone()));
        }
        let dx = x.finite_degree();
        if n.leq(&dx) {
            return Ok(ExtPath::Base(self.p.segment(x.path(), m, n)?));
        }
        let tm = m.meet(&dx);
        let tn = n.meet(&dx);
        let shadow = self.p.segment(x.path(), &tm, &tn)?;
        self.make_new(shadow, m.sub(&tm), n.sub(m))
    }

    /// Minimal common extensions of `f` and `g` in the completed graph:
    /// pairs `(a, b)` with `f a = g b` of degree `d(f) v d(g)`.
    pub fn minimal_extensions(
        &self,
        f: &ExtPath,
        g: &ExtPath,
    ) -> Result<Vec<(ExtPath, ExtPath)>, ExtError> {
        if self.range(f) != self.range(g) {
            return Ok(Vec::new());
        }
        let join = self.degree(f).join(&self.degree(g));
        let mut out = Vec::new();
        for a in self.paths(&self.source(f), &join.sub(&self.degree(f))) {
            let total = self.compose(f, &a)?;
            let (head, b) = self.split(&total, &self.degree(g))?;
            if &head == g {
                out.push((a, b));
            }
        }
        out.sort();
        Ok(out)
    }

    /// Checks that minimal common extensions of original paths compute
    /// identically in the base graph and in its completion, over all pairs
    /// of paths of degree at most `q` with a common range.
    pub fn lambda_min_preserved(&self, q: &Degree) -> Result<crate::report::Report, ExtError> {
        let mut report = crate::report::Report::new();
        let mut pairs = 0usize;
        let mut outcome: Result<(), String> = Ok(());
        'outer: for v in self.p.vertices() {
            let paths = self.p.paths_up_to(v, q);
            for lam in &paths {
                for mu in &paths {
                    pairs += 1;
                    let core = analysis::minimal_extensions(self.p, lam, mu)?;
                    let ext = self.minimal_extensions(
                        &ExtPath::Base(lam.clone()),
                        &ExtPath::Base(mu.clone()),
                    )?;
                    let lifted: Vec<(ExtPath, ExtPath)> = core
                        .iter()
                        .map(|(a, b)| (ExtPath::Base(a.clone()), ExtPath::Base(b.clone())))
                        .collect();
                    if ext != lifted {
                        outcome = Err(format!(
                            "extensions of ({}, {}) changed: {} in the base graph, {} in the completion",
                            self.p.path_label(lam),
                            self.p.path_label(mu),
                            core.len(),
                            ext.len()
                        ));
                        break 'outer;
                    }
                }
            }
        }
        report.add(
            "lambda-min-preserved",
            outcome.map(|_| format!("{} path pairs up to degree {} agree", pairs, q)),
        );
        Ok(report)
    }

    /// Checks that a finite exhaustive set at an original vertex stays
    /// exhaustive in the completion. The set must be exhaustive in the base
    /// graph up to degree `q v (join of set degrees)`; otherwise the
    /// precondition is reported as violated.
    pub fn exhaustive_preserved(
        &self,
        v: VertexId,
        set: &[Path],
        q: &Degree,
    ) -> Result<bool, ExtError> {
        let mut join = Degree::zero(self.p.rank());
        for lam in set {
            join = join.join(&lam.degree());
        }
        let bound = q.join(&join);
        if !analysis::is_exhaustive(self.p, v, set, &bound)? {
            return Err(ExtError::Precondition(format!(
                "the given set is not exhaustive at {} up to degree {}",
                self.p.vertex_name(v),
                bound
            )));
        }
        for f in self.paths(&ExtVertex::Base(v), &join) {
            let mut meets = false;
            for lam in set {
                if !self
                    .minimal_extensions(&ExtPath::Base(lam.clone()), &f)?
                    .is_empty()
                {
                    meets = true;
                    break;
                }
            }
            if !meets {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn colorset_from_mask(rank: usize, mask: u32) -> ColorSet {
    let mut s = ColorSet::empty(rank);
    for c in 0..rank {
        if mask & (1 << c) != 0 {
            s.insert(c);
        }
    }
    s
}

/// Groups extension paths by degree, for reporting.
pub fn count_by_degree(ext: &Extension, items: &[ExtPath]) -> BTreeMap<Degree, usize> {
    let mut m = BTreeMap::new();
    for f in items {
        *m.entry(ext.degree(f)).or_insert(0) += 1;
    }
    m
}
