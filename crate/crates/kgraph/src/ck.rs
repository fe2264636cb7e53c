//! Matrix model on boundary paths.
//!
//! For a finite graph without cycles, the boundary paths form a finite
//! basis, and every path acts on it by prefixing: the matrix of a path
//! sends a boundary path to its extension when the endpoints chain and to
//! zero otherwise. This module builds those matrices, checks the defining
//! relations of the model on a degree window, and computes the dimension
//! and block structure of the algebra the matrices span.

use std::collections::HashMap;

use crate::analysis::{self, AnalysisError};
use crate::degree::Degree;
use crate::matrix::{self, IntMatrix};
use crate::path::Path;
use crate::presentation::{Presentation, VertexId};
use crate::report::Report;

/// The boundary-path basis of a presentation together with the action of
/// paths on it.
pub struct BoundaryRepresentation<'a> {
    p: &'a Presentation,
    basis: Vec<Path>,
    index: HashMap<Path, usize>,
}

impl<'a> BoundaryRepresentation<'a> {
    /// Builds the model. Fails on cyclic presentations, where the boundary
    /// basis is not finite.
    pub fn new(p: &'a Presentation) -> Result<BoundaryRepresentation<'a>, AnalysisError> {
        let basis: Vec<Path> = analysis::all_boundary_paths(p)?
            .into_iter()
            .map(|b| b.path().clone())
            .collect();
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i))
            .collect();
        Ok(BoundaryRepresentation { p, basis, index })
    }

    pub fn presentation(&self) -> &Presentation {
        self.p
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The matrix of a path: sends each basis element starting where the
    /// path ends to the prefixed basis element.
    pub fn path_matrix(&self, lam: &Path) -> IntMatrix {
        let n = self.basis.len();
        let mut t = IntMatrix::zeros(n, n);
        let src = self.p.path_source(lam);
        for (xi, x) in self.basis.iter().enumerate() {
            if x.range() != src {
                continue;
            }
            let y = self
                .p
                .compose(lam, x)
                .expect("prefixing a boundary path at the path's source");
            let yi = self.index[&y];
            t[(yi, xi)] = 1;
        }
        t
    }

    /// The projection onto basis elements at a vertex; equals the matrix
    /// of the identity path there.
    pub fn vertex_matrix(&self, v: VertexId) -> IntMatrix {
        let n = self.basis.len();
        let mut t = IntMatrix::zeros(n, n);
        for (xi, x) in self.basis.iter().enumerate() {
            if x.range() == v {
                t[(xi, xi)] = 1;
            }
        }
        t
    }

    /// All paths of the presentation grouped as one list; finite because
    /// the graph has no cycles, so no degree component can reach the
    /// vertex count.
    fn all_paths(&self) -> Vec<Path> {
        let full = Degree::new(vec![self.p.vertex_count() as u32; self.p.rank()]);
        let mut out = Vec::new();
        for v in self.p.vertices() {
            out.extend(self.p.paths_up_to(v, &full));
        }
        out
    }

    /// Checks the defining relations of the model over paths of degree at
    /// most `bound` and reports one entry per relation family.
    pub fn check_relations(&self, bound: &Degree) -> Report {
        let mut report = Report::new();
        let n = self.basis.len();
        let id = IntMatrix::identity(n);

        // Vertex matrices are orthogonal projections summing to the identity.
        {
            let mut outcome: Result<String, String> = Ok(String::new());
            let mut sum = IntMatrix::zeros(n, n);
            let verts: Vec<VertexId> = self.p.vertices().collect();
            'proj: for (i, &u) in verts.iter().enumerate() {
                let tu = self.vertex_matrix(u);
                if &tu * &tu != tu {
                    outcome = Err(format!(
                        "projection at {} is not idempotent",
                        self.p.vertex_name(u)
                    ));
                    break 'proj;
                }
                for &v in &verts[i + 1..] {
                    let tv = self.vertex_matrix(v);
                    if !(&tu * &tv).is_zero() {
                        outcome = Err(format!(
                            "projections at {} and {} overlap",
                            self.p.vertex_name(u),
                            self.p.vertex_name(v)
                        ));
                        break 'proj;
                    }
                }
                sum = &sum + &tu;
            }
            if outcome.is_ok() {
                if sum != id {
                    outcome = Err("vertex projections do not sum to the identity".into());
                } else {
                    outcome = Ok(format!("{} orthogonal projections sum to 1", verts.len()));
                }
            }
            report.add("vertex-projections", outcome);
        }

        // Multiplicativity: the matrix of a composite is the product.
        {
            let mut outcome: Result<String, String> = Ok(String::new());
            let mut pairs = 0usize;
            'mult: for v in self.p.vertices() {
                for lam in self.p.paths_up_to(v, bound) {
                    let src = self.p.path_source(&lam);
                    for mu in self.p.paths_up_to(src, bound) {
                        pairs += 1;
                        let composite = self
                            .p
                            .compose(&lam, &mu)
                            .expect("composable by construction");
                        let lhs = self.path_matrix(&composite);
                        let rhs = &self.path_matrix(&lam) * &self.path_matrix(&mu);
                        if lhs != rhs {
                            outcome = Err(format!(
                                "matrix of {} differs from the product for ({}, {})",
                                self.p.path_label(&composite),
                                self.p.path_label(&lam),
                                self.p.path_label(&mu)
                            ));
                            break 'mult;
                        }
                    }
                }
            }
            if outcome.is_ok() {
                outcome = Ok(format!("{} composable pairs multiply", pairs));
            }
            report.add("composition", outcome);
        }

        // The adjoint product of two path matrices expands over minimal
        // common extensions.
        {
            let mut outcome: Result<String, String> = Ok(String::new());
            let mut pairs = 0usize;
            'adj: for v in self.p.vertices() {
                for u in self.p.vertices() {
                    for lam in self.p.paths_up_to(v, bound) {
                        for mu in self.p.paths_up_to(u, bound) {
                            pairs += 1;
                            let lhs =
                                &self.path_matrix(&lam).transpose() * &self.path_matrix(&mu);
                            let mut rhs = IntMatrix::zeros(n, n);
                            for (alpha, beta) in
                                analysis::minimal_extensions(self.p, &lam, &mu)
                                    .expect("paths come from the same presentation")
                            {
                                rhs = &rhs
                                    + &(&self.path_matrix(&alpha)
                                        * &self.path_matrix(&beta).transpose());
                            }
                            if lhs != rhs {
                                outcome = Err(format!(
                                    "adjoint product of ({}, {}) does not match its extensions",
                                    self.p.path_label(&lam),
                                    self.p.path_label(&mu)
                                ));
                                break 'adj;
                            }
                        }
                    }
                }
            }
            if outcome.is_ok() {
                outcome = Ok(format!("{} adjoint products expand", pairs));
            }
            report.add("adjoint-product", outcome);
        }

        // For every minimal exhaustive set of paths at a vertex, the
        // defect projections multiply to zero.
        {
            let mut outcome: Result<String, String> = Ok(String::new());
            let mut sets = 0usize;
            let mut skipped = 0usize;
            'ck: for v in self.p.vertices() {
                let pool = self.p.paths_up_to(v, bound);
                if pool.len() > 16 {
                    skipped += 1;
                    continue;
                }
                let tv = self.vertex_matrix(v);
                let exhaustive = |set: &[Path]| -> Result<bool, AnalysisError> {
                    if set.is_empty() {
                        return Ok(false);
                    }
                    analysis::is_exhaustive(self.p, v, set, bound)
                };
                for mask in 1u32..(1 << pool.len()) {
                    let set: Vec<Path> = pool
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, x)| x.clone())
                        .collect();
                    if !exhaustive(&set).unwrap_or(false) {
                        continue;
                    }
                    let minimal = (0..set.len()).all(|drop| {
                        let reduced: Vec<Path> = set
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| *i != drop)
                            .map(|(_, x)| x.clone())
                            .collect();
                        !exhaustive(&reduced).unwrap_or(false)
                    });
                    if !minimal {
                        continue;
                    }
                    sets += 1;
                    let mut product = id.clone();
                    for lam in &set {
                        let t = self.path_matrix(lam);
                        let defect = &tv - &(&t * &t.transpose());
                        product = &product * &defect;
                    }
                    if !product.is_zero() {
                        let labels: Vec<String> =
                            set.iter().map(|x| self.p.path_label(x)).collect();
                        outcome = Err(format!(
                            "defect product over {{{}}} at {} is nonzero",
                            labels.join(", "),
                            self.p.vertex_name(v)
                        ));
                        break 'ck;
                    }
                }
            }
            if outcome.is_ok() {
                let mut detail = format!("{} minimal exhaustive sets annihilate", sets);
                if skipped > 0 {
                    detail.push_str(&format!(
                        " ({} vertices skipped: more than 16 candidate paths)",
                        skipped
                    ));
                }
                outcome = Ok(detail);
            }
            report.add("exhaustive-sets", outcome);
        }

        // On locally convex presentations the complete paths of each degree
        // resolve every vertex projection.
        {
            let mut outcome: Result<String, String> = Ok(String::new());
            if analysis::is_locally_convex(self.p) {
                let mut resolved = 0usize;
                'convex: for v in self.p.vertices() {
                    for m in bound.descents() {
                        let mut sum = IntMatrix::zeros(n, n);
                        for lam in self.p.paths_leq(v, &m) {
                            let t = self.path_matrix(&lam);
                            sum = &sum + &(&t * &t.transpose());
                        }
                        resolved += 1;
                        if sum != self.vertex_matrix(v) {
                            outcome = Err(format!(
                                "complete paths of degree at most {} do not resolve {}",
                                m,
                                self.p.vertex_name(v)
                            ));
                            break 'convex;
                        }
                    }
                }
                if outcome.is_ok() {
                    outcome = Ok(format!("{} vertex/degree resolutions hold", resolved));
                }
            } else {
                outcome = Ok("not locally convex; resolution relation does not apply".into());
            }
            report.add("convex-resolution", outcome);
        }

        report
    }

    /// Dimension of the algebra spanned by all products `T_lam T_mu^T`
    /// over pairs of paths with a common source, computed as an integer
    /// matrix rank, together with the sizes of the irreducible blocks,
    /// computed from connectivity of the basis under common suffixes.
    pub fn dimension(&self) -> (usize, Vec<usize>) {
        let n = self.basis.len();
        let mut by_source: HashMap<VertexId, Vec<Path>> = HashMap::new();
        for lam in self.all_paths() {
            by_source
                .entry(self.p.path_source(&lam))
                .or_default()
                .push(lam);
        }
        let mut rows = Vec::new();
        for group in by_source.values() {
            for lam in group {
                let tl = self.path_matrix(lam);
                for mu in group {
                    let product = &tl * &self.path_matrix(mu).transpose();
                    rows.push(product.entries().to_vec());
                }
            }
        }
        let rank = matrix::rank(&rows);

        // Blocks: connected components of the basis under one-edge
        // prefixing, which identifies paths sharing a suffix.
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let root = find(parent, parent[i]);
                parent[i] = root;
            }
            parent[i]
        }
        for (xi, x) in self.basis.iter().enumerate() {
            for e in self.p.edge_ids() {
                if self.p.edge(e).source != x.range() {
                    continue;
                }
                let prefixed = self
                    .p
                    .path_from_word(self.p.edge(e).range, &[e])
                    .and_then(|edge_path| self.p.compose(&edge_path, x))
                    .expect("prefixing one edge onto a boundary path");
                let yi = self.index[&prefixed];
                let (a, b) = (find(&mut parent, xi), find(&mut parent, yi));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let mut sizes: HashMap<usize, usize> = HashMap::new();
        for i in 0..n {
            let root = find(&mut parent, i);
            *sizes.entry(root).or_insert(0) += 1;
        }
        let mut blocks: Vec<usize> = sizes.into_values().collect();
        blocks.sort_unstable();
        (rank, blocks)
    }
}
