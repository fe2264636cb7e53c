//! Paths in color-ordered normal form, with composition and factorization.
//!
//! A path is stored as its range vertex plus one block of edges per color,
//! lowest color first. The flattened word chains source-to-range from the
//! range end: the first edge points at the range vertex, each later edge
//! points at the source of the edge before it.
//!
//! Composition concatenates words and then sorts them by color, swapping
//! adjacent out-of-order pairs through the square table. Each swap removes
//! exactly one color inversion, so rewriting terminates; on a corrupt
//! square table the guards below turn nontermination and broken chaining
//! into errors instead of bad paths.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::degree::Degree;
use crate::presentation::{EdgeId, Presentation, VertexId};

/// Which adjacent inversion to rewrite first. The two strategies agree on
/// every word exactly when the presentation is square-consistent; the
/// validator exploits the disagreement to detect bad tables.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Strategy {
    Leftmost,
    Rightmost,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("not composable: first path ends at {first_source}, second starts at {second_range}")]
    NonComposable {
        first_source: String,
        second_range: String,
    },
    #[error("no square rewrites the pair ({0}, {1})")]
    MissingSquare(String, String),
    #[error("square table is inconsistent at pair ({0}, {1})")]
    CorruptSquare(String, String),
    #[error("rewriting exceeded its step budget; square table is inconsistent")]
    Diverged,
    #[error("edge word does not chain at position {0}")]
    IllFormed(usize),
    #[error("degree {0} is out of range for this path")]
    OutOfRange(Degree),
}

/// A morphism in normal form: all color-1 edges, then all color-2 edges,
/// and so on. Identities have empty blocks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Path {
    range: VertexId,
    blocks: Vec<Vec<EdgeId>>,
}

impl Path {
    pub fn identity(v: VertexId, rank: usize) -> Path {
        Path {
            range: v,
            blocks: vec![Vec::new(); rank],
        }
    }

    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn rank(&self) -> usize {
        self.blocks.len()
    }

    pub fn degree(&self) -> Degree {
        Degree::new(self.blocks.iter().map(|b| b.len() as u32).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.iter().all(|b| b.is_empty())
    }

    pub fn block(&self, color: usize) -> &[EdgeId] {
        &self.blocks[color]
    }

    /// The flattened edge word, range end first.
    pub fn word(&self) -> Vec<EdgeId> {
        self.blocks.iter().flatten().copied().collect()
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by degree (lexicographically), then by edge word.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .components()
            .cmp(other.degree().components())
            .then_with(|| self.word().cmp(&other.word()))
            .then_with(|| self.range.cmp(&other.range))
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Path(range={:?}, blocks={:?})", self.range, self.blocks)
    }
}

impl Presentation {
    /// Source vertex of a path: the source of its last edge.
    pub fn path_source(&self, f: &Path) -> VertexId {
        f.blocks
            .iter()
            .rev()
            .find_map(|b| b.last())
            .map(|&e| self.edge(e).source)
            .unwrap_or(f.range)
    }

    /// Render a path for messages: `id(v)` or the dotted edge word.
    pub fn path_label(&self, f: &Path) -> String {
        if f.is_identity() {
            format!("id({})", self.vertex_name(f.range))
        } else {
            f.word()
                .iter()
                .map(|&e| self.edge(e).name.as_str())
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    /// True when the word chains correctly and blocks hold their colors.
    pub fn path_is_well_formed(&self, f: &Path) -> bool {
        if f.rank() != self.rank() {
            return false;
        }
        for (color, block) in f.blocks.iter().enumerate() {
            if block.iter().any(|&e| self.edge(e).color != color) {
                return false;
            }
        }
        let word = f.word();
        let mut at = f.range;
        for &e in &word {
            if self.edge(e).range != at {
                return false;
            }
            at = self.edge(e).source;
        }
        true
    }

    /// Normalize an edge word into a path with the given range.
    pub fn path_from_word(&self, range: VertexId, word: &[EdgeId]) -> Result<Path, PathError> {
        self.normalize_word(range, word.to_vec(), Strategy::Leftmost)
    }

    pub(crate) fn normalize_word(
        &self,
        range: VertexId,
        mut word: Vec<EdgeId>,
        strategy: Strategy,
    ) -> Result<Path, PathError> {
        let cap = word.len() * word.len() + 4;
        let mut steps = 0usize;
        loop {
            let inversion = match strategy {
                Strategy::Leftmost => (0..word.len().saturating_sub(1))
                    .find(|&i| self.edge(word[i]).color > self.edge(word[i + 1]).color),
                Strategy::Rightmost => (0..word.len().saturating_sub(1))
                    .rev()
                    .find(|&i| self.edge(word[i]).color > self.edge(word[i + 1]).color),
            };
            let Some(i) = inversion else { break };
            let (e, f) = (word[i], word[i + 1]);
            let (a, b) = self.lookup_ascend(e, f)?;
            word[i] = a;
            word[i + 1] = b;
            steps += 1;
            if steps > cap {
                return Err(PathError::Diverged);
            }
        }
        self.word_to_path(range, word)
    }

    fn lookup_ascend(&self, e: EdgeId, f: EdgeId) -> Result<(EdgeId, EdgeId), PathError> {
        let names = || {
            (
                self.edge(e).name.clone(),
                self.edge(f).name.clone(),
            )
        };
        let Some(&(a, b)) = self.ascend.get(&(e, f)) else {
            let (n1, n2) = names();
            return Err(PathError::MissingSquare(n1, n2));
        };
        // Guards keep rewriting terminating even when the declared square
        // is corrupt: the replacement must swap exactly the two colors.
        if self.edge(a).color != self.edge(f).color || self.edge(b).color != self.edge(e).color {
            let (n1, n2) = names();
            return Err(PathError::CorruptSquare(n1, n2));
        }
        Ok((a, b))
    }

    fn lookup_descend(&self, a: EdgeId, b: EdgeId) -> Result<(EdgeId, EdgeId), PathError> {
        let names = || {
            (
                self.edge(a).name.clone(),
                self.edge(b).name.clone(),
            )
        };
        let Some(&(c, d)) = self.descend.get(&(a, b)) else {
            let (n1, n2) = names();
            return Err(PathError::MissingSquare(n1, n2));
        };
        if self.edge(c).color != self.edge(b).color || self.edge(d).color != self.edge(a).color {
            let (n1, n2) = names();
            return Err(PathError::CorruptSquare(n1, n2));
        }
        Ok((c, d))
    }

    fn word_to_path(&self, range: VertexId, word: Vec<EdgeId>) -> Result<Path, PathError> {
        let mut at = range;
        for (pos, &e) in word.iter().enumerate() {
            if self.edge(e).range != at {
                return Err(PathError::IllFormed(pos));
            }
            at = self.edge(e).source;
        }
        let mut blocks = vec![Vec::new(); self.rank()];
        let mut last_color = 0usize;
        for (pos, &e) in word.iter().enumerate() {
            let color = self.edge(e).color;
            if color < last_color {
                return Err(PathError::IllFormed(pos));
            }
            last_color = color;
            blocks[color].push(e);
        }
        Ok(Path { range, blocks })
    }

    /// Compose two paths, `f` first from the range end. Requires the
    /// source of `f` to equal the range of `g`.
    pub fn compose(&self, f: &Path, g: &Path) -> Result<Path, PathError> {
        if self.path_source(f) != g.range() {
            return Err(PathError::NonComposable {
                first_source: self.vertex_name(self.path_source(f)).to_string(),
                second_range: self.vertex_name(g.range()).to_string(),
            });
        }
        let mut word = f.word();
        word.extend(g.word());
        self.normalize_word(f.range, word, Strategy::Leftmost)
    }

    /// Pull the first edge of the wanted color to the front of the word
    /// and remove it. The remainder stays in normal form.
    fn extract_head(&self, word: &mut Vec<EdgeId>, color: usize) -> Result<EdgeId, PathError> {
        let j = word
            .iter()
            .position(|&e| self.edge(e).color == color)
            .expect("degree bound guarantees an edge of this color");
        for i in (0..j).rev() {
            let (c, d) = self.lookup_descend(word[i], word[i + 1])?;
            word[i] = c;
            word[i + 1] = d;
        }
        Ok(word.remove(0))
    }

    /// Factor `f = g.h` with `d(g) = a`. Unique by construction of the
    /// normal form; errors only on out-of-range degrees or corrupt tables.
    pub fn split(&self, f: &Path, a: &Degree) -> Result<(Path, Path), PathError> {
        if !a.leq(&f.degree()) {
            return Err(PathError::OutOfRange(a.clone()));
        }
        let mut word = f.word();
        let mut head_word = Vec::new();
        for color in 0..self.rank() {
            for _ in 0..a.get(color) {
                head_word.push(self.extract_head(&mut word, color)?);
            }
        }
        let left = self.word_to_path(f.range, head_word)?;
        let right = self.word_to_path(self.path_source(&left), word)?;
        Ok((left, right))
    }

    /// The middle piece `f(m, n)`: the path between degrees `m` and `n`
    /// along `f`. Requires `m <= n <= d(f)`.
    pub fn segment(&self, f: &Path, m: &Degree, n: &Degree) -> Result<Path, PathError> {
        if !m.leq(n) || !n.leq(&f.degree()) {
            return Err(PathError::OutOfRange(n.clone()));
        }
        let (prefix, _) = self.split(f, n)?;
        let (_, seg) = self.split(&prefix, m)?;
        Ok(seg)
    }

    /// The vertex `f(m)` a path passes through at inner degree `m`.
    pub fn vertex_at(&self, f: &Path, m: &Degree) -> Result<VertexId, PathError> {
        let (prefix, _) = self.split(f, m)?;
        Ok(self.path_source(&prefix))
    }

    /// All chains of `len` edges of one color, starting (at the range
    /// end) from `start`. Returns the edge list and the final source.
    fn color_chains(
        &self,
        start: VertexId,
        color: usize,
        len: u32,
    ) -> Vec<(Vec<EdgeId>, VertexId)> {
        if len == 0 {
            return vec![(Vec::new(), start)];
        }
        let mut out = Vec::new();
        for &e in self.received(start, color) {
            for (tail, end) in self.color_chains(self.edge(e).source, color, len - 1) {
                let mut chain = Vec::with_capacity(len as usize);
                chain.push(e);
                chain.extend(tail);
                out.push((chain, end));
            }
        }
        out
    }

    /// All paths with range `v` and degree exactly `n`, sorted canonically.
    /// Every normal-form word is a distinct morphism, so this enumerates
    /// without touching the square table.
    pub fn paths(&self, v: VertexId, n: &Degree) -> Vec<Path> {
        assert_eq!(n.rank(), self.rank(), "degree rank mismatch");
        let mut acc: Vec<(VertexId, Vec<Vec<EdgeId>>)> = vec![(v, Vec::new())];
        for color in 0..self.rank() {
            let mut next = Vec::new();
            for (cur, blocks) in &acc {
                for (chain, end) in self.color_chains(*cur, color, n.get(color)) {
                    let mut b = blocks.clone();
                    b.push(chain);
                    next.push((end, b));
                }
            }
            acc = next;
        }
        let mut out: Vec<Path> = acc
            .into_iter()
            .map(|(_, blocks)| Path { range: v, blocks })
            .collect();
        out.sort();
        out
    }

    /// All paths with range `v` and degree at most `q`, sorted.
    pub fn paths_up_to(&self, v: VertexId, q: &Degree) -> Vec<Path> {
        let mut out = Vec::new();
        for n in q.descents() {
            out.extend(self.paths(v, &n));
        }
        out.sort();
        out
    }

    /// The degree-limited complete paths at `v`: paths of degree at most
    /// `q` that cannot be extended in any color without leaving the box.
    /// A path qualifies when for every color `i` with `d + e_i <= q` its
    /// source receives no color-`i` edge.
    pub fn paths_leq(&self, v: VertexId, q: &Degree) -> Vec<Path> {
        let mut out = Vec::new();
        for n in q.descents() {
            'next: for f in self.paths(v, &n) {
                let s = self.path_source(&f);
                for color in 0..self.rank() {
                    let bumped = n.add(&Degree::unit(self.rank(), color));
                    if bumped.leq(q) && !self.received(s, color).is_empty() {
                        continue 'next;
                    }
                }
                out.push(f);
            }
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demos;
    use crate::presentation::omega;

    fn d(v: &[u32]) -> Degree {
        Degree::new(v.to_vec())
    }

    #[test]
    fn identity_composes_trivially() {
        let p = demos::example42();
        let v0 = p.vertex("v0").unwrap();
        let id = Path::identity(v0, p.rank());
        let lam = p.paths(v0, &d(&[1, 0]))[0].clone();
        assert_eq!(p.compose(&id, &lam).unwrap(), lam);
        let id_src = Path::identity(p.path_source(&lam), p.rank());
        assert_eq!(p.compose(&lam, &id_src).unwrap(), lam);
    }

    #[test]
    fn square_sides_share_a_normal_form() {
        let p = demos::example42();
        let v0 = p.vertex("v0").unwrap();
        let lam = p.paths(v0, &d(&[1, 0]))[0].clone();
        let mu = p.paths(v0, &d(&[0, 1]))[0].clone();
        let v1 = p.path_source(&lam);
        let v2 = p.path_source(&mu);
        let alpha = p.paths(v1, &d(&[0, 1]))[0].clone();
        let beta = p.paths(v2, &d(&[1, 0]))[0].clone();
        let lhs = p.compose(&lam, &alpha).unwrap();
        let rhs = p.compose(&mu, &beta).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(p.path_label(&lhs), "lam.alpha");
        assert_eq!(lhs.degree(), d(&[1, 1]));
    }

    #[test]
    fn compose_rejects_mismatched_endpoints() {
        let p = demos::example42();
        let v0 = p.vertex("v0").unwrap();
        let lam = p.paths(v0, &d(&[1, 0]))[0].clone();
        let err = p.compose(&lam, &lam).unwrap_err();
        assert!(matches!(err, PathError::NonComposable { .. }), "{err}");
    }

    #[test]
    fn segment_recovers_the_other_square_side() {
        let p = demos::example42();
        let v0 = p.vertex("v0").unwrap();
        let z = p.paths(v0, &d(&[1, 1]))[0].clone();
        let seg = p.segment(&z, &d(&[0, 0]), &d(&[0, 1])).unwrap();
        assert_eq!(p.path_label(&seg), "mu");
        let tail = p.segment(&z, &d(&[0, 1]), &d(&[1, 1])).unwrap();
        assert_eq!(p.path_label(&tail), "beta");
    }

    #[test]
    fn split_roundtrips_through_compose() {
        let p = omega(&d(&[2, 2]));
        let v = p.vertex("x0_0").unwrap();
        let f = p.paths(v, &d(&[2, 2]))[0].clone();
        for a in f.degree().descents() {
            let (g, h) = p.split(&f, &a).unwrap();
            assert_eq!(g.degree(), a);
            assert_eq!(g.degree().add(&h.degree()), f.degree());
            assert_eq!(p.compose(&g, &h).unwrap(), f);
        }
    }

    #[test]
    fn split_rejects_out_of_range() {
        let p = demos::example42();
        let v0 = p.vertex("v0").unwrap();
        let lam = p.paths(v0, &d(&[1, 0]))[0].clone();
        let err = p.split(&lam, &d(&[0, 1])).unwrap_err();
        assert!(matches!(err, PathError::OutOfRange(_)), "{err}");
    }

    #[test]
    fn missing_square_is_reported_not_looped() {
        let text = "kgraph k=2\nvertex v0\nvertex v1\nvertex v2\nvertex v3\nedge lam color=1 from=v1 to=v0\nedge beta color=1 from=v3 to=v2\nedge mu color=2 from=v2 to=v0\nedge alpha color=2 from=v3 to=v1\n";
        let p = Presentation::parse(text).unwrap();
        let v0 = p.vertex("v0").unwrap();
        let mu = p.paths(v0, &d(&[0, 1]))[0].clone();
        let v2 = p.path_source(&mu);
        let beta = p.paths(v2, &d(&[1, 0]))[0].clone();
        let err = p.compose(&mu, &beta).unwrap_err();
        assert!(matches!(err, PathError::MissingSquare(..)), "{err}");
    }

    #[test]
    fn grid_paths_are_unique_per_degree() {
        let p = omega(&d(&[3, 2]));
        for v in p.vertices() {
            for n in d(&[3, 2]).descents() {
                let count = p.paths(v, &n).len();
                let fits = n.leq(&d(&[3, 2]));
                // Inside the grid each (vertex, degree) pair admits at
                // most one path, present exactly when the box allows it.
                let name = p.vertex_name(v).to_string();
                let coords: Vec<u32> = name[1..]
                    .split('_')
                    .map(|c| c.parse().unwrap())
                    .collect();
                let expected = fits
                    && Degree::new(coords.clone()).add(&n).leq(&d(&[3, 2]));
                assert_eq!(count, usize::from(expected), "{name} {n}");
            }
        }
    }

    #[test]
    fn degree_limited_paths_match_known_sets() {
        let p = demos::example42();
        let v0 = p.vertex("v0").unwrap();
        let at_11: Vec<String> = p
            .paths_leq(v0, &d(&[1, 1]))
            .iter()
            .map(|f| p.path_label(f))
            .collect();
        assert_eq!(at_11, vec!["lam.alpha"]);
        let at_10: Vec<String> = p
            .paths_leq(v0, &d(&[1, 0]))
            .iter()
            .map(|f| p.path_label(f))
            .collect();
        assert_eq!(at_10, vec!["lam"]);
    }

    #[test]
    fn enumeration_is_sorted() {
        let p = omega(&d(&[2, 2]));
        for v in p.vertices() {
            let all = p.paths_up_to(v, &d(&[2, 2]));
            let mut sorted = all.clone();
            sorted.sort();
            assert_eq!(all, sorted);
        }
    }
}
