//! Finite presentations of higher-rank graphs.
//!
//! A presentation is a k-colored multigraph (the 1-skeleton) together with
//! a list of commuting squares. Each square `a b = c d` identifies the
//! two-edge word `a.b` (colors ascending) with the word `c.d` (colors
//! descending). When every two-color composable pair appears in exactly
//! one square on each side, and for rank >= 3 the squares are consistent
//! on three-color words, the presentation defines a category with unique
//! color-ordered normal forms for its morphisms.
//!
//! Presentations are immutable after construction; every operation that
//! consumes one takes `&Presentation`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::degree::Degree;
use crate::path::Strategy;
use crate::report::Report;

/// Index of a vertex in declaration order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VertexId(pub usize);

/// Index of an edge in declaration order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EdgeId(pub usize);

#[derive(Clone, Debug)]
pub struct Edge {
    pub name: String,
    /// 0-based color; the text format uses 1-based colors.
    pub color: usize,
    pub source: VertexId,
    pub range: VertexId,
}

/// A commuting square `left.0 left.1 = right.0 right.1`, read as words
/// from the range end. In a well-formed square the left word has strictly
/// ascending colors and the right word is the same pair reversed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Square {
    pub left: (EdgeId, EdgeId),
    pub right: (EdgeId, EdgeId),
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: duplicate identifier `{id}`")]
    Duplicate { line: usize, id: String },
    #[error("line {line}: unknown {kind} `{id}`")]
    UnknownReference {
        line: usize,
        kind: &'static str,
        id: String,
    },
}

/// Errors from assembling a presentation programmatically.
#[derive(Debug, Error)]
pub enum BuildError {
    #[error("duplicate identifier `{0}`")]
    Duplicate(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("color {color} out of range 1..={rank}")]
    ColorOutOfRange { color: usize, rank: usize },
    #[error("rank must be between 1 and 32, got {0}")]
    BadRank(usize),
}

pub struct Presentation {
    rank: usize,
    vertex_names: Vec<String>,
    vertex_index: HashMap<String, VertexId>,
    edges: Vec<Edge>,
    edge_index: HashMap<String, EdgeId>,
    squares: Vec<Square>,
    /// Descending pair (higher color first) -> ascending replacement.
    pub(crate) ascend: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
    /// Ascending pair -> descending replacement.
    pub(crate) descend: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
    /// `incoming[color][v]` lists edges of that color with range `v`,
    /// in declaration order.
    pub(crate) incoming: Vec<Vec<Vec<EdgeId>>>,
}

impl Presentation {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_names.len()).map(VertexId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    /// Edges of the given color received at `v` (edges with range `v`).
    pub fn received(&self, v: VertexId, color: usize) -> &[EdgeId] {
        &self.incoming[color][v.0]
    }

    /// True when `v` receives no edges of any color.
    pub fn receives_nothing(&self, v: VertexId) -> bool {
        (0..self.rank).all(|c| self.incoming[c][v.0].is_empty())
    }

    fn assemble(
        rank: usize,
        vertex_names: Vec<String>,
        edges: Vec<Edge>,
        squares: Vec<Square>,
    ) -> Presentation {
        let vertex_index = vertex_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), VertexId(i)))
            .collect();
        let edge_index = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.name.clone(), EdgeId(i)))
            .collect();
        let mut incoming = vec![vec![Vec::new(); vertex_names.len()]; rank];
        for (i, e) in edges.iter().enumerate() {
            incoming[e.color][e.range.0].push(EdgeId(i));
        }
        let mut ascend = HashMap::new();
        let mut descend = HashMap::new();
        for sq in &squares {
            // First declaration wins so that lookups stay deterministic
            // even on invalid inputs; the validator reports duplicates.
            ascend.entry(sq.right).or_insert(sq.left);
            descend.entry(sq.left).or_insert(sq.right);
        }
        Presentation {
            rank,
            vertex_names,
            vertex_index,
            edges,
            edge_index,
            squares,
            ascend,
            descend,
            incoming,
        }
    }

    /// Parse the `.kg` text format.
    ///
    /// ```text
    /// # comment
    /// kgraph k=2
    /// vertex v0
    /// edge lam color=1 from=v1 to=v0   # from = source, to = range
    /// square lam alpha = mu beta
    /// ```
    ///
    /// The header must be the first significant line and vertices must be
    /// declared before an edge uses them; otherwise declaration order is
    /// free. No semantic validation happens here; see [`Presentation::validate`].
    ///
    /// Window exports additionally use `extvertex New <base> <c1> ... <ck>`
    /// records; these declare a vertex named `<base>__<c1>_..._<ck>`.
    pub fn parse(text: &str) -> Result<Presentation, ParseError> {
        let mut rank: Option<usize> = None;
        let mut vertex_names: Vec<String> = Vec::new();
        let mut vertex_index: HashMap<String, VertexId> = HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        let mut edge_names: HashMap<String, EdgeId> = HashMap::new();
        // Squares hold edge names until the whole file is read, so that
        // `square` lines may precede the edges they mention.
        let mut raw_squares: Vec<(usize, [String; 4])> = Vec::new();

        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.is_empty() {
                continue;
            }
            let syntax = |msg: String| ParseError::Syntax { line, msg };
            if rank.is_none() {
                if tokens[0] != "kgraph" {
                    return Err(syntax(format!(
                        "expected `kgraph k=<K>` header, found `{}`",
                        tokens[0]
                    )));
                }
                if tokens.len() != 2 {
                    return Err(syntax("header must be `kgraph k=<K>`".into()));
                }
                let k = parse_kv(tokens[1], "k")
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| syntax(format!("bad header field `{}`", tokens[1])))?;
                if k == 0 || k > 32 {
                    return Err(syntax(format!("rank {k} out of supported range 1..=32")));
                }
                rank = Some(k);
                continue;
            }
            let k = rank.unwrap();
            match tokens[0] {
                "kgraph" => {
                    return Err(syntax("duplicate `kgraph` header".into()));
                }
                "vertex" => {
                    if tokens.len() != 2 {
                        return Err(syntax("expected `vertex <id>`".into()));
                    }
                    let id = check_ident(tokens[1]).map_err(syntax)?;
                    if vertex_index.contains_key(id) {
                        return Err(ParseError::Duplicate {
                            line,
                            id: id.to_string(),
                        });
                    }
                    vertex_index.insert(id.to_string(), VertexId(vertex_names.len()));
                    vertex_names.push(id.to_string());
                }
                "extvertex" => {
                    // Window exports label formal vertices with their base
                    // vertex and offset; here the record just declares a
                    // vertex under the synthesized name the export's edges
                    // refer to.
                    if tokens.len() != 3 + k || tokens[1] != "New" {
                        return Err(syntax(format!(
                            "expected `extvertex New <base> <c1> ... <c{k}>`"
                        )));
                    }
                    let base = check_ident(tokens[2]).map_err(syntax)?;
                    let mut offsets = Vec::with_capacity(k);
                    for t in &tokens[3..] {
                        let c: u32 = t
                            .parse()
                            .map_err(|_| syntax(format!("bad offset `{t}`")))?;
                        offsets.push(c.to_string());
                    }
                    let id = format!("{}__{}", base, offsets.join("_"));
                    if vertex_index.contains_key(&id) {
                        return Err(ParseError::Duplicate { line, id });
                    }
                    vertex_index.insert(id.clone(), VertexId(vertex_names.len()));
                    vertex_names.push(id);
                }
                "edge" => {
                    if tokens.len() != 5 {
                        return Err(syntax(
                            "expected `edge <id> color=<i> from=<v> to=<w>`".into(),
                        ));
                    }
                    let id = check_ident(tokens[1]).map_err(syntax)?;
                    if edge_names.contains_key(id) {
                        return Err(ParseError::Duplicate {
                            line,
                            id: id.to_string(),
                        });
                    }
                    let color = parse_kv(tokens[2], "color")
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| syntax(format!("bad edge field `{}`", tokens[2])))?;
                    if color == 0 || color > k {
                        return Err(syntax(format!("color {color} out of range 1..={k}")));
                    }
                    let from = parse_kv(tokens[3], "from")
                        .ok_or_else(|| syntax(format!("bad edge field `{}`", tokens[3])))?;
                    let to = parse_kv(tokens[4], "to")
                        .ok_or_else(|| syntax(format!("bad edge field `{}`", tokens[4])))?;
                    let source = *vertex_index.get(from).ok_or(ParseError::UnknownReference {
                        line,
                        kind: "vertex",
                        id: from.to_string(),
                    })?;
                    let range = *vertex_index.get(to).ok_or(ParseError::UnknownReference {
                        line,
                        kind: "vertex",
                        id: to.to_string(),
                    })?;
                    edge_names.insert(id.to_string(), EdgeId(edges.len()));
                    edges.push(Edge {
                        name: id.to_string(),
                        color: color - 1,
                        source,
                        range,
                    });
                }
                "square" => {
                    if tokens.len() != 6 || tokens[3] != "=" {
                        return Err(syntax("expected `square <a> <b> = <c> <d>`".into()));
                    }
                    for t in [tokens[1], tokens[2], tokens[4], tokens[5]] {
                        check_ident(t).map_err(&syntax)?;
                    }
                    raw_squares.push((
                        line,
                        [
                            tokens[1].to_string(),
                            tokens[2].to_string(),
                            tokens[4].to_string(),
                            tokens[5].to_string(),
                        ],
                    ));
                }
                other => {
                    return Err(syntax(format!("unknown declaration `{other}`")));
                }
            }
        }

        let rank = rank.ok_or(ParseError::Syntax {
            line: text.lines().count() + 1,
            msg: "missing `kgraph k=<K>` header".into(),
        })?;
        let mut squares = Vec::with_capacity(raw_squares.len());
        for (line, names) in raw_squares {
            let mut ids = [EdgeId(0); 4];
            for (slot, name) in ids.iter_mut().zip(&names) {
                *slot = *edge_names
                    .get(name.as_str())
                    .ok_or(ParseError::UnknownReference {
                        line,
                        kind: "edge",
                        id: name.clone(),
                    })?;
            }
            squares.push(Square {
                left: (ids[0], ids[1]),
                right: (ids[2], ids[3]),
            });
        }
        Ok(Presentation::assemble(rank, vertex_names, edges, squares))
    }

    /// Serialize back to the `.kg` format. Output is deterministic and
    /// `parse(to_kg(p))` reproduces `p` exactly.
    pub fn to_kg(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("kgraph k={}\n", self.rank));
        for name in &self.vertex_names {
            out.push_str(&format!("vertex {name}\n"));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "edge {} color={} from={} to={}\n",
                e.name,
                e.color + 1,
                self.vertex_names[e.source.0],
                self.vertex_names[e.range.0]
            ));
        }
        for sq in &self.squares {
            out.push_str(&format!(
                "square {} {} = {} {}\n",
                self.edges[sq.left.0 .0].name,
                self.edges[sq.left.1 .0].name,
                self.edges[sq.right.0 .0].name,
                self.edges[sq.right.1 .0].name
            ));
        }
        out
    }

    /// Run the structural checks that make the square calculus sound:
    /// endpoint validity, square composability, square bijectivity, and
    /// (for rank >= 3) consistency of the squares on three-color words.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        report.add(
            "endpoint-validity",
            self.check_endpoints(),
        );
        report.add("square-composability", self.check_square_composability());
        report.add("square-bijectivity", self.check_square_bijectivity());
        report.add("cube-consistency", self.check_cube_consistency());
        report
    }

    fn check_endpoints(&self) -> Result<String, String> {
        for e in &self.edges {
            if e.source.0 >= self.vertex_names.len() || e.range.0 >= self.vertex_names.len() {
                return Err(format!("edge {} has an undeclared endpoint", e.name));
            }
            if e.color >= self.rank {
                return Err(format!(
                    "edge {} has color {} beyond rank {}",
                    e.name,
                    e.color + 1,
                    self.rank
                ));
            }
        }
        for sq in &self.squares {
            for id in [sq.left.0, sq.left.1, sq.right.0, sq.right.1] {
                if id.0 >= self.edges.len() {
                    return Err("square references an undeclared edge".into());
                }
            }
        }
        Ok(format!(
            "{} vertices, {} edges, {} squares",
            self.vertex_names.len(),
            self.edges.len(),
            self.squares.len()
        ))
    }

    fn check_square_composability(&self) -> Result<String, String> {
        for sq in &self.squares {
            let (a, b) = (self.edge(sq.left.0), self.edge(sq.left.1));
            let (c, d) = (self.edge(sq.right.0), self.edge(sq.right.1));
            let name = format!("{} {} = {} {}", a.name, b.name, c.name, d.name);
            if a.color >= b.color {
                return Err(format!(
                    "square {name}: left word colors must ascend, got {} then {}",
                    a.color + 1,
                    b.color + 1
                ));
            }
            if c.color != b.color || d.color != a.color {
                return Err(format!(
                    "square {name}: right word must traverse the same colors in reverse order"
                ));
            }
            if a.source != b.range {
                return Err(format!("square {name}: left word does not chain"));
            }
            if c.source != d.range {
                return Err(format!("square {name}: right word does not chain"));
            }
            if a.range != c.range {
                return Err(format!("square {name}: sides start at different ranges"));
            }
            if b.source != d.source {
                return Err(format!("square {name}: sides end at different sources"));
            }
        }
        Ok(format!("{} squares chain correctly", self.squares.len()))
    }

    fn check_square_bijectivity(&self) -> Result<String, String> {
        // Every composable two-color pair must appear exactly once as a
        // left side (colors ascending) and exactly once as a right side
        // (colors descending).
        let mut left_seen: HashMap<(EdgeId, EdgeId), usize> = HashMap::new();
        let mut right_seen: HashMap<(EdgeId, EdgeId), usize> = HashMap::new();
        for sq in &self.squares {
            *left_seen.entry(sq.left).or_insert(0) += 1;
            *right_seen.entry(sq.right).or_insert(0) += 1;
        }
        for e in self.edge_ids() {
            for f in self.edge_ids() {
                let (ee, ef) = (self.edge(e), self.edge(f));
                if ee.color == ef.color || ee.source != ef.range {
                    continue;
                }
                let pair_name = format!("({}, {})", ee.name, ef.name);
                let seen = if ee.color < ef.color {
                    left_seen.get(&(e, f)).copied().unwrap_or(0)
                } else {
                    right_seen.get(&(e, f)).copied().unwrap_or(0)
                };
                if seen == 0 {
                    return Err(format!("pair {pair_name} has no factorization square"));
                }
                if seen > 1 {
                    return Err(format!("pair {pair_name} appears in {seen} squares"));
                }
            }
        }
        Ok("every two-color pair factors through exactly one square".into())
    }

    fn check_cube_consistency(&self) -> Result<String, String> {
        if self.rank < 3 {
            return Ok("rank < 3, nothing to check".into());
        }
        let mut checked = 0usize;
        for e in self.edge_ids() {
            for f in self.edge_ids() {
                if self.edge(e).source != self.edge(f).range {
                    continue;
                }
                for g in self.edge_ids() {
                    if self.edge(f).source != self.edge(g).range {
                        continue;
                    }
                    let (c1, c2, c3) =
                        (self.edge(e).color, self.edge(f).color, self.edge(g).color);
                    if c1 == c2 || c1 == c3 || c2 == c3 {
                        continue;
                    }
                    let range = self.edge(e).range;
                    let word = vec![e, f, g];
                    let lhs = self.normalize_word(range, word.clone(), Strategy::Leftmost);
                    let rhs = self.normalize_word(range, word, Strategy::Rightmost);
                    match (lhs, rhs) {
                        (Ok(a), Ok(b)) if a == b => {}
                        (Ok(_), Ok(_)) => {
                            return Err(format!(
                                "word {}.{}.{} has two distinct normal forms",
                                self.edge(e).name,
                                self.edge(f).name,
                                self.edge(g).name
                            ));
                        }
                        (Err(err), _) | (_, Err(err)) => {
                            return Err(format!(
                                "word {}.{}.{} fails to normalize: {err}",
                                self.edge(e).name,
                                self.edge(f).name,
                                self.edge(g).name
                            ));
                        }
                    }
                    checked += 1;
                }
            }
        }
        Ok(format!("{checked} three-color words are confluent"))
    }

    /// Induced sub-presentation on a vertex subset: keeps edges with both
    /// endpoints retained and squares with all four edges retained. The
    /// result is closed under factorization when the subset is.
    pub fn restrict_to_vertices(&self, keep: &[VertexId]) -> Presentation {
        let mut kept = vec![false; self.vertex_names.len()];
        for v in keep {
            kept[v.0] = true;
        }
        let mut vertex_map = vec![None; self.vertex_names.len()];
        let mut vertex_names = Vec::new();
        for (i, name) in self.vertex_names.iter().enumerate() {
            if kept[i] {
                vertex_map[i] = Some(VertexId(vertex_names.len()));
                vertex_names.push(name.clone());
            }
        }
        let mut edge_map = vec![None; self.edges.len()];
        let mut edges = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if let (Some(s), Some(r)) = (vertex_map[e.source.0], vertex_map[e.range.0]) {
                edge_map[i] = Some(EdgeId(edges.len()));
                edges.push(Edge {
                    name: e.name.clone(),
                    color: e.color,
                    source: s,
                    range: r,
                });
            }
        }
        let mut squares = Vec::new();
        for sq in &self.squares {
            let ids = [sq.left.0, sq.left.1, sq.right.0, sq.right.1]
                .map(|id| edge_map[id.0]);
            if let [Some(a), Some(b), Some(c), Some(d)] = ids {
                squares.push(Square {
                    left: (a, b),
                    right: (c, d),
                });
            }
        }
        Presentation::assemble(self.rank, vertex_names, edges, squares)
    }
}

/// Assemble a presentation from named parts. Mirrors the text format but
/// without line numbers; used by generators and callers that build graphs
/// in code.
pub struct PresentationBuilder {
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<(String, usize, String, String)>,
    squares: Vec<[String; 4]>,
}

impl PresentationBuilder {
    pub fn new(rank: usize) -> Self {
        PresentationBuilder {
            rank,
            vertices: Vec::new(),
            edges: Vec::new(),
            squares: Vec::new(),
        }
    }

    pub fn vertex(&mut self, id: &str) -> &mut Self {
        self.vertices.push(id.to_string());
        self
    }

    /// `color` is 1-based to match the text format.
    pub fn edge(&mut self, id: &str, color: usize, from: &str, to: &str) -> &mut Self {
        self.edges
            .push((id.to_string(), color, from.to_string(), to.to_string()));
        self
    }

    pub fn square(&mut self, a: &str, b: &str, c: &str, d: &str) -> &mut Self {
        self.squares.push([
            a.to_string(),
            b.to_string(),
            c.to_string(),
            d.to_string(),
        ]);
        self
    }

    pub fn build(self) -> Result<Presentation, BuildError> {
        if self.rank == 0 || self.rank > 32 {
            return Err(BuildError::BadRank(self.rank));
        }
        let mut vertex_index: HashMap<String, VertexId> = HashMap::new();
        for (i, name) in self.vertices.iter().enumerate() {
            if vertex_index.insert(name.clone(), VertexId(i)).is_some() {
                return Err(BuildError::Duplicate(name.clone()));
            }
        }
        let mut edge_index: HashMap<String, EdgeId> = HashMap::new();
        let mut edges = Vec::new();
        for (name, color, from, to) in &self.edges {
            if edge_index.contains_key(name) {
                return Err(BuildError::Duplicate(name.clone()));
            }
            if *color == 0 || *color > self.rank {
                return Err(BuildError::ColorOutOfRange {
                    color: *color,
                    rank: self.rank,
                });
            }
            let source = *vertex_index
                .get(from)
                .ok_or_else(|| BuildError::UnknownVertex(from.clone()))?;
            let range = *vertex_index
                .get(to)
                .ok_or_else(|| BuildError::UnknownVertex(to.clone()))?;
            edge_index.insert(name.clone(), EdgeId(edges.len()));
            edges.push(Edge {
                name: name.clone(),
                color: color - 1,
                source,
                range,
            });
        }
        let mut squares = Vec::new();
        for names in &self.squares {
            let mut ids = [EdgeId(0); 4];
            for (slot, name) in ids.iter_mut().zip(names) {
                *slot = *edge_index
                    .get(name)
                    .ok_or_else(|| BuildError::UnknownEdge(name.clone()))?;
            }
            squares.push(Square {
                left: (ids[0], ids[1]),
                right: (ids[2], ids[3]),
            });
        }
        Ok(Presentation::assemble(
            self.rank,
            self.vertices,
            edges,
            squares,
        ))
    }
}

/// The grid category on `{p : p <= shape}`: one vertex per point, one
/// edge of color `i` from `p + e_i` down to `p`, and one square per unit
/// face. Vertices are named `x<p1>_<p2>_...`, edges `e<i>_<range point>`.
pub fn omega(shape: &Degree) -> Presentation {
    let rank = shape.rank();
    let mut b = PresentationBuilder::new(rank);
    let points = shape.descents();
    let coord = |p: &Degree| {
        p.components()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("_")
    };
    for p in &points {
        b.vertex(&format!("x{}", coord(p)));
    }
    for p in &points {
        for i in 0..rank {
            let above = p.add(&Degree::unit(rank, i));
            if above.leq(shape) {
                b.edge(
                    &format!("e{}_{}", i + 1, coord(p)),
                    i + 1,
                    &format!("x{}", coord(&above)),
                    &format!("x{}", coord(p)),
                );
            }
        }
    }
    for p in &points {
        for i in 0..rank {
            for j in (i + 1)..rank {
                let corner = p
                    .add(&Degree::unit(rank, i))
                    .add(&Degree::unit(rank, j));
                if !corner.leq(shape) {
                    continue;
                }
                let pi = p.add(&Degree::unit(rank, i));
                let pj = p.add(&Degree::unit(rank, j));
                b.square(
                    &format!("e{}_{}", i + 1, coord(p)),
                    &format!("e{}_{}", j + 1, coord(&pi)),
                    &format!("e{}_{}", j + 1, coord(p)),
                    &format!("e{}_{}", i + 1, coord(&pj)),
                );
            }
        }
    }
    b.build().expect("grid construction is internally consistent")
}

/// Wrap a directed multigraph as a rank-1 presentation. Edges are given
/// as `(id, source, range)`; there are no squares in rank 1.
pub fn from_digraph(
    vertices: &[&str],
    edges: &[(&str, &str, &str)],
) -> Result<Presentation, BuildError> {
    let mut b = PresentationBuilder::new(1);
    for v in vertices {
        b.vertex(v);
    }
    for (id, from, to) in edges {
        b.edge(id, 1, from, to);
    }
    b.build()
}

fn parse_kv<'a>(token: &'a str, key: &str) -> Option<&'a str> {
    let rest = token.strip_prefix(key)?.strip_prefix('=')?;
    if rest.is_empty() {
        None
    } else {
        Some(rest)
    }
}

fn check_ident(s: &str) -> Result<&str, String> {
    if !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
    {
        Ok(s)
    } else {
        Err(format!("invalid identifier `{s}`"))
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Presentation(rank={}, |V|={}, |E|={}, squares={})",
            self.rank,
            self.vertex_names.len(),
            self.edges.len(),
            self.squares.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demos;

    #[test]
    fn parse_accepts_comments_and_blank_lines() {
        let text = "\n# header comment\nkgraph k=2\nvertex v0 # trailing\nvertex v1\nedge a color=1 from=v1 to=v0\n";
        let p = Presentation::parse(text).unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.vertex_count(), 2);
        assert_eq!(p.edge_count(), 1);
        let e = p.edge(EdgeId(0));
        assert_eq!(p.vertex_name(e.source), "v1");
        assert_eq!(p.vertex_name(e.range), "v0");
    }

    #[test]
    fn parse_reports_line_numbers() {
        let text = "kgraph k=2\nvertex v0\nedge a color=3 from=v0 to=v0\n";
        let err = Presentation::parse(text).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 3, .. }), "{err}");
    }

    #[test]
    fn parse_rejects_duplicate_identifiers() {
        let text = "kgraph k=1\nvertex v0\nvertex v0\n";
        let err = Presentation::parse(text).unwrap_err();
        assert!(matches!(err, ParseError::Duplicate { line: 3, .. }), "{err}");
    }

    #[test]
    fn parse_rejects_unknown_vertex() {
        let text = "kgraph k=1\nvertex v0\nedge a color=1 from=v9 to=v0\n";
        let err = Presentation::parse(text).unwrap_err();
        assert!(
            matches!(err, ParseError::UnknownReference { line: 3, kind: "vertex", .. }),
            "{err}"
        );
    }

    #[test]
    fn parse_rejects_unknown_edge_in_square() {
        let text = "kgraph k=2\nvertex v0\nsquare a b = c d\n";
        let err = Presentation::parse(text).unwrap_err();
        assert!(
            matches!(err, ParseError::UnknownReference { line: 3, kind: "edge", .. }),
            "{err}"
        );
    }

    #[test]
    fn squares_may_precede_edges() {
        let text = "kgraph k=2\nvertex v0\nvertex v1\nvertex v2\nvertex v3\nsquare lam alpha = mu beta\nedge lam color=1 from=v1 to=v0\nedge beta color=1 from=v3 to=v2\nedge mu color=2 from=v2 to=v0\nedge alpha color=2 from=v3 to=v1\n";
        let p = Presentation::parse(text).unwrap();
        assert!(p.validate().pass());
    }

    #[test]
    fn header_must_come_first() {
        let err = Presentation::parse("vertex v0\nkgraph k=1\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, .. }), "{err}");
    }

    #[test]
    fn roundtrip_is_identity_on_demos() {
        for (name, p) in demos::all() {
            let text = p.to_kg();
            let q = Presentation::parse(&text).expect(name);
            assert_eq!(text, q.to_kg(), "roundtrip failed for {name}");
        }
    }

    #[test]
    fn validate_passes_on_demos() {
        for (name, p) in demos::all() {
            let report = p.validate();
            assert!(report.pass(), "{name}: {}", report.render());
        }
    }

    #[test]
    fn validate_flags_missing_square() {
        let p = demos::example42();
        let mut text = p.to_kg();
        text = text
            .lines()
            .filter(|l| !l.starts_with("square"))
            .collect::<Vec<_>>()
            .join("\n");
        let broken = Presentation::parse(&text).unwrap();
        let report = broken.validate();
        assert!(!report.pass());
        let failing = report.failing().expect("one check fails");
        assert_eq!(failing.name, "square-bijectivity");
        assert!(failing.detail.contains("no factorization"), "{}", failing.detail);
    }

    #[test]
    fn validate_flags_duplicated_pair() {
        let p = demos::example42();
        let mut text = p.to_kg();
        text.push_str("square lam alpha = mu beta\n");
        let broken = Presentation::parse(&text).unwrap();
        let report = broken.validate();
        assert!(!report.pass());
        assert_eq!(report.failing().unwrap().name, "square-bijectivity");
    }

    #[test]
    fn validate_flags_bad_chaining() {
        // alpha and beta swapped in the square: left word no longer chains.
        let text = "kgraph k=2\nvertex v0\nvertex v1\nvertex v2\nvertex v3\nedge lam color=1 from=v1 to=v0\nedge beta color=1 from=v3 to=v2\nedge mu color=2 from=v2 to=v0\nedge alpha color=2 from=v3 to=v1\nsquare lam mu = alpha beta\n";
        let p = Presentation::parse(text).unwrap();
        let report = p.validate();
        assert!(!report.pass());
        assert_eq!(report.failing().unwrap().name, "square-composability");
    }

    #[test]
    fn omega_shapes_are_valid() {
        for shape in [
            Degree::new(vec![1, 1]),
            Degree::new(vec![2, 2]),
            Degree::new(vec![3, 1]),
            Degree::new(vec![1, 1, 1]),
            Degree::new(vec![2, 1, 1]),
        ] {
            let p = omega(&shape);
            let report = p.validate();
            assert!(report.pass(), "omega{shape}: {}", report.render());
            let expected: u32 = shape
                .components()
                .iter()
                .map(|c| c + 1)
                .product();
            assert_eq!(p.vertex_count() as u32, expected);
        }
    }

    #[test]
    fn restriction_keeps_square_structure() {
        let big = omega(&Degree::new(vec![2, 2]));
        let keep: Vec<VertexId> = ["x0_0", "x1_0", "x0_1", "x1_1"]
            .iter()
            .map(|n| big.vertex(n).unwrap())
            .collect();
        let small = big.restrict_to_vertices(&keep);
        assert_eq!(small.vertex_count(), 4);
        assert_eq!(small.edge_count(), 4);
        assert_eq!(small.squares().len(), 1);
        assert!(small.validate().pass());
    }

    #[test]
    fn from_digraph_builds_rank_one() {
        let p = from_digraph(&["v", "w"], &[("a", "w", "v")]).unwrap();
        assert_eq!(p.rank(), 1);
        assert!(p.validate().pass());
        assert_eq!(p.received(p.vertex("v").unwrap(), 0).len(), 1);
        assert!(p.receives_nothing(p.vertex("w").unwrap()));

        let p = from_digraph(&["v"], &[("loop", "v", "v")]).unwrap();
        assert!(p.validate().pass());
        let e = p.edge(p.edge_by_name("loop").unwrap());
        assert_eq!(e.source, e.range);

        assert!(matches!(
            from_digraph(&["v"], &[("a", "v", "ghost")]),
            Err(BuildError::UnknownVertex(_))
        ));
    }
}
