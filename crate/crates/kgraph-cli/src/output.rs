//! Text renderers: DOT graphs, window exports, and matrix dumps.

use kgraph::ck::BoundaryRepresentation;
use kgraph::degree::Degree;
use kgraph::desingularize::{ExtVertex, Extension};
use kgraph::presentation::Presentation;

/// Styles for the first four colors; beyond that edges carry a numeric
/// color label instead.
const STYLES: [&str; 4] = ["solid", "dashed", "dotted", "bold"];

fn edge_attrs(color: usize, label: &str) -> String {
    if color < STYLES.len() {
        format!("style={} label=\"{}\"", STYLES[color], label)
    } else {
        format!("style=solid label=\"{} (color {})\"", label, color + 1)
    }
}

/// DOT rendering of the 1-skeleton; one arrow per edge, drawn from source
/// to range, styled by color.
pub fn dot_presentation(p: &Presentation) -> String {
    let mut out = String::from("digraph kgraph {\n");
    for v in p.vertices() {
        out.push_str(&format!("  \"{}\";\n", p.vertex_name(v)));
    }
    for e in p.edge_ids() {
        let edge = p.edge(e);
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [{}];\n",
            p.vertex_name(edge.source),
            p.vertex_name(edge.range),
            edge_attrs(edge.color, &edge.name)
        ));
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of a completion window. Original vertices are drawn with
/// a double border, formal ones with a single border.
pub fn dot_window(ext: &Extension, q: &Degree) -> String {
    let verts = ext.window_vertices(q);
    let mut out = String::from("digraph window {\n");
    for v in &verts {
        let peripheries = match v {
            ExtVertex::Base(_) => 2,
            ExtVertex::New { .. } => 1,
        };
        out.push_str(&format!(
            "  \"{}\" [peripheries={}];\n",
            ext.vertex_label(v),
            peripheries
        ));
    }
    for v in &verts {
        for color in 0..ext.rank() {
            let unit = Degree::unit(ext.rank(), color);
            for f in ext.paths(v, &unit) {
                let src = ext.source(&f);
                if !verts.contains(&src) {
                    continue;
                }
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [{}];\n",
                    ext.vertex_label(&src),
                    ext.vertex_label(v),
                    edge_attrs(color, &ext.path_label(&f))
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

fn window_vertex_id(ext: &Extension, v: &ExtVertex) -> String {
    match v {
        ExtVertex::Base(w) => ext.presentation().vertex_name(*w).to_string(),
        ExtVertex::New { base, offset } => {
            let coords: Vec<String> = offset
                .components()
                .iter()
                .map(|c| c.to_string())
                .collect();
            format!(
                "{}__{}",
                ext.presentation().vertex_name(*base),
                coords.join("_")
            )
        }
    }
}

/// Window export in the graph file format, extended with `extvertex`
/// records for the formal vertices. Edges reference formal vertices by
/// the synthesized identifier `<base>__<c1>_..._<ck>`.
pub fn window_kg(ext: &Extension, q: &Degree) -> String {
    let p = ext.presentation();
    let verts = ext.window_vertices(q);
    let mut out = String::new();
    out.push_str(&format!(
        "# window of the source-free completion, offsets bounded by {}\n",
        q
    ));
    out.push_str("# formal vertices are also addressable as <base>__<c1>_..._<ck>\n");
    out.push_str(&format!("kgraph k={}\n", p.rank()));
    for v in &verts {
        match v {
            ExtVertex::Base(w) => out.push_str(&format!("vertex {}\n", p.vertex_name(*w))),
            ExtVertex::New { base, offset } => {
                let coords: Vec<String> = offset
                    .components()
                    .iter()
                    .map(|c| c.to_string())
                    .collect();
                out.push_str(&format!(
                    "extvertex New {} {}\n",
                    p.vertex_name(*base),
                    coords.join(" ")
                ));
            }
        }
    }
    let mut idx = 0usize;
    let mut names: std::collections::HashMap<kgraph::desingularize::ExtPath, String> =
        std::collections::HashMap::new();
    for v in &verts {
        for color in 0..ext.rank() {
            let unit = Degree::unit(ext.rank(), color);
            for f in ext.paths(v, &unit) {
                let src = ext.source(&f);
                if !verts.contains(&src) {
                    continue;
                }
                let name = format!("we{}", idx);
                out.push_str(&format!(
                    "edge {} color={} from={} to={}\n",
                    name,
                    color + 1,
                    window_vertex_id(ext, &src),
                    window_vertex_id(ext, v)
                ));
                names.insert(f, name);
                idx += 1;
            }
        }
    }
    // Factorization squares restricted to the window. Both intermediate
    // vertices of a two-color composite sit inside the window whenever its
    // endpoints do, so every exported composable pair gets its square.
    for v in &verts {
        for i in 0..ext.rank() {
            for j in (i + 1)..ext.rank() {
                let target =
                    Degree::unit(ext.rank(), i).add(&Degree::unit(ext.rank(), j));
                for h in ext.paths(v, &target) {
                    if !verts.contains(&ext.source(&h)) {
                        continue;
                    }
                    let (a, b) = ext
                        .split(&h, &Degree::unit(ext.rank(), i))
                        .expect("unit split of a two-color composite");
                    let (c, d) = ext
                        .split(&h, &Degree::unit(ext.rank(), j))
                        .expect("unit split of a two-color composite");
                    let quad = [&a, &b, &c, &d].map(|f| {
                        names
                            .get(f)
                            .expect("window edges are closed under square factorization")
                            .as_str()
                    });
                    out.push_str(&format!(
                        "square {} {} = {} {}\n",
                        quad[0], quad[1], quad[2], quad[3]
                    ));
                }
            }
        }
    }
    out
}

/// Integer CSV dump of the matrix family: the basis order, then each
/// vertex and edge matrix, row-major.
pub fn ck_csv(rep: &BoundaryRepresentation) -> String {
    let p = rep.presentation();
    let mut out = String::new();
    let basis: Vec<String> = rep.basis().iter().map(|x| p.path_label(x)).collect();
    out.push_str(&format!("# basis ({} elements): {}\n", basis.len(), basis.join(", ")));
    out.push_str("# matrices are row-major over this basis\n");
    for v in p.vertices() {
        out.push_str(&format!("# vertex {}\n", p.vertex_name(v)));
        push_matrix(&mut out, &rep.vertex_matrix(v));
    }
    for e in p.edge_ids() {
        let edge = p.edge(e);
        let path = p
            .path_from_word(edge.range, &[e])
            .expect("an edge is a well-formed one-step path");
        out.push_str(&format!("# edge {}\n", edge.name));
        push_matrix(&mut out, &rep.path_matrix(&path));
    }
    out
}

fn push_matrix(out: &mut String, m: &kgraph::matrix::IntMatrix) {
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m[(i, j)].to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
}
