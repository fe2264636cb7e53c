//! Compiled-in example presentations used by the CLI and the test suite.

use crate::degree::Degree;
use crate::presentation::{omega, Presentation, PresentationBuilder};

/// Rank-1 chain `w -> v`: one edge received by `v`, nothing received by `w`.
pub fn example41a() -> Presentation {
    let mut b = PresentationBuilder::new(1);
    b.vertex("v").vertex("w").edge("a", 1, "w", "v");
    b.build().unwrap()
}

/// Rank-1 graph with a loop at `u` plus a pendant vertex `w` feeding `u`.
/// `w` receives nothing; `u` is reached by both the loop and the pendant.
pub fn example41b() -> Presentation {
    let mut b = PresentationBuilder::new(1);
    b.vertex("u")
        .vertex("w")
        .edge("loop", 1, "u", "u")
        .edge("pend", 1, "w", "u");
    b.build().unwrap()
}

/// Rank-2 graph on four vertices with a single commuting square
/// `lam.alpha = mu.beta`. The unit grid with its corner names kept.
pub fn example42() -> Presentation {
    let mut b = PresentationBuilder::new(2);
    b.vertex("v0")
        .vertex("v1")
        .vertex("v2")
        .vertex("v3")
        .edge("lam", 1, "v1", "v0")
        .edge("beta", 1, "v3", "v2")
        .edge("mu", 2, "v2", "v0")
        .edge("alpha", 2, "v3", "v1")
        .square("lam", "alpha", "mu", "beta");
    b.build().unwrap()
}

/// Rank-2 graph on three vertices and no squares: one edge of each color
/// received at `v0`, with sources `v1` and `v2`. The two colors never
/// interleave, so the only common vertex of the two directions is `v0`.
pub fn example43() -> Presentation {
    let mut b = PresentationBuilder::new(2);
    b.vertex("v0")
        .vertex("v1")
        .vertex("v2")
        .edge("lam", 1, "v1", "v0")
        .edge("mu", 2, "v2", "v0");
    b.build().unwrap()
}

/// Rank-1 graph with a single vertex and a single loop.
pub fn loop_graph() -> Presentation {
    let mut b = PresentationBuilder::new(1);
    b.vertex("v").edge("loop", 1, "v", "v");
    b.build().unwrap()
}

/// The rank-2 grid on `[0..2] x [0..2]`.
pub fn omega22() -> Presentation {
    omega(&Degree::new(vec![2, 2]))
}

/// Every named demo, for exhaustive test sweeps.
pub fn all() -> Vec<(&'static str, Presentation)> {
    vec![
        ("example41a", example41a()),
        ("example41b", example41b()),
        ("example42", example42()),
        ("example43", example43()),
        ("loop", loop_graph()),
        ("omega22", omega22()),
    ]
}

/// Look up a demo by CLI name.
pub fn by_name(name: &str) -> Option<Presentation> {
    match name {
        "example41a" => Some(example41a()),
        "example41b" => Some(example41b()),
        "example42" => Some(example42()),
        "example43" => Some(example43()),
        "loop" => Some(loop_graph()),
        "omega22" => Some(omega22()),
        _ => None,
    }
}

pub fn names() -> &'static [&'static str] {
    &[
        "example41a",
        "example41b",
        "example42",
        "example43",
        "loop",
        "omega22",
    ]
}
