//! Acceptance gate for the toolkit. Each test covers one headline claim,
//! prints a single `ACCEPTANCE <n> <name>: PASS|FAIL` line, and enforces
//! a wall-clock budget. Run with `--nocapture` to see the lines.

use std::collections::HashSet;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use kgraph::analysis;
use kgraph::ck::BoundaryRepresentation;
use kgraph::degree::{ColorSet, Degree};
use kgraph::demos;
use kgraph::desingularize::{
    self, raw, verify, Extension, ExtVertex, VerifyOptions,
};
use kgraph::path::Path;
use kgraph::presentation::omega;

/// Runs one criterion, prints its verdict line, and enforces the budget.
fn gate<F: FnOnce() + std::panic::UnwindSafe>(n: usize, name: &str, budget: Duration, body: F) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let verdict = if outcome.is_ok() && elapsed <= budget {
        "PASS"
    } else {
        "FAIL"
    };
    println!(
        "ACCEPTANCE {} {}: {} ({:?}, budget {:?})",
        n, name, verdict, elapsed, budget
    );
    if let Err(cause) = outcome {
        resume_unwind(cause);
    }
    assert!(
        elapsed <= budget,
        "criterion {} exceeded its {:?} budget: {:?}",
        n,
        budget,
        elapsed
    );
}

fn total_boundary_paths(p: &kgraph::presentation::Presentation) -> usize {
    p.vertices()
        .map(|v| {
            analysis::boundary_paths(p, v)
                .expect("acyclic demo")
                .len()
        })
        .sum()
}

#[test]
fn a1_boundary_path_counts() {
    gate(1, "boundary-path-counts", Duration::from_secs(1), || {
        assert_eq!(total_boundary_paths(&demos::example42()), 4);
        assert_eq!(total_boundary_paths(&demos::example43()), 4);
    });
}

#[test]
fn a2_filled_square_completes_to_quadrant_grid() {
    gate(2, "completion-window-is-grid", Duration::from_secs(1), || {
        let p = demos::example42();
        let ext = Extension::new(&p);
        let q = Degree::new(vec![2, 2]);
        assert_eq!(ext.window_vertices(&q).len(), 16);
        let grid = omega(&Degree::new(vec![3, 3]));
        assert!(desingularize::windows_isomorphic(&ext, &q, &grid));
    });
}

#[test]
fn a3_two_sheet_completion_meets_only_at_the_origin() {
    gate(3, "sheets-meet-only-at-origin", Duration::from_secs(1), || {
        let p = demos::example43();
        let v0 = p.vertex("v0").unwrap();
        let v1 = p.vertex("v1").unwrap();
        let v2 = p.vertex("v2").unwrap();
        let ext = Extension::new(&p);
        let verts = ext.window_vertices(&Degree::new(vec![2, 2]));
        assert_eq!(verts.len(), 23);
        let mut sheet1 = HashSet::new();
        let mut sheet2 = HashSet::new();
        for v in &verts {
            if let ExtVertex::New { base, offset } = v {
                if *base == v0 {
                    let both = offset.components().iter().all(|&c| c > 0);
                    assert!(!both, "formal vertex over v0 mixes both colors: {:?}", v);
                }
                if *base == v1 {
                    sheet1.insert(offset.clone());
                }
                if *base == v2 {
                    sheet2.insert(offset.clone());
                }
            }
        }
        assert_eq!(sheet1.len(), 8);
        assert_eq!(sheet2.len(), 8);
        // Same offset lattice over different bases, never the same vertex.
        assert!(verts.iter().collect::<HashSet<_>>().len() == verts.len());
    });
}

#[test]
fn a4_matrix_algebra_dimensions() {
    gate(4, "algebra-dimensions", Duration::from_secs(1), || {
        let p = demos::example42();
        let rep = BoundaryRepresentation::new(&p).unwrap();
        assert_eq!(rep.dimension(), (16, vec![4]));
        let p = demos::example43();
        let rep = BoundaryRepresentation::new(&p).unwrap();
        assert_eq!(rep.dimension(), (8, vec![2, 2]));
    });
}

#[test]
fn a5_head_chains_match_the_completion() {
    gate(5, "head-chains-match-completion", Duration::from_secs(1), || {
        for p in [demos::example41a(), demos::example41b()] {
            let report = desingularize::compare_add_heads(&p, 6).unwrap();
            assert!(report.pass(), "{}", report.render());
            assert!(report.find("head-vertex-bijection").unwrap().pass);
        }
    });
}

#[test]
fn a6_axiom_suite_with_fault_injection() {
    gate(6, "axiom-suite", Duration::from_secs(10), || {
        let demos = [
            ("example42", demos::example42()),
            ("example43", demos::example43()),
            ("omega22", demos::omega22()),
            ("example41a", demos::example41a()),
            ("example41b", demos::example41b()),
        ];
        for (name, p) in &demos {
            let ext = Extension::new(p);
            let opts = VerifyOptions::new(Degree::new(vec![2; p.rank()]));
            assert_eq!(opts.samples, 500);
            assert_eq!(opts.seed, 0);
            let report = desingularize::verify_axioms(&ext, &opts);
            assert!(report.pass(), "{}: {}", name, report.render());
        }
        let bad = verify::corrupt_first_two_squares(&demos::omega22())
            .expect("grid has at least two squares");
        let ext = Extension::new(&bad);
        let opts = VerifyOptions::new(Degree::new(vec![2, 2]));
        let report = desingularize::verify_axioms(&ext, &opts);
        assert!(!report.pass(), "swapped squares went undetected");
        let failing = report.failing().unwrap();
        assert!(
            !failing.detail.is_empty(),
            "fault report carries no counterexample"
        );
    });
}

#[test]
fn a7_minimal_extensions_and_exhaustive_sets_survive_completion() {
    gate(7, "preservation-lemmas", Duration::from_secs(5), || {
        for (name, p) in demos::all() {
            let ext = Extension::new(&p);
            let q = Degree::new(vec![2; p.rank()]);
            let report = ext.lambda_min_preserved(&q).unwrap();
            assert!(report.pass(), "{}: {}", name, report.render());
            for v in p.vertices() {
                let set = vec![Path::identity(v, p.rank())];
                assert!(
                    ext.exhaustive_preserved(v, &set, &q).unwrap(),
                    "{}: singleton identity at {} loses exhaustivity",
                    name,
                    p.vertex_name(v)
                );
            }
        }
        let p = demos::example42();
        let ext = Extension::new(&p);
        let v0 = p.vertex("v0").unwrap();
        let lam = p
            .path_from_word(v0, &[p.edge_by_name("lam").unwrap()])
            .unwrap();
        let q = Degree::new(vec![2, 2]);
        assert!(ext.exhaustive_preserved(v0, &[lam], &q).unwrap());
    });
}

#[test]
fn a8_defect_relations_agree_on_the_convex_demo() {
    gate(8, "relation-equivalence", Duration::from_secs(5), || {
        let p = demos::example42();
        let rep = BoundaryRepresentation::new(&p).unwrap();
        let report = rep.check_relations(&Degree::new(vec![2, 2]));
        assert!(report.pass(), "{}", report.render());
        let convex = report.find("convex-resolution").unwrap();
        assert!(convex.pass && !convex.detail.contains("skipped"));
        let exhaustive = report.find("exhaustive-sets").unwrap();
        assert!(exhaustive.pass);
    });
}

#[test]
fn a9_oracle_cross_checks() {
    gate(9, "oracle-cross-checks", Duration::from_secs(30), || {
        // Canonical arithmetic against the raw interval model, exhaustively
        // over the degree-(2,2) slab of both rank-2 demos.
        for p in [demos::example42(), demos::example43()] {
            let ext = Extension::new(&p);
            let q = Degree::new(vec![2, 2]);
            let mut slab = Vec::new();
            for v in ext.window_vertices(&q) {
                for n in q.descents() {
                    slab.extend(ext.paths(&v, &n));
                }
            }
            for f in &slab {
                let rf = raw::representative(&ext, f).unwrap();
                assert_eq!(raw::to_canonical(&ext, &rf).unwrap(), *f);
                assert_eq!(rf.degree(), ext.degree(f));
                for a in ext.degree(f).descents() {
                    let (left, right) = ext.split(f, &a).unwrap();
                    let rl = raw::representative(&ext, &left).unwrap();
                    let rr = raw::representative(&ext, &right).unwrap();
                    let joined = raw::compose(&p, &rl, &rr).unwrap();
                    assert!(raw::paths_equivalent(&p, &joined, &rf).unwrap());
                }
            }
            for f in &slab {
                let rf = raw::representative(&ext, f).unwrap();
                for g in &slab {
                    let canonical = ext.compose(f, g);
                    let rg = raw::representative(&ext, g).unwrap();
                    let rawwise = raw::compose(&p, &rf, &rg);
                    assert_eq!(
                        canonical.is_ok(),
                        rawwise.is_ok(),
                        "composability verdicts split on {:?} . {:?}",
                        f,
                        g
                    );
                    if let (Ok(c), Ok(r)) = (canonical, rawwise) {
                        assert_eq!(raw::to_canonical(&ext, &r).unwrap(), c);
                    }
                }
            }
        }
        // Flatness oracle against bounded brute force, all demos and all
        // color subsets.
        for (name, p) in demos::all() {
            let cap = 2 * p.vertex_count() as u32 + 2;
            for v in p.vertices() {
                for mask in 0..(1u32 << p.rank()) {
                    let mut avoid = ColorSet::empty(p.rank());
                    for c in 0..p.rank() {
                        if mask & (1 << c) != 0 {
                            avoid.insert(c);
                        }
                    }
                    assert_eq!(
                        analysis::flat(&p, v, &avoid),
                        analysis::flat_bruteforce(&p, v, &avoid, cap),
                        "{}: flat({}, {}) disagrees with brute force",
                        name,
                        p.vertex_name(v),
                        avoid
                    );
                }
            }
        }
        // Fast source test against the naive box scan.
        for (name, p) in demos::all() {
            let cap = p.vertex_count() as u32 + 2;
            for v in p.vertices() {
                assert_eq!(
                    analysis::is_source(&p, v),
                    analysis::naive_source_search(&p, v, cap),
                    "{}: source test disagrees at {}",
                    name,
                    p.vertex_name(v)
                );
            }
        }
    });
}
