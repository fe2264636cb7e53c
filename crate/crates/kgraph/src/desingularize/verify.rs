//! Axiom checks for the completed graph.
//!
//! The completion is only as good as its category laws, so this module
//! exercises them directly on a finite window: identity laws and the
//! factorization property exhaustively (within an operation budget),
//! associativity on seeded random triples, plus degree additivity,
//! absence of sources, and local convexity. Violations surface as failing
//! report entries with a concrete counterexample, including the case
//! where the underlying square table is corrupt and the path engine
//! reports errors instead of producing paths.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::degree::Degree;
use crate::presentation::Presentation;
use crate::report::Report;

use super::{ExtPath, ExtVertex, Extension};

/// Tuning for [`verify_axioms`].
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Offset and degree bound for the window under test.
    pub window: Degree,
    /// Number of random triples for the associativity check.
    pub samples: usize,
    /// Seed for the deterministic sampler.
    pub seed: u64,
    /// Largest number of factorizations checked exhaustively; beyond this
    /// the factorization check falls back to seeded sampling.
    pub budget: usize,
}

impl VerifyOptions {
    pub fn new(window: Degree) -> VerifyOptions {
        VerifyOptions {
            window,
            samples: 500,
            seed: 0,
            budget: 100_000,
        }
    }
}

type PathCache = HashMap<(ExtVertex, Degree), Vec<ExtPath>>;

fn cached<'c>(
    cache: &'c mut PathCache,
    ext: &Extension,
    v: &ExtVertex,
    n: &Degree,
) -> &'c [ExtPath] {
    cache
        .entry((v.clone(), n.clone()))
        .or_insert_with(|| ext.paths(v, n))
}

fn random_degree(rng: &mut ChaCha8Rng, q: &Degree) -> Degree {
    Degree::new(
        q.components()
            .iter()
            .map(|&c| rng.gen_range(0..=c))
            .collect(),
    )
}

/// Runs the category-law checks on the window of the completion and
/// reports one entry per law.
pub fn verify_axioms(ext: &Extension, opts: &VerifyOptions) -> Report {
    let q = &opts.window;
    let wv = ext.window_vertices(q);
    let mut report = Report::new();
    let mut cache: PathCache = HashMap::new();
    let mut additivity_checked = 0usize;
    let mut additivity_failure: Option<String> = None;
    let note_additivity =
        |ext: &Extension,
         checked: &mut usize,
         failure: &mut Option<String>,
         f: &ExtPath,
         g: &ExtPath,
         fg: &ExtPath| {
            *checked += 1;
            if ext.degree(f).add(&ext.degree(g)) != ext.degree(fg) && failure.is_none() {
                *failure = Some(format!(
                    "d({}) + d({}) != d({})",
                    ext.path_label(f),
                    ext.path_label(g),
                    ext.path_label(fg)
                ));
            }
        };

    // Identity laws at every window vertex, against every outgoing path of
    // every unit degree plus a full-degree path when one exists.
    {
        let mut outcome: Result<String, String> = Ok(String::new());
        let mut compositions = 0usize;
        'identity: for v in &wv {
            let id = ext.identity(v);
            if ext.range(&id) != *v || ext.source(&id) != *v || !ext.degree(&id).is_zero() {
                outcome = Err(format!(
                    "identity at {} has wrong endpoints or degree",
                    ext.vertex_label(v)
                ));
                break 'identity;
            }
            let mut degrees: Vec<Degree> = (0..ext.rank())
                .map(|i| Degree::unit(ext.rank(), i))
                .collect();
            degrees.push(q.clone());
            for n in degrees {
                for f in cached(&mut cache, ext, v, &n).to_vec() {
                    compositions += 2;
                    match ext.compose(&id, &f) {
                        Ok(g) if g == f => {}
                        Ok(_) => {
                            outcome = Err(format!(
                                "left identity changed {}",
                                ext.path_label(&f)
                            ));
                            break 'identity;
                        }
                        Err(e) => {
                            outcome = Err(format!(
                                "left identity with {}: {}",
                                ext.path_label(&f),
                                e
                            ));
                            break 'identity;
                        }
                    }
                    let src_id = ext.identity(&ext.source(&f));
                    match ext.compose(&f, &src_id) {
                        Ok(g) if g == f => {}
                        Ok(_) => {
                            outcome = Err(format!(
                                "right identity changed {}",
                                ext.path_label(&f)
                            ));
                            break 'identity;
                        }
                        Err(e) => {
                            outcome = Err(format!(
                                "right identity with {}: {}",
                                ext.path_label(&f),
                                e
                            ));
                            break 'identity;
                        }
                    }
                }
            }
        }
        if outcome.is_ok() {
            outcome = Ok(format!(
                "{} identity compositions at {} vertices",
                compositions,
                wv.len()
            ));
        }
        report.add("identity-laws", outcome);
    }

    // Associativity on seeded random triples of composable paths.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut outcome: Result<String, String> = Ok(String::new());
        let mut done = 0usize;
        let mut attempts = 0usize;
        let max_attempts = opts.samples.saturating_mul(40).max(1);
        while done < opts.samples && attempts < max_attempts {
            attempts += 1;
            let v = wv[rng.gen_range(0..wv.len())].clone();
            let n1 = random_degree(&mut rng, q);
            let fs = cached(&mut cache, ext, &v, &n1);
            if fs.is_empty() {
                continue;
            }
            let f = fs[rng.gen_range(0..fs.len())].clone();
            let n2 = random_degree(&mut rng, q);
            let sf = ext.source(&f);
            let gs = cached(&mut cache, ext, &sf, &n2);
            if gs.is_empty() {
                continue;
            }
            let g = gs[rng.gen_range(0..gs.len())].clone();
            let n3 = random_degree(&mut rng, q);
            let sg = ext.source(&g);
            let hs = cached(&mut cache, ext, &sg, &n3);
            if hs.is_empty() {
                continue;
            }
            let h = hs[rng.gen_range(0..hs.len())].clone();
            let described = || {
                format!(
                    "({}, {}, {})",
                    ext.path_label(&f),
                    ext.path_label(&g),
                    ext.path_label(&h)
                )
            };
            let fg = match ext.compose(&f, &g) {
                Ok(x) => x,
                Err(e) => {
                    outcome = Err(format!("compose failed on {}: {}", described(), e));
                    break;
                }
            };
            note_additivity(
                ext,
                &mut additivity_checked,
                &mut additivity_failure,
                &f,
                &g,
                &fg,
            );
            let gh = match ext.compose(&g, &h) {
                Ok(x) => x,
                Err(e) => {
                    outcome = Err(format!("compose failed on {}: {}", described(), e));
                    break;
                }
            };
            let left = ext.compose(&fg, &h);
            let right = ext.compose(&f, &gh);
            match (left, right) {
                (Ok(a), Ok(b)) if a == b => {}
                (Ok(a), Ok(b)) => {
                    outcome = Err(format!(
                        "associativity broken on {}: {} vs {}",
                        described(),
                        ext.path_label(&a),
                        ext.path_label(&b)
                    ));
                    break;
                }
                (Err(e), _) | (_, Err(e)) => {
                    outcome = Err(format!("reassociation failed on {}: {}", described(), e));
                    break;
                }
            }
            done += 1;
        }
        if outcome.is_ok() {
            outcome = Ok(format!("{} random triples associate", done));
        }
        report.add("associativity", outcome);
    }

    // Factorization: every path of every degree within the window splits
    // uniquely at every intermediate degree. Existence and the splitting
    // formula are checked by recomposition; uniqueness by composing all
    // candidate pairs and comparing against the path list.
    {
        let degrees = q.descents();
        let mut estimate = 0usize;
        for v in &wv {
            for n in &degrees {
                let count = cached(&mut cache, ext, v, n).len();
                estimate = estimate.saturating_add(count * n.descents().len());
            }
        }
        let mut outcome: Result<String, String> = Ok(String::new());
        let mut splits = 0usize;
        if estimate <= opts.budget {
            'fact: for v in &wv {
                for n in &degrees {
                    let fs = cached(&mut cache, ext, v, n).to_vec();
                    for a in n.descents() {
                        let b = n.sub(&a);
                        // Recomposition of every split.
                        for f in &fs {
                            let (g, h) = match ext.split(f, &a) {
                                Ok(pair) => pair,
                                Err(e) => {
                                    outcome = Err(format!(
                                        "splitting {} at {}: {}",
                                        ext.path_label(f),
                                        a,
                                        e
                                    ));
                                    break 'fact;
                                }
                            };
                            splits += 1;
                            note_additivity(
                                ext,
                                &mut additivity_checked,
                                &mut additivity_failure,
                                &g,
                                &h,
                                f,
                            );
                            match ext.compose(&g, &h) {
                                Ok(back) if back == *f => {}
                                Ok(_) => {
                                    outcome = Err(format!(
                                        "split of {} at {} recomposes to a different path",
                                        ext.path_label(f),
                                        a
                                    ));
                                    break 'fact;
                                }
                                Err(e) => {
                                    outcome = Err(format!(
                                        "split of {} at {} does not recompose: {}",
                                        ext.path_label(f),
                                        a,
                                        e
                                    ));
                                    break 'fact;
                                }
                            }
                        }
                        // Uniqueness: composing all (g, h) pairs of degrees
                        // (a, b) from v yields each degree-n path exactly once.
                        let gs = cached(&mut cache, ext, v, &a).to_vec();
                        let mut produced = Vec::new();
                        for g in &gs {
                            let sg = ext.source(g);
                            for h in cached(&mut cache, ext, &sg, &b).to_vec() {
                                match ext.compose(g, &h) {
                                    Ok(fh) => produced.push(fh),
                                    Err(e) => {
                                        outcome = Err(format!(
                                            "composing {} with {}: {}",
                                            ext.path_label(g),
                                            ext.path_label(&h),
                                            e
                                        ));
                                        break 'fact;
                                    }
                                }
                            }
                        }
                        produced.sort();
                        let before = produced.len();
                        produced.dedup();
                        if produced.len() != before {
                            outcome = Err(format!(
                                "two factorizations of one path at {} with degrees {} + {}",
                                ext.vertex_label(v),
                                a,
                                b
                            ));
                            break 'fact;
                        }
                        if produced != fs {
                            outcome = Err(format!(
                                "factorization mismatch at {} for degrees {} + {}: {} composites vs {} paths",
                                ext.vertex_label(v),
                                a,
                                b,
                                produced.len(),
                                fs.len()
                            ));
                            break 'fact;
                        }
                    }
                }
            }
            if outcome.is_ok() {
                outcome = Ok(format!("{} splits verified exhaustively", splits));
            }
        } else {
            // Window too large for the budget: sample splits.
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(1));
            let mut done = 0usize;
            let mut attempts = 0usize;
            let max_attempts = opts.samples.saturating_mul(40).max(1);
            'sampled: while done < opts.samples && attempts < max_attempts {
                attempts += 1;
                let v = wv[rng.gen_range(0..wv.len())].clone();
                let n = random_degree(&mut rng, q);
                let fs = cached(&mut cache, ext, &v, &n);
                if fs.is_empty() {
                    continue;
                }
                let f = fs[rng.gen_range(0..fs.len())].clone();
                let a = random_degree(&mut rng, &n);
                match ext.split(&f, &a) {
                    Ok((g, h)) => {
                        note_additivity(
                            ext,
                            &mut additivity_checked,
                            &mut additivity_failure,
                            &g,
                            &h,
                            &f,
                        );
                        match ext.compose(&g, &h) {
                            Ok(back) if back == f => {}
                            _ => {
                                outcome = Err(format!(
                                    "split of {} at {} does not recompose",
                                    ext.path_label(&f),
                                    a
                                ));
                                break 'sampled;
                            }
                        }
                    }
                    Err(e) => {
                        outcome = Err(format!(
                            "splitting {} at {}: {}",
                            ext.path_label(&f),
                            a,
                            e
                        ));
                        break 'sampled;
                    }
                }
                done += 1;
            }
            if outcome.is_ok() {
                outcome = Ok(format!(
                    "{} sampled splits verified (window beyond exhaustive budget)",
                    done
                ));
            }
        }
        report.add("factorization", outcome);
    }

    // Degree additivity, accumulated over the passes above.
    {
        let outcome = match additivity_failure {
            None => Ok(format!("{} compositions are additive", additivity_checked)),
            Some(msg) => Err(msg),
        };
        report.add("degree-additivity", outcome);
    }

    // No sources: every window vertex receives at least one path of every
    // unit degree.
    {
        let mut outcome: Result<String, String> = Ok(String::new());
        'sources: for v in &wv {
            for i in 0..ext.rank() {
                let unit = Degree::unit(ext.rank(), i);
                if cached(&mut cache, ext, v, &unit).is_empty() {
                    outcome = Err(format!(
                        "{} receives nothing of color {}",
                        ext.vertex_label(v),
                        i + 1
                    ));
                    break 'sources;
                }
            }
        }
        if outcome.is_ok() {
            outcome = Ok(format!(
                "all {} window vertices receive every color",
                wv.len()
            ));
        }
        report.add("no-sources", outcome);
    }

    // Local convexity: the source of every received unit path receives
    // every other color in turn.
    {
        let mut outcome: Result<String, String> = Ok(String::new());
        let mut probes = 0usize;
        'convex: for v in &wv {
            for i in 0..ext.rank() {
                let unit = Degree::unit(ext.rank(), i);
                for f in cached(&mut cache, ext, v, &unit).to_vec() {
                    let src = ext.source(&f);
                    for j in 0..ext.rank() {
                        if i == j {
                            continue;
                        }
                        let unit_j = Degree::unit(ext.rank(), j);
                        probes += 1;
                        if cached(&mut cache, ext, &src, &unit_j).is_empty() {
                            outcome = Err(format!(
                                "{} has a color-{} step whose source lacks color {}",
                                ext.vertex_label(v),
                                i + 1,
                                j + 1
                            ));
                            break 'convex;
                        }
                    }
                }
            }
        }
        if outcome.is_ok() {
            outcome = Ok(format!("{} convexity probes", probes));
        }
        report.add("local-convexity", outcome);
    }

    report
}

/// Swaps the right-hand sides of the first two commuting squares, yielding
/// a deliberately corrupt presentation for fault-injection tests. Returns
/// `None` when the presentation has fewer than two squares.
pub fn corrupt_first_two_squares(p: &Presentation) -> Option<Presentation> {
    let text = p.to_kg();
    let mut lines: Vec<String> = text.lines().map(|l| l.to_string()).collect();
    let squares: Vec<usize> = lines
        .iter()
        .enumerate()
        .filter(|(_, l)| l.trim_start().starts_with("square "))
        .map(|(i, _)| i)
        .take(2)
        .collect();
    if squares.len() < 2 {
        return None;
    }
    let split_at_eq = |s: &str| -> Option<(String, String)> {
        let (l, r) = s.split_once(" = ")?;
        Some((l.to_string(), r.to_string()))
    };
    let (l0, r0) = split_at_eq(&lines[squares[0]])?;
    let (l1, r1) = split_at_eq(&lines[squares[1]])?;
    lines[squares[0]] = format!("{} = {}", l0, r1);
    lines[squares[1]] = format!("{} = {}", l1, r0);
    Presentation::parse(&lines.join("\n")).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demos;
    use crate::presentation::omega;

    fn deg(c: &[u32]) -> Degree {
        Degree::new(c.to_vec())
    }

    fn verify(p: &Presentation, window: &[u32]) -> Report {
        let ext = Extension::new(p);
        verify_axioms(&ext, &VerifyOptions::new(deg(window)))
    }

    #[test]
    fn axioms_hold_on_the_demos() {
        for (name, p) in demos::all() {
            let window = vec![2u32; p.rank()];
            let report = verify(&p, &window);
            assert!(report.pass(), "{}: {}", name, report.render());
        }
    }

    #[test]
    fn axioms_hold_on_a_grid_window() {
        let p = omega(&deg(&[2, 2]));
        let report = verify(&p, &[2, 2]);
        assert!(report.pass(), "{}", report.render());
        // The exhaustive factorization pass should engage on this size.
        let detail = &report.find("factorization").unwrap().detail;
        assert!(detail.contains("exhaustively"), "detail: {}", detail);
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = demos::example42();
        let ext = Extension::new(&p);
        let opts = VerifyOptions::new(deg(&[2, 2]));
        let a = verify_axioms(&ext, &opts).render();
        let b = verify_axioms(&ext, &opts).render();
        assert_eq!(a, b);
    }

    #[test]
    fn corrupt_square_table_is_flagged_with_a_counterexample() {
        let p = omega(&deg(&[2, 2]));
        let bad = corrupt_first_two_squares(&p).expect("grid has at least two squares");
        // The corruption is visible to the static validator...
        assert!(!bad.validate().pass());
        // ...and to the dynamic axiom checks, with a counterexample.
        let report = verify(&bad, &[2, 2]);
        assert!(!report.pass(), "{}", report.render());
        let failing = report.failing().unwrap();
        assert!(
            !failing.detail.is_empty(),
            "failure should carry a counterexample"
        );
    }

    #[test]
    fn corrupt_helper_needs_two_squares() {
        let p = demos::example43();
        assert!(corrupt_first_two_squares(&p).is_none());
    }

    #[test]
    fn budget_fallback_samples_instead() {
        let p = omega(&deg(&[2, 2]));
        let ext = Extension::new(&p);
        let mut opts = VerifyOptions::new(deg(&[2, 2]));
        opts.budget = 1;
        let report = verify_axioms(&ext, &opts);
        assert!(report.pass(), "{}", report.render());
        let detail = &report.find("factorization").unwrap().detail;
        assert!(detail.contains("sampled"), "detail: {}", detail);
    }
}
