//! `kg`: command-line front end for finitely presented higher-rank graphs.

use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kgraph::analysis;
use kgraph::ck::BoundaryRepresentation;
use kgraph::degree::{ColorSet, Degree};
use kgraph::demos;
use kgraph::desingularize::{self, Extension, VerifyOptions};
use kgraph::presentation::{omega, Presentation};
use kgraph::report::Report;

mod output;

#[derive(Parser)]
#[command(
    name = "kg",
    version,
    about = "Inspect higher-rank graph presentations, complete away their sources, and check the results"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a graph file and check its structural invariants.
    Validate {
        /// Input .kg file.
        file: PathBuf,
    },
    /// Summarize cycles, sources, convexity, flatness, and boundary paths.
    Analyze {
        /// Input .kg file.
        file: PathBuf,
    },
    /// Export a window of the source-free completion.
    Desingularize {
        /// Input .kg file.
        file: PathBuf,
        /// Offset bound, comma-separated, one entry per color (default 2,2,...).
        #[arg(long)]
        window: Option<String>,
        /// Write the window here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the category-law checks on a window of the completion.
    Verify {
        /// Input .kg file.
        file: PathBuf,
        /// Window bound, comma-separated (default 2,2,...).
        #[arg(long)]
        window: Option<String>,
        /// Seed for the random associativity triples.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random associativity triples.
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Build the boundary matrix model and check its relations.
    Ck {
        /// Input .kg file (must be acyclic).
        file: PathBuf,
        /// Degree bound for the relation checks (default 2,2,...).
        #[arg(long)]
        bound: Option<String>,
        /// Write an integer CSV dump of the matrix family here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test two presentations for colored-graph isomorphism; with --window,
    /// compare the completion window of the first against the second.
    Isocheck {
        /// First .kg file.
        first: PathBuf,
        /// Second .kg file.
        second: PathBuf,
        /// Compare window of the first file's completion at this bound.
        #[arg(long)]
        window: Option<String>,
    },
    /// Compare the completion of a rank-1 graph with the head-chain
    /// construction.
    Addheads {
        /// Input .kg file (rank 1).
        file: PathBuf,
        /// Chain length and window bound.
        #[arg(long, default_value_t = 3)]
        bound: u32,
        /// Write the chained graph here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in example; omit the name to list them.
    Demo {
        /// Demo name, or "omega" for a grid.
        name: Option<String>,
        /// Window bound for the completion (default 2,2,...).
        #[arg(long)]
        window: Option<String>,
        /// Grid shape for the omega demo (default 2,2).
        #[arg(long)]
        shape: Option<String>,
        /// Write the demo presentation here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the 1-skeleton, or a completion window, as DOT.
    ExportDot {
        /// Input .kg file.
        file: PathBuf,
        /// Export the completion window at this bound instead of the skeleton.
        #[arg(long)]
        window: Option<String>,
        /// Write the DOT text here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Errors that should exit with the usage/parse code.
struct UsageError(String);

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes, like other line-oriented
    // unix tools, instead of panicking mid-report.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}

fn load(file: &FsPath) -> Result<Presentation, UsageError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| UsageError(format!("cannot read {}: {}", file.display(), e)))?;
    Presentation::parse(&text)
        .map_err(|e| UsageError(format!("{}: {}", file.display(), e)))
}

fn parse_window(arg: &Option<String>, rank: usize, what: &str) -> Result<Degree, UsageError> {
    match arg {
        None => Ok(Degree::new(vec![2; rank])),
        Some(s) => {
            let parts: Result<Vec<u32>, _> =
                s.split(',').map(|p| p.trim().parse::<u32>()).collect();
            let parts =
                parts.map_err(|_| UsageError(format!("{} must be comma-separated numbers", what)))?;
            if parts.len() != rank {
                return Err(UsageError(format!(
                    "{} has {} entries but the graph has rank {}",
                    what,
                    parts.len(),
                    rank
                )));
            }
            Ok(Degree::new(parts))
        }
    }
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), UsageError> {
    match out {
        Some(path) => {
            std::fs::write(path, text)
                .map_err(|e| UsageError(format!("cannot write {}: {}", path.display(), e)))?;
            println!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

/// Prints a report with an optional prefix swap and returns whether it passed.
fn print_report(report: &Report, prefix: Option<&str>) -> bool {
    match prefix {
        None => print!("{}", report.render()),
        Some(p) => {
            for line in report.render().lines() {
                println!("{}", line.replacen("CHECK ", &format!("{} ", p), 1));
            }
        }
    }
    report.pass()
}

fn run(cli: Cli) -> Result<bool, UsageError> {
    match cli.command {
        Command::Validate { file } => {
            let p = load(&file)?;
            Ok(print_report(&p.validate(), None))
        }
        Command::Analyze { file } => {
            let p = load(&file)?;
            let report = p.validate();
            let ok = print_report(&report, None);
            println!("rank: {}", p.rank());
            println!(
                "vertices: {}  edges: {}  squares: {}",
                p.vertex_count(),
                p.edge_count(),
                p.squares().len()
            );
            let acyclic = analysis::is_acyclic(&p);
            println!("acyclic: {}", acyclic);
            match analysis::local_convexity(&p) {
                Ok(()) => println!("locally-convex: true"),
                Err(w) => println!("locally-convex: false ({})", w),
            }
            let sources: Vec<&str> = p
                .vertices()
                .filter(|&v| analysis::is_source(&p, v))
                .map(|v| p.vertex_name(v))
                .collect();
            println!(
                "sources: {}",
                if sources.is_empty() {
                    "none".to_string()
                } else {
                    sources.join(" ")
                }
            );
            if acyclic {
                let total: usize = p
                    .vertices()
                    .map(|v| analysis::boundary_paths(&p, v).map(|b| b.len()).unwrap_or(0))
                    .sum();
                println!("boundary-paths: {}", total);
            } else {
                println!("boundary-paths: unbounded (graph has cycles)");
            }
            if p.rank() <= 3 {
                for v in p.vertices() {
                    let mut holds = Vec::new();
                    for mask in 0..(1u32 << p.rank()) {
                        let mut s = ColorSet::empty(p.rank());
                        for c in 0..p.rank() {
                            if mask & (1 << c) != 0 {
                                s.insert(c);
                            }
                        }
                        if analysis::flat(&p, v, &s) {
                            holds.push(s.to_string());
                        }
                    }
                    println!("flat {}: {}", p.vertex_name(v), holds.join(" "));
                }
            }
            Ok(ok)
        }
        Command::Desingularize { file, window, out } => {
            let p = load(&file)?;
            let report = p.validate();
            if !report.pass() {
                print_report(&report, None);
                return Ok(false);
            }
            let q = parse_window(&window, p.rank(), "--window")?;
            let ext = Extension::new(&p);
            let text = output::window_kg(&ext, &q);
            write_or_print(&out, &text)?;
            if out.is_some() {
                println!(
                    "window {}: {} vertices",
                    q,
                    ext.window_vertices(&q).len()
                );
            }
            Ok(true)
        }
        Command::Verify {
            file,
            window,
            seed,
            samples,
        } => {
            let p = load(&file)?;
            let report = p.validate();
            if !report.pass() {
                print_report(&report, None);
                return Ok(false);
            }
            let q = parse_window(&window, p.rank(), "--window")?;
            let ext = Extension::new(&p);
            let mut opts = VerifyOptions::new(q.clone());
            opts.seed = seed;
            opts.samples = samples;
            let mut report = desingularize::verify_axioms(&ext, &opts);
            match ext.lambda_min_preserved(&q) {
                Ok(r) => report.merge(r),
                Err(e) => report.add("lambda-min-preserved", Err(e.to_string())),
            }
            let mut preserved = 0usize;
            let mut failure: Option<String> = None;
            for v in p.vertices() {
                let idset = vec![kgraph::path::Path::identity(v, p.rank())];
                match ext.exhaustive_preserved(v, &idset, &q) {
                    Ok(true) => preserved += 1,
                    Ok(false) => {
                        failure = Some(format!(
                            "identity at {} loses exhaustivity",
                            p.vertex_name(v)
                        ));
                        break;
                    }
                    Err(e) => {
                        failure = Some(e.to_string());
                        break;
                    }
                }
            }
            report.add(
                "exhaustive-preserved",
                match failure {
                    None => Ok(format!("{} singleton identity sets stay exhaustive", preserved)),
                    Some(msg) => Err(msg),
                },
            );
            Ok(print_report(&report, None))
        }
        Command::Ck { file, bound, out } => {
            let p = load(&file)?;
            let report = p.validate();
            if !report.pass() {
                print_report(&report, None);
                return Ok(false);
            }
            let b = parse_window(&bound, p.rank(), "--bound")?;
            let rep = match BoundaryRepresentation::new(&p) {
                Ok(rep) => rep,
                Err(e) => {
                    println!("CK-CHECK build FAIL: {}", e);
                    return Ok(false);
                }
            };
            let ok = print_report(&rep.check_relations(&b), Some("CK-CHECK"));
            let (dim, blocks) = rep.dimension();
            let blocks: Vec<String> = blocks.iter().map(|b| b.to_string()).collect();
            println!("dimension: {} blocks: [{}]", dim, blocks.join(", "));
            if let Some(path) = out {
                let dump = output::ck_csv(&rep);
                std::fs::write(&path, dump)
                    .map_err(|e| UsageError(format!("cannot write {}: {}", path.display(), e)))?;
                println!("wrote {}", path.display());
            }
            Ok(ok)
        }
        Command::Isocheck {
            first,
            second,
            window,
        } => {
            let a = load(&first)?;
            let b = load(&second)?;
            let iso = match &window {
                Some(_) => {
                    let q = parse_window(&window, a.rank(), "--window")?;
                    let ext = Extension::new(&a);
                    desingularize::windows_isomorphic(&ext, &q, &b)
                }
                None => desingularize::Skeleton::from_presentation(&a)
                    .isomorphic(&desingularize::Skeleton::from_presentation(&b)),
            };
            let mut report = Report::new();
            report.add(
                "isomorphic",
                if iso {
                    Ok("colored multigraphs match".into())
                } else {
                    Err("no color-preserving vertex bijection exists".into())
                },
            );
            Ok(print_report(&report, None))
        }
        Command::Addheads { file, bound, out } => {
            let p = load(&file)?;
            match desingularize::compare_add_heads(&p, bound) {
                Ok(report) => {
                    let ok = print_report(&report, None);
                    if let Some(path) = out {
                        let gamma = desingularize::add_heads(&p, bound)
                            .expect("comparison already used the same construction");
                        std::fs::write(&path, gamma.to_kg()).map_err(|e| {
                            UsageError(format!("cannot write {}: {}", path.display(), e))
                        })?;
                        println!("wrote {}", path.display());
                    }
                    Ok(ok)
                }
                Err(e) => {
                    let mut report = Report::new();
                    report.add("head-chains", Err(e.to_string()));
                    print_report(&report, None);
                    Ok(false)
                }
            }
        }
        Command::Demo {
            name,
            window,
            shape,
            out,
        } => {
            let name = match name {
                Some(n) => n,
                None => {
                    println!("available demos: {} omega", demos::names().join(" "));
                    return Ok(true);
                }
            };
            let p = if name == "omega" {
                let shape_deg = match &shape {
                    None => Degree::new(vec![2, 2]),
                    Some(s) => {
                        let parts: Result<Vec<u32>, _> =
                            s.split(',').map(|p| p.trim().parse::<u32>()).collect();
                        Degree::new(parts.map_err(|_| {
                            UsageError("--shape must be comma-separated numbers".into())
                        })?)
                    }
                };
                omega(&shape_deg)
            } else {
                demos::by_name(&name).ok_or_else(|| {
                    UsageError(format!(
                        "unknown demo {}; available: {} omega",
                        name,
                        demos::names().join(" ")
                    ))
                })?
            };
            if let Some(path) = &out {
                std::fs::write(path, p.to_kg())
                    .map_err(|e| UsageError(format!("cannot write {}: {}", path.display(), e)))?;
                println!("wrote {}", path.display());
            }
            let mut report = p.validate();
            let q = parse_window(&window, p.rank(), "--window")?;
            let ext = Extension::new(&p);
            let wv = ext.window_vertices(&q);
            println!("window {}: {} vertices", q, wv.len());
            if name == "example42" {
                // The completion of the filled square is a full grid one
                // step larger than the window in each direction.
                let grid_shape =
                    Degree::new(q.components().iter().map(|c| c + 1).collect());
                let grid = omega(&grid_shape);
                report.add(
                    "window-is-grid",
                    if desingularize::windows_isomorphic(&ext, &q, &grid) {
                        Ok(format!("isomorphic to the full grid of shape {}", grid_shape))
                    } else {
                        Err(format!("not isomorphic to the grid of shape {}", grid_shape))
                    },
                );
            }
            if name == "example43" {
                let v0 = p.vertex("v0").expect("demo has v0");
                let mixed = wv.iter().any(|v| match v {
                    kgraph::desingularize::ExtVertex::New { base, offset } => {
                        *base == v0 && offset.support().iter().count() > 1
                    }
                    _ => false,
                });
                report.add(
                    "sheets-meet-only-at-origin",
                    if mixed {
                        Err("a formal vertex over v0 mixes both colors".into())
                    } else {
                        Ok("no formal vertex over v0 mixes colors; the sheets stay disjoint"
                            .into())
                    },
                );
            }
            let ok = print_report(&report, None);
            if analysis::is_acyclic(&p) {
                let rep = BoundaryRepresentation::new(&p)
                    .expect("acyclic presentations have a finite basis");
                let (dim, blocks) = rep.dimension();
                let blocks: Vec<String> = blocks.iter().map(|b| b.to_string()).collect();
                println!("ck dimension {} blocks [{}]", dim, blocks.join(", "));
            }
            Ok(ok)
        }
        Command::ExportDot { file, window, out } => {
            let p = load(&file)?;
            let text = match &window {
                Some(_) => {
                    let q = parse_window(&window, p.rank(), "--window")?;
                    let ext = Extension::new(&p);
                    output::dot_window(&ext, &q)
                }
                None => output::dot_presentation(&p),
            };
            write_or_print(&out, &text)?;
            Ok(true)
        }
    }
}
