//! Toolkit for finitely presented higher-rank graphs.
//!
//! The library models a rank-k graph by a k-colored multigraph plus a
//! square table, works with its paths in color-ordered normal form, and
//! provides:
//!
//! - structural validation of presentations ([`presentation`]);
//! - path arithmetic: composition, factorization, enumeration ([`path`]);
//! - degree-based analysis: complete paths, flatness, minimal common
//!   extensions, exhaustivity ([`analysis`]);
//! - the source-removal extension with its canonical vertex and path
//!   forms, finite windows, and axiom verification ([`desingularize`]);
//! - an integer matrix model on complete paths with relation checks and
//!   exact algebra dimensions ([`ck`]).

pub mod analysis;
pub mod ck;
pub mod degree;
pub mod demos;
pub mod desingularize;
pub mod matrix;
pub mod path;
pub mod presentation;
pub mod report;
