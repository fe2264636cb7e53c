//! Degree vectors: elements of N^k under componentwise order.
//!
//! A degree records how many edges of each color a path traverses. The
//! componentwise lattice structure (meet `∧`, join `∨`) drives every
//! factorization bound in the toolkit, so it lives here as a small value
//! type rather than being spread over call sites.

use std::fmt;

/// Element of N^k. Component `i` counts color `i+1` steps.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree(Vec<u32>);

impl Degree {
    pub fn new(components: Vec<u32>) -> Self {
        assert!(!components.is_empty(), "degree must have rank >= 1");
        Degree(components)
    }

    /// The zero vector of the given rank.
    pub fn zero(rank: usize) -> Self {
        Degree(vec![0; rank])
    }

    /// Standard basis vector e_{color+1} (color is 0-based).
    pub fn unit(rank: usize, color: usize) -> Self {
        assert!(color < rank);
        let mut v = vec![0; rank];
        v[color] = 1;
        Degree(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, color: usize) -> u32 {
        self.0[color]
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Componentwise `<=`. This is a partial order; `!a.leq(b)` does not
    /// imply `b.leq(a)`.
    pub fn leq(&self, other: &Degree) -> bool {
        self.check_rank(other);
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &Degree) -> Degree {
        self.check_rank(other);
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise subtraction; requires `other.leq(self)`.
    pub fn sub(&self, other: &Degree) -> Degree {
        assert!(
            other.leq(self),
            "degree subtraction {self} - {other} would go negative"
        );
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Componentwise minimum (greatest lower bound).
    pub fn meet(&self, other: &Degree) -> Degree {
        self.check_rank(other);
        Degree(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    /// Componentwise maximum (least upper bound).
    pub fn join(&self, other: &Degree) -> Degree {
        self.check_rank(other);
        Degree(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// Colors (0-based) with a strictly positive component.
    pub fn support(&self) -> ColorSet {
        let mut s = ColorSet::empty(self.rank());
        for (i, &c) in self.0.iter().enumerate() {
            if c > 0 {
                s.insert(i);
            }
        }
        s
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// All degrees `d` with `d.leq(self)`, in lexicographic order.
    pub fn descents(&self) -> Vec<Degree> {
        let mut out = vec![Degree::zero(self.rank())];
        for color in 0..self.rank() {
            let mut next = Vec::with_capacity(out.len() * (self.0[color] as usize + 1));
            for d in &out {
                for c in 0..=self.0[color] {
                    let mut v = d.0.clone();
                    v[color] = c;
                    next.push(Degree(v));
                }
            }
            out = next;
        }
        out
    }

    fn check_rank(&self, other: &Degree) {
        assert_eq!(
            self.rank(),
            other.rank(),
            "degree rank mismatch: {} vs {}",
            self.rank(),
            other.rank()
        );
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Subset of the colors `{0, .., rank-1}`, kept alongside its rank so that
/// complements are well defined.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorSet {
    rank: usize,
    bits: u32,
}

impl ColorSet {
    pub fn empty(rank: usize) -> Self {
        assert!((1..=32).contains(&rank));
        ColorSet { rank, bits: 0 }
    }

    pub fn full(rank: usize) -> Self {
        let mut s = ColorSet::empty(rank);
        s.bits = (1u32 << rank) - 1;
        s
    }

    pub fn from_colors(rank: usize, colors: &[usize]) -> Self {
        let mut s = ColorSet::empty(rank);
        for &c in colors {
            s.insert(c);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn insert(&mut self, color: usize) {
        assert!(color < self.rank);
        self.bits |= 1 << color;
    }

    pub fn contains(&self, color: usize) -> bool {
        color < self.rank && self.bits & (1 << color) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn complement(&self) -> ColorSet {
        ColorSet {
            rank: self.rank,
            bits: !self.bits & ((1u32 << self.rank) - 1),
        }
    }

    pub fn union(&self, other: &ColorSet) -> ColorSet {
        assert_eq!(self.rank, other.rank);
        ColorSet {
            rank: self.rank,
            bits: self.bits | other.bits,
        }
    }

    pub fn is_subset(&self, other: &ColorSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.rank).filter(|&c| self.contains(c))
    }

    /// All subsets of the complement of `self`, smallest first.
    pub fn subsets_of_complement(&self) -> Vec<ColorSet> {
        let comp = self.complement();
        let free: Vec<usize> = comp.iter().collect();
        let mut out = Vec::with_capacity(1 << free.len());
        for mask in 0u32..(1 << free.len()) {
            let mut s = ColorSet::empty(self.rank);
            for (j, &c) in free.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    s.insert(c);
                }
            }
            out.push(s);
        }
        out
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for c in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{}", c + 1)?;
            first = false;
        }
        write!(f, "}}")
    }
}

/// Component of an extended degree: a natural number or infinity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ExtNat {
    Fin(u32),
    Inf,
}

impl ExtNat {
    pub fn min(self, other: ExtNat) -> ExtNat {
        match (self, other) {
            (ExtNat::Inf, x) | (x, ExtNat::Inf) => x,
            (ExtNat::Fin(a), ExtNat::Fin(b)) => ExtNat::Fin(a.min(b)),
        }
    }

    pub fn leq(self, other: ExtNat) -> bool {
        match (self, other) {
            (_, ExtNat::Inf) => true,
            (ExtNat::Inf, ExtNat::Fin(_)) => false,
            (ExtNat::Fin(a), ExtNat::Fin(b)) => a <= b,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: ExtNat) -> ExtNat {
        match (self, other) {
            (ExtNat::Inf, _) | (_, ExtNat::Inf) => ExtNat::Inf,
            (ExtNat::Fin(a), ExtNat::Fin(b)) => ExtNat::Fin(a + b),
        }
    }
}

/// Element of (N ∪ {∞})^k. Infinity is maximal in each component and
/// absorbs addition; meet with a finite value returns the finite value.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExtendedDegree(Vec<ExtNat>);

impl ExtendedDegree {
    pub fn new(components: Vec<ExtNat>) -> Self {
        assert!(!components.is_empty());
        ExtendedDegree(components)
    }

    pub fn finite(d: &Degree) -> Self {
        ExtendedDegree(d.components().iter().map(|&c| ExtNat::Fin(c)).collect())
    }

    pub fn infinite(rank: usize) -> Self {
        ExtendedDegree(vec![ExtNat::Inf; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, color: usize) -> ExtNat {
        self.0[color]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| matches!(c, ExtNat::Fin(_)))
    }

    /// The finite part, if every component is finite.
    pub fn as_finite(&self) -> Option<Degree> {
        let mut v = Vec::with_capacity(self.0.len());
        for c in &self.0 {
            match c {
                ExtNat::Fin(x) => v.push(*x),
                ExtNat::Inf => return None,
            }
        }
        Some(Degree::new(v))
    }

    pub fn leq(&self, other: &ExtendedDegree) -> bool {
        assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).all(|(a, b)| a.leq(*b))
    }

    pub fn meet(&self, other: &ExtendedDegree) -> ExtendedDegree {
        assert_eq!(self.rank(), other.rank());
        ExtendedDegree(self.0.iter().zip(&other.0).map(|(a, b)| a.min(*b)).collect())
    }

    pub fn add(&self, other: &ExtendedDegree) -> ExtendedDegree {
        assert_eq!(self.rank(), other.rank());
        ExtendedDegree(self.0.iter().zip(&other.0).map(|(a, b)| a.add(*b)).collect())
    }
}

impl fmt::Display for ExtendedDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match c {
                ExtNat::Fin(x) => write!(f, "{x}")?,
                ExtNat::Inf => write!(f, "inf")?,
            }
        }
        write!(f, ")")
    }
}
