//! Purity and covering sets, the coding-clique conditions, the super graph
//! and clique search over it.

mod covering;
mod maxclique;
mod supergraph;

use std::fmt;

pub use covering::{
    covered_set, covering_error, for_each_low_weight, purity_set, uncoverable_set, CoveredSet, PuritySet,
    UncoverableSet,
};
pub use maxclique::{find_cliques, SearchControl, SearchMode, SearchOutcome, SearchProgress};
pub use supergraph::{build_super_graph, SuperGraph};

use crate::error::Result;
use crate::limits::Limits;
use crate::pauli::PauliOp;
use crate::zp::{WeightedGraph, ZpVec};

/// The first coding-clique condition found to fail, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Condition i: the zero vector is absent.
    MissingZero,
    /// A vector has the wrong length or modulus for the graph.
    ShapeMismatch { index: usize },
    /// The same vector appears twice.
    Duplicate { vector: ZpVec },
    /// Condition ii: `s·c ≠ 0` for a purity-set member `s`.
    NotOrthogonal { s: ZpVec, c: ZpVec },
    /// Condition iii: `b − a` is covered by a low-weight error.
    Covered { a: ZpVec, b: ZpVec, difference: ZpVec, error: PauliOp },
}

impl Violation {
    /// `"i"`, `"ii"`, `"iii"`, or `"shape"`.
    pub fn condition(&self) -> &'static str {
        match self {
            Violation::MissingZero => "i",
            Violation::NotOrthogonal { .. } => "ii",
            Violation::Covered { .. } | Violation::Duplicate { .. } => "iii",
            Violation::ShapeMismatch { .. } => "shape",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingZero => write!(f, "condition i: the zero vector is missing"),
            Violation::ShapeMismatch { index } => {
                write!(f, "vector {index} does not match the graph's length or modulus")
            }
            Violation::Duplicate { vector } => write!(f, "condition iii: {vector} is repeated"),
            Violation::NotOrthogonal { s, c } => {
                write!(f, "condition ii: purity vector {s} has nonzero product with {c}")
            }
            Violation::Covered { a, b, difference, error } => write!(
                f,
                "condition iii: {b} - {a} = {difference} is covered by the weight-{} error {}",
                error.weight(),
                error
            ),
        }
    }
}

/// Outcome of checking the three coding-clique conditions at distance `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueCheck {
    pub d: usize,
    pub violation: Option<Violation>,
}

impl CliqueCheck {
    pub fn is_ok(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks conditions i-iii for `vectors` on `g` at distance `d`.
///
/// Uses a covered-set bitmap when `p^n` fits `limits.set_vectors` and the
/// direct per-vector covering search otherwise.
pub fn is_coding_clique(g: &WeightedGraph, d: usize, vectors: &[ZpVec], limits: &Limits) -> Result<CliqueCheck> {
    let fits = g.modulus().pow(g.n()).is_some_and(|t| t <= limits.set_vectors);
    if fits {
        let covered = covered_set(g, d, limits)?;
        check_with(g, d, vectors, |v| covered.contains(v))
    } else {
        check_with(g, d, vectors, |v| covering_error(g, d, v).is_some())
    }
}

/// Same as [`is_coding_clique`] with a precomputed covered set.
pub fn is_coding_clique_with(g: &WeightedGraph, vectors: &[ZpVec], covered: &CoveredSet) -> Result<CliqueCheck> {
    check_with(g, covered.d(), vectors, |v| covered.contains(v))
}

fn check_with(
    g: &WeightedGraph,
    d: usize,
    vectors: &[ZpVec],
    is_covered: impl Fn(&ZpVec) -> bool,
) -> Result<CliqueCheck> {
    let fail = |v| Ok(CliqueCheck { d, violation: Some(v) });
    for (index, v) in vectors.iter().enumerate() {
        if v.modulus() != g.modulus() || v.len() != g.n() {
            return fail(Violation::ShapeMismatch { index });
        }
    }
    if !vectors.iter().any(ZpVec::is_zero) {
        return fail(Violation::MissingZero);
    }
    let mut sorted: Vec<&ZpVec> = vectors.iter().collect();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return fail(Violation::Duplicate { vector: w[0].clone() });
    }
    let purity = purity_set(g, d)?;
    for s in purity.members() {
        if let Some(c) = vectors.iter().find(|c| s.dot_unchecked(c) != 0) {
            return fail(Violation::NotOrthogonal { s: s.clone(), c: c.clone() });
        }
    }
    // Differences are tested once each; the covered set is closed under negation.
    let mut seen = std::collections::HashSet::new();
    for (i, a) in vectors.iter().enumerate() {
        for b in &vectors[i + 1..] {
            let diff = b - a;
            let key = canonical_sign(&diff);
            if !seen.insert(key) {
                continue;
            }
            if is_covered(&diff) {
                let error = covering_error(g, d, &diff).expect("covered difference has a witness");
                return fail(Violation::Covered { a: a.clone(), b: b.clone(), difference: diff, error });
            }
        }
    }
    Ok(CliqueCheck { d, violation: None })
}

fn canonical_sign(v: &ZpVec) -> ZpVec {
    let neg = -v;
    if neg < *v {
        neg
    } else {
        v.clone()
    }
}

/// Largest code dimension allowed by the quantum Singleton bound,
/// `p^{n-2(d-1)}`; 1 when the exponent is not positive.
pub fn singleton_bound(p: u32, n: usize, d: usize) -> u128 {
    let exp = n as i64 - 2 * (d as i64 - 1);
    if exp <= 0 {
        return 1;
    }
    (p as u128).checked_pow(exp as u32).unwrap_or(u128::MAX)
}

/// Options for [`search_cliques`].
#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Stop once a clique of this size is found (defaults to the Singleton bound).
    pub max_k: Option<usize>,
    /// Report every clique of this size instead of one maximum clique.
    pub all_of_size: Option<usize>,
    pub control: SearchControl,
}

/// Cliques through the zero vector, as vector lists (zero first, then lexicographic).
#[derive(Clone, Debug)]
pub struct CliqueSearchResult {
    pub cliques: Vec<Vec<ZpVec>>,
    pub super_graph_vertices: usize,
    pub outcome: SearchOutcome,
}

/// Builds the super graph for `(g, d)` and searches it from the zero vector.
pub fn search_cliques(
    g: &WeightedGraph,
    d: usize,
    options: &SearchOptions,
    limits: &Limits,
) -> Result<CliqueSearchResult> {
    let sg = build_super_graph(g, d, limits)?;
    let mode = match options.all_of_size {
        Some(k) => SearchMode::AllOfSize(k),
        None => {
            let cap = singleton_bound(g.modulus().get(), g.n(), d).min(usize::MAX as u128) as usize;
            let stop = options.max_k.map_or(cap, |k| k.min(cap));
            SearchMode::Max { stop_at: Some(stop) }
        }
    };
    let outcome = find_cliques(&sg, mode, 0, &options.control)?;
    let cliques = outcome.cliques.iter().map(|c| c.iter().map(|&i| sg.vertex(i).clone()).collect()).collect();
    Ok(CliqueSearchResult { cliques, super_graph_vertices: sg.len(), outcome })
}
