//! Graph codes `(G, K, d)_p`: validation, stabilizer sets, classification
//! and distance.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph_state::stabilizer_element;
use crate::limits::Limits;
use crate::pauli::PauliOp;
use crate::search::{covered_set, is_coding_clique, purity_set, singleton_bound, CliqueCheck};
use crate::zp::{factorize, howell_basis, solve_orthogonal, Modulus, WeightedGraph, ZpModuleBasis, ZpVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// The clique is an additive group.
    Stabilizer,
    /// Not a group, but its additive closure is a coding clique at the same distance.
    SubcodeOfStabilizer,
    /// Neither a group nor contained in a coding group at the same distance.
    Nonadditive,
    /// The closure was too large to test.
    Unclassified,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Stabilizer => "stabilizer",
            Classification::SubcodeOfStabilizer => "subcode-of-stabilizer",
            Classification::Nonadditive => "nonadditive",
            Classification::Unclassified => "unclassified",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingletonStatus {
    Saturates,
    Satisfies,
    Violates,
}

impl fmt::Display for SingletonStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingletonStatus::Saturates => "saturates",
            SingletonStatus::Satisfies => "satisfies",
            SingletonStatus::Violates => "violates",
        })
    }
}

/// Compares `K` with `p^{n-2(d-1)}`.
pub fn singleton_check(p: u32, n: usize, k: u128, d: usize) -> SingletonStatus {
    let bound = singleton_bound(p, n, d);
    match k.cmp(&bound) {
        std::cmp::Ordering::Equal => SingletonStatus::Saturates,
        std::cmp::Ordering::Less => SingletonStatus::Satisfies,
        std::cmp::Ordering::Greater => SingletonStatus::Violates,
    }
}

/// Sorted, so the zero vector (when present) comes first.
pub fn canonical_order(vectors: &[ZpVec]) -> Vec<ZpVec> {
    let mut out = vectors.to_vec();
    out.sort();
    out
}

fn distinct(vectors: &[ZpVec]) -> Vec<ZpVec> {
    let mut out = canonical_order(vectors);
    out.dedup();
    out
}

fn check_shapes(p: Modulus, n: usize, vectors: &[ZpVec]) -> Result<()> {
    for v in vectors {
        if v.modulus() != p {
            return Err(Error::ModulusMismatch(v.modulus().get(), p.get()));
        }
        if v.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: v.len() });
        }
    }
    Ok(())
}

/// Contains zero and is closed under addition mod `p`.
pub fn is_group(p: Modulus, n: usize, vectors: &[ZpVec]) -> Result<bool> {
    check_shapes(p, n, vectors)?;
    let set = distinct(vectors);
    if !set.iter().any(ZpVec::is_zero) {
        return Ok(false);
    }
    let span = howell_basis(p, n, &set)?;
    Ok(span.size() == set.len() as u128)
}

/// The additive closure, sorted; fails when larger than `bound`.
pub fn group_closure(p: Modulus, n: usize, vectors: &[ZpVec], bound: u128) -> Result<Vec<ZpVec>> {
    check_shapes(p, n, vectors)?;
    let mut all = howell_basis(p, n, vectors)?.elements(bound)?;
    all.sort();
    Ok(all)
}

/// Stabilizer vectors `{ s : s·c = 0 for every clique member c }`.
pub fn stabilizer_set(p: Modulus, n: usize, clique: &[ZpVec]) -> Result<ZpModuleBasis> {
    solve_orthogonal(p, n, clique)
}

/// Checks whether the additive closure of `vectors` is a coding clique at `d`.
///
/// For a group, condition iii reduces to every nonzero element being
/// uncoverable and condition ii to the generators being orthogonal to the
/// purity set.
pub fn closure_is_coding_clique(g: &WeightedGraph, d: usize, vectors: &[ZpVec], limits: &Limits) -> Result<bool> {
    let p = g.modulus();
    let basis = howell_basis(p, g.n(), vectors)?;
    let elements = basis.elements(limits.closure_size)?;
    let purity = purity_set(g, d)?;
    for s in purity.members() {
        if basis.generators().iter().any(|c| s.dot_unchecked(c) != 0) {
            return Ok(false);
        }
    }
    let fits = p.pow(g.n()).is_some_and(|t| t <= limits.set_vectors);
    if fits {
        let covered = covered_set(g, d, limits)?;
        Ok(elements.iter().all(|e| e.is_zero() || !covered.contains(e)))
    } else {
        Ok(elements.iter().all(|e| e.is_zero() || crate::search::covering_error(g, d, e).is_none()))
    }
}

/// Stabilizer if the clique is a group; otherwise tests the closure.
pub fn classify(g: &WeightedGraph, d: usize, clique: &[ZpVec], limits: &Limits) -> Result<Classification> {
    let p = g.modulus();
    if is_group(p, g.n(), clique)? {
        return Ok(Classification::Stabilizer);
    }
    let size = howell_basis(p, g.n(), clique)?.size();
    if size > limits.closure_size {
        return Ok(Classification::Unclassified);
    }
    Ok(if closure_is_coding_clique(g, d, clique, limits)? {
        Classification::SubcodeOfStabilizer
    } else {
        Classification::Nonadditive
    })
}

/// Largest `d` for which the (translated) clique satisfies conditions i-iii.
///
/// The set is first shifted so that its smallest member sits at zero, which
/// makes the value translation invariant. A one-element set detects every
/// error that does not act as a graph stabilizer, so its distance is the
/// smallest weight of a nontrivial `G_s`.
pub fn minimum_distance(g: &WeightedGraph, clique: &[ZpVec], limits: &Limits) -> Result<usize> {
    check_shapes(g.modulus(), g.n(), clique)?;
    let set = distinct(clique);
    if set.len() != clique.len() {
        return Err(Error::Constraint("clique has repeated vectors".into()));
    }
    let Some(base) = set.first().cloned() else {
        return Err(Error::Constraint("clique is empty".into()));
    };
    if set.len() == 1 {
        for w in 1..=g.n() {
            if !purity_set(g, w + 1)?.is_trivial() {
                return Ok(w);
            }
        }
        return Ok(g.n() + 1);
    }
    let shifted: Vec<ZpVec> = set.iter().map(|c| c - &base).collect();
    let mut best = 0;
    for d in 1..=g.n() + 1 {
        if is_coding_clique(g, d, &shifted, limits)?.is_ok() {
            best = d;
        } else {
            break;
        }
    }
    Ok(best)
}

/// A validated graph code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphCode {
    graph: WeightedGraph,
    clique: Vec<ZpVec>,
    d: usize,
    classification: Classification,
    stabilizer: ZpModuleBasis,
    degrees: Option<Vec<u32>>,
}

impl GraphCode {
    /// Validates `clique` at distance `d` and classifies it.
    pub fn new(graph: WeightedGraph, clique: Vec<ZpVec>, d: usize, limits: &Limits) -> Result<Self> {
        let check = is_coding_clique(&graph, d, &clique, limits)?;
        Self::from_check(graph, clique, d, check, limits)
    }

    pub(crate) fn from_check(
        graph: WeightedGraph,
        clique: Vec<ZpVec>,
        d: usize,
        check: CliqueCheck,
        limits: &Limits,
    ) -> Result<Self> {
        if let Some(v) = check.violation {
            return Err(Error::NotCodingClique(Box::new(v)));
        }
        let p = graph.modulus();
        let n = graph.n();
        let clique = canonical_order(&clique);
        let classification = classify(&graph, d, &clique, limits)?;
        let stabilizer = stabilizer_set(p, n, &clique)?;
        let degrees = if classification == Classification::Stabilizer {
            Some(howell_basis(p, n, &clique)?.degrees().to_vec())
        } else {
            None
        };
        Ok(GraphCode { graph, clique, d, classification, stabilizer, degrees })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn clique(&self) -> &[ZpVec] {
        &self.clique
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn p(&self) -> u32 {
        self.graph.modulus().get()
    }

    pub fn k(&self) -> usize {
        self.clique.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn classification(&self) -> Classification {
        self.classification
    }

    pub fn stabilizer_set(&self) -> &ZpModuleBasis {
        &self.stabilizer
    }

    pub fn stabilizer_size(&self) -> u128 {
        self.stabilizer.size()
    }

    /// Orders of the clique group's independent generators (stabilizer codes only).
    pub fn degrees(&self) -> Option<&[u32]> {
        self.degrees.as_deref()
    }

    /// `G_s` for each generator `s` of the stabilizer set.
    pub fn stabilizer_generators(&self) -> Vec<PauliOp> {
        self.stabilizer
            .generators()
            .iter()
            .map(|s| stabilizer_element(&self.graph, s).expect("generator matches graph"))
            .collect()
    }

    pub fn singleton_check(&self) -> SingletonStatus {
        singleton_check(self.p(), self.n(), self.k() as u128, self.d)
    }

    pub fn minimum_distance(&self, limits: &Limits) -> Result<usize> {
        minimum_distance(&self.graph, &self.clique, limits)
    }

    /// `[[n,k,d]]_p` for a stabilizer code with `K = p^k`, otherwise
    /// `((n,K,d))_p` with `K` written as a product over primes when the
    /// degrees are known.
    pub fn label(&self) -> String {
        let (n, p, d) = (self.n(), self.p(), self.d);
        let k = self.k() as u128;
        let mut e = 0u32;
        let mut acc = 1u128;
        while acc < k {
            acc *= p as u128;
            e += 1;
        }
        if acc == k && self.classification == Classification::Stabilizer {
            return format!("[[{n},{e},{d}]]_{p}");
        }
        let dims = match &self.degrees {
            Some(deg) if factorize(p as u64).len() > 1 => prime_grouped(deg),
            _ => k.to_string(),
        };
        format!("(({n},{dims},{d}))_{p}")
    }

    /// One-line summary, e.g. `[[6,2,3]]_7 stabilizer`.
    pub fn summary(&self) -> String {
        let mut s = format!("{} {}", self.label(), self.classification);
        if let Some(deg) = &self.degrees {
            if factorize(self.p() as u64).len() > 1 {
                let parts: Vec<String> = deg.iter().map(u32::to_string).collect();
                s.push_str(&format!(", degrees {}", parts.join("·")));
            }
        }
        s
    }
}

/// Product of the degrees grouped by prime, ascending, e.g. `2·9` for 3,3,2.
fn prime_grouped(degrees: &[u32]) -> String {
    let mut by_prime: BTreeMap<u64, u128> = BTreeMap::new();
    for &mu in degrees {
        for (prime, e) in factorize(mu as u64) {
            *by_prime.entry(prime).or_insert(1) *= (prime as u128).pow(e);
        }
    }
    let parts: Vec<String> = by_prime.values().map(u128::to_string).collect();
    parts.join("·")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32) -> Modulus {
        Modulus::new(p).unwrap()
    }

    fn vs(p: u32, rows: &[&[i64]]) -> Vec<ZpVec> {
        rows.iter().map(|r| ZpVec::from_signed(m(p), r)).collect()
    }

    fn loop_graph(p: u32, n: usize, last: i64) -> WeightedGraph {
        let mut edges: Vec<_> = (0..n - 1).map(|a| (a, a + 1, 1)).collect();
        edges.push((n - 1, 0, last));
        WeightedGraph::from_edges(m(p), n, &edges).unwrap()
    }

    fn star3(p: u32) -> WeightedGraph {
        WeightedGraph::from_edges(m(p), 3, &[(0, 1, 1), (1, 2, 1)]).unwrap()
    }

    #[test]
    fn group_checks() {
        assert!(is_group(m(3), 5, &vs(3, &[&[0; 5], &[1; 5], &[2; 5]])).unwrap());
        assert!(!is_group(m(4), 5, &vs(4, &[&[0; 5], &[1; 5], &[2, 3, 3, 2, 3], &[3, 2, 2, 3, 2]])).unwrap());
        assert!(is_group(m(4), 2, &vs(4, &[&[0, 0]])).unwrap());
        assert!(!is_group(m(3), 2, &vs(3, &[&[1, 0]])).unwrap());
    }

    #[test]
    fn closure_examples() {
        let c = group_closure(m(3), 3, &vs(3, &[&[1, 0, 2]]), 100).unwrap();
        assert_eq!(c, vs(3, &[&[0, 0, 0], &[1, 0, 2], &[2, 0, 1]]));
        let g = vs(3, &[&[0; 5], &[1; 5], &[2; 5]]);
        assert_eq!(group_closure(m(3), 5, &g, 100).unwrap(), g);
        let nonadd = vs(4, &[&[0; 5], &[1; 5], &[2, 3, 3, 2, 3], &[3, 2, 2, 3, 2]]);
        let closure = group_closure(m(4), 5, &nonadd, 1 << 12).unwrap();
        assert!(closure.len() > 4);
        let lim = Limits::default();
        assert!(!is_coding_clique(&loop_graph(4, 5, 1), 3, &closure, &lim).unwrap().is_ok());
        assert!(!closure_is_coding_clique(&loop_graph(4, 5, 1), 3, &nonadd, &lim).unwrap());
    }

    #[test]
    fn stabilizer_counts() {
        let lim = Limits::default();
        let code = GraphCode::new(loop_graph(3, 5, 1), vs(3, &[&[0; 5], &[1; 5], &[2; 5]]), 3, &lim).unwrap();
        assert_eq!(code.stabilizer_size(), 81);
        assert_eq!(code.classification(), Classification::Stabilizer);
        assert_eq!(code.label(), "[[5,1,3]]_3");
        let nonadd = vs(4, &[&[0; 5], &[1; 5], &[2, 3, 3, 2, 3], &[3, 2, 2, 3, 2]]);
        let code = GraphCode::new(loop_graph(4, 5, 1), nonadd, 3, &lim).unwrap();
        assert_eq!(code.stabilizer_size(), 64);
        assert_eq!(code.classification(), Classification::Nonadditive);
        assert_eq!(code.singleton_check(), SingletonStatus::Saturates);
        assert_eq!(code.label(), "((5,4,3))_4");
    }

    #[test]
    fn star_codes() {
        let lim = Limits::default();
        let code = GraphCode::new(star3(3), vs(3, &[&[0, 0, 0], &[1, 0, 2], &[2, 0, 1]]), 2, &lim).unwrap();
        assert_eq!(code.classification(), Classification::Stabilizer);
        // The generated stabilizer group has 9 elements, as does ⟨G_2, G_1G_3⟩.
        assert_eq!(code.stabilizer_size(), 9);
        let expect = howell_basis(m(3), 3, &vs(3, &[&[0, 1, 0], &[1, 0, 1]])).unwrap();
        assert!(code.stabilizer_set().same_module(&expect));
        let sub = GraphCode::new(star3(4), vs(4, &[&[0, 0, 0], &[1, 0, 2], &[2, 0, 1]]), 2, &lim).unwrap();
        assert_eq!(sub.singleton_check(), SingletonStatus::Satisfies);
        assert_eq!(minimum_distance(sub.graph(), sub.clique(), &lim).unwrap(), 2);
    }

    #[test]
    fn distances() {
        let lim = Limits::default();
        let g = loop_graph(3, 5, 1);
        assert_eq!(minimum_distance(&g, &vs(3, &[&[0; 5], &[1; 5], &[2; 5]]), &lim).unwrap(), 3);
        let single = WeightedGraph::empty(m(3), 1);
        assert_eq!(minimum_distance(&single, &vs(3, &[&[0]]), &lim).unwrap(), 1);
        assert_eq!(minimum_distance(&g, &vs(3, &[&[0; 5]]), &lim).unwrap(), 3);
    }

    #[test]
    fn rejects_invalid() {
        let lim = Limits::default();
        let err = GraphCode::new(loop_graph(3, 5, 1), vs(3, &[&[0; 5], &[1, 0, 0, 0, 0]]), 3, &lim);
        assert!(matches!(err, Err(Error::NotCodingClique(_))));
    }

    #[test]
    fn singleton_statuses() {
        assert_eq!(singleton_check(3, 6, 9, 3), SingletonStatus::Saturates);
        assert_eq!(singleton_check(4, 3, 3, 2), SingletonStatus::Satisfies);
        assert_eq!(singleton_check(3, 5, 9, 3), SingletonStatus::Violates);
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn stabilizer_closure_identity(p in 2u32..=6, n in 1usize..=3, raw in prop::collection::vec(prop::collection::vec(0u32..6, 3), 1..4)) {
            let vecs: Vec<ZpVec> = raw.iter().map(|r| ZpVec::from_raw(m(p), r[..n].iter().map(|e| e % p).collect())).collect();
            let s = stabilizer_set(m(p), n, &vecs).unwrap();
            let closure = group_closure(m(p), n, &vecs, 1 << 16).unwrap();
            prop_assert_eq!(s.size() * closure.len() as u128, m(p).pow(n).unwrap());
        }

        #[test]
        fn distance_is_translation_invariant(shift in prop::collection::vec(0u32..4, 5), pick in 0usize..3) {
            let lim = Limits::default();
            let g = loop_graph(4, 5, 1);
            let base = [
                vs(4, &[&[0; 5], &[1; 5], &[2, 3, 3, 2, 3], &[3, 2, 2, 3, 2]]),
                vs(4, &[&[0; 5], &[1, 2, 0, 0, 0]]),
                vs(4, &[&[0; 5], &[2; 5]]),
            ][pick].clone();
            let t = ZpVec::from_raw(m(4), shift);
            let moved: Vec<ZpVec> = base.iter().map(|c| c + &t).collect();
            prop_assert_eq!(minimum_distance(&g, &base, &lim).unwrap(), minimum_distance(&g, &moved, &lim).unwrap());
        }
    }
}
