//! Anchored branch-and-bound clique search with a greedy-colouring bound.
//!
//! Candidates are the anchor's neighbours, ordered by degree (descending)
//! inside the candidate set with ties broken by vertex index. Top-level
//! branch `i` holds the cliques whose lowest-ordered candidate is `i`, so
//! branches partition the search and run in parallel. Pruning against the
//! shared incumbent only removes subtrees that cannot reach it, which keeps
//! the clique each branch reports independent of scheduling; results are
//! merged by branch index.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Instant;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use super::supergraph::SuperGraph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// A maximum clique, stopping early once `stop_at` vertices are reached.
    Max { stop_at: Option<usize> },
    /// Every clique with exactly this many vertices.
    AllOfSize(usize),
    /// The first clique with this many vertices, if any.
    FirstOfSize(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchProgress {
    pub branches_done: usize,
    pub branches_total: usize,
    pub best_size: usize,
}

/// Cooperative cancellation, deadline and progress reporting.
#[derive(Clone, Default)]
pub struct SearchControl {
    pub cancel: Option<Arc<AtomicBool>>,
    pub deadline: Option<Instant>,
    pub progress: Option<Arc<dyn Fn(SearchProgress) + Send + Sync>>,
}

impl fmt::Debug for SearchControl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SearchControl")
            .field("cancel", &self.cancel.is_some())
            .field("deadline", &self.deadline)
            .field("progress", &self.progress.is_some())
            .finish()
    }
}

impl SearchControl {
    fn should_stop(&self) -> bool {
        self.cancel.as_ref().is_some_and(|c| c.load(Ordering::Relaxed))
            || self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Cliques as ascending super graph vertex indices, anchor included.
    pub cliques: Vec<Vec<usize>>,
    pub best_size: usize,
    /// The search finished without hitting a stop size or an interruption.
    pub exhaustive: bool,
    /// A deadline or cancellation cut the search short; results are partial.
    pub interrupted: bool,
}

struct Shared<'a> {
    adj: Vec<FixedBitSet>,
    mode: SearchMode,
    target: usize,
    best: AtomicUsize,
    found_branch: AtomicUsize,
    interrupted: AtomicBool,
    control: &'a SearchControl,
}

struct Branch<'s, 'a> {
    shared: &'s Shared<'a>,
    index: usize,
    local_best: usize,
    best: Vec<usize>,
    all: Vec<Vec<usize>>,
    nodes: u64,
    hit_target: bool,
}

impl Branch<'_, '_> {
    fn aborted(&mut self) -> bool {
        self.nodes += 1;
        let sh = self.shared;
        if sh.interrupted.load(Ordering::Relaxed) || sh.found_branch.load(Ordering::Relaxed) < self.index {
            return true;
        }
        if self.nodes % 1024 == 0 && sh.control.should_stop() {
            sh.interrupted.store(true, Ordering::Relaxed);
            return true;
        }
        false
    }

    /// Records `r` (local indices, anchor implied); returns true when the
    /// branch is finished.
    fn record(&mut self, r: &[usize]) -> bool {
        let sh = self.shared;
        let size = r.len() + 1;
        match sh.mode {
            SearchMode::AllOfSize(k) => {
                if size == k {
                    self.all.push(r.to_vec());
                }
                false
            }
            SearchMode::Max { .. } | SearchMode::FirstOfSize(_) => {
                if size > self.local_best {
                    self.local_best = size;
                    self.best = r.to_vec();
                    sh.best.fetch_max(size, Ordering::Relaxed);
                }
                if size >= sh.target {
                    self.hit_target = true;
                    sh.found_branch.fetch_min(self.index, Ordering::Relaxed);
                    return true;
                }
                false
            }
        }
    }

    fn pruned(&self, bound: usize) -> bool {
        match self.shared.mode {
            SearchMode::Max { .. } => bound <= self.local_best || bound < self.shared.best.load(Ordering::Relaxed),
            SearchMode::AllOfSize(k) | SearchMode::FirstOfSize(k) => bound < k,
        }
    }

    /// Returns true when the branch should stop.
    fn expand(&mut self, r: &mut Vec<usize>, p: &[usize]) -> bool {
        if self.aborted() {
            return true;
        }
        let (order, colors) = colour_sort(&self.shared.adj, p);
        let mut alive = FixedBitSet::with_capacity(self.shared.adj.len());
        for &v in p {
            alive.insert(v);
        }
        for k in (0..order.len()).rev() {
            if self.pruned(r.len() + 1 + colors[k]) {
                return false;
            }
            let v = order[k];
            r.push(v);
            if self.record(r) {
                return true;
            }
            let at_size = matches!(self.shared.mode, SearchMode::AllOfSize(size) if r.len() + 1 >= size);
            if !at_size {
                let adj_v = &self.shared.adj[v];
                let next: Vec<usize> = p.iter().copied().filter(|&u| alive.contains(u) && adj_v.contains(u)).collect();
                if !next.is_empty() && self.expand(r, &next) {
                    return true;
                }
            }
            r.pop();
            alive.set(v, false);
        }
        false
    }
}

/// Greedy colouring of `p` in its given order; returns vertices grouped by
/// colour and the (1-based) colour of each.
fn colour_sort(adj: &[FixedBitSet], p: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in p {
        match classes.iter_mut().find(|cls| cls.iter().all(|&u| !adj[v].contains(u))) {
            Some(cls) => cls.push(v),
            None => classes.push(vec![v]),
        }
    }
    let mut order = Vec::with_capacity(p.len());
    let mut colors = Vec::with_capacity(p.len());
    for (c, cls) in classes.into_iter().enumerate() {
        for v in cls {
            order.push(v);
            colors.push(c + 1);
        }
    }
    (order, colors)
}

pub fn find_cliques(
    sg: &SuperGraph,
    mode: SearchMode,
    anchor: usize,
    control: &SearchControl,
) -> Result<SearchOutcome> {
    if anchor >= sg.len() {
        return Err(Error::VertexOutOfRange { vertex: anchor, n: sg.len() });
    }
    let target = match mode {
        SearchMode::Max { stop_at } => stop_at.unwrap_or(usize::MAX).max(1),
        SearchMode::AllOfSize(k) | SearchMode::FirstOfSize(k) => k,
    };
    let mut cand: Vec<usize> = sg.neighbors(anchor).ones().collect();
    let in_cand = {
        let mut b = FixedBitSet::with_capacity(sg.len());
        for &c in &cand {
            b.insert(c);
        }
        b
    };
    let degree: Vec<usize> = (0..sg.len())
        .map(|v| if in_cand.contains(v) { sg.neighbors(v).intersection(&in_cand).count() } else { 0 })
        .collect();
    cand.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));
    let m = cand.len();
    let mut adj = vec![FixedBitSet::with_capacity(m); m];
    for i in 0..m {
        for j in i + 1..m {
            if sg.adjacent(cand[i], cand[j]) {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
    }
    let to_global = |local: &[usize]| -> Vec<usize> {
        let mut out: Vec<usize> = std::iter::once(anchor).chain(local.iter().map(|&i| cand[i])).collect();
        out.sort_unstable();
        out
    };

    if m == 0 || target <= 1 {
        let include = match mode {
            SearchMode::Max { .. } => true,
            SearchMode::AllOfSize(k) | SearchMode::FirstOfSize(k) => k == 1,
        };
        let cliques = if include { vec![vec![anchor]] } else { Vec::new() };
        let best_size = cliques.len();
        let exhaustive = m == 0 || matches!(mode, SearchMode::AllOfSize(_));
        return Ok(SearchOutcome { cliques, best_size, exhaustive, interrupted: false });
    }

    let shared = Shared {
        adj,
        mode,
        target,
        best: AtomicUsize::new(1),
        found_branch: AtomicUsize::new(usize::MAX),
        interrupted: AtomicBool::new(false),
        control,
    };
    let done = AtomicUsize::new(0);
    let results: Vec<(Vec<usize>, Vec<Vec<usize>>, bool)> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut br = Branch {
                shared: &shared,
                index: i,
                local_best: 1,
                best: Vec::new(),
                all: Vec::new(),
                nodes: 0,
                hit_target: false,
            };
            let mut r = vec![i];
            let stop = br.record(&r);
            let at_size = matches!(mode, SearchMode::AllOfSize(k) if k <= 2);
            if !stop && !at_size {
                let p: Vec<usize> = (i + 1..m).filter(|&j| shared.adj[i].contains(j)).collect();
                if !p.is_empty() {
                    br.expand(&mut r, &p);
                }
            }
            if let Some(cb) = &control.progress {
                let d = done.fetch_add(1, Ordering::Relaxed) + 1;
                cb(SearchProgress {
                    branches_done: d,
                    branches_total: m,
                    best_size: shared.best.load(Ordering::Relaxed),
                });
            }
            (br.best, br.all, br.hit_target)
        })
        .collect();

    let interrupted = shared.interrupted.load(Ordering::Relaxed);
    let (cliques, hit) = match mode {
        SearchMode::AllOfSize(_) => {
            let all: Vec<Vec<usize>> =
                results.iter().flat_map(|(_, all, _)| all.iter().map(|c| to_global(c))).collect();
            (all, false)
        }
        SearchMode::FirstOfSize(_) => match results.iter().find(|(_, _, hit)| *hit) {
            Some((best, _, _)) => (vec![to_global(best)], true),
            None => (Vec::new(), false),
        },
        SearchMode::Max { .. } => {
            let best_len = results.iter().map(|(b, _, _)| b.len()).max().unwrap_or(0);
            let (best, _, hit) = results.iter().find(|(b, _, _)| b.len() == best_len).expect("at least one branch");
            (vec![to_global(best)], *hit)
        }
    };
    let best_size = cliques.iter().map(Vec::len).max().unwrap_or(0);
    Ok(SearchOutcome { cliques, best_size, exhaustive: !hit && !interrupted, interrupted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zp::{Modulus, ZpVec};

    /// A super graph over arbitrary labels for exercising the search alone.
    fn graph(n: usize, edges: &[(usize, usize)]) -> SuperGraph {
        let p = Modulus::new(n.max(2) as u32 + 1).unwrap();
        let vertices: Vec<ZpVec> = (0..n).map(|i| ZpVec::from_signed(p, &[i as i64])).collect();
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for &(a, b) in edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        SuperGraph::from_parts(p, 1, 1, vertices, adj).unwrap()
    }

    fn brute_max(sg: &SuperGraph, anchor: usize) -> usize {
        let n = sg.len();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            if mask & (1 << anchor) == 0 {
                continue;
            }
            let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            if sg.is_clique(&members) {
                best = best.max(members.len());
            }
        }
        best
    }

    fn all_of_size_brute(sg: &SuperGraph, anchor: usize, k: usize) -> Vec<Vec<usize>> {
        let n = sg.len();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask & (1 << anchor) == 0 || mask.count_ones() as usize != k {
                continue;
            }
            let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            if sg.is_clique(&members) {
                out.push(members);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn single_vertex() {
        let sg = graph(1, &[]);
        let out = find_cliques(&sg, SearchMode::Max { stop_at: None }, 0, &SearchControl::default()).unwrap();
        assert_eq!(out.cliques, vec![vec![0]]);
        assert!(out.exhaustive);
    }

    #[test]
    fn triangle_plus_tail() {
        let sg = graph(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (0, 4)]);
        let out = find_cliques(&sg, SearchMode::Max { stop_at: None }, 0, &SearchControl::default()).unwrap();
        assert_eq!(out.cliques, vec![vec![0, 1, 2]]);
        let first = find_cliques(&sg, SearchMode::FirstOfSize(4), 0, &SearchControl::default()).unwrap();
        assert!(first.cliques.is_empty());
        let all = find_cliques(&sg, SearchMode::AllOfSize(2), 0, &SearchControl::default()).unwrap();
        assert_eq!(all.cliques.len(), 3);
    }

    #[test]
    fn cancellation() {
        let sg = graph(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]);
        let flag = Arc::new(AtomicBool::new(true));
        let control = SearchControl { cancel: Some(flag), ..SearchControl::default() };
        // Cancellation is polled periodically, so tiny searches may still finish.
        let out = find_cliques(&sg, SearchMode::Max { stop_at: None }, 0, &control).unwrap();
        assert!(out.interrupted || out.best_size == 4);
    }

    use proptest::prelude::*;

    fn arb_sg() -> impl Strategy<Value = SuperGraph> {
        (1usize..=11).prop_flat_map(|n| {
            prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for a in 0..n {
                    for b in a + 1..n {
                        if bits[k] {
                            edges.push((a, b));
                        }
                        k += 1;
                    }
                }
                graph(n, &edges)
            })
        })
    }

    proptest! {
        #[test]
        fn max_matches_brute_force(sg in arb_sg()) {
            let out = find_cliques(&sg, SearchMode::Max { stop_at: None }, 0, &SearchControl::default()).unwrap();
            prop_assert_eq!(out.best_size, brute_max(&sg, 0));
            prop_assert!(sg.is_clique(&out.cliques[0]));
            prop_assert!(out.cliques[0].contains(&0));
        }

        #[test]
        fn all_of_size_matches_brute_force(sg in arb_sg(), k in 1usize..5) {
            let out = find_cliques(&sg, SearchMode::AllOfSize(k), 0, &SearchControl::default()).unwrap();
            let mut got = out.cliques.clone();
            got.sort();
            prop_assert_eq!(got, all_of_size_brute(&sg, 0, k));
        }

        #[test]
        fn thread_count_does_not_change_result(sg in arb_sg()) {
            let run = |threads: usize| {
                let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
                pool.install(|| find_cliques(&sg, SearchMode::Max { stop_at: None }, 0, &SearchControl::default()).unwrap())
            };
            prop_assert_eq!(run(1), run(4));
        }
    }
}
