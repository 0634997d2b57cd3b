//! Numeric Knill-Laflamme checks on explicit graph-state basis vectors.
//!
//! Nothing here uses the covering sets: errors are applied to dense
//! amplitude vectors and the code matrix `⟨Γ_c|E|Γ_c'⟩` is read off.
//!
//! Two engines compute the same matrices. `Direct` applies each error as an
//! index permutation with phases and takes inner products. `Spectral` uses
//! `|Γ_c⟩ = Z^c|Γ⟩` (checked numerically on the built states), so that
//!
//! ```text
//! ⟨Γ_c| X^s Z^t |Γ_c'⟩ = ω^{-c·s} H_s(t + c' - c),
//! H_s(u) = Σ_r conj(Γ(r+s)) Γ(r) ω^{u·r},
//! ```
//!
//! and evaluates `H_s` for every `u` at once with an axis-wise DFT. Errors
//! sharing the same `s` share one transform.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::stabilizer_set;
use crate::error::{Error, Result};
use crate::graph_state::{build_state, inner, DenseState, GraphStateBasisLabel};
use crate::limits::Limits;
use crate::pauli::{roots_of_unity, PauliOp};
use crate::zp::{howell_basis, Modulus, VectorIndexer, WeightedGraph, ZpVec};

pub const TOLERANCE: f64 = 1e-9;

/// How many nonzero `f(E)` values a report keeps.
const KEPT_VALUES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KlMode {
    /// Every error of weight `1..d`.
    Exhaustive,
    /// `count` errors drawn from a ChaCha8 stream seeded with `seed`.
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KlEngine {
    Direct,
    #[default]
    Spectral,
}

/// An error `X^x Z^z` with its measured `f(E)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorValue {
    pub x: Vec<u32>,
    pub z: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

/// First error whose code matrix is not proportional to the identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub x: Vec<u32>,
    pub z: Vec<u32>,
    /// Indices into the clique of the offending matrix entry.
    pub row: usize,
    pub col: usize,
    pub deviation: f64,
}

impl Counterexample {
    pub fn error(&self, p: Modulus) -> PauliOp {
        PauliOp::new(0, ZpVec::from_raw(p, self.x.clone()), ZpVec::from_raw(p, self.z.clone()))
            .expect("counterexample shape")
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).filter(|(&a, &b)| a != 0 || b != 0).count()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KlReport {
    pub pass: bool,
    pub d: usize,
    pub k: usize,
    pub mode: KlMode,
    pub engine: KlEngine,
    pub errors_checked: u64,
    pub max_deviation: f64,
    pub tolerance: f64,
    /// Number of errors with `|f(E)| > tolerance`.
    pub nonzero_count: u64,
    /// The first few of those, in sweep order.
    pub nonzero_values: Vec<ErrorValue>,
    pub counterexample: Option<Counterexample>,
}

impl KlReport {
    pub fn seed(&self) -> Option<u64> {
        match self.mode {
            KlMode::Sampled { seed, .. } => Some(seed),
            KlMode::Exhaustive => None,
        }
    }
}

/// Number of errors of weight `lo..=hi` on `n` qupits.
pub fn error_count(p: u32, n: usize, lo: usize, hi: usize) -> u128 {
    let per_site = (p as u128) * (p as u128) - 1;
    let mut total = 0u128;
    let mut binom = 1u128;
    for w in 0..=hi.min(n) {
        if w >= lo && w >= 1 {
            total = total.saturating_add(binom.saturating_mul(per_site.saturating_pow(w as u32)));
        }
        binom = binom * (n - w) as u128 / (w + 1) as u128;
    }
    total
}

/// Calls `f(x, z)` for every error whose support has size in `lo..=hi`,
/// supports in lexicographic order.
fn for_each_error(p: u32, n: usize, lo: usize, hi: usize, mut f: impl FnMut(&[u32], &[u32])) {
    let mut x = vec![0u32; n];
    let mut z = vec![0u32; n];
    for w in lo.max(1)..=hi.min(n) {
        let mut support: Vec<usize> = (0..w).collect();
        loop {
            let mut pairs = vec![1u32; w];
            loop {
                for (k, &a) in support.iter().enumerate() {
                    x[a] = pairs[k] / p;
                    z[a] = pairs[k] % p;
                }
                f(&x, &z);
                let mut k = w;
                let mut done = true;
                while k > 0 {
                    k -= 1;
                    if pairs[k] + 1 < p * p {
                        pairs[k] += 1;
                        done = false;
                        break;
                    }
                    pairs[k] = 1;
                }
                if done {
                    break;
                }
            }
            for &a in &support {
                x[a] = 0;
                z[a] = 0;
            }
            // next w-subset of 0..n
            let mut i = w;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if support[i] < n - w + i {
                    support[i] += 1;
                    for j in i + 1..w {
                        support[j] = support[j - 1] + 1;
                    }
                    i = usize::MAX;
                    break;
                }
            }
            if i != usize::MAX {
                break;
            }
        }
    }
}

/// `count` errors of weight `1..d`: the weight is drawn with probability
/// proportional to the number of errors of that weight, then a uniform
/// support and uniform nonidentity local pairs.
fn sample_errors(p: u32, n: usize, d: usize, count: usize, seed: u64) -> Vec<(Vec<u32>, Vec<u32>)> {
    let hi = (d - 1).min(n);
    if hi == 0 {
        return Vec::new();
    }
    let weights: Vec<f64> = (1..=hi).map(|w| error_count(p, n, w, w) as f64).collect();
    let pick = WeightedIndex::new(&weights).expect("positive weights");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let w = pick.sample(&mut rng) + 1;
            let mut x = vec![0u32; n];
            let mut z = vec![0u32; n];
            let mut support = rand::seq::index::sample(&mut rng, n, w).into_vec();
            support.sort_unstable();
            for a in support {
                let pair = rng.gen_range(1..p * p);
                x[a] = pair / p;
                z[a] = pair % p;
            }
            (x, z)
        })
        .collect()
}

/// Errors grouped by their X part, groups in lexicographic order.
type Groups = Vec<(Vec<u32>, Vec<Vec<u32>>)>;

fn group_errors(errors: impl IntoIterator<Item = (Vec<u32>, Vec<u32>)>) -> Groups {
    let mut map: BTreeMap<Vec<u32>, Vec<Vec<u32>>> = BTreeMap::new();
    for (x, z) in errors {
        map.entry(x).or_default().push(z);
    }
    map.into_iter().collect()
}

#[derive(Default)]
struct GroupResult {
    checked: u64,
    max_deviation: f64,
    nonzero_count: u64,
    nonzero_values: Vec<ErrorValue>,
    counterexample: Option<Counterexample>,
}

impl GroupResult {
    fn record(&mut self, x: &[u32], z: &[u32], f: Complex64, deviation: f64, entry: (usize, usize)) {
        self.checked += 1;
        if deviation > self.max_deviation {
            self.max_deviation = deviation;
        }
        if f.norm() > TOLERANCE {
            self.nonzero_count += 1;
            if self.nonzero_values.len() < KEPT_VALUES {
                self.nonzero_values.push(ErrorValue { x: x.to_vec(), z: z.to_vec(), re: f.re, im: f.im });
            }
        }
        if deviation > TOLERANCE && self.counterexample.is_none() {
            self.counterexample =
                Some(Counterexample { x: x.to_vec(), z: z.to_vec(), row: entry.0, col: entry.1, deviation });
        }
    }
}

struct Basis {
    p: Modulus,
    n: usize,
    indexer: VectorIndexer,
    states: Vec<DenseState>,
    clique: Vec<ZpVec>,
}

impl Basis {
    fn build(g: &WeightedGraph, clique: &[ZpVec], bound: u128) -> Result<Basis> {
        let p = g.modulus();
        let indexer = VectorIndexer::new(p, g.n(), bound, "oracle amplitudes")?;
        if clique.is_empty() {
            return Err(Error::Constraint("empty vector set".into()));
        }
        let mut states = Vec::with_capacity(clique.len());
        for c in clique {
            let label = GraphStateBasisLabel::new(g.clone(), c.clone())?;
            states.push(build_state(&label, bound)?);
        }
        Ok(Basis { p, n: g.n(), indexer, states, clique: clique.to_vec() })
    }
}

/// Checks the Knill-Laflamme condition for `clique` on `g` at distance `d`.
///
/// Exhaustive mode needs `p^n ≤ limits.oracle_amplitudes` and at most
/// `limits.oracle_errors` errors. Sampled mode builds states up to
/// `limits.set_vectors` amplitudes.
pub fn kl_verify(
    g: &WeightedGraph,
    clique: &[ZpVec],
    d: usize,
    mode: KlMode,
    engine: KlEngine,
    limits: &Limits,
) -> Result<KlReport> {
    let p = g.modulus().get();
    let n = g.n();
    let hi = d.saturating_sub(1).min(n);
    let (bound, groups) = match mode {
        KlMode::Exhaustive => {
            let total = error_count(p, n, 1, hi);
            if total > limits.oracle_errors {
                return Err(Error::bound("oracle errors", total, limits.oracle_errors));
            }
            let mut errors = Vec::new();
            for_each_error(p, n, 1, hi, |x, z| errors.push((x.to_vec(), z.to_vec())));
            (limits.oracle_amplitudes, group_errors(errors))
        }
        KlMode::Sampled { count, seed } => (limits.set_vectors, group_errors(sample_errors(p, n, d, count, seed))),
    };
    let basis = Basis::build(g, clique, bound)?;
    let result = sweep(&basis, &groups, engine)?;
    Ok(KlReport {
        pass: result.counterexample.is_none(),
        d,
        k: clique.len(),
        mode,
        engine,
        errors_checked: result.checked,
        max_deviation: result.max_deviation,
        tolerance: TOLERANCE,
        nonzero_count: result.nonzero_count,
        nonzero_values: result.nonzero_values,
        counterexample: result.counterexample,
    })
}

fn sweep(basis: &Basis, groups: &Groups, engine: KlEngine) -> Result<GroupResult> {
    let results: Vec<GroupResult> = match engine {
        KlEngine::Direct => groups.par_iter().map(|(x, zs)| direct_group(basis, x, zs)).collect::<Result<_>>()?,
        KlEngine::Spectral => {
            let spectral = Spectral::new(basis)?;
            groups.par_iter().map(|(x, zs)| spectral.group(basis, x, zs)).collect()
        }
    };
    let mut total = GroupResult::default();
    for r in results {
        total.checked += r.checked;
        total.max_deviation = total.max_deviation.max(r.max_deviation);
        total.nonzero_count += r.nonzero_count;
        let room = KEPT_VALUES - total.nonzero_values.len();
        total.nonzero_values.extend(r.nonzero_values.into_iter().take(room));
        if total.counterexample.is_none() {
            total.counterexample = r.counterexample;
        }
    }
    Ok(total)
}

fn direct_group(basis: &Basis, x: &[u32], zs: &[Vec<u32>]) -> Result<GroupResult> {
    let mut out = GroupResult::default();
    let total = basis.indexer.total() as u128;
    for z in zs {
        let op = PauliOp::new(0, ZpVec::from_raw(basis.p, x.to_vec()), ZpVec::from_raw(basis.p, z.clone()))?;
        let action = op.action(total)?;
        let images: Vec<Vec<Complex64>> =
            basis.states.iter().map(|s| action.apply(s.amplitudes())).collect::<Result<_>>()?;
        let f = inner(basis.states[0].amplitudes(), &images[0]);
        let mut worst = (0.0, (0, 0));
        for (i, bra) in basis.states.iter().enumerate() {
            for (j, ket) in images.iter().enumerate() {
                let m = inner(bra.amplitudes(), ket);
                let dev = if i == j { (m - f).norm() } else { m.norm() };
                if dev > worst.0 {
                    worst = (dev, (i, j));
                }
            }
        }
        out.record(x, z, f, worst.0, worst.1);
    }
    Ok(out)
}

struct Spectral {
    base: Vec<Complex64>,
    roots: Vec<Complex64>,
    /// Distinct nonzero differences `c' - c`, each with one realizing pair.
    differences: Vec<(Vec<u32>, (usize, usize))>,
}

impl Spectral {
    fn new(basis: &Basis) -> Result<Spectral> {
        let p = basis.p;
        let roots = roots_of_unity(p.get());
        // Z^c|Γ⟩ reconstruction from the zero-label state.
        let g0 = &basis.states[0];
        let c0 = basis.clique[0].entries();
        let mut base = vec![Complex64::new(0.0, 0.0); basis.indexer.total()];
        basis.indexer.for_each(|r, digits| {
            let e = dot(p, c0, digits);
            base[r] = g0.amplitudes()[r] * roots[p.neg(e) as usize];
        });
        for (c, state) in basis.clique.iter().zip(&basis.states) {
            let mut dev = 0.0f64;
            basis.indexer.for_each(|r, digits| {
                let want = base[r] * roots[dot(p, c.entries(), digits) as usize];
                dev = dev.max((want - state.amplitudes()[r]).norm());
            });
            if dev > TOLERANCE {
                return Err(Error::Constraint(format!("basis state for {c} is not Z^c applied to the graph state")));
            }
        }
        let mut seen: BTreeMap<Vec<u32>, (usize, usize)> = BTreeMap::new();
        for (i, a) in basis.clique.iter().enumerate() {
            for (j, b) in basis.clique.iter().enumerate() {
                if i != j {
                    seen.entry((b - a).entries().to_vec()).or_insert((i, j));
                }
            }
        }
        Ok(Spectral { base, roots, differences: seen.into_iter().collect() })
    }

    /// `H_s(u)` for every `u`, indexed like the amplitudes.
    fn transform(&self, basis: &Basis, s: &[u32]) -> Vec<Complex64> {
        let p = basis.p.get() as usize;
        let strides = basis.indexer.strides();
        let mut h = vec![Complex64::new(0.0, 0.0); self.base.len()];
        basis.indexer.for_each(|r, digits| {
            let shifted: usize =
                digits.iter().zip(s).zip(strides).map(|((&a, &b), &st)| ((a + b) as usize % p) * st).sum();
            h[r] = self.base[shifted].conj() * self.base[r];
        });
        let mut line = vec![Complex64::new(0.0, 0.0); p];
        let total = h.len();
        for &st in strides {
            let block = st * p;
            for outer in (0..total).step_by(block) {
                for inner in 0..st {
                    let start = outer + inner;
                    for (u, slot) in line.iter_mut().enumerate() {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for r in 0..p {
                            acc += h[start + r * st] * self.roots[(u * r) % p];
                        }
                        *slot = acc;
                    }
                    for (u, &v) in line.iter().enumerate() {
                        h[start + u * st] = v;
                    }
                }
            }
        }
        h
    }

    fn group(&self, basis: &Basis, x: &[u32], zs: &[Vec<u32>]) -> GroupResult {
        let p = basis.p;
        let h = self.transform(basis, x);
        // Diagonal entries are ω^{-c·s} H_s(t); their spread relative to the
        // first one only depends on the phases.
        let c0s = dot(p, basis.clique[0].entries(), x);
        let mut spread = (0.0f64, 0usize);
        for (i, c) in basis.clique.iter().enumerate() {
            let e = p.sub(c0s, dot(p, c.entries(), x));
            let gap = (self.roots[e as usize] - Complex64::new(1.0, 0.0)).norm();
            if gap > spread.0 {
                spread = (gap, i);
            }
        }
        let phase0 = self.roots[p.neg(c0s) as usize];
        let mut out = GroupResult::default();
        let mut u = vec![0u32; basis.n];
        for z in zs {
            let at = basis.indexer.encode(z);
            let f = phase0 * h[at];
            let mut worst = (h[at].norm() * spread.0, (spread.1, spread.1));
            for (delta, pair) in &self.differences {
                for ((o, &a), &b) in u.iter_mut().zip(z).zip(delta) {
                    *o = p.add(a, b);
                }
                let dev = h[basis.indexer.encode(&u)].norm();
                if dev > worst.0 {
                    worst = (dev, *pair);
                }
            }
            out.record(x, z, f, worst.0, worst.1);
        }
        out
    }
}

fn dot(p: Modulus, a: &[u32], b: &[u32]) -> u32 {
    let s: u64 = a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum();
    (s % p.get() as u64) as u32
}

/// Distance measured by the oracle alone.
///
/// For `K ≥ 2` this is the largest `d` at which every error of weight below
/// `d` passes. A single state passes at every `d`, so for `K = 1` it is the
/// smallest weight of an error with nonzero expectation value (`n + 1` if
/// there is none).
pub fn oracle_distance(g: &WeightedGraph, clique: &[ZpVec], limits: &Limits) -> Result<usize> {
    let p = g.modulus().get();
    let n = g.n();
    let total = error_count(p, n, 1, n);
    let basis = Basis::build(g, clique, limits.oracle_amplitudes)?;
    for w in 1..=n {
        let count = error_count(p, n, w, w);
        if count > limits.oracle_errors {
            return Err(Error::bound("oracle errors", total, limits.oracle_errors));
        }
        let mut errors = Vec::new();
        for_each_error(p, n, w, w, |x, z| errors.push((x.to_vec(), z.to_vec())));
        let r = sweep(&basis, &group_errors(errors), KlEngine::Spectral)?;
        let stop = if clique.len() == 1 { r.nonzero_count > 0 } else { r.counterexample.is_some() };
        if stop {
            return Ok(w);
        }
    }
    Ok(n + 1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizerTableReport {
    pub pass: bool,
    /// Every claimed operator fixes every basis state.
    pub stabilizes: bool,
    /// The claims generate `{G_s : s ∈ S}` up to phases.
    pub same_group: bool,
    pub max_deviation: f64,
    /// Index of the first claimed operator that moves some basis state.
    pub failing_generator: Option<usize>,
}

/// Checks claimed stabilizer generators numerically and as a group.
pub fn verify_stabilizer_table(
    g: &WeightedGraph,
    clique: &[ZpVec],
    claimed: &[PauliOp],
    limits: &Limits,
) -> Result<StabilizerTableReport> {
    let p = g.modulus();
    let n = g.n();
    let basis = Basis::build(g, clique, limits.oracle_amplitudes)?;
    let total = basis.indexer.total() as u128;
    let mut max_deviation = 0.0f64;
    let mut failing_generator = None;
    for (i, op) in claimed.iter().enumerate() {
        if op.modulus() != p || op.n() != n {
            return Err(Error::LengthMismatch { expected: n, found: op.n() });
        }
        let action = op.action(total)?;
        for state in &basis.states {
            let image = action.apply(state.amplitudes())?;
            let dev = image.iter().zip(state.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            max_deviation = max_deviation.max(dev);
            if dev > TOLERANCE && failing_generator.is_none() {
                failing_generator = Some(i);
            }
        }
    }
    let stacked = |x: &ZpVec, z: &ZpVec| {
        let mut e = x.entries().to_vec();
        e.extend_from_slice(z.entries());
        ZpVec::from_raw(p, e)
    };
    let claims: Vec<ZpVec> = claimed.iter().map(|op| stacked(op.x(), op.z())).collect();
    let expected: Vec<ZpVec> = stabilizer_set(p, n, clique)?
        .generators()
        .iter()
        .map(|s| Ok(stacked(s, &g.mat_vec(s)?)))
        .collect::<Result<_>>()?;
    let same_group = howell_basis(p, 2 * n, &claims)?.same_module(&howell_basis(p, 2 * n, &expected)?);
    let stabilizes = failing_generator.is_none();
    Ok(StabilizerTableReport {
        pass: stabilizes && same_group,
        stabilizes,
        same_group,
        max_deviation,
        failing_generator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_state::stabilizer_element;
    use crate::search::purity_set;

    fn m(p: u32) -> Modulus {
        Modulus::new(p).unwrap()
    }

    fn vs(p: u32, rows: &[&[i64]]) -> Vec<ZpVec> {
        rows.iter().map(|r| ZpVec::from_signed(m(p), r)).collect()
    }

    fn loop_graph(p: u32, n: usize) -> WeightedGraph {
        let edges: Vec<_> = (0..n).map(|a| (a, (a + 1) % n, 1)).collect();
        WeightedGraph::from_edges(m(p), n, &edges).unwrap()
    }

    fn five_four() -> Vec<ZpVec> {
        vs(4, &[&[0; 5], &[1; 5], &[2, 3, 3, 2, 3], &[3, 2, 2, 3, 2]])
    }

    #[test]
    fn enumerates_every_error_once() {
        let mut seen = std::collections::HashSet::new();
        for_each_error(3, 4, 1, 2, |x, z| {
            assert!(seen.insert((x.to_vec(), z.to_vec())));
            let w = x.iter().zip(z).filter(|(&a, &b)| a != 0 || b != 0).count();
            assert!((1..=2).contains(&w));
        });
        assert_eq!(seen.len() as u128, error_count(3, 4, 1, 2));
        assert_eq!(error_count(3, 4, 1, 2), 4 * 8 + 6 * 64);
    }

    #[test]
    fn five_one_three_passes() {
        let lim = Limits::default();
        let g = loop_graph(3, 5);
        let c = vs(3, &[&[0; 5], &[1; 5], &[2; 5]]);
        let r = kl_verify(&g, &c, 3, KlMode::Exhaustive, KlEngine::Spectral, &lim).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.errors_checked as u128, error_count(3, 5, 1, 2));
        // No graph stabilizer of weight < 3 on the five-cycle.
        assert_eq!(r.nonzero_count, 0);
    }

    #[test]
    fn five_four_three_passes() {
        let lim = Limits::default();
        let r = kl_verify(&loop_graph(4, 5), &five_four(), 3, KlMode::Exhaustive, KlEngine::Spectral, &lim).unwrap();
        assert!(r.pass);
        assert!(r.max_deviation < 1e-12);
    }

    #[test]
    fn weight_one_counterexample() {
        let lim = Limits::default();
        let c = vs(3, &[&[0; 5], &[1, 0, 0, 0, 0]]);
        for engine in [KlEngine::Direct, KlEngine::Spectral] {
            let r = kl_verify(&loop_graph(3, 5), &c, 3, KlMode::Exhaustive, engine, &lim).unwrap();
            assert!(!r.pass);
            let ce = r.counterexample.unwrap();
            assert_eq!(ce.weight(), 1);
            assert!(ce.deviation > 0.5);
        }
    }

    #[test]
    fn engines_agree() {
        let lim = Limits::default();
        let g = WeightedGraph::from_edges(m(4), 4, &[(0, 1, 1), (1, 2, 3), (2, 3, 2), (0, 3, 1)]).unwrap();
        let c = vs(4, &[&[0; 4], &[1, 2, 0, 3], &[2, 0, 1, 1]]);
        for d in 1..=3 {
            let a = kl_verify(&g, &c, d, KlMode::Exhaustive, KlEngine::Direct, &lim).unwrap();
            let b = kl_verify(&g, &c, d, KlMode::Exhaustive, KlEngine::Spectral, &lim).unwrap();
            assert_eq!(a.pass, b.pass);
            assert_eq!(a.nonzero_count, b.nonzero_count);
            assert_eq!(a.errors_checked, b.errors_checked);
            for (u, v) in a.nonzero_values.iter().zip(&b.nonzero_values) {
                assert_eq!((&u.x, &u.z), (&v.x, &v.z));
                assert!((u.re - v.re).abs() < 1e-9 && (u.im - v.im).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn nonzero_values_come_from_graph_stabilizers() {
        let lim = Limits::default();
        let g = WeightedGraph::from_edges(m(3), 3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        let c = vs(3, &[&[0, 0, 0], &[1, 0, 2], &[2, 0, 1]]);
        let r = kl_verify(&g, &c, 3, KlMode::Exhaustive, KlEngine::Spectral, &lim).unwrap();
        assert!(r.nonzero_count > 0);
        let purity = purity_set(&g, 3).unwrap();
        for v in &r.nonzero_values {
            let s = ZpVec::from_raw(m(3), v.x.clone());
            assert!(purity.contains(&s));
            let gs = stabilizer_element(&g, &s).unwrap();
            assert_eq!(gs.z().entries(), &v.z[..]);
            assert!((Complex64::new(v.re, v.im).norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn sampled_is_reproducible() {
        let lim = Limits::default();
        let mode = KlMode::Sampled { count: 300, seed: 7 };
        let a = kl_verify(&loop_graph(3, 5), &five_four_p3(), 3, mode, KlEngine::Spectral, &lim).unwrap();
        let b = kl_verify(&loop_graph(3, 5), &five_four_p3(), 3, mode, KlEngine::Spectral, &lim).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.errors_checked, 300);
        assert_eq!(a.seed(), Some(7));
        let samples = sample_errors(3, 5, 3, 300, 7);
        assert!(samples.iter().all(|(x, z)| {
            let w = x.iter().zip(z).filter(|(&a, &b)| a != 0 || b != 0).count();
            (1..3).contains(&w)
        }));
    }

    fn five_four_p3() -> Vec<ZpVec> {
        vs(3, &[&[0; 5], &[1; 5], &[2; 5]])
    }

    #[test]
    fn exhaustive_bound() {
        let lim = Limits::default().with_oracle_amplitudes(100);
        let r = kl_verify(&loop_graph(3, 5), &five_four_p3(), 3, KlMode::Exhaustive, KlEngine::Spectral, &lim);
        assert!(matches!(r, Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn distances() {
        let lim = Limits::default();
        assert_eq!(oracle_distance(&loop_graph(3, 5), &vs(3, &[&[0; 5]]), &lim).unwrap(), 3);
        let star = WeightedGraph::from_edges(m(4), 3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        assert_eq!(oracle_distance(&star, &vs(4, &[&[0, 0, 0], &[1, 0, 2], &[2, 0, 1]]), &lim).unwrap(), 2);
        assert_eq!(oracle_distance(&WeightedGraph::empty(m(3), 1), &vs(3, &[&[0]]), &lim).unwrap(), 1);
        assert_eq!(oracle_distance(&loop_graph(4, 5), &five_four(), &lim).unwrap(), 3);
    }

    #[test]
    fn stabilizer_table_checks() {
        let lim = Limits::default();
        let g = WeightedGraph::from_edges(m(3), 3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        let c = vs(3, &[&[0, 0, 0], &[1, 0, 2], &[2, 0, 1]]);
        let g2 = stabilizer_element(&g, &ZpVec::from_signed(m(3), &[0, 1, 0])).unwrap();
        let g13 = stabilizer_element(&g, &ZpVec::from_signed(m(3), &[1, 0, 1])).unwrap();
        let r = verify_stabilizer_table(&g, &c, &[g2.clone(), g13.clone()], &lim).unwrap();
        assert!(r.pass, "{r:?}");
        let flipped = g13.clone().with_phase((g13.phase() + 3) % 6);
        let r = verify_stabilizer_table(&g, &c, &[g2.clone(), flipped], &lim).unwrap();
        assert!(!r.pass);
        assert_eq!(r.failing_generator, Some(1));
        let r = verify_stabilizer_table(&g, &c, &[g2], &lim).unwrap();
        assert!(r.stabilizes && !r.same_group);
    }
}
