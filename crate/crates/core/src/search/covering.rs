use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::pauli::PauliOp;
use crate::zp::{Modulus, VectorIndexer, WeightedGraph, ZpVec};

/// Calls `f` on every vector of `Z_p^n` with at most `max_weight` nonzero
/// entries, in order of support (ascending combinations) then values.
pub fn for_each_low_weight(p: Modulus, n: usize, max_weight: usize, mut f: impl FnMut(&[u32])) {
    let mut v = vec![0u32; n];
    f(&v);
    fn rec(p: u32, start: usize, left: usize, v: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if left == 0 {
            return;
        }
        for a in start..v.len() {
            for val in 1..p {
                v[a] = val;
                f(v);
                rec(p, a + 1, left - 1, v, f);
            }
            v[a] = 0;
        }
    }
    rec(p.get(), 0, max_weight.min(n), &mut v, &mut f);
}

/// `{ s : |sup(s) ∪ sup(sΓ)| < d }`, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuritySet {
    d: usize,
    members: Vec<ZpVec>,
}

impl PuritySet {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn members(&self) -> &[ZpVec] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Whether only the zero vector is a member.
    pub fn is_trivial(&self) -> bool {
        self.members.iter().all(ZpVec::is_zero)
    }

    pub fn contains(&self, s: &ZpVec) -> bool {
        self.members.binary_search(s).is_ok()
    }
}

pub fn purity_set(g: &WeightedGraph, d: usize) -> Result<PuritySet> {
    if d == 0 {
        return Err(Error::Constraint("distance must be at least 1".into()));
    }
    let p = g.modulus();
    let mut members = Vec::new();
    for_each_low_weight(p, g.n(), d - 1, |s| {
        let z = g.mat_vec_unchecked(s);
        let weight = s.iter().zip(z.entries()).filter(|(&a, &b)| a != 0 || b != 0).count();
        if weight < d {
            members.push(ZpVec::from_raw(p, s.to_vec()));
        }
    });
    members.sort();
    Ok(PuritySet { d, members })
}

/// Membership bitmap of `{ t − sΓ : 0 < |sup(s) ∪ sup(t)| < d }` over `Z_p^n`.
#[derive(Clone, Debug)]
pub struct CoveredSet {
    d: usize,
    indexer: VectorIndexer,
    bits: FixedBitSet,
}

impl CoveredSet {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn indexer(&self) -> &VectorIndexer {
        &self.indexer
    }

    #[inline]
    pub fn contains(&self, v: &ZpVec) -> bool {
        self.bits.contains(self.indexer.encode(v.entries()))
    }

    #[inline]
    pub fn contains_index(&self, index: usize) -> bool {
        self.bits.contains(index)
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones(..)
    }

    /// Members in index order.
    pub fn members(&self) -> Vec<ZpVec> {
        self.bits.ones().map(|i| self.indexer.decode(i)).collect()
    }
}

/// Enumerates every error of weight in `(0, d)` support-first, skipping the
/// all-identity local pair, and marks its covered vector.
pub fn covered_set(g: &WeightedGraph, d: usize, limits: &Limits) -> Result<CoveredSet> {
    if d == 0 {
        return Err(Error::Constraint("distance must be at least 1".into()));
    }
    let p = g.modulus();
    let n = g.n();
    let indexer = VectorIndexer::new(p, n, limits.set_vectors, "covered set")?;
    let mut bits = FixedBitSet::with_capacity(indexer.total());
    let pm = p.get();
    // Local contribution t_a e_a − s_a Γ_a for each vertex and nonzero pair.
    let mut local: Vec<Vec<Vec<u32>>> = Vec::with_capacity(n);
    for a in 0..n {
        let row = g.row(a);
        let mut pairs = Vec::with_capacity((pm * pm - 1) as usize);
        for s in 0..pm {
            for t in 0..pm {
                if s == 0 && t == 0 {
                    continue;
                }
                let mut v: Vec<u32> = row.entries().iter().map(|&w| p.neg(p.mul(s, w))).collect();
                v[a] = p.add(v[a], t);
                pairs.push(v);
            }
        }
        local.push(pairs);
    }
    struct Walk<'a> {
        p: Modulus,
        local: &'a [Vec<Vec<u32>>],
        indexer: &'a VectorIndexer,
        bits: &'a mut FixedBitSet,
    }
    impl Walk<'_> {
        fn rec(&mut self, start: usize, left: usize, acc: &[u32]) {
            if left == 0 {
                return;
            }
            let mut next = vec![0u32; acc.len()];
            for a in start..self.local.len() {
                for contrib in &self.local[a] {
                    for ((o, &x), &y) in next.iter_mut().zip(acc).zip(contrib) {
                        *o = self.p.add(x, y);
                    }
                    self.bits.insert(self.indexer.encode(&next));
                    self.rec(a + 1, left - 1, &next);
                }
            }
        }
    }
    let zero = vec![0u32; n];
    Walk { p, local: &local, indexer: &indexer, bits: &mut bits }.rec(0, d - 1, &zero);
    Ok(CoveredSet { d, indexer, bits })
}

/// Complement of the covered set: the `d`-uncoverable vectors.
#[derive(Clone, Debug)]
pub struct UncoverableSet {
    covered: CoveredSet,
}

impl UncoverableSet {
    pub fn d(&self) -> usize {
        self.covered.d
    }

    pub fn contains(&self, v: &ZpVec) -> bool {
        !self.covered.contains(v)
    }

    pub fn count(&self) -> usize {
        self.covered.indexer.total() - self.covered.count()
    }

    pub fn covered(&self) -> &CoveredSet {
        &self.covered
    }
}

pub fn uncoverable_set(g: &WeightedGraph, d: usize, limits: &Limits) -> Result<UncoverableSet> {
    Ok(UncoverableSet { covered: covered_set(g, d, limits)? })
}

/// An error `X^s Z^t` of weight in `(0, d)` with `t − sΓ = v`, found by
/// direct search over `s`; `None` when `v` is `d`-uncoverable.
pub fn covering_error(g: &WeightedGraph, d: usize, v: &ZpVec) -> Option<PauliOp> {
    if d <= 1 {
        return None;
    }
    let p = g.modulus();
    let mut found = None;
    let mut done = false;
    for_each_low_weight(p, g.n(), d - 1, |s| {
        if done {
            return;
        }
        let sg = g.mat_vec_unchecked(s);
        let t: Vec<u32> = v.entries().iter().zip(sg.entries()).map(|(&a, &b)| p.add(a, b)).collect();
        let weight = s.iter().zip(&t).filter(|(&a, &b)| a != 0 || b != 0).count();
        if weight > 0 && weight < d {
            let x = ZpVec::from_raw(p, s.to_vec());
            let z = ZpVec::from_raw(p, t);
            found = PauliOp::new(0, x, z).ok();
            done = true;
        }
    });
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::covered_vector;

    fn m(p: u32) -> Modulus {
        Modulus::new(p).unwrap()
    }

    fn loop_graph(p: u32, n: usize) -> WeightedGraph {
        let edges: Vec<_> = (0..n).map(|a| (a, (a + 1) % n, 1)).collect();
        WeightedGraph::from_edges(m(p), n, &edges).unwrap()
    }

    fn star3(p: u32) -> WeightedGraph {
        WeightedGraph::from_edges(m(p), 3, &[(0, 1, 1), (1, 2, 1)]).unwrap()
    }

    #[test]
    fn low_weight_enumeration_counts() {
        let mut count = 0;
        for_each_low_weight(m(3), 4, 2, |_| count += 1);
        // 1 + 4·2 + 6·4
        assert_eq!(count, 33);
        let mut all = 0;
        for_each_low_weight(m(3), 3, 3, |_| all += 1);
        assert_eq!(all, 27);
    }

    #[test]
    fn purity_examples() {
        let s = purity_set(&loop_graph(3, 5), 3).unwrap();
        assert!(s.is_trivial() && s.len() == 1);
        let s = purity_set(&star3(3), 2).unwrap();
        assert!(s.is_trivial());
        let g = loop_graph(3, 4);
        assert_eq!(purity_set(&g, 5).unwrap().len(), 81);
    }

    #[test]
    fn covered_examples() {
        let lim = Limits::default();
        assert_eq!(covered_set(&star3(3), 1, &lim).unwrap().count(), 0);
        let c = covered_set(&star3(3), 2, &lim).unwrap();
        assert!(c.contains(&ZpVec::from_signed(m(3), &[0, 1, 0])));
        assert!(c.contains(&ZpVec::from_signed(m(3), &[2, 0, 2])));
        let c = covered_set(&loop_graph(3, 5), 3, &lim).unwrap();
        assert!(!c.contains(&ZpVec::from_signed(m(3), &[1; 5])));
    }

    #[test]
    fn uncoverable_examples() {
        let lim = Limits::default();
        let u = uncoverable_set(&loop_graph(3, 3), 1, &lim).unwrap();
        assert_eq!(u.count(), 27);
        let u = uncoverable_set(&loop_graph(4, 5), 3, &lim).unwrap();
        for v in [[1, 1, 1, 1, 1], [2, 3, 3, 2, 3], [3, 2, 2, 3, 2]] {
            assert!(u.contains(&ZpVec::from_signed(m(4), &v)));
        }
        let u = uncoverable_set(&star3(3), 2, &lim).unwrap();
        assert!(u.contains(&ZpVec::from_signed(m(3), &[1, 0, 2])));
    }

    #[test]
    fn bound_is_enforced() {
        let lim = Limits { set_vectors: 100, ..Limits::default() };
        assert!(matches!(covered_set(&loop_graph(3, 5), 3, &lim), Err(Error::BoundExceeded { .. })));
    }

    /// On the unit-weight 5-cycle a full-support vector is covered by an
    /// error of weight at most 2 iff c_k + c_{k+1} = c_{k+3} for some cyclic k.
    #[test]
    fn five_cycle_covering_law() {
        for p in [4u32, 5] {
            let g = loop_graph(p, 5);
            let covered = covered_set(&g, 3, &Limits::default()).unwrap();
            let idx = VectorIndexer::new(m(p), 5, 1 << 20, "test").unwrap();
            idx.for_each(|i, c| {
                if c.contains(&0) {
                    return;
                }
                let law = (0..5).any(|k| (c[k] + c[(k + 1) % 5]) % p == c[(k + 3) % 5]);
                assert_eq!(covered.contains_index(i), law, "p={p} c={c:?}");
            });
        }
    }

    use proptest::prelude::*;

    fn arb_graph() -> impl Strategy<Value = WeightedGraph> {
        (2u32..=4, 1usize..=4).prop_flat_map(|(p, n)| {
            prop::collection::vec(0..p, n * (n - 1) / 2).prop_map(move |w| {
                let mut g = WeightedGraph::empty(m(p), n);
                let mut k = 0;
                for a in 0..n {
                    for b in a + 1..n {
                        g.set_edge(a, b, w[k] as i64).unwrap();
                        k += 1;
                    }
                }
                g
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bitmap_matches_direct_search(g in arb_graph(), d in 1usize..=4) {
            let covered = covered_set(&g, d, &Limits::default()).unwrap();
            let idx = covered.indexer().clone();
            for i in 0..idx.total() {
                let v = idx.decode(i);
                let witness = covering_error(&g, d, &v);
                prop_assert_eq!(covered.contains_index(i), witness.is_some());
                if let Some(e) = witness {
                    prop_assert!(e.weight() > 0 && e.weight() < d);
                    prop_assert_eq!(covered_vector(&g, e.x(), e.z()).unwrap(), v);
                }
            }
        }

        #[test]
        fn monotone_in_distance(g in arb_graph(), d in 1usize..=4) {
            let lim = Limits::default();
            let lo = covered_set(&g, d, &lim).unwrap();
            let hi = covered_set(&g, d + 1, &lim).unwrap();
            for i in lo.bits.ones() {
                prop_assert!(hi.contains_index(i));
            }
            let s_lo = purity_set(&g, d).unwrap();
            let s_hi = purity_set(&g, d + 1).unwrap();
            for s in s_lo.members() {
                prop_assert!(s_hi.contains(s));
            }
        }

        #[test]
        fn purity_members_have_low_weight(g in arb_graph(), d in 1usize..=4) {
            let s = purity_set(&g, d).unwrap();
            let idx = VectorIndexer::new(g.modulus(), g.n(), 1 << 12, "test").unwrap();
            let mut expected = Vec::new();
            idx.for_each(|_, v| {
                let sv = ZpVec::from_raw(g.modulus(), v.to_vec());
                let z = g.mat_vec(&sv).unwrap();
                let w = v.iter().zip(z.entries()).filter(|(&a, &b)| a != 0 || b != 0).count();
                if w < d {
                    expected.push(sv);
                }
            });
            prop_assert_eq!(s.members(), &expected[..]);
        }
    }
}
