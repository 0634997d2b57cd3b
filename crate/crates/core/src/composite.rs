//! Codes over `Z_{pq}` from codes over `Z_p` and `Z_q` with coprime `p, q`.

use serde::{Deserialize, Serialize};

use crate::code::{canonical_order, GraphCode};
use crate::error::{Error, Result};
use crate::families::{l6_graph, six_two_three_vectors};
use crate::format::{parse_code, CodeFile};
use crate::graph_state::{build_state, GraphStateBasisLabel};
use crate::limits::Limits;
use crate::zp::{gcd, mod_inverse, Modulus, VectorIndexer, WeightedGraph, ZpVec};

/// The binary `[[6,1,3]]_2` code: a 5-cycle with a leaf on vertex 5.
const BINARY_6_1_3: &str = include_str!("../data/binary_6_1_3.code");

/// `α·p + β·q = 1` with `α ∈ [0, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BezoutPair {
    pub p: u32,
    pub q: u32,
    pub alpha: i64,
    pub beta: i64,
}

impl BezoutPair {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        Modulus::new(p)?;
        Modulus::new(q)?;
        if gcd(p as u64, q as u64) != 1 {
            return Err(Error::NotCoprime(p, q));
        }
        let alpha = mod_inverse(p as u64 % q as u64, q as u64).expect("coprime") as i64;
        let beta = (1 - alpha * p as i64) / q as i64;
        debug_assert_eq!(alpha * p as i64 + beta * q as i64, 1);
        Ok(BezoutPair { p, q, alpha, beta })
    }

    pub fn product(&self) -> Modulus {
        Modulus::new(self.p * self.q).expect("product of moduli")
    }
}

fn check_pair(gp: &WeightedGraph, gq: &WeightedGraph) -> Result<BezoutPair> {
    if gp.n() != gq.n() {
        return Err(Error::LengthMismatch { expected: gp.n(), found: gq.n() });
    }
    BezoutPair::new(gp.modulus().get(), gq.modulus().get())
}

/// `Γ_p = q·Γ mod p` and `Γ_q = p·Γ mod q`.
pub fn crt_split(g: &WeightedGraph, p: u32, q: u32) -> Result<(WeightedGraph, WeightedGraph)> {
    let pair = BezoutPair::new(p, q)?;
    if g.modulus() != pair.product() {
        return Err(Error::ModulusMismatch(g.modulus().get(), p * q));
    }
    let (mp, mq) = (Modulus::new(p)?, Modulus::new(q)?);
    let mut gp = WeightedGraph::empty(mp, g.n());
    let mut gq = WeightedGraph::empty(mq, g.n());
    for (a, b, w) in g.edges() {
        let w = w as i64;
        gp.set_edge(a, b, q as i64 * w)?;
        gq.set_edge(a, b, p as i64 * w)?;
    }
    Ok((gp, gq))
}

/// `Γ = p·α²·Γ_q + q·β²·Γ_p mod pq`.
pub fn crt_combine(gp: &WeightedGraph, gq: &WeightedGraph) -> Result<WeightedGraph> {
    let pair = check_pair(gp, gq)?;
    let pq = pair.product();
    let m = pq.get() as i64;
    let cp = (pair.q as i64 * pair.beta * pair.beta).rem_euclid(m);
    let cq = (pair.p as i64 * pair.alpha * pair.alpha).rem_euclid(m);
    let mut out = WeightedGraph::empty(pq, gp.n());
    for a in 0..gp.n() {
        for b in a + 1..gp.n() {
            let w = cp * gp.weight(a, b) as i64 + cq * gq.weight(a, b) as i64;
            out.set_edge(a, b, w.rem_euclid(m))?;
        }
    }
    Ok(out)
}

/// Index of `|s⟩_p ⊗ |t⟩_q` under the relabeling: `p·t + q·s mod pq` per qupit.
pub fn relabel_isometry_index(s: &ZpVec, t: &ZpVec) -> Result<ZpVec> {
    let pair = BezoutPair::new(s.modulus().get(), t.modulus().get())?;
    if s.len() != t.len() {
        return Err(Error::LengthMismatch { expected: s.len(), found: t.len() });
    }
    let m = pair.product();
    let entries = s
        .entries()
        .iter()
        .zip(t.entries())
        .map(|(&sa, &ta)| ((pair.p as u64 * ta as u64 + pair.q as u64 * sa as u64) % m.get() as u64) as u32)
        .collect();
    ZpVec::new(m, entries)
}

/// The vector `e` over `Z_pq` with `e ≡ c (mod p)` and `e ≡ c̃ (mod q)`.
pub fn crt_lift(c: &ZpVec, ct: &ZpVec) -> Result<ZpVec> {
    let pair = BezoutPair::new(c.modulus().get(), ct.modulus().get())?;
    if c.len() != ct.len() {
        return Err(Error::LengthMismatch { expected: c.len(), found: ct.len() });
    }
    let m = pair.product();
    let bq = pair.beta * pair.q as i64;
    let ap = pair.alpha * pair.p as i64;
    let entries: Vec<i64> =
        c.entries().iter().zip(ct.entries()).map(|(&x, &y)| bq * x as i64 + ap * y as i64).collect();
    Ok(ZpVec::from_signed(m, &entries))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Report {
    pub pass: bool,
    pub max_deviation: f64,
}

/// Compares `|Γ_pq⟩` for the combined graph with the relabeled `|Γ_p⟩ ⊗ |Γ_q⟩`.
pub fn theorem2_check(gp: &WeightedGraph, gq: &WeightedGraph, limits: &Limits) -> Result<Theorem2Report> {
    let pair = check_pair(gp, gq)?;
    let n = gp.n();
    let combined = crt_combine(gp, gq)?;
    let bound = limits.oracle_amplitudes;
    let big = build_state(&GraphStateBasisLabel::new(combined.clone(), ZpVec::zeros(combined.modulus(), n))?, bound)?;
    let sp = build_state(&GraphStateBasisLabel::new(gp.clone(), ZpVec::zeros(gp.modulus(), n))?, bound)?;
    let sq = build_state(&GraphStateBasisLabel::new(gq.clone(), ZpVec::zeros(gq.modulus(), n))?, bound)?;
    let ip = VectorIndexer::new(gp.modulus(), n, bound, "factor amplitudes")?;
    let iq = VectorIndexer::new(gq.modulus(), n, bound, "factor amplitudes")?;
    let ipq = VectorIndexer::new(pair.product(), n, bound, "combined amplitudes")?;
    let mut max_deviation = 0.0f64;
    let mut e = vec![0u32; n];
    let m = pair.product().get();
    ip.for_each(|i, s| {
        iq.for_each(|j, t| {
            for a in 0..n {
                e[a] = (pair.p * t[a] + pair.q * s[a]) % m;
            }
            let want = sp.amplitudes()[i] * sq.amplitudes()[j];
            let got = big.amplitudes()[ipq.encode(&e)];
            max_deviation = max_deviation.max((want - got).norm());
        });
    });
    Ok(Theorem2Report { pass: max_deviation < 1e-12, max_deviation })
}

/// `((n, K·K̃, d))_{pq}` from two codes on the same number of qupits with equal distance.
pub fn product_code(cp: &GraphCode, cq: &GraphCode, limits: &Limits) -> Result<GraphCode> {
    if cp.d() != cq.d() {
        return Err(Error::Constraint(format!("distances differ: {} vs {}", cp.d(), cq.d())));
    }
    let graph = crt_combine(cp.graph(), cq.graph())?;
    let mut clique = Vec::with_capacity(cp.k() * cq.k());
    for c in cp.clique() {
        for ct in cq.clique() {
            clique.push(crt_lift(c, ct)?);
        }
    }
    GraphCode::new(graph, canonical_order(&clique), cp.d(), limits)
}

/// The frozen binary `[[6,1,3]]_2` graph and clique.
pub fn binary_6_1_3() -> CodeFile {
    parse_code(BINARY_6_1_3).expect("shipped binary code parses")
}

pub fn binary_6_1_3_code(limits: &Limits) -> Result<GraphCode> {
    let f = binary_6_1_3();
    GraphCode::new(f.graph, f.clique, f.d, limits)
}

/// `δ = (p+1)²/2`, the weight the combined graph carries where the odd factor has weight 1.
pub fn composite_delta(p: u32) -> u32 {
    (p + 1) * (p + 1) / 2
}

/// `((6, 2p², 3))_{2p}` on the combined graph of `L_6` (one edge `-1`) and the
/// binary `[[6,1,3]]_2` graph; clique `(p+1)(a, a+b, b, -a, a-b, b) + p(c,c,c,c,c,0)`.
pub fn family_6_2p2_3(p: u32, limits: &Limits) -> Result<GraphCode> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::Constraint("requires odd p ≥ 3".into()));
    }
    let mp = Modulus::new(p)?;
    let odd = GraphCode::new(l6_graph(mp)?, canonical_order(&six_two_three_vectors(mp)), 3, limits)?;
    let binary = binary_6_1_3_code(limits)?;
    let code = product_code(&odd, &binary, limits)?;

    let delta = composite_delta(p) as u64;
    let m = 2 * p as u64;
    for a in 0..6 {
        for b in a + 1..6 {
            let want = (delta * odd.graph().weight(a, b) as u64 + p as u64 * binary.graph().weight(a, b) as u64) % m;
            assert_eq!(code.graph().weight(a, b) as u64, want, "combined weight at ({a},{b})");
        }
    }
    Ok(code)
}

/// The clique as written in closed form, for comparison with the product construction.
pub fn composite_formula_clique(p: u32) -> Result<Vec<ZpVec>> {
    let m = Modulus::new(2 * p)?;
    let k = p as i64 + 1;
    let q = p as i64;
    let mut out = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..2 {
                let base = [a, a + b, b, -a, a - b, b];
                let tail = [c, c, c, c, c, 0];
                let e: Vec<i64> = base.iter().zip(tail).map(|(&x, y)| k * x + q * y).collect();
                out.push(ZpVec::from_signed(m, &e));
            }
        }
    }
    Ok(canonical_order(&out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::Classification;
    use crate::families::family_5_1_3;
    use crate::oracle::{kl_verify, KlEngine, KlMode};
    use crate::pauli::PauliOp;
    use proptest::prelude::*;

    fn m(p: u32) -> Modulus {
        Modulus::new(p).unwrap()
    }

    fn random_graph(p: u32, n: usize, raw: &[u32]) -> WeightedGraph {
        let mut g = WeightedGraph::empty(m(p), n);
        let mut k = 0;
        for a in 0..n {
            for b in a + 1..n {
                g.set_edge(a, b, (raw[k] % p) as i64).unwrap();
                k += 1;
            }
        }
        g
    }

    #[test]
    fn bezout() {
        let b = BezoutPair::new(3, 2).unwrap();
        assert_eq!((b.alpha, b.beta), (1, -1));
        let b = BezoutPair::new(5, 4).unwrap();
        assert_eq!(b.alpha * 5 + b.beta * 4, 1);
        assert!((0..4).contains(&b.alpha));
        assert!(matches!(BezoutPair::new(4, 6), Err(Error::NotCoprime(4, 6))));
    }

    #[test]
    fn split_examples() {
        let ones = crate::families::loop_graph(m(6), 5, 1).unwrap();
        let (g3, g2) = crt_split(&ones, 3, 2).unwrap();
        assert!(g3.edges().iter().all(|&(_, _, w)| w == 2));
        assert!(g2.edges().iter().all(|&(_, _, w)| w == 1));
        let zero = WeightedGraph::empty(m(6), 3);
        let (a, b) = crt_split(&zero, 3, 2).unwrap();
        assert!(a.edges().is_empty() && b.edges().is_empty());
        assert!(crt_split(&zero, 2, 2).is_err());
    }

    #[test]
    fn relabel_index() {
        let s = ZpVec::from_signed(m(3), &[1]);
        let t = ZpVec::from_signed(m(2), &[1]);
        assert_eq!(relabel_isometry_index(&s, &t).unwrap().entries(), &[5]);
        let mut seen = std::collections::BTreeSet::new();
        for a in 0..3 {
            for b in 0..2 {
                let e =
                    relabel_isometry_index(&ZpVec::from_signed(m(3), &[a]), &ZpVec::from_signed(m(2), &[b])).unwrap();
                seen.insert(e.entries()[0]);
            }
        }
        assert_eq!(seen.len(), 6);
    }

    /// Single-qupit operator correspondence `X ↔ X^β ⊗ X^α`, `Z ↔ Z ⊗ Z`.
    fn correspondence(p: u32, q: u32) {
        let pair = BezoutPair::new(p, q).unwrap();
        let pq = pair.product();
        let big_x = PauliOp::x_on(pq, 1, 0, 1).to_matrix(1 << 10).unwrap();
        let big_z = PauliOp::z_on(pq, 1, 0, 1).to_matrix(1 << 10).unwrap();
        let xp = PauliOp::x_on(m(p), 1, 0, pair.beta).to_matrix(1 << 10).unwrap();
        let xq = PauliOp::x_on(m(q), 1, 0, pair.alpha).to_matrix(1 << 10).unwrap();
        let zp = PauliOp::z_on(m(p), 1, 0, 1).to_matrix(1 << 10).unwrap();
        let zq = PauliOp::z_on(m(q), 1, 0, 1).to_matrix(1 << 10).unwrap();
        let dim = (p * q) as usize;
        let idx = |s: u32, t: u32| ((p * t + q * s) % (p * q)) as usize;
        for (big, sp, sq) in [(&big_x, &xp, &xq), (&big_z, &zp, &zq)] {
            for s1 in 0..p {
                for t1 in 0..q {
                    for s2 in 0..p {
                        for t2 in 0..q {
                            let want = sp[(s1 * p + s2) as usize] * sq[(t1 * q + t2) as usize];
                            let got = big[idx(s1, t1) * dim + idx(s2, t2)];
                            assert!((want - got).norm() < 1e-12, "({p},{q})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn operator_correspondence() {
        for (p, q) in [(3, 2), (5, 2), (3, 4), (5, 3)] {
            correspondence(p, q);
        }
    }

    #[test]
    fn theorem2_small() {
        let g3 = crate::families::star_graph(m(3), 3, 1).unwrap();
        let g2 = crate::families::star_graph(m(2), 3, 0).unwrap();
        let r = theorem2_check(&g3, &g2, &Limits::default()).unwrap();
        assert!(r.pass, "{r:?}");
        let r =
            theorem2_check(&WeightedGraph::empty(m(3), 2), &WeightedGraph::empty(m(2), 2), &Limits::default()).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn binary_code_is_certified() {
        let lim = Limits::default();
        let code = binary_6_1_3_code(&lim).unwrap();
        assert_eq!(code.label(), "[[6,1,3]]_2");
        let r = kl_verify(code.graph(), code.clique(), 3, KlMode::Exhaustive, KlEngine::Direct, &lim).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn composite_family() {
        let lim = Limits::default();
        let code = family_6_2p2_3(3, &lim).unwrap();
        assert_eq!(code.k(), 18);
        assert_eq!(code.classification(), Classification::Stabilizer);
        let mut deg = code.degrees().unwrap().to_vec();
        deg.sort_unstable();
        assert_eq!(deg, vec![2, 3, 3]);
        assert_eq!(code.summary(), "((6,2·9,3))_6 stabilizer, degrees 3·3·2");
        assert_eq!(code.clique(), &composite_formula_clique(3).unwrap()[..]);
        assert!(family_6_2p2_3(4, &lim).is_err());
    }

    #[test]
    fn five_one_three_product() {
        let lim = Limits::default();
        let prod = product_code(&family_5_1_3(2, &lim).unwrap(), &family_5_1_3(3, &lim).unwrap(), &lim).unwrap();
        assert_eq!(prod.label(), "[[5,1,3]]_6");
        assert_eq!(prod.clique(), family_5_1_3(6, &lim).unwrap().clique());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn split_inverts_combine(pi in 0usize..4, n in 2usize..5, raw in prop::collection::vec(0u32..30, 10), raw2 in prop::collection::vec(0u32..30, 10)) {
            let (p, q) = [(3, 2), (2, 3), (5, 2), (3, 4)][pi];
            let gp = random_graph(p, n, &raw);
            let gq = random_graph(q, n, &raw2);
            let (a, b) = crt_split(&crt_combine(&gp, &gq).unwrap(), p, q).unwrap();
            prop_assert_eq!(a, gp);
            prop_assert_eq!(b, gq);
        }

        #[test]
        fn theorem2_random(n in 2usize..4, raw in prop::collection::vec(0u32..30, 3), raw2 in prop::collection::vec(0u32..30, 3)) {
            let r = theorem2_check(&random_graph(3, n, &raw), &random_graph(2, n, &raw2), &Limits::default()).unwrap();
            prop_assert!(r.max_deviation < 1e-12);
        }
    }
}
