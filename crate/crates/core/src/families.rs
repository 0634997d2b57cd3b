//! Closed-form code families and the graphs they live on.
//!
//! Every constructor builds its clique from a formula and then runs the full
//! coding-clique check, so a returned code is a certificate.

use crate::code::{canonical_order, GraphCode};
use crate::error::{Error, Result};
use crate::format::{parse_code, parse_graph};
use crate::limits::Limits;
use crate::zp::{solve_orthogonal, Modulus, WeightedGraph, ZpVec};

/// Star on `n` vertices with all edges weighted 1 and the given center.
pub fn star_graph(p: Modulus, n: usize, center: usize) -> Result<WeightedGraph> {
    if n < 2 {
        return Err(Error::InvalidGraph(format!("star needs at least 2 vertices, got {n}")));
    }
    if center >= n {
        return Err(Error::VertexOutOfRange { vertex: center, n });
    }
    let edges: Vec<_> = (0..n).filter(|&a| a != center).map(|a| (center, a, 1)).collect();
    WeightedGraph::from_edges(p, n, &edges)
}

/// Cycle `1-2-…-n-1` with unit weights except the closing edge `(n,1)`.
pub fn loop_graph(p: Modulus, n: usize, closing_weight: i64) -> Result<WeightedGraph> {
    if n < 3 {
        return Err(Error::InvalidGraph(format!("loop needs at least 3 vertices, got {n}")));
    }
    let mut edges: Vec<_> = (0..n - 1).map(|a| (a, a + 1, 1)).collect();
    edges.push((n - 1, 0, closing_weight));
    WeightedGraph::from_edges(p, n, &edges)
}

/// Rim cycle on vertices `1..n-1` plus a hub (vertex `n`) joined to every rim vertex.
pub fn wheel_graph(p: Modulus, n: usize) -> Result<WeightedGraph> {
    if n < 4 {
        return Err(Error::InvalidGraph(format!("wheel needs at least 4 vertices, got {n}")));
    }
    let rim = n - 1;
    let mut edges: Vec<_> = (0..rim).map(|a| (a, (a + 1) % rim, 1)).collect();
    edges.extend((0..rim).map(|a| (a, rim, 1)));
    WeightedGraph::from_edges(p, n, &edges)
}

/// Perfect matching `(1,2),(3,4),…` on `2·pairs` vertices.
pub fn matching_graph(p: Modulus, pairs: usize) -> Result<WeightedGraph> {
    let edges: Vec<_> = (0..pairs).map(|i| (2 * i, 2 * i + 1, 1)).collect();
    WeightedGraph::from_edges(p, 2 * pairs, &edges)
}

fn modulus(p: u32) -> Result<Modulus> {
    Modulus::new(p)
}

fn require(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Constraint(format!("requires {what}")))
    }
}

fn vector(p: Modulus, entries: &[i64]) -> ZpVec {
    ZpVec::from_signed(p, entries)
}

fn finish(graph: WeightedGraph, clique: Vec<ZpVec>, d: usize, limits: &Limits) -> Result<GraphCode> {
    GraphCode::new(graph, canonical_order(&clique), d, limits)
}

/// All vectors orthogonal to every row of `constraints`.
fn orthogonal_group(p: Modulus, n: usize, constraints: &[Vec<i64>], limits: &Limits) -> Result<Vec<ZpVec>> {
    let rows: Vec<ZpVec> = constraints.iter().map(|r| vector(p, r)).collect();
    solve_orthogonal(p, n, &rows)?.elements(limits.closure_size)
}

/// `[[3,1,2]]_p` on the star with center 2, clique `⟨(1,0,-1)⟩`.
pub fn family_3_1_2(p: u32, limits: &Limits) -> Result<GraphCode> {
    require(p >= 3 && p % 2 == 1, "odd p ≥ 3")?;
    let m = modulus(p)?;
    let clique = (0..p as i64).map(|l| vector(m, &[l, 0, -l])).collect();
    finish(star_graph(m, 3, 1)?, clique, 2, limits)
}

/// `((3,p-1,2))_p` for even `p = 2q`: `(l,0,2l)` for `l < q` and
/// `(q+j,0,2j+1)` for `j ≤ q-2`.
pub fn family_3_pm1_2(p: u32, limits: &Limits) -> Result<GraphCode> {
    require(p >= 4 && p % 2 == 0, "even p ≥ 4")?;
    let m = modulus(p)?;
    finish(star_graph(m, 3, 1)?, three_pm1_vectors(m), 2, limits)
}

fn three_pm1_vectors(m: Modulus) -> Vec<ZpVec> {
    let q = (m.get() / 2) as i64;
    let mut out: Vec<ZpVec> = (0..q).map(|l| vector(m, &[l, 0, 2 * l])).collect();
    out.extend((0..q - 1).map(|j| vector(m, &[q + j, 0, 2 * j + 1])));
    out
}

/// `[[2n,2n-2,2]]_p` on the perfect matching; the clique is everything
/// orthogonal to `(1,0,1,0,…)` and `(0,1,0,1,…)`.
pub fn family_2n_2nm2_2(n: usize, p: u32, limits: &Limits) -> Result<GraphCode> {
    require(n >= 1, "n ≥ 1")?;
    let m = modulus(p)?;
    let len = 2 * n;
    let odd: Vec<i64> = (0..len).map(|a| (a % 2 == 0) as i64).collect();
    let even: Vec<i64> = (0..len).map(|a| (a % 2 == 1) as i64).collect();
    let clique = orthogonal_group(m, len, &[odd, even], limits)?;
    finish(matching_graph(m, n)?, clique, 2, limits)
}

/// The star `S_4` with center 4 used by the two `p = 6` examples.
fn s4(m: Modulus) -> Result<WeightedGraph> {
    star_graph(m, 4, 3)
}

/// `[[4,2,2]]_6` claim: vectors `(-a-b, a, b, 0)` on `S_4`.
///
/// The group contains `(4,4,4,0)`, which a weight-1 error on the center
/// covers, so construction fails the coding-clique check.
pub fn family_4_2_2_6(limits: &Limits) -> Result<GraphCode> {
    let m = modulus(6)?;
    let mut clique = Vec::new();
    for a in 0..6 {
        for b in 0..6 {
            clique.push(vector(m, &[-a - b, a, b, 0]));
        }
    }
    finish(s4(m)?, clique, 2, limits)
}

/// `((4,36,2))_6` claim: `(a+b, -a, -b, δ_{a1}δ_{b1})` on `S_4`. Fails for
/// the same reason as [`family_4_2_2_6`].
pub fn family_4_36_2_6(limits: &Limits) -> Result<GraphCode> {
    let m = modulus(6)?;
    let mut clique = Vec::new();
    for a in 0..6 {
        for b in 0..6 {
            let delta = (a == 1 && b == 1) as i64;
            clique.push(vector(m, &[a + b, -a, -b, delta]));
        }
    }
    finish(s4(m)?, clique, 2, limits)
}

/// `S_3` (vertices A, B, C with center B) followed by the matching on `2n` vertices.
fn star_plus_matching(m: Modulus, n: usize) -> Result<WeightedGraph> {
    let star = star_graph(m, 3, 1)?;
    if n == 0 {
        return Ok(star);
    }
    star.disjoint_union(&matching_graph(m, n)?)
}

/// `[[2n+3,2n+1,2]]_p` for odd `p` on `S_3 ⊔ B_{2n}`.
pub fn family_2np3_2np1_2(n: usize, p: u32, limits: &Limits) -> Result<GraphCode> {
    require(p >= 3 && p % 2 == 1, "odd p ≥ 3")?;
    let m = modulus(p)?;
    let len = 2 * n + 3;
    // Exponents of Z_A X_B Z_C X_1 Z_2 … and X_A Z_B² X_C Z_1 X_2 … as products of G_a.
    let mut first = vec![0i64, 1, 0];
    let mut second = vec![1i64, 0, 1];
    for i in 0..2 * n {
        first.push((i % 2 == 0) as i64);
        second.push((i % 2 == 1) as i64);
    }
    let clique = orthogonal_group(m, len, &[first, second], limits)?;
    finish(star_plus_matching(m, n)?, clique, 2, limits)
}

/// `((2n+3, p^{2n}(p-1), 2))_p` for even `p`: the `((3,p-1,2))_p` clique
/// shifted by `Σ s_{2i}` on A and C and `Σ s_{2i-1}` on B, with `s`
/// arbitrary on the matching.
pub fn family_rains(n: usize, p: u32, limits: &Limits) -> Result<GraphCode> {
    require(p >= 4 && p % 2 == 0, "even p ≥ 4")?;
    let m = modulus(p)?;
    let len = 2 * n;
    let total = m.pow(len).filter(|&t| t * (p as u128 - 1) <= limits.closure_size);
    let Some(total) = total else {
        return Err(Error::bound("clique size", u128::MAX, limits.closure_size));
    };
    let base = three_pm1_vectors(m);
    let mut clique = Vec::with_capacity(total as usize * base.len());
    let mut s = vec![0u32; len];
    for _ in 0..total {
        // 1-based s_{2i} are the 0-based odd positions.
        let even_sum: i64 = s.iter().skip(1).step_by(2).map(|&v| v as i64).sum();
        let odd_sum: i64 = s.iter().step_by(2).map(|&v| v as i64).sum();
        for v in &base {
            let e = v.entries();
            let mut entries = vec![e[0] as i64 + even_sum, e[1] as i64 + odd_sum, e[2] as i64 + even_sum];
            entries.extend(s.iter().map(|&x| x as i64));
            clique.push(vector(m, &entries));
        }
        for digit in s.iter_mut().rev() {
            *digit += 1;
            if *digit < p {
                break;
            }
            *digit = 0;
        }
    }
    finish(star_plus_matching(m, n)?, clique, 2, limits)
}

/// `[[5,1,3]]_p` on `L_5`, clique `⟨(1,1,1,1,1)⟩`.
pub fn family_5_1_3(p: u32, limits: &Limits) -> Result<GraphCode> {
    require(p >= 2, "p ≥ 2")?;
    let m = modulus(p)?;
    let clique = (0..p as i64).map(|j| vector(m, &[j; 5])).collect();
    finish(loop_graph(m, 5, 1)?, clique, 3, limits)
}

/// `((5,p,3))_p` for `p > 3` on `L_5`: constant vectors `(j,…,j)` with
/// `j ∉ {2, -1}` plus `(2,-1,-1,2,-1)` and `(-1,2,2,-1,2)`.
pub fn family_5_p_3(p: u32, limits: &Limits) -> Result<GraphCode> {
    require(p > 3, "p > 3")?;
    let m = modulus(p)?;
    let mut clique: Vec<ZpVec> =
        (0..p as i64).filter(|&j| j != 2 && j != p as i64 - 1).map(|j| vector(m, &[j; 5])).collect();
    clique.push(vector(m, &[2, -1, -1, 2, -1]));
    clique.push(vector(m, &[-1, 2, 2, -1, 2]));
    finish(loop_graph(m, 5, 1)?, clique, 3, limits)
}

/// `L_6` with the closing edge `(6,1)` weighted `-1`.
pub fn l6_graph(p: Modulus) -> Result<WeightedGraph> {
    loop_graph(p, 6, -1)
}

/// The `[[6,2,3]]_p` group `{(a, a+b, b, -a, a-b, b)}`, unsorted, `a` major.
pub(crate) fn six_two_three_vectors(m: Modulus) -> Vec<ZpVec> {
    let p = m.get() as i64;
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            out.push(vector(m, &[a, a + b, b, -a, a - b, b]));
        }
    }
    out
}

const SIX_TWELVE_THREE: &str = include_str!("../data/six_twelve_three.code");

/// The reference `((6,12,3))_4` clique on `L_6` over `Z_4`. Its stabilizer
/// set has 4 elements.
pub fn family_6_12_3(limits: &Limits) -> Result<GraphCode> {
    let file = parse_code(SIX_TWELVE_THREE)?;
    finish(file.graph, file.clique, file.d, limits)
}

/// `[[6,2,3]]_p` for odd `p` on `L_6`.
pub fn family_6_2_3(p: u32, limits: &Limits) -> Result<GraphCode> {
    require(p >= 3 && p % 2 == 1, "odd p ≥ 3")?;
    let m = modulus(p)?;
    finish(l6_graph(m)?, six_two_three_vectors(m), 3, limits)
}

/// `[[7,3,3]]_p` for odd `p` on `L_7`: `(a+b+c, a, c, b, a-c, -c, b)`.
pub fn family_7_3_3(p: u32, limits: &Limits) -> Result<GraphCode> {
    require(p >= 3 && p % 2 == 1, "odd p ≥ 3")?;
    let m = modulus(p)?;
    let r = p as i64;
    let mut clique = Vec::new();
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                clique.push(vector(m, &[a + b + c, a, c, b, a - c, -c, b]));
            }
        }
    }
    finish(loop_graph(m, 7, 1)?, clique, 3, limits)
}

/// `[[8,4,3]]_p` for odd `p` on `L_8`:
/// `(e, b-c, e-c, e-a, a+b, a-b+c+e, 2b, a-c+e)`.
pub fn family_8_4_3(p: u32, limits: &Limits) -> Result<GraphCode> {
    require(p >= 3 && p % 2 == 1, "odd p ≥ 3")?;
    let m = modulus(p)?;
    let r = p as i64;
    let mut clique = Vec::new();
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                for e in 0..r {
                    clique.push(vector(m, &[e, b - c, e - c, e - a, a + b, a - b + c + e, 2 * b, a - c + e]));
                }
            }
        }
    }
    finish(loop_graph(m, 8, 1)?, clique, 3, limits)
}

/// The `[[8,2,4]]_p` group `{(b, a, a-b, 2b, 2a, b-a, b, b)}`.
pub(crate) fn eight_two_four_vectors(m: Modulus) -> Vec<ZpVec> {
    let r = m.get() as i64;
    let mut out = Vec::new();
    for a in 0..r {
        for b in 0..r {
            out.push(vector(m, &[b, a, a - b, 2 * b, 2 * a, b - a, b, b]));
        }
    }
    out
}

/// Wheel labeling on which the `[[8,2,4]]_p` clique is coding: hub 8, rim
/// cycle 1-2-6-7-3-4-5.
const WHEEL_8: &str = include_str!("../data/wheel_8.graph");

/// The frozen eight-vertex wheel over `Z_p`.
pub fn w8_graph(p: Modulus) -> Result<WeightedGraph> {
    let stored = parse_graph(WHEEL_8)?;
    let edges: Vec<_> = stored.edges().into_iter().map(|(a, b, w)| (a, b, w as i64)).collect();
    WeightedGraph::from_edges(p, 8, &edges)
}

/// `[[8,2,4]]_p` for odd `p` on the frozen wheel [`w8_graph`].
pub fn family_8_2_4(p: u32, limits: &Limits) -> Result<GraphCode> {
    require(p >= 3 && p % 2 == 1, "odd p ≥ 3")?;
    let m = modulus(p)?;
    finish(w8_graph(m)?, eight_two_four_vectors(m), 4, limits)
}

/// The two generators `(0,1,1,0,2,2,0,0)` and `(1,0,2,2,0,1,1,1)` given for the `p = 3` wheel code.
pub fn eight_two_four_generators_p3() -> Vec<ZpVec> {
    let m = Modulus::new(3).expect("3 is a modulus");
    vec![vector(m, &[0, 1, 1, 0, 2, 2, 0, 0]), vector(m, &[1, 0, 2, 2, 0, 1, 1, 1])]
}

/// Catalog entry for the CLI.
#[derive(Clone, Copy, Debug)]
pub struct FamilySpec {
    pub name: &'static str,
    /// Whether the family takes a length parameter `n`.
    pub takes_n: bool,
    pub description: &'static str,
}

pub const CATALOG: &[FamilySpec] = &[
    FamilySpec { name: "3_1_2", takes_n: false, description: "[[3,1,2]]_p on S_3, odd p" },
    FamilySpec { name: "3_pm1_2", takes_n: false, description: "((3,p-1,2))_p on S_3, even p" },
    FamilySpec { name: "2n_2nm2_2", takes_n: true, description: "[[2n,2n-2,2]]_p on the perfect matching" },
    FamilySpec { name: "4_2_2_6", takes_n: false, description: "[[4,2,2]]_6 on S_4 (fails validation)" },
    FamilySpec { name: "4_36_2_6", takes_n: false, description: "((4,36,2))_6 on S_4 (fails validation)" },
    FamilySpec { name: "2np3_2np1_2", takes_n: true, description: "[[2n+3,2n+1,2]]_p on S_3 plus a matching, odd p" },
    FamilySpec { name: "rains", takes_n: true, description: "((2n+3,p^2n(p-1),2))_p on S_3 plus a matching, even p" },
    FamilySpec { name: "5_1_3", takes_n: false, description: "[[5,1,3]]_p on L_5" },
    FamilySpec { name: "5_p_3", takes_n: false, description: "((5,p,3))_p on L_5, p > 3" },
    FamilySpec { name: "6_2_3", takes_n: false, description: "[[6,2,3]]_p on L_6 with one edge -1, odd p" },
    FamilySpec { name: "6_12_3", takes_n: false, description: "((6,12,3))_4 on L_6 with one edge 3 (p fixed at 4)" },
    FamilySpec { name: "7_3_3", takes_n: false, description: "[[7,3,3]]_p on L_7, odd p" },
    FamilySpec { name: "8_4_3", takes_n: false, description: "[[8,4,3]]_p on L_8, odd p" },
    FamilySpec { name: "8_2_4", takes_n: false, description: "[[8,2,4]]_p on W_8, odd p" },
    FamilySpec { name: "composite_6", takes_n: false, description: "((6,2p^2,3))_2p on H_6, odd p (modulus 2p)" },
];

/// Builds a catalog family. `p` is the prime-or-odd parameter of the family;
/// for `composite_6` the code lives over `Z_{2p}`.
pub fn build_family(name: &str, p: Option<u32>, n: Option<usize>, limits: &Limits) -> Result<GraphCode> {
    if !CATALOG.iter().any(|f| f.name == name) {
        return Err(Error::UnknownFamily(name.to_string()));
    }
    let need_p = || p.ok_or_else(|| Error::Constraint(format!("family {name} requires --p")));
    let need_n = || n.ok_or_else(|| Error::Constraint(format!("family {name} requires --n")));
    match name {
        "3_1_2" => family_3_1_2(need_p()?, limits),
        "3_pm1_2" => family_3_pm1_2(need_p()?, limits),
        "2n_2nm2_2" => family_2n_2nm2_2(need_n()?, need_p()?, limits),
        "4_2_2_6" => family_4_2_2_6(limits),
        "4_36_2_6" => family_4_36_2_6(limits),
        "2np3_2np1_2" => family_2np3_2np1_2(need_n()?, need_p()?, limits),
        "rains" => family_rains(need_n()?, need_p()?, limits),
        "5_1_3" => family_5_1_3(need_p()?, limits),
        "5_p_3" => family_5_p_3(need_p()?, limits),
        "6_2_3" => family_6_2_3(need_p()?, limits),
        "6_12_3" => family_6_12_3(limits),
        "7_3_3" => family_7_3_3(need_p()?, limits),
        "8_4_3" => family_8_4_3(need_p()?, limits),
        "8_2_4" => family_8_2_4(need_p()?, limits),
        "composite_6" => crate::composite::family_6_2p2_3(need_p()?, limits),
        _ => Err(Error::UnknownFamily(name.to_string())),
    }
}

/// One row of the `p = 3` table: family name, length parameter and expected label.
pub const TABLE_ONE: &[(&str, Option<usize>, &str)] = &[
    ("3_1_2", None, "[[3,1,2]]_3"),
    ("2n_2nm2_2", Some(2), "[[4,2,2]]_3"),
    ("2np3_2np1_2", Some(1), "[[5,3,2]]_3"),
    ("5_1_3", None, "[[5,1,3]]_3"),
    ("2n_2nm2_2", Some(3), "[[6,4,2]]_3"),
    ("6_2_3", None, "[[6,2,3]]_3"),
    ("7_3_3", None, "[[7,3,3]]_3"),
    ("8_4_3", None, "[[8,4,3]]_3"),
    ("8_2_4", None, "[[8,2,4]]_3"),
];
