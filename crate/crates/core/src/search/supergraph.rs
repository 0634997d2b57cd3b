use fixedbitset::FixedBitSet;

use super::covering::{covered_set, purity_set, CoveredSet};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::zp::WeightedGraph;
use crate::zp::{Modulus, ZpVec};

/// Graph on `(D_d ∩ S_d^⊥) ∪ {0}` with an edge whenever the difference of
/// two vertices is `d`-uncoverable. Vertices are in lexicographic order, so
/// the zero vector is vertex 0.
#[derive(Clone, Debug)]
pub struct SuperGraph {
    p: Modulus,
    n: usize,
    d: usize,
    vertices: Vec<ZpVec>,
    adjacency: Vec<FixedBitSet>,
}

impl SuperGraph {
    /// Assembles a super graph from explicit parts; adjacency must be symmetric.
    pub fn from_parts(
        p: Modulus,
        n: usize,
        d: usize,
        vertices: Vec<ZpVec>,
        adjacency: Vec<FixedBitSet>,
    ) -> Result<Self> {
        if adjacency.len() != vertices.len() {
            return Err(Error::LengthMismatch { expected: vertices.len(), found: adjacency.len() });
        }
        for (i, row) in adjacency.iter().enumerate() {
            if row.contains(i) {
                return Err(Error::InvalidGraph(format!("super graph loop at {i}")));
            }
            for j in row.ones() {
                if j >= vertices.len() || !adjacency[j].contains(i) {
                    return Err(Error::InvalidGraph("super graph adjacency is not symmetric".into()));
                }
            }
        }
        Ok(SuperGraph { p, n, d, vertices, adjacency })
    }

    pub fn modulus(&self) -> Modulus {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[ZpVec] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &ZpVec {
        &self.vertices[i]
    }

    pub fn index_of(&self, v: &ZpVec) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    #[inline]
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }

    pub fn neighbors(&self, i: usize) -> &FixedBitSet {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].count_ones(..)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    pub fn is_clique(&self, members: &[usize]) -> bool {
        members.iter().enumerate().all(|(k, &i)| members[k + 1..].iter().all(|&j| self.adjacent(i, j)))
    }
}

pub fn build_super_graph(g: &WeightedGraph, d: usize, limits: &Limits) -> Result<SuperGraph> {
    let covered = covered_set(g, d, limits)?;
    let purity = purity_set(g, d)?;
    build_from_sets(g, d, &covered, purity.members(), limits)
}

fn build_from_sets(
    g: &WeightedGraph,
    d: usize,
    covered: &CoveredSet,
    purity: &[ZpVec],
    limits: &Limits,
) -> Result<SuperGraph> {
    let p = g.modulus();
    let idx = covered.indexer();
    let constraints: Vec<&[u32]> = purity.iter().filter(|s| !s.is_zero()).map(|s| s.entries()).collect();
    let pm = p.get() as u64;
    let mut indices = Vec::new();
    let mut too_many = false;
    idx.for_each(|i, v| {
        if too_many {
            return;
        }
        let keep = i == 0
            || (!covered.contains_index(i)
                && constraints
                    .iter()
                    .all(|s| s.iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % pm == 0));
        if keep {
            indices.push(i);
            too_many = indices.len() > limits.super_graph_vertices;
        }
    });
    if too_many {
        return Err(Error::bound("super graph vertices", indices.len() as u128, limits.super_graph_vertices as u128));
    }
    let vertices: Vec<ZpVec> = indices.iter().map(|&i| idx.decode(i)).collect();
    let count = vertices.len();
    let mut adjacency = vec![FixedBitSet::with_capacity(count); count];
    let mut diff = vec![0u32; g.n()];
    for i in 0..count {
        for j in i + 1..count {
            for ((o, &a), &b) in diff.iter_mut().zip(vertices[j].entries()).zip(vertices[i].entries()) {
                *o = p.sub(a, b);
            }
            if !covered.contains_index(idx.encode(&diff)) {
                adjacency[i].insert(j);
                adjacency[j].insert(i);
            }
        }
    }
    Ok(SuperGraph { p, n: g.n(), d, vertices, adjacency })
}
