//! Graph states over `Z_p`, their stabilizers and dense amplitude vectors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{roots_of_unity, PauliOp};
use crate::zp::{VectorIndexer, WeightedGraph, ZpVec};

/// `G_a = X_a ∏_b Z_b^{Γ_ab}`.
pub fn vertex_stabilizer(g: &WeightedGraph, a: usize) -> Result<PauliOp> {
    if a >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: a, n: g.n() });
    }
    let p = g.modulus();
    PauliOp::new(0, ZpVec::unit(p, g.n(), a), g.row(a))
}

/// `G_s = ∏_a G_a^{s_a} = ω^{Σ_{a<b} Γ_ab s_a s_b} X^s Z^{sΓ}`.
pub fn stabilizer_element(g: &WeightedGraph, s: &ZpVec) -> Result<PauliOp> {
    let z = g.mat_vec(s)?;
    let phase = 2 * g.half_quadratic_form(s.entries());
    PauliOp::new(phase, s.clone(), z)
}

/// Labels the basis vector `|Γ_c⟩ = Z^c |Γ⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphStateBasisLabel {
    pub graph: WeightedGraph,
    pub c: ZpVec,
}

impl GraphStateBasisLabel {
    pub fn new(graph: WeightedGraph, c: ZpVec) -> Result<Self> {
        if c.modulus() != graph.modulus() {
            return Err(Error::ModulusMismatch(c.modulus().get(), graph.modulus().get()));
        }
        if c.len() != graph.n() {
            return Err(Error::LengthMismatch { expected: graph.n(), found: c.len() });
        }
        Ok(GraphStateBasisLabel { graph, c })
    }
}

/// `p^n` amplitudes indexed with vertex 0 as the most significant digit.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    p: u32,
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl DenseState {
    pub fn from_amplitudes(p: u32, n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let expected = (p as usize).checked_pow(n as u32).unwrap_or(usize::MAX);
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch { expected, found: amplitudes.len() });
        }
        Ok(DenseState { p, n, amplitudes })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &DenseState) -> Result<Complex64> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::LengthMismatch { expected: self.amplitudes.len(), found: other.amplitudes.len() });
        }
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    pub fn apply(&self, op: &PauliOp, bound: u128) -> Result<DenseState> {
        if op.modulus().get() != self.p || op.n() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: op.n() });
        }
        let amplitudes = op.action(bound)?.apply(&self.amplitudes)?;
        Ok(DenseState { p: self.p, n: self.n, amplitudes })
    }

    pub fn max_deviation(&self, other: &DenseState) -> f64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Amplitudes `ω^{Σ_{a<b} Γ_ab s_a s_b + c·s} / √(p^n)`.
pub fn build_state(label: &GraphStateBasisLabel, bound: u128) -> Result<DenseState> {
    let g = &label.graph;
    let p = g.modulus();
    let idx = VectorIndexer::new(p, g.n(), bound, "graph state amplitudes")?;
    let roots = roots_of_unity(p.get());
    let scale = 1.0 / (idx.total() as f64).sqrt();
    let c = label.c.entries();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); idx.total()];
    let pm = p.get() as u64;
    idx.for_each(|r, s| {
        let q = g.half_quadratic_form(s) as u64;
        let cs: u64 = c.iter().zip(s).map(|(&a, &b)| a as u64 * b as u64).sum();
        amplitudes[r] = roots[((q + cs) % pm) as usize] * scale;
    });
    Ok(DenseState { p: p.get(), n: g.n(), amplitudes })
}

/// Whether `op|ψ⟩ = |ψ⟩` within `1e-9` per amplitude.
pub fn check_stabilized(state: &DenseState, op: &PauliOp, bound: u128) -> Result<bool> {
    let image = state.apply(op, bound)?;
    Ok(image.max_deviation(state) < 1e-9)
}
