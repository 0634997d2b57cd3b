//! Generalized Pauli operators `e^{iπ k/p} X^x Z^z` on `n` qupits.
//!
//! Phases are tracked exactly as exponents of `e^{iπ/p}` modulo `2p`, so even
//! `p` never needs a square root of `ω`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::zp::{Modulus, VectorIndexer, WeightedGraph, ZpVec};

/// `e^{iπ·phase/p} X^x Z^z`, X-part to the left.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOp {
    p: Modulus,
    phase: u32,
    x: ZpVec,
    z: ZpVec,
}

impl PauliOp {
    pub fn new(phase: u32, x: ZpVec, z: ZpVec) -> Result<Self> {
        x.check_compatible(&z)?;
        let p = x.modulus();
        Ok(PauliOp { p, phase: phase % (2 * p.get()), x, z })
    }

    pub fn identity(p: Modulus, n: usize) -> Self {
        PauliOp { p, phase: 0, x: ZpVec::zeros(p, n), z: ZpVec::zeros(p, n) }
    }

    /// `X^k` on qupit `a`.
    pub fn x_on(p: Modulus, n: usize, a: usize, k: i64) -> Self {
        let mut op = Self::identity(p, n);
        op.x.set(a, k);
        op
    }

    /// `Z^k` on qupit `a`.
    pub fn z_on(p: Modulus, n: usize, a: usize, k: i64) -> Self {
        let mut op = Self::identity(p, n);
        op.z.set(a, k);
        op
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.p
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Exponent of `e^{iπ/p}`, in `[0, 2p)`.
    #[inline]
    pub fn phase(&self) -> u32 {
        self.phase
    }

    #[inline]
    pub fn x(&self) -> &ZpVec {
        &self.x
    }

    #[inline]
    pub fn z(&self) -> &ZpVec {
        &self.z
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.x.is_zero() && self.z.is_zero()
    }

    pub fn with_phase(mut self, phase: u32) -> Self {
        self.phase = phase % (2 * self.p.get());
        self
    }

    /// Same `x` and `z`, ignoring the phase.
    pub fn same_up_to_phase(&self, other: &PauliOp) -> bool {
        self.x == other.x && self.z == other.z
    }

    /// `self · other`, normalised back to X-then-Z order using `ZX = ωXZ`.
    pub fn multiply(&self, other: &PauliOp) -> Result<PauliOp> {
        self.x.check_compatible(&other.x)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliOp) -> PauliOp {
        let two_p = 2 * self.p.get();
        let swap = self.z.dot_unchecked(&other.x);
        PauliOp {
            p: self.p,
            phase: (self.phase + other.phase + 2 * swap) % two_p,
            x: &self.x + &other.x,
            z: &self.z + &other.z,
        }
    }

    pub fn power(&self, mut k: u64) -> PauliOp {
        let mut acc = PauliOp::identity(self.p, self.n());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            k >>= 1;
        }
        acc
    }

    /// Number of qupits acted on nontrivially.
    pub fn weight(&self) -> usize {
        self.x.entries().iter().zip(self.z.entries()).filter(|(&a, &b)| a != 0 || b != 0).count()
    }

    /// Index permutation and per-index phase exponents (in units of `π/p`)
    /// describing the action on `p^n` amplitudes: basis vector `r` is sent to
    /// `target[r]` with factor `e^{iπ·phase[r]/p}`.
    pub fn action(&self, bound: u128) -> Result<PauliAction> {
        let idx = VectorIndexer::new(self.p, self.n(), bound, "operator action")?;
        let p = self.p.get();
        let two_p = 2 * p;
        let x_shift = self.x.entries();
        let z = self.z.entries();
        let mut target = vec![0usize; idx.total()];
        let mut phase = vec![0u32; idx.total()];
        let strides = idx.strides().to_vec();
        idx.for_each(|r, digits| {
            let mut t = 0usize;
            let mut zr = 0u64;
            for a in 0..digits.len() {
                t += ((digits[a] + x_shift[a]) % p) as usize * strides[a];
                zr += z[a] as u64 * digits[a] as u64;
            }
            target[r] = t;
            phase[r] = ((2 * (zr % p as u64)) as u32 + self.phase) % two_p;
        });
        Ok(PauliAction { p, target, phase })
    }

    /// Dense `p^n × p^n` matrix, row-major. Intended for small checks only.
    pub fn to_matrix(&self, bound: u128) -> Result<Vec<Complex64>> {
        let action = self.action(bound)?;
        let dim = action.target.len();
        let roots = roots_of_unity(2 * self.p.get());
        let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            m[action.target[r] * dim + r] = roots[action.phase[r] as usize];
        }
        Ok(m)
    }

    /// One cell per qupit, e.g. `X Z Z X Z Z̄`, prefixed by the phase when nonzero.
    pub fn render(&self) -> String {
        let cells: Vec<String> = (0..self.n()).map(|a| self.render_cell(a)).collect();
        let body = cells.join(" ");
        match render_phase(self.phase, self.p.get()) {
            Some(ph) => format!("{ph} {body}"),
            None => body,
        }
    }

    pub fn render_cell(&self, a: usize) -> String {
        let p = self.p.get();
        let (x, z) = (self.x.get(a), self.z.get(a));
        if x == 0 && z == 0 {
            return "I".to_string();
        }
        let mut out = String::new();
        if x != 0 {
            out.push_str(&render_power('X', x, p));
        }
        if z != 0 {
            out.push_str(&render_power('Z', z, p));
        }
        out
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn render_power(symbol: char, e: u32, p: u32) -> String {
    if e == 1 {
        symbol.to_string()
    } else if e == p - 1 {
        format!("{symbol}\u{0304}")
    } else {
        format!("{symbol}{}", superscript(e))
    }
}

fn render_phase(phase: u32, p: u32) -> Option<String> {
    if phase == 0 {
        None
    } else if phase % 2 == 0 {
        let k = phase / 2;
        Some(if k == 1 { "ω".to_string() } else { format!("ω{}", superscript(k)) })
    } else {
        Some(format!("e^(iπ·{phase}/{p})"))
    }
}

fn superscript(mut k: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut out = Vec::new();
    loop {
        out.push(DIGITS[(k % 10) as usize]);
        k /= 10;
        if k == 0 {
            break;
        }
    }
    out.iter().rev().collect()
}

/// `e^{2πi k/m}` for `k ∈ [0, m)`.
pub fn roots_of_unity(m: u32) -> Vec<Complex64> {
    (0..m).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)).collect()
}

/// Permutation-with-phase form of a Pauli operator.
#[derive(Clone, Debug)]
pub struct PauliAction {
    p: u32,
    target: Vec<usize>,
    phase: Vec<u32>,
}

impl PauliAction {
    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn phase(&self) -> &[u32] {
        &self.phase
    }

    pub fn apply(&self, state: &[Complex64]) -> Result<Vec<Complex64>> {
        if state.len() != self.target.len() {
            return Err(Error::LengthMismatch { expected: self.target.len(), found: state.len() });
        }
        let roots = roots_of_unity(2 * self.p);
        let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
        for (r, &amp) in state.iter().enumerate() {
            out[self.target[r]] = roots[self.phase[r] as usize] * amp;
        }
        Ok(out)
    }
}

/// `t − s·Γ`: the phase-flip vector equivalent to `X^s Z^t` modulo graph stabilizers.
pub fn covered_vector(g: &WeightedGraph, s: &ZpVec, t: &ZpVec) -> Result<ZpVec> {
    s.check_compatible(t)?;
    let sg = g.mat_vec(s)?;
    Ok(t - &sg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32) -> Modulus {
        Modulus::new(p).unwrap()
    }

    fn op(p: u32, phase: u32, x: &[i64], z: &[i64]) -> PauliOp {
        PauliOp::new(phase, ZpVec::from_signed(m(p), x), ZpVec::from_signed(m(p), z)).unwrap()
    }

    fn matmul(a: &[Complex64], b: &[Complex64], dim: usize) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let aik = a[i * dim + k];
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..dim {
                    c[i * dim + j] += aik * b[k * dim + j];
                }
            }
        }
        c
    }

    fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    /// Textbook clock and shift matrices, built independently of `action`.
    fn clock_shift(p: u32, x: u32, z: u32) -> Vec<Complex64> {
        let d = p as usize;
        let w = |k: u64| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / p as f64);
        let mut shift = vec![Complex64::new(0.0, 0.0); d * d];
        let mut clock = vec![Complex64::new(0.0, 0.0); d * d];
        for l in 0..d {
            shift[((l + 1) % d) * d + l] = Complex64::new(1.0, 0.0);
            clock[l * d + l] = w(l as u64);
        }
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            out[i * d + i] = Complex64::new(1.0, 0.0);
        }
        for _ in 0..x {
            out = matmul(&out, &shift, d);
        }
        for _ in 0..z {
            out = matmul(&out, &clock, d);
        }
        out
    }

    #[test]
    fn zx_is_omega_xz() {
        let z = op(3, 0, &[0], &[1]);
        let x = op(3, 0, &[1], &[0]);
        let zx = z.multiply(&x).unwrap();
        assert_eq!((zx.phase(), zx.x().get(0), zx.z().get(0)), (2, 1, 1));
        let xz = x.multiply(&z).unwrap();
        assert_eq!((xz.phase(), xz.x().get(0), xz.z().get(0)), (0, 1, 1));
        let id = PauliOp::identity(m(3), 1);
        assert_eq!(id.multiply(&zx).unwrap(), zx);
    }

    #[test]
    fn multiply_rejects_mismatch() {
        assert!(op(3, 0, &[1], &[0]).multiply(&op(3, 0, &[1, 0], &[0, 0])).is_err());
        assert!(op(3, 0, &[1], &[0]).multiply(&op(5, 0, &[1], &[0])).is_err());
    }

    #[test]
    fn powers() {
        let x = op(5, 0, &[1], &[0]);
        assert!(x.power(5).is_identity());
        assert!(x.power(0).is_identity());
        let xz = op(3, 0, &[1], &[1]);
        let sq = xz.power(2);
        let dense = xz.to_matrix(1 << 10).unwrap();
        let expect = matmul(&dense, &dense, 3);
        assert!(max_diff(&sq.to_matrix(1 << 10).unwrap(), &expect) < 1e-12);
        // XZXZ = X(ZX)Z = ω X²Z².
        assert_eq!(sq.phase(), 2);
    }

    #[test]
    fn even_p_power_gives_sign() {
        let xz = op(2, 0, &[1], &[1]);
        let sq = xz.power(2);
        assert!(sq.x().is_zero() && sq.z().is_zero());
        assert_eq!(sq.phase(), 2);
        // XZ squared is -I for qubits.
        let dense = xz.to_matrix(16).unwrap();
        let expect = matmul(&dense, &dense, 2);
        assert!(max_diff(&sq.to_matrix(16).unwrap(), &expect) < 1e-12);
        assert!(xz.power(4).is_identity());
    }

    #[test]
    fn weights() {
        assert_eq!(op(3, 0, &[1, 0, 0, 0, 0], &[1, 0, 0, 0, 0]).weight(), 1);
        assert_eq!(op(3, 0, &[1, 0, 0], &[0, 1, 0]).weight(), 2);
        assert_eq!(PauliOp::identity(m(3), 4).weight(), 0);
    }

    #[test]
    fn covered_vector_examples() {
        let star = WeightedGraph::from_edges(m(3), 3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        let zero = ZpVec::zeros(m(3), 3);
        let e2 = ZpVec::unit(m(3), 3, 1);
        assert_eq!(covered_vector(&star, &zero, &e2).unwrap(), e2);
        assert_eq!(covered_vector(&star, &e2, &zero).unwrap(), ZpVec::from_signed(m(3), &[2, 0, 2]));
        assert!(covered_vector(&star, &zero, &zero).unwrap().is_zero());
    }

    #[test]
    fn single_qupit_matrices() {
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let z = op(3, 0, &[0], &[1]).to_matrix(27).unwrap();
        for l in 0..3 {
            assert!((z[l * 3 + l] - w.powu(l as u32)).norm() < 1e-12);
        }
        let x = op(3, 0, &[1], &[0]).to_matrix(27).unwrap();
        for l in 0..3 {
            assert!((x[((l + 1) % 3) * 3 + l] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        let id = PauliOp::identity(m(3), 2).to_matrix(100).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((id[i * 9 + j] - Complex64::new(e, 0.0)).norm() < 1e-12);
            }
        }
        for p in 2..=6 {
            for x in 0..p {
                for zz in 0..p {
                    let ours = op(p, 0, &[x as i64], &[zz as i64]).to_matrix(64).unwrap();
                    assert!(max_diff(&ours, &clock_shift(p, x, zz)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn render_cells() {
        let g = op(5, 0, &[1, 0, 0, 1, 0, 0], &[0, 1, 1, 0, 1, -1]);
        assert_eq!(g.render(), "X Z Z X Z Z\u{0304}");
        let h = op(5, 2, &[2, 4, 0], &[3, 0, 0]);
        assert_eq!(h.render(), "ω X²Z³ X\u{0304} I");
    }

    #[test]
    fn apply_matches_matrix() {
        let e = op(3, 1, &[1, 2], &[2, 1]);
        let dense = e.to_matrix(100).unwrap();
        let state: Vec<Complex64> = (0..9).map(|k| Complex64::new(k as f64 * 0.1, 1.0 - k as f64 * 0.05)).collect();
        let got = e.action(100).unwrap().apply(&state).unwrap();
        for i in 0..9 {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..9 {
                acc += dense[i * 9 + j] * state[j];
            }
            assert!((acc - got[i]).norm() < 1e-12);
        }
        assert!(e.action(4).is_err());
    }

    use proptest::prelude::*;

    fn arb_op(p: u32, n: usize) -> impl Strategy<Value = PauliOp> {
        (0..2 * p, prop::collection::vec(0..p, n), prop::collection::vec(0..p, n)).prop_map(move |(ph, x, z)| {
            PauliOp::new(ph, ZpVec::new(m(p), x).unwrap(), ZpVec::new(m(p), z).unwrap()).unwrap()
        })
    }

    fn arb_triple() -> impl Strategy<Value = (PauliOp, PauliOp, PauliOp)> {
        (2u32..=6, 1usize..=2).prop_flat_map(|(p, n)| (arb_op(p, n), arb_op(p, n), arb_op(p, n)))
    }

    proptest! {
        #[test]
        fn multiply_is_associative((a, b, c) in arb_triple()) {
            let left = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            let right = a.multiply(&b).unwrap().multiply(&c).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn multiply_matches_matrix_product((a, b, _c) in arb_triple()) {
            let p = a.modulus().get() as usize;
            let dim = p.pow(a.n() as u32);
            let prod = a.multiply(&b).unwrap().to_matrix(1 << 12).unwrap();
            let expect = matmul(&a.to_matrix(1 << 12).unwrap(), &b.to_matrix(1 << 12).unwrap(), dim);
            prop_assert!(max_diff(&prod, &expect) < 1e-12);
        }

        #[test]
        fn power_p_is_a_sign((a, _b, _c) in arb_triple()) {
            let p = a.modulus().get();
            let bare = a.clone().with_phase(0);
            let pw = bare.power(p as u64);
            prop_assert!(pw.x().is_zero() && pw.z().is_zero());
            prop_assert!(pw.phase() == 0 || pw.phase() == p);
            let dim = (p as usize).pow(a.n() as u32);
            let dense = bare.to_matrix(1 << 12).unwrap();
            let mut acc = dense.clone();
            for _ in 1..p {
                acc = matmul(&acc, &dense, dim);
            }
            prop_assert!(max_diff(&pw.to_matrix(1 << 12).unwrap(), &acc) < 1e-9);
            prop_assert!(bare.power(2 * p as u64).is_identity());
        }

        #[test]
        fn covered_vector_is_linear(p in 2u32..7, w in prop::collection::vec(0u32..7, 3), v in prop::collection::vec(0u32..7, 12)) {
            let mp = m(p);
            let mut g = WeightedGraph::empty(mp, 3);
            for (&(a, b), &wt) in [(0, 1), (0, 2), (1, 2)].iter().zip(&w) {
                g.set_edge(a, b, wt as i64).unwrap();
            }
            let vec3 = |k: usize| ZpVec::from_raw(mp, v[3 * k..3 * k + 3].iter().map(|e| e % p).collect());
            let (s1, t1, s2, t2) = (vec3(0), vec3(1), vec3(2), vec3(3));
            let lhs = covered_vector(&g, &(&s1 + &s2), &(&t1 + &t2)).unwrap();
            let rhs = &covered_vector(&g, &s1, &t1).unwrap() + &covered_vector(&g, &s2, &t2).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
