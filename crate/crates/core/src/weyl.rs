//! Weyl operators and the characteristic-function transform.
//!
//! For odd prime `d`, `w(p, q) = xi^{-2^{-1} p q} Z^p X^q`; for `d = 2`,
//! `w(p, q) = i^{-p q} Z^p X^q`. Multi-qudit operators are tensor products
//! with wire 0 the most significant digit of a basis index.
//!
//! A Weyl operator is a monomial matrix: `w |k> = phase(k) |target(k)>`.
//! All transforms here work on that representation and never build the
//! dense operator, so a full characteristic table costs `d^{3n}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::states::DensityMatrix;
use crate::zmod::PrimeModulus;

/// `|Xi|` above this counts as support.
pub const SUPPORT_TOL: f64 = 1e-10;
/// Tolerance for matrix equalities in the Clifford test.
pub const CLIFFORD_TOL: f64 = 1e-9;

/// An `n`-qudit register of local prime dimension `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct System {
    pub d: PrimeModulus,
    pub n: usize,
}

impl System {
    pub fn new(d: u64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedScale("need at least one qudit".into()));
        }
        Ok(Self { d: PrimeModulus::new(d)?, n })
    }

    #[inline]
    pub fn d(&self) -> u64 {
        self.d.get()
    }

    /// Hilbert space dimension `d^n`.
    #[inline]
    pub fn dim(&self) -> usize {
        (self.d() as usize).pow(self.n as u32)
    }

    /// Phase-space size `d^{2n}`.
    #[inline]
    pub fn num_points(&self) -> usize {
        self.dim() * self.dim()
    }

    pub fn digits(&self, mut index: usize) -> Vec<u64> {
        let d = self.d() as usize;
        let mut out = vec![0; self.n];
        for w in (0..self.n).rev() {
            out[w] = (index % d) as u64;
            index /= d;
        }
        out
    }

    pub fn index_of(&self, digits: &[u64]) -> usize {
        let d = self.d() as usize;
        digits.iter().fold(0, |acc, &x| acc * d + x as usize)
    }

    /// Row-major `(p, q)` position of a phase point.
    pub fn point_index(&self, x: &PhasePoint) -> usize {
        self.index_of(&x.p) * self.dim() + self.index_of(&x.q)
    }

    pub fn point_at(&self, index: usize) -> PhasePoint {
        let dim = self.dim();
        PhasePoint { p: self.digits(index / dim), q: self.digits(index % dim) }
    }

    pub fn points(&self) -> impl Iterator<Item = PhasePoint> + '_ {
        (0..self.num_points()).map(|i| self.point_at(i))
    }

    /// Order of the root of unity that carries every Weyl phase: `d` for odd
    /// primes, `4` for qubits.
    fn phase_order(&self) -> u64 {
        if self.d.is_odd() {
            self.d()
        } else {
            4
        }
    }

    fn root(&self, e: u64) -> C64 {
        let m = self.phase_order();
        match e % m {
            0 => C64::new(1.0, 0.0),
            e if m == 4 => {
                [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][e as usize]
            }
            e => C64::from_polar(1.0, 2.0 * PI * e as f64 / m as f64),
        }
    }

    /// `xi_d^e`.
    pub fn xi(&self, e: u64) -> C64 {
        if self.d.is_odd() {
            self.root(e)
        } else {
            self.root(2 * (e % 2))
        }
    }
}

/// A point `(p, q)` of the phase space `Z_d^n x Z_d^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PhasePoint {
    pub p: Vec<u64>,
    pub q: Vec<u64>,
}

impl PhasePoint {
    pub fn zero(n: usize) -> Self {
        Self { p: vec![0; n], q: vec![0; n] }
    }

    pub fn new(p: Vec<u64>, q: Vec<u64>) -> Self {
        Self { p, q }
    }

    /// Canonicalizes signed components mod `d`.
    pub fn from_signed(p: &[i64], q: &[i64], d: PrimeModulus) -> Self {
        Self { p: p.iter().map(|&x| d.reduce(x)).collect(), q: q.iter().map(|&x| d.reduce(x)).collect() }
    }

    /// Unit label on wire `wire`: `Z` type if `z`, else `X` type.
    pub fn unit(n: usize, wire: usize, z: bool) -> Self {
        let mut x = Self::zero(n);
        if z {
            x.p[wire] = 1;
        } else {
            x.q[wire] = 1;
        }
        x
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn is_zero(&self) -> bool {
        self.p.iter().chain(&self.q).all(|&x| x == 0)
    }

    pub fn neg(&self, d: PrimeModulus) -> Self {
        Self { p: self.p.iter().map(|&x| d.neg(x)).collect(), q: self.q.iter().map(|&x| d.neg(x)).collect() }
    }

    pub fn add(&self, other: &Self, d: PrimeModulus) -> Self {
        Self {
            p: self.p.iter().zip(&other.p).map(|(&a, &b)| d.add(a, b)).collect(),
            q: self.q.iter().zip(&other.q).map(|(&a, &b)| d.add(a, b)).collect(),
        }
    }

    pub fn scale(&self, k: u64, d: PrimeModulus) -> Self {
        Self { p: self.p.iter().map(|&x| d.mul(x, k)).collect(), q: self.q.iter().map(|&x| d.mul(x, k)).collect() }
    }

    /// Concatenated `(p, q)` as one vector of `Z_d^{2n}`.
    pub fn to_vec(&self) -> Vec<u64> {
        self.p.iter().chain(&self.q).copied().collect()
    }

    pub fn from_vec(v: &[u64]) -> Self {
        let n = v.len() / 2;
        Self { p: v[..n].to_vec(), q: v[n..].to_vec() }
    }
}

/// Symplectic form `<a, b> = a_p . b_q - a_q . b_p`; `w(a) w(b) = xi^{<a,b>} w(b) w(a)`.
pub fn symplectic(a: &PhasePoint, b: &PhasePoint, d: PrimeModulus) -> u64 {
    let mut s = 0;
    for w in 0..a.n() {
        s = d.add(s, d.mul(a.p[w], b.q[w]));
        s = d.sub(s, d.mul(a.q[w], b.p[w]));
    }
    s
}

/// Monomial form of a Weyl operator.
#[derive(Clone, Debug)]
pub struct WeylMonomial {
    pub target: Vec<usize>,
    pub phase: Vec<C64>,
}

impl WeylMonomial {
    pub fn new(sys: &System, x: &PhasePoint) -> Self {
        let d = sys.d;
        let m = sys.phase_order();
        let dim = sys.dim();
        let mut target = Vec::with_capacity(dim);
        let mut phase = Vec::with_capacity(dim);
        for k in 0..dim {
            let digits = sys.digits(k);
            let mut e = 0u64;
            let mut out = vec![0; sys.n];
            for w in 0..sys.n {
                let (p, q, kw) = (x.p[w], x.q[w], digits[w]);
                let shifted = d.add(kw, q);
                out[w] = shifted;
                let local = if d.is_odd() {
                    let half = d.inv(2).expect("2 is invertible for odd d");
                    d.sub(d.mul(p, shifted), d.mul(half, d.mul(p, q)))
                } else {
                    // i^{-pq} (-1)^{p(k+q)}
                    (2 * p * shifted + 4 - p * q) % 4
                };
                e = (e + local) % m;
            }
            target.push(sys.index_of(&out));
            phase.push(sys.root(e));
        }
        Self { target, phase }
    }

    pub fn to_matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.target.len());
        for (k, (&t, &ph)) in self.target.iter().zip(&self.phase).enumerate() {
            m.set(t, k, ph);
        }
        m
    }

    /// `Tr(A W)`.
    pub fn trace_with(&self, a: &CMatrix) -> C64 {
        self.target.iter().zip(&self.phase).enumerate().map(|(k, (&t, &ph))| a.get(k, t) * ph).sum()
    }
}

/// Dense Weyl operator `w(x)`.
pub fn weyl_op(sys: &System, x: &PhasePoint) -> CMatrix {
    WeylMonomial::new(sys, x).to_matrix()
}

/// Phase `c` with `w(a) w(b) = c w(a + b)`.
pub fn weyl_product_phase(sys: &System, a: &PhasePoint, b: &PhasePoint) -> C64 {
    let wa = WeylMonomial::new(sys, a);
    let wb = WeylMonomial::new(sys, b);
    let wab = WeylMonomial::new(sys, &a.add(b, sys.d));
    wa.phase[wb.target[0]] * wb.phase[0] / wab.phase[0]
}

/// Characteristic function `Xi(x) = Tr(A w(-x))`, stored over all `d^{2n}`
/// points in row-major `(p, q)` order.
#[derive(Clone, Debug, PartialEq)]
pub struct CharFunction {
    pub sys: System,
    pub values: Vec<C64>,
}

impl CharFunction {
    pub fn new(sys: System, values: Vec<C64>) -> Result<Self> {
        if values.len() != sys.num_points() {
            return Err(Error::DimensionMismatch(format!(
                "{} characteristic values for {} phase points",
                values.len(),
                sys.num_points()
            )));
        }
        Ok(Self { sys, values })
    }

    /// Table that is 1 at the origin and 0 elsewhere.
    pub fn delta(sys: System) -> Self {
        let mut values = vec![C64::new(0.0, 0.0); sys.num_points()];
        values[0] = C64::new(1.0, 0.0);
        Self { sys, values }
    }

    pub fn get(&self, x: &PhasePoint) -> C64 {
        self.values[self.sys.point_index(x)]
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i].norm() > SUPPORT_TOL).collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `(1/d^n) sum |Xi|^2`, which equals `Tr(A^dagger A)`.
    pub fn parseval_sum(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.sys.dim() as f64
    }
}

pub fn char_table(sys: &System, a: &CMatrix) -> CharFunction {
    let values = sys.points().map(|x| WeylMonomial::new(sys, &x.neg(sys.d)).trace_with(a)).collect();
    CharFunction { sys: *sys, values }
}

pub fn char_function(rho: &DensityMatrix) -> CharFunction {
    char_table(&rho.system(), rho.matrix())
}

/// `(1/d^n) sum_x Xi(x) w(x)`.
pub fn inverse_char(xi: &CharFunction) -> CMatrix {
    let sys = &xi.sys;
    let dim = sys.dim();
    let mut m = CMatrix::zeros(dim);
    let norm = 1.0 / dim as f64;
    for (i, &v) in xi.values.iter().enumerate() {
        if v.norm() == 0.0 {
            continue;
        }
        let w = WeylMonomial::new(sys, &sys.point_at(i));
        for k in 0..dim {
            let t = w.target[k];
            let cur = m.get(t, k);
            m.set(t, k, cur + v * w.phase[k] * norm);
        }
    }
    m
}

/// Pauli rank `|Supp(Xi)|`.
pub fn pauli_rank(rho: &DensityMatrix) -> usize {
    char_function(rho).support().len()
}

/// Whether `U w U^dagger` is a phase times a Weyl operator for each of the
/// `2n` generators `Z_k`, `X_k`.
pub fn is_clifford(u: &CMatrix, sys: &System) -> Result<bool> {
    if u.dim() != sys.dim() {
        return Err(Error::DimensionMismatch(format!(
            "unitary of dimension {} on a {}-dimensional register",
            u.dim(),
            sys.dim()
        )));
    }
    let dev = u.unitarity_deviation();
    if dev > 1e-10 {
        return Err(Error::NotUnitary(dev));
    }
    for wire in 0..sys.n {
        for z in [true, false] {
            let conj = weyl_op(sys, &PhasePoint::unit(sys.n, wire, z)).conjugate_by(u);
            let coeffs = char_table(sys, &conj);
            let (best, c) = coeffs
                .values
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                .map(|(i, &c)| (i, c / sys.dim() as f64))
                .expect("nonempty table");
            let image = weyl_op(sys, &sys.point_at(best)).scale(c);
            if (c.norm() - 1.0).abs() > CLIFFORD_TOL || image.max_abs_diff(&conj) > CLIFFORD_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Discrete Fourier gate `|j> -> d^{-1/2} sum_k xi^{jk} |k>` on one qudit.
pub fn fourier_gate(d: PrimeModulus) -> CMatrix {
    let sys = System { d, n: 1 };
    let amp = 1.0 / (d.get() as f64).sqrt();
    CMatrix::from_fn(d.get() as usize, |k, j| sys.xi(d.mul(j as u64, k as u64)) * amp)
}

/// Single-qudit phase gate: `diag(1, i)` for qubits, `|k> -> xi^{2^{-1} k^2} |k>`
/// for odd `d`.
pub fn phase_gate(d: PrimeModulus) -> CMatrix {
    if !d.is_odd() {
        return CMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => C64::new(1.0, 0.0),
            (1, 1) => C64::new(0.0, 1.0),
            _ => C64::new(0.0, 0.0),
        });
    }
    let sys = System { d, n: 1 };
    let half = d.inv(2).expect("odd d");
    CMatrix::from_fn(d.get() as usize, |i, j| {
        if i == j {
            sys.xi(d.mul(half, d.mul(i as u64, i as u64)))
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::tensor;

    fn sys(d: u64, n: usize) -> System {
        System::new(d, n).unwrap()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn dense(rows: &[[C64; 2]; 2]) -> CMatrix {
        CMatrix::from_fn(2, |i, j| rows[i][j])
    }

    #[test]
    fn point_indexing_round_trips() {
        let s = sys(3, 2);
        for i in 0..s.num_points() {
            assert_eq!(s.point_index(&s.point_at(i)), i);
        }
        assert_eq!(s.point_at(0), PhasePoint::zero(2));
    }

    #[test]
    fn identity_label() {
        for (d, n) in [(2, 1), (3, 2), (7, 1)] {
            let s = sys(d, n);
            let w = weyl_op(&s, &PhasePoint::zero(n));
            assert!(w.max_abs_diff(&CMatrix::identity(s.dim())) < 1e-15);
        }
    }

    #[test]
    fn qubit_paulis() {
        let s = sys(2, 1);
        let o = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let x = dense(&[[o, one], [one, o]]);
        let z = dense(&[[one, o], [o, -one]]);
        let y = dense(&[[o, c(0.0, -1.0)], [c(0.0, 1.0), o]]);
        let p = |a, b| PhasePoint::new(vec![a], vec![b]);
        assert!(weyl_op(&s, &p(0, 1)).max_abs_diff(&x) < 1e-15);
        assert!(weyl_op(&s, &p(1, 0)).max_abs_diff(&z) < 1e-15);
        assert!(weyl_op(&s, &p(1, 1)).max_abs_diff(&y) < 1e-15);
        // Y = -i Z X
        assert!((&z * &x).scale(c(0.0, -1.0)).max_abs_diff(&y) < 1e-15);
    }

    #[test]
    fn odd_weyl_matches_definition() {
        // direct construction xi^{-2^{-1}pq} Z^p X^q
        let s = sys(3, 1);
        let xi = |e: u64| s.xi(e % 3);
        let zmat = CMatrix::from_fn(3, |i, j| if i == j { xi(i as u64) } else { c(0.0, 0.0) });
        let xmat = CMatrix::from_fn(3, |i, j| if i == (j + 1) % 3 { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let pow = |m: &CMatrix, k: u64| (0..k).fold(CMatrix::identity(3), |acc, _| &acc * m);
        for p in 0..3u64 {
            for q in 0..3u64 {
                let expect = (&pow(&zmat, p) * &pow(&xmat, q)).scale(xi(3 * 3 - (2 * p * q) % 3));
                let w = weyl_op(&s, &PhasePoint::new(vec![p], vec![q]));
                assert!(w.max_abs_diff(&expect) < 1e-14, "p={p} q={q}");
            }
        }
    }

    #[test]
    fn multi_qudit_is_tensor_product() {
        let s2 = sys(3, 2);
        let s1 = sys(3, 1);
        let x = PhasePoint::new(vec![1, 2], vec![2, 0]);
        let a = weyl_op(&s1, &PhasePoint::new(vec![1], vec![2]));
        let b = weyl_op(&s1, &PhasePoint::new(vec![2], vec![0]));
        assert!(weyl_op(&s2, &x).max_abs_diff(&tensor(&a, &b)) < 1e-14);
    }

    #[test]
    fn weyl_orthogonality_exhaustive() {
        for (d, n) in [(3, 1), (3, 2), (2, 2)] {
            let s = sys(d, n);
            let ops: Vec<CMatrix> = s.points().map(|x| weyl_op(&s, &x)).collect();
            for (i, a) in ops.iter().enumerate() {
                for (j, b) in ops.iter().enumerate() {
                    let ip = a.hs_inner(b) / s.dim() as f64;
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - c(expect, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn adjoint_is_negated_label() {
        for d in [2, 3, 5] {
            let s = sys(d, 1);
            for x in s.points() {
                let w = weyl_op(&s, &x);
                assert!(w.adjoint().max_abs_diff(&weyl_op(&s, &x.neg(s.d))) < 1e-14);
            }
        }
    }

    #[test]
    fn commutation_phase_is_symplectic() {
        let s = sys(3, 2);
        let pts: Vec<PhasePoint> = s.points().step_by(7).collect();
        for a in &pts {
            for b in &pts {
                let wa = weyl_op(&s, a);
                let wb = weyl_op(&s, b);
                let lhs = &wa * &wb;
                let rhs = (&wb * &wa).scale(s.xi(symplectic(a, b, s.d)));
                assert!(lhs.max_abs_diff(&rhs) < 1e-12);
                let prod = weyl_op(&s, &a.add(b, s.d)).scale(weyl_product_phase(&s, a, b));
                assert!(lhs.max_abs_diff(&prod) < 1e-12);
            }
        }
    }

    #[test]
    fn delta_inverts_to_maximally_mixed() {
        let s = sys(3, 2);
        let m = inverse_char(&CharFunction::delta(s));
        assert!(m.max_abs_diff(&CMatrix::identity(9).scale_real(1.0 / 9.0)) < 1e-15);
    }

    #[test]
    fn zero_ket_table() {
        let s = sys(3, 1);
        let rho = CMatrix::diag(&[1.0, 0.0, 0.0]);
        let xi = char_table(&s, &rho);
        for x in s.points() {
            let v = xi.get(&x);
            if x.q[0] == 0 {
                assert!((v - c(1.0, 0.0)).norm() < 1e-14);
            } else {
                assert!(v.norm() < 1e-14);
            }
        }
        assert!(inverse_char(&xi).max_abs_diff(&rho) < 1e-14);
    }

    #[test]
    fn fourier_and_phase_gates_are_clifford() {
        for d in [2, 3, 5, 7] {
            let s = sys(d, 1);
            assert!(is_clifford(&fourier_gate(s.d), &s).unwrap(), "F, d={d}");
            assert!(is_clifford(&phase_gate(s.d), &s).unwrap(), "S, d={d}");
            assert!(is_clifford(&CMatrix::identity(d as usize), &s).unwrap());
        }
        // F X F^dagger is proportional to a Z-type Weyl operator
        let s = sys(3, 1);
        let f = fourier_gate(s.d);
        let img = weyl_op(&s, &PhasePoint::unit(1, 0, false)).conjugate_by(&f);
        let t = char_table(&s, &img);
        let hit = t.support();
        assert_eq!(hit.len(), 1);
        assert_eq!(s.point_at(hit[0]).q, vec![0]);
    }

    #[test]
    fn non_clifford_and_non_unitary() {
        let s = sys(2, 1);
        let mut t = CMatrix::identity(2);
        t.set(1, 1, C64::from_polar(1.0, PI / 4.0));
        assert!(!is_clifford(&t, &s).unwrap());
        assert!(matches!(is_clifford(&CMatrix::zeros(2), &s), Err(Error::NotUnitary(_))));
    }
}
