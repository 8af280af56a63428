//! Density matrices, stabilizer groups and minimal stabilizer-projection
//! states (MSPS).
//!
//! MSPS detection works on the characteristic table only: a state is an
//! MSPS iff its table has unit modulus on an isotropic subgroup, vanishes
//! off it, and restricts to a (cocycle-twisted) character there.

pub mod schema;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, tensor, CMatrix, HermSpectrum, C64};
use crate::weyl::{char_function, symplectic, weyl_op, weyl_product_phase, CharFunction, PhasePoint, System};
use crate::zmod::{self, PrimeModulus};

/// Validation tolerance for Hermiticity, trace and positivity.
pub const STATE_TOL: f64 = 1e-10;
/// `|Xi|` within this of 0 or 1 counts as exactly 0 or 1 for MSPS tests.
pub const UNIT_TOL: f64 = 1e-9;

/// A positive, unit-trace operator on `d^n` dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    sys: System,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity within [`STATE_TOL`].
    pub fn new(sys: System, mat: CMatrix) -> Result<Self> {
        if mat.dim() != sys.dim() {
            return Err(Error::DimensionMismatch(format!("matrix dimension {} but d^n = {}", mat.dim(), sys.dim())));
        }
        let herm = mat.hermiticity_deviation();
        if herm > STATE_TOL {
            return Err(Error::InvalidState(format!("Hermiticity deviation {herm:.3e}")));
        }
        let tr = mat.trace();
        let tr_dev = (tr - C64::new(1.0, 0.0)).norm();
        if tr_dev > STATE_TOL {
            return Err(Error::InvalidState(format!("trace deviation {tr_dev:.3e}")));
        }
        let min = herm_eig(&mat)?.min();
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!("minimum eigenvalue {min:.3e}")));
        }
        Ok(Self { sys, mat: mat.hermitian_part() })
    }

    /// Wraps an operator known to be a state (output of a channel).
    pub(crate) fn from_trusted(sys: System, mat: CMatrix) -> Self {
        debug_assert_eq!(mat.dim(), sys.dim());
        Self { sys, mat: mat.hermitian_part() }
    }

    pub fn maximally_mixed(sys: System) -> Self {
        let dim = sys.dim();
        Self { sys, mat: CMatrix::identity(dim).scale_real(1.0 / dim as f64) }
    }

    /// `|psi><psi|` for a normalized ket.
    pub fn pure(sys: System, ket: &[C64]) -> Result<Self> {
        let norm: f64 = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if ket.len() != sys.dim() || norm == 0.0 {
            return Err(Error::DimensionMismatch(format!("ket of length {} for dimension {}", ket.len(), sys.dim())));
        }
        let v: Vec<C64> = ket.iter().map(|z| z / norm).collect();
        Ok(Self { sys, mat: CMatrix::outer(&v) })
    }

    /// Computational basis state `|index><index|`.
    pub fn basis(sys: System, index: usize) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); sys.dim()];
        v[index] = C64::new(1.0, 0.0);
        Self { sys, mat: CMatrix::outer(&v) }
    }

    pub fn system(&self) -> System {
        self.sys
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.sys.dim()
    }

    pub fn spectrum(&self) -> HermSpectrum {
        herm_eig(&self.mat).expect("states are Hermitian")
    }

    pub fn purity(&self) -> f64 {
        self.mat.hs_inner(&self.mat).re
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.sys.d != other.sys.d {
            return Err(Error::DimensionMismatch("different local dimensions".into()));
        }
        let sys = System { d: self.sys.d, n: self.sys.n + other.sys.n };
        Ok(Self { sys, mat: tensor(&self.mat, &other.mat) })
    }

    /// `U rho U^dagger` for a unitary `U`.
    pub fn conjugate(&self, u: &CMatrix) -> Self {
        Self::from_trusted(self.sys, self.mat.conjugate_by(u))
    }

    /// `w(x) rho w(x)^dagger`.
    pub fn displace(&self, x: &PhasePoint) -> Self {
        self.conjugate(&weyl_op(&self.sys, x))
    }

    /// `(1 - eps) rho + eps I / d^n`.
    pub fn smoothed(&self, eps: f64) -> Self {
        let mixed = Self::maximally_mixed(self.sys);
        Self::from_trusted(self.sys, &self.mat.scale_real(1.0 - eps) + &mixed.mat.scale_real(eps))
    }
}

/// Ginibre random state of the given rank, deterministic per seed.
pub fn random_density(seed: u64, sys: System, rank: usize) -> Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density_with(&mut rng, sys, rank)
}

/// Ginibre construction `A A^dagger / Tr(A A^dagger)` with a complex Gaussian
/// `d^n x rank` factor `A`.
pub fn random_density_with<R: rand::Rng>(rng: &mut R, sys: System, rank: usize) -> Result<DensityMatrix> {
    let dim = sys.dim();
    if rank == 0 || rank > dim {
        return Err(Error::UnsupportedScale(format!("rank {rank} outside 1..={dim}")));
    }
    let mut factor = vec![C64::new(0.0, 0.0); dim * rank];
    for z in factor.iter_mut() {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        *z = C64::new(re, im);
    }
    let mut m =
        CMatrix::from_fn(dim, |i, j| (0..rank).map(|k| factor[i * rank + k] * factor[j * rank + k].conj()).sum());
    let tr = m.trace().re;
    m = m.scale_real(1.0 / tr);
    Ok(DensityMatrix::from_trusted(sys, m))
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary_with<R: rand::Rng>(rng: &mut R, dim: usize) -> CMatrix {
    let g = nalgebra::DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    // fix column phases so the distribution is Haar
    CMatrix::from_fn(dim, |i, j| {
        let rd = r[(j, j)];
        let ph = if rd.norm() > 0.0 { rd / rd.norm() } else { C64::new(1.0, 0.0) };
        q[(i, j)] * ph
    })
}

/// Commuting, independent Weyl labels with phases `x_i`; the associated
/// MSPS is the normalized projector onto `xi^{x_i} w(g_i) = 1` for all `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StabilizerGroup {
    pub generators: Vec<PhasePoint>,
    pub phases: Vec<u64>,
}

impl StabilizerGroup {
    pub fn trivial() -> Self {
        Self { generators: Vec::new(), phases: Vec::new() }
    }

    pub fn new(generators: Vec<PhasePoint>, phases: Vec<u64>) -> Self {
        Self { generators, phases }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn validate(&self, sys: &System) -> Result<()> {
        let d = sys.d;
        if self.generators.len() != self.phases.len() {
            return Err(Error::InvalidGroup("generator and phase counts differ".into()));
        }
        if self.generators.len() > sys.n {
            return Err(Error::InvalidGroup(format!("{} generators on {} qudits", self.rank(), sys.n)));
        }
        for g in &self.generators {
            if g.n() != sys.n || g.q.len() != sys.n || g.to_vec().iter().any(|&x| x >= d.get()) {
                return Err(Error::InvalidGroup(format!("malformed label {g:?}")));
            }
        }
        if self.phases.iter().any(|&x| x >= d.get()) {
            return Err(Error::InvalidGroup("phase outside Z_d".into()));
        }
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                if symplectic(a, b, d) != 0 {
                    return Err(Error::InvalidGroup(format!("{a:?} and {b:?} do not commute")));
                }
            }
        }
        if zmod::rank(&self.label_rows(), d) != self.rank() {
            return Err(Error::InvalidGroup("generators are dependent".into()));
        }
        Ok(())
    }

    fn label_rows(&self) -> Vec<Vec<u64>> {
        self.generators.iter().map(PhasePoint::to_vec).collect()
    }

    /// Whether both groups generate the same label subgroup (phases ignored).
    pub fn same_labels(&self, other: &Self, d: PrimeModulus) -> bool {
        zmod::row_reduce(&self.label_rows(), d).0 == zmod::row_reduce(&other.label_rows(), d).0
    }

    /// All `d^r` elements of the label subgroup.
    pub fn span(&self, d: PrimeModulus) -> Vec<PhasePoint> {
        let n = self.generators.first().map_or(0, PhasePoint::n);
        let mut out = vec![PhasePoint::zero(n)];
        for g in &self.generators {
            let mut next = Vec::with_capacity(out.len() * d.get() as usize);
            for x in &out {
                for k in 0..d.get() {
                    next.push(x.add(&g.scale(k, d), d));
                }
            }
            out = next;
        }
        out
    }
}

/// `(1/d^{n-r}) prod_i E_k [xi^{x_i} w(g_i)]^k`.
pub fn msps_from_group(group: &StabilizerGroup, sys: System) -> Result<DensityMatrix> {
    group.validate(&sys)?;
    let dim = sys.dim();
    let mut acc = CMatrix::identity(dim);
    for (g, &x) in group.generators.iter().zip(&group.phases) {
        let step = weyl_op(&sys, g).scale(sys.xi(x));
        let mut power = CMatrix::identity(dim);
        let mut avg = CMatrix::zeros(dim);
        for _ in 0..sys.d() {
            avg = &avg + &power;
            power = &power * &step;
        }
        acc = &acc * &avg.scale_real(1.0 / sys.d() as f64);
    }
    let scale = (sys.d() as f64).powi((sys.n - group.rank()) as i32);
    Ok(DensityMatrix::from_trusted(sys, acc.scale_real(1.0 / scale)))
}

/// Exponent `e` in `Z_d` minimizing `|z - xi^e|`, with the distance.
pub fn nearest_root(sys: &System, z: C64) -> (u64, f64) {
    (0..sys.d()).map(|e| (e, (z - sys.xi(e)).norm())).min_by(|a, b| a.1.total_cmp(&b.1)).expect("d >= 2")
}

/// MSPS test on a characteristic table; returns the stabilizer group with
/// generators in row echelon form on success.
pub fn msps_group_of(xi: &CharFunction) -> Option<StabilizerGroup> {
    let sys = xi.sys;
    let d = sys.d;
    let mut support = Vec::new();
    for (i, v) in xi.values.iter().enumerate() {
        let m = v.norm();
        if (m - 1.0).abs() <= UNIT_TOL {
            support.push(sys.point_at(i));
        } else if m > UNIT_TOL {
            return None;
        }
    }
    if support.first().is_none_or(|o| !o.is_zero()) || (xi.values[0] - C64::new(1.0, 0.0)).norm() > UNIT_TOL {
        return None;
    }
    let in_support = |x: &PhasePoint| (xi.get(x).norm() - 1.0).abs() <= UNIT_TOL;
    for (i, a) in support.iter().enumerate() {
        for b in &support[i..] {
            let s = a.add(b, d);
            if !in_support(&s) || symplectic(a, b, d) != 0 {
                return None;
            }
            // w(-a) w(-b) = c w(-a-b) on the common eigenspace
            let c = weyl_product_phase(&sys, &a.neg(d), &b.neg(d));
            if (xi.get(a) * xi.get(b) - c * xi.get(&s)).norm() > UNIT_TOL {
                return None;
            }
        }
    }
    let rows: Vec<Vec<u64>> = support.iter().map(PhasePoint::to_vec).collect();
    let (basis, _) = zmod::row_reduce(&rows, d);
    if (d.get() as usize).pow(basis.len() as u32) != support.len() {
        return None;
    }
    let generators: Vec<PhasePoint> = basis.iter().map(|r| PhasePoint::from_vec(r)).collect();
    let mut phases = Vec::with_capacity(generators.len());
    for g in &generators {
        let (e, dist) = nearest_root(&sys, xi.get(g));
        if dist > UNIT_TOL {
            return None;
        }
        phases.push(e);
    }
    Some(StabilizerGroup { generators, phases })
}

pub fn is_msps(rho: &DensityMatrix) -> Option<StabilizerGroup> {
    msps_group_of(&char_function(rho))
}

/// Line directions through the origin of `Z_d^2`: `(1, a)` for each `a`, then `(0, 1)`.
fn single_qudit_directions(d: PrimeModulus) -> Vec<PhasePoint> {
    let mut out: Vec<PhasePoint> = (0..d.get()).map(|a| PhasePoint::new(vec![1], vec![a])).collect();
    out.push(PhasePoint::new(vec![0], vec![1]));
    out
}

/// Maximal single-qudit stabilizer groups: `d + 1` directions times `d` phases.
pub fn pure_stabilizer_groups(d: PrimeModulus) -> Vec<StabilizerGroup> {
    single_qudit_directions(d)
        .into_iter()
        .flat_map(|g| (0..d.get()).map(move |x| StabilizerGroup::new(vec![g.clone()], vec![x])))
        .collect()
}

fn check_single_qudit(sys: &System) -> Result<()> {
    if sys.n != 1 {
        return Err(Error::UnsupportedScale(format!(
            "stabilizer enumeration is implemented for n = 1 only, got n = {}",
            sys.n
        )));
    }
    Ok(())
}

/// The `d(d+1)` pure single-qudit stabilizer states.
pub fn enumerate_pure_stabilizers(sys: System) -> Result<Vec<DensityMatrix>> {
    check_single_qudit(&sys)?;
    pure_stabilizer_groups(sys.d).iter().map(|g| msps_from_group(g, sys)).collect()
}

/// All single-qudit MSPS: the pure stabilizers followed by `I/d`.
pub fn enumerate_msps(sys: System) -> Result<Vec<DensityMatrix>> {
    let mut out = enumerate_pure_stabilizers(sys)?;
    out.push(DensityMatrix::maximally_mixed(sys));
    Ok(out)
}

/// Groups matching [`enumerate_msps`] position by position.
pub fn enumerate_msps_groups(sys: System) -> Result<Vec<StabilizerGroup>> {
    check_single_qudit(&sys)?;
    let mut out = pure_stabilizer_groups(sys.d);
    out.push(StabilizerGroup::trivial());
    Ok(out)
}

/// Qubit state `(I + (X + Y)/sqrt 2) / 2`.
pub fn t_state() -> DensityMatrix {
    let sys = System::new(2, 1).expect("qubit");
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let off = C64::new(a, -a) * 0.5;
    let m = CMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 1) => off,
        (1, 0) => off.conj(),
        _ => C64::new(0.5, 0.0),
    });
    DensityMatrix::from_trusted(sys, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SUPPORT_TOL;
    use crate::magic::mean_state;

    fn sys(d: u64, n: usize) -> System {
        System::new(d, n).unwrap()
    }

    #[test]
    fn validation_rejects_bad_states() {
        let s = sys(3, 1);
        assert!(DensityMatrix::new(s, CMatrix::identity(3)).is_err());
        assert!(DensityMatrix::new(s, CMatrix::diag(&[1.5, -0.5, 0.0])).is_err());
        assert!(DensityMatrix::new(s, CMatrix::identity(2).scale_real(0.5)).is_err());
        assert!(DensityMatrix::new(s, CMatrix::diag(&[0.5, 0.25, 0.25])).is_ok());
    }

    #[test]
    fn random_states() {
        let s = sys(3, 2);
        let full = random_density(1, s, 9).unwrap();
        assert!(full.spectrum().min() > 0.0);
        DensityMatrix::new(s, full.matrix().clone()).unwrap();

        let pure = random_density(2, s, 1).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-10);

        let again = random_density(2, s, 1).unwrap();
        assert_eq!(pure.matrix().to_row_major(), again.matrix().to_row_major());

        let r3 = random_density(3, s, 3).unwrap();
        assert_eq!(r3.spectrum().support_rank(), 3);
        assert!(random_density(0, s, 10).is_err());
    }

    #[test]
    fn haar_unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = random_unitary_with(&mut rng, 5);
        assert!(u.unitarity_deviation() < 1e-12);
    }

    #[test]
    fn haar_unitary_is_not_clifford() {
        let s = sys(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = random_unitary_with(&mut rng, 3);
        assert!(!crate::weyl::is_clifford(&u, &s).unwrap());
    }

    #[test]
    fn msps_examples() {
        let s = sys(3, 2);
        let id = msps_from_group(&StabilizerGroup::trivial(), s).unwrap();
        assert!(id.matrix().max_abs_diff(DensityMatrix::maximally_mixed(s).matrix()) < 1e-14);

        // <Z_1> on two qutrits: (1/3)|0><0| (x) I
        let g = StabilizerGroup::new(vec![PhasePoint::new(vec![1, 0], vec![0, 0])], vec![0]);
        let rho = msps_from_group(&g, s).unwrap();
        let expect = tensor(&CMatrix::diag(&[1.0, 0.0, 0.0]), &CMatrix::identity(3)).scale_real(1.0 / 3.0);
        assert!(rho.matrix().max_abs_diff(&expect) < 1e-14);

        let s1 = sys(3, 1);
        let z = StabilizerGroup::new(vec![PhasePoint::new(vec![1], vec![0])], vec![0]);
        let ket0 = msps_from_group(&z, s1).unwrap();
        assert!(ket0.matrix().max_abs_diff(DensityMatrix::basis(s1, 0).matrix()) < 1e-14);
    }

    #[test]
    fn msps_has_flat_spectrum() {
        let s = sys(3, 2);
        let g = StabilizerGroup::new(
            vec![PhasePoint::new(vec![1, 1], vec![0, 0]), PhasePoint::new(vec![0, 0], vec![1, 2])],
            vec![2, 1],
        );
        let rho = msps_from_group(&g, s).unwrap();
        let spec = rho.spectrum();
        assert_eq!(spec.support_rank(), 1);
        assert!((spec.max() - 1.0).abs() < 1e-12);
        assert_eq!(is_msps(&rho).map(|h| h.rank()), Some(2));
    }

    #[test]
    fn invalid_groups() {
        let s = sys(3, 1);
        let nc = StabilizerGroup::new(
            vec![PhasePoint::new(vec![1], vec![0]), PhasePoint::new(vec![0], vec![1])],
            vec![0, 0],
        );
        assert!(matches!(msps_from_group(&nc, s), Err(Error::InvalidGroup(_))));
        let s2 = sys(3, 2);
        let dep = StabilizerGroup::new(
            vec![PhasePoint::new(vec![1, 0], vec![0, 0]), PhasePoint::new(vec![2, 0], vec![0, 0])],
            vec![0, 0],
        );
        assert!(matches!(msps_from_group(&dep, s2), Err(Error::InvalidGroup(_))));
    }

    #[test]
    fn detection_examples() {
        let s = sys(3, 1);
        assert_eq!(is_msps(&DensityMatrix::maximally_mixed(s)), Some(StabilizerGroup::trivial()));
        let g = is_msps(&DensityMatrix::basis(s, 0)).unwrap();
        assert_eq!(g, StabilizerGroup::new(vec![PhasePoint::new(vec![1], vec![0])], vec![0]));
        assert!(is_msps(&t_state()).is_none());
        assert!(is_msps(&random_density(5, s, 2).unwrap()).is_none());
    }

    #[test]
    fn detection_recovers_groups() {
        for d in [2, 3, 5] {
            let s = sys(d, 1);
            for g in pure_stabilizer_groups(s.d) {
                let rho = msps_from_group(&g, s).unwrap();
                let back = is_msps(&rho).expect("stabilizer state");
                let again = msps_from_group(&back, s).unwrap();
                assert!(again.matrix().max_abs_diff(rho.matrix()) < 1e-12);
            }
        }
    }

    #[test]
    fn qubit_two_wire_stabilizer_detected() {
        // Bell state: stabilized by XX and ZZ, where YY carries a sign
        let s = sys(2, 2);
        let a = std::f64::consts::FRAC_1_SQRT_2;
        let z = C64::new(0.0, 0.0);
        let bell = DensityMatrix::pure(s, &[C64::new(a, 0.0), z, z, C64::new(a, 0.0)]).unwrap();
        let g = is_msps(&bell).expect("Bell state is a stabilizer state");
        assert_eq!(g.rank(), 2);
        let back = msps_from_group(&g, s).unwrap();
        assert!(back.matrix().max_abs_diff(bell.matrix()) < 1e-12);
    }

    #[test]
    fn enumeration_counts() {
        for (d, total) in [(2, 7), (3, 13)] {
            let s = sys(d, 1);
            let all = enumerate_msps(s).unwrap();
            assert_eq!(all.len(), total);
            for rho in &all {
                assert!(is_msps(rho).is_some());
            }
            let pure = enumerate_pure_stabilizers(s).unwrap();
            assert_eq!(pure.len(), (d * (d + 1)) as usize);
            for rho in &pure {
                assert!((rho.purity() - 1.0).abs() < 1e-12);
                let xi = char_function(rho);
                let unit = xi.values.iter().filter(|v| (v.norm() - 1.0).abs() < 1e-9).count();
                assert_eq!(unit, d as usize);
                assert_eq!(xi.support().len(), d as usize);
            }
        }
        assert_eq!(enumerate_pure_stabilizers(sys(7, 1)).unwrap().len(), 56);
        assert!(matches!(enumerate_msps(sys(3, 2)), Err(Error::UnsupportedScale(_))));
    }

    #[test]
    fn qubit_stabilizers_are_pauli_eigenstates() {
        let s = sys(2, 1);
        let pure = enumerate_pure_stabilizers(s).unwrap();
        let a = std::f64::consts::FRAC_1_SQRT_2;
        let c = |re, im| C64::new(re, im);
        let kets = [
            [c(1., 0.), c(0., 0.)],
            [c(0., 0.), c(1., 0.)],
            [c(a, 0.), c(a, 0.)],
            [c(a, 0.), c(-a, 0.)],
            [c(a, 0.), c(0., a)],
            [c(a, 0.), c(0., -a)],
        ];
        for k in kets {
            let target = DensityMatrix::pure(s, &k).unwrap();
            let hits = pure.iter().filter(|r| r.matrix().max_abs_diff(target.matrix()) < 1e-12).count();
            assert_eq!(hits, 1);
        }
    }

    #[test]
    fn phase_variants_are_orthogonal() {
        let s = sys(3, 1);
        let groups = pure_stabilizer_groups(s.d);
        for a in &groups {
            for b in &groups {
                if a.generators == b.generators && a.phases != b.phases {
                    let ra = msps_from_group(a, s).unwrap();
                    let rb = msps_from_group(b, s).unwrap();
                    assert!(ra.matrix().hs_inner(rb.matrix()).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn msps_is_mean_state_fixed_point() {
        for g in pure_stabilizer_groups(PrimeModulus::new(3).unwrap()) {
            let rho = msps_from_group(&g, sys(3, 1)).unwrap();
            assert!(mean_state(&rho).matrix().max_abs_diff(rho.matrix()) < 1e-10);
        }
        let s2 = sys(3, 2);
        let g = StabilizerGroup::new(vec![PhasePoint::new(vec![2, 1], vec![1, 0])], vec![1]);
        let rho = msps_from_group(&g, s2).unwrap();
        assert!(mean_state(&rho).matrix().max_abs_diff(rho.matrix()) < 1e-10);
        assert!(rho.spectrum().eigenvalues.iter().all(|&l| l < SUPPORT_TOL || (l - 1.0 / 3.0).abs() < 1e-12));
    }
}
