//! Rényi entropies, sandwiched Rényi divergences, relative entropy and
//! divergence-based Fisher information. Logarithms are base 2.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, tensor, CMatrix, HermSpectrum, C64, SUPPORT_TOL};
use crate::states::DensityMatrix;
use crate::weyl::System;

/// Smallest eigenvalue accepted as full rank.
pub const FULL_RANK_TOL: f64 = 1e-12;

/// Rényi order in `[-inf, +inf]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct AlphaParam(f64);

impl AlphaParam {
    pub const ZERO: Self = Self(0.0);
    pub const HALF: Self = Self(0.5);
    pub const ONE: Self = Self(1.0);
    pub const TWO: Self = Self(2.0);
    pub const INF: Self = Self(f64::INFINITY);
    pub const NEG_INF: Self = Self(f64::NEG_INFINITY);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() {
            return Err(Error::DomainError(value));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn sign(self) -> f64 {
        if self.0 < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0.0
    }
}

impl TryFrom<f64> for AlphaParam {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<AlphaParam> for f64 {
    fn from(a: AlphaParam) -> f64 {
        a.0
    }
}

impl fmt::Display for AlphaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            v if v == f64::INFINITY => f.write_str("inf"),
            v if v == f64::NEG_INFINITY => f.write_str("-inf"),
            v => write!(f, "{v}"),
        }
    }
}

impl FromStr for AlphaParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" => Ok(Self::INF),
            "-inf" => Ok(Self::NEG_INF),
            t => t.parse::<f64>().map_err(|e| Error::Parse(format!("bad alpha {t:?}: {e}"))).and_then(Self::new),
        }
    }
}

/// `H_alpha` of a probability vector.
///
/// `alpha < 0` needs every entry above [`FULL_RANK_TOL`]; otherwise
/// [`Error::RankDeficient`] carries the smallest entry.
pub fn renyi_from_spectrum(lambda: &[f64], alpha: AlphaParam) -> Result<f64> {
    let a = alpha.value();
    let pos = || lambda.iter().copied().filter(|&l| l > 0.0);
    if a < 0.0 {
        let min = lambda.iter().copied().fold(f64::INFINITY, f64::min);
        if min <= FULL_RANK_TOL {
            return Err(Error::RankDeficient(min));
        }
        if a == f64::NEG_INFINITY {
            return Ok(min.log2());
        }
        return Ok(-log_power_sum(lambda.iter().copied(), a, min) / (1.0 - a));
    }
    Ok(if a == 0.0 {
        (lambda.iter().filter(|&&l| l > SUPPORT_TOL).count() as f64).log2()
    } else if a == 1.0 {
        -pos().map(|l| l * l.log2()).sum::<f64>()
    } else if a == f64::INFINITY {
        -pos().fold(0.0, f64::max).log2()
    } else {
        let max = pos().fold(0.0, f64::max);
        log_power_sum(pos(), a, max) / (1.0 - a)
    })
}

/// `log sum l^a`, scaled by `pivot` so large `|a|` neither overflows nor underflows.
fn log_power_sum(values: impl Iterator<Item = f64>, a: f64, pivot: f64) -> f64 {
    a * pivot.log2() + values.map(|l| (l / pivot).powf(a)).sum::<f64>().log2()
}

/// Generalized Rényi entropy in bits.
pub fn renyi_entropy(rho: &DensityMatrix, alpha: AlphaParam) -> Result<f64> {
    renyi_from_spectrum(&rho.spectrum().eigenvalues, alpha)
}

/// As [`renyi_entropy`], but singular states at `alpha < 0` give the
/// limiting value `-inf` instead of an error.
pub fn renyi_entropy_or_limit(rho: &DensityMatrix, alpha: AlphaParam) -> f64 {
    renyi_entropy(rho, alpha).unwrap_or(f64::NEG_INFINITY)
}

pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    renyi_entropy(rho, AlphaParam::ONE).expect("alpha = 1 never fails")
}

/// Weight of `rho` outside the support of `sigma`.
fn leakage(rho: &CMatrix, sigma: &HermSpectrum) -> f64 {
    let v = &sigma.eigenvectors;
    sigma
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l <= SUPPORT_TOL)
        .map(|(j, _)| {
            let col: Vec<C64> = (0..v.dim()).map(|i| v.get(i, j)).collect();
            quad_form(rho, &col)
        })
        .sum()
}

/// `<v|A|v>` for Hermitian `A`.
fn quad_form(a: &CMatrix, v: &[C64]) -> f64 {
    let n = v.len();
    let mut acc = C64::default();
    for i in 0..n {
        let mut row = C64::default();
        for k in 0..n {
            row += a.get(i, k) * v[k];
        }
        acc += v[i].conj() * row;
    }
    acc.re
}

fn check_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.system() != sigma.system() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", rho.system(), sigma.system())));
    }
    Ok(())
}

/// Umegaki relative entropy `Tr rho (log rho - log sigma)`; `+inf` when the
/// support of `rho` is not inside that of `sigma`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    let s = sigma.spectrum();
    if leakage(rho.matrix(), &s) > SUPPORT_TOL {
        return Ok(f64::INFINITY);
    }
    let v = &s.eigenvectors;
    let cross: f64 = s
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > SUPPORT_TOL)
        .map(|(j, &l)| {
            let col: Vec<C64> = (0..v.dim()).map(|i| v.get(i, j)).collect();
            quad_form(rho.matrix(), &col) * l.log2()
        })
        .sum();
    Ok(-von_neumann(rho) - cross)
}

/// Sandwiched Rényi divergence
/// `D_alpha = log Tr (sigma^g rho sigma^g)^alpha / (alpha - 1)` with
/// `g = (1 - alpha) / 2 alpha`, powers of `sigma` taken on its support.
/// `alpha = 1` is the relative entropy; `alpha = inf` is
/// `log lambda_max(sigma^{-1/2} rho sigma^{-1/2})`.
pub fn sandwiched_relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: AlphaParam) -> Result<f64> {
    let a = alpha.value();
    if a < 0.5 {
        return Err(Error::DomainError(a));
    }
    if a == 1.0 {
        return relative_entropy(rho, sigma);
    }
    check_dims(rho, sigma)?;
    let s = sigma.spectrum();
    if a > 1.0 && leakage(rho.matrix(), &s) > SUPPORT_TOL {
        return Ok(f64::INFINITY);
    }
    let g = if a == f64::INFINITY { -0.5 } else { (1.0 - a) / (2.0 * a) };
    let sg = s.reassemble(|l| C64::new(if l > SUPPORT_TOL { l.powf(g) } else { 0.0 }, 0.0));
    let q = herm_eig(&(&(&sg * rho.matrix()) * &sg).hermitian_part())?;
    if a == f64::INFINITY {
        return Ok(q.max().log2());
    }
    let kept = q.eigenvalues.iter().copied().filter(|&m| m > SUPPORT_TOL);
    Ok(log_power_sum(kept, a, q.max()) / (a - 1.0))
}

/// `sum_ij |H_ij|^2 (l_i - l_j)(log l_i - log l_j)` in the eigenbasis of `rho`.
fn fisher_on_spectrum(spec: &HermSpectrum, h: &CMatrix) -> f64 {
    let v = &spec.eigenvectors;
    let ht = &(&v.adjoint() * h) * v;
    let logs: Vec<f64> = spec.eigenvalues.iter().map(|l| l.log2()).collect();
    let lam = &spec.eigenvalues;
    let n = lam.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            acc += 2.0 * ht.get(i, j).norm_sqr() * (lam[i] - lam[j]) * (logs[i] - logs[j]);
        }
    }
    acc
}

fn full_rank_spectrum(rho: &DensityMatrix) -> Result<HermSpectrum> {
    let spec = rho.spectrum();
    if spec.min() <= FULL_RANK_TOL {
        return Err(Error::RankDeficient(spec.min()));
    }
    Ok(spec)
}

fn check_observable(rho: &DensityMatrix, h: &CMatrix) -> Result<()> {
    if h.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!("observable {} vs state {}", h.dim(), rho.dim())));
    }
    let dev = h.hermiticity_deviation();
    if dev > crate::linalg::HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

/// `J(rho; H) = Tr rho [H, [H, log rho]]`, the second derivative of
/// `D(rho || e^{i t H} rho e^{-i t H})` at `t = 0`.
pub fn fisher_information(rho: &DensityMatrix, h: &CMatrix) -> Result<f64> {
    check_observable(rho, h)?;
    Ok(fisher_on_spectrum(&full_rank_spectrum(rho)?, h))
}

/// [`fisher_information`] of `(1 - eps) rho + eps I / d^n`.
pub fn fisher_information_smoothed(rho: &DensityMatrix, h: &CMatrix, eps: f64) -> Result<f64> {
    if eps > 0.0 {
        fisher_information(&rho.smoothed(eps), h)
    } else {
        fisher_information(rho, h)
    }
}

/// Central second difference of `t -> D(rho || e^{itH} rho e^{-itH})` at 0,
/// straight from the divergence definition of `J`.
pub fn fisher_finite_difference(rho: &DensityMatrix, h: &CMatrix, step: f64) -> Result<f64> {
    check_observable(rho, h)?;
    let spec = herm_eig(h)?;
    let rotated = |t: f64| {
        let u = spec.reassemble(|l| C64::from_polar(1.0, t * l));
        relative_entropy(rho, &rho.conjugate(&u))
    };
    Ok((rotated(step)? - 2.0 * rotated(0.0)? + rotated(-step)?) / (step * step))
}

/// Projectors `|j><j|_R` for `R = Z_k, X_k` on every wire, `j` in `Z_d`.
pub fn fisher_observables(sys: &System) -> Vec<CMatrix> {
    let d = sys.d() as usize;
    let inv_sqrt = 1.0 / (d as f64).sqrt();
    // X|m> = |m+1>: eigenvector for xi^j is sum_m xi^{-jm} |m>
    let x_ket = |j: usize| -> Vec<C64> { (0..d).map(|m| sys.xi(((d - j % d) * m % d) as u64) * inv_sqrt).collect() };
    let mut out = Vec::with_capacity(2 * d * sys.n);
    for wire in 0..sys.n {
        let left = CMatrix::identity(d.pow(wire as u32));
        let right = CMatrix::identity(d.pow((sys.n - wire - 1) as u32));
        let embed = |p: &CMatrix| tensor(&tensor(&left, p), &right);
        for j in 0..d {
            let mut e = vec![C64::default(); d];
            e[j] = C64::new(1.0, 0.0);
            out.push(embed(&CMatrix::outer(&e)));
            out.push(embed(&CMatrix::outer(&x_ket(j))));
        }
    }
    out
}

/// `J(rho) = sum_k sum_j J(rho; H_j^{X_k}) + J(rho; H_j^{Z_k})`.
pub fn total_fisher(rho: &DensityMatrix) -> Result<f64> {
    let spec = full_rank_spectrum(rho)?;
    Ok(fisher_observables(&rho.system()).iter().map(|h| fisher_on_spectrum(&spec, h)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::mat_fn;
    use crate::magic::mean_state;
    use crate::states::{random_density, t_state};
    use crate::weyl::weyl_op;

    fn sys(d: u64, n: usize) -> System {
        System::new(d, n).unwrap()
    }

    fn alphas() -> Vec<AlphaParam> {
        [0.0, 0.5, 1.0, 2.0, 3.0, f64::INFINITY].map(|a| AlphaParam::new(a).unwrap()).to_vec()
    }

    #[test]
    fn parses_alpha() {
        assert_eq!("inf".parse::<AlphaParam>().unwrap(), AlphaParam::INF);
        assert_eq!("-inf".parse::<AlphaParam>().unwrap(), AlphaParam::NEG_INF);
        assert_eq!("0.5".parse::<AlphaParam>().unwrap(), AlphaParam::HALF);
        assert!("nan".parse::<AlphaParam>().is_err());
        assert!("x".parse::<AlphaParam>().is_err());
        assert_eq!(AlphaParam::NEG_INF.to_string(), "-inf");
    }

    #[test]
    fn maximally_mixed_entropy() {
        let s = sys(3, 2);
        let mixed = DensityMatrix::maximally_mixed(s);
        let expect = 2.0 * 3f64.log2();
        for a in alphas().into_iter().chain([AlphaParam::new(-1.0).unwrap(), AlphaParam::NEG_INF]) {
            let h = renyi_entropy(&mixed, a).unwrap();
            assert!((h - a.sign() * expect).abs() < 1e-12, "alpha {a}");
        }
    }

    #[test]
    fn pure_and_diagonal_examples() {
        let zero = DensityMatrix::basis(sys(3, 1), 0);
        for a in alphas() {
            assert!(renyi_entropy(&zero, a).unwrap().abs() < 1e-12);
        }
        let rho = DensityMatrix::new(sys(2, 1), CMatrix::diag(&[0.75, 0.25])).unwrap();
        let h2 = renyi_entropy(&rho, AlphaParam::TWO).unwrap();
        assert!((h2 + (10.0f64 / 16.0).log2()).abs() < 1e-14);
        assert!((h2 - 0.678_071_905_112_638).abs() < 1e-12);
        assert!((renyi_entropy(&rho, AlphaParam::NEG_INF).unwrap() - 0.25f64.log2()).abs() < 1e-14);
        // -1/2 log(4/3 + 4)
        let hm1 = renyi_entropy(&rho, AlphaParam::new(-1.0).unwrap()).unwrap();
        assert!((hm1 + 0.5 * (16.0f64 / 3.0).log2()).abs() < 1e-13);
    }

    #[test]
    fn negative_alpha_needs_full_rank() {
        let zero = DensityMatrix::basis(sys(3, 1), 0);
        assert!(matches!(renyi_entropy(&zero, AlphaParam::new(-1.0).unwrap()), Err(Error::RankDeficient(_))));
        assert_eq!(renyi_entropy_or_limit(&zero, AlphaParam::NEG_INF), f64::NEG_INFINITY);
    }

    #[test]
    fn negative_alpha_approaches_limit() {
        let rho = random_density(3, sys(3, 1), 3).unwrap();
        let lim = renyi_entropy(&rho, AlphaParam::NEG_INF).unwrap();
        let far = renyi_entropy(&rho, AlphaParam::new(-2000.0).unwrap()).unwrap();
        assert!((far - lim).abs() < 1e-2);
        let lim = renyi_entropy(&rho, AlphaParam::INF).unwrap();
        let far = renyi_entropy(&rho, AlphaParam::new(2000.0).unwrap()).unwrap();
        assert!((far - lim).abs() < 1e-2);
    }

    #[test]
    fn renyi_is_monotone_in_alpha() {
        for seed in 0..20 {
            let rho = random_density(seed, sys(3, 2), 1 + seed as usize % 9).unwrap();
            let hs: Vec<f64> = alphas()[1..].iter().map(|&a| renyi_entropy(&rho, a).unwrap()).collect();
            for w in hs.windows(2) {
                assert!(w[1] <= w[0] + 1e-12);
            }
        }
    }

    #[test]
    fn divergence_examples() {
        let s = sys(3, 1);
        let mixed = DensityMatrix::maximally_mixed(s);
        for seed in 0..10 {
            let rho = random_density(seed, s, 1 + seed as usize % 3).unwrap();
            for a in [0.5, 1.0, 2.0, 3.0, f64::INFINITY] {
                let a = AlphaParam::new(a).unwrap();
                assert!(sandwiched_relative_entropy(&rho, &rho, a).unwrap().abs() < 1e-9, "alpha {a}");
            }
            for a in [AlphaParam::ONE, AlphaParam::TWO, AlphaParam::INF] {
                let d = sandwiched_relative_entropy(&rho, &mixed, a).unwrap();
                let expect = 3f64.log2() - renyi_entropy(&rho, a).unwrap();
                assert!((d - expect).abs() < 1e-10);
            }
        }
        let full = random_density(1, s, 3).unwrap();
        let zero = DensityMatrix::basis(s, 0);
        let one = DensityMatrix::basis(s, 1);
        assert_eq!(sandwiched_relative_entropy(&full, &zero, AlphaParam::TWO).unwrap(), f64::INFINITY);
        assert_eq!(relative_entropy(&zero, &one).unwrap(), f64::INFINITY);
        assert!(sandwiched_relative_entropy(&full, &zero, AlphaParam::new(0.2).unwrap()).is_err());
    }

    #[test]
    fn divergence_positive_for_unequal_states() {
        let s = sys(3, 1);
        for seed in 0..10 {
            let rho = random_density(seed, s, 3).unwrap();
            let sigma = random_density(seed + 50, s, 3).unwrap();
            for a in [1.0, 1.5, 2.0, f64::INFINITY] {
                let d = sandwiched_relative_entropy(&rho, &sigma, AlphaParam::new(a).unwrap()).unwrap();
                assert!(d > 1e-9);
            }
        }
    }

    #[test]
    fn divergence_to_mean_state() {
        for seed in 0..10 {
            let rho = random_density(seed, sys(3, 1), 1 + seed as usize % 3);
            let rho = rho.unwrap();
            let m = mean_state(&rho);
            for a in [AlphaParam::ONE, AlphaParam::TWO, AlphaParam::INF] {
                let d = sandwiched_relative_entropy(&rho, &m, a).unwrap();
                let gap = renyi_entropy(&m, a).unwrap() - renyi_entropy(&rho, a).unwrap();
                assert!((d - gap).abs() < 1e-8);
            }
        }
        let t = t_state();
        let d = relative_entropy(&t, &mean_state(&t)).unwrap();
        assert!((d - 1.0 + von_neumann(&t)).abs() < 1e-12);
    }

    #[test]
    fn fisher_trivial_cases() {
        let s = sys(3, 1);
        let mixed = DensityMatrix::maximally_mixed(s);
        let rho = random_density(2, s, 3).unwrap();
        let h = weyl_op(&s, &crate::weyl::PhasePoint::new(vec![1], vec![1]));
        let h = (&h + &h.adjoint()).scale_real(0.5);
        assert!(fisher_information(&mixed, &h).unwrap().abs() < 1e-14);
        assert!(fisher_information(&rho, &CMatrix::identity(3)).unwrap().abs() < 1e-14);
        assert!(total_fisher(&mixed).unwrap().abs() < 1e-14);
        let zero = DensityMatrix::basis(s, 0);
        assert!(matches!(fisher_information(&zero, &h), Err(Error::RankDeficient(_))));
        assert!(fisher_information_smoothed(&zero, &h, 1e-3).unwrap() > 0.0);
    }

    #[test]
    fn fisher_matches_double_commutator() {
        let s = sys(3, 1);
        for seed in 0..5 {
            let rho = random_density(seed, s, 3).unwrap();
            let log_rho = mat_fn(rho.matrix(), f64::log2, 0.0).unwrap();
            for h in fisher_observables(&s) {
                let dc = h.commutator(&h.commutator(&log_rho));
                let direct = (rho.matrix() * &dc).trace().re;
                assert!((fisher_information(&rho, &h).unwrap() - direct).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn fisher_matches_finite_differences() {
        for (i, (d, seed)) in [(3, 0), (3, 1), (5, 2), (7, 3), (3, 4)].into_iter().enumerate() {
            let s = sys(d, 1);
            let rho = random_density(seed, s, d as usize).unwrap();
            let mut e0 = vec![C64::default(); d as usize];
            e0[0] = C64::new(1.0, 0.0);
            let h = CMatrix::outer(&e0);
            let fd = fisher_finite_difference(&rho, &h, 1e-3).unwrap();
            let j = fisher_information(&rho, &h).unwrap();
            assert!((fd - j).abs() < 1e-4, "case {i}: {fd} vs {j}");
        }
    }

    #[test]
    fn observables_are_projectors_resolving_identity() {
        let s = sys(3, 2);
        let obs = fisher_observables(&s);
        assert_eq!(obs.len(), 2 * 3 * 2);
        let xsum = obs.iter().skip(1).step_by(2).take(3).fold(CMatrix::zeros(9), |a, b| &a + b);
        assert!(xsum.max_abs_diff(&CMatrix::identity(9)) < 1e-12);
        for p in &obs {
            assert!((p * p).max_abs_diff(p) < 1e-12);
        }
        // X eigenvector for eigenvalue xi^j
        let x = weyl_op(&sys(3, 1), &crate::weyl::PhasePoint::new(vec![0], vec![1]));
        let small = fisher_observables(&sys(3, 1));
        for j in 0..3 {
            let p = &small[2 * j + 1];
            let lhs = &x * p;
            let rhs = p.scale(sys(3, 1).xi(j as u64));
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn total_fisher_wire_symmetry() {
        let s = sys(3, 1);
        let a = random_density(5, s, 3).unwrap();
        let b = random_density(6, s, 3).unwrap();
        let ab = total_fisher(&a.tensor(&b).unwrap()).unwrap();
        let ba = total_fisher(&b.tensor(&a).unwrap()).unwrap();
        assert!(ab >= 0.0);
        assert!((ab - ba).abs() < 1e-9 * ab.max(1.0));
    }
}
