//! Minimal-output-entropy partners and Holevo capacity bounds.

use serde::{Deserialize, Serialize};

use crate::entropy::von_neumann;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::magic::mean_state;
use crate::states::{DensityMatrix, StabilizerGroup};
use crate::weyl::PhasePoint;

use super::{ConvolutionChannel, ConvolutionSpec};

/// Tolerance of the covariance checks on the Weyl-orbit ensemble.
pub const COVARIANCE_TOL: f64 = 1e-9;

/// Labels `(-g10^{-1} g11 x, g01^{-1} g00 y)` for every generator `(x, y)`
/// of a maximal group, with zero phases. A state stabilized by the result,
/// convolved with one stabilized by `s2`, is pure.
pub fn partner_stabilizer_group(s2: &StabilizerGroup, spec: &ConvolutionSpec) -> Result<StabilizerGroup> {
    let sys = spec.system();
    s2.validate(&sys)?;
    if s2.rank() != sys.n {
        return Err(Error::InvalidGroup(format!("rank {} group is not maximal on {} qudits", s2.rank(), sys.n)));
    }
    let d = sys.d;
    let g = |r, c| spec.g().entry(r, c);
    let a = d.neg(d.mul(d.inv(g(1, 0))?, g(1, 1)));
    let b = d.mul(d.inv(g(0, 1))?, g(0, 0));
    let generators: Vec<PhasePoint> = s2
        .generators
        .iter()
        .map(|x| {
            PhasePoint::new(x.p.iter().map(|&v| d.mul(a, v)).collect(), x.q.iter().map(|&v| d.mul(b, v)).collect())
        })
        .collect();
    let phases = vec![0; generators.len()];
    Ok(StabilizerGroup::new(generators, phases))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolevoBounds {
    pub lower: f64,
    pub upper: f64,
}

/// `n log d - H(M(sigma)) <= chi <= n log d - H(sigma)`.
pub fn holevo_bounds(chan: &ConvolutionChannel) -> HolevoBounds {
    let sys = chan.spec.system();
    let ceiling = sys.n as f64 * (sys.d() as f64).log2();
    HolevoBounds { lower: ceiling - von_neumann(&mean_state(&chan.sigma)), upper: ceiling - von_neumann(&chan.sigma) }
}

/// Holevo quantity of the uniform ensemble `{w(x) rho0 w(x)^dagger}` over
/// all phase points, which is `n log d - H(E(rho0))` once the channel is
/// checked to be covariant on it.
pub fn holevo_weyl_ensemble(chan: &ConvolutionChannel, rho0: &DensityMatrix) -> Result<f64> {
    let sys = chan.spec.system();
    if rho0.system() != sys {
        return Err(Error::DimensionMismatch("ensemble seed does not match the channel".into()));
    }
    let base = chan.apply(rho0)?;
    let h0 = von_neumann(&base);
    let mut sum = CMatrix::zeros(sys.dim());
    let mut spread: f64 = 0.0;
    for x in sys.points() {
        let out = chan.apply(&rho0.displace(&x))?;
        spread = spread.max((von_neumann(&out) - h0).abs());
        sum = &sum + out.matrix();
    }
    if spread > COVARIANCE_TOL {
        return Err(Error::CovarianceViolation(format!("output entropies differ by {spread:e}")));
    }
    let avg = sum.scale_real(1.0 / sys.num_points() as f64);
    let dev = avg.max_abs_diff(DensityMatrix::maximally_mixed(sys).matrix());
    if dev > COVARIANCE_TOL {
        return Err(Error::CovarianceViolation(format!("average output deviates from I/d^n by {dev:e}")));
    }
    Ok(sys.n as f64 * (sys.d() as f64).log2() - h0)
}
