//! Repeated beam-splitter convolution `[x]^{N+1} rho = ([x]^N rho) [x] rho`
//! with `[x]^0 rho = rho`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::conv::{convolve, ConvolutionSpec};
use crate::entropy::{renyi_entropy_or_limit, AlphaParam};
use crate::error::{Error, Result};
use crate::jsonfmt::{fmt_f64, nullable_f64, to_json_string};
use crate::linalg::schatten2_norm;
use crate::magic::{magic_gap, make_zero_mean, mean_state};
use crate::states::DensityMatrix;
use crate::weyl::PhasePoint;

pub const CLT_ALPHAS: [AlphaParam; 4] = [AlphaParam::HALF, AlphaParam::ONE, AlphaParam::TWO, AlphaParam::INF];

/// Norms at or below this are left out of the slope fit.
pub const FIT_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CltStep {
    pub step: usize,
    /// `||[x]^N rho - M(rho)||_2`
    #[serde(deserialize_with = "nullable_f64")]
    pub norm: f64,
    /// `(1 - MG)^N ||rho - M(rho)||_2`
    #[serde(deserialize_with = "nullable_f64")]
    pub bound: f64,
    pub entropies: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CltSeries {
    pub spec: ConvolutionSpec,
    /// Weyl displacement applied to make the input zero-mean.
    pub displacement: PhasePoint,
    pub magic_gap: f64,
    pub alphas: Vec<AlphaParam>,
    /// Steps `0..=N`; step 0 is the input itself.
    pub steps: Vec<CltStep>,
    /// Least-squares slope of `log2` norm against `N`.
    pub slope: Option<f64>,
    /// `log2(1 - MG)`.
    #[serde(deserialize_with = "nullable_f64")]
    pub slope_bound: f64,
}

fn is_beam_splitter(spec: &ConvolutionSpec) -> bool {
    let g = spec.g();
    let d = spec.system().d;
    let (s, t) = (g.entry(0, 0), g.entry(0, 1));
    g.entry(1, 0) == t && g.entry(1, 1) == d.neg(s) && d.add(d.mul(s, s), d.mul(t, t)) == 1
}

/// Least-squares slope of `ys` against `xs`; `None` with fewer than two points.
pub fn fit_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Iterates the convolution up to `nmax`, recording norms, bounds and
/// entropies. Inputs with a nonzero mean are displaced first.
pub fn clt_run(rho: &DensityMatrix, spec: &ConvolutionSpec, nmax: usize, alphas: &[AlphaParam]) -> Result<CltSeries> {
    if !is_beam_splitter(spec) {
        return Err(Error::InvalidSpec("the CLT iteration needs a beam-splitter G = [s, t; t, -s]".into()));
    }
    let (displacement, rho) = make_zero_mean(rho)?;
    let mean = mean_state(&rho);
    let mg = magic_gap(&rho);
    let norm_of = |s: &DensityMatrix| schatten2_norm(&(s.matrix() - mean.matrix()));
    let norm0 = norm_of(&rho);
    let mut steps = Vec::with_capacity(nmax + 1);
    let mut cur = rho.clone();
    for n in 0..=nmax {
        if n > 0 {
            cur = convolve(&cur, &rho, spec)?;
        }
        steps.push(CltStep {
            step: n,
            norm: norm_of(&cur),
            bound: (1.0 - mg).powi(n as i32) * norm0,
            entropies: alphas.iter().map(|&a| renyi_entropy_or_limit(&cur, a)).collect(),
        });
    }
    let fit: Vec<(f64, f64)> =
        steps.iter().filter(|s| s.norm > FIT_FLOOR).map(|s| (s.step as f64, s.norm.log2())).collect();
    Ok(CltSeries {
        spec: *spec,
        displacement,
        magic_gap: mg,
        alphas: alphas.to_vec(),
        steps,
        slope: fit_log_slope(&fit),
        slope_bound: (1.0 - mg).log2(),
    })
}

impl CltSeries {
    /// Largest `norm - bound` over all steps.
    pub fn max_bound_excess(&self) -> f64 {
        self.steps.iter().map(|s| s.norm - s.bound).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest entropy drop `H_alpha(N) - H_alpha(N + 1)` over steps and orders.
    pub fn max_entropy_drop(&self) -> f64 {
        self.steps
            .windows(2)
            .flat_map(|w| w[0].entropies.iter().zip(&w[1].entropies).map(|(a, b)| a - b))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Rows for steps `1..=N`: `step,norm,bound,h_<alpha>...`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,norm,bound");
        for a in &self.alphas {
            let _ = write!(out, ",h_{a}");
        }
        out.push('\n');
        for s in self.steps.iter().skip(1) {
            let _ = write!(out, "{},{},{}", s.step, fmt_f64(s.norm), fmt_f64(s.bound));
            for h in &s.entropies {
                let _ = write!(out, ",{}", fmt_f64(*h));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        to_json_string(self).expect("series serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conv::{beam_splitter_spec, default_spec};
    use crate::magic::mean_vector;
    use crate::states::{enumerate_msps, random_density};

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 2.0 - 0.5 * i as f64)).collect();
        assert!((fit_log_slope(&pts).unwrap() + 0.5).abs() < 1e-12);
        assert!(fit_log_slope(&pts[..1]).is_none());
    }

    #[test]
    fn msps_is_a_fixed_point() {
        let spec = beam_splitter_spec(7, 1).unwrap();
        let zero = DensityMatrix::basis(spec.system(), 0);
        let series = clt_run(&zero, &spec, 5, &CLT_ALPHAS).unwrap();
        assert!(series.steps.iter().all(|s| s.norm < 1e-12));
        assert!(series.slope.is_none());
        assert_eq!(series.magic_gap, 0.0);
    }

    #[test]
    fn random_pure_state_obeys_bound() {
        let spec = beam_splitter_spec(7, 1).unwrap();
        let rho = random_density(7, spec.system(), 1).unwrap();
        let series = clt_run(&rho, &spec, 30, &CLT_ALPHAS).unwrap();
        assert_eq!(series.steps.len(), 31);
        assert!(series.max_bound_excess() <= 1e-9);
        assert!(series.max_entropy_drop() <= 1e-8);
        assert!(series.slope.unwrap() <= series.slope_bound + 1e-6);
        let csv = series.to_csv();
        assert_eq!(csv.lines().count(), 31);
        assert!(csv.starts_with("step,norm,bound,h_0.5,h_1,h_2,h_inf\n1,"));
    }

    #[test]
    fn nonzero_mean_inputs_are_displaced() {
        let spec = beam_splitter_spec(7, 1).unwrap();
        for m in enumerate_msps(spec.system()).unwrap().into_iter().take(9) {
            let nonzero = !mean_vector(&m).unwrap().is_zero();
            let series = clt_run(&m, &spec, 3, &CLT_ALPHAS).unwrap();
            assert_eq!(!series.displacement.is_zero(), nonzero);
            assert!(series.steps.iter().all(|s| s.norm < 1e-12));
        }
    }

    #[test]
    fn rejects_non_beam_splitter() {
        let spec = default_spec(7, 1).unwrap();
        let rho = DensityMatrix::basis(spec.system(), 0);
        assert!(matches!(clt_run(&rho, &spec, 2, &CLT_ALPHAS), Err(Error::InvalidSpec(_))));
    }
}
