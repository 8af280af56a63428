//! Named verification suites. Each returns an [`ExperimentReport`] whose
//! records are a pure function of the seed and parameters.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, RngCore};
use rand_chacha::ChaCha8Rng;

use crate::conv::{
    beam_splitter_spec, convolve, convolve_characteristic, default_spec, holevo_bounds, holevo_weyl_ensemble,
    partner_stabilizer_group, ConvolutionChannel, ConvolutionSpec,
};
use crate::entropy::{
    fisher_finite_difference, fisher_information, fisher_observables, relative_entropy, renyi_entropy,
    sandwiched_relative_entropy, total_fisher, von_neumann, AlphaParam,
};
use crate::error::{Error, Result};
use crate::linalg::trace_norm;
use crate::magic::circuit::{clifford_t_circuit, random_clifford};
use crate::magic::{log_magic_gap, mean_state};
use crate::states::{
    enumerate_msps, is_msps, msps_from_group, pure_stabilizer_groups, random_density_with, DensityMatrix,
    StabilizerGroup,
};
use crate::weyl::{char_function, System};

use super::clt::{clt_run, CLT_ALPHAS};
use super::{run_trials, trial_rng, ExperimentReport, Params, Record};

/// Output entropy below which a state counts as pure.
pub const PURE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteName {
    Extremality,
    Entropy,
    Fisher,
    Monotonicity,
    Stability,
    MinOutput,
    Holevo,
    Synthesis,
    Duality,
    Clt,
}

impl SuiteName {
    pub const ALL: [SuiteName; 10] = [
        Self::Extremality,
        Self::Entropy,
        Self::Fisher,
        Self::Monotonicity,
        Self::Stability,
        Self::MinOutput,
        Self::Holevo,
        Self::Synthesis,
        Self::Duality,
        Self::Clt,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Extremality => "extremality",
            Self::Entropy => "entropy",
            Self::Fisher => "fisher",
            Self::Monotonicity => "monotonicity",
            Self::Stability => "stability",
            Self::MinOutput => "min-output",
            Self::Holevo => "holevo",
            Self::Synthesis => "synthesis",
            Self::Duality => "duality",
            Self::Clt => "clt",
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            Self::Extremality | Self::Holevo | Self::Clt => 50,
            Self::Duality => 200,
            Self::Stability | Self::MinOutput => 0,
            _ => 100,
        }
    }

    /// Whether the suite convolves states, so `d = 2` is meaningless.
    pub fn convolves(self) -> bool {
        !matches!(self, Self::Extremality | Self::Synthesis)
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.replace('_', "-");
        Self::ALL.into_iter().find(|n| n.as_str() == s).ok_or_else(|| {
            let names: Vec<&str> = Self::ALL.iter().map(|n| n.as_str()).collect();
            Error::Parse(format!("unknown suite {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Per configuration; `None` uses the suite default.
    pub trials: Option<usize>,
    /// Restricts the suite to configurations with this local dimension.
    pub d: Option<u64>,
    pub jobs: usize,
    pub steps: usize,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        Self { seed, trials: None, d: None, jobs: 1, steps: 30 }
    }

    fn trials(&self, name: SuiteName) -> usize {
        self.trials.unwrap_or_else(|| name.default_trials())
    }
}

/// A register and, for convolution suites, its key.
#[derive(Clone, Copy, Debug)]
struct Setting {
    sys: System,
    spec: Option<ConvolutionSpec>,
}

impl Setting {
    fn conv(spec: ConvolutionSpec) -> Self {
        Self { sys: spec.system(), spec: Some(spec) }
    }

    fn spec(&self) -> &ConvolutionSpec {
        self.spec.as_ref().expect("convolution setting")
    }

    fn label(&self) -> String {
        match &self.spec {
            Some(s) => format!("d={},n={},G={:?}", self.sys.d(), self.sys.n, s.g().entries()),
            None => format!("d={},n={}", self.sys.d(), self.sys.n),
        }
    }
}

/// Default key for a local dimension: the beam splitter where one exists,
/// otherwise `[1, 1; 1, 2]`.
fn key_for(d: u64, n: usize) -> Result<ConvolutionSpec> {
    beam_splitter_spec(d, n).or_else(|_| default_spec(d, n))
}

fn conv_settings(defaults: &[(u64, usize)], only: Option<u64>) -> Result<Vec<Setting>> {
    let wanted: Vec<(u64, usize)> = match only {
        Some(d) => {
            let picked: Vec<_> = defaults.iter().copied().filter(|&(dd, _)| dd == d).collect();
            if picked.is_empty() {
                vec![(d, 1)]
            } else {
                picked
            }
        }
        None => defaults.to_vec(),
    };
    wanted.into_iter().map(|(d, n)| key_for(d, n).map(Setting::conv)).collect()
}

fn params(settings: &[Setting], alphas: &[AlphaParam], trials: usize, steps: usize) -> Params {
    Params {
        configs: settings.iter().map(Setting::label).collect(),
        alphas: alphas.iter().map(|a| a.to_string()).collect(),
        trials,
        steps,
    }
}

fn random_state(rng: &mut ChaCha8Rng, sys: System) -> Result<DensityMatrix> {
    let rank = rng.random_range(1..=sys.dim());
    random_density_with(rng, sys, rank)
}

fn full_rank_state(rng: &mut ChaCha8Rng, sys: System) -> Result<DensityMatrix> {
    random_density_with(rng, sys, sys.dim())
}

/// Runs `per` trials on every setting; trial `t` of setting `k` uses stream `k * per + t`.
fn over_settings<F>(cfg: &SuiteConfig, settings: &[Setting], per: usize, f: F) -> Vec<Record>
where
    F: Fn(usize, &Setting, &mut ChaCha8Rng) -> Result<Vec<Record>> + Sync + Send,
{
    let total = settings.len() * per;
    run_trials(cfg.jobs, total, |i| {
        let setting = &settings[i / per];
        let mut rng = trial_rng(cfg.seed, i);
        f(i, setting, &mut rng).unwrap_or_else(|e| vec![Record::error(i, "trial", &e)])
    })
    .into_iter()
    .flatten()
    .collect()
}

fn finish(
    name: SuiteName,
    cfg: &SuiteConfig,
    params: Params,
    records: Vec<Record>,
    start: Instant,
) -> ExperimentReport {
    ExperimentReport::new(name.as_str(), cfg.seed, params, records, start.elapsed())
}

fn setup_failure(name: SuiteName, cfg: &SuiteConfig, err: Error, start: Instant) -> ExperimentReport {
    finish(name, cfg, Params::default(), vec![Record::error(0, "setup", &err)], start)
}

/// Minimum of `D_alpha(rho || sigma)` over all MSPS is attained only at the
/// mean state and equals `H_alpha(M(rho)) - H_alpha(rho)`.
pub fn suite_extremality(cfg: &SuiteConfig) -> ExperimentReport {
    let start = Instant::now();
    let name = SuiteName::Extremality;
    let sys = match System::new(cfg.d.unwrap_or(3), 1) {
        Ok(s) => s,
        Err(e) => return setup_failure(name, cfg, e, start),
    };
    let msps = match enumerate_msps(sys) {
        Ok(m) => m,
        Err(e) => return setup_failure(name, cfg, e, start),
    };
    let alphas = [AlphaParam::ONE, AlphaParam::TWO, AlphaParam::INF];
    let trials = cfg.trials(name);
    let settings = [Setting { sys, spec: None }];
    let mut records = vec![Record::info(0, "msps_count", msps.len() as f64)];
    records.extend(over_settings(cfg, &settings, trials, |i, _, rng| {
        // every fifth input is itself an MSPS
        let rho = if i % 5 == 0 { msps[rng.random_range(0..msps.len())].clone() } else { random_state(rng, sys)? };
        let mean = mean_state(&rho);
        let mut out = Vec::new();
        for a in alphas {
            let divs = msps.iter().map(|s| sandwiched_relative_entropy(&rho, s, a)).collect::<Result<Vec<f64>>>()?;
            let (best, &min) = divs.iter().enumerate().min_by(|x, y| x.1.total_cmp(y.1)).expect("MSPS set is nonempty");
            let runner_up = divs
                .iter()
                .enumerate()
                .filter(|&(k, v)| k != best && v.is_finite())
                .map(|(_, &v)| v)
                .fold(f64::INFINITY, f64::min);
            let gap = renyi_entropy(&mean, a)? - renyi_entropy(&rho, a)?;
            out.push(Record::at_most(i, format!("identity_a{a}"), (min - gap).abs(), 0.0, 1e-8));
            out.push(Record::at_most(
                i,
                format!("argmin_is_mean_a{a}"),
                msps[best].matrix().max_abs_diff(mean.matrix()),
                0.0,
                1e-9,
            ));
            out.push(Record::at_least(i, format!("uniqueness_margin_a{a}"), runner_up - min, 1e-8, 0.0));
        }
        Ok(out)
    }));
    finish(name, cfg, params(&settings, &alphas, trials, 0), records, start)
}

/// `H_alpha(rho [x] sigma) >= max(H_alpha(rho), H_alpha(sigma))`.
pub fn suite_entropy(cfg: &SuiteConfig) -> ExperimentReport {
    let start = Instant::now();
    let name = SuiteName::Entropy;
    let settings = match conv_settings(&[(3, 1), (3, 2), (7, 1)], cfg.d) {
        Ok(s) => s,
        Err(e) => return setup_failure(name, cfg, e, start),
    };
    let base: Vec<AlphaParam> =
        [0.0, 0.5, 1.0, 2.0, 3.0, f64::INFINITY].iter().map(|&a| AlphaParam::new(a).expect("not NaN")).collect();
    let negative = [AlphaParam::new(-1.0).expect("not NaN"), AlphaParam::NEG_INF];
    let trials = cfg.trials(name);
    let records = over_settings(cfg, &settings, trials, |i, set, rng| {
        let full = rng.random_bool(0.5);
        let (rho, sigma) = if full {
            (full_rank_state(rng, set.sys)?, full_rank_state(rng, set.sys)?)
        } else {
            (random_state(rng, set.sys)?, random_state(rng, set.sys)?)
        };
        let out = convolve(&rho, &sigma, set.spec())?;
        let full = full && rho.spectrum().min() > 1e-12 && sigma.spectrum().min() > 1e-12;
        let alphas = base.iter().chain(if full { &negative[..] } else { &[] });
        let mut recs = Vec::new();
        for &a in alphas {
            let lower = renyi_entropy(&rho, a)?.max(renyi_entropy(&sigma, a)?);
            recs.push(Record::at_least(i, format!("H_{a}"), renyi_entropy(&out, a)?, lower, 1e-8));
        }
        Ok(recs)
    });
    let alphas: Vec<AlphaParam> = base.iter().chain(&negative).copied().collect();
    finish(name, cfg, params(&settings, &alphas, trials, 0), records, start)
}

/// `J(rho [x] sigma) <= min(J(rho), J(sigma))`, plus finite-difference
/// checks of `J(rho; H)` on the first ten trials of each setting.
pub fn suite_fisher(cfg: &SuiteConfig) -> ExperimentReport {
    let start = Instant::now();
    let name = SuiteName::Fisher;
    let settings = match conv_settings(&[(3, 1), (7, 1)], cfg.d) {
        Ok(s) => s,
        Err(e) => return setup_failure(name, cfg, e, start),
    };
    let trials = cfg.trials(name);
    let records = over_settings(cfg, &settings, trials, |i, set, rng| {
        let rho = full_rank_state(rng, set.sys)?;
        let sigma = full_rank_state(rng, set.sys)?;
        let out = convolve(&rho, &sigma, set.spec())?;
        let bound = total_fisher(&rho)?.min(total_fisher(&sigma)?);
        let mut recs = vec![Record::at_most(i, "fisher_decrease", total_fisher(&out)?, bound, 1e-6)];
        if i % trials < 10 {
            let obs = fisher_observables(&set.sys);
            let h = &obs[rng.random_range(0..obs.len())];
            let exact = fisher_information(&rho, h)?;
            let fd = fisher_finite_difference(&rho, h, 1e-3)?;
            recs.push(Record::at_most(i, "fisher_vs_finite_difference", (exact - fd).abs(), 0.0, 1e-4));
        }
        Ok(recs)
    });
    finish(name, cfg, params(&settings, &[], trials, 0), records, start)
}

/// Trace distance and relative entropy contract under `[x] tau`.
pub fn suite_monotonicity(cfg: &SuiteConfig) -> ExperimentReport {
    let start = Instant::now();
    let name = SuiteName::Monotonicity;
    let settings = match conv_settings(&[(3, 1), (7, 1)], cfg.d) {
        Ok(s) => s,
        Err(e) => return setup_failure(name, cfg, e, start),
    };
    let trials = cfg.trials(name);
    let records = over_settings(cfg, &settings, trials, |i, set, rng| {
        let rho = random_state(rng, set.sys)?;
        let sigma = full_rank_state(rng, set.sys)?;
        let tau = random_state(rng, set.sys)?;
        let spec = set.spec();
        let (rt, st) = (convolve(&rho, &tau, spec)?, convolve(&sigma, &tau, spec)?);
        let before = trace_norm(&(rho.matrix() - sigma.matrix()))?;
        let after = trace_norm(&(rt.matrix() - st.matrix()))?;
        Ok(vec![
            Record::at_most(i, "trace_norm", after, before, 1e-9),
            Record::at_most(i, "relative_entropy", relative_entropy(&rt, &st)?, relative_entropy(&rho, &sigma)?, 1e-8),
        ])
    });
    finish(name, cfg, params(&settings, &[], trials, 0), records, start)
}

fn pure_stabilizers(sys: System) -> Result<(Vec<StabilizerGroup>, Vec<DensityMatrix>)> {
    let groups = pure_stabilizer_groups(sys.d);
    let states = groups.iter().map(|g| msps_from_group(g, sys)).collect::<Result<_>>()?;
    Ok((groups, states))
}

/// Every ordered pair of pure stabilizer states convolves to an MSPS.
pub fn suite_stability(cfg: &SuiteConfig) -> ExperimentReport {
    let start = Instant::now();
    let name = SuiteName::Stability;
    let run = || -> Result<(Vec<Setting>, Vec<Record>)> {
        let spec = default_spec(cfg.d.unwrap_or(3), 1)?;
        let (_, states) = pure_stabilizers(spec.system())?;
        let m = states.len();
        let records = run_trials(cfg.jobs, m * m, |k| {
            let (a, b) = (&states[k / m], &states[k % m]);
            match convolve(a, b, &spec) {
                Ok(out) => Record::at_least(k, "is_msps", f64::from(u8::from(is_msps(&out).is_some())), 1.0, 0.0),
                Err(e) => Record::error(k, "is_msps", &e),
            }
        });
        Ok((vec![Setting::conv(spec)], records))
    };
    match run() {
        Ok((settings, records)) => finish(name, cfg, params(&settings, &[], 0, 0), records, start),
        Err(e) => setup_failure(name, cfg, e, start),
    }
}

/// Partner pairs give pure outputs, and over all ordered pairs the output is
/// pure exactly when the first label group is the partner of the second.
pub fn suite_min_output(cfg: &SuiteConfig) -> ExperimentReport {
    let start = Instant::now();
    let name = SuiteName::MinOutput;
    let run = || -> Result<(Vec<Setting>, Vec<Record>)> {
        let spec = default_spec(cfg.d.unwrap_or(3), 1)?;
        let sys = spec.system();
        let d = sys.d;
        let (groups, states) = pure_stabilizers(sys)?;
        let partners = groups.iter().map(|g| partner_stabilizer_group(g, &spec)).collect::<Result<Vec<_>>>()?;
        let mut records = Vec::new();
        for (i, s1) in partners.iter().enumerate() {
            let sigma = &states[i];
            let mut h = von_neumann(&convolve(&msps_from_group(s1, sys)?, sigma, &spec)?);
            if h >= PURE_TOL {
                // the zero phase assignment failed; try every other one
                for x in 1..d.get().pow(s1.rank() as u32) {
                    let phases = (0..s1.rank()).map(|k| (x / d.get().pow(k as u32)) % d.get()).collect();
                    let alt = StabilizerGroup::new(s1.generators.clone(), phases);
                    h = h.min(von_neumann(&convolve(&msps_from_group(&alt, sys)?, sigma, &spec)?));
                }
            }
            records.push(Record::at_most(i, "partner_output_entropy", h, 0.0, PURE_TOL));
        }
        let m = states.len();
        let scan = run_trials(cfg.jobs, m * m, |k| {
            let (a, b) = (k / m, k % m);
            convolve(&states[a], &states[b], &spec).map(|out| {
                let h = von_neumann(&out);
                (k, h, h < PURE_TOL, groups[a].same_labels(&partners[b], d))
            })
        });
        let mut worst_mismatch: f64 = 0.0;
        for item in scan {
            let (k, h, pure, related) = item?;
            if !related {
                worst_mismatch = worst_mismatch.max(h);
            }
            records.push(Record::at_least(m + k, "pure_iff_partner", f64::from(u8::from(pure == related)), 1.0, 0.0));
        }
        records.push(Record::at_least(m + m * m, "max_mismatch_entropy", worst_mismatch, 0.1, 0.0));
        Ok((vec![Setting::conv(spec)], records))
    };
    match run() {
        Ok((settings, records)) => finish(name, cfg, params(&settings, &[], 0, 0), records, start),
        Err(e) => setup_failure(name, cfg, e, start),
    }
}

/// Holevo sandwich on random channels, the Weyl-orbit ensemble below the
/// upper bound, attainment for MSPS `sigma` at `d = 3` and collapse to
/// `n log d` for pure stabilizer `sigma`.
pub fn suite_holevo(cfg: &SuiteConfig) -> ExperimentReport {
    let start = Instant::now();
    let name = SuiteName::Holevo;
    let settings = match conv_settings(&[(3, 1), (7, 1)], cfg.d) {
        Ok(s) => s,
        Err(e) => return setup_failure(name, cfg, e, start),
    };
    let trials = cfg.trials(name);
    let mut records = over_settings(cfg, &settings, trials, |i, set, rng| {
        let sigma = random_state(rng, set.sys)?;
        let rho0 = random_density_with(rng, set.sys, 1)?;
        let chan = ConvolutionChannel::new(*set.spec(), sigma)?;
        let b = holevo_bounds(&chan);
        let chi = holevo_weyl_ensemble(&chan, &rho0);
        let mut recs = vec![Record::at_most(i, "lower_le_upper", b.lower, b.upper, 1e-9)];
        recs.push(match chi {
            Ok(chi) => Record::at_most(i, "ensemble_le_upper", chi, b.upper, 1e-9),
            Err(e) => Record::error(i, "ensemble_le_upper", &e),
        });
        Ok(recs)
    });
    let mut next = settings.len() * trials;
    for set in &settings {
        let mut extra = || -> Result<Vec<Record>> {
            let sys = set.sys;
            let spec = *set.spec();
            let ceiling = sys.n as f64 * (sys.d() as f64).log2();
            let mut recs = Vec::new();
            let (groups, states) = pure_stabilizers(sys)?;
            for (g, sigma) in groups.iter().zip(&states) {
                let chan = ConvolutionChannel::new(spec, sigma.clone())?;
                let b = holevo_bounds(&chan);
                recs.push(Record::at_most(next, "pure_lower_collapse", (b.lower - ceiling).abs(), 0.0, 1e-9));
                recs.push(Record::at_most(next, "pure_upper_collapse", (b.upper - ceiling).abs(), 0.0, 1e-9));
                let partner = msps_from_group(&partner_stabilizer_group(g, &spec)?, sys)?;
                let chi = holevo_weyl_ensemble(&chan, &partner)?;
                recs.push(Record::at_most(next, "partner_ensemble_attains", (chi - ceiling).abs(), 0.0, 1e-9));
                next += 1;
            }
            if sys.d() == 3 {
                let msps = enumerate_msps(sys)?;
                for sigma in &msps {
                    let chan = ConvolutionChannel::new(spec, sigma.clone())?;
                    let b = holevo_bounds(&chan);
                    let best = msps
                        .iter()
                        .map(|r| holevo_weyl_ensemble(&chan, r))
                        .collect::<Result<Vec<f64>>>()?
                        .into_iter()
                        .fold(f64::NEG_INFINITY, f64::max);
                    recs.push(Record::at_most(next, "msps_upper_attained", (best - b.upper).abs(), 0.0, 1e-9));
                    next += 1;
                }
            }
            Ok(recs)
        };
        match extra() {
            Ok(r) => records.extend(r),
            Err(e) => records.push(Record::error(next, "exhaustive", &e)),
        }
    }
    finish(name, cfg, params(&settings, &[], trials, 0), records, start)
}

/// `LMG(V rho V^dagger) <= LMG(rho) + N/2` for Clifford+T circuits with `N` T gates.
pub fn suite_synthesis(cfg: &SuiteConfig) -> ExperimentReport {
    let start = Instant::now();
    let name = SuiteName::Synthesis;
    let trials = cfg.trials(name);
    let settings: Vec<Setting> =
        (1..=2).map(|n| Setting { sys: System::new(2, n).expect("qubits"), spec: None }).collect();
    let records = run_trials(cfg.jobs, trials, |i| {
        let mut rng = trial_rng(cfg.seed, i);
        let run = |rng: &mut ChaCha8Rng| -> Result<Vec<Record>> {
            let n = 1 + i % 2;
            let t_count = (i / 2) % 4;
            let sys = System::new(2, n)?;
            let zero = DensityMatrix::basis(sys, 0);
            let input = if (i / 8) % 2 == 0 { zero } else { zero.conjugate(&random_clifford(rng, sys, 4 * n + 2)) };
            let circuit = clifford_t_circuit(rng.next_u64(), n, t_count)?;
            let out = input.conjugate(&circuit.unitary());
            let before = log_magic_gap(&input);
            Ok(vec![Record::at_most(
                i,
                format!("lmg_n{n}_t{t_count}"),
                log_magic_gap(&out),
                before + t_count as f64 / 2.0,
                1e-9,
            )])
        };
        run(&mut rng).unwrap_or_else(|e| vec![Record::error(i, "trial", &e)])
    })
    .into_iter()
    .flatten()
    .collect();
    finish(name, cfg, params(&settings, &[], trials, 0), records, start)
}

/// Matrix-side and characteristic-side convolutions agree pointwise.
pub fn suite_duality(cfg: &SuiteConfig) -> ExperimentReport {
    let start = Instant::now();
    let name = SuiteName::Duality;
    let settings = match conv_settings(&[(3, 1), (3, 2), (7, 1)], cfg.d) {
        Ok(s) => s,
        Err(e) => return setup_failure(name, cfg, e, start),
    };
    let trials = cfg.trials(name);
    let records = over_settings(cfg, &settings, trials, |i, set, rng| {
        let rho = random_state(rng, set.sys)?;
        let sigma = random_state(rng, set.sys)?;
        let matrix_side = char_function(&convolve(&rho, &sigma, set.spec())?);
        let char_side = convolve_characteristic(&char_function(&rho), &char_function(&sigma), set.spec())?;
        Ok(vec![Record::at_most(i, "duality_deviation", matrix_side.max_abs_diff(&char_side), 0.0, 1e-10)])
    });
    finish(name, cfg, params(&settings, &[], trials, 0), records, start)
}

/// CLT decay bound, slope bound and second law along seeded trajectories.
pub fn suite_clt(cfg: &SuiteConfig) -> ExperimentReport {
    let start = Instant::now();
    let name = SuiteName::Clt;
    let spec = match beam_splitter_spec(cfg.d.unwrap_or(7), 1) {
        Ok(s) => s,
        Err(e) => return setup_failure(name, cfg, e, start),
    };
    let settings = [Setting::conv(spec)];
    let trials = cfg.trials(name);
    let steps = cfg.steps;
    let records = over_settings(cfg, &settings, trials, |i, set, rng| {
        let rho = random_state(rng, set.sys)?;
        let series = clt_run(&rho, set.spec(), steps, &CLT_ALPHAS)?;
        let mut recs = vec![Record::info(i, "magic_gap", series.magic_gap)];
        for s in &series.steps {
            recs.push(Record::at_most(i, format!("norm_step{}", s.step), s.norm, s.bound, 1e-9));
        }
        for w in series.steps.windows(2) {
            for ((a, h0), h1) in CLT_ALPHAS.iter().zip(&w[0].entropies).zip(&w[1].entropies) {
                recs.push(Record::at_least(i, format!("second_law_step{}_a{a}", w[1].step), *h1, *h0, 1e-8));
            }
        }
        if let Some(slope) = series.slope {
            recs.push(Record::at_most(i, "log_slope", slope, series.slope_bound, 1e-6));
        }
        Ok(recs)
    });
    finish(name, cfg, params(&settings, &CLT_ALPHAS, trials, steps), records, start)
}

pub fn run_suite(name: SuiteName, cfg: &SuiteConfig) -> ExperimentReport {
    match name {
        SuiteName::Extremality => suite_extremality(cfg),
        SuiteName::Entropy => suite_entropy(cfg),
        SuiteName::Fisher => suite_fisher(cfg),
        SuiteName::Monotonicity => suite_monotonicity(cfg),
        SuiteName::Stability => suite_stability(cfg),
        SuiteName::MinOutput => suite_min_output(cfg),
        SuiteName::Holevo => suite_holevo(cfg),
        SuiteName::Synthesis => suite_synthesis(cfg),
        SuiteName::Duality => suite_duality(cfg),
        SuiteName::Clt => suite_clt(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64, trials: usize) -> SuiteConfig {
        SuiteConfig { trials: Some(trials), ..SuiteConfig::new(seed) }
    }

    fn assert_pass(rep: &ExperimentReport) {
        let bad: Vec<_> = rep.failed_records().take(5).collect();
        assert!(rep.pass, "{}: {bad:?}", rep.summary());
    }

    #[test]
    fn names_round_trip() {
        for n in SuiteName::ALL {
            assert_eq!(n.as_str().parse::<SuiteName>().unwrap(), n);
        }
        assert_eq!("min_output".parse::<SuiteName>().unwrap(), SuiteName::MinOutput);
        assert!("bogus".parse::<SuiteName>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        for name in SuiteName::ALL {
            let mut cfg = small(1, 3);
            cfg.steps = 6;
            assert_pass(&run_suite(name, &cfg));
        }
    }

    #[test]
    fn exhaustive_counts() {
        let rep = suite_stability(&SuiteConfig::new(0));
        assert_eq!(rep.records.len(), 144);
        assert_pass(&rep);
        let rep = suite_min_output(&SuiteConfig::new(0));
        assert_eq!(rep.records.iter().filter(|r| r.metric == "pure_iff_partner").count(), 144);
        assert_pass(&rep);
        let extremality = suite_extremality(&small(0, 1));
        assert_eq!(extremality.records[0].value, 13.0);
    }

    #[test]
    fn deterministic_and_schedule_independent() {
        let a = suite_entropy(&small(9, 4));
        let b = suite_entropy(&SuiteConfig { jobs: 3, ..small(9, 4) });
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn restricts_to_requested_dimension() {
        let rep = suite_duality(&SuiteConfig { d: Some(7), ..small(2, 2) });
        assert_eq!(rep.params.configs, vec!["d=7,n=1,G=[[2, 2], [2, 5]]".to_string()]);
        let rep = suite_duality(&SuiteConfig { d: Some(5), ..small(2, 2) });
        assert_pass(&rep);
        assert_eq!(rep.params.configs.len(), 1);
        let rep = suite_clt(&SuiteConfig { d: Some(5), ..small(2, 2) });
        assert!(!rep.pass);
    }
}
