//! The `qconv` command line.
//!
//! Exit codes: 0 pass, 1 a checked property failed, 2 usage or parse error,
//! 3 numeric precondition failure.

mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::conv::{
    amplifier_spec, beam_splitter_spec, convolve, convolve_characteristic, default_spec, holevo_bounds,
    holevo_weyl_ensemble, ConvolutionChannel, ConvolutionSpec,
};
use crate::error::Error;
use crate::experiments::{clt_run, run_suite, SuiteConfig, SuiteName, CLT_ALPHAS};
use crate::jsonfmt::{fmt_f64, to_json_string};
use crate::magic::{log_magic_gap, magic_gap, mean_vector};
use crate::states::schema::{char_doc, StateDoc};
use crate::states::{enumerate_msps_groups, is_msps, DensityMatrix, StabilizerGroup};
use crate::weyl::{char_function, pauli_rank, PhasePoint, System};

pub use io::{load_state, write_atomic, StateSource};

/// Deviation above which `convolve --check-duality` fails.
pub const DUALITY_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "qconv", version, about = "Qudit convolution, magic gap and entropy experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Magic gap, Pauli rank, mean-value vector and mean-state group of a state.
    Gap(GapArgs),
    /// Convolve two states and write the result as a dense state document.
    Convolve(ConvolveArgs),
    /// Iterate the beam-splitter convolution and print the CLT series.
    Clt(CltArgs),
    /// Run a named verification suite.
    Suite(SuiteArgs),
    /// List stabilizer groups on one qudit.
    Enumerate(EnumerateArgs),
    /// Holevo capacity bounds of a convolutional channel.
    CapacityBounds(CapacityArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// System size for presets; state files carry their own.
#[derive(Debug, Args)]
pub struct SystemArgs {
    #[arg(long, default_value_t = 3)]
    pub d: u64,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Required by random presets.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct GapArgs {
    /// State document (JSON).
    #[arg(long, conflicts_with = "preset")]
    pub state: Option<PathBuf>,
    #[arg(long, required_unless_present = "state")]
    pub preset: Option<String>,
    #[command(flatten)]
    pub sys: SystemArgs,
    /// Also write the characteristic table as a state document.
    #[arg(long)]
    pub emit_char: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecChoice {
    Default,
    BeamSplitter,
    Amplifier,
    File(PathBuf),
}

fn parse_spec_choice(s: &str) -> Result<SpecChoice, String> {
    Ok(match s {
        "default" => SpecChoice::Default,
        "beam-splitter" => SpecChoice::BeamSplitter,
        "amplifier" => SpecChoice::Amplifier,
        path => SpecChoice::File(PathBuf::from(path)),
    })
}

fn parse_g(s: &str) -> Result<[[i64; 2]; 2], String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("bad entry {x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b, c, d] => Ok([[a, b], [c, d]]),
        _ => Err(format!("expected four entries g00,g01,g10,g11, got {}", v.len())),
    }
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// `default` ([1,1;1,2]), `beam-splitter`, `amplifier` or a spec file.
    #[arg(long, value_parser = parse_spec_choice, default_value = "default")]
    pub spec: SpecChoice,
    /// Explicit parameter matrix `g00,g01,g10,g11`; overrides `--spec`.
    #[arg(long, value_parser = parse_g, allow_hyphen_values = true)]
    pub g: Option<[[i64; 2]; 2]>,
}

#[derive(Debug, Args)]
pub struct ConvolveArgs {
    /// State file or `preset:NAME[:SEED]`.
    #[arg(long)]
    pub a: StateSource,
    /// State file or `preset:NAME[:SEED]`; random presets default to seed + 1.
    #[arg(long)]
    pub b: StateSource,
    #[command(flatten)]
    pub sys: SystemArgs,
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the deviation between the matrix and characteristic paths.
    #[arg(long)]
    pub check_duality: bool,
}

#[derive(Debug, Args)]
pub struct CltArgs {
    #[arg(long, default_value_t = 7)]
    pub d: u64,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 30)]
    pub steps: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "random-pure", conflicts_with = "state")]
    pub preset: String,
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// extremality, entropy, fisher, monotonicity, stability, min-output,
    /// holevo, synthesis, duality or clt.
    pub name: String,
    #[arg(long)]
    pub seed: u64,
    /// Trials per configuration.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Only run configurations with this local dimension.
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// CLT steps.
    #[arg(long, default_value_t = 30)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EnumerateWhat {
    Msps,
    Stabilizers,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(value_enum)]
    pub what: EnumerateWhat,
    #[arg(long, default_value_t = 3)]
    pub d: u64,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// Fixed second input: state file or `preset:NAME[:SEED]`.
    #[arg(long)]
    pub sigma: StateSource,
    /// Seed state of the Weyl-orbit ensemble.
    #[arg(long)]
    pub rho0: Option<StateSource>,
    #[command(flatten)]
    pub sys: SystemArgs,
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Io(_) => 2,
            Self::Numeric(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) | Self::Numeric(m) | Self::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::NotHermitian(_)
            | Error::NotUnitary(_)
            | Error::DomainError(_)
            | Error::PhaseNotRoot(_)
            | Error::RankDeficient(_)
            | Error::CovarianceViolation(_)
            | Error::InvalidState(_) => Self::Numeric(msg),
            _ => Self::Usage(msg),
        }
    }
}

/// Outcome of a successful command: text for stdout and whether the checked
/// property held.
pub struct Outcome {
    pub stdout: String,
    pub pass: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, pass: true }
    }
}

/// Rejections that need no computation: qubit convolutions and named keys
/// on dimensions without one.
fn check_conv_dimension(d: u64, spec: Option<&SpecChoice>) -> Result<(), CliError> {
    if d == 2 {
        return Err(Error::UnsupportedDimension(
            "convolution is undefined for qubits: no positive invertible G exists mod 2".into(),
        )
        .into());
    }
    if matches!(d, 3 | 5) {
        if let Some(SpecChoice::BeamSplitter | SpecChoice::Amplifier) = spec {
            return Err(Error::UnsupportedDimension(format!(
                "no beam splitter or amplifier exists for d = {d}; use d >= 7"
            ))
            .into());
        }
    }
    Ok(())
}

fn resolve_spec(args: &SpecArgs, d: u64, n: usize) -> Result<ConvolutionSpec, CliError> {
    if let Some(g) = args.g {
        return Ok(ConvolutionSpec::from_entries(g, d, n)?);
    }
    Ok(match &args.spec {
        SpecChoice::Default => default_spec(d, n)?,
        SpecChoice::BeamSplitter => beam_splitter_spec(d, n)?,
        SpecChoice::Amplifier => amplifier_spec(d, n)?,
        SpecChoice::File(p) => {
            let spec: ConvolutionSpec = serde_json::from_str(&io::read_text(p)?)
                .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            if spec.system() != System::new(d, n)? {
                return Err(CliError::Usage(format!(
                    "spec file is for d={}, n={} but the states are d={d}, n={n}",
                    spec.system().d(),
                    spec.system().n
                )));
            }
            spec
        }
    })
}

#[derive(Serialize)]
struct GapReport {
    d: u64,
    n: usize,
    magic_gap: f64,
    log_magic_gap: f64,
    pauli_rank: usize,
    is_msps: bool,
    mean_vector: Vec<u64>,
    mean_group: Vec<PhasePoint>,
}

fn points_text(points: &[PhasePoint]) -> String {
    let items: Vec<String> = points.iter().map(|g| format!("(p={:?},q={:?})", g.p, g.q)).collect();
    format!("[{}]", items.join(","))
}

fn cmd_gap(args: &GapArgs) -> Result<Outcome, CliError> {
    let rho = match (&args.state, &args.preset) {
        (Some(path), _) => load_state(&StateSource::File(path.clone()), None, None)?,
        (None, Some(name)) => {
            let sys = System::new(args.sys.d, args.sys.n)?;
            io::build_preset(name.parse()?, sys, args.sys.seed)?
        }
        (None, None) => return Err(CliError::Usage("give --state or --preset".into())),
    };
    if let Some(path) = &args.emit_char {
        write_atomic(path, &char_doc(&rho).to_json())?;
    }
    let sys = rho.system();
    let mv = mean_vector(&rho)?;
    let report = GapReport {
        d: sys.d(),
        n: sys.n,
        magic_gap: magic_gap(&rho),
        log_magic_gap: log_magic_gap(&rho),
        pauli_rank: pauli_rank(&rho),
        is_msps: is_msps(&rho).is_some(),
        mean_vector: mv.k,
        mean_group: mv.generators,
    };
    let text = match args.format {
        Format::Json => to_json_string(&report).expect("gap report serializes"),
        _ => format!(
            "d {}\nn {}\nmagic_gap {}\nlog_magic_gap {}\npauli_rank {}\nis_msps {}\nmean_vector {:?}\nmean_group {}\n",
            report.d,
            report.n,
            fmt_f64(report.magic_gap),
            fmt_f64(report.log_magic_gap),
            report.pauli_rank,
            report.is_msps,
            report.mean_vector,
            points_text(&report.mean_group)
        ),
    };
    Ok(Outcome::ok(text))
}

fn emit(out: &Option<PathBuf>, text: String) -> Result<String, CliError> {
    match out {
        Some(path) => {
            write_atomic(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn cmd_convolve(args: &ConvolveArgs) -> Result<Outcome, CliError> {
    check_conv_dimension(args.sys.d, Some(&args.spec.spec))?;
    let hint = System::new(args.sys.d, args.sys.n)?;
    let rho = load_state(&args.a, Some(hint), args.sys.seed)?;
    let sigma = load_state(&args.b, Some(hint), args.sys.seed.map(|s| s.wrapping_add(1)))?;
    let sys = rho.system();
    check_conv_dimension(sys.d(), Some(&args.spec.spec))?;
    let spec = resolve_spec(&args.spec, sys.d(), sys.n)?;
    let out = convolve(&rho, &sigma, &spec)?;
    let mut pass = true;
    if args.check_duality {
        let via_char = convolve_characteristic(&char_function(&rho), &char_function(&sigma), &spec)?;
        let dev = char_function(&out).max_abs_diff(&via_char);
        eprintln!("duality_deviation {}", fmt_f64(dev));
        pass = dev < DUALITY_TOL;
    }
    let stdout = emit(&args.out, StateDoc::dense(&out).to_json())?;
    Ok(Outcome { stdout, pass })
}

fn cmd_clt(args: &CltArgs) -> Result<Outcome, CliError> {
    check_conv_dimension(args.d, Some(&SpecChoice::BeamSplitter))?;
    let spec = beam_splitter_spec(args.d, args.n)?;
    let rho = match &args.state {
        Some(path) => load_state(&StateSource::File(path.clone()), None, None)?,
        None => io::build_preset(args.preset.parse()?, spec.system(), Some(args.seed))?,
    };
    let series = clt_run(&rho, &spec, args.steps, &CLT_ALPHAS)?;
    if !series.displacement.is_zero() {
        eprintln!("displaced input by {}", points_text(std::slice::from_ref(&series.displacement)));
    }
    let pass = series.max_bound_excess() <= 1e-9;
    let text = match args.format {
        Format::Json => series.to_json(),
        _ => series.to_csv(),
    };
    Ok(Outcome { stdout: emit(&args.out, text)?, pass })
}

fn cmd_suite(args: &SuiteArgs) -> Result<Outcome, CliError> {
    let name: SuiteName = args.name.parse()?;
    if let Some(d) = args.d {
        if name.convolves() {
            let named = matches!(name, SuiteName::Clt).then_some(&SpecChoice::BeamSplitter);
            check_conv_dimension(d, named)?;
        }
        System::new(d, 1)?;
    }
    let cfg =
        SuiteConfig { seed: args.seed, trials: args.trials, d: args.d, jobs: args.jobs.max(1), steps: args.steps };
    let report = run_suite(name, &cfg);
    eprintln!("{} elapsed={:.3}s", report.summary(), report.elapsed.as_secs_f64());
    for r in report.failed_records().take(10) {
        eprintln!(
            "  violation index={} metric={} value={} bound={}",
            r.index,
            r.metric,
            fmt_f64(r.value),
            fmt_f64(r.bound)
        );
    }
    let text = match args.format {
        Format::Csv => report.to_csv(),
        _ => report.to_json(),
    };
    Ok(Outcome { stdout: emit(&args.out, text)?, pass: report.pass })
}

fn cmd_enumerate(args: &EnumerateArgs) -> Result<Outcome, CliError> {
    let sys = System::new(args.d, args.n)?;
    let mut groups: Vec<StabilizerGroup> = enumerate_msps_groups(sys)?;
    if args.what == EnumerateWhat::Stabilizers {
        groups.pop();
    }
    let docs: Vec<StateDoc> = groups.iter().map(|g| StateDoc::msps(sys, g)).collect();
    let text = to_json_string(&docs).expect("documents serialize");
    Ok(Outcome::ok(emit(&args.out, text)?))
}

#[derive(Serialize)]
struct CapacityReport {
    lower: f64,
    upper: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    ensemble: Option<f64>,
}

fn cmd_capacity(args: &CapacityArgs) -> Result<Outcome, CliError> {
    check_conv_dimension(args.sys.d, Some(&args.spec.spec))?;
    let hint = System::new(args.sys.d, args.sys.n)?;
    let sigma = load_state(&args.sigma, Some(hint), args.sys.seed)?;
    let sys = sigma.system();
    check_conv_dimension(sys.d(), Some(&args.spec.spec))?;
    let spec = resolve_spec(&args.spec, sys.d(), sys.n)?;
    let chan = ConvolutionChannel::new(spec, sigma)?;
    let b = holevo_bounds(&chan);
    let ensemble = match &args.rho0 {
        Some(src) => {
            let rho0: DensityMatrix = load_state(src, Some(sys), args.sys.seed.map(|s| s.wrapping_add(1)))?;
            Some(holevo_weyl_ensemble(&chan, &rho0)?)
        }
        None => None,
    };
    let pass = b.lower <= b.upper + 1e-9 && ensemble.is_none_or(|chi| chi <= b.upper + 1e-9);
    let report = CapacityReport { lower: b.lower, upper: b.upper, ensemble };
    let text = to_json_string(&report).expect("capacity report serializes");
    Ok(Outcome { stdout: emit(&args.out, text)?, pass })
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Gap(a) => cmd_gap(a),
        Command::Convolve(a) => cmd_convolve(a),
        Command::Clt(a) => cmd_clt(a),
        Command::Suite(a) => cmd_suite(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::CapacityBounds(a) => cmd_capacity(a),
    }
}

/// Entry point of the `qconv` binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::schema::Preset;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("qconv").chain(args.iter().copied())).unwrap()
    }

    fn code(args: &[&str]) -> u8 {
        match run(&parse(args)) {
            Ok(o) => u8::from(!o.pass),
            Err(e) => e.exit_code(),
        }
    }

    #[test]
    fn gap_presets() {
        let out = run(&parse(&["gap", "--preset", "maximally-mixed", "--d", "3"])).unwrap().stdout;
        assert!(out.contains("magic_gap 0.0000000000000000e0\n"));
        assert!(out.contains("pauli_rank 1\n"));
        let out = run(&parse(&["gap", "--preset", "t-state", "--d", "2"])).unwrap().stdout;
        assert!(out.contains("magic_gap 2.928932188134"));
        let lmg: f64 = out.lines().find_map(|l| l.strip_prefix("log_magic_gap ")).unwrap().parse().unwrap();
        assert!((lmg - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejections() {
        assert_eq!(code(&["convolve", "--a", "preset:zero-ket", "--b", "preset:zero-ket", "--d", "2"]), 2);
        assert_eq!(
            code(&[
                "convolve",
                "--a",
                "preset:zero-ket",
                "--b",
                "preset:zero-ket",
                "--d",
                "5",
                "--spec",
                "beam-splitter"
            ]),
            2
        );
        assert_eq!(code(&["clt", "--d", "3", "--seed", "1"]), 2);
        assert_eq!(code(&["suite", "entropy", "--seed", "1", "--d", "2"]), 2);
        assert_eq!(code(&["suite", "nope", "--seed", "1"]), 2);
        assert_eq!(code(&["gap", "--preset", "random-pure"]), 2);
        assert!(Cli::try_parse_from(["qconv", "suite", "entropy"]).is_err());
    }

    #[test]
    fn explicit_g() {
        let cli =
            parse(&["convolve", "--a", "preset:zero-ket", "--b", "preset:zero-ket", "--g", "1,-1,-1,2", "--d", "5"]);
        let Command::Convolve(args) = &cli.command else { unreachable!() };
        assert_eq!(args.spec.g, Some([[1, -1], [-1, 2]]));
        assert_eq!(code(&["convolve", "--a", "preset:zero-ket", "--b", "preset:zero-ket", "--g", "1,0,1,1"]), 2);
    }

    #[test]
    fn enumerate_counts() {
        let out = run(&parse(&["enumerate", "msps", "--d", "3"])).unwrap().stdout;
        let docs: Vec<StateDoc> = serde_json::from_str(&out).unwrap();
        assert_eq!(docs.len(), 13);
        let out = run(&parse(&["enumerate", "stabilizers", "--d", "3"])).unwrap().stdout;
        let docs: Vec<StateDoc> = serde_json::from_str(&out).unwrap();
        assert_eq!(docs.len(), 12);
    }

    #[test]
    fn capacity_of_pure_stabilizer() {
        let out = run(&parse(&["capacity-bounds", "--sigma", "preset:zero-ket", "--rho0", "preset:zero-ket"])).unwrap();
        assert!(out.pass);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        let log3 = 3f64.log2();
        for key in ["lower", "upper", "ensemble"] {
            assert!((v[key].as_f64().unwrap() - log3).abs() < 1e-9, "{key}");
        }
    }

    #[test]
    fn preset_parse_error_is_usage() {
        let e = CliError::from("bogus".parse::<Preset>().unwrap_err());
        assert_eq!(e.exit_code(), 2);
        assert_eq!(CliError::from(Error::RankDeficient(0.0)).exit_code(), 3);
    }
}
