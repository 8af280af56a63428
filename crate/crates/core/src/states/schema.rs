//! JSON state documents shared by the library and the CLI.
//!
//! ```json
//! { "d": 3, "n": 1, "kind": "dense", "re": [...], "im": [...] }
//! { "d": 3, "n": 1, "kind": "char", "re": [...], "im": [...] }
//! { "d": 3, "n": 1, "kind": "msps", "generators": [{"p": [1], "q": [0]}], "phases": [0] }
//! { "d": 2, "n": 1, "kind": "preset", "name": "t-state" }
//! ```
//!
//! Dense payloads are row-major; characteristic payloads follow the
//! row-major `(p, q)` phase-point order.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::weyl::{char_function, inverse_char, CharFunction, PhasePoint, System};

use super::{msps_from_group, random_density, t_state, DensityMatrix, StabilizerGroup};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDoc {
    pub d: u64,
    pub n: usize,
    #[serde(flatten)]
    pub payload: Payload,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Payload {
    Dense {
        re: Vec<f64>,
        im: Vec<f64>,
    },
    Char {
        re: Vec<f64>,
        im: Vec<f64>,
    },
    Msps {
        generators: Vec<PhasePoint>,
        phases: Vec<u64>,
    },
    Preset {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    MaximallyMixed,
    ZeroKet,
    /// Qubit magic state, tensored over all wires.
    TState,
    RandomPure,
    RandomMixed,
}

impl Preset {
    pub const NAMES: [&'static str; 5] = ["maximally-mixed", "zero-ket", "t-state", "random-pure", "random-mixed"];

    pub fn needs_seed(self) -> bool {
        matches!(self, Self::RandomPure | Self::RandomMixed)
    }

    pub fn build(self, sys: System, seed: Option<u64>) -> Result<DensityMatrix> {
        let seeded = |rank| {
            let seed = seed.ok_or_else(|| Error::Parse("random presets need a seed".into()))?;
            random_density(seed, sys, rank)
        };
        match self {
            Self::MaximallyMixed => Ok(DensityMatrix::maximally_mixed(sys)),
            Self::ZeroKet => Ok(DensityMatrix::basis(sys, 0)),
            Self::TState => {
                if sys.d() != 2 {
                    return Err(Error::UnsupportedDimension("t-state is a qubit preset (d = 2)".into()));
                }
                let t = t_state();
                (1..sys.n).try_fold(t.clone(), |acc, _| acc.tensor(&t))
            }
            Self::RandomPure => seeded(1),
            Self::RandomMixed => seeded(sys.dim()),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "maximally-mixed" => Self::MaximallyMixed,
            "zero-ket" => Self::ZeroKet,
            "t-state" => Self::TState,
            "random-pure" => Self::RandomPure,
            "random-mixed" => Self::RandomMixed,
            other => {
                return Err(Error::Parse(format!(
                    "unknown preset {other:?}; expected one of {}",
                    Self::NAMES.join(", ")
                )))
            }
        })
    }
}

fn split(values: &[C64]) -> (Vec<f64>, Vec<f64>) {
    (values.iter().map(|z| z.re).collect(), values.iter().map(|z| z.im).collect())
}

fn join(re: &[f64], im: &[f64]) -> Result<Vec<C64>> {
    if re.len() != im.len() {
        return Err(Error::Parse(format!("re has {} entries, im has {}", re.len(), im.len())));
    }
    Ok(re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect())
}

impl StateDoc {
    pub fn dense(rho: &DensityMatrix) -> Self {
        let sys = rho.system();
        let (re, im) = split(&rho.matrix().to_row_major());
        Self { d: sys.d(), n: sys.n, payload: Payload::Dense { re, im } }
    }

    pub fn char(xi: &CharFunction) -> Self {
        let (re, im) = split(&xi.values);
        Self { d: xi.sys.d(), n: xi.sys.n, payload: Payload::Char { re, im } }
    }

    pub fn msps(sys: System, group: &StabilizerGroup) -> Self {
        Self {
            d: sys.d(),
            n: sys.n,
            payload: Payload::Msps { generators: group.generators.clone(), phases: group.phases.clone() },
        }
    }

    pub fn system(&self) -> Result<System> {
        System::new(self.d, self.n)
    }

    /// Builds and validates the state. Invariant violations surface as
    /// [`Error::InvalidState`] with the measured deviation.
    pub fn to_state(&self) -> Result<DensityMatrix> {
        let sys = self.system()?;
        match &self.payload {
            Payload::Dense { re, im } => {
                let m = CMatrix::from_row_major(sys.dim(), &join(re, im)?)?;
                DensityMatrix::new(sys, m)
            }
            Payload::Char { re, im } => {
                let xi = CharFunction::new(sys, join(re, im)?)?;
                DensityMatrix::new(sys, inverse_char(&xi))
            }
            Payload::Msps { generators, phases } => {
                msps_from_group(&StabilizerGroup::new(generators.clone(), phases.clone()), sys)
            }
            Payload::Preset { name, seed } => name.parse::<Preset>()?.build(sys, *seed),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        crate::jsonfmt::to_json_string(self).expect("state documents serialize")
    }
}

/// Characteristic-table document of a state.
pub fn char_doc(rho: &DensityMatrix) -> StateDoc {
    StateDoc::char(&char_function(rho))
}
