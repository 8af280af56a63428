//! Key unitaries, the convolution `rho [x] sigma` and the convolutional channel.
//!
//! The key unitary permutes basis states wire by wire,
//! `|i, j> -> |N g11 i - N g10 j, -N g01 i + N g00 j>`, i.e. by `(G^{-1})^T`.
//! Its inverse is `G^T`, which is what the partial trace below walks.

mod holevo;

pub use holevo::{holevo_bounds, holevo_weyl_ensemble, partner_stabilizer_group, HolevoBounds};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::states::DensityMatrix;
use crate::weyl::{CharFunction, PhasePoint, System};
use crate::zmod::{find_amplifier_params, find_beam_splitter_params, GMatrix, PrimeModulus};

/// Parameter matrix and register size of a convolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecDoc", into = "SpecDoc")]
pub struct ConvolutionSpec {
    sys: System,
    g: GMatrix,
}

#[derive(Serialize, Deserialize)]
struct SpecDoc {
    d: u64,
    n: usize,
    #[serde(rename = "G")]
    g: [[i64; 2]; 2],
}

impl TryFrom<SpecDoc> for ConvolutionSpec {
    type Error = Error;
    fn try_from(doc: SpecDoc) -> Result<Self> {
        Self::from_entries(doc.g, doc.d, doc.n)
    }
}

impl From<ConvolutionSpec> for SpecDoc {
    fn from(spec: ConvolutionSpec) -> Self {
        Self { d: spec.sys.d(), n: spec.sys.n, g: spec.g.entries().map(|r| r.map(|x| x as i64)) }
    }
}

pub(crate) fn require_odd(d: u64) -> Result<()> {
    if d == 2 {
        return Err(Error::UnsupportedDimension(
            "convolution is undefined for qubits: no positive invertible G exists mod 2".into(),
        ));
    }
    Ok(())
}

impl ConvolutionSpec {
    pub fn new(g: GMatrix, n: usize) -> Result<Self> {
        let d = g.modulus();
        require_odd(d.get())?;
        Ok(Self { sys: System::new(d.get(), n)?, g })
    }

    pub fn from_entries(entries: [[i64; 2]; 2], d: u64, n: usize) -> Result<Self> {
        require_odd(d)?;
        Self::new(GMatrix::new(entries, PrimeModulus::new(d)?)?, n)
    }

    pub fn system(&self) -> System {
        self.sys
    }

    pub fn g(&self) -> &GMatrix {
        &self.g
    }

    /// `N = det(G)^{-1}`.
    pub fn n_factor(&self) -> u64 {
        self.g.det_inv()
    }

    /// Image of `(i, j)` under the key unitary on one wire.
    pub fn forward_digit(&self, i: u64, j: u64) -> (u64, u64) {
        let d = self.sys.d;
        let inv = self.g.inverse();
        // (G^{-1})^T
        (d.add(d.mul(inv[0][0], i), d.mul(inv[1][0], j)), d.add(d.mul(inv[0][1], i), d.mul(inv[1][1], j)))
    }

    /// Preimage of `(a, b)` on one wire: `G^T (a, b)`.
    pub fn backward_digit(&self, a: u64, b: u64) -> (u64, u64) {
        let d = self.sys.d;
        let g = |r, c| self.g.entry(r, c);
        (d.add(d.mul(g(0, 0), a), d.mul(g(1, 0), b)), d.add(d.mul(g(0, 1), a), d.mul(g(1, 1), b)))
    }

    /// Register indices `(i, j)` mapped by the key unitary to `(a, b)`.
    fn preimage(&self, a: usize, b: usize) -> (usize, usize) {
        let da = self.sys.digits(a);
        let db = self.sys.digits(b);
        let (di, dj): (Vec<u64>, Vec<u64>) = da.iter().zip(&db).map(|(&x, &y)| self.backward_digit(x, y)).unzip();
        (self.sys.index_of(&di), self.sys.index_of(&dj))
    }

    fn check_state(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.system() != self.sys {
            return Err(Error::DimensionMismatch(format!(
                "state on {:?}, convolution on {:?}",
                rho.system(),
                self.sys
            )));
        }
        Ok(())
    }
}

/// `G = [s, t; t, -s]` with `s^2 + t^2 = 1`.
pub fn beam_splitter_spec(d: u64, n: usize) -> Result<ConvolutionSpec> {
    require_odd(d)?;
    let (s, t) = find_beam_splitter_params(PrimeModulus::new(d)?)?;
    let (s, t) = (s as i64, t as i64);
    ConvolutionSpec::from_entries([[s, t], [t, -s]], d, n)
}

/// `G = [l, -m; -m, l]` with `l^2 - m^2 = 1`.
pub fn amplifier_spec(d: u64, n: usize) -> Result<ConvolutionSpec> {
    require_odd(d)?;
    let (l, m) = find_amplifier_params(PrimeModulus::new(d)?)?;
    let (l, m) = (l as i64, m as i64);
    ConvolutionSpec::from_entries([[l, -m], [-m, l]], d, n)
}

/// `G = [1, 1; 1, 2]`, valid for every odd prime.
pub fn default_spec(d: u64, n: usize) -> Result<ConvolutionSpec> {
    ConvolutionSpec::from_entries([[1, 1], [1, 2]], d, n)
}

/// Dense permutation matrix on the two registers, first register most significant.
pub fn key_unitary(spec: &ConvolutionSpec) -> CMatrix {
    let sys = spec.sys;
    let dn = sys.dim();
    let mut u = CMatrix::zeros(dn * dn);
    for i in 0..dn {
        for j in 0..dn {
            let (di, dj) = (sys.digits(i), sys.digits(j));
            let (da, db): (Vec<u64>, Vec<u64>) = di.iter().zip(&dj).map(|(&x, &y)| spec.forward_digit(x, y)).unzip();
            u.set(sys.index_of(&da) * dn + sys.index_of(&db), i * dn + j, C64::new(1.0, 0.0));
        }
    }
    u
}

/// `Tr_B [U (rho (x) sigma) U^dagger]`.
///
/// `U` is a permutation, so entry `(a, a')` of the output is
/// `sum_b rho[i(a,b), i(a',b)] sigma[j(a,b), j(a',b)]`.
pub fn convolve(rho: &DensityMatrix, sigma: &DensityMatrix, spec: &ConvolutionSpec) -> Result<DensityMatrix> {
    spec.check_state(rho)?;
    spec.check_state(sigma)?;
    let dn = spec.sys.dim();
    let pre: Vec<(usize, usize)> = (0..dn * dn).map(|ab| spec.preimage(ab / dn, ab % dn)).collect();
    let (r, s) = (rho.matrix(), sigma.matrix());
    let mut out = CMatrix::from_fn(dn, |a, a2| {
        (0..dn)
            .map(|b| {
                let (i, j) = pre[a * dn + b];
                let (i2, j2) = pre[a2 * dn + b];
                r.get(i, i2) * s.get(j, j2)
            })
            .sum()
    });
    out = out.hermitian_part();
    Ok(DensityMatrix::from_trusted(spec.sys, out))
}

/// `Xi_out(p, q) = Xi_rho(N g11 p, g00 q) Xi_sigma(-N g10 p, g01 q)`.
pub fn convolve_characteristic(
    xi_rho: &CharFunction,
    xi_sigma: &CharFunction,
    spec: &ConvolutionSpec,
) -> Result<CharFunction> {
    let sys = spec.sys;
    if xi_rho.sys != sys || xi_sigma.sys != sys {
        return Err(Error::DimensionMismatch("characteristic tables do not match the spec".into()));
    }
    let d = sys.d;
    let nf = spec.n_factor();
    let g = |r, c| spec.g.entry(r, c);
    let (ap, aq) = (d.mul(nf, g(1, 1)), g(0, 0));
    let (bp, bq) = (d.neg(d.mul(nf, g(1, 0))), g(0, 1));
    let values = sys
        .points()
        .map(|x| {
            let left = PhasePoint::new(
                x.p.iter().map(|&v| d.mul(ap, v)).collect(),
                x.q.iter().map(|&v| d.mul(aq, v)).collect(),
            );
            let right = PhasePoint::new(
                x.p.iter().map(|&v| d.mul(bp, v)).collect(),
                x.q.iter().map(|&v| d.mul(bq, v)).collect(),
            );
            xi_rho.get(&left) * xi_sigma.get(&right)
        })
        .collect();
    CharFunction::new(sys, values)
}

/// `E_sigma(rho) = rho [x] sigma` for a fixed second input.
#[derive(Clone, Debug)]
pub struct ConvolutionChannel {
    pub spec: ConvolutionSpec,
    pub sigma: DensityMatrix,
}

impl ConvolutionChannel {
    pub fn new(spec: ConvolutionSpec, sigma: DensityMatrix) -> Result<Self> {
        spec.check_state(&sigma)?;
        Ok(Self { spec, sigma })
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        convolve(rho, &self.sigma, &self.spec)
    }
}

pub fn channel_apply(chan: &ConvolutionChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    chan.apply(rho)
}
