//! Mean states, magic gap and mean-value vectors.
//!
//! Everything is read off the characteristic table. A value counts as
//! unit modulus when `||Xi| - 1| <= 1e-9`; the same threshold drives the
//! mean-state truncation and the gap maximization, so `MG = 0` exactly when
//! the state passes [`is_msps`](crate::states::is_msps).

pub mod circuit;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::{nearest_root, DensityMatrix, UNIT_TOL};
use crate::weyl::{char_function, inverse_char, symplectic, CharFunction, PhasePoint, SUPPORT_TOL};
use crate::zmod::{self, solve_mod_linear};

/// Max distance of a unit-modulus value from a `d`-th root of unity.
pub const ROOT_TOL: f64 = 1e-8;

fn is_unit(z: f64) -> bool {
    (z - 1.0).abs() <= UNIT_TOL
}

/// Keeps the unit-modulus part of a characteristic table.
pub fn truncate_to_unit(xi: &CharFunction) -> CharFunction {
    let values = xi.values.iter().map(|&v| if is_unit(v.norm()) { v } else { Default::default() }).collect();
    CharFunction { sys: xi.sys, values }
}

/// Mean state `M(rho)`: the inverse transform of the unit-modulus part of
/// the characteristic table.
pub fn mean_state(rho: &DensityMatrix) -> DensityMatrix {
    mean_state_of(&char_function(rho))
}

pub fn mean_state_of(xi: &CharFunction) -> DensityMatrix {
    DensityMatrix::from_trusted(xi.sys, inverse_char(&truncate_to_unit(xi)))
}

/// Largest `|Xi|` on the support strictly below 1, if any.
fn second_modulus(xi: &CharFunction) -> Option<f64> {
    xi.values.iter().map(|v| v.norm()).filter(|&m| m > SUPPORT_TOL && !is_unit(m)).max_by(f64::total_cmp)
}

pub fn magic_gap_of(xi: &CharFunction) -> f64 {
    second_modulus(xi).map_or(0.0, |m| 1.0 - m)
}

/// `MG(rho) = 1 - max{|Xi(x)| : x in Supp, |Xi(x)| != 1}`, or 0 if that set is empty.
pub fn magic_gap(rho: &DensityMatrix) -> f64 {
    magic_gap_of(&char_function(rho))
}

pub fn log_magic_gap_of(xi: &CharFunction) -> f64 {
    second_modulus(xi).map_or(0.0, |m| -m.log2())
}

/// Logarithmic magic gap in bits.
pub fn log_magic_gap(rho: &DensityMatrix) -> f64 {
    log_magic_gap_of(&char_function(rho))
}

/// Upper bound `1 - sqrt((d^n Tr rho^2 - K) / (R_P - K))` on the magic gap,
/// with `K` the number of unit-modulus points. `None` when `R_P = K`.
pub fn magic_gap_upper_bound(rho: &DensityMatrix) -> Option<f64> {
    let xi = char_function(rho);
    let unit = xi.values.iter().filter(|v| is_unit(v.norm())).count() as f64;
    let rank = xi.support().len() as f64;
    if rank <= unit {
        return None;
    }
    let dn = rho.dim() as f64;
    let ratio = (dn * rho.purity() - unit) / (rank - unit);
    Some(1.0 - ratio.max(0.0).sqrt())
}

/// Mean-value vector: `Xi(g_i) = xi^{k_i}` on the row-echelon generators of
/// the mean state's group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeanVector {
    pub generators: Vec<PhasePoint>,
    pub k: Vec<u64>,
}

impl MeanVector {
    pub fn is_zero(&self) -> bool {
        self.k.iter().all(|&k| k == 0)
    }
}

pub fn mean_vector(rho: &DensityMatrix) -> Result<MeanVector> {
    mean_vector_of(&char_function(rho))
}

pub fn mean_vector_of(xi: &CharFunction) -> Result<MeanVector> {
    let sys = xi.sys;
    let rows: Vec<Vec<u64>> =
        (0..xi.values.len()).filter(|&i| is_unit(xi.values[i].norm())).map(|i| sys.point_at(i).to_vec()).collect();
    let (basis, _) = zmod::row_reduce(&rows, sys.d);
    let generators: Vec<PhasePoint> = basis.iter().map(|r| PhasePoint::from_vec(r)).collect();
    let mut k = Vec::with_capacity(generators.len());
    for g in &generators {
        let (e, dist) = nearest_root(&sys, xi.get(g));
        if dist > ROOT_TOL {
            return Err(Error::PhaseNotRoot(dist));
        }
        k.push(e);
    }
    Ok(MeanVector { generators, k })
}

/// Displacement `a` with `w(a) rho w(a)^dagger` zero-mean, and that state.
///
/// Conjugation multiplies `Xi(x)` by `xi^{<a, x>}`, so `a` solves
/// `<a, g_i> = -k_i` over `Z_d`.
pub fn make_zero_mean(rho: &DensityMatrix) -> Result<(PhasePoint, DensityMatrix)> {
    let sys = rho.system();
    let d = sys.d;
    let mv = mean_vector(rho)?;
    if mv.is_zero() {
        return Ok((PhasePoint::zero(sys.n), rho.clone()));
    }
    // <a, g> = a_p . g_q - a_q . g_p
    let coeffs: Vec<Vec<u64>> =
        mv.generators.iter().map(|g| g.q.iter().copied().chain(g.p.iter().map(|&x| d.neg(x))).collect()).collect();
    let rhs: Vec<u64> = mv.k.iter().map(|&k| d.neg(k)).collect();
    let a = PhasePoint::from_vec(&solve_mod_linear(&coeffs, &rhs, d)?);
    debug_assert!(mv.generators.iter().zip(&mv.k).all(|(g, &k)| d.add(symplectic(&a, g, d), k) == 0));
    let shifted = rho.displace(&a);
    Ok((a, shifted))
}
