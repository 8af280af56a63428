//! Exact arithmetic over `Z_d` for small primes `d`.
//!
//! Elements are plain `u64` canonical residues in `[0, d)`. Every operation
//! reduces eagerly, so results are bit-exact and platform independent.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime modulus, checked by trial division at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(d: u64) -> Result<Self> {
        if is_prime(d) {
            Ok(Self(d))
        } else {
            Err(Error::NotPrime(d))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    #[inline]
    pub fn reduce(self, a: i64) -> u64 {
        a.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.0
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.0 - b % self.0) % self.0
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a * b) % self.0
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        (self.0 - a % self.0) % self.0
    }

    pub fn inv(self, a: u64) -> Result<u64> {
        mod_inverse(a, self)
    }
}

impl TryFrom<u64> for PrimeModulus {
    type Error = Error;
    fn try_from(d: u64) -> Result<Self> {
        Self::new(d)
    }
}

impl From<PrimeModulus> for u64 {
    fn from(d: PrimeModulus) -> u64 {
        d.0
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn is_prime(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= d {
        if d.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Multiplicative inverse in `Z_d`.
pub fn mod_inverse(a: u64, d: PrimeModulus) -> Result<u64> {
    let m = d.get();
    let a = a % m;
    if a == 0 {
        return Err(Error::ZeroElement(a, m));
    }
    // extended Euclid
    let (mut r0, mut r1) = (m as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    Ok(d.reduce(t0))
}

/// Reduced row echelon form of `rows` over `Z_d`. Returns the nonzero rows
/// (each with leading entry 1) and the pivot column of each.
pub fn row_reduce(rows: &[Vec<u64>], d: PrimeModulus) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % d.get()).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(row, p);
        let inv = mod_inverse(m[row][col], d).expect("pivot is nonzero");
        for x in m[row].iter_mut() {
            *x = d.mul(*x, inv);
        }
        for i in 0..m.len() {
            if i != row && m[i][col] != 0 {
                let f = m[i][col];
                for j in 0..cols {
                    let sub = d.mul(f, m[row][j]);
                    m[i][j] = d.sub(m[i][j], sub);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    (m, pivots)
}

pub fn rank(rows: &[Vec<u64>], d: PrimeModulus) -> usize {
    row_reduce(rows, d).0.len()
}

/// Solves `A x = b` over `Z_d` by Gaussian elimination. Free variables are
/// set to zero, so the returned solution is deterministic.
pub fn solve_mod_linear(a: &[Vec<u64>], b: &[u64], d: PrimeModulus) -> Result<Vec<u64>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("{} equations but {} right-hand sides", a.len(), b.len())));
    }
    let cols = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch("ragged coefficient matrix".into()));
    }
    let augmented: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut r = r.clone();
            r.push(bi);
            r
        })
        .collect();
    let (reduced, pivots) = row_reduce(&augmented, d);
    if pivots.last() == Some(&cols) {
        return Err(Error::NoSolution("inconsistent linear system".into()));
    }
    let mut x = vec![0; cols];
    for (r, &p) in reduced.iter().zip(&pivots) {
        x[p] = r[cols];
    }
    Ok(x)
}

fn search_pairs(d: PrimeModulus, f: impl Fn(u64, u64) -> bool) -> Option<(u64, u64)> {
    let m = d.get();
    (1..m).flat_map(|a| (1..m).map(move |b| (a, b))).find(|&(a, b)| f(a, b))
}

/// Lexicographically smallest `(s, t)`, both nonzero, with `s^2 + t^2 = 1`.
pub fn find_beam_splitter_params(d: PrimeModulus) -> Result<(u64, u64)> {
    if !d.is_odd() {
        return Err(Error::UnsupportedDimension("beam splitter needs an odd prime".into()));
    }
    search_pairs(d, |s, t| d.add(d.mul(s, s), d.mul(t, t)) == 1)
        .ok_or_else(|| Error::NoSolution(format!("no nonzero s, t with s^2+t^2 = 1 mod {d}")))
}

/// Lexicographically smallest `(l, m)`, both nonzero, with `l^2 - m^2 = 1`.
pub fn find_amplifier_params(d: PrimeModulus) -> Result<(u64, u64)> {
    if !d.is_odd() {
        return Err(Error::UnsupportedDimension("amplifier needs an odd prime".into()));
    }
    search_pairs(d, |l, m| d.sub(d.mul(l, l), d.mul(m, m)) == 1)
        .ok_or_else(|| Error::NoSolution(format!("no nonzero l, m with l^2-m^2 = 1 mod {d}")))
}

/// A positive (no zero entry) invertible 2x2 matrix over `Z_d`, with the
/// inverse determinant `N = det(G)^{-1}` cached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GMatrix {
    d: PrimeModulus,
    g: [[u64; 2]; 2],
    det_inv: u64,
}

impl GMatrix {
    pub fn new(entries: [[i64; 2]; 2], d: PrimeModulus) -> Result<Self> {
        let g = entries.map(|r| r.map(|x| d.reduce(x)));
        let det = d.sub(d.mul(g[0][0], g[1][1]), d.mul(g[0][1], g[1][0]));
        if det == 0 {
            return Err(Error::NotInvertible { d: d.get(), det });
        }
        if g.iter().flatten().any(|&x| x == 0) {
            return Err(Error::NotPositive(d.get()));
        }
        let det_inv = mod_inverse(det, d)?;
        Ok(Self { d, g, det_inv })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.d
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.g[i][j]
    }

    pub fn entries(&self) -> [[u64; 2]; 2] {
        self.g
    }

    pub fn det(&self) -> u64 {
        let d = self.d;
        d.sub(d.mul(self.g[0][0], self.g[1][1]), d.mul(self.g[0][1], self.g[1][0]))
    }

    /// `N = det(G)^{-1}`.
    pub fn det_inv(&self) -> u64 {
        self.det_inv
    }

    /// `G^{-1} = N [g11, -g01; -g10, g00]`.
    pub fn inverse(&self) -> [[u64; 2]; 2] {
        let d = self.d;
        let n = self.det_inv;
        let g = &self.g;
        [[d.mul(n, g[1][1]), d.mul(n, d.neg(g[0][1]))], [d.mul(n, d.neg(g[1][0])), d.mul(n, g[0][0])]]
    }
}
