//! Seeded random Clifford and Clifford+T circuits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{tensor, CMatrix, C64};
use crate::weyl::{fourier_gate, phase_gate, System};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gate {
    /// Fourier gate; the Hadamard for qubits.
    F(usize),
    /// Phase gate `S`.
    S(usize),
    /// `|a, b> -> |a, a + b>` on (control, target); CNOT for qubits.
    Sum(usize, usize),
    /// `diag(1, e^{i pi / 4})`, qubits only.
    T(usize),
}

impl Gate {
    pub fn is_clifford(self) -> bool {
        !matches!(self, Gate::T(_))
    }

    fn on_wire(sys: &System, wire: usize, g: &CMatrix) -> CMatrix {
        let d = sys.d() as usize;
        let left = CMatrix::identity(d.pow(wire as u32));
        let right = CMatrix::identity(d.pow((sys.n - wire - 1) as u32));
        tensor(&tensor(&left, g), &right)
    }

    pub fn matrix(self, sys: &System) -> CMatrix {
        match self {
            Gate::F(w) => Self::on_wire(sys, w, &fourier_gate(sys.d)),
            Gate::S(w) => Self::on_wire(sys, w, &phase_gate(sys.d)),
            Gate::T(w) => {
                let t = CMatrix::from_fn(2, |i, j| match (i, j) {
                    (0, 0) => C64::new(1.0, 0.0),
                    (1, 1) => C64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
                    _ => C64::default(),
                });
                Self::on_wire(sys, w, &t)
            }
            Gate::Sum(c, t) => {
                let dim = sys.dim();
                let mut m = CMatrix::zeros(dim);
                for k in 0..dim {
                    let mut digits = sys.digits(k);
                    digits[t] = sys.d.add(digits[t], digits[c]);
                    m.set(sys.index_of(&digits), k, C64::new(1.0, 0.0));
                }
                m
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub sys: System,
    /// Applied left to right.
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn t_count(&self) -> usize {
        self.gates.iter().filter(|g| !g.is_clifford()).count()
    }

    pub fn unitary(&self) -> CMatrix {
        self.gates.iter().fold(CMatrix::identity(self.sys.dim()), |u, g| &g.matrix(&self.sys) * &u)
    }
}

fn random_clifford_gate<R: Rng>(rng: &mut R, n: usize) -> Gate {
    let choices = if n > 1 { 3 } else { 2 };
    match rng.random_range(0..choices) {
        0 => Gate::F(rng.random_range(0..n)),
        1 => Gate::S(rng.random_range(0..n)),
        _ => {
            let c = rng.random_range(0..n);
            let t = (c + rng.random_range(1..n)) % n;
            Gate::Sum(c, t)
        }
    }
}

/// Word of `len` random generators `F`, `S`, `SUM`.
pub fn random_clifford_circuit<R: Rng>(rng: &mut R, sys: System, len: usize) -> Circuit {
    let gates = (0..len).map(|_| random_clifford_gate(rng, sys.n)).collect();
    Circuit { sys, gates }
}

pub fn random_clifford<R: Rng>(rng: &mut R, sys: System, len: usize) -> CMatrix {
    random_clifford_circuit(rng, sys, len).unitary()
}

/// Qubit circuit with exactly `t_count` T gates, each preceded and the last
/// one followed by a random Clifford word of length `4n + 2`.
pub fn clifford_t_circuit(seed: u64, n: usize, t_count: usize) -> Result<Circuit> {
    if !(1..=2).contains(&n) {
        return Err(Error::UnsupportedScale(format!("Clifford+T circuits support n in {{1, 2}}, got {n}")));
    }
    let sys = System::new(2, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let word = 4 * n + 2;
    let mut gates = Vec::with_capacity((t_count + 1) * (word + 1));
    for layer in 0..=t_count {
        gates.extend((0..word).map(|_| random_clifford_gate(&mut rng, n)));
        if layer < t_count {
            gates.push(Gate::T(rng.random_range(0..n)));
        }
    }
    Ok(Circuit { sys, gates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::is_clifford;

    #[test]
    fn clifford_words_are_clifford() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (d, n) in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)] {
            let sys = System::new(d, n).unwrap();
            for _ in 0..3 {
                let u = random_clifford(&mut rng, sys, 12);
                assert!(is_clifford(&u, &sys).unwrap(), "d={d} n={n}");
            }
        }
    }

    #[test]
    fn cnot_matrix() {
        let sys = System::new(2, 2).unwrap();
        let m = Gate::Sum(0, 1).matrix(&sys);
        // |10> -> |11>
        assert_eq!(m.get(3, 2), C64::new(1.0, 0.0));
        assert_eq!(m.get(2, 3), C64::new(1.0, 0.0));
        assert_eq!(m.get(0, 0), C64::new(1.0, 0.0));
    }

    #[test]
    fn t_count_is_exact_and_seeded() {
        for n in 1..=2 {
            for nt in 0..6 {
                let c = clifford_t_circuit(11, n, nt).unwrap();
                assert_eq!(c.t_count(), nt);
                assert_eq!(c, clifford_t_circuit(11, n, nt).unwrap());
                assert!(c.unitary().unitarity_deviation() < 1e-12);
            }
        }
        assert!(clifford_t_circuit(0, 3, 1).is_err());
        let single_t = Circuit { sys: System::new(2, 1).unwrap(), gates: vec![Gate::T(0)] };
        assert!(!is_clifford(&single_t.unitary(), &single_t.sys).unwrap());
    }
}
