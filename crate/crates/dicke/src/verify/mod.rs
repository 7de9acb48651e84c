//! State-vector simulation, reference states, density matrices and the
//! light-cone auditor.

mod density;
mod lightcone;
mod sparse;

pub use density::{partial_trace, two_qubit_separability, DensityMatrix, Separability};
pub use lightcone::{audit_lower_bound, build_lightcone, reachable, AuditReport, LayerKind, LightConeGraph, ReachableSets};
pub use sparse::{simulate_sparse, SparseState};

use num_complex::Complex;
use rayon::prelude::*;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::util::binom;

/// Default simulator cap in qubits.
pub const SIM_CAP: usize = 20;

const PAR_THRESHOLD: usize = 1 << 14;

/// Dense amplitudes over `2^n` basis states; qubit `i` is bit `i` of the index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    pub num_qubits: usize,
    pub amplitudes: Vec<Complex<T>>,
}

impl<T: Scalar> StateVector<T> {
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); 1 << num_qubits];
        amplitudes[index] = Complex::new(T::one(), T::zero());
        StateVector { num_qubits, amplitudes }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::InvalidParameters(format!("length {len} is not a power of two")));
        }
        Ok(StateVector { num_qubits: len.trailing_zeros() as usize, amplitudes })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr().f64()).sum()
    }

    pub fn inner(&self, other: &StateVector<T>) -> Complex<f64> {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| {
                let p = a.conj() * b;
                Complex::new(p.re.f64(), p.im.f64())
            })
            .sum()
    }

    pub fn amp(&self, index: usize) -> Complex<f64> {
        let a = self.amplitudes[index];
        Complex::new(a.re.f64(), a.im.f64())
    }

    pub fn apply_gate(&mut self, g: &Gate<T>) {
        match *g {
            Gate::Cx { c, t } => self.apply_cx(c, t),
            Gate::U { q, .. } => self.apply_single(q, g.matrix().unwrap()),
        }
    }

    fn apply_single(&mut self, q: usize, m: [[Complex<T>; 2]; 2]) {
        let stride = 1usize << q;
        let block = stride << 1;
        let kernel = |chunk: &mut [Complex<T>]| {
            for base in (0..chunk.len()).step_by(block) {
                for i in base..base + stride {
                    let a = chunk[i];
                    let b = chunk[i + stride];
                    chunk[i] = m[0][0] * a + m[0][1] * b;
                    chunk[i + stride] = m[1][0] * a + m[1][1] * b;
                }
            }
        };
        let len = self.amplitudes.len();
        if len >= PAR_THRESHOLD {
            let chunk = block.max(len / 64);
            self.amplitudes.par_chunks_mut(chunk).for_each(kernel);
        } else {
            kernel(&mut self.amplitudes);
        }
    }

    fn apply_cx(&mut self, c: usize, t: usize) {
        let (cm, tm) = (1usize << c, 1usize << t);
        let block = 1usize << (c.max(t) + 1);
        let kernel = |offset: usize, chunk: &mut [Complex<T>]| {
            for i in 0..chunk.len() {
                let g = offset + i;
                if g & cm != 0 && g & tm == 0 {
                    chunk.swap(i, i + tm);
                }
            }
        };
        let len = self.amplitudes.len();
        if len >= PAR_THRESHOLD {
            let chunk = block.max(len / 64);
            self.amplitudes
                .par_chunks_mut(chunk)
                .enumerate()
                .for_each(|(j, ch)| kernel(j * chunk, ch));
        } else {
            kernel(0, &mut self.amplitudes);
        }
    }
}

/// Evolves `input` through `c` under the default qubit cap.
pub fn simulate<T: Scalar>(c: &Circuit<T>, input: &StateVector<T>) -> Result<StateVector<T>> {
    simulate_capped(c, input, SIM_CAP)
}

pub fn simulate_capped<T: Scalar>(c: &Circuit<T>, input: &StateVector<T>, cap: usize) -> Result<StateVector<T>> {
    if c.num_qubits > cap {
        return Err(Error::CapExceeded { num_qubits: c.num_qubits, cap });
    }
    if input.num_qubits != c.num_qubits {
        return Err(Error::QubitCountMismatch(input.num_qubits, c.num_qubits));
    }
    c.validate()?;
    let mut s = input.clone();
    for g in &c.gates {
        s.apply_gate(g);
    }
    Ok(s)
}

/// Evolves the basis state `|index⟩`.
pub fn simulate_basis<T: Scalar>(c: &Circuit<T>, index: usize) -> Result<StateVector<T>> {
    if c.num_qubits > SIM_CAP {
        return Err(Error::CapExceeded { num_qubits: c.num_qubits, cap: SIM_CAP });
    }
    simulate(c, &StateVector::basis(c.num_qubits, index))
}

/// Basis index with ones exactly on `qubits`.
pub fn index_of(qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |acc, &q| acc | (1 << q))
}

/// `|D^n_ℓ⟩`: amplitude `1/√C(n,ℓ)` on every weight-`ℓ` string.
pub fn dicke_reference<T: Scalar>(n: usize, l: usize) -> Result<StateVector<T>> {
    if l > n {
        return Err(Error::InvalidParameters(format!("weight {l} exceeds {n} qubits")));
    }
    if n > SIM_CAP {
        return Err(Error::CapExceeded { num_qubits: n, cap: SIM_CAP });
    }
    let a = T::of(1.0 / (binom(n, l) as f64).sqrt());
    let amplitudes = (0..1usize << n)
        .map(|x| {
            if x.count_ones() as usize == l {
                Complex::new(a, T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
        .collect();
    Ok(StateVector { num_qubits: n, amplitudes })
}

/// `Σ_ℓ α_ℓ |D^n_ℓ⟩`.
pub fn symmetric_reference<T: Scalar>(n: usize, alpha: &[Complex<f64>]) -> Result<StateVector<T>> {
    if alpha.len() > n + 1 {
        return Err(Error::InvalidParameters("more weights than qubits".into()));
    }
    if n > SIM_CAP {
        return Err(Error::CapExceeded { num_qubits: n, cap: SIM_CAP });
    }
    let amplitudes = (0..1usize << n)
        .map(|x| {
            let w = x.count_ones() as usize;
            let a = alpha.get(w).copied().unwrap_or_default() / (binom(n, w) as f64).sqrt();
            Complex::new(T::of(a.re), T::of(a.im))
        })
        .collect();
    Ok(StateVector { num_qubits: n, amplitudes })
}

/// `|⟨a|b⟩|²`.
pub fn fidelity<T: Scalar>(a: &StateVector<T>, b: &StateVector<T>) -> Result<f64> {
    if a.num_qubits != b.num_qubits {
        return Err(Error::QubitCountMismatch(a.num_qubits, b.num_qubits));
    }
    Ok(a.inner(b).norm_sqr().min(1.0))
}
