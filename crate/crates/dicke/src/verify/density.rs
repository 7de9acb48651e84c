use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;

use super::StateVector;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense density matrix over the kept qubits; kept qubit `keep[i]` is bit `i`
/// of the row/column index.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub dim: usize,
    pub data: Vec<Complex<f64>>,
}

impl DensityMatrix {
    pub fn get(&self, r: usize, c: usize) -> Complex<f64> {
        self.data[r * self.dim + c]
    }

    pub fn from_real(rows: &[Vec<f64>]) -> Self {
        let dim = rows.len();
        let data = rows.iter().flatten().map(|&x| Complex::new(x, 0.0)).collect();
        DensityMatrix { dim, data }
    }

    pub fn trace(&self) -> Complex<f64> {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    fn to_matrix(&self) -> DMatrix<Complex<f64>> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.to_matrix()).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Checks Hermiticity, unit trace and positive semidefiniteness.
    pub fn validate(&self, tol: f64) -> Result<()> {
        for r in 0..self.dim {
            for c in 0..self.dim {
                if (self.get(r, c) - self.get(c, r).conj()).norm() > tol {
                    return Err(Error::InvalidParameters("density matrix is not Hermitian".into()));
                }
            }
        }
        if (self.trace() - Complex::new(1.0, 0.0)).norm() > tol {
            return Err(Error::InvalidParameters("density matrix trace is not 1".into()));
        }
        if self.eigenvalues()[0] < -tol {
            return Err(Error::InvalidParameters("density matrix is not positive semidefinite".into()));
        }
        Ok(())
    }

    fn kron(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
        // Low bit belongs to `a`.
        let dim = a.dim * b.dim;
        let mut data = vec![Complex::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[r * dim + c] = a.get(r % a.dim, c % a.dim) * b.get(r / a.dim, c / a.dim);
            }
        }
        DensityMatrix { dim, data }
    }

    fn two_qubit_marginal(&self, keep_low: bool) -> DensityMatrix {
        let mut data = vec![Complex::new(0.0, 0.0); 4];
        for r in 0..2 {
            for c in 0..2 {
                data[r * 2 + c] = (0..2)
                    .map(|o| {
                        let (ri, ci) = if keep_low { (r | o << 1, c | o << 1) } else { (o | r << 1, o | c << 1) };
                        self.get(ri, ci)
                    })
                    .sum();
            }
        }
        DensityMatrix { dim: 2, data }
    }

    fn partial_transpose_high(&self) -> DensityMatrix {
        let mut data = self.data.clone();
        for r in 0..4 {
            for c in 0..4 {
                let (r2, c2) = ((r & 1) | (c & 2), (c & 1) | (r & 2));
                data[r2 * 4 + c2] = self.get(r, c);
            }
        }
        DensityMatrix { dim: 4, data }
    }

    /// Purity `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                acc += (self.get(r, c) * self.get(c, r)).re;
            }
        }
        acc
    }
}

/// Reduced density matrix of `s` on the qubits in `keep`.
pub fn partial_trace<T: Scalar>(s: &StateVector<T>, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() || keep.iter().any(|&q| q >= s.num_qubits) || !crate::util::all_distinct(keep) {
        return Err(Error::InvalidParameters("invalid kept qubit set".into()));
    }
    let n = s.num_qubits;
    let rest: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let dim = 1usize << keep.len();
    let spread = |bits: usize, qubits: &[usize]| {
        qubits.iter().enumerate().fold(0usize, |acc, (i, &q)| acc | (((bits >> i) & 1) << q))
    };
    let keep_idx: Vec<usize> = (0..dim).map(|a| spread(a, keep)).collect();
    let mut data = vec![Complex::new(0.0, 0.0); dim * dim];
    for r in 0..1usize << rest.len() {
        let base = spread(r, &rest);
        let col: Vec<Complex<f64>> = keep_idx.iter().map(|&k| s.amp(base | k)).collect();
        for a in 0..dim {
            if col[a].norm_sqr() == 0.0 {
                continue;
            }
            for b in 0..dim {
                data[a * dim + b] += col[a] * col[b].conj();
            }
        }
    }
    Ok(DensityMatrix { dim, data })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Separability {
    /// Tensor product of two pure states.
    Product,
    /// Separable but not a product of pure states.
    SeparableMixed,
    /// Partial transpose has a negative eigenvalue.
    Entangled,
}

impl DensityMatrix {
    /// Whether the two-qubit `ρ` equals the tensor product of its marginals.
    pub fn is_tensor_product(&self, tol: f64) -> bool {
        let prod = DensityMatrix::kron(&self.two_qubit_marginal(true), &self.two_qubit_marginal(false));
        self.max_abs_diff(&prod) <= tol
    }

    /// Smallest eigenvalue of the partial transpose on the high qubit.
    pub fn min_partial_transpose_eigenvalue(&self) -> f64 {
        self.partial_transpose_high().eigenvalues()[0]
    }
}

/// Classifies a two-qubit density matrix.
pub fn two_qubit_separability(rho: &DensityMatrix) -> Result<Separability> {
    if rho.dim != 4 {
        return Err(Error::InvalidParameters("expected a 4x4 density matrix".into()));
    }
    rho.validate(1e-9)?;
    if rho.min_partial_transpose_eigenvalue() < -1e-12 {
        return Ok(Separability::Entangled);
    }
    if rho.is_tensor_product(1e-9) && (rho.purity() - 1.0).abs() < 1e-9 {
        Ok(Separability::Product)
    } else {
        Ok(Separability::SeparableMixed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::verify::{dicke_reference, simulate_basis};

    #[test]
    fn partial_trace_of_product() {
        let mut c = Circuit::<f64>::new(2);
        c.h(1);
        let s = simulate_basis(&c, 0).unwrap();
        let r = partial_trace(&s, &[1]).unwrap();
        for i in 0..4 {
            assert!((r.data[i].re - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn dicke_4_2_reduced_matrix() {
        let d = dicke_reference::<f64>(4, 2).unwrap();
        let r = partial_trace(&d, &[0, 3]).unwrap();
        let want = DensityMatrix::from_real(&[
            vec![1.0 / 6.0, 0.0, 0.0, 0.0],
            vec![0.0, 2.0 / 6.0, 2.0 / 6.0, 0.0],
            vec![0.0, 2.0 / 6.0, 2.0 / 6.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0 / 6.0],
        ]);
        assert!(r.max_abs_diff(&want) < 1e-14);
        r.validate(1e-10).unwrap();
        assert_eq!(two_qubit_separability(&r).unwrap(), Separability::Entangled);
        assert!(!r.is_tensor_product(1e-9));
    }

    #[test]
    fn classification_examples() {
        let mut pure00 = vec![vec![0.0; 4]; 4];
        pure00[0][0] = 1.0;
        assert_eq!(two_qubit_separability(&DensityMatrix::from_real(&pure00)).unwrap(), Separability::Product);
        let mixed: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| if i == j { 0.25 } else { 0.0 }).collect()).collect();
        let m = DensityMatrix::from_real(&mixed);
        assert_eq!(two_qubit_separability(&m).unwrap(), Separability::SeparableMixed);
        assert!(m.is_tensor_product(1e-12));
        let mut bad = pure00.clone();
        bad[0][0] = 2.0;
        assert!(two_qubit_separability(&DensityMatrix::from_real(&bad)).is_err());
    }

    #[test]
    fn bell_state_is_entangled() {
        let mut c = Circuit::<f64>::new(2);
        c.h(0);
        c.cx(0, 1);
        let s = simulate_basis(&c, 0).unwrap();
        let r = partial_trace(&s, &[0, 1]).unwrap();
        assert_eq!(two_qubit_separability(&r).unwrap(), Separability::Entangled);
        assert!((r.min_partial_transpose_eigenvalue() + 0.5).abs() < 1e-12);
    }
}
