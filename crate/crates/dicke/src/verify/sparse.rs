use std::collections::HashMap;

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const DROP: f64 = 1e-14;

/// Sparse state over up to 128 qubits; amplitudes below `1e-14` are dropped.
#[derive(Debug, Clone, Default)]
pub struct SparseState {
    pub amplitudes: HashMap<u128, Complex64>,
}

impl SparseState {
    pub fn basis(index: u128) -> Self {
        SparseState { amplitudes: HashMap::from([(index, Complex64::new(1.0, 0.0))]) }
    }

    pub fn amp(&self, index: u128) -> Complex64 {
        self.amplitudes.get(&index).copied().unwrap_or_default()
    }

    /// The single basis index carrying the whole norm, if there is one.
    pub fn as_basis(&self, tol: f64) -> Option<u128> {
        let mut it = self.amplitudes.iter().filter(|(_, a)| a.norm_sqr() > tol);
        let (&i, a) = it.next()?;
        (it.next().is_none() && (a.norm_sqr() - 1.0).abs() <= tol).then_some(i)
    }

    pub fn apply_gate<T: Scalar>(&mut self, g: &Gate<T>) {
        match *g {
            Gate::Cx { c, t } => {
                let (cm, tm) = (1u128 << c, 1u128 << t);
                self.amplitudes = self
                    .amplitudes
                    .drain()
                    .map(|(i, a)| (if i & cm != 0 { i ^ tm } else { i }, a))
                    .collect();
            }
            Gate::U { q, .. } => {
                let m = g.matrix().unwrap();
                let m: [[Complex64; 2]; 2] = [
                    [to64(m[0][0]), to64(m[0][1])],
                    [to64(m[1][0]), to64(m[1][1])],
                ];
                let bit = 1u128 << q;
                let mut out: HashMap<u128, Complex64> = HashMap::with_capacity(self.amplitudes.len() * 2);
                for (&i, &a) in &self.amplitudes {
                    let b = usize::from(i & bit != 0);
                    for (r, row) in m.iter().enumerate() {
                        let v = row[b] * a;
                        if v.norm_sqr() > 0.0 {
                            let j = if r == 1 { i | bit } else { i & !bit };
                            *out.entry(j).or_default() += v;
                        }
                    }
                }
                out.retain(|_, a| a.norm() > DROP);
                self.amplitudes = out;
            }
        }
    }
}

fn to64<T: Scalar>(z: num_complex::Complex<T>) -> Complex64 {
    Complex64::new(z.re.f64(), z.im.f64())
}

pub fn simulate_sparse<T: Scalar>(c: &Circuit<T>, input: u128) -> Result<SparseState> {
    if c.num_qubits > 128 {
        return Err(Error::CapExceeded { num_qubits: c.num_qubits, cap: 128 });
    }
    c.validate()?;
    let mut s = SparseState::basis(input);
    for g in &c.gates {
        s.apply_gate(g);
    }
    Ok(s)
}
