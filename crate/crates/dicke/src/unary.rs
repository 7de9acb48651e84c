//! Path-constrained building blocks: the Dicke state unitary, the divide
//! unitary on `2k` adjacent qubits and unary amplitude preparation.

use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::primitives::emit_ucry;
use crate::scalar::Scalar;
use crate::util::{all_distinct, ln_binom};

/// Divide unitary parameters. `left[j]` and `right[j]` hold position `s_{j+1}`
/// of `S1` and `S2`; on a path the expected layout is
/// `left[k-1], …, left[0], right[k-1], …, right[0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivideSpec {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl DivideSpec {
    pub fn new(n: usize, m: usize, k: usize, left: Vec<usize>, right: Vec<usize>) -> Result<Self> {
        let s = DivideSpec { n, m, k, left, right };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < self.k || self.n < self.m || self.n - self.m < self.k {
            return Err(Error::InvalidParameters(format!(
                "divide needs m >= k and n - m >= k (n={}, m={}, k={})",
                self.n, self.m, self.k
            )));
        }
        if self.left.len() != self.k || self.right.len() != self.k {
            return Err(Error::InvalidParameters("divide registers must have width k".into()));
        }
        let all: Vec<usize> = self.left.iter().chain(&self.right).copied().collect();
        if !all_distinct(&all) {
            return Err(Error::Overlap);
        }
        Ok(())
    }

    /// Qubits in path order.
    pub fn path_order(&self) -> Vec<usize> {
        self.left.iter().rev().chain(self.right.iter().rev()).copied().collect()
    }

    /// Squared coefficient of `|unary i⟩|unary ℓ-i⟩`.
    pub fn weight(&self, l: usize, i: usize) -> f64 {
        if i > l {
            return 0.0;
        }
        let lw = ln_binom(self.m, i) + ln_binom(self.n - self.m, l - i) - ln_binom(self.n, l);
        lw.exp()
    }
}

fn check_qubits<T: Scalar>(c: &Circuit<T>, qubits: &[usize]) -> Result<()> {
    if let Some(&q) = qubits.iter().find(|&&q| q >= c.num_qubits) {
        return Err(Error::QubitOutOfRange { index: q, num_qubits: c.num_qubits });
    }
    if !all_distinct(qubits) {
        return Err(Error::Overlap);
    }
    Ok(())
}

/// Rotation inside `span{|p=1,q=0⟩, |p=0,q=1⟩}` of the adjacent pair `(q, p)`.
///
/// `angles` is indexed by `[q, ctrls…]` after the basis change and is only
/// meaningful where the `q` bit is set. `bridge[i]` is `Some(mid)` when
/// `ctrls[i]` is two steps from `p` with `mid` in between.
fn emit_givens<T: Scalar>(c: &mut Circuit<T>, p: usize, q: usize, ctrls: &[usize], bridge: &[Option<usize>], angles: &[f64]) {
    let mut controls = vec![q];
    controls.extend_from_slice(ctrls);
    let mut tmp = Circuit::<T>::new(c.num_qubits);
    emit_ucry(&mut tmp, &controls, p, angles);
    if tmp.is_empty() {
        return;
    }
    c.cx(p, q);
    for g in tmp.gates {
        match g.qubits() {
            (a, Some(t)) if t == p => match ctrls.iter().position(|&x| x == a).and_then(|i| bridge[i]) {
                Some(mid) => {
                    c.cx(a, mid);
                    c.cx(mid, p);
                    c.cx(a, mid);
                    c.cx(mid, p);
                }
                None => c.cx(a, p),
            },
            _ => c.push(g),
        }
    }
    c.cx(p, q);
}

/// Dicke state unitary on `qubits` (consecutive on a path): maps the unary
/// input of weight `ℓ ≤ k` to `|D^n_ℓ⟩` with `n = qubits.len()`.
pub fn dicke_unitary_path<T: Scalar>(num_qubits: usize, k: usize, qubits: &[usize]) -> Result<Circuit<T>> {
    let mut c = Circuit::new(num_qubits);
    emit_dicke_path(&mut c, k, qubits)?;
    Ok(c)
}

pub fn emit_dicke_path<T: Scalar>(c: &mut Circuit<T>, k: usize, qubits: &[usize]) -> Result<()> {
    let n = qubits.len();
    if k > n {
        return Err(Error::InvalidParameters(format!("k = {k} exceeds n = {n}")));
    }
    check_qubits(c, qubits)?;
    // split-and-shift on the remaining register qubits[n-m..]
    for m in (2..=n).rev() {
        let w = &qubits[n - m..];
        let top = k.min(m - 1);
        for l in (1..=top).rev() {
            let keep = 2.0 * (l as f64 / m as f64).sqrt().acos();
            if l == top {
                emit_givens(c, w[l], w[l - 1], &[], &[], &[0.0, keep]);
            } else {
                let full = std::f64::consts::PI;
                emit_givens(c, w[l], w[l - 1], &[w[l + 1]], &[None], &[0.0, keep, 0.0, full]);
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Left(usize),
    Right(usize),
}

/// Divide unitary on the `2k` path qubits of `spec`.
///
/// The `S2` register streams through `S1` by adjacent swaps. While `S2`'s
/// `b`-th qubit sits between positions `x` and `x-1` of `S1`, it hands its
/// one to `S1` when it is the top one of `S2` and `S1` holds exactly `x-1`
/// ones. A second pass of swaps restores the layout.
pub fn divide_unitary_path<T: Scalar>(num_qubits: usize, spec: &DivideSpec) -> Result<Circuit<T>> {
    let mut c = Circuit::new(num_qubits);
    emit_divide_path(&mut c, spec)?;
    Ok(c)
}

pub fn emit_divide_path<T: Scalar>(c: &mut Circuit<T>, spec: &DivideSpec) -> Result<()> {
    spec.validate()?;
    let k = spec.k;
    let phys = spec.path_order();
    check_qubits(c, &phys)?;
    if k == 0 {
        return Ok(());
    }
    // line[p] is the logical qubit whose state currently sits at phys[p]
    let mut line: Vec<Slot> = (0..k).rev().map(Slot::Left).chain((1..=k).rev().map(Slot::Right)).collect();
    let pos = |line: &[Slot], s: Slot| line.iter().position(|&x| x == s).unwrap();
    let mut swaps = Vec::new();
    for s in 0..2 * k {
        if s >= 1 {
            for b in 1..=k {
                let Some(j) = (s + b).checked_sub(k + 1).filter(|&j| j < k) else { continue };
                let pb = pos(&line, Slot::Right(b));
                debug_assert_eq!(line[pb - 1], Slot::Left(j));
                line.swap(pb - 1, pb);
                c.swap(phys[pb - 1], phys[pb]);
                swaps.push((phys[pb - 1], phys[pb]));
            }
        }
        for b in 1..=k {
            let Some(x) = (s + b + 1).checked_sub(k).filter(|&x| (1..=k).contains(&x)) else { continue };
            let l = b + x - 1;
            if l > k {
                continue;
            }
            let tail: f64 = (x..=l).map(|i| spec.weight(l, i)).sum();
            let head = tail + spec.weight(l, x - 1);
            if head <= 0.0 || tail <= 0.0 {
                continue;
            }
            let theta = 2.0 * (tail / head).min(1.0).sqrt().asin();
            let pp = pos(&line, Slot::Left(x - 1));
            let pq = pos(&line, Slot::Right(b));
            debug_assert_eq!(pq, pp + 1);
            let mut ctrls = Vec::new();
            let mut bridge = Vec::new();
            let mut idx = 1usize;
            if b < k {
                debug_assert_eq!(line[pp - 1], Slot::Right(b + 1));
                ctrls.push(phys[pp - 1]);
                bridge.push(None);
            }
            if x >= 2 {
                debug_assert_eq!(line[pq + 1], Slot::Left(x - 2));
                idx |= 1 << (ctrls.len() + 1);
                ctrls.push(phys[pq + 1]);
                bridge.push(Some(phys[pq]));
            }
            let mut angles = vec![0.0; 1 << (ctrls.len() + 1)];
            angles[idx] = theta;
            emit_givens(c, phys[pp], phys[pq], &ctrls, &bridge, &angles);
        }
    }
    for &(a, b) in swaps.iter().rev() {
        c.swap(a, b);
    }
    Ok(())
}

/// Prepares `Σ_ℓ α_ℓ |unary ℓ⟩` on `qubits` (consecutive on a path) from
/// `|0…0⟩`; `amplitudes.len()` must be `qubits.len() + 1`.
pub fn unary_amplitude_prep<T: Scalar>(num_qubits: usize, amplitudes: &[Complex64], qubits: &[usize]) -> Result<Circuit<T>> {
    let mut c = Circuit::new(num_qubits);
    emit_unary_amplitudes(&mut c, amplitudes, qubits)?;
    Ok(c)
}

pub fn emit_unary_amplitudes<T: Scalar>(c: &mut Circuit<T>, amplitudes: &[Complex64], qubits: &[usize]) -> Result<()> {
    let k = qubits.len();
    if amplitudes.len() != k + 1 {
        return Err(Error::InvalidParameters(format!(
            "expected {} amplitudes, got {}",
            k + 1,
            amplitudes.len()
        )));
    }
    check_qubits(c, qubits)?;
    let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(norm));
    }
    // tails[j] = probability of ℓ >= j
    let mut tails = vec![0.0; k + 2];
    for l in (0..=k).rev() {
        tails[l] = tails[l + 1] + amplitudes[l].norm_sqr();
    }
    for j in 0..k {
        if tails[j] <= 1e-300 {
            break;
        }
        let theta = 2.0 * (tails[j + 1] / tails[j]).clamp(0.0, 1.0).sqrt().asin();
        if j == 0 {
            if theta != 0.0 {
                c.ry(qubits[0], theta);
            }
        } else {
            emit_ucry(c, &[qubits[j - 1]], qubits[j], &[0.0, theta]);
        }
    }
    let phase: Vec<f64> = amplitudes.iter().map(|a| if a.norm() > 0.0 { a.arg() } else { 0.0 }).collect();
    if k > 0 && phase[0] != 0.0 {
        c.u(qubits[0], 0.0, 0.0, 0.0, phase[0]);
    }
    for j in 0..k {
        let d = phase[j + 1] - phase[j];
        if d != 0.0 {
            c.phase(qubits[j], d);
        }
    }
    Ok(())
}
