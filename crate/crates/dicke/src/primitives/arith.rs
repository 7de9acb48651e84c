use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn check<T: Scalar>(c: &Circuit<T>, qubits: &[usize]) -> Result<()> {
    if let Some(&q) = qubits.iter().find(|&&q| q >= c.num_qubits) {
        return Err(Error::QubitOutOfRange { index: q, num_qubits: c.num_qubits });
    }
    if !crate::util::all_distinct(qubits) {
        return Err(Error::Overlap);
    }
    Ok(())
}

/// `target ^= ⊕ sources` through a balanced XOR tree that is uncomputed afterwards.
pub fn parity_add<T: Scalar>(num_qubits: usize, sources: &[usize], target: usize) -> Result<Circuit<T>> {
    let mut c = Circuit::new(num_qubits);
    emit_parity_add(&mut c, sources, target)?;
    Ok(c)
}

pub fn emit_parity_add<T: Scalar>(c: &mut Circuit<T>, sources: &[usize], target: usize) -> Result<()> {
    let mut all = sources.to_vec();
    all.push(target);
    check(c, &all)?;
    if sources.is_empty() {
        return Ok(());
    }
    let mut level = sources.to_vec();
    let mut tree = Vec::new();
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        for pair in level.chunks(2) {
            if let [a, b] = *pair {
                tree.push((b, a));
            }
            next.push(pair[0]);
        }
        level = next;
    }
    for &(s, t) in &tree {
        c.cx(s, t);
    }
    c.cx(level[0], target);
    for &(s, t) in tree.iter().rev() {
        c.cx(s, t);
    }
    Ok(())
}

/// Copies the basis string of `src` into every block of `blocks` (each `|0^w⟩`),
/// doubling the number of holders each round.
pub fn fanout_copy<T: Scalar>(num_qubits: usize, src: &[usize], blocks: &[Vec<usize>]) -> Result<Circuit<T>> {
    let mut c = Circuit::new(num_qubits);
    emit_fanout_copy(&mut c, src, blocks)?;
    Ok(c)
}

pub fn emit_fanout_copy<T: Scalar>(c: &mut Circuit<T>, src: &[usize], blocks: &[Vec<usize>]) -> Result<()> {
    let mut all = src.to_vec();
    for b in blocks {
        if b.len() != src.len() {
            return Err(Error::InvalidParameters("block width differs from source width".into()));
        }
        all.extend_from_slice(b);
    }
    check(c, &all)?;
    for (from, to) in fanout_schedule(blocks.len()) {
        let s = if from == 0 { src } else { &blocks[from - 1] };
        for (&a, &b) in s.iter().zip(&blocks[to - 1]) {
            c.cx(a, b);
        }
    }
    Ok(())
}

/// `(from, to)` holder pairs of the doubling tree; holder 0 is the source and
/// holder `i ≥ 1` is block `i - 1`.
pub(crate) fn fanout_schedule(t: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut holders = 1;
    while holders <= t {
        let fresh = holders.min(t + 1 - holders);
        for i in 0..fresh {
            out.push((i, holders + i));
        }
        holders += fresh;
    }
    out
}
