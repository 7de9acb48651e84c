//! Unary, one-hot and binary encodings of `ℓ ∈ [0, k]` and the one-hot
//! arithmetic used by the divide unitaries.

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::primitives::{emit_fanout_copy, emit_parity_add, emit_toffoli, ToffoliMode};
use crate::scalar::Scalar;
use crate::util::bits_for;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Unary,
    OneHot,
    Binary,
}

/// Width-`k` register; position `s_j` is `qubits[j - 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedRegister {
    pub qubits: Vec<usize>,
    pub encoding: Encoding,
}

impl EncodedRegister {
    pub fn new(qubits: Vec<usize>, encoding: Encoding) -> Self {
        EncodedRegister { qubits, encoding }
    }

    pub fn width(&self) -> usize {
        self.qubits.len()
    }

    /// Register-local bit pattern of `value` (bit `j` ↔ `qubits[j]`).
    pub fn pattern(&self, value: usize) -> Result<u128> {
        let k = self.width();
        if value > k {
            return Err(Error::InvalidParameters(format!("value {value} exceeds width {k}")));
        }
        Ok(match self.encoding {
            Encoding::Unary => (1u128 << value) - 1,
            Encoding::OneHot if value == 0 => 0,
            Encoding::OneHot => 1u128 << (value - 1),
            Encoding::Binary => value as u128,
        })
    }

    /// Global basis bits for `value`.
    pub fn basis(&self, value: usize) -> Result<u128> {
        let p = self.pattern(value)?;
        Ok(self.qubits.iter().enumerate().fold(0, |acc, (j, &q)| acc | (((p >> j) & 1) << q)))
    }

    /// Decodes the register out of a global basis index.
    pub fn decode(&self, index: u128) -> Option<usize> {
        let p = self.qubits.iter().enumerate().fold(0u128, |acc, (j, &q)| acc | (((index >> q) & 1) << j));
        (0..=self.width()).find(|&v| self.pattern(v).ok() == Some(p))
    }
}

fn check<T: Scalar>(c: &Circuit<T>, groups: &[&[usize]]) -> Result<()> {
    let all: Vec<usize> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    if let Some(&q) = all.iter().find(|&&q| q >= c.num_qubits) {
        return Err(Error::QubitOutOfRange { index: q, num_qubits: c.num_qubits });
    }
    if !crate::util::all_distinct(&all) {
        return Err(Error::Overlap);
    }
    Ok(())
}

/// In-place prefix XOR `reg[j] ← reg[0] ⊕ … ⊕ reg[j]` (Brent–Kung, depth `≤ 2⌈log k⌉`).
pub fn emit_prefix_xor<T: Scalar>(c: &mut Circuit<T>, reg: &[usize]) {
    let n = reg.len();
    let mut d = 1;
    while d < n {
        for j in (2 * d - 1..n).step_by(2 * d) {
            c.cx(reg[j - d], reg[j]);
        }
        d *= 2;
    }
    while d > 1 {
        d /= 2;
        for j in (3 * d - 1..n).step_by(2 * d) {
            c.cx(reg[j - d], reg[j]);
        }
    }
}

/// Unary → one-hot.
pub fn u_uo<T: Scalar>(num_qubits: usize, reg: &[usize], ancilla: &[usize]) -> Result<Circuit<T>> {
    let mut c = Circuit::new(num_qubits);
    emit_u_uo(&mut c, reg, ancilla)?;
    Ok(c)
}

pub fn emit_u_uo<T: Scalar>(c: &mut Circuit<T>, reg: &[usize], ancilla: &[usize]) -> Result<()> {
    check(c, &[reg, ancilla])?;
    let k = reg.len();
    if ancilla.len() >= k {
        // s_j ← s_j ⊕ s_{j+1} is the inverse of the suffix XOR
        let rev: Vec<usize> = reg.iter().rev().copied().collect();
        let mut p = Circuit::new(c.num_qubits);
        emit_prefix_xor(&mut p, &rev);
        c.append(&p.inverse());
    } else {
        for j in 0..k.saturating_sub(1) {
            c.cx(reg[j + 1], reg[j]);
        }
    }
    Ok(())
}

/// One-hot → binary; needs `2k` clean ancilla.
pub fn u_ob<T: Scalar>(num_qubits: usize, reg: &[usize], ancilla: &[usize]) -> Result<Circuit<T>> {
    let mut c = Circuit::new(num_qubits);
    emit_u_ob(&mut c, reg, ancilla)?;
    Ok(c)
}

pub fn emit_u_ob<T: Scalar>(c: &mut Circuit<T>, reg: &[usize], ancilla: &[usize]) -> Result<()> {
    check(c, &[reg, ancilla])?;
    let k = reg.len();
    if ancilla.len() < 2 * k {
        return Err(Error::InsufficientAncilla { need: 2 * k, have: ancilla.len() });
    }
    if k == 0 {
        return Ok(());
    }
    let b = bits_for(k);
    let (t, pool) = ancilla.split_at(k);
    for i in 1..=k {
        for j in 0..b {
            if (i >> j) & 1 == 1 {
                c.cx(reg[i - 1], t[j]);
            }
        }
    }
    for j in 0..k {
        c.swap(reg[j], t[j]);
    }
    // binary value now sits on reg[..b]; erase the one-hot copy held in t
    let toff_anc = if b >= 3 { b - 1 } else { 0 };
    let extra = (pool.len() - toff_anc) / (b + toff_anc);
    let mut copies: Vec<Vec<usize>> = vec![reg[..b].to_vec()];
    let mut scratch: Vec<Vec<usize>> = vec![pool[..toff_anc].to_vec()];
    let mut rest = &pool[toff_anc..];
    for _ in 0..extra.min(k - 1) {
        let (blk, r) = rest.split_at(b + toff_anc);
        copies.push(blk[..b].to_vec());
        scratch.push(blk[b..].to_vec());
        rest = r;
    }
    emit_fanout_copy(c, &copies[0], &copies[1..])?;
    let p = copies.len();
    for i in 1..=k {
        let a = (i - 1) % p;
        let pattern: Vec<bool> = (0..b).map(|j| (i >> j) & 1 == 1).collect();
        let mode = if b >= 3 { ToffoliMode::LogDepth(scratch[a].clone()) } else { ToffoliMode::NoAncilla };
        emit_toffoli(c, &copies[a], t[i - 1], &pattern, &mode)?;
    }
    let mut un = Circuit::new(c.num_qubits);
    emit_fanout_copy(&mut un, &copies[0], &copies[1..])?;
    c.append(&un.inverse());
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Minus,
    Plus,
}

/// One pattern-`11` Toffoli of the wave schedule, as 1-based register
/// positions: controls `s_s`, `t_t`, target `w_w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WaveGate {
    pub s: usize,
    pub t: usize,
    pub w: usize,
}

/// The `2k − 3` depth-one groups of Toffolis covering every pair `r < j`:
/// groups `C^(1)_1..C^(1)_{k−1}` then `C^(2)_1..C^(2)_{k−2}`.
pub fn wave_schedule(k: usize, variant: Variant) -> Result<Vec<Vec<WaveGate>>> {
    if k < 2 {
        return Err(Error::InvalidParameters(format!("wave schedule needs k ≥ 2, got {k}")));
    }
    let gate = |r: usize, j: usize| match variant {
        Variant::Minus => WaveGate { s: r, t: j, w: j - r },
        Variant::Plus => WaveGate { s: r, t: j - r, w: j },
    };
    // C^(1)_i holds pairs with r + j = 2i + 1, C^(2)_i those with r + j = 2i + 2
    let group = |sum: usize| -> Vec<WaveGate> {
        (sum.saturating_sub(k).max(1)..sum.div_ceil(2)).map(|r| gate(r, sum - r)).collect()
    };
    let mut out: Vec<Vec<WaveGate>> = (1..k).map(|i| group(2 * i + 1)).collect();
    out.extend((1..k - 1).map(|i| group(2 * i + 2)));
    Ok(out)
}

fn check_three<T: Scalar>(c: &Circuit<T>, s: &[usize], t: &[usize], w: &[usize], anc: &[usize]) -> Result<()> {
    if s.len() != t.len() || t.len() != w.len() {
        return Err(Error::InvalidParameters("registers differ in width".into()));
    }
    check(c, &[s, t, w, anc])
}

/// `W ^= onehot(ℓ − i)` for one-hot `S = i`, `T = ℓ`, `i ≤ ℓ`.
pub fn u_minus<T: Scalar>(num_qubits: usize, s: &[usize], t: &[usize], w: &[usize], ancilla: &[usize]) -> Result<Circuit<T>> {
    let mut c = Circuit::new(num_qubits);
    emit_u_minus(&mut c, s, t, w, ancilla)?;
    Ok(c)
}

pub fn emit_u_minus<T: Scalar>(c: &mut Circuit<T>, s: &[usize], t: &[usize], w: &[usize], ancilla: &[usize]) -> Result<()> {
    check_three(c, s, t, w, ancilla)?;
    guarded_copy(c, s, t, w, ancilla)?;
    waves(c, s, t, w, ancilla, Variant::Minus)
}

/// `W ^= onehot(i + v)` for one-hot `S = i`, `T = v`, `i + v ≤ k`.
pub fn u_plus<T: Scalar>(num_qubits: usize, s: &[usize], t: &[usize], w: &[usize], ancilla: &[usize]) -> Result<Circuit<T>> {
    let mut c = Circuit::new(num_qubits);
    emit_u_plus(&mut c, s, t, w, ancilla)?;
    Ok(c)
}

pub fn emit_u_plus<T: Scalar>(c: &mut Circuit<T>, s: &[usize], t: &[usize], w: &[usize], ancilla: &[usize]) -> Result<()> {
    check_three(c, s, t, w, ancilla)?;
    guarded_copy(c, s, t, w, ancilla)?;
    // T = 0 with S > 0 is not reached by the other two parts
    guarded_copy(c, t, s, w, ancilla)?;
    waves(c, s, t, w, ancilla, Variant::Plus)
}

/// `W ^= B` when `A = 0`: the guard `a_k ⊕= a_1 ⊕ … ⊕ a_{k−1}` equals OR(A)
/// on one-hot inputs, then `Tof^{a_k, b_j}_{w_j}(01)` and uncompute.
fn guarded_copy<T: Scalar>(c: &mut Circuit<T>, a: &[usize], b: &[usize], w: &[usize], ancilla: &[usize]) -> Result<()> {
    let k = a.len();
    if k == 0 {
        return Ok(());
    }
    let guard = a[k - 1];
    emit_parity_add(c, &a[..k - 1], guard)?;
    let fan = ancilla.len() >= k - 1 && k > 1;
    let copies: Vec<Vec<usize>> = if fan { ancilla[..k - 1].iter().map(|&q| vec![q]).collect() } else { Vec::new() };
    if fan {
        emit_fanout_copy(c, &[guard], &copies)?;
    }
    for j in 0..k {
        let g = if fan && j > 0 { copies[j - 1][0] } else { guard };
        emit_toffoli(c, &[g, b[j]], w[j], &[false, true], &ToffoliMode::NoAncilla)?;
    }
    if fan {
        let mut un = Circuit::new(c.num_qubits);
        emit_fanout_copy(&mut un, &[guard], &copies)?;
        c.append(&un.inverse());
    }
    emit_parity_add(c, &a[..k - 1], guard)
}

fn waves<T: Scalar>(c: &mut Circuit<T>, s: &[usize], t: &[usize], w: &[usize], ancilla: &[usize], variant: Variant) -> Result<()> {
    let k = s.len();
    if k < 2 {
        return Ok(());
    }
    let groups = wave_schedule(k, variant)?;
    let copies = (ancilla.len() / k) / 3;
    let run = |c: &mut Circuit<T>, gs: &[Vec<WaveGate>], s: &[usize], t: &[usize], w: &[usize]| -> Result<()> {
        for g in gs.iter().flatten() {
            emit_toffoli(c, &[s[g.s - 1], t[g.t - 1]], w[g.w - 1], &[true, true], &ToffoliMode::NoAncilla)?;
        }
        Ok(())
    };
    if copies == 0 {
        return run(c, &groups, s, t, w);
    }
    let blocks: Vec<&[usize]> = ancilla[..3 * k * copies].chunks(3 * k).collect();
    let (sb, tb, wb): (Vec<Vec<usize>>, Vec<Vec<usize>>, Vec<Vec<usize>>) = (
        blocks.iter().map(|b| b[..k].to_vec()).collect(),
        blocks.iter().map(|b| b[k..2 * k].to_vec()).collect(),
        blocks.iter().map(|b| b[2 * k..].to_vec()).collect(),
    );
    // the registers themselves serve as one more block
    let d = groups.len().div_ceil(copies + 1);
    let mut compute = Circuit::new(c.num_qubits);
    emit_fanout_copy(&mut compute, s, &sb)?;
    emit_fanout_copy(&mut compute, t, &tb)?;
    let mut chunks = groups.chunks(d);
    let own = chunks.next().unwrap_or(&[]);
    for (tau, chunk) in chunks.enumerate() {
        run(&mut compute, chunk, &sb[tau], &tb[tau], &wb[tau])?;
    }
    c.append(&compute);
    run(c, own, s, t, w)?;
    for j in 0..k {
        let sources: Vec<usize> = wb.iter().map(|b| b[j]).collect();
        emit_parity_add(c, &sources, w[j])?;
    }
    c.append(&compute.inverse());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::simulate_sparse;
    use std::collections::HashSet;

    fn reg(start: usize, k: usize) -> Vec<usize> {
        (start..start + k).collect()
    }

    #[test]
    fn patterns() {
        let r = EncodedRegister::new(reg(0, 4), Encoding::Unary);
        assert_eq!(r.pattern(3).unwrap(), 0b0111);
        let r = EncodedRegister::new(reg(0, 4), Encoding::OneHot);
        assert_eq!(r.pattern(0).unwrap(), 0);
        assert_eq!(r.pattern(3).unwrap(), 0b0100);
        let r = EncodedRegister::new(reg(0, 5), Encoding::Binary);
        assert_eq!(r.pattern(3).unwrap(), 0b00011);
        assert_eq!(r.decode(r.basis(5).unwrap()), Some(5));
    }

    #[test]
    fn prefix_xor_is_prefix() {
        for n in 1..=13usize {
            let r = reg(0, n);
            let mut c = Circuit::<f64>::new(n);
            emit_prefix_xor(&mut c, &r);
            for input in 0..1u128 << n {
                let mut want = 0u128;
                let mut acc = 0;
                for j in 0..n {
                    acc ^= (input >> j) & 1;
                    want |= acc << j;
                }
                assert_eq!(simulate_sparse(&c, input).unwrap().as_basis(1e-9), Some(want));
            }
            assert!(c.depth() <= 2 * crate::util::ceil_log2(n).max(1));
        }
    }

    fn run_map(c: &Circuit<f64>, from: &EncodedRegister, to: &EncodedRegister, k: usize, anc: &[usize]) {
        for l in 0..=k {
            let out = simulate_sparse(c, from.basis(l).unwrap()).unwrap().as_basis(1e-9).expect("basis output");
            assert_eq!(to.decode(out), Some(l));
            assert_eq!(out & !to.qubits.iter().fold(0u128, |a, &q| a | 1 << q), 0);
            assert!(anc.iter().all(|&q| (out >> q) & 1 == 0));
        }
    }

    #[test]
    fn uo_examples() {
        let r = reg(0, 4);
        let c = u_uo::<f64>(4, &r, &[]).unwrap();
        assert_eq!(simulate_sparse(&c, 0).unwrap().as_basis(1e-9), Some(0));
        assert_eq!(simulate_sparse(&c, 0b0111).unwrap().as_basis(1e-9), Some(0b0100));
    }

    #[test]
    fn uo_exhaustive() {
        for k in 1..=8 {
            for n_anc in [0, k] {
                let r = reg(0, k);
                let anc = reg(k, n_anc);
                let c = u_uo::<f64>(k + n_anc, &r, &anc).unwrap();
                run_map(&c, &EncodedRegister::new(r.clone(), Encoding::Unary), &EncodedRegister::new(r.clone(), Encoding::OneHot), k, &anc);
            }
        }
    }

    #[test]
    fn ob_examples_and_exhaustive() {
        let r = reg(0, 5);
        let c = u_ob::<f64>(15, &r, &reg(5, 10)).unwrap();
        assert_eq!(simulate_sparse(&c, 0).unwrap().as_basis(1e-9), Some(0));
        assert_eq!(simulate_sparse(&c, 0b00100).unwrap().as_basis(1e-9), Some(0b00011));
        for k in 1..=8 {
            for n_anc in [2 * k, 4 * k] {
                let r = reg(0, k);
                let anc = reg(k, n_anc);
                let c = u_ob::<f64>(k + n_anc, &r, &anc).unwrap();
                run_map(&c, &EncodedRegister::new(r.clone(), Encoding::OneHot), &EncodedRegister::new(r.clone(), Encoding::Binary), k, &anc);
            }
        }
        assert_eq!(u_ob::<f64>(8, &reg(0, 3), &reg(3, 5)).unwrap_err(), Error::InsufficientAncilla { need: 6, have: 5 });
    }

    fn arith_case(k: usize, n_anc: usize, variant: Variant) {
        let (s, t, w) = (reg(0, k), reg(k, k), reg(2 * k, k));
        let anc = reg(3 * k, n_anc);
        let n = 3 * k + n_anc;
        let c = match variant {
            Variant::Minus => u_minus::<f64>(n, &s, &t, &w, &anc),
            Variant::Plus => u_plus::<f64>(n, &s, &t, &w, &anc),
        }
        .unwrap();
        let oh = |r: &[usize]| EncodedRegister::new(r.to_vec(), Encoding::OneHot);
        for a in 0..=k {
            for b in 0..=k {
                let want = match variant {
                    Variant::Minus if a <= b => b - a,
                    Variant::Plus if a + b <= k => a + b,
                    _ => continue,
                };
                let input = oh(&s).basis(a).unwrap() | oh(&t).basis(b).unwrap();
                let out = simulate_sparse(&c, input).unwrap().as_basis(1e-9).expect("basis output");
                assert_eq!(out, input | oh(&w).basis(want).unwrap(), "k={k} anc={n_anc} a={a} b={b}");
            }
        }
    }

    #[test]
    fn minus_examples() {
        let (s, t, w) = (reg(0, 4), reg(4, 4), reg(8, 4));
        let c = u_minus::<f64>(12, &s, &t, &w, &[]).unwrap();
        let oh = |r: &[usize], v| EncodedRegister::new(r.to_vec(), Encoding::OneHot).basis(v).unwrap();
        let out = simulate_sparse(&c, oh(&s, 3) | oh(&t, 3)).unwrap().as_basis(1e-9).unwrap();
        assert_eq!(out >> 8, 0);
        let out = simulate_sparse(&c, oh(&s, 1) | oh(&t, 3)).unwrap().as_basis(1e-9).unwrap();
        assert_eq!(out >> 8, 0b0010);
    }

    #[test]
    fn plus_examples() {
        let (s, t, w) = (reg(0, 4), reg(4, 4), reg(8, 4));
        let c = u_plus::<f64>(12, &s, &t, &w, &[]).unwrap();
        let oh = |r: &[usize], v| EncodedRegister::new(r.to_vec(), Encoding::OneHot).basis(v).unwrap();
        assert_eq!(simulate_sparse(&c, oh(&t, 2)).unwrap().as_basis(1e-9).unwrap() >> 8, 0b0010);
        assert_eq!(simulate_sparse(&c, oh(&s, 1) | oh(&t, 2)).unwrap().as_basis(1e-9).unwrap() >> 8, 0b0100);
        assert_eq!(simulate_sparse(&c, oh(&s, 2)).unwrap().as_basis(1e-9).unwrap() >> 8, 0b0010);
    }

    #[test]
    fn arithmetic_exhaustive() {
        for k in 1..=6 {
            for n_anc in [0, k - 1, 3 * k, 9 * k] {
                arith_case(k, n_anc, Variant::Minus);
                arith_case(k, n_anc, Variant::Plus);
            }
        }
    }

    #[test]
    fn schedule_counts() {
        assert_eq!(wave_schedule(2, Variant::Minus).unwrap().len(), 1);
        let g = wave_schedule(5, Variant::Minus).unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g.iter().map(Vec::len).sum::<usize>(), 10);
        assert!(wave_schedule(1, Variant::Plus).is_err());
    }

    #[test]
    fn schedule_matches_listed_groups() {
        // first family as listed: j = 1..i gives (s_j, t_{2i+1−j}, w_{2(i−j)+1})
        let k = 8;
        let g = wave_schedule(k, Variant::Minus).unwrap();
        for i in 1..=k / 2 {
            let want: HashSet<WaveGate> = (1..=i).map(|j| WaveGate { s: j, t: 2 * i + 1 - j, w: 2 * (i - j) + 1 }).collect();
            assert_eq!(g[i - 1].iter().copied().collect::<HashSet<_>>(), want);
        }
        for i in k / 2 + 1..k {
            let want: HashSet<WaveGate> = (1..=k - i).map(|j| WaveGate { s: i - j + 1, t: i + j, w: 2 * j - 1 }).collect();
            assert_eq!(g[i - 1].iter().copied().collect::<HashSet<_>>(), want);
        }
    }
}
