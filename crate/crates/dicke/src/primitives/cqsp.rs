use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::primitives::emit_fanout_copy;

/// Maps `|x⟩|0^m⟩ → |x⟩|ψ_x⟩` where `ψ_x = table[x]` has nonnegative entries.
/// Control bit `i` of `x` is `ctrl[i]`; entry index bit `j` is `targets[j]`.
pub fn cqsp_multiplexor<T: Scalar>(
    num_qubits: usize,
    ctrl: &[usize],
    targets: &[usize],
    table: &[Vec<f64>],
) -> Result<Circuit<T>> {
    let mut c = Circuit::new(num_qubits);
    emit_cqsp(&mut c, ctrl, targets, table)?;
    Ok(c)
}

pub fn emit_cqsp<T: Scalar>(c: &mut Circuit<T>, ctrl: &[usize], targets: &[usize], table: &[Vec<f64>]) -> Result<()> {
    emit_cqsp_ancilla(c, ctrl, targets, table, &[])
}

/// [`emit_cqsp`] with clean `ancilla` (restored) spreading each multiplexed
/// rotation over parallel copies of its controls.
pub fn emit_cqsp_ancilla<T: Scalar>(
    c: &mut Circuit<T>,
    ctrl: &[usize],
    targets: &[usize],
    table: &[Vec<f64>],
    ancilla: &[usize],
) -> Result<()> {
    let (cw, m) = (ctrl.len(), targets.len());
    let all: Vec<usize> = ctrl.iter().chain(targets).chain(ancilla).copied().collect();
    if let Some(&q) = all.iter().find(|&&q| q >= c.num_qubits) {
        return Err(Error::QubitOutOfRange { index: q, num_qubits: c.num_qubits });
    }
    if !crate::util::all_distinct(&all) {
        return Err(Error::Overlap);
    }
    if table.len() != 1 << cw || table.iter().any(|r| r.len() != 1 << m) {
        return Err(Error::InvalidParameters("amplitude table has the wrong shape".into()));
    }
    for row in table {
        if row.iter().any(|&a| a < 0.0 || !a.is_finite()) {
            return Err(Error::InvalidParameters("amplitudes must be nonnegative reals".into()));
        }
        let norm = row.iter().map(|a| a * a).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(norm));
        }
    }
    for j in (0..m).rev() {
        // controls of this level: ctrl, then higher target bits
        let mut controls = ctrl.to_vec();
        controls.extend_from_slice(&targets[j + 1..]);
        let higher = m - j - 1;
        let mut angles = vec![0.0; 1 << (cw + higher)];
        for (x, row) in table.iter().enumerate() {
            for h in 0..1usize << higher {
                let (mut w0, mut w1) = (0.0, 0.0);
                for low in 0..1usize << j {
                    let base = (h << (j + 1)) | low;
                    w0 += row[base].powi(2);
                    w1 += row[base | (1 << j)].powi(2);
                }
                angles[x | (h << cw)] = 2.0 * w1.sqrt().atan2(w0.sqrt());
            }
        }
        emit_ucry_ancilla(c, &controls, targets[j], &angles, ancilla)?;
    }
    Ok(())
}

/// Drops the controls `angles` does not depend on.
fn reduce_controls(controls: &[usize], angles: &[f64]) -> (Vec<usize>, Vec<f64>) {
    let r = controls.len();
    let mut used = Vec::new();
    let mut reduced = angles.to_vec();
    for i in (0..r).rev() {
        let half = 1usize << i;
        let depends = (0..reduced.len()).any(|x| x & half == 0 && (reduced[x] - reduced[x | half]).abs() > 1e-15);
        if depends {
            used.push(i);
        } else {
            // keeping the bit-`i`-clear half in order removes bit `i` from the index
            reduced = (0..reduced.len()).filter(|x| x & half == 0).map(|x| reduced[x]).collect();
        }
    }
    used.reverse();
    (used.iter().map(|&i| controls[i]).collect(), reduced)
}

/// `a[s] = 2^{-r} Σ_x (−1)^{|x ∧ s|} v[x]`.
fn walsh(v: &[f64]) -> Vec<f64> {
    let mut a = v.to_vec();
    let n = a.len();
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let (x, y) = (a[j], a[j + h]);
                a[j] = x + y;
                a[j + h] = x - y;
            }
        }
        h *= 2;
    }
    a.iter_mut().for_each(|x| *x /= n as f64);
    a
}

/// Uniformly controlled Y-rotation: `Ry(angles[x])` on `target` when the
/// controls read `x` (bit `i` ↔ `controls[i]`).
pub fn emit_ucry<T: Scalar>(c: &mut Circuit<T>, controls: &[usize], target: usize, angles: &[f64]) {
    if angles.iter().all(|a| a.abs() < 1e-15) {
        return;
    }
    let (ctl, reduced) = reduce_controls(controls, angles);
    let r = ctl.len();
    let n = 1usize << r;
    let gray = |i: usize| i ^ (i >> 1);
    let a = walsh(&reduced);
    for i in 0..n {
        c.ry(target, a[gray(i)]);
        if r > 0 {
            let flip = gray(i) ^ gray((i + 1) % n);
            c.cx(ctl[flip.trailing_zeros() as usize], target);
        }
    }
}

fn parallel_cost(r: usize, blocks: usize) -> usize {
    let n = 1usize << r;
    let fan = if blocks > 1 { 2 * crate::util::ceil_log2(blocks) } else { 0 };
    2 * n.div_ceil(blocks) + 2 * r + fan + 4
}

/// [`emit_ucry`] using clean `ancilla`: the rotation becomes a diagonal
/// phase polynomial whose Walsh terms are split among copies of
/// `(controls, target)`, each walking its share of the Gray code.
pub fn emit_ucry_ancilla<T: Scalar>(
    c: &mut Circuit<T>,
    controls: &[usize],
    target: usize,
    angles: &[f64],
    ancilla: &[usize],
) -> Result<()> {
    if angles.iter().all(|a| a.abs() < 1e-15) {
        return Ok(());
    }
    let (ctl, reduced) = reduce_controls(controls, angles);
    let r = ctl.len();
    let n = 1usize << r;
    let max_blocks = (1 + ancilla.len() / (r + 1)).min(n);
    let blocks = (1..=max_blocks).min_by_key(|&b| parallel_cost(r, b)).unwrap_or(1);
    if blocks == 1 || 2 * n <= parallel_cost(r, blocks) {
        emit_ucry(c, &ctl, target, &reduced);
        return Ok(());
    }
    let a = walsh(&reduced);
    let gray = |i: usize| i ^ (i >> 1);
    let mut src = ctl.clone();
    src.push(target);
    let copies: Vec<Vec<usize>> = ancilla[..(blocks - 1) * (r + 1)].chunks(r + 1).map(|b| b.to_vec()).collect();
    // Ry(θ) = S·H·Rz(θ)·H·S†
    c.phase(target, -std::f64::consts::FRAC_PI_2);
    c.h(target);
    let mut fan = Circuit::new(c.num_qubits);
    emit_fanout_copy(&mut fan, &src, &copies)?;
    c.append(&fan);
    let len = n.div_ceil(blocks);
    for (b, chunk) in (0..n).collect::<Vec<_>>().chunks(len).enumerate() {
        let reg = if b == 0 { &src } else { &copies[b - 1] };
        let p = reg[r];
        let mut cur = 0usize;
        for &i in chunk {
            let mut diff = cur ^ gray(i);
            while diff != 0 {
                let bit = diff.trailing_zeros() as usize;
                c.cx(reg[bit], p);
                diff &= diff - 1;
            }
            cur = gray(i);
            if a[cur].abs() > 1e-15 {
                c.rz(p, a[cur]);
            }
        }
        let mut diff = cur;
        while diff != 0 {
            let bit = diff.trailing_zeros() as usize;
            c.cx(reg[bit], p);
            diff &= diff - 1;
        }
    }
    c.append(&fan.inverse());
    c.h(target);
    c.phase(target, std::f64::consts::FRAC_PI_2);
    Ok(())
}
