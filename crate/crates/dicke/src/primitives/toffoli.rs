use std::f64::consts::PI;

use num_complex::Complex64;

use super::gates::{abc, emit_ccx, emit_cu, emit_matrix, rz, M2};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ToffoliMode {
    NoAncilla,
    /// Clean ancilla, at least `|S| - 1` of them; restored to `|0⟩`.
    LogDepth(Vec<usize>),
}

/// Flips `target` iff the control register reads `pattern` (`pattern[i]` for `controls[i]`).
pub fn toffoli<T: Scalar>(
    num_qubits: usize,
    controls: &[usize],
    target: usize,
    pattern: &[bool],
    mode: &ToffoliMode,
) -> Result<Circuit<T>> {
    let mut c = Circuit::new(num_qubits);
    emit_toffoli(&mut c, controls, target, pattern, mode)?;
    Ok(c)
}

pub fn emit_toffoli<T: Scalar>(
    c: &mut Circuit<T>,
    controls: &[usize],
    target: usize,
    pattern: &[bool],
    mode: &ToffoliMode,
) -> Result<()> {
    if pattern.len() != controls.len() {
        return Err(Error::InvalidParameters(format!(
            "pattern has {} bits for {} controls",
            pattern.len(),
            controls.len()
        )));
    }
    let mut all: Vec<usize> = controls.to_vec();
    all.push(target);
    if let ToffoliMode::LogDepth(anc) = mode {
        all.extend_from_slice(anc);
    }
    for &q in &all {
        if q >= c.num_qubits {
            return Err(Error::QubitOutOfRange { index: q, num_qubits: c.num_qubits });
        }
    }
    if !crate::util::all_distinct(&all) {
        return Err(Error::Overlap);
    }
    let flips: Vec<usize> = controls.iter().zip(pattern).filter(|(_, &b)| !b).map(|(&q, _)| q).collect();
    for &q in &flips {
        c.x(q);
    }
    match mode {
        ToffoliMode::NoAncilla => emit_mcx(c, controls, target),
        ToffoliMode::LogDepth(anc) => {
            let need = controls.len().saturating_sub(1);
            if anc.len() < need {
                return Err(Error::InsufficientAncilla { need, have: anc.len() });
            }
            emit_and_tree(c, controls, target, anc);
        }
    }
    for &q in &flips {
        c.x(q);
    }
    Ok(())
}

fn minus_i_x() -> M2 {
    let z = Complex64::new(0.0, 0.0);
    let m = Complex64::new(0.0, -1.0);
    [[z, m], [m, z]]
}

/// Multi-controlled X with no ancilla.
pub(crate) fn emit_mcx<T: Scalar>(c: &mut Circuit<T>, controls: &[usize], target: usize) {
    match controls.len() {
        0 => c.x(target),
        1 => c.cx(controls[0], target),
        2 => emit_ccx(c, controls[0], controls[1], target),
        _ => {
            emit_mcsu2(c, controls, target, &minus_i_x(), &[]);
            emit_mcphase(c, controls, PI / 2.0, &[target]);
        }
    }
}

/// Multi-controlled X using `dirty` as borrowed qubits (restored, any state).
pub(crate) fn emit_mcx_dirty<T: Scalar>(c: &mut Circuit<T>, controls: &[usize], target: usize, dirty: &[usize]) {
    let m = controls.len();
    if m <= 2 {
        emit_mcx(c, controls, target);
        return;
    }
    if dirty.len() >= m - 2 {
        v_chain(c, controls, target, &dirty[..m - 2]);
        return;
    }
    if dirty.is_empty() {
        emit_mcx(c, controls, target);
        return;
    }
    // Split the controls across one borrowed qubit `a`.
    let a = dirty[0];
    let m1 = m.div_ceil(2);
    let (p1, p2) = controls.split_at(m1);
    let mut p2a = p2.to_vec();
    p2a.push(a);
    let mut pool1 = p2.to_vec();
    pool1.push(target);
    pool1.extend_from_slice(&dirty[1..]);
    let mut pool2 = p1.to_vec();
    pool2.extend_from_slice(&dirty[1..]);
    for _ in 0..2 {
        emit_mcx_dirty(c, &p2a, target, &pool2);
        emit_mcx_dirty(c, p1, a, &pool1);
    }
}

fn v_chain<T: Scalar>(c: &mut Circuit<T>, x: &[usize], t: usize, a: &[usize]) {
    let m = x.len();
    let down = |c: &mut Circuit<T>| {
        for i in (3..m).rev() {
            emit_ccx(c, x[i - 1], a[i - 3], a[i - 2]);
        }
        emit_ccx(c, x[0], x[1], a[0]);
        for i in 3..m {
            emit_ccx(c, x[i - 1], a[i - 3], a[i - 2]);
        }
    };
    for _ in 0..2 {
        emit_ccx(c, x[m - 1], a[m - 3], t);
        down(c);
    }
}

/// Multi-controlled `w ∈ SU(2)`.
fn emit_mcsu2<T: Scalar>(c: &mut Circuit<T>, controls: &[usize], target: usize, w: &M2, extra: &[usize]) {
    let m = controls.len();
    match m {
        0 => emit_matrix(c, target, w),
        1 => emit_cu(c, controls[0], target, w),
        _ => {
            let q = controls[m - 1];
            let rest = &controls[..m - 1];
            let (a, b, cc) = abc(w);
            let mut dirty = vec![q];
            dirty.extend_from_slice(extra);
            emit_cu(c, q, target, &cc);
            emit_mcx_dirty(c, rest, target, &dirty);
            emit_cu(c, q, target, &b);
            emit_mcx_dirty(c, rest, target, &dirty);
            emit_cu(c, q, target, &a);
        }
    }
}

/// Phase `e^{iφ}` when every qubit in `qubits` is 1.
fn emit_mcphase<T: Scalar>(c: &mut Circuit<T>, qubits: &[usize], phi: f64, extra: &[usize]) {
    match qubits.len() {
        0 => {}
        1 => c.phase(qubits[0], phi),
        n => {
            let last = qubits[n - 1];
            let rest = &qubits[..n - 1];
            emit_mcsu2(c, rest, last, &rz(phi), extra);
            let mut more = extra.to_vec();
            more.push(last);
            emit_mcphase(c, rest, phi / 2.0, &more);
        }
    }
}

/// AND-tree into clean ancilla, then uncompute.
fn emit_and_tree<T: Scalar>(c: &mut Circuit<T>, controls: &[usize], target: usize, anc: &[usize]) {
    if controls.len() <= 2 {
        emit_mcx(c, controls, target);
        return;
    }
    let mut level: Vec<usize> = controls.to_vec();
    let mut pool = anc.iter().copied();
    let mut compute: Vec<(usize, usize, usize)> = Vec::new();
    while level.len() > 2 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        for pair in level.chunks(2) {
            if let [a, b] = *pair {
                let t = pool.next().expect("ancilla count checked");
                compute.push((a, b, t));
                next.push(t);
            } else {
                next.push(pair[0]);
            }
        }
        level = next;
    }
    for &(a, b, t) in &compute {
        emit_ccx(c, a, b, t);
    }
    emit_mcx(c, &level, target);
    for &(a, b, t) in compute.iter().rev() {
        emit_ccx(c, a, b, t);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::simulate_basis;

    fn check_oracle(c: &Circuit<f64>, controls: &[usize], target: usize, pattern: &[bool]) {
        for input in 0..1usize << c.num_qubits {
            let hit = controls.iter().zip(pattern).all(|(&q, &b)| ((input >> q) & 1 == 1) == b);
            let want = if hit { input ^ (1 << target) } else { input };
            let s = simulate_basis(c, input).unwrap();
            assert!((s.amp(want) - Complex64::new(1.0, 0.0)).norm() < 1e-9, "input {input:b}");
        }
    }

    #[test]
    fn single_control_is_cnot() {
        let c = toffoli::<f64>(2, &[0], 1, &[true], &ToffoliMode::NoAncilla).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c.gates[0].is_cx());
    }

    #[test]
    fn two_controls_flip_on_11() {
        let c = toffoli::<f64>(3, &[0, 1], 2, &[true, true], &ToffoliMode::NoAncilla).unwrap();
        let s = simulate_basis(&c, 0b011).unwrap();
        assert!((s.amp(0b111).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pattern_101_truth_table() {
        let pat = [true, false, true];
        let c = toffoli::<f64>(4, &[0, 1, 2], 3, &pat, &ToffoliMode::NoAncilla).unwrap();
        check_oracle(&c, &[0, 1, 2], 3, &pat);
    }

    #[test]
    fn no_ancilla_exact_up_to_six_controls() {
        for m in 3..=6 {
            let controls: Vec<usize> = (0..m).collect();
            let pat: Vec<bool> = (0..m).map(|i| i % 3 != 1).collect();
            let c = toffoli::<f64>(m + 1, &controls, m, &pat, &ToffoliMode::NoAncilla).unwrap();
            check_oracle(&c, &controls, m, &pat);
        }
    }

    #[test]
    fn dirty_chain_and_split_are_exact() {
        let mut c = Circuit::<f64>::new(7);
        emit_mcx_dirty(&mut c, &[0, 1, 2, 3], 4, &[5, 6]);
        check_oracle(&c, &[0, 1, 2, 3], 4, &[true; 4]);
        let mut c = Circuit::<f64>::new(7);
        emit_mcx_dirty(&mut c, &[0, 1, 2, 3, 4], 5, &[6]);
        check_oracle(&c, &[0, 1, 2, 3, 4], 5, &[true; 5]);
    }

    #[test]
    fn log_depth_restores_ancilla() {
        let pat = [true, true, false, true, false];
        let mode = ToffoliMode::LogDepth(vec![6, 7, 8, 9]);
        let c = toffoli::<f64>(10, &[0, 1, 2, 3, 4], 5, &pat, &mode).unwrap();
        for input in 0..64usize {
            let hit = (0..5).all(|i| ((input >> i) & 1 == 1) == pat[i]);
            let want = if hit { input ^ 32 } else { input };
            let s = simulate_basis(&c, input).unwrap();
            assert!((s.amp(want).re - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            toffoli::<f64>(4, &[0, 1, 2], 3, &[true; 3], &ToffoliMode::LogDepth(vec![])).unwrap_err(),
            Error::InsufficientAncilla { need: 2, have: 0 }
        );
        assert_eq!(toffoli::<f64>(3, &[0, 1], 1, &[true; 2], &ToffoliMode::NoAncilla).unwrap_err(), Error::Overlap);
        assert!(toffoli::<f64>(3, &[0, 1], 2, &[true], &ToffoliMode::NoAncilla).is_err());
    }
}
