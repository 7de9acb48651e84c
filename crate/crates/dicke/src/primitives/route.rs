use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// SWAP network on the `n1 × n2` grid (qubit `r * n2 + c`) moving the contents
/// of `blocks[i]` onto `blocks[perm[i]]`, position by position.
pub fn grid_route<T: Scalar>(n1: usize, n2: usize, blocks: &[Vec<usize>], perm: &[usize]) -> Result<Circuit<T>> {
    let mut c = Circuit::new(n1 * n2);
    emit_grid_route(&mut c, n1, n2, blocks, perm)?;
    Ok(c)
}

pub fn emit_grid_route<T: Scalar>(
    c: &mut Circuit<T>,
    n1: usize,
    n2: usize,
    blocks: &[Vec<usize>],
    perm: &[usize],
) -> Result<()> {
    if perm.len() != blocks.len() {
        return Err(Error::InvalidParameters("map length differs from block count".into()));
    }
    let mut seen = vec![false; blocks.len()];
    for &p in perm {
        if p >= blocks.len() || seen[p] {
            return Err(Error::NotInjective);
        }
        seen[p] = true;
    }
    let all: Vec<usize> = blocks.iter().flatten().copied().collect();
    if let Some(&q) = all.iter().find(|&&q| q >= n1 * n2) {
        return Err(Error::QubitOutOfRange { index: q, num_qubits: n1 * n2 });
    }
    if !crate::util::all_distinct(&all) {
        return Err(Error::Overlap);
    }
    if blocks.iter().any(|b| b.len() != blocks[0].len()) {
        return Err(Error::InvalidParameters("blocks differ in width".into()));
    }
    let mut moves = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        for (j, &q) in b.iter().enumerate() {
            if q != blocks[perm[i]][j] {
                moves.push((q, blocks[perm[i]][j]));
            }
        }
    }
    emit_moves(c, n2, &moves);
    Ok(())
}

/// Moves the contents of `from[j]` onto `to[j]`. Qubits of `to` outside `from`
/// are assumed to hold `|0⟩` and are moved onto the vacated qubits.
pub(crate) fn emit_relocate<T: Scalar>(c: &mut Circuit<T>, n1: usize, n2: usize, from: &[usize], to: &[usize]) -> Result<()> {
    if from.len() != to.len() {
        return Err(Error::InvalidParameters("relocation lists differ in length".into()));
    }
    if !crate::util::all_distinct(from) || !crate::util::all_distinct(to) {
        return Err(Error::NotInjective);
    }
    if let Some(&q) = from.iter().chain(to).find(|&&q| q >= n1 * n2) {
        return Err(Error::QubitOutOfRange { index: q, num_qubits: n1 * n2 });
    }
    let mut moves: Vec<(usize, usize)> = from.iter().zip(to).filter(|(a, b)| a != b).map(|(&a, &b)| (a, b)).collect();
    let vacated = from.iter().filter(|q| !to.contains(q));
    let filled = to.iter().filter(|q| !from.contains(q));
    moves.extend(filled.zip(vacated).map(|(&a, &b)| (a, b)));
    emit_moves(c, n2, &moves);
    Ok(())
}

fn emit_moves<T: Scalar>(c: &mut Circuit<T>, n2: usize, moves: &[(usize, usize)]) {
    if moves.is_empty() {
        return;
    }
    let (mut r0, mut r1, mut c0, mut c1) = (usize::MAX, 0, usize::MAX, 0);
    for &(a, b) in moves {
        for q in [a, b] {
            r0 = r0.min(q / n2);
            r1 = r1.max(q / n2);
            c0 = c0.min(q % n2);
            c1 = c1.max(q % n2);
        }
    }
    let (rows, cols) = (r1 - r0 + 1, c1 - c0 + 1);
    let local = |q: usize| (q / n2 - r0) * cols + (q % n2 - c0);
    let mut dest: Vec<usize> = (0..rows * cols).collect();
    for &(a, b) in moves {
        dest[local(a)] = local(b);
    }
    for swap in route_rectangle(rows, cols, &dest) {
        let g = |p: usize| (p / cols + r0) * n2 + p % cols + c0;
        c.swap(g(swap.0), g(swap.1));
    }
}

/// Swaps (row-major local indices) realizing `dest` on a `rows × cols` grid:
/// column sort, row sort, column sort, each by odd–even transposition.
fn route_rectangle(rows: usize, cols: usize, dest: &[usize]) -> Vec<(usize, usize)> {
    // token currently at position p is heading to dest[p]
    let mut tok: Vec<usize> = dest.to_vec();
    // phase-1 row for each position, from a decomposition of the column →
    // destination-column multigraph into perfect matchings
    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); cols];
    for p in 0..rows * cols {
        edges[p % cols].push((tok[p] % cols, p));
    }
    let mut mid_row = vec![0usize; rows * cols];
    for (round, matching) in perfect_matchings(cols, rows, edges).into_iter().enumerate() {
        for p in matching {
            mid_row[p] = round;
        }
    }
    let mut out = Vec::new();
    let mut key: Vec<usize> = (0..rows * cols).map(|p| mid_row[p]).collect();
    sort_lines(rows, cols, true, &mut key, &mut tok, &mut out);
    let mut key: Vec<usize> = tok.iter().map(|&d| d % cols).collect();
    sort_lines(rows, cols, false, &mut key, &mut tok, &mut out);
    let mut key: Vec<usize> = tok.iter().map(|&d| d / cols).collect();
    sort_lines(rows, cols, true, &mut key, &mut tok, &mut out);
    debug_assert!(tok.iter().enumerate().all(|(p, &d)| p == d));
    out
}

fn sort_lines(
    rows: usize,
    cols: usize,
    vertical: bool,
    key: &mut [usize],
    tok: &mut [usize],
    out: &mut Vec<(usize, usize)>,
) {
    let (lines, len) = if vertical { (cols, rows) } else { (rows, cols) };
    let at = |line: usize, i: usize| if vertical { i * cols + line } else { line * cols + i };
    for round in 0..len {
        for line in 0..lines {
            let mut i = round % 2;
            while i + 1 < len {
                let (a, b) = (at(line, i), at(line, i + 1));
                if key[a] > key[b] {
                    key.swap(a, b);
                    tok.swap(a, b);
                    out.push((a, b));
                }
                i += 2;
            }
        }
    }
}

/// Splits a `degree`-regular bipartite multigraph (left vertex `u` has edges
/// `(right, id)`) into `degree` perfect matchings of edge ids.
fn perfect_matchings(n: usize, degree: usize, mut edges: Vec<Vec<(usize, usize)>>) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(degree);
    for _ in 0..degree {
        let mut match_right: Vec<Option<(usize, usize)>> = vec![None; n];
        for u in 0..n {
            let mut visited = vec![false; n];
            let ok = augment(u, &edges, &mut match_right, &mut visited);
            debug_assert!(ok, "regular bipartite graphs have perfect matchings");
        }
        let mut ids = Vec::with_capacity(n);
        for (v, m) in match_right.iter().enumerate() {
            let (u, id) = m.expect("perfect");
            let pos = edges[u].iter().position(|&(r, e)| r == v && e == id).unwrap();
            edges[u].swap_remove(pos);
            ids.push(id);
        }
        out.push(ids);
    }
    out
}

fn augment(
    u: usize,
    edges: &[Vec<(usize, usize)>],
    match_right: &mut [Option<(usize, usize)>],
    visited: &mut [bool],
) -> bool {
    for &(v, id) in &edges[u] {
        if visited[v] {
            continue;
        }
        visited[v] = true;
        let free = match match_right[v] {
            None => true,
            Some((w, _)) => augment(w, edges, match_right, visited),
        };
        if free {
            match_right[v] = Some((u, id));
            return true;
        }
    }
    false
}
