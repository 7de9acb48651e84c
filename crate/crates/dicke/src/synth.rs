//! Top-level synthesizers: the ancilla-assisted divide unitary, the
//! all-to-all and grid recursions, and Dicke / symmetric state preparation.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::circuit::{Circuit, ConnectivityGraph, Topology};
use crate::encoding::{emit_u_minus, emit_u_ob, emit_u_plus, emit_u_uo};
use crate::error::{Error, Result};
use crate::primitives::{emit_cqsp_ancilla, emit_relocate};
use crate::scalar::Scalar;
use crate::unary::{emit_dicke_path, emit_divide_path, emit_unary_amplitudes, DivideSpec};
use crate::util::{all_distinct, bits_for};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivideMethod {
    Path,
    Ancilla,
}

/// One divide unitary of a recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanNode {
    pub layer: usize,
    pub n: usize,
    pub m: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub ancilla: Vec<usize>,
    pub method: DivideMethod,
    pub depth: usize,
    pub size: usize,
}

/// A path Dicke unitary closing a branch of the recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct TailUnit {
    pub qubits: Vec<usize>,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisPlan {
    pub topology: ConnectivityGraph,
    pub n: usize,
    pub k: usize,
    /// `input[j]` holds unary position `s_{j+1}` of the input.
    pub input: Vec<usize>,
    pub nodes: Vec<PlanNode>,
    pub tail_units: Vec<TailUnit>,
    pub partition: Option<GridPartition>,
}

fn extents(qubits: &[usize]) -> String {
    let mut v = qubits.to_vec();
    v.sort_unstable();
    let mut out = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j + 1 < v.len() && v[j + 1] == v[j] + 1 {
            j += 1;
        }
        out.push(if i == j { format!("{}", v[i]) } else { format!("{}-{}", v[i], v[j]) });
        i = j + 1;
    }
    if out.is_empty() {
        "-".into()
    } else {
        out.join(",")
    }
}

impl SynthesisPlan {
    /// Text report, one line per recursion node and tail unit.
    pub fn report(&self) -> String {
        let mut s = String::new();
        let topo = match self.topology.topology {
            Topology::Complete => "complete".to_string(),
            Topology::Grid { n1, n2 } => format!("grid {n1}x{n2}"),
            Topology::Path => "path".to_string(),
            Topology::Custom => "custom".to_string(),
        };
        let _ = writeln!(s, "plan topology={topo} n={} k={} input={}", self.n, self.k, extents(&self.input));
        if let Some(p) = &self.partition {
            let _ = writeln!(s, "partition cell={}x{} cells={}", p.cell_dims.0, p.cell_dims.1, p.cells.len());
        }
        for d in &self.nodes {
            let method = match d.method {
                DivideMethod::Path => "path",
                DivideMethod::Ancilla => "ancilla",
            };
            let _ = writeln!(
                s,
                "divide layer={} n={} m={} S1={} S2={} ancilla={} method={} depth={} size={}",
                d.layer,
                d.n,
                d.m,
                extents(&d.left),
                extents(&d.right),
                extents(&d.ancilla),
                method,
                d.depth,
                d.size
            );
        }
        for t in &self.tail_units {
            let _ = writeln!(s, "tail n={} k={} qubits={}", t.qubits.len(), t.k, extents(&t.qubits));
        }
        s
    }
}

/// Divide unitary using `ancilla` (clean, restored). Falls back to the path
/// construction when fewer than `2k` ancillas are given.
pub fn divide_unitary_ancilla<T: Scalar>(num_qubits: usize, spec: &DivideSpec, ancilla: &[usize]) -> Result<Circuit<T>> {
    let mut c = Circuit::new(num_qubits);
    emit_divide_ancilla(&mut c, spec, ancilla)?;
    Ok(c)
}

pub fn emit_divide_ancilla<T: Scalar>(c: &mut Circuit<T>, spec: &DivideSpec, ancilla: &[usize]) -> Result<DivideMethod> {
    spec.validate()?;
    let k = spec.k;
    let all: Vec<usize> = spec.left.iter().chain(&spec.right).chain(ancilla).copied().collect();
    if !all_distinct(&all) {
        return Err(Error::Overlap);
    }
    if let Some(&q) = all.iter().find(|&&q| q >= c.num_qubits) {
        return Err(Error::QubitOutOfRange { index: q, num_qubits: c.num_qubits });
    }
    if ancilla.len() < 2 * k {
        emit_divide_path(c, spec)?;
        return Ok(DivideMethod::Path);
    }
    let (s1, s2) = (&spec.left[..], &spec.right[..]);
    let b = bits_for(k);
    // unary ℓ → binary ℓ on S2
    emit_u_uo(c, s2, ancilla)?;
    emit_u_ob(c, s2, ancilla)?;
    // binary ℓ → Σ_i √w(ℓ, i) |i⟩ on S1
    let table: Vec<Vec<f64>> = (0..1usize << b)
        .map(|l| {
            let mut row = vec![0.0; 1 << b];
            if l <= k {
                for (i, r) in row.iter_mut().enumerate().take(l + 1) {
                    *r = spec.weight(l, i).sqrt();
                }
                let norm = row.iter().map(|a| a * a).sum::<f64>().sqrt();
                row.iter_mut().for_each(|a| *a /= norm);
            } else {
                row[0] = 1.0;
            }
            row
        })
        .collect();
    emit_cqsp_ancilla(c, &s2[..b], &s1[..b], &table, ancilla)?;
    // binary → one-hot on both registers
    let (pool1, pool2) = if ancilla.len() >= 4 * k { ancilla.split_at(2 * k) } else { (ancilla, ancilla) };
    for (reg, pool) in [(s1, pool1), (s2, pool2)] {
        let mut t = Circuit::new(c.num_qubits);
        emit_u_ob(&mut t, reg, pool)?;
        c.append(&t.inverse());
    }
    // W = one-hot(ℓ - i), then clear S2 with one-hot(i + (ℓ - i))
    let (w, rest) = ancilla.split_at(k);
    emit_u_minus(c, s1, s2, w, rest)?;
    emit_u_plus(c, s1, w, s2, rest)?;
    for (&x, &y) in s2.iter().zip(w) {
        c.swap(x, y);
    }
    let (pool1, pool2) = if ancilla.len() >= 2 * k { ancilla.split_at(k) } else { (ancilla, ancilla) };
    for (reg, pool) in [(s1, pool1), (s2, pool2)] {
        let mut t = Circuit::new(c.num_qubits);
        emit_u_uo(&mut t, reg, pool)?;
        c.append(&t.inverse());
    }
    Ok(DivideMethod::Ancilla)
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if k == 0 || 2 * k > n {
        return Err(Error::InvalidParameters(format!("need 1 <= k <= n/2, got n={n} k={k}")));
    }
    Ok(())
}

struct Branch<T> {
    circuit: Circuit<T>,
    nodes: Vec<PlanNode>,
    tails: Vec<TailUnit>,
}

impl<T: Scalar> Branch<T> {
    fn new(num_qubits: usize) -> Self {
        Branch { circuit: Circuit::new(num_qubits), nodes: Vec::new(), tails: Vec::new() }
    }

    fn absorb(&mut self, other: Branch<T>) {
        self.circuit.append(&other.circuit);
        self.nodes.extend(other.nodes);
        self.tails.extend(other.tails);
    }

    fn tail(&mut self, k: usize, qubits: Vec<usize>) -> Result<()> {
        let k = k.min(qubits.len());
        emit_dicke_path(&mut self.circuit, k, &qubits)?;
        self.tails.push(TailUnit { qubits, k });
        Ok(())
    }

    fn divide(&mut self, layer: usize, spec: DivideSpec, ancilla: Vec<usize>, use_ancilla: bool) -> Result<()> {
        let mut sub = Circuit::new(self.circuit.num_qubits);
        let method = if use_ancilla {
            emit_divide_ancilla(&mut sub, &spec, &ancilla)?
        } else {
            emit_divide_path(&mut sub, &spec)?;
            DivideMethod::Path
        };
        self.circuit.append(&sub);
        self.nodes.push(PlanNode {
            layer,
            n: spec.n,
            m: spec.m,
            left: spec.left,
            right: spec.right,
            ancilla: if method == DivideMethod::Ancilla { ancilla } else { Vec::new() },
            method,
            depth: sub.depth(),
            size: sub.len(),
        });
        Ok(())
    }
}

/// Dicke state unitary on `n` qubits with all-to-all connectivity. The ones
/// enter on qubits `0..ℓ`.
pub fn synth_alltoall<T: Scalar>(n: usize, k: usize) -> Result<(Circuit<T>, SynthesisPlan)> {
    check_nk(n, k)?;
    let mut plan = SynthesisPlan {
        topology: ConnectivityGraph::complete(n),
        n,
        k,
        input: (0..k).collect(),
        nodes: Vec::new(),
        tail_units: Vec::new(),
        partition: None,
    };
    let branch = if 4 * k > n {
        let mut b = Branch::new(n);
        b.tail(k, (0..n).collect())?;
        b
    } else {
        alltoall_node(n, k, 0, n, 1)?
    };
    plan.nodes = branch.nodes;
    plan.tail_units = branch.tails;
    Ok((branch.circuit, plan))
}

/// Node on qubits `lo..hi` holding its ones on `lo..lo+k`. The divide sends
/// the right half's share to `mid..mid+k`; the node's other qubits are idle
/// and serve as clean ancilla.
fn alltoall_node<T: Scalar>(n: usize, k: usize, lo: usize, hi: usize, layer: usize) -> Result<Branch<T>> {
    let mut b = Branch::new(n);
    let size = hi - lo;
    if size <= 2 * k {
        b.tail(k, (lo..hi).collect())?;
        return Ok(b);
    }
    let mid = lo + size / 2;
    let spec = DivideSpec::new(size, hi - mid, k, (mid..mid + k).collect(), (lo..lo + k).collect())?;
    let ancilla: Vec<usize> = (lo + k..mid).chain(mid + k..hi).collect();
    b.divide(layer, spec, ancilla, true)?;
    let (left, right) = rayon::join(
        || alltoall_node::<T>(n, k, lo, mid, layer + 1),
        || alltoall_node::<T>(n, k, mid, hi, layer + 1),
    );
    b.absorb(left?);
    b.absorb(right?);
    Ok(b)
}

/// Rectangular cells tiling an `n1 × n2` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPartition {
    pub n1: usize,
    pub n2: usize,
    /// Nominal `(rows, cols)` of a cell; the last row and column of cells
    /// absorb the leftover grid lines.
    pub cell_dims: (usize, usize),
    pub row_bounds: Vec<(usize, usize)>,
    pub col_bounds: Vec<(usize, usize)>,
    /// `(i, j)` → qubits of cell `S_{i,j}`, row-major.
    pub cells: BTreeMap<(usize, usize), Vec<usize>>,
}

fn bounds(len: usize, width: usize) -> Vec<(usize, usize)> {
    let count = (len / width).max(1);
    (0..count).map(|i| (i * width, if i + 1 == count { len } else { (i + 1) * width })).collect()
}

impl GridPartition {
    /// Partition used by [`synth_grid`]: `⌈√(n1k/n2)⌉ × ⌈√(n2k/n1)⌉` cells when
    /// `k·n1 ≥ n2`, otherwise `1 × k` cells.
    pub fn new(n1: usize, n2: usize, k: usize) -> Self {
        let dims = if k * n1 >= n2 {
            let a = ((n1 * k) as f64 / n2 as f64).sqrt().ceil() as usize;
            let b = ((n2 * k) as f64 / n1 as f64).sqrt().ceil() as usize;
            (a.clamp(1, n1), b.clamp(1, n2))
        } else {
            (1, k.clamp(1, n2))
        };
        Self::with_cells(n1, n2, dims)
    }

    pub fn with_cells(n1: usize, n2: usize, cell_dims: (usize, usize)) -> Self {
        let row_bounds = bounds(n1, cell_dims.0);
        let col_bounds = bounds(n2, cell_dims.1);
        let mut cells = BTreeMap::new();
        for (i, &(r0, r1)) in row_bounds.iter().enumerate() {
            for (j, &(c0, c1)) in col_bounds.iter().enumerate() {
                let qs = (r0..r1).flat_map(|r| (c0..c1).map(move |c| r * n2 + c)).collect();
                cells.insert((i, j), qs);
            }
        }
        GridPartition { n1, n2, cell_dims, row_bounds, col_bounds, cells }
    }

    fn rect(&self, i: usize, j: usize) -> (usize, usize, usize, usize) {
        let (r0, r1) = self.row_bounds[i];
        let (c0, c1) = self.col_bounds[j];
        (r0, r1, c0, c1)
    }

    fn count(&self, ri: (usize, usize), cj: (usize, usize)) -> usize {
        let rows = self.row_bounds[ri.1 - 1].1 - self.row_bounds[ri.0].0;
        let cols = self.col_bounds[cj.1 - 1].1 - self.col_bounds[cj.0].0;
        rows * cols
    }
}

/// Boustrophedon walk of a rectangle: lines along `cols` (or rows when
/// `by_cols`), starting at corner `(start_bottom, start_right)`.
fn snake(rect: (usize, usize, usize, usize), n2: usize, by_cols: bool, from_bottom: bool, from_right: bool) -> Vec<usize> {
    let (r0, r1, c0, c1) = rect;
    let rows: Vec<usize> = if from_bottom { (r0..r1).rev().collect() } else { (r0..r1).collect() };
    let cols: Vec<usize> = if from_right { (c0..c1).rev().collect() } else { (c0..c1).collect() };
    let mut out = Vec::new();
    if by_cols {
        for (t, &c) in cols.iter().enumerate() {
            let it: Box<dyn Iterator<Item = &usize>> = if t % 2 == 0 { Box::new(rows.iter()) } else { Box::new(rows.iter().rev()) };
            out.extend(it.map(|&r| r * n2 + c));
        }
    } else {
        for (t, &r) in rows.iter().enumerate() {
            let it: Box<dyn Iterator<Item = &usize>> = if t % 2 == 0 { Box::new(cols.iter()) } else { Box::new(cols.iter().rev()) };
            out.extend(it.map(|&c| r * n2 + c));
        }
    }
    out
}

/// Dicke state unitary on the `n1 × n2` grid (`n1 ≤ n2`). The ones enter on
/// qubits `0..ℓ`.
pub fn synth_grid<T: Scalar>(n1: usize, n2: usize, k: usize) -> Result<(Circuit<T>, SynthesisPlan)> {
    if n1 == 0 || n1 > n2 {
        return Err(Error::InvalidParameters(format!("need 1 <= n1 <= n2, got {n1}x{n2}")));
    }
    let n = n1 * n2;
    check_nk(n, k)?;
    let mut plan = SynthesisPlan {
        topology: ConnectivityGraph::grid(n1, n2),
        n,
        k,
        input: (0..k).collect(),
        nodes: Vec::new(),
        tail_units: Vec::new(),
        partition: None,
    };
    let mut b = Branch::new(n);
    if n1 == 1 {
        b.tail(k, (0..n).collect())?;
    } else {
        let part = GridPartition::new(n1, n2, k);
        if k * n1 >= n2 {
            let rows = (0, part.row_bounds.len());
            let cols = (0, part.col_bounds.len());
            let entry = grid_entry(&part, k, rows, cols);
            emit_relocate(&mut b.circuit, n1, n2, &plan.input, &entry)?;
            grid_region(&mut b, &part, k, rows, cols, entry, 1)?;
        } else {
            grid_sweep(&mut b, &part, k)?;
        }
        plan.partition = Some(part);
    }
    plan.nodes = b.nodes;
    plan.tail_units = b.tails;
    Ok((b.circuit, plan))
}

/// What the region does with its top-left cell first.
enum GridStep {
    Vertical { s1: Vec<usize>, s2: Vec<usize>, split: usize },
    Horizontal { s1: Vec<usize>, s2: Vec<usize>, split: usize },
    Tail(Vec<usize>),
}

fn grid_step(part: &GridPartition, k: usize, rows: (usize, usize), cols: (usize, usize)) -> GridStep {
    let n2 = part.n2;
    let (i, j) = (rows.0, cols.0);
    let y = part.rect(i, j);
    // S2[k-1] = q[0] meets S1[0] = p[0] across the cell border
    if cols.1 - cols.0 > 1 {
        let q = snake(y, n2, true, false, true);
        let p = snake(part.rect(i, j + 1), n2, true, false, false);
        let s2 = q[..k].iter().rev().copied().collect();
        GridStep::Vertical { s1: p[..k].to_vec(), s2, split: cols.0 + (cols.1 - cols.0) / 2 }
    } else if rows.1 - rows.0 > 1 {
        let q = snake(y, n2, false, true, false);
        let p = snake(part.rect(i + 1, j), n2, false, false, false);
        let s2 = q[..k].iter().rev().copied().collect();
        GridStep::Horizontal { s1: p[..k].to_vec(), s2, split: rows.0 + (rows.1 - rows.0) / 2 }
    } else {
        GridStep::Tail(snake(y, n2, false, false, false))
    }
}

fn grid_entry(part: &GridPartition, k: usize, rows: (usize, usize), cols: (usize, usize)) -> Vec<usize> {
    match grid_step(part, k, rows, cols) {
        GridStep::Vertical { s2, .. } | GridStep::Horizontal { s2, .. } => s2,
        GridStep::Tail(p) => p[..k.min(p.len())].to_vec(),
    }
}

/// Region of cells `rows × cols` whose ones sit on `reg` inside its top-left
/// cell: columns are bisected first, then rows.
fn grid_region<T: Scalar>(
    b: &mut Branch<T>,
    part: &GridPartition,
    k: usize,
    rows: (usize, usize),
    cols: (usize, usize),
    reg: Vec<usize>,
    layer: usize,
) -> Result<()> {
    let (n1, n2) = (part.n1, part.n2);
    let entry = grid_entry(part, k, rows, cols);
    emit_relocate(&mut b.circuit, n1, n2, &reg, &entry)?;
    let total = part.count(rows, cols);
    let (s1, s2, left, right) = match grid_step(part, k, rows, cols) {
        GridStep::Tail(p) => return b.tail(k, p),
        GridStep::Vertical { s1, s2, split } => (s1, s2, (rows, (cols.0, split)), (rows, (split, cols.1))),
        GridStep::Horizontal { s1, s2, split } => (s1, s2, ((rows.0, split), cols), ((split, rows.1), cols)),
    };
    let m = part.count(right.0, right.1);
    let spec = DivideSpec::new(total, m, k, s1.clone(), s2.clone())?;
    b.divide(layer, spec, Vec::new(), false)?;
    let target = grid_entry(part, k, right.0, right.1);
    emit_relocate(&mut b.circuit, n1, n2, &s1, &target)?;
    grid_region(b, part, k, left.0, left.1, s2, layer + 1)?;
    grid_region(b, part, k, right.0, right.1, target, layer + 1)
}

/// Left-to-right sweep over column strips of width `k`: each strip keeps its
/// share and passes the rest to the next strip's first row.
fn grid_sweep<T: Scalar>(b: &mut Branch<T>, part: &GridPartition, k: usize) -> Result<()> {
    let (n1, n2) = (part.n1, part.n2);
    let strips = part.col_bounds.len();
    let reg = |j: usize| -> Vec<usize> {
        let c0 = part.col_bounds[j].0;
        (c0..c0 + k).collect()
    };
    for j in 0..strips {
        let (c0, c1) = part.col_bounds[j];
        if j + 1 < strips {
            let remaining = n1 * (n2 - c0);
            let here = n1 * (c1 - c0);
            let spec = DivideSpec::new(remaining, remaining - here, k, reg(j + 1), reg(j))?;
            b.divide(j + 1, spec, Vec::new(), false)?;
        }
        b.tail(k, snake((0, n1, c0, c1), n2, false, false, false))?;
    }
    Ok(())
}

fn dims_of(topology: &ConnectivityGraph) -> Result<(usize, usize)> {
    match topology.topology {
        Topology::Complete | Topology::Path => Ok((1, topology.num_vertices)),
        Topology::Grid { n1, n2 } => Ok((n1, n2)),
        Topology::Custom => Err(Error::InvalidParameters("custom topologies are not supported".into())),
    }
}

/// Dicke state unitary for `topology`.
pub fn synth_for<T: Scalar>(topology: &ConnectivityGraph, k: usize) -> Result<(Circuit<T>, SynthesisPlan)> {
    let (n1, n2) = dims_of(topology)?;
    let (c, mut plan) = match topology.topology {
        Topology::Complete => synth_alltoall(n2, k)?,
        _ => synth_grid(n1, n2, k)?,
    };
    plan.topology = topology.clone();
    Ok((c, plan))
}

/// `|D^n_k⟩` from `|0^n⟩`.
pub fn prepare_dicke<T: Scalar>(topology: &ConnectivityGraph, k: usize) -> Result<Circuit<T>> {
    let (u, plan) = synth_for::<T>(topology, k)?;
    let mut c = Circuit::new(u.num_qubits);
    for &q in &plan.input {
        c.x(q);
    }
    c.append(&u);
    Ok(c)
}

/// `Σ_ℓ α_ℓ |D^n_ℓ⟩` from `|0^n⟩`, with `amplitudes = α_0..α_k`.
pub fn prepare_symmetric<T: Scalar>(topology: &ConnectivityGraph, amplitudes: &[Complex64]) -> Result<Circuit<T>> {
    let k = amplitudes.len().saturating_sub(1);
    let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(norm));
    }
    let n = topology.num_vertices;
    let mut c = Circuit::new(n);
    if k == 0 {
        // only ℓ = 0: a global phase on |0^n⟩
        if amplitudes[0].arg() != 0.0 && n > 0 {
            c.u(0, 0.0, 0.0, 0.0, amplitudes[0].arg());
        }
        return Ok(c);
    }
    let (u, plan) = synth_for::<T>(topology, k)?;
    let (n1, n2) = dims_of(topology)?;
    // the input register is a path except on grids it wraps around
    let line: Vec<usize> = if matches!(topology.topology, Topology::Grid { .. }) {
        snake((0, n1, 0, n2), n2, false, false, false)[..k].to_vec()
    } else {
        plan.input.clone()
    };
    emit_unary_amplitudes(&mut c, amplitudes, &line)?;
    if line != plan.input {
        emit_relocate(&mut c, n1, n2, &line, &plan.input)?;
    }
    c.append(&u);
    Ok(c)
}
