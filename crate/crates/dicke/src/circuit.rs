//! Gate IR, ASAP layering, connectivity graphs and the text circuit format.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A 1-qubit unitary in `(θ, φ, λ, γ)` form or a CNOT.
///
/// The 1-qubit matrix is
/// `e^{iγ} [[cos θ/2, -e^{iλ} sin θ/2], [e^{iφ} sin θ/2, e^{i(φ+λ)} cos θ/2]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate<T> {
    U { q: usize, theta: T, phi: T, lambda: T, gamma: T },
    Cx { c: usize, t: usize },
}

impl<T: Scalar> Gate<T> {
    pub fn u(q: usize, theta: T, phi: T, lambda: T, gamma: T) -> Self {
        Gate::U { q, theta, phi, lambda, gamma }
    }

    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::U { q, .. } => (q, None),
            Gate::Cx { c, t } => (c, Some(t)),
        }
    }

    pub fn touches(&self, q: usize) -> bool {
        let (a, b) = self.qubits();
        a == q || b == Some(q)
    }

    pub fn is_cx(&self) -> bool {
        matches!(self, Gate::Cx { .. })
    }

    pub fn adjoint(&self) -> Self {
        match *self {
            Gate::U { q, theta, phi, lambda, gamma } => Gate::U {
                q,
                theta: -theta,
                phi: -lambda,
                lambda: -phi,
                gamma: -gamma,
            },
            g @ Gate::Cx { .. } => g,
        }
    }

    /// Matrix of a 1-qubit gate; `None` for a CNOT.
    pub fn matrix(&self) -> Option<[[Complex<T>; 2]; 2]> {
        match *self {
            Gate::U { theta, phi, lambda, gamma, .. } => {
                let half = theta / T::of(2.0);
                let (s, c) = half.sin_cos();
                let g = Complex::from_polar(T::one(), gamma);
                let el = Complex::from_polar(T::one(), lambda);
                let ep = Complex::from_polar(T::one(), phi);
                let epl = Complex::from_polar(T::one(), phi + lambda);
                Some([
                    [g * c, -(g * el) * s],
                    [g * ep * s, g * epl * c],
                ])
            }
            Gate::Cx { .. } => None,
        }
    }

    fn remap(&self, map: impl Fn(usize) -> usize) -> Self {
        match *self {
            Gate::U { q, theta, phi, lambda, gamma } => Gate::U { q: map(q), theta, phi, lambda, gamma },
            Gate::Cx { c, t } => Gate::Cx { c: map(c), t: map(t) },
        }
    }
}

/// Ordered gate list with a declared data/ancilla register layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T> {
    pub num_qubits: usize,
    pub gates: Vec<Gate<T>>,
    pub data_qubits: Vec<usize>,
    pub ancilla_qubits: Vec<usize>,
}

impl<T: Scalar> Circuit<T> {
    /// Empty circuit whose qubits are all data qubits.
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
            data_qubits: (0..num_qubits).collect(),
            ancilla_qubits: Vec::new(),
        }
    }

    pub fn with_registers(num_qubits: usize, data: Vec<usize>, ancilla: Vec<usize>) -> Result<Self> {
        let c = Circuit { num_qubits, gates: Vec::new(), data_qubits: data, ancilla_qubits: ancilla };
        c.validate()?;
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: Gate<T>) {
        self.gates.push(g);
    }

    pub fn cx(&mut self, c: usize, t: usize) {
        assert_ne!(c, t, "cnot control equals target");
        self.gates.push(Gate::Cx { c, t });
    }

    pub fn u(&mut self, q: usize, theta: f64, phi: f64, lambda: f64, gamma: f64) {
        self.gates.push(Gate::u(q, T::of(theta), T::of(phi), T::of(lambda), T::of(gamma)));
    }

    pub fn x(&mut self, q: usize) {
        self.u(q, std::f64::consts::PI, 0.0, std::f64::consts::PI, 0.0);
    }

    pub fn h(&mut self, q: usize) {
        self.u(q, std::f64::consts::FRAC_PI_2, 0.0, std::f64::consts::PI, 0.0);
    }

    pub fn ry(&mut self, q: usize, theta: f64) {
        self.u(q, theta, 0.0, 0.0, 0.0);
    }

    /// `diag(e^{-iθ/2}, e^{iθ/2})`.
    pub fn rz(&mut self, q: usize, theta: f64) {
        self.u(q, 0.0, 0.0, theta, -theta / 2.0);
    }

    /// `diag(1, e^{iθ})`.
    pub fn phase(&mut self, q: usize, theta: f64) {
        self.u(q, 0.0, 0.0, theta, 0.0);
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        self.cx(a, b);
        self.cx(b, a);
        self.cx(a, b);
    }

    /// Appends the gates of `other`, which must act on the same qubit count.
    pub fn append(&mut self, other: &Circuit<T>) {
        assert_eq!(self.num_qubits, other.num_qubits, "append: qubit count mismatch");
        self.gates.extend_from_slice(&other.gates);
    }

    /// Appends `other` with qubit `i` of `other` relabelled to `map[i]`.
    pub fn append_mapped(&mut self, other: &Circuit<T>, map: &[usize]) {
        assert!(map.len() >= other.num_qubits);
        self.gates.extend(other.gates.iter().map(|g| g.remap(|q| map[q])));
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_qubits;
        let check = |q: usize| {
            if q >= n {
                Err(Error::QubitOutOfRange { index: q, num_qubits: n })
            } else {
                Ok(())
            }
        };
        for g in &self.gates {
            match *g {
                Gate::U { q, .. } => check(q)?,
                Gate::Cx { c, t } => {
                    check(c)?;
                    check(t)?;
                    if c == t {
                        return Err(Error::InvalidParameters("cnot control equals target".into()));
                    }
                }
            }
        }
        let mut all: Vec<usize> = self.data_qubits.iter().chain(&self.ancilla_qubits).copied().collect();
        for &q in &all {
            check(q)?;
        }
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Overlap);
        }
        Ok(())
    }

    pub fn compose(&self, other: &Circuit<T>) -> Result<Circuit<T>> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::QubitCountMismatch(self.num_qubits, other.num_qubits));
        }
        let mut c = self.clone();
        c.gates.extend_from_slice(&other.gates);
        Ok(c)
    }

    pub fn inverse(&self) -> Circuit<T> {
        let mut c = self.clone();
        c.gates = self.gates.iter().rev().map(Gate::adjoint).collect();
        c
    }

    /// Relabels qubit `i` to `perm[i]` inside a register of `num_qubits` qubits.
    pub fn remap_qubits(&self, perm: &[usize], num_qubits: usize) -> Result<Circuit<T>> {
        if perm.len() < self.num_qubits {
            return Err(Error::QubitCountMismatch(perm.len(), self.num_qubits));
        }
        if !crate::util::all_distinct(&perm[..self.num_qubits]) {
            return Err(Error::NotInjective);
        }
        if let Some(&q) = perm[..self.num_qubits].iter().find(|&&q| q >= num_qubits) {
            return Err(Error::QubitOutOfRange { index: q, num_qubits });
        }
        Ok(Circuit {
            num_qubits,
            gates: self.gates.iter().map(|g| g.remap(|q| perm[q])).collect(),
            data_qubits: self.data_qubits.iter().map(|&q| perm[q]).collect(),
            ancilla_qubits: self.ancilla_qubits.iter().map(|&q| perm[q]).collect(),
        })
    }

    pub fn cx_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_cx()).count()
    }

    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for g in &self.gates {
            let (a, b) = g.qubits();
            let l = 1 + b.map_or(level[a], |b| level[a].max(level[b]));
            level[a] = l;
            if let Some(b) = b {
                level[b] = l;
            }
            depth = depth.max(l);
        }
        depth
    }

    /// Greedy earliest-slot layering.
    pub fn asap_layering(&self) -> DepthReport {
        let mut level = vec![0usize; self.num_qubits];
        let mut layers: Vec<Vec<usize>> = Vec::new();
        for (i, g) in self.gates.iter().enumerate() {
            let (a, b) = g.qubits();
            let l = b.map_or(level[a], |b| level[a].max(level[b]));
            level[a] = l + 1;
            if let Some(b) = b {
                level[b] = l + 1;
            }
            if layers.len() <= l {
                layers.resize_with(l + 1, Vec::new);
            }
            layers[l].push(i);
        }
        DepthReport { depth: layers.len(), size: self.gates.len(), layers }
    }

    /// Every CNOT whose endpoints are not adjacent in `g`, as `(gate index, gate)`.
    pub fn validate_connectivity(&self, g: &ConnectivityGraph) -> Result<Vec<(usize, Gate<T>)>> {
        if self.num_qubits != g.num_vertices {
            return Err(Error::QubitCountMismatch(self.num_qubits, g.num_vertices));
        }
        Ok(self
            .gates
            .iter()
            .enumerate()
            .filter(|(_, gate)| match **gate {
                Gate::Cx { c, t } => !g.has_edge(c, t),
                Gate::U { .. } => false,
            })
            .map(|(i, gate)| (i, *gate))
            .collect())
    }

    /// Serializes to the line-oriented text format.
    pub fn to_text(&self) -> String {
        let join = |v: &[usize]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",");
        let mut s = String::new();
        writeln!(s, "QUBITS {}", self.num_qubits).unwrap();
        writeln!(s, "DATA {}", join(&self.data_qubits)).unwrap();
        writeln!(s, "ANCILLA {}", join(&self.ancilla_qubits)).unwrap();
        for g in &self.gates {
            match *g {
                Gate::U { q, theta, phi, lambda, gamma } => {
                    writeln!(s, "U {q} {theta:.16e} {phi:.16e} {lambda:.16e} {gamma:.16e}").unwrap()
                }
                Gate::Cx { c, t } => writeln!(s, "CX {c} {t}").unwrap(),
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Circuit<T>> {
        let mut num_qubits = None;
        let mut data = None;
        let mut ancilla = Vec::new();
        let mut gates = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Parse { line: ln + 1, msg: msg.to_string() };
            let mut parts = line.split_whitespace();
            let head = parts.next().unwrap();
            let rest: Vec<&str> = parts.collect();
            let index = |s: &str| s.parse::<usize>().map_err(|_| err("bad qubit index"));
            let list = |rest: &[&str]| -> Result<Vec<usize>> {
                rest.join("")
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>().map_err(|_| err("bad index list")))
                    .collect()
            };
            match head {
                "QUBITS" => {
                    if rest.len() != 1 {
                        return Err(err("QUBITS takes one value"));
                    }
                    num_qubits = Some(index(rest[0])?);
                }
                "DATA" => data = Some(list(&rest)?),
                "ANCILLA" => ancilla = list(&rest)?,
                "CX" => {
                    if rest.len() != 2 {
                        return Err(err("CX takes two indices"));
                    }
                    let (c, t) = (index(rest[0])?, index(rest[1])?);
                    if c == t {
                        return Err(err("cnot control equals target"));
                    }
                    gates.push(Gate::Cx { c, t });
                }
                "U" => {
                    if rest.len() != 5 {
                        return Err(err("U takes a qubit and four angles"));
                    }
                    let q = index(rest[0])?;
                    let mut a = [T::zero(); 4];
                    for (slot, s) in a.iter_mut().zip(&rest[1..]) {
                        *slot = s.parse::<T>().map_err(|_| err("bad angle"))?;
                    }
                    gates.push(Gate::U { q, theta: a[0], phi: a[1], lambda: a[2], gamma: a[3] });
                }
                _ => return Err(err("unknown directive")),
            }
        }
        let num_qubits = num_qubits.ok_or(Error::Parse { line: 0, msg: "missing QUBITS header".into() })?;
        let c = Circuit {
            num_qubits,
            gates,
            data_qubits: data.unwrap_or_else(|| (0..num_qubits).collect()),
            ancilla_qubits: ancilla,
        };
        c.validate()?;
        Ok(c)
    }
}

/// Result of ASAP layering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthReport {
    pub depth: usize,
    pub size: usize,
    pub layers: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Complete,
    Grid { n1: usize, n2: usize },
    Path,
    Custom,
}

/// Undirected graph over qubit indices restricting CNOT placement.
///
/// Edges of the structured topologies are computed on demand so that large
/// complete graphs cost nothing to build. Grid vertex `(r, c)` is `r * n2 + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectivityGraph {
    pub num_vertices: usize,
    pub topology: Topology,
    custom_edges: BTreeSet<(usize, usize)>,
}

impl ConnectivityGraph {
    pub fn complete(n: usize) -> Self {
        ConnectivityGraph { num_vertices: n, topology: Topology::Complete, custom_edges: BTreeSet::new() }
    }

    pub fn grid(n1: usize, n2: usize) -> Self {
        ConnectivityGraph { num_vertices: n1 * n2, topology: Topology::Grid { n1, n2 }, custom_edges: BTreeSet::new() }
    }

    pub fn path(n: usize) -> Self {
        ConnectivityGraph { num_vertices: n, topology: Topology::Path, custom_edges: BTreeSet::new() }
    }

    pub fn custom(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let custom_edges = edges.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))).collect();
        ConnectivityGraph { num_vertices: n, topology: Topology::Custom, custom_edges }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        if a == b || a >= self.num_vertices || b >= self.num_vertices {
            return false;
        }
        let (a, b) = (a.min(b), a.max(b));
        match self.topology {
            Topology::Complete => true,
            Topology::Path => b == a + 1,
            Topology::Grid { n2, .. } => (b == a + 1 && b % n2 != 0) || b == a + n2,
            Topology::Custom => self.custom_edges.contains(&(a, b)),
        }
    }

    /// All edges as ordered pairs `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        match self.topology {
            Topology::Custom => self.custom_edges.iter().copied().collect(),
            _ => {
                let n = self.num_vertices;
                let mut out = Vec::new();
                for a in 0..n {
                    for b in self.neighbors(a) {
                        if a < b {
                            out.push((a, b));
                        }
                    }
                }
                out
            }
        }
    }

    pub fn neighbors(&self, a: usize) -> Vec<usize> {
        let n = self.num_vertices;
        match self.topology {
            Topology::Complete => (0..n).filter(|&b| b != a).collect(),
            Topology::Path => [a.wrapping_sub(1), a + 1].into_iter().filter(|&b| b < n).collect(),
            Topology::Grid { n2, .. } => {
                let mut v = Vec::with_capacity(4);
                if a >= n2 {
                    v.push(a - n2);
                }
                if !a.is_multiple_of(n2) {
                    v.push(a - 1);
                }
                if !(a + 1).is_multiple_of(n2) && a + 1 < n {
                    v.push(a + 1);
                }
                if a + n2 < n {
                    v.push(a + n2);
                }
                v
            }
            Topology::Custom => (0..n).filter(|&b| self.has_edge(a, b)).collect(),
        }
    }

    /// Breadth-first hop distances from `src`; unreachable vertices get `usize::MAX`.
    pub fn distances(&self, src: usize) -> Vec<usize> {
        if let Topology::Complete = self.topology {
            return (0..self.num_vertices).map(|v| usize::from(v != src)).collect();
        }
        let mut dist = vec![usize::MAX; self.num_vertices];
        let mut queue = std::collections::VecDeque::from([src]);
        dist[src] = 0;
        while let Some(a) = queue.pop_front() {
            for b in self.neighbors(a) {
                if dist[b] == usize::MAX {
                    dist[b] = dist[a] + 1;
                    queue.push_back(b);
                }
            }
        }
        dist
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(c: usize, t: usize) -> Gate<f64> {
        Gate::Cx { c, t }
    }

    #[test]
    fn layering_examples() {
        let c = Circuit::<f64>::new(4);
        let r = c.asap_layering();
        assert_eq!((r.depth, r.size), (0, 0));

        let mut c = Circuit::<f64>::new(4);
        c.gates = vec![cx(0, 1), cx(2, 3)];
        assert_eq!(c.asap_layering().depth, 1);

        c.gates = vec![cx(0, 1), cx(1, 2), cx(0, 3)];
        let r = c.asap_layering();
        assert_eq!(r.depth, 2);
        assert_eq!(r.layers, vec![vec![0], vec![1, 2]]);
        assert_eq!(c.depth(), 2);
    }

    #[test]
    fn connectivity_examples() {
        let p = ConnectivityGraph::path(3);
        let mut c = Circuit::<f64>::new(3);
        c.cx(0, 1);
        assert!(c.validate_connectivity(&p).unwrap().is_empty());
        let mut c = Circuit::<f64>::new(3);
        c.cx(0, 2);
        let v = c.validate_connectivity(&p).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].0, 0);
        let mut c = Circuit::<f64>::new(3);
        c.x(0);
        c.h(2);
        assert!(c.validate_connectivity(&ConnectivityGraph::custom(3, [])).unwrap().is_empty());
        assert!(c.validate_connectivity(&ConnectivityGraph::path(4)).is_err());
    }

    #[test]
    fn graph_edges() {
        let g = ConnectivityGraph::grid(3, 4);
        assert_eq!(g.num_vertices, 12);
        assert_eq!(g.edges().len(), 3 * 3 + 2 * 4);
        assert!(g.has_edge(3, 7) && !g.has_edge(3, 4));
        assert_eq!(ConnectivityGraph::complete(6).edges().len(), 15);
        assert_eq!(ConnectivityGraph::grid(1, 7).edges(), ConnectivityGraph::path(7).edges());
        assert_eq!(g.distances(0)[11], 5);
    }

    #[test]
    fn compose_inverse_remap() {
        let mut c = Circuit::<f64>::new(2);
        c.cx(0, 1);
        assert_eq!(c.inverse().gates, vec![cx(0, 1)]);
        let r = c.remap_qubits(&[2, 5], 6).unwrap();
        assert_eq!(r.gates, vec![cx(2, 5)]);
        assert_eq!(c.remap_qubits(&[1, 1], 6), Err(Error::NotInjective));
        assert!(c.compose(&Circuit::new(3)).is_err());
    }

    #[test]
    fn text_round_trip_is_exact() {
        let mut c = Circuit::<f64>::with_registers(3, vec![0, 1], vec![2]).unwrap();
        c.u(0, 0.1, 1.0 / 3.0, -2.5e-17, std::f64::consts::PI);
        c.cx(2, 1);
        c.ry(1, 1e300);
        let back = Circuit::<f64>::from_text(&c.to_text()).unwrap();
        assert_eq!(back, c);

        let mut c32 = Circuit::<f32>::new(1);
        c32.u(0, 0.1, 0.2, 0.3, 1.0 / 7.0);
        assert_eq!(Circuit::<f32>::from_text(&c32.to_text()).unwrap(), c32);
    }

    #[test]
    fn parse_errors() {
        assert!(Circuit::<f64>::from_text("CX 0 1").is_err());
        assert!(Circuit::<f64>::from_text("QUBITS 2\nCX 0 0").is_err());
        assert!(Circuit::<f64>::from_text("QUBITS 2\nCX 0 5").is_err());
        assert!(Circuit::<f64>::from_text("QUBITS 2\nFOO").is_err());
        assert!(Circuit::<f64>::from_text("QUBITS 2\nDATA 0,1\nANCILLA 1").is_err());
    }

    #[test]
    fn adjoint_is_exact_inverse_of_parameters() {
        let g = Gate::<f64>::u(0, 0.3, 0.7, -1.1, 0.2);
        let a = g.matrix().unwrap();
        let b = g.adjoint().matrix().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let p: Complex<f64> = (0..2).map(|k| a[i][k] * b[k][j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((p - Complex::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }
}
