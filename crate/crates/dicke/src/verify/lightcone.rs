use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::circuit::{Circuit, ConnectivityGraph, Gate, Topology};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayerKind {
    /// Every qubit carries a gate; `real[q]` is false for inserted identities.
    Single { real: Vec<bool> },
    Cnot { pairs: Vec<(usize, usize)> },
}

/// Layered digraph over columns `S_1..S_{d+1}`; layer `L_i` sits between
/// `S_i` and `S_{i+1}` and edges run from `S_{i+1}` to `S_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LightConeGraph {
    pub num_qubits: usize,
    pub layers: Vec<LayerKind>,
    pub raw_depth: usize,
}

impl LightConeGraph {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn cnot_layers(&self) -> usize {
        self.layers.iter().filter(|l| matches!(l, LayerKind::Cnot { .. })).count()
    }

    /// Directed edges `((column, qubit), (column, qubit))` with 1-based columns.
    ///
    /// A CNOT contributes its four edges. A single-qubit gate on `q` in `L_i`
    /// contributes pass-through edges `(v^q_{i'+1}, v^q_{i'})` for every
    /// `i' ≥ i`; duplicates are merged.
    pub fn edges(&self) -> BTreeSet<((usize, usize), (usize, usize))> {
        let d = self.layers.len();
        let mut out = BTreeSet::new();
        let mut first_single = vec![usize::MAX; self.num_qubits];
        for (i, layer) in self.layers.iter().enumerate() {
            match layer {
                LayerKind::Single { .. } => {
                    for f in first_single.iter_mut() {
                        *f = (*f).min(i + 1);
                    }
                }
                LayerKind::Cnot { pairs } => {
                    let col = i + 1;
                    for &(a, b) in pairs {
                        for &x in &[a, b] {
                            for &y in &[a, b] {
                                out.insert(((col + 1, x), (col, y)));
                            }
                        }
                    }
                }
            }
        }
        for (q, &f) in first_single.iter().enumerate() {
            if f != usize::MAX {
                for col in f..=d {
                    out.insert(((col + 1, q), (col, q)));
                }
            }
        }
        out
    }

    fn touched(&self, i: usize) -> Vec<bool> {
        match &self.layers[i] {
            LayerKind::Single { real } => vec![true; real.len()],
            LayerKind::Cnot { pairs } => {
                let mut t = vec![false; self.num_qubits];
                for &(a, b) in pairs {
                    t[a] = true;
                    t[b] = true;
                }
                t
            }
        }
    }
}

/// Normalizes `c` into alternating single-qubit / CNOT layers, starting with a
/// single-qubit layer, padding idle qubits of single-qubit layers with identities.
pub fn build_lightcone<T: Scalar>(c: &Circuit<T>) -> LightConeGraph {
    let report = c.asap_layering();
    let n = c.num_qubits;
    let mut layers = Vec::new();
    for layer in &report.layers {
        let mut real = vec![false; n];
        let mut pairs = Vec::new();
        for &gi in layer {
            match c.gates[gi] {
                Gate::U { q, .. } => real[q] = true,
                Gate::Cx { c, t } => pairs.push((c, t)),
            }
        }
        layers.push(LayerKind::Single { real });
        layers.push(LayerKind::Cnot { pairs });
    }
    if let Some(LayerKind::Cnot { pairs }) = layers.last() {
        if pairs.is_empty() {
            layers.pop();
        }
    }
    LightConeGraph { num_qubits: n, layers, raw_depth: report.depth }
}

/// Per-column reachable sets from one output qubit. Index `i` (0-based)
/// holds column `S_{i+1}`; the last entry is the origin column `S_{d+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachableSets {
    pub origin: usize,
    /// Vertices reachable by a directed path from the origin.
    pub reach: Vec<BTreeSet<usize>>,
    /// Reachable vertices that are also touched by a gate of `L_i`.
    pub sets: Vec<BTreeSet<usize>>,
}

impl ReachableSets {
    /// Input qubits inside the light cone.
    pub fn cone(&self) -> &BTreeSet<usize> {
        &self.reach[0]
    }

    pub fn doubling_holds(&self) -> bool {
        self.reach.windows(2).all(|w| w[0].len() <= 2 * w[1].len())
    }
}

pub fn reachable(g: &LightConeGraph, origin: usize) -> ReachableSets {
    let d = g.layers.len();
    let mut reach = vec![BTreeSet::new(); d + 1];
    reach[d].insert(origin);
    let has_pass = g.layers.iter().any(|l| matches!(l, LayerKind::Single { .. }));
    for i in (0..d).rev() {
        let mut next = BTreeSet::new();
        match &g.layers[i] {
            LayerKind::Single { .. } => next.clone_from(&reach[i + 1]),
            LayerKind::Cnot { pairs } => {
                let mut partner = vec![usize::MAX; g.num_qubits];
                for &(a, b) in pairs {
                    partner[a] = b;
                    partner[b] = a;
                }
                for &v in &reach[i + 1] {
                    if partner[v] != usize::MAX {
                        next.insert(v);
                        next.insert(partner[v]);
                    } else if has_pass {
                        next.insert(v);
                    }
                }
            }
        }
        reach[i] = next;
    }
    let mut sets: Vec<BTreeSet<usize>> = (0..d)
        .map(|i| {
            let t = g.touched(i);
            reach[i].iter().copied().filter(|&v| t[v]).collect()
        })
        .collect();
    sets.push(reach[d].clone());
    ReachableSets { origin, reach, sets }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub raw_depth: usize,
    pub normalized_depth: usize,
    pub cnot_layers: usize,
    pub origins: (usize, usize),
    pub cones_intersect: bool,
    pub doubling_ok: bool,
    pub caps_ok: bool,
    pub floor: usize,
    pub cone_sizes: Vec<(usize, Vec<usize>)>,
    pub pass: bool,
}

impl AuditReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "raw_depth {}", self.raw_depth).unwrap();
        writeln!(s, "normalized_depth {}", self.normalized_depth).unwrap();
        writeln!(s, "cnot_layers {}", self.cnot_layers).unwrap();
        for (origin, sizes) in &self.cone_sizes {
            let list = sizes.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            writeln!(s, "cone origin={origin} sizes={list}").unwrap();
        }
        writeln!(s, "cones_intersect {}", self.cones_intersect).unwrap();
        writeln!(s, "doubling {}", self.doubling_ok).unwrap();
        writeln!(s, "caps {}", self.caps_ok).unwrap();
        writeln!(s, "floor {}", self.floor).unwrap();
        writeln!(s, "result {}", if self.pass { "pass" } else { "fail" }).unwrap();
        s
    }
}

/// Depth floor implied by the light-cone argument, in CNOT layers.
///
/// Complete graph: the cones of two qubits can only meet once
/// `4^c ≥ n`. Grid and path: opposite corners are `n1 + n2 - 2` hops apart
/// and each cone grows by one hop per CNOT layer.
pub fn depth_floor(topology: &ConnectivityGraph) -> usize {
    let n = topology.num_vertices;
    match topology.topology {
        Topology::Complete | Topology::Custom => crate::util::ceil_log2(n).div_ceil(2),
        Topology::Grid { n1, n2 } => (n1 + n2 - 2).div_ceil(2),
        Topology::Path => (n - 1).div_ceil(2),
    }
}

/// Light-cone audit of a circuit claimed to prepare a Dicke state.
pub fn audit_lower_bound<T: Scalar>(c: &Circuit<T>, topology: &ConnectivityGraph) -> AuditReport {
    let g = build_lightcone(c);
    let n = c.num_qubits;
    let (a, b) = (0, n.saturating_sub(1));
    let ra = reachable(&g, a);
    let rb = reachable(&g, b);
    let cones_intersect = ra.cone().intersection(rb.cone()).next().is_some();
    let d = g.layers.len();
    let mut caps_ok = true;
    let mut doubling_ok = true;
    for r in [&ra, &rb] {
        doubling_ok &= r.doubling_holds();
        let dist = topology.distances(r.origin);
        let mut hops = 0;
        for i in (0..d).rev() {
            if matches!(g.layers[i], LayerKind::Cnot { .. }) {
                hops += 1;
            }
            let ball = dist.iter().filter(|&&x| x <= hops).count();
            let cap = match topology.topology {
                Topology::Complete => ball.min(1usize.checked_shl(hops as u32).unwrap_or(usize::MAX)),
                _ => ball,
            };
            caps_ok &= r.reach[i].len() <= cap;
        }
    }
    let floor = depth_floor(topology);
    let cone_sizes = [&ra, &rb].iter().map(|r| (r.origin, r.reach.iter().map(|s| s.len()).collect())).collect();
    let pass = cones_intersect && caps_ok && doubling_ok && g.cnot_layers() >= floor;
    AuditReport {
        raw_depth: g.raw_depth,
        normalized_depth: d,
        cnot_layers: g.cnot_layers(),
        origins: (a, b),
        cones_intersect,
        doubling_ok,
        caps_ok,
        floor,
        cone_sizes,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_two_qubit_gates_keeps_cones_local() {
        let mut c = Circuit::<f64>::new(3);
        c.h(0);
        c.x(1);
        c.h(0);
        let g = build_lightcone(&c);
        for q in 0..3 {
            let r = reachable(&g, q);
            assert!(r.reach.iter().all(|s| s.len() == 1 && s.contains(&q)));
        }
    }

    #[test]
    fn single_cnot_four_edges() {
        let mut c = Circuit::<f64>::new(2);
        c.cx(0, 1);
        let g = build_lightcone(&c);
        assert_eq!(g.layers.len(), 2);
        let cnot_edges: Vec<_> = g.edges().into_iter().filter(|((a, x), (_, y))| *a == 3 && x != y).collect();
        assert_eq!(cnot_edges.len(), 2);
        assert_eq!(g.edges().iter().filter(|((a, _), _)| *a == 3).count(), 4);
        let r = reachable(&g, 0);
        assert_eq!(r.sets[1], BTreeSet::from([0, 1]));
        assert_eq!(r.cone(), &BTreeSet::from([0, 1]));
    }

    #[test]
    fn empty_circuit_fails_audit() {
        let c = Circuit::<f64>::new(4);
        let r = audit_lower_bound(&c, &ConnectivityGraph::complete(4));
        assert!(!r.cones_intersect && !r.pass);
    }

    #[test]
    fn cnot_chain_on_path() {
        let mut c = Circuit::<f64>::new(5);
        for q in 0..4 {
            c.cx(q, q + 1);
        }
        let r = audit_lower_bound(&c, &ConnectivityGraph::path(5));
        assert!(r.cones_intersect && r.caps_ok && r.doubling_ok && r.pass);
        assert_eq!(r.floor, 2);
        assert!(r.to_text().contains("result pass"));
    }
}
