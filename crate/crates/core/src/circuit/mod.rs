//! Layered Clifford circuits over `H`, `X`, `Z`, `CX` and `CZ`.
//!
//! Qubits are 1-based. A layer is a set of gates on pairwise disjoint qubits,
//! so the depth of a circuit is its number of layers.

pub mod phase;
pub mod synth;

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Adjacency;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    X,
    Z,
    Cx,
    Cz,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::H | GateKind::X | GateKind::Z => 1,
            GateKind::Cx | GateKind::Cz => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Z => "z",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One gate. For `CX` the qubits are `[control, target]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GateRepr", into = "GateRepr")]
pub struct Gate {
    kind: GateKind,
    // Single-qubit gates leave the second slot at 0.
    qubits: [usize; 2],
}

#[derive(Serialize, Deserialize)]
struct GateRepr {
    kind: GateKind,
    qubits: Vec<usize>,
}

impl TryFrom<GateRepr> for Gate {
    type Error = Error;

    fn try_from(r: GateRepr) -> Result<Self> {
        Gate::new(r.kind, r.qubits)
    }
}

impl From<Gate> for GateRepr {
    fn from(g: Gate) -> Self {
        GateRepr { kind: g.kind, qubits: g.qubits().to_vec() }
    }
}

impl Gate {
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::Circuit(format!("{kind} takes {} qubit(s), got {qubits:?}", kind.arity())));
        }
        if qubits.contains(&0) {
            return Err(Error::Circuit(format!("qubit indices are 1-based, got {qubits:?}")));
        }
        if kind.arity() == 2 && qubits[0] == qubits[1] {
            return Err(Error::Circuit(format!("{kind} needs two distinct qubits, got {qubits:?}")));
        }
        Ok(Self { kind, qubits: [qubits[0], qubits.get(1).copied().unwrap_or(0)] })
    }

    fn one(kind: GateKind, q: usize) -> Self {
        assert!(q >= 1, "qubit indices are 1-based");
        Self { kind, qubits: [q, 0] }
    }

    fn two(kind: GateKind, a: usize, b: usize) -> Self {
        assert!(a >= 1 && b >= 1 && a != b, "{kind} needs two distinct 1-based qubits, got {a}, {b}");
        Self { kind, qubits: [a, b] }
    }

    pub fn h(q: usize) -> Self {
        Self::one(GateKind::H, q)
    }

    pub fn x(q: usize) -> Self {
        Self::one(GateKind::X, q)
    }

    pub fn z(q: usize) -> Self {
        Self::one(GateKind::Z, q)
    }

    /// Panics if `control == target`.
    pub fn cx(control: usize, target: usize) -> Self {
        Self::two(GateKind::Cx, control, target)
    }

    /// Panics if `a == b`.
    pub fn cz(a: usize, b: usize) -> Self {
        Self::two(GateKind::Cz, a, b)
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits[..self.kind.arity()]
    }

    fn relabel(&self, map: impl Fn(usize) -> usize) -> Gate {
        let mut g = *self;
        for q in &mut g.qubits[..self.kind.arity()] {
            *q = map(*q);
        }
        g
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for (k, q) in self.qubits().iter().enumerate() {
            write!(f, "{}q[{}]", if k == 0 { " " } else { "," }, q - 1)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CircuitRepr")]
pub struct Circuit {
    n_qubits: usize,
    layers: Vec<Vec<Gate>>,
}

#[derive(Deserialize)]
struct CircuitRepr {
    n_qubits: usize,
    layers: Vec<Vec<Gate>>,
}

impl TryFrom<CircuitRepr> for Circuit {
    type Error = Error;

    fn try_from(r: CircuitRepr) -> Result<Self> {
        let mut c = Circuit::new(r.n_qubits);
        for layer in r.layers {
            c.push_layer(layer)?;
        }
        Ok(c)
    }
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, layers: Vec::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Layers that contain at least one gate other than `H`.
    pub fn non_h_depth(&self) -> usize {
        self.layers.iter().filter(|l| l.iter().any(|g| g.kind != GateKind::H)).count()
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flatten()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    fn check_layer(&self, layer: &[Gate]) -> Result<()> {
        let mut used = Vec::with_capacity(2 * layer.len());
        for g in layer {
            for &q in g.qubits() {
                if q > self.n_qubits {
                    return Err(Error::Circuit(format!("{g} addresses qubit {q} of {}", self.n_qubits)));
                }
                used.push(q);
            }
        }
        used.sort_unstable();
        match used.windows(2).find(|w| w[0] == w[1]) {
            Some(w) => Err(Error::Circuit(format!("qubit {} appears twice in one layer", w[0]))),
            None => Ok(()),
        }
    }

    /// Appends a layer; empty layers are dropped.
    pub fn push_layer(&mut self, layer: Vec<Gate>) -> Result<()> {
        self.check_layer(&layer)?;
        if !layer.is_empty() {
            self.layers.push(layer);
        }
        Ok(())
    }

    /// Re-checks every layer.
    pub fn validate(&self) -> Result<()> {
        self.layers.iter().try_for_each(|l| self.check_layer(l))
    }

    /// Appends `other` after `self`.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::Shape(format!("cannot append {} qubits to {}", other.n_qubits, self.n_qubits)));
        }
        self.layers.extend(other.layers.iter().cloned());
        Ok(())
    }

    /// Every gate here is self-inverse, so the inverse is the layer reversal.
    pub fn inverse(&self) -> Circuit {
        Circuit { n_qubits: self.n_qubits, layers: self.layers.iter().rev().cloned().collect() }
    }

    /// Embeds into an `n`-qubit register, local qubit `k` going to `map[k-1]`.
    pub fn remap(&self, n: usize, map: &[usize]) -> Result<Circuit> {
        if map.len() != self.n_qubits {
            return Err(Error::Shape(format!("map has {} entries for {} qubits", map.len(), self.n_qubits)));
        }
        let out = Circuit {
            n_qubits: n,
            layers: self.layers.iter().map(|l| l.iter().map(|g| g.relabel(|q| map[q - 1])).collect()).collect(),
        };
        out.validate()?;
        Ok(out)
    }

    /// Runs circuits side by side: layer `k` of the result is the union of
    /// every part's layer `k`. Fails if two parts touch the same qubit in one layer.
    pub fn merge_parallel(n: usize, parts: &[Circuit]) -> Result<Circuit> {
        let depth = parts.iter().map(Circuit::depth).max().unwrap_or(0);
        let mut out = Circuit::new(n);
        for k in 0..depth {
            let mut layer = Vec::new();
            for p in parts {
                if p.n_qubits != n {
                    return Err(Error::Shape("parallel parts must share the register size".into()));
                }
                layer.extend(p.layers.get(k).into_iter().flatten().cloned());
            }
            out.push_layer(layer)?;
        }
        Ok(out)
    }

    /// Drops every gate of `kind`, then any layer left empty.
    pub fn without(&self, kind: GateKind) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            layers: self
                .layers
                .iter()
                .map(|l| l.iter().filter(|g| g.kind != kind).cloned().collect::<Vec<_>>())
                .filter(|l| !l.is_empty())
                .collect(),
        }
    }

    /// `H` on every listed qubit, as one layer.
    pub fn h_layer(n: usize, qubits: impl IntoIterator<Item = usize>) -> Result<Circuit> {
        let mut c = Circuit::new(n);
        c.push_layer(qubits.into_iter().map(Gate::h).collect())?;
        Ok(c)
    }

    pub fn depth_report(&self) -> DepthReport {
        let mut gates = BTreeMap::new();
        let mut layers = BTreeMap::new();
        for l in &self.layers {
            let mut kinds: Vec<GateKind> = l.iter().map(|g| g.kind).collect();
            for &k in &kinds {
                *gates.entry(k.name().to_string()).or_insert(0) += 1;
            }
            kinds.sort_unstable();
            kinds.dedup();
            for k in kinds {
                *layers.entry(k.name().to_string()).or_insert(0) += 1;
            }
        }
        DepthReport {
            n_qubits: self.n_qubits,
            total_depth: self.depth(),
            non_h_depth: self.non_h_depth(),
            gate_count: self.gate_count(),
            gates,
            layers,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("circuit serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Line-oriented text: a `qreg`, then one `// layer k` stanza per layer.
    /// Register indices are 0-based (`q[k-1]` is qubit `k`).
    pub fn to_qasm(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "qreg q[{}];", self.n_qubits);
        for (k, layer) in self.layers.iter().enumerate() {
            let _ = writeln!(s, "// layer {}", k + 1);
            for g in layer {
                let _ = writeln!(s, "{g};");
            }
        }
        s
    }

    pub fn from_qasm(text: &str) -> Result<Circuit> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty circuit text".into()))?;
        let n = header
            .strip_prefix("qreg q[")
            .and_then(|r| r.strip_suffix("];"))
            .and_then(|r| r.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad register line {header:?}")))?;
        let mut c = Circuit::new(n);
        let mut layer: Option<Vec<Gate>> = None;
        for line in lines {
            if line.starts_with("// layer") {
                if let Some(l) = layer.replace(Vec::new()) {
                    c.push_layer(l)?;
                }
                continue;
            }
            let bad = || Error::Parse(format!("bad gate line {line:?}"));
            let body = line.strip_suffix(';').ok_or_else(bad)?;
            let (name, args) = body.split_once(' ').ok_or_else(bad)?;
            let kind = match name {
                "h" => GateKind::H,
                "x" => GateKind::X,
                "z" => GateKind::Z,
                "cx" => GateKind::Cx,
                "cz" => GateKind::Cz,
                _ => return Err(bad()),
            };
            let qubits = args
                .split(',')
                .map(|a| {
                    a.trim()
                        .strip_prefix("q[")
                        .and_then(|r| r.strip_suffix(']'))
                        .and_then(|r| r.parse::<usize>().ok())
                        .map(|k| k + 1)
                        .ok_or_else(bad)
                })
                .collect::<Result<Vec<_>>>()?;
            layer
                .as_mut()
                .ok_or_else(|| Error::Parse("gate before first layer marker".into()))?
                .push(Gate::new(kind, qubits)?);
        }
        if let Some(l) = layer {
            c.push_layer(l)?;
        }
        Ok(c)
    }
}

/// Layer and gate counts for one circuit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthReport {
    pub n_qubits: usize,
    pub total_depth: usize,
    pub non_h_depth: usize,
    pub gate_count: usize,
    /// Gates per kind.
    pub gates: BTreeMap<String, usize>,
    /// Layers containing at least one gate of each kind.
    pub layers: BTreeMap<String, usize>,
}

impl fmt::Display for DepthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits: {}", self.n_qubits)?;
        writeln!(f, "depth: {}", self.total_depth)?;
        writeln!(f, "non-H depth: {}", self.non_h_depth)?;
        writeln!(f, "gates: {}", self.gate_count)?;
        for (k, v) in &self.gates {
            writeln!(f, "  {k}: {v} gates in {} layers", self.layers[k])?;
        }
        Ok(())
    }
}

pub fn circuit_depth(c: &Circuit) -> DepthReport {
    c.depth_report()
}

/// Edges in first-fit layers: each edge goes to the earliest layer where
/// both endpoints are free.
pub fn pack_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Circuit> {
    let mut layers: Vec<(Vec<bool>, Vec<Gate>)> = Vec::new();
    for (u, v) in edges {
        let slot = match layers.iter().position(|(busy, _)| !busy[u] && !busy[v]) {
            Some(k) => k,
            None => {
                layers.push((vec![false; n + 1], Vec::new()));
                layers.len() - 1
            }
        };
        let (busy, gates) = &mut layers[slot];
        busy[u] = true;
        busy[v] = true;
        gates.push(Gate::cz(u, v));
    }
    let mut c = Circuit::new(n);
    for (_, gates) in layers {
        c.push_layer(gates)?;
    }
    Ok(c)
}

/// `∏ CZ(i,j) H^{⊗n}` with the CZs packed first-fit.
pub fn naive_graph_circuit(g: &Adjacency) -> Circuit {
    let n = g.n();
    let mut c = Circuit::h_layer(n, 1..=n).expect("H layer is valid");
    c.append(&pack_edges(n, g.edges()).expect("edges are in range")).expect("same register");
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::star_graph;

    #[test]
    fn layer_conflicts_are_rejected() {
        let mut c = Circuit::new(3);
        assert!(c.push_layer(vec![Gate::cz(1, 2), Gate::h(2)]).is_err());
        assert!(c.push_layer(vec![Gate::h(4)]).is_err());
        assert!(Gate::new(GateKind::Cx, vec![1, 1]).is_err());
        assert!(Gate::new(GateKind::H, vec![0]).is_err());
        c.push_layer(vec![Gate::cz(1, 2), Gate::h(3)]).unwrap();
        assert_eq!(c.depth(), 1);
    }

    #[test]
    fn empty_circuit_has_depth_zero() {
        let r = Circuit::new(4).depth_report();
        assert_eq!((r.total_depth, r.non_h_depth, r.gate_count), (0, 0, 0));
    }

    #[test]
    fn naive_star_needs_one_layer_per_edge() {
        let g = star_graph(5, 5).unwrap().adjacency;
        let c = naive_graph_circuit(&g);
        assert_eq!(c.non_h_depth(), 4);
        assert_eq!(naive_graph_circuit(&Adjacency::empty(3)).depth(), 1);
        let c64 = naive_graph_circuit(&star_graph(64, 64).unwrap().adjacency);
        assert_eq!(c64.non_h_depth(), 63);
    }

    #[test]
    fn json_and_qasm_round_trip() {
        let mut c = Circuit::new(3);
        c.push_layer(vec![Gate::h(1), Gate::h(2), Gate::h(3)]).unwrap();
        c.push_layer(vec![Gate::cx(1, 2)]).unwrap();
        c.push_layer(vec![Gate::cz(2, 3), Gate::z(1)]).unwrap();
        let json = c.to_json();
        assert_eq!(json["layers"][1][0], serde_json::json!({"kind": "cx", "qubits": [1, 2]}));
        assert_eq!(Circuit::from_json(&json.to_string()).unwrap(), c);
        let qasm = c.to_qasm();
        assert!(qasm.contains("cx q[0],q[1];"));
        assert_eq!(Circuit::from_qasm(&qasm).unwrap(), c);
        let bad = r#"{"n_qubits":2,"layers":[[{"kind":"cz","qubits":[1,1]}]]}"#;
        assert!(Circuit::from_json(bad).is_err());
    }

    #[test]
    fn merge_and_remap() {
        let mut a = Circuit::new(2);
        a.push_layer(vec![Gate::cz(1, 2)]).unwrap();
        let left = a.remap(4, &[1, 2]).unwrap();
        let right = a.remap(4, &[3, 4]).unwrap();
        let m = Circuit::merge_parallel(4, &[left.clone(), right]).unwrap();
        assert_eq!(m.depth(), 1);
        assert_eq!(m.gate_count(), 2);
        assert!(Circuit::merge_parallel(4, &[left.clone(), left]).is_err());
    }

    #[test]
    fn report_counts_kinds() {
        let mut c = Circuit::new(2);
        c.push_layer(vec![Gate::h(1), Gate::h(2)]).unwrap();
        c.push_layer(vec![Gate::cx(1, 2)]).unwrap();
        c.push_layer(vec![Gate::cx(1, 2)]).unwrap();
        let r = c.depth_report();
        assert_eq!(r.gates["h"], 2);
        assert_eq!(r.layers["cx"], 2);
        assert_eq!(r.non_h_depth, 2);
        assert_eq!(c.inverse().layers()[2][0], Gate::h(1));
    }
}
