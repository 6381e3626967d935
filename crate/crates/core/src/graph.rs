//! Simple graphs, their quadratic forms and graph-state amplitudes, plus the
//! star and half graph families.
//!
//! Vertices are 1-based. In every state vector qubit 1 is the most
//! significant bit of the amplitude index.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMat, BitVec};
use crate::sim::StateVec;
use crate::symplectic::{PauliOp, Tableau};

/// Symmetric, zero-diagonal adjacency matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Adjacency {
    a: BitMat,
}

#[derive(Serialize, Deserialize)]
struct AdjacencyRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for Adjacency {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AdjacencyRepr { n: self.n(), edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Adjacency {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = AdjacencyRepr::deserialize(d)?;
        Adjacency::from_edges(r.n, r.edges.iter().map(|e| (e[0], e[1]))).map_err(serde::de::Error::custom)
    }
}

impl Adjacency {
    pub fn new(a: BitMat) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Shape(format!("adjacency must be square, got {}x{}", a.n_rows(), a.n_cols())));
        }
        if !a.is_symmetric() {
            return Err(Error::Input("adjacency matrix is not symmetric".into()));
        }
        if let Some(v) = (0..a.n_rows()).find(|&v| a.get(v, v)) {
            return Err(Error::Input(format!("adjacency has a self-loop at vertex {}", v + 1)));
        }
        Ok(Self { a })
    }

    pub fn empty(n: usize) -> Self {
        Self { a: BitMat::zeros(n, n) }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    fn check_vertex(&self, v: usize) -> Result<usize> {
        if v == 0 || v > self.n() {
            return Err(Error::Index(format!("vertex {v} outside 1..={}", self.n())));
        }
        Ok(v - 1)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let (a, b) = (self.check_vertex(u)?, self.check_vertex(v)?);
        if a == b {
            return Err(Error::Input(format!("self-loop at vertex {u}")));
        }
        self.a.set(a, b, true);
        self.a.set(b, a, true);
        Ok(())
    }

    /// Toggles an edge; used by negative-control tests.
    pub fn flip_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let (a, b) = (self.check_vertex(u)?, self.check_vertex(v)?);
        if a == b {
            return Err(Error::Input(format!("self-loop at vertex {u}")));
        }
        let bit = !self.a.get(a, b);
        self.a.set(a, b, bit);
        self.a.set(b, a, bit);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.a.n_rows()
    }

    pub fn matrix(&self) -> &BitMat {
        &self.a
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && u >= 1 && v >= 1 && u <= self.n() && v <= self.n() && self.a.get(u - 1, v - 1)
    }

    /// Edges `(u, v)` with `u < v`, lexicographically ordered.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .flat_map(|u| self.a.row(u).iter_ones().filter(move |&v| v > u).map(move |v| (u + 1, v + 1)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.a.count_ones() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.a.row(v - 1).count_ones()
    }

    pub fn max_degree(&self) -> usize {
        (1..=self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.a.row(v - 1).iter_ones().map(|u| u + 1)
    }

    /// Entrywise sum over GF(2).
    pub fn xor(&self, other: &Adjacency) -> Result<Adjacency> {
        if self.n() != other.n() {
            return Err(Error::Shape("adjacencies have different vertex counts".into()));
        }
        Ok(Adjacency { a: BitMat::from_rows(self.a.rows().iter().zip(other.a.rows()).map(|(x, y)| x ^ y).collect())? })
    }

    /// True when no edge appears in both graphs.
    pub fn is_disjoint_from(&self, other: &Adjacency) -> bool {
        self.n() == other.n() && self.a.rows().iter().zip(other.a.rows()).all(|(x, y)| (x & y).is_zero())
    }

    /// Induced subgraph; vertex `k` of the result is `vertices[k-1]`.
    pub fn induced(&self, vertices: &[usize]) -> Adjacency {
        let a = BitMat::from_fn(vertices.len(), vertices.len(), |r, c| self.a.get(vertices[r] - 1, vertices[c] - 1));
        Adjacency { a }
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start + 1];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for v in self.a.row(u).iter_ones() {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v + 1);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Graph-state generator `S_v = X_v ∏_{u ~ v} Z_u`.
    pub fn stabilizer(&self, v: usize) -> Result<PauliOp> {
        let k = self.check_vertex(v)?;
        PauliOp::from_parts(self.a.row(k).clone(), BitVec::from_ones(self.n(), [k]))
    }

    /// The standard-form tableau `(A | I)`.
    pub fn to_tableau(&self) -> Tableau {
        let gens = (1..=self.n()).map(|v| self.stabilizer(v).unwrap()).collect();
        Tableau::new(self.n(), gens).unwrap()
    }

    /// One `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        self.edges().into_iter().fold(String::new(), |mut s, (u, v)| {
            let _ = writeln!(s, "{u} {v}");
            s
        })
    }

    pub fn parse_edge_list(n: usize, text: &str) -> Result<Adjacency> {
        let mut g = Adjacency::empty(n);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let mut it = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("bad vertex {t:?}: {e}"))));
            match (it.next(), it.next(), it.next()) {
                (Some(u), Some(v), None) => g.add_edge(u?, v?)?,
                _ => return Err(Error::Parse(format!("expected `u v`, got {line:?}"))),
            }
        }
        Ok(g)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("adjacency serialization is infallible")
    }

    pub fn to_dot(&self, name: &str, labels: Option<&[String]>) -> String {
        dot_layers(name, self.n(), labels, &[DotLayer { name: "edges", color: "black", graph: self }])
    }
}

impl std::fmt::Debug for Adjacency {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Adjacency(n={}, edges={:?})", self.n(), self.edges())
    }
}

/// One colored edge set in a layered DOT rendering.
pub struct DotLayer<'a> {
    pub name: &'a str,
    pub color: &'a str,
    pub graph: &'a Adjacency,
}

/// Undirected DOT graph with one edge color per layer.
pub fn dot_layers(name: &str, n: usize, labels: Option<&[String]>, layers: &[DotLayer<'_>]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "graph {name} {{");
    let _ = writeln!(s, "  node [shape=circle];");
    for v in 1..=n {
        match labels {
            Some(l) => {
                let _ = writeln!(s, "  {v} [label=\"{}\"];", l[v - 1]);
            }
            None => {
                let _ = writeln!(s, "  {v};");
            }
        }
    }
    for layer in layers {
        for (u, v) in layer.graph.edges() {
            let _ = writeln!(s, "  {u} -- {v} [color={}, layer=\"{}\"];", layer.color, layer.name);
        }
    }
    s.push_str("}\n");
    s
}

/// A graph with optional vertex labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub adjacency: Adjacency,
    pub labels: Option<Vec<String>>,
}

impl Graph {
    pub fn new(adjacency: Adjacency) -> Self {
        Self { adjacency, labels: None }
    }

    pub fn n(&self) -> usize {
        self.adjacency.n()
    }

    pub fn to_dot(&self, name: &str) -> String {
        self.adjacency.to_dot(name, self.labels.as_deref())
    }
}

impl From<Adjacency> for Graph {
    fn from(a: Adjacency) -> Self {
        Graph::new(a)
    }
}

/// Star graph on `m` vertices: `center` adjacent to every other vertex.
pub fn star_graph(m: usize, center: usize) -> Result<Graph> {
    if m < 2 {
        return Err(Error::Size(format!("star graph needs at least 2 vertices, got {m}")));
    }
    if center == 0 || center > m {
        return Err(Error::Index(format!("center {center} outside 1..={m}")));
    }
    let adj = Adjacency::from_edges(m, (1..=m).filter(|&v| v != center).map(|v| (v, center)))?;
    Ok(Graph::new(adj))
}

/// Half graph on `2n` vertices: `x_i` is vertex `i`, `y_j` is vertex `n+j`,
/// with an edge `(x_i, y_j)` iff `i <= j`.
pub fn half_graph(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::Size("half graph needs n >= 1".into()));
    }
    let adj = Adjacency::from_edges(2 * n, (1..=n).flat_map(|i| (i..=n).map(move |j| (i, n + j))))?;
    let labels = (1..=n).map(|i| format!("x{i}")).chain((1..=n).map(|j| format!("y{j}"))).collect();
    Ok(Graph { adjacency: adj, labels: Some(labels) })
}

/// `f_G(q) = Σ_{i<j} A_ij q_i q_j mod 2`.
#[derive(Clone, Debug)]
pub struct QuadraticForm {
    graph: Adjacency,
    // Neighbour sets as amplitude-index masks (qubit k <-> bit n-k).
    masks: Option<Vec<u64>>,
}

impl QuadraticForm {
    pub fn new(graph: &Adjacency) -> Self {
        let n = graph.n();
        let masks =
            (n <= 64).then(|| (1..=n).map(|v| graph.neighbours(v).fold(0u64, |m, u| m | 1u64 << (n - u))).collect());
        Self { graph: graph.clone(), masks }
    }

    pub fn graph(&self) -> &Adjacency {
        &self.graph
    }

    pub fn eval(&self, q: &BitVec) -> Result<bool> {
        let n = self.graph.n();
        if q.len() != n {
            return Err(Error::Shape(format!("assignment has {} bits, graph has {n} vertices", q.len())));
        }
        let a = self.graph.matrix();
        // Each edge inside the support is counted from both ends.
        let twice: usize = q.iter_ones().map(|i| (a.row(i) & q).count_ones()).sum();
        Ok((twice / 2) % 2 == 1)
    }

    /// Evaluates on a computational-basis index (qubit 1 = most significant bit).
    pub fn eval_index(&self, index: u64) -> bool {
        let masks = self.masks.as_ref().expect("index evaluation needs n <= 64");
        let n = masks.len();
        let mut twice = 0u32;
        let mut rest = index;
        while rest != 0 {
            let bit = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            twice += (masks[n - 1 - bit] & index).count_ones();
        }
        (twice / 2) % 2 == 1
    }
}

pub fn quad_form_eval(f: &QuadraticForm, q: &BitVec) -> Result<bool> {
    f.eval(q)
}

/// `(-1)^{f_G(basis)} / 2^{n/2}`; `basis` bit `k` is vertex `k+1`.
pub fn graph_state_amplitude(g: &Adjacency, basis: &BitVec) -> Result<f64> {
    let sign = if QuadraticForm::new(g).eval(basis)? { -1.0 } else { 1.0 };
    Ok(sign * (0.5f64).powf(g.n() as f64 / 2.0))
}

/// The full graph state, evaluated amplitude by amplitude from `f_G`.
pub fn graph_state_vector(g: &Adjacency) -> Result<StateVec> {
    let n = g.n();
    if n > crate::sim::MAX_QUBITS {
        return Err(Error::Size(format!("{n} qubits exceeds the simulation limit")));
    }
    let f = QuadraticForm::new(g);
    let mag = (0.5f64).powf(n as f64 / 2.0);
    let amps: Vec<f64> = (0..1u64 << n).into_par_iter().map(|idx| if f.eval_index(idx) { -mag } else { mag }).collect();
    StateVec::from_real(n, amps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// `(|0^m> ± |1^m>)/√2`.
pub fn ghz_reference(m: usize, sign: Sign) -> Result<StateVec> {
    if m < 1 {
        return Err(Error::Size("GHZ state needs m >= 1".into()));
    }
    let mut amps = vec![0.0; 1usize << m];
    amps[0] = std::f64::consts::FRAC_1_SQRT_2;
    amps[(1usize << m) - 1] = match sign {
        Sign::Plus => std::f64::consts::FRAC_1_SQRT_2,
        Sign::Minus => -std::f64::consts::FRAC_1_SQRT_2,
    };
    StateVec::from_real(m, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn star_examples() {
        let g = star_graph(3, 3).unwrap().adjacency;
        assert_eq!(g.edges(), vec![(1, 3), (2, 3)]);
        assert_eq!(star_graph(2, 2).unwrap().adjacency.edge_count(), 1);
        assert_eq!(star_graph(7, 7).unwrap().adjacency.degree(7), 6);
        assert!(matches!(star_graph(1, 1), Err(Error::Size(_))));
        assert!(matches!(star_graph(3, 4), Err(Error::Index(_))));
    }

    #[test]
    fn half_examples() {
        let g = half_graph(2).unwrap().adjacency;
        // x1=1, x2=2, y1=3, y2=4
        assert_eq!(g.edges(), vec![(1, 3), (1, 4), (2, 4)]);
        assert_eq!(half_graph(1).unwrap().adjacency.edges(), vec![(1, 2)]);
        assert!(half_graph(0).is_err());
        for n in 1..=10 {
            // θ table: row i contributes n - i + 1 entries.
            let theta_sum: usize = (1..=n).map(|i| (1..=n).filter(|&j| i <= j).count()).sum();
            assert_eq!(half_graph(n).unwrap().adjacency.edge_count(), theta_sum);
            assert_eq!(theta_sum, n * (n + 1) / 2);
        }
    }

    #[test]
    fn quad_form_examples() {
        let star = QuadraticForm::new(&star_graph(3, 3).unwrap().adjacency);
        assert!(!star.eval(&BitVec::zeros(3)).unwrap());
        assert!(!star.eval(&BitVec::from_bits(&[1, 1, 1])).unwrap());
        let half = QuadraticForm::new(&half_graph(2).unwrap().adjacency);
        assert!(half.eval(&BitVec::from_bits(&[1, 0, 0, 1])).unwrap());
        assert!(matches!(half.eval(&BitVec::zeros(3)), Err(Error::Shape(_))));
    }

    #[test]
    fn amplitude_examples() {
        let star = star_graph(3, 3).unwrap().adjacency;
        let a0 = graph_state_amplitude(&star, &BitVec::zeros(3)).unwrap();
        assert!((a0 - 2f64.powf(-1.5)).abs() < 1e-15);
        let a = graph_state_amplitude(&star, &BitVec::from_bits(&[1, 0, 1])).unwrap();
        assert!((a + 2f64.powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn ghz_examples() {
        let plus = ghz_reference(1, Sign::Plus).unwrap();
        assert!((plus.amplitudes()[0].re - plus.amplitudes()[1].re).abs() < 1e-15);
        let minus = ghz_reference(3, Sign::Minus).unwrap();
        let re: Vec<f64> = minus.amplitudes().iter().map(|c| c.re * 2f64.sqrt()).collect();
        let expect = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0];
        assert!(re.iter().zip(expect).all(|(a, b)| (a - b).abs() < 1e-12));
    }

    #[test]
    fn components_and_induced() {
        let g = Adjacency::from_edges(5, [(1, 2), (4, 5)]).unwrap();
        assert_eq!(g.components(), vec![vec![1, 2], vec![3], vec![4, 5]]);
        assert_eq!(g.induced(&[4, 5]).edges(), vec![(1, 2)]);
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(Adjacency::new(BitMat::from_bits(&[[0, 1], [0, 0]])).is_err());
        assert!(Adjacency::new(BitMat::from_bits(&[[1, 0], [0, 0]])).is_err());
        assert!(Adjacency::from_edges(3, [(1, 1)]).is_err());
        assert!(Adjacency::from_edges(3, [(1, 4)]).is_err());
    }

    #[test]
    fn edge_list_and_json() {
        let g = half_graph(2).unwrap().adjacency;
        assert_eq!(g.to_edge_list(), "1 3\n1 4\n2 4\n");
        assert_eq!(Adjacency::parse_edge_list(4, &g.to_edge_list()).unwrap(), g);
        assert!(Adjacency::parse_edge_list(4, "1 2 3").is_err());
        assert_eq!(g.to_json(), serde_json::json!({"n": 4, "edges": [[1, 3], [1, 4], [2, 4]]}));
        let back: Adjacency = serde_json::from_value(g.to_json()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn dot_output() {
        let g = star_graph(3, 3).unwrap();
        let dot = g.to_dot("star");
        assert!(dot.starts_with("graph star {"));
        assert!(dot.contains("1 -- 3 [color=black"));
        assert_eq!(dot.matches(" -- ").count(), 2);
    }

    fn arb_adjacency(n: usize) -> impl Strategy<Value = Adjacency> {
        prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            Adjacency::new(BitMat::from_fn(n, n, |r, c| r != c && bits[r.min(c) * n + r.max(c)])).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn graph_state_is_normalized(g in (1usize..=12).prop_flat_map(arb_adjacency)) {
            let s = graph_state_vector(&g).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn index_and_bitvec_evaluation_agree(g in arb_adjacency(7), idx in 0u64..128) {
            let f = QuadraticForm::new(&g);
            let q: BitVec = (1..=7).map(|k| idx >> (7 - k) & 1 == 1).collect();
            prop_assert_eq!(f.eval_index(idx), f.eval(&q).unwrap());
        }
    }
}
