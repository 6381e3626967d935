//! Exact classical analysis of `{CX, CZ, X, Z}` circuits.
//!
//! Such a circuit maps `|q>` to `(-1)^{φ(q)} |M q + c>`. Every register holds
//! an affine form in the inputs, and each `CZ` adds the product of two forms
//! to the phase polynomial `φ`. This checks synthesized graph-state circuits
//! at sizes far beyond statevector reach.

use super::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::gf2::{BitMat, BitVec};
use crate::graph::Adjacency;

/// `φ(q) = Σ_{i<j} Q_ij q_i q_j + Σ_i l_i q_i + c` over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhasePolynomial {
    /// Symmetric, zero diagonal.
    pub quadratic: BitMat,
    pub linear: BitVec,
    pub constant: bool,
}

impl PhasePolynomial {
    fn zero(n: usize) -> Self {
        Self { quadratic: BitMat::zeros(n, n), linear: BitVec::zeros(n), constant: false }
    }

    /// True when `φ` is exactly the graph form `f_G`.
    pub fn is_graph_form_of(&self, g: &Adjacency) -> bool {
        &self.quadratic == g.matrix() && self.linear.is_zero() && !self.constant
    }

    pub fn eval(&self, q: &BitVec) -> bool {
        let twice: usize = q.iter_ones().map(|i| (self.quadratic.row(i) & q).count_ones()).sum();
        ((twice / 2) % 2 == 1) ^ self.linear.dot(q) ^ self.constant
    }

    /// Adds `(a·q + ca)(b·q + cb)`.
    fn add_product(&mut self, a: &BitVec, ca: bool, b: &BitVec, cb: bool) {
        let n = a.len();
        for i in a.iter_ones() {
            for j in b.iter_ones() {
                if i == j {
                    self.linear.flip(i);
                } else {
                    // Each unordered pair lives in both (i,j) and (j,i).
                    let v = !self.quadratic.get(i, j);
                    self.quadratic.set(i, j, v);
                    self.quadratic.set(j, i, v);
                }
            }
        }
        if cb {
            self.linear ^= a;
        }
        if ca {
            self.linear ^= b;
        }
        self.constant ^= ca && cb;
        debug_assert_eq!(self.linear.len(), n);
    }
}

/// Result of [`analyze`]: output register `k` holds `forms[k-1]·q + consts[k-1]`.
#[derive(Clone, Debug)]
pub struct PhaseAnalysis {
    pub phase: PhasePolynomial,
    pub forms: Vec<BitVec>,
    pub consts: BitVec,
}

impl PhaseAnalysis {
    /// The circuit leaves computational basis states in place.
    pub fn is_diagonal(&self) -> bool {
        self.consts.is_zero() && self.forms.iter().enumerate().all(|(k, f)| f.count_ones() == 1 && f.get(k))
    }
}

/// Tracks affine register contents through a circuit without `H` gates.
pub fn analyze(c: &Circuit) -> Result<PhaseAnalysis> {
    analyze_layers(c, |_, _| ())
}

/// As [`analyze`], calling `observe(layer_index, forms)` after every layer.
pub fn analyze_layers(c: &Circuit, mut observe: impl FnMut(usize, &[BitVec])) -> Result<PhaseAnalysis> {
    let n = c.n_qubits();
    let mut forms: Vec<BitVec> = (0..n).map(|k| BitVec::from_ones(n, [k])).collect();
    let mut consts = BitVec::zeros(n);
    let mut phase = PhasePolynomial::zero(n);
    for (k, layer) in c.layers().iter().enumerate() {
        for g in layer {
            let q = g.qubits();
            match g.kind() {
                GateKind::H => {
                    return Err(Error::Circuit("phase analysis does not cover H gates".into()));
                }
                GateKind::X => consts.flip(q[0] - 1),
                GateKind::Z => {
                    let (a, ca) = (forms[q[0] - 1].clone(), consts.get(q[0] - 1));
                    phase.linear ^= &a;
                    phase.constant ^= ca;
                }
                GateKind::Cz => {
                    let (a, b) = (q[0] - 1, q[1] - 1);
                    let (fa, fb) = (forms[a].clone(), forms[b].clone());
                    phase.add_product(&fa, consts.get(a), &fb, consts.get(b));
                }
                GateKind::Cx => {
                    let (ctl, tgt) = (q[0] - 1, q[1] - 1);
                    let f = forms[ctl].clone();
                    forms[tgt] ^= &f;
                    let bit = consts.get(tgt) ^ consts.get(ctl);
                    consts.set(tgt, bit);
                }
            }
        }
        observe(k, &forms);
    }
    Ok(PhaseAnalysis { phase, forms, consts })
}

/// Checks that `c` (no `H`) maps `|q>` to `(-1)^{f_G(q)} |q>`.
pub fn implements_graph_phase(c: &Circuit, g: &Adjacency) -> Result<bool> {
    let a = analyze(c)?;
    Ok(a.is_diagonal() && a.phase.is_graph_form_of(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::synth::{half_phase, parity_layers, star_phase, HalfSchedule};
    use crate::circuit::Gate;
    use crate::graph::{half_graph, star_graph};

    #[test]
    fn single_cz() {
        let mut c = Circuit::new(2);
        c.push_layer(vec![Gate::cz(1, 2)]).unwrap();
        let g = Adjacency::from_edges(2, [(1, 2)]).unwrap();
        assert!(implements_graph_phase(&c, &g).unwrap());
    }

    #[test]
    fn cx_cz_cx_gives_sum_times_target() {
        // CX(1,2) CZ(2,3) CX(1,2): (q1+q2) q3.
        let mut c = Circuit::new(3);
        c.push_layer(vec![Gate::cx(1, 2)]).unwrap();
        c.push_layer(vec![Gate::cz(2, 3)]).unwrap();
        c.push_layer(vec![Gate::cx(1, 2)]).unwrap();
        let g = Adjacency::from_edges(3, [(1, 3), (2, 3)]).unwrap();
        assert!(implements_graph_phase(&c, &g).unwrap());
    }

    #[test]
    fn x_and_z_enter_the_phase() {
        let mut c = Circuit::new(2);
        c.push_layer(vec![Gate::x(1)]).unwrap();
        c.push_layer(vec![Gate::cz(1, 2)]).unwrap();
        c.push_layer(vec![Gate::x(1), Gate::z(2)]).unwrap();
        let a = analyze(&c).unwrap();
        // (q1+1) q2 + q2 = q1 q2.
        assert!(a.is_diagonal());
        assert!(a.phase.linear.is_zero());
        assert!(a.phase.quadratic.get(0, 1));
        assert!(analyze(&Circuit::h_layer(1, [1]).unwrap()).is_err());
    }

    #[test]
    fn stars_and_halves_up_to_64() {
        for m in 2..=64 {
            let g = star_graph(m, m).unwrap().adjacency;
            assert!(implements_graph_phase(&star_phase(m).unwrap(), &g).unwrap(), "star m={m}");
        }
        for n in 1..=64 {
            let g = half_graph(n).unwrap().adjacency;
            for s in [HalfSchedule::Reuse, HalfSchedule::Independent] {
                assert!(implements_graph_phase(&half_phase(n, s).unwrap(), &g).unwrap(), "half n={n} {s:?}");
            }
        }
    }

    #[test]
    fn parity_blocks_after_each_layer() {
        for k in 1..=32usize {
            let mut c = Circuit::new(k);
            for layer in parity_layers(k) {
                c.push_layer(layer.into_iter().map(|(a, b)| Gate::cx(a, b)).collect()).unwrap();
            }
            let a = analyze_layers(&c, |layer, forms| {
                let d = layer + 1;
                // Full blocks of size 2^d end in a register holding their parity.
                for end in (1..=k / (1 << d)).map(|c| c << d) {
                    let expect = BitVec::from_ones(k, end - (1 << d)..end);
                    assert_eq!(forms[end - 1], expect, "k={k} d={d} register {end}");
                }
            })
            .unwrap();
            assert_eq!(a.forms[k - 1], BitVec::from_ones(k, 0..k), "k={k}");
        }
    }
}
