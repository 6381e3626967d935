use num_complex::Complex64;
use proptest::prelude::*;

use toric_graph::circuit::phase::analyze;
use toric_graph::circuit::synth::{
    half_phase, mhalf_phase, mstar_phase, star_phase, synth_half, synth_half_with, synth_star, synth_toric,
    HalfSchedule,
};
use toric_graph::circuit::{naive_graph_circuit, Circuit, GateKind};
use toric_graph::graph::{graph_state_vector, half_graph, star_graph, Adjacency, QuadraticForm};
use toric_graph::sim::{apply_circuit, pauli_expectation, run, StateVec, TOL};
use toric_graph::standard_form::{closed_form_adjacency, decomposition_components};
use toric_graph::{BitMat, BitVec, LatticeParams};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Adjacency> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            Adjacency::new(BitMat::from_fn(n, n, |r, c| r != c && bits[r.min(c) * n + r.max(c)])).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn naive_circuit_matches_oracle(g in arb_graph(10)) {
        let c = naive_graph_circuit(&g);
        c.validate().unwrap();
        let got = run(&c).unwrap();
        prop_assert!(got.max_abs_diff(&graph_state_vector(&g).unwrap()).unwrap() < TOL);
    }

    #[test]
    fn graph_generators_stabilize(g in arb_graph(9)) {
        let s = graph_state_vector(&g).unwrap();
        for v in 1..=g.n() {
            let e = pauli_expectation(&s, &g.stabilizer(v).unwrap()).unwrap();
            prop_assert!((e - Complex64::new(1.0, 0.0)).norm() < TOL);
        }
    }

    #[test]
    fn quadratic_form_vanishes_at_zero(g in arb_graph(40)) {
        prop_assert!(!QuadraticForm::new(&g).eval(&BitVec::zeros(g.n())).unwrap());
    }

    #[test]
    fn cx_networks_uncompute(m in 2usize..=12, n in 1usize..=6, input in any::<u16>()) {
        // Removing the CZs leaves network times inverse, the identity on basis states.
        for c in [star_phase(m).unwrap(), half_phase(n, HalfSchedule::Reuse).unwrap()] {
            let bare = c.without(GateKind::Cz);
            let idx = input as usize % (1 << c.n_qubits());
            let s = StateVec::basis(c.n_qubits(), idx).unwrap();
            prop_assert_eq!(apply_circuit(&s, &bare).unwrap(), s);
            prop_assert!(analyze(&bare).unwrap().is_diagonal());
        }
    }

    #[test]
    fn circuits_preserve_norm(
        m in 2usize..=10,
        n in 1usize..=5,
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << 10),
    ) {
        let amps: Vec<Complex64> = raw[..1 << m].iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let s = StateVec::from_amplitudes(m, amps).unwrap().normalized().unwrap();
        let out = apply_circuit(&s, &synth_star(m).unwrap()).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        let out = run(&synth_half(n).unwrap()).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn schedules_agree_on_states() {
    for n in 1..=5 {
        let a = run(&synth_half_with(n, HalfSchedule::Reuse).unwrap()).unwrap();
        let b = run(&synth_half_with(n, HalfSchedule::Independent).unwrap()).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < TOL);
        let oracle = graph_state_vector(&half_graph(n).unwrap().adjacency).unwrap();
        assert!(a.max_abs_diff(&oracle).unwrap() < TOL);
    }
}

#[test]
fn component_order_does_not_matter() {
    let p = LatticeParams::new(2).unwrap();
    let n = p.n_qubits();
    let (stars, half1, half2) = decomposition_components(p);
    let mut parts: Vec<Circuit> = Vec::new();
    for s in &stars {
        let mut map = s.leaves.clone();
        map.push(s.center);
        parts.push(star_phase(map.len()).unwrap().remap(n, &map).unwrap());
    }
    for h in half1.iter().chain(&half2) {
        let map: Vec<usize> = h.x.iter().chain(&h.y).copied().collect();
        parts.push(half_phase(h.x.len(), HalfSchedule::Reuse).unwrap().remap(n, &map).unwrap());
    }
    let oracle = graph_state_vector(&closed_form_adjacency(p)).unwrap();
    let plus = run(&Circuit::h_layer(n, 1..=n).unwrap()).unwrap();
    // Forward, reversed, and an interleaved order.
    let k = parts.len();
    let orders: Vec<Vec<usize>> = vec![(0..k).collect(), (0..k).rev().collect(), (0..k).map(|i| (i * 5) % k).collect()];
    for order in orders {
        let mut s = plus.clone();
        for &i in &order {
            s = apply_circuit(&s, &parts[i]).unwrap();
        }
        assert!(s.max_abs_diff(&oracle).unwrap() < TOL, "order {order:?}");
    }
}

#[test]
fn mstar_alone_gives_single_edges_at_l2() {
    let p = LatticeParams::new(2).unwrap();
    let n = p.n_qubits();
    let mut c = Circuit::h_layer(n, 1..=n).unwrap();
    c.append(&mstar_phase(p).unwrap()).unwrap();
    let (stars, _, _) = decomposition_components(p);
    let edges = stars.iter().map(|s| (s.leaves[0].min(s.center), s.leaves[0].max(s.center)));
    let g = Adjacency::from_edges(n, edges).unwrap();
    assert_eq!(g.edge_count(), 4);
    assert_eq!(g.components().iter().filter(|c| c.len() == 2).count(), 4);
    assert!(run(&c).unwrap().max_abs_diff(&graph_state_vector(&g).unwrap()).unwrap() < TOL);
}

#[test]
fn multi_layer_circuits_are_diagonal_and_exact() {
    for l in [2, 3, 5, 8] {
        let p = LatticeParams::new(l).unwrap();
        let mut c = mstar_phase(p).unwrap();
        c.append(&mhalf_phase(p, HalfSchedule::Reuse).unwrap()).unwrap();
        let a = analyze(&c).unwrap();
        assert!(a.is_diagonal(), "L={l}");
        assert!(a.phase.is_graph_form_of(&closed_form_adjacency(p)), "L={l}");
    }
}

#[test]
fn toric_l3_matches_oracle() {
    let p = LatticeParams::new(3).unwrap();
    let got = run(&synth_toric(p).unwrap()).unwrap();
    let oracle = graph_state_vector(&closed_form_adjacency(p)).unwrap();
    assert!(got.max_abs_diff(&oracle).unwrap() < TOL);
}

#[test]
fn star_parity_network_on_all_inputs() {
    // Bit-level simulation of the CX tree: register m-1 ends with the parity of 1..m-1.
    for m in 2..=10usize {
        let c = star_phase(m).unwrap();
        let k = m - 1;
        let compute: Vec<_> = c.layers().iter().take_while(|l| l[0].kind() == GateKind::Cx).collect();
        for input in 0u32..1 << k {
            let mut reg: Vec<bool> = (0..k).map(|b| input >> b & 1 == 1).collect();
            for layer in &compute {
                for g in layer.iter() {
                    let q = g.qubits();
                    reg[q[1] - 1] ^= reg[q[0] - 1];
                }
            }
            assert_eq!(reg[k - 1], input.count_ones() % 2 == 1, "m={m} input {input:b}");
        }
    }
}

#[test]
fn star_examples_from_either_side() {
    // Center choice only relabels vertices.
    for m in 2..=6 {
        let g = star_graph(m, 1).unwrap().adjacency;
        let perm: Vec<usize> = (2..=m).chain([1]).collect();
        let relabeled = g.induced(&perm);
        assert_eq!(relabeled, star_graph(m, m).unwrap().adjacency);
    }
}
