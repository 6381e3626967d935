//! Stage-level checks of the reduction against the intermediate column forms.

use toric_graph::lattice::{build_star, Dir};
use toric_graph::standard_form::{reduce_to_graph_with, ReductionTrace};
use toric_graph::{LatticeParams, PauliOp, Tableau};

fn stage<'a>(trace: &'a ReductionTrace, name: &str) -> &'a Tableau {
    &trace.stages.iter().find(|(s, _)| *s == name).unwrap_or_else(|| panic!("no stage {name}")).1
}

fn x_on(p: LatticeParams, sites: impl IntoIterator<Item = (usize, usize, Dir)>) -> PauliOp {
    PauliOp::x_on(p.n_qubits(), sites.into_iter().map(|(i, j, d)| p.index(i, j, d))).unwrap()
}

#[test]
fn star_block_after_rx_sums_columns() {
    for l in 2..=5 {
        let p = LatticeParams::new(l).unwrap();
        let (_, trace) = reduce_to_graph_with(p, true).unwrap();
        let t = stage(&trace, "star-rx");
        for (i, j) in itertools::iproduct!(1..=l, 1..=l) {
            // Stars (k, j) for k >= i telescope on the x-edges of column j.
            let mut expect = PauliOp::identity(p.n_qubits());
            for k in i..=l {
                expect = expect.mul(&build_star(k, j, p).unwrap()).unwrap();
            }
            assert_eq!(t.generators()[p.cell(i, j)], expect);
            let x_edges = if i == 1 { vec![] } else { vec![(i - 1, j, Dir::X), (l, j, Dir::X)] };
            let y_edges = (i..=l).flat_map(|k| [(k, j, Dir::Y), (k, p.wrap(j as isize - 1), Dir::Y)]);
            let cancelled = x_on(p, x_edges.into_iter().chain(y_edges));
            assert_eq!(t.generators()[p.cell(i, j)], cancelled, "L={l} ({i},{j})");
        }
    }
}

#[test]
fn first_row_after_tx() {
    for l in 2..=5 {
        let p = LatticeParams::new(l).unwrap();
        let (_, trace) = reduce_to_graph_with(p, true).unwrap();
        let t = stage(&trace, "star-tx");
        for j in 2..=l {
            // X on every (l, L, y) and every (l, j-1, y).
            let expect = x_on(p, (1..=l).flat_map(|r| [(r, l, Dir::Y), (r, j - 1, Dir::Y)]));
            assert_eq!(t.generators()[p.cell(1, j)], expect, "L={l} j={j}");
        }
        assert!(t.generators()[p.cell(1, 1)].is_identity());
    }
}

#[test]
fn first_row_after_relabel_is_a_column_of_y_edges() {
    for l in 2..=5 {
        let p = LatticeParams::new(l).unwrap();
        let (_, trace) = reduce_to_graph_with(p, true).unwrap();
        let t = stage(&trace, "star-relabel");
        for j in 1..=l {
            let expect = x_on(p, (1..=l).map(|r| (r, j, Dir::Y)));
            assert_eq!(t.generators()[p.cell(1, j)], expect, "L={l} j={j}");
        }
    }
}

#[test]
fn every_stage_keeps_a_commuting_full_rank_set() {
    for l in 2..=4 {
        let p = LatticeParams::new(l).unwrap();
        let (_, trace) = reduce_to_graph_with(p, true).unwrap();
        let names: Vec<&str> = trace.stages.iter().map(|(s, _)| *s).collect();
        assert_eq!(names.first(), Some(&"toric"));
        assert_eq!(names.last(), Some(&"standard-form"));
        for (name, t) in &trace.stages {
            assert!(t.is_self_orthogonal(), "L={l} stage {name}");
            // Each block loses one rank to its global relation until the string replaces it.
            if ["plaquette-string", "plaquette-relabel", "hadamard", "standard-form"].contains(name) {
                assert_eq!(t.to_matrix().rank(), p.n_qubits(), "L={l} stage {name}");
            }
        }
    }
}

#[test]
fn permutation_sorts_by_qubit_index() {
    let p = LatticeParams::new(3).unwrap();
    let (_, trace) = reduce_to_graph_with(p, true).unwrap();
    let before = stage(&trace, "hadamard");
    for (q, &c) in trace.col_perm.iter().enumerate() {
        assert_eq!(before.generators()[c].x_part().iter_ones().collect::<Vec<_>>(), vec![q]);
    }
}
