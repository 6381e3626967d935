//! Reduction of the toric stabilizer tableau to graph standard form, the
//! closed-form toric adjacency, and its star/half decomposition.
//!
//! Adjacency vertices are qubit indices, so vertex `n` is the edge with
//! linear index `n` on the lattice.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::BitMat;
use crate::graph::{dot_layers, Adjacency, DotLayer};
use crate::lattice::{build_toric_tableau, string_operators, Dir, LatticeParams};
use crate::symplectic::Tableau;

/// Everything the pipeline did, for inspection and stage-level tests.
#[derive(Clone, Debug)]
pub struct ReductionTrace {
    /// `L² x L²` basis changes on the star block; rows index old columns.
    pub rx: BitMat,
    pub tx: BitMat,
    /// `L² x L²` basis changes on the plaquette block.
    pub rz: BitMat,
    pub tz: BitMat,
    /// Lattice cell of the star column replaced by `S_beta`.
    pub replaced_star_col: (usize, usize),
    /// Lattice cell of the plaquette column replaced by `S_alpha`.
    pub replaced_plaq_col: (usize, usize),
    /// 1-based qubits left alone.
    pub r1_mask: Vec<usize>,
    /// 1-based qubits that receive a Hadamard.
    pub r2_mask: Vec<usize>,
    /// Final column `k` is the pre-permutation column `col_perm[k]`.
    pub col_perm: Vec<usize>,
    /// Named intermediate tableaux, filled only when requested.
    pub stages: Vec<(&'static str, Tableau)>,
}

/// `θ(a ≤ b)`.
fn theta(a: usize, b: usize) -> bool {
    a <= b
}

fn star_col(p: LatticeParams, i: usize, j: usize) -> usize {
    p.cell(i, j)
}

fn plaq_col(p: LatticeParams, i: usize, j: usize) -> usize {
    p.n_cells() + p.cell(i, j)
}

/// `L² x L²` matrix with entry `[old (k,n)][new (i,j)] = f(k, n, i, j)`.
fn cell_matrix(p: LatticeParams, f: impl Fn(usize, usize, usize, usize) -> bool) -> BitMat {
    let l = p.side();
    let mut m = BitMat::zeros(p.n_cells(), p.n_cells());
    for (k, n, i, j) in itertools::iproduct!(1..=l, 1..=l, 1..=l, 1..=l) {
        if f(k, n, i, j) {
            m.set(p.cell(k, n), p.cell(i, j), true);
        }
    }
    m
}

pub fn rx_matrix(p: LatticeParams) -> BitMat {
    cell_matrix(p, |k, n, i, j| theta(i, k) && j == n)
}

pub fn tx_matrix(p: LatticeParams) -> BitMat {
    cell_matrix(p, |k, n, i, j| i == k && if i == 1 { theta(j, n) } else { j == n })
}

pub fn rz_matrix(p: LatticeParams) -> BitMat {
    cell_matrix(p, |k, n, i, j| theta(k, i) && j == n)
}

pub fn tz_matrix(p: LatticeParams) -> BitMat {
    let l = p.side();
    cell_matrix(p, move |k, n, i, j| i == k && if i == l { theta(n, j) } else { n == j })
}

/// Folds the replaced string column into the row-1 star columns:
/// new `(1,j)` = old `(1,j+1)` + old `(1,1)` for `j < L`, new `(1,L)` = old `(1,1)`.
fn star_relabel(p: LatticeParams) -> BitMat {
    let l = p.side();
    cell_matrix(p, move |k, n, i, j| {
        if i != 1 {
            return k == i && n == j;
        }
        k == 1 && (n == 1 || (j < l && n == j + 1))
    })
}

/// new `(L,1)` = old `(L,L)`, new `(L,j)` = old `(L,j-1)` + old `(L,L)` for `j ≥ 2`.
fn plaq_relabel(p: LatticeParams) -> BitMat {
    let l = p.side();
    cell_matrix(p, move |k, n, i, j| {
        if i != l {
            return k == i && n == j;
        }
        k == l && (n == l || (j >= 2 && n == j - 1))
    })
}

/// Qubits `(L,m,x)` and `(l,m,y)` with `l ≥ 2`.
pub fn r2_qubits(p: LatticeParams) -> Vec<usize> {
    let l = p.side();
    p.coords()
        .filter(|c| (c.d == Dir::X && c.i == l) || (c.d == Dir::Y && c.i >= 2))
        .map(|c| p.index(c.i, c.j, c.d))
        .collect()
}

fn apply(t: &Tableau, star: Option<&BitMat>, plaq: Option<&BitMat>, p: LatticeParams) -> Result<Tableau> {
    let id = BitMat::identity(p.n_cells());
    t.right_multiply(&star.unwrap_or(&id).block_diag(plaq.unwrap_or(&id)))
}

/// Runs the reduction and returns the standard-form adjacency with its trace.
pub fn reduce_to_graph(p: LatticeParams) -> Result<(Adjacency, ReductionTrace)> {
    reduce_to_graph_with(p, false)
}

/// As [`reduce_to_graph`]; with `record_stages` every intermediate tableau is kept.
pub fn reduce_to_graph_with(p: LatticeParams, record_stages: bool) -> Result<(Adjacency, ReductionTrace)> {
    let l = p.side();
    let n = p.n_qubits();
    let mut stages = Vec::new();
    let mut record = |name: &'static str, t: &Tableau| {
        if record_stages {
            stages.push((name, t.clone()));
        }
    };
    let (s_alpha, s_beta) = string_operators(p);

    let mut t = build_toric_tableau(p);
    record("toric", &t);

    let (rx, tx, rz, tz) = (rx_matrix(p), tx_matrix(p), rz_matrix(p), tz_matrix(p));

    t = apply(&t, Some(&rx), None, p)?;
    record("star-rx", &t);
    t = apply(&t, Some(&tx), None, p)?;
    record("star-tx", &t);
    let c = star_col(p, 1, 1);
    if !t.generators()[c].is_identity() {
        return Err(Error::PipelineInvariant {
            stage: "star-tx",
            detail: format!("star column (1,1) should vanish, found {}", t.generators()[c]),
        });
    }
    t.replace_generator(c, s_beta)?;
    record("star-string", &t);
    t = apply(&t, Some(&star_relabel(p)), None, p)?;
    record("star-relabel", &t);

    t = apply(&t, None, Some(&rz), p)?;
    record("plaquette-rz", &t);
    t = apply(&t, None, Some(&tz), p)?;
    record("plaquette-tz", &t);
    let c = plaq_col(p, l, l);
    if !t.generators()[c].is_identity() {
        return Err(Error::PipelineInvariant {
            stage: "plaquette-tz",
            detail: format!("plaquette column (L,L) should vanish, found {}", t.generators()[c]),
        });
    }
    t.replace_generator(c, s_alpha)?;
    record("plaquette-string", &t);
    t = apply(&t, None, Some(&plaq_relabel(p)), p)?;
    record("plaquette-relabel", &t);

    let r2 = r2_qubits(p);
    let r1: Vec<usize> = (1..=n).filter(|q| !r2.contains(q)).collect();
    t = t.hadamard_conjugate(&r2)?;
    record("hadamard", &t);

    // Column carrying the identity row for qubit q goes to position q.
    let mut col_perm = vec![usize::MAX; n];
    for (c, g) in t.generators().iter().enumerate() {
        let mut ones = g.x_part().iter_ones();
        match (ones.next(), ones.next()) {
            (Some(q), None) if col_perm[q] == usize::MAX => col_perm[q] = c,
            _ => {
                return Err(Error::PipelineInvariant {
                    stage: "permute",
                    detail: format!("column {c} is not a distinct unit vector in the x-block"),
                })
            }
        }
    }
    t = t.permute_generators(&col_perm)?;
    record("standard-form", &t);

    if t.x_block() != BitMat::identity(n) {
        return Err(Error::PipelineInvariant { stage: "standard-form", detail: "x-block is not the identity".into() });
    }
    let a = Adjacency::new(t.z_block())
        .map_err(|e| Error::PipelineInvariant { stage: "standard-form", detail: e.to_string() })?;

    let trace = ReductionTrace {
        rx,
        tx,
        rz,
        tz,
        replaced_star_col: (1, 1),
        replaced_plaq_col: (l, l),
        r1_mask: r1,
        r2_mask: r2,
        col_perm,
        stages,
    };
    Ok((a, trace))
}

/// Closed-form adjacency entry between qubit `(l,m,d2)` (row) and `(i,j,d1)` (column).
fn closed_form_entry(l_side: usize, col: (usize, usize, Dir), row: (usize, usize, Dir)) -> bool {
    let big_l = l_side;
    let (i, j, d1) = col;
    let (l, m, d2) = row;
    // Column offsets are periodic in the second label.
    let prev = |k: usize| if k == 1 { big_l } else { k - 1 };
    match (d1, d2) {
        (Dir::X, Dir::X) => m == j && ((l == big_l && theta(i, big_l - 1)) ^ (i == big_l && theta(l, big_l - 1))),
        (Dir::Y, Dir::Y) => m == j && ((i == 1 && theta(2, l)) ^ (l == 1 && theta(2, i))),
        (Dir::Y, Dir::X) => ((m == j) ^ (prev(m) == j)) && i >= 2 && theta(l, i - 1),
        (Dir::X, Dir::Y) => ((m == j) ^ (prev(j) == m)) && theta(i + 1, l) && theta(i, big_l - 1),
    }
}

/// Evaluates the four-term closed form for every pair of qubits.
pub fn closed_form_adjacency(p: LatticeParams) -> Adjacency {
    let n = p.n_qubits();
    let coords: Vec<_> = p.coords().map(|c| (c.i, c.j, c.d)).collect();
    let rows: Vec<Vec<bool>> = coords
        .par_iter()
        .map(|&row| coords.iter().map(|&col| closed_form_entry(p.side(), col, row)).collect())
        .collect();
    Adjacency::new(BitMat::from_fn(n, n, |r, c| rows[r][c])).expect("closed form is symmetric with zero diagonal")
}

/// A star component: `center` adjacent to every leaf (1-based qubits).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarComponent {
    pub center: usize,
    pub leaves: Vec<usize>,
}

/// A half-graph component: `x[a]` adjacent to `y[b]` iff `a ≤ b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfComponent {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

impl HalfComponent {
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.x.iter().enumerate().flat_map(move |(a, &u)| self.y.iter().skip(a).map(move |&v| (u, v)))
    }
}

/// `A = mstar + mhalf1 + mhalf2` together with the component structure.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub mstar: Adjacency,
    pub mhalf1: Adjacency,
    pub mhalf2: Adjacency,
    /// x-stars for `j = 1..L`, then y-stars for `j = 1..L`.
    pub stars: Vec<StarComponent>,
    pub half1: Vec<HalfComponent>,
    pub half2: Vec<HalfComponent>,
}

impl Decomposition {
    pub fn layers(&self) -> [(&'static str, &Adjacency); 3] {
        [("mstar", &self.mstar), ("mhalf1", &self.mhalf1), ("mhalf2", &self.mhalf2)]
    }

    /// DOT rendering of `A` with edges colored by layer.
    pub fn to_dot(&self, p: LatticeParams) -> String {
        let labels = vertex_labels(p);
        let colors = ["red", "blue", "darkgreen"];
        let layers: Vec<DotLayer<'_>> =
            self.layers().iter().zip(colors).map(|(&(name, graph), color)| DotLayer { name, color, graph }).collect();
        dot_layers("toric", p.n_qubits(), Some(&labels), &layers)
    }
}

/// `"(i,j,d)"` for every qubit, in index order.
pub fn vertex_labels(p: LatticeParams) -> Vec<String> {
    p.coords().map(|c| c.to_string()).collect()
}

/// The three-layer structure predicted for the toric graph.
pub fn decomposition_components(p: LatticeParams) -> (Vec<StarComponent>, Vec<HalfComponent>, Vec<HalfComponent>) {
    let l = p.side();
    let x_stars = (1..=l).map(|j| StarComponent {
        center: p.index(l, j, Dir::X),
        leaves: (1..l).map(|a| p.index(a, j, Dir::X)).collect(),
    });
    let y_stars = (1..=l).map(|j| StarComponent {
        center: p.index(1, j, Dir::Y),
        leaves: (2..=l).map(|b| p.index(b, j, Dir::Y)).collect(),
    });
    let stars = x_stars.chain(y_stars).collect();
    let half = |shift: usize| {
        (1..=l)
            .map(|j| {
                let xj = (j - 1 + shift) % l + 1;
                HalfComponent {
                    x: (1..l).map(|a| p.index(a, xj, Dir::X)).collect(),
                    y: (1..l).map(|b| p.index(b + 1, j, Dir::Y)).collect(),
                }
            })
            .collect::<Vec<_>>()
    };
    (stars, half(0), half(1))
}

/// Splits `a` into its star and two half-graph layers and checks that they
/// are disjoint and sum to `a`.
pub fn decompose_adjacency(a: &Adjacency, p: LatticeParams) -> Result<Decomposition> {
    let n = p.n_qubits();
    if a.n() != n {
        return Err(Error::Shape(format!("adjacency has {} vertices, lattice has {n} qubits", a.n())));
    }
    let (stars, half1, half2) = decomposition_components(p);
    let mstar = Adjacency::from_edges(n, stars.iter().flat_map(|s| s.leaves.iter().map(|&v| (s.center, v))))?;
    let mhalf1 = Adjacency::from_edges(n, half1.iter().flat_map(HalfComponent::edges))?;
    let mhalf2 = Adjacency::from_edges(n, half2.iter().flat_map(HalfComponent::edges))?;

    for (x, y, what) in
        [(&mstar, &mhalf1, "mstar/mhalf1"), (&mstar, &mhalf2, "mstar/mhalf2"), (&mhalf1, &mhalf2, "mhalf1/mhalf2")]
    {
        if !x.is_disjoint_from(y) {
            return Err(Error::Decomposition(format!("{what} share an edge")));
        }
    }
    let sum = mstar.xor(&mhalf1)?.xor(&mhalf2)?;
    if &sum != a {
        let diff = sum.xor(a)?.edges();
        return Err(Error::Decomposition(format!("layers differ from the adjacency on edges {diff:?}")));
    }
    Ok(Decomposition { mstar, mhalf1, mhalf2, stars, half1, half2 })
}

/// `(L-1)L(L+2)`.
pub fn expected_edge_count(p: LatticeParams) -> usize {
    let l = p.side();
    (l - 1) * l * (l + 2)
}
