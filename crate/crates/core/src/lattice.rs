//! The periodic `L x L` toric lattice: qubit labels, star and plaquette
//! generators, and the two non-contractible string operators.
//!
//! Qubits sit on edges and are labelled `(i, j, d)` with `i, j ∈ 1..=L` and
//! direction `d ∈ {x, y}`. The linear index is `i + (j-1)L + [d=y]L²`, so all
//! x-edges come first. Periodic arithmetic on labels maps `0 -> L` and
//! `L+1 -> 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symplectic::{PauliOp, Tableau};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    X,
    Y,
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dir::X => "x",
            Dir::Y => "y",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeParams {
    l: usize,
}

impl LatticeParams {
    pub fn new(l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::Size(format!("lattice side must be at least 2, got {l}")));
        }
        Ok(Self { l })
    }

    pub fn side(&self) -> usize {
        self.l
    }

    /// `N = 2L²`.
    pub fn n_qubits(&self) -> usize {
        2 * self.l * self.l
    }

    pub fn n_cells(&self) -> usize {
        self.l * self.l
    }

    /// 1-based periodic wrap of a label that may have stepped off the lattice.
    pub fn wrap(&self, k: isize) -> usize {
        ((k - 1).rem_euclid(self.l as isize) + 1) as usize
    }

    fn check(&self, i: usize, j: usize) -> Result<()> {
        if !(1..=self.l).contains(&i) || !(1..=self.l).contains(&j) {
            return Err(Error::Index(format!("({i}, {j}) outside 1..={} lattice", self.l)));
        }
        Ok(())
    }

    /// Linear index of `(i, j, d)`, in `1..=2L²`.
    pub fn index(&self, i: usize, j: usize, d: Dir) -> usize {
        debug_assert!(self.check(i, j).is_ok());
        let l = self.l;
        i + (j - 1) * l + if d == Dir::Y { l * l } else { 0 }
    }

    /// Generator column (0-based) of the star or plaquette anchored at `(i, j)`.
    pub fn cell(&self, i: usize, j: usize) -> usize {
        (i - 1) + (j - 1) * self.l
    }

    /// All qubit labels in linear-index order.
    pub fn coords(&self) -> impl Iterator<Item = QubitCoord> + '_ {
        [Dir::X, Dir::Y]
            .into_iter()
            .flat_map(move |d| (1..=self.l).flat_map(move |j| (1..=self.l).map(move |i| QubitCoord { i, j, d })))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QubitCoord {
    pub i: usize,
    pub j: usize,
    pub d: Dir,
}

impl QubitCoord {
    pub fn new(i: usize, j: usize, d: Dir) -> Self {
        Self { i, j, d }
    }
}

impl fmt::Display for QubitCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.d)
    }
}

pub fn qubit_index(c: QubitCoord, p: LatticeParams) -> Result<usize> {
    p.check(c.i, c.j)?;
    Ok(p.index(c.i, c.j, c.d))
}

/// Inverse of [`qubit_index`].
pub fn qubit_coord(n: usize, p: LatticeParams) -> Result<QubitCoord> {
    if n == 0 || n > p.n_qubits() {
        return Err(Error::Index(format!("qubit {n} outside 1..={}", p.n_qubits())));
    }
    let l = p.side();
    let (d, rest) = if n > l * l { (Dir::Y, n - l * l - 1) } else { (Dir::X, n - 1) };
    Ok(QubitCoord { i: rest % l + 1, j: rest / l + 1, d })
}

/// Star `A_v` at vertex `(i, j)`: `X` on `(i,j,x), (i-1,j,x), (i,j,y), (i,j-1,y)`.
pub fn build_star(i: usize, j: usize, p: LatticeParams) -> Result<PauliOp> {
    p.check(i, j)?;
    let (si, sj) = (i as isize, j as isize);
    PauliOp::x_on(
        p.n_qubits(),
        [
            p.index(i, j, Dir::X),
            p.index(p.wrap(si - 1), j, Dir::X),
            p.index(i, j, Dir::Y),
            p.index(i, p.wrap(sj - 1), Dir::Y),
        ],
    )
}

/// Plaquette `B_p` with bottom-left corner `(i, j)`: `Z` on `(i,j,x), (i,j+1,x), (i,j,y), (i+1,j,y)`.
pub fn build_plaquette(i: usize, j: usize, p: LatticeParams) -> Result<PauliOp> {
    p.check(i, j)?;
    let (si, sj) = (i as isize, j as isize);
    PauliOp::z_on(
        p.n_qubits(),
        [
            p.index(i, j, Dir::X),
            p.index(i, p.wrap(sj + 1), Dir::X),
            p.index(i, j, Dir::Y),
            p.index(p.wrap(si + 1), j, Dir::Y),
        ],
    )
}

/// `(S_alpha, S_beta)`: `Z` on every `(l, 1, x)` and `X` on every `(l, L, y)`.
pub fn string_operators(p: LatticeParams) -> (PauliOp, PauliOp) {
    let l = p.side();
    let alpha = PauliOp::z_on(p.n_qubits(), (1..=l).map(|i| p.index(i, 1, Dir::X)));
    let beta = PauliOp::x_on(p.n_qubits(), (1..=l).map(|i| p.index(i, l, Dir::Y)));
    (alpha.expect("string support is in range"), beta.expect("string support is in range"))
}

/// The `2L²` toric generators: all stars (columns `0..L²`) then all
/// plaquettes (columns `L²..2L²`), each block ordered by [`LatticeParams::cell`].
pub fn build_toric_tableau(p: LatticeParams) -> Tableau {
    let l = p.side();
    let cells = || (1..=l).flat_map(move |j| (1..=l).map(move |i| (i, j)));
    let stars = cells().map(|(i, j)| build_star(i, j, p).expect("cell in range"));
    let plaquettes = cells().map(|(i, j)| build_plaquette(i, j, p).expect("cell in range"));
    Tableau::new(p.n_qubits(), stars.chain(plaquettes).collect()).expect("generators sized to lattice")
}

/// ASCII picture of an operator's support: one grid for x-edges and one for
/// y-edges, row `i` top to bottom, column `j` left to right.
pub fn render_operator(op: &PauliOp, p: LatticeParams) -> Result<String> {
    if op.n_qubits() != p.n_qubits() {
        return Err(Error::Shape(format!(
            "operator on {} qubits does not fit an L={} lattice",
            op.n_qubits(),
            p.side()
        )));
    }
    let l = p.side();
    let mut out = String::new();
    for d in [Dir::X, Dir::Y] {
        out.push_str(&format!("{d}-edges\n"));
        for i in 1..=l {
            let row: Vec<String> = (1..=l).map(|j| op.letter(p.index(i, j, d)).unwrap().to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    Ok(out)
}
