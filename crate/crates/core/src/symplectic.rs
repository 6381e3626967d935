//! Pauli operators and stabilizer generating sets in binary symplectic form.
//!
//! A Pauli `Z^u X^v` on one qubit is the pair `(u|v)`, so `I=(0|0)`,
//! `X=(0|1)`, `Z=(1|0)`, `Y=(1|1)`. Phases are never tracked. A [`Tableau`]
//! stores its generators as columns, so its matrix form is the `2N x M`
//! stack of the z-block over the x-block.
//!
//! Qubit arguments are 1-based.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMat, BitVec};

/// A phase-free Pauli operator on `n` qubits.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PauliRepr", into = "PauliRepr")]
pub struct PauliOp {
    z: BitVec,
    x: BitVec,
}

#[derive(Serialize, Deserialize)]
struct PauliRepr {
    z: String,
    x: String,
}

impl TryFrom<PauliRepr> for PauliOp {
    type Error = Error;

    fn try_from(r: PauliRepr) -> Result<Self> {
        PauliOp::from_parts(r.z.parse()?, r.x.parse()?)
    }
}

impl From<PauliOp> for PauliRepr {
    fn from(p: PauliOp) -> Self {
        PauliRepr { z: p.z.to_string(), x: p.x.to_string() }
    }
}

fn check_qubit(q: usize, n: usize) -> Result<usize> {
    if q == 0 || q > n {
        return Err(Error::Index(format!("qubit {q} outside 1..={n}")));
    }
    Ok(q - 1)
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        Self { z: BitVec::zeros(n), x: BitVec::zeros(n) }
    }

    pub fn from_parts(z: BitVec, x: BitVec) -> Result<Self> {
        if z.len() != x.len() {
            return Err(Error::Shape(format!("z part has {} qubits but x part has {}", z.len(), x.len())));
        }
        Ok(Self { z, x })
    }

    /// Parses a per-qubit label such as `"XZIY"`.
    pub fn from_label(label: &str) -> Result<Self> {
        let mut z = Vec::new();
        let mut x = Vec::new();
        for c in label.chars() {
            let (u, v) = match c {
                'I' => (false, false),
                'X' => (false, true),
                'Y' => (true, true),
                'Z' => (true, false),
                other => return Err(Error::Parse(format!("invalid Pauli letter {other:?}"))),
            };
            z.push(u);
            x.push(v);
        }
        Ok(Self { z: z.into_iter().collect(), x: x.into_iter().collect() })
    }

    /// `X` on each listed qubit.
    pub fn x_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut p = Self::identity(n);
        for q in qubits {
            p.x.flip(check_qubit(q, n)?);
        }
        Ok(p)
    }

    /// `Z` on each listed qubit.
    pub fn z_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut p = Self::identity(n);
        for q in qubits {
            p.z.flip(check_qubit(q, n)?);
        }
        Ok(p)
    }

    pub fn n_qubits(&self) -> usize {
        self.z.len()
    }

    pub fn z_part(&self) -> &BitVec {
        &self.z
    }

    pub fn x_part(&self) -> &BitVec {
        &self.x
    }

    /// The `2N` symplectic vector `(z | x)`.
    pub fn to_symplectic(&self) -> BitVec {
        self.z.concat(&self.x)
    }

    pub fn letter(&self, qubit: usize) -> Result<char> {
        let q = check_qubit(qubit, self.n_qubits())?;
        Ok(match (self.z.get(q), self.x.get(q)) {
            (false, false) => 'I',
            (false, true) => 'X',
            (true, true) => 'Y',
            (true, false) => 'Z',
        })
    }

    pub fn label(&self) -> String {
        (1..=self.n_qubits()).map(|q| self.letter(q).unwrap()).collect()
    }

    pub fn weight(&self) -> usize {
        self.support().count()
    }

    /// 1-based qubits acted on non-trivially.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_qubits()).filter(|&q| self.z.get(q) || self.x.get(q)).map(|q| q + 1)
    }

    pub fn is_identity(&self) -> bool {
        self.z.is_zero() && self.x.is_zero()
    }

    /// `aᵀJb mod 2`; `false` means the operators commute.
    pub fn symplectic_product(&self, other: &PauliOp) -> Result<bool> {
        if self.n_qubits() != other.n_qubits() {
            return Err(Error::Shape(format!(
                "symplectic product of {}-qubit and {}-qubit operators",
                self.n_qubits(),
                other.n_qubits()
            )));
        }
        Ok(self.z.dot(&other.x) ^ self.x.dot(&other.z))
    }

    pub fn commutes_with(&self, other: &PauliOp) -> Result<bool> {
        Ok(!self.symplectic_product(other)?)
    }

    /// Product up to phase (componentwise XOR).
    pub fn mul(&self, other: &PauliOp) -> Result<PauliOp> {
        if self.n_qubits() != other.n_qubits() {
            return Err(Error::Shape("multiplying operators of different sizes".into()));
        }
        Ok(PauliOp { z: &self.z ^ &other.z, x: &self.x ^ &other.x })
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOp({})", self.label())
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// An ordered stabilizer generating set.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TableauRepr")]
pub struct Tableau {
    n_qubits: usize,
    generators: Vec<PauliOp>,
}

#[derive(Deserialize)]
struct TableauRepr {
    n_qubits: usize,
    generators: Vec<PauliOp>,
}

impl TryFrom<TableauRepr> for Tableau {
    type Error = Error;

    fn try_from(r: TableauRepr) -> Result<Self> {
        Tableau::new(r.n_qubits, r.generators)
    }
}

impl Tableau {
    pub fn new(n_qubits: usize, generators: Vec<PauliOp>) -> Result<Self> {
        if let Some(bad) = generators.iter().position(|g| g.n_qubits() != n_qubits) {
            return Err(Error::Shape(format!(
                "generator {bad} acts on {} qubits, expected {n_qubits}",
                generators[bad].n_qubits()
            )));
        }
        Ok(Self { n_qubits, generators })
    }

    /// Tableau whose columns are the columns of a `2N x M` matrix `(z ; x)`.
    pub fn from_matrix(m: &BitMat) -> Result<Self> {
        if !m.n_rows().is_multiple_of(2) {
            return Err(Error::Shape(format!("symplectic matrix has odd row count {}", m.n_rows())));
        }
        let n = m.n_rows() / 2;
        let generators = (0..m.n_cols())
            .map(|c| {
                let col = m.col(c);
                PauliOp { z: (0..n).map(|r| col.get(r)).collect(), x: (n..2 * n).map(|r| col.get(r)).collect() }
            })
            .collect();
        Ok(Self { n_qubits: n, generators })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[PauliOp] {
        &self.generators
    }

    /// The `N x M` block of z components (rows are qubits, columns generators).
    pub fn z_block(&self) -> BitMat {
        BitMat::from_fn(self.n_qubits, self.generators.len(), |q, g| self.generators[g].z.get(q))
    }

    pub fn x_block(&self) -> BitMat {
        BitMat::from_fn(self.n_qubits, self.generators.len(), |q, g| self.generators[g].x.get(q))
    }

    /// The `2N x M` matrix `S`.
    pub fn to_matrix(&self) -> BitMat {
        let n = self.n_qubits;
        BitMat::from_fn(2 * n, self.generators.len(), |r, g| {
            let p = &self.generators[g];
            if r < n {
                p.z.get(r)
            } else {
                p.x.get(r - n)
            }
        })
    }

    /// `SᵀJS`: entry `(a, b)` is the symplectic product of generators `a` and `b`.
    pub fn commutation_matrix(&self) -> BitMat {
        let g = &self.generators;
        BitMat::from_fn(g.len(), g.len(), |a, b| g[a].z.dot(&g[b].x) ^ g[a].x.dot(&g[b].z))
    }

    pub fn is_self_orthogonal(&self) -> bool {
        self.commutation_matrix().is_zero()
    }

    /// Graph standard form `(A | I)`: identity x-block, symmetric zero-diagonal z-block.
    pub fn is_graph_form(&self) -> bool {
        let z = self.z_block();
        self.x_block() == BitMat::identity(self.n_qubits)
            && z.is_symmetric()
            && (0..self.n_qubits).all(|q| !z.get(q, q))
    }

    /// Conjugation by Hadamards on `subset`: swaps the z and x components of
    /// those qubits in every generator.
    pub fn hadamard_conjugate(&self, subset: &[usize]) -> Result<Tableau> {
        let idx = subset.iter().map(|&q| check_qubit(q, self.n_qubits)).collect::<Result<Vec<_>>>()?;
        let mut out = self.clone();
        for g in &mut out.generators {
            for &q in &idx {
                let (zq, xq) = (g.z.get(q), g.x.get(q));
                g.z.set(q, xq);
                g.x.set(q, zq);
            }
        }
        Ok(out)
    }

    /// Basis change `S -> S R`: new generator `j` is the XOR of the old
    /// generators `k` with `R[k][j] = 1`.
    pub fn right_multiply(&self, r: &BitMat) -> Result<Tableau> {
        let m = self.generators.len();
        if r.n_rows() != m || r.n_cols() != m {
            return Err(Error::Shape(format!("basis change must be {m}x{m}, got {}x{}", r.n_rows(), r.n_cols())));
        }
        if r.rank() != m {
            return Err(Error::NotInvertible);
        }
        let generators = (0..m)
            .map(|j| {
                let mut acc = PauliOp::identity(self.n_qubits);
                for k in (0..m).filter(|&k| r.get(k, j)) {
                    acc.z ^= &self.generators[k].z;
                    acc.x ^= &self.generators[k].x;
                }
                acc
            })
            .collect();
        Ok(Tableau { n_qubits: self.n_qubits, generators })
    }

    /// Reorders generators so that new column `i` is old column `perm[i]`.
    pub fn permute_generators(&self, perm: &[usize]) -> Result<Tableau> {
        let m = self.generators.len();
        let mut seen = vec![false; m];
        if perm.len() != m || perm.iter().any(|&p| p >= m || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Input(format!("{perm:?} is not a permutation of 0..{m}")));
        }
        Ok(Tableau { n_qubits: self.n_qubits, generators: perm.iter().map(|&p| self.generators[p].clone()).collect() })
    }

    pub fn replace_generator(&mut self, index: usize, p: PauliOp) -> Result<PauliOp> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::Shape("replacement generator has the wrong size".into()));
        }
        let slot =
            self.generators.get_mut(index).ok_or_else(|| Error::Index(format!("generator {index} out of range")))?;
        Ok(std::mem::replace(slot, p))
    }

    /// The `2N x M` character grid (z rows first).
    pub fn to_text(&self) -> String {
        self.to_matrix().to_text()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("tableau serialization is infallible")
    }
}

impl fmt::Debug for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.generators.iter().map(PauliOp::label)).finish()
    }
}
