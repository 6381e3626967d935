//! Dense statevector simulation.
//!
//! Qubit `k` (1-based) of an `n`-qubit state is bit `n-k` of the amplitude
//! index, so qubit 1 is the most significant bit.

pub mod entropy;
pub mod kl;

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::lattice::{build_toric_tableau, string_operators, LatticeParams};
use crate::symplectic::PauliOp;

pub use entropy::entanglement_entropy;
pub use kl::{kl_distance, KlDistance, KlWitness, PauliErrorIter};

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 20;

/// Absolute tolerance for comparisons that are exact in theory.
pub const TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVec {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::Size(format!("{n} qubits exceeds the {MAX_QUBITS}-qubit simulation limit")));
    }
    Ok(())
}

/// Index mask of a 1-based qubit.
fn bit(n: usize, q: usize) -> usize {
    1 << (n - q)
}

impl StateVec {
    /// `|0...0>`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_size(n)?;
        if index >= 1 << n {
            return Err(Error::Index(format!("basis index {index} outside an {n}-qubit register")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_size(n)?;
        if amps.len() != 1 << n {
            return Err(Error::Shape(format!("{} amplitudes for {n} qubits", amps.len())));
        }
        Ok(Self { n, amps })
    }

    pub fn from_real(n: usize, amps: Vec<f64>) -> Result<Self> {
        Self::from_amplitudes(n, amps.into_iter().map(|a| Complex64::new(a, 0.0)).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// Scales to unit norm; fails on the zero vector.
    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm < TOL {
            return Err(Error::Input("cannot normalize a zero vector".into()));
        }
        self.amps.iter_mut().for_each(|a| *a /= norm);
        Ok(self)
    }

    fn check_same(&self, other: &StateVec) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Shape(format!("{}-qubit and {}-qubit states", self.n, other.n)));
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVec) -> Result<Complex64> {
        self.check_same(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|<self|other>|²`.
    pub fn fidelity(&self, other: &StateVec) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Multiplies by a global phase so the first amplitude above `TOL` is real positive.
    pub fn phase_normalized(&self) -> StateVec {
        let mut out = self.clone();
        if let Some(a) = self.amps.iter().find(|a| a.norm() > TOL) {
            let phase = a.conj() / a.norm();
            out.amps.iter_mut().for_each(|x| *x *= phase);
        }
        out
    }

    pub fn max_abs_diff(&self, other: &StateVec) -> Result<f64> {
        self.check_same(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Equality after fixing the global phase of both sides.
    pub fn approx_eq_up_to_phase(&self, other: &StateVec, tol: f64) -> Result<bool> {
        Ok(self.phase_normalized().max_abs_diff(&other.phase_normalized())? <= tol)
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &StateVec) -> Result<StateVec> {
        check_size(self.n + other.n)?;
        let amps = self.amps.iter().flat_map(|a| other.amps.iter().map(move |b| a * b)).collect();
        Ok(StateVec { n: self.n + other.n, amps })
    }

    pub fn add_scaled(&mut self, c: Complex64, other: &StateVec) -> Result<()> {
        self.check_same(other)?;
        self.amps.iter_mut().zip(&other.amps).for_each(|(a, b)| *a += c * b);
        Ok(())
    }

    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        let n = self.n;
        if let Some(&q) = g.qubits().iter().find(|&&q| q > n) {
            return Err(Error::Shape(format!("gate on qubit {q} in an {n}-qubit state")));
        }
        let q = g.qubits();
        match g.kind() {
            GateKind::H => {
                let b = bit(n, q[0]);
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.amps.par_chunks_mut(2 * b).for_each(|chunk| {
                    let (lo, hi) = chunk.split_at_mut(b);
                    for (x, y) in lo.iter_mut().zip(hi) {
                        let (a0, a1) = (*x, *y);
                        *x = (a0 + a1) * s;
                        *y = (a0 - a1) * s;
                    }
                });
            }
            GateKind::X => {
                let b = bit(n, q[0]);
                self.amps.par_chunks_mut(2 * b).for_each(|chunk| {
                    let (lo, hi) = chunk.split_at_mut(b);
                    lo.swap_with_slice(hi);
                });
            }
            GateKind::Z => {
                let b = bit(n, q[0]);
                self.amps.par_iter_mut().enumerate().filter(|(i, _)| i & b != 0).for_each(|(_, a)| *a = -*a);
            }
            GateKind::Cz => {
                let m = bit(n, q[0]) | bit(n, q[1]);
                self.amps.par_iter_mut().enumerate().filter(|(i, _)| i & m == m).for_each(|(_, a)| *a = -*a);
            }
            GateKind::Cx => {
                let (c, t) = (bit(n, q[0]), bit(n, q[1]));
                for i in 0..self.amps.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
        }
        Ok(())
    }

    /// `P|ψ>` for the phase-free `P = Z^u X^v`: `(Pψ)[q⊕v] = (-1)^{u·(q⊕v)} ψ[q]`.
    pub fn apply_pauli(&self, p: &PauliOp) -> Result<StateVec> {
        let (u, v) = pauli_masks(self.n, p)?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (q, a) in self.amps.iter().enumerate() {
            let r = q ^ v;
            out[r] = if (r & u).count_ones() % 2 == 1 { -a } else { *a };
        }
        Ok(StateVec { n: self.n, amps: out })
    }

    /// One `index re im` line per amplitude.
    pub fn to_text(&self) -> String {
        self.amps.iter().enumerate().fold(String::new(), |mut s, (i, a)| {
            let _ = writeln!(s, "{i} {:.12} {:.12}", a.re, a.im);
            s
        })
    }
}

/// `(u, v)` index masks of a Pauli acting on an `n`-qubit state.
pub(crate) fn pauli_masks(n: usize, p: &PauliOp) -> Result<(usize, usize)> {
    if p.n_qubits() != n {
        return Err(Error::Shape(format!("{}-qubit Pauli on an {n}-qubit state", p.n_qubits())));
    }
    let mask = |b: &crate::gf2::BitVec| b.iter_ones().fold(0usize, |m, k| m | bit(n, k + 1));
    Ok((mask(p.z_part()), mask(p.x_part())))
}

pub fn apply_circuit(s: &StateVec, c: &Circuit) -> Result<StateVec> {
    if s.n_qubits() != c.n_qubits() {
        return Err(Error::Shape(format!("{}-qubit circuit on an {}-qubit state", c.n_qubits(), s.n_qubits())));
    }
    let mut out = s.clone();
    for g in c.gates() {
        out.apply_gate(g)?;
    }
    Ok(out)
}

/// Runs `c` on `|0...0>`.
pub fn run(c: &Circuit) -> Result<StateVec> {
    apply_circuit(&StateVec::zero(c.n_qubits())?, c)
}

/// `<a|P|b>`.
pub fn pauli_matrix_element(a: &StateVec, p: &PauliOp, b: &StateVec) -> Result<Complex64> {
    a.inner(&b.apply_pauli(p)?)
}

/// `<s|P|s>`.
pub fn pauli_expectation(s: &StateVec, p: &PauliOp) -> Result<Complex64> {
    pauli_matrix_element(s, p, s)
}

/// Projects `|0...0>` onto the joint +1 eigenspace of all stars, plaquettes,
/// `S_alpha` and `S_beta`. Only `L = 2` unless `allow_large` (then `L = 3` too).
pub fn toric_code_reference_with(p: LatticeParams, allow_large: bool) -> Result<StateVec> {
    let limit = if allow_large { 3 } else { 2 };
    if p.side() > limit {
        return Err(Error::Size(format!("toric reference state limited to L <= {limit}")));
    }
    let (alpha, beta) = string_operators(p);
    let mut s = StateVec::zero(p.n_qubits())?;
    let ops = build_toric_tableau(p).generators().iter().cloned().chain([alpha, beta]).collect::<Vec<_>>();
    for op in &ops {
        let mut next = s.apply_pauli(op)?;
        next.add_scaled(Complex64::new(1.0, 0.0), &s)?;
        next.amps.iter_mut().for_each(|a| *a *= 0.5);
        s = next;
    }
    s.normalized()
}

pub fn toric_code_reference(p: LatticeParams) -> Result<StateVec> {
    toric_code_reference_with(p, false)
}
