//! Brute-force code distance from the Knill-Laflamme conditions.
//!
//! Errors are phase-free Paulis `Z^u X^v`, so "Y" here is `ZX`. For the
//! real-amplitude codes checked in this crate that only changes matrix
//! elements by a sign, which does not affect whether a condition fails.

use itertools::Itertools;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{pauli_masks, StateVec};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::symplectic::PauliOp;

/// Every non-identity Pauli of weight `1..=max_weight`, by increasing weight,
/// then support in lexicographic order, then letters in `X, Y, Z` order.
pub struct PauliErrorIter {
    inner: Box<dyn Iterator<Item = PauliOp> + Send>,
}

impl PauliErrorIter {
    pub fn new(n: usize, max_weight: usize) -> Self {
        let inner = (1..=max_weight.min(n)).flat_map(move |w| {
            (0..n).combinations(w).flat_map(move |support| {
                std::iter::repeat_n(0..3u8, w).multi_cartesian_product().map(move |letters| {
                    let mut z = BitVec::zeros(n);
                    let mut x = BitVec::zeros(n);
                    for (&q, &l) in support.iter().zip(&letters) {
                        // 0 = X, 1 = Y, 2 = Z
                        x.set(q, l <= 1);
                        z.set(q, l >= 1);
                    }
                    PauliOp::from_parts(z, x).expect("parts share a length")
                })
            })
        });
        Self { inner: Box::new(inner) }
    }

    /// `Σ_{w=1}^{max} C(n,w) 3^w`.
    pub fn expected_len(n: usize, max_weight: usize) -> usize {
        (1..=max_weight.min(n)).map(|w| binomial(n, w) * 3usize.pow(w as u32)).sum()
    }
}

impl Iterator for PauliErrorIter {
    type Item = PauliOp;

    fn next(&mut self) -> Option<PauliOp> {
        self.inner.next()
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Which condition an error violates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KlWitness {
    pub operator: String,
    /// `"off-diagonal"` when `<ψa|O|ψb> ≠ 0` for `a ≠ b`, `"diagonal"` when
    /// `<ψa|O|ψa>` differs between codewords.
    pub condition: &'static str,
    pub codewords: (usize, usize),
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KlDistance {
    /// The lightest violating error has this weight.
    Exact { distance: usize, witness: KlWitness },
    /// No violation up to `d_max`; the distance is at least this.
    AtLeast { distance: usize },
}

impl KlDistance {
    pub fn exact(&self) -> Option<usize> {
        match self {
            KlDistance::Exact { distance, .. } => Some(*distance),
            KlDistance::AtLeast { .. } => None,
        }
    }
}

struct Sparse {
    index: Vec<usize>,
    amp: Vec<Complex64>,
}

impl Sparse {
    fn new(s: &StateVec) -> Self {
        let (index, amp) =
            s.amplitudes().iter().enumerate().filter(|(_, a)| a.norm() > 1e-14).map(|(i, a)| (i, *a)).unzip();
        Self { index, amp }
    }
}

/// `<a|Z^u X^v|b>` summed over the support of `b`.
fn element(a: &StateVec, b: &Sparse, u: usize, v: usize) -> Complex64 {
    let dense = a.amplitudes();
    b.index
        .iter()
        .zip(&b.amp)
        .map(|(&q, amp)| {
            let r = q ^ v;
            let sign = if (r & u).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            dense[r].conj() * amp * sign
        })
        .sum()
}

fn violation(codewords: &[StateVec], sparse: &[Sparse], op: &PauliOp, tol: f64) -> Option<KlWitness> {
    let n = codewords[0].n_qubits();
    let (u, v) = pauli_masks(n, op).expect("enumerated on the code's register");
    let witness = |condition, a, b, z: Complex64| KlWitness {
        operator: op.label(),
        condition,
        codewords: (a + 1, b + 1),
        re: z.re,
        im: z.im,
    };
    let first = element(&codewords[0], &sparse[0], u, v);
    for (a, ca) in codewords.iter().enumerate() {
        for (b, sb) in sparse.iter().enumerate() {
            let z = if a == 0 && b == 0 { first } else { element(ca, sb, u, v) };
            if a != b && z.norm() > tol {
                return Some(witness("off-diagonal", a, b, z));
            }
            if a == b && (z - first).norm() > tol {
                return Some(witness("diagonal", a, b, z - first));
            }
        }
    }
    None
}

/// Smallest weight of a Pauli violating `<ψa|O|ψb> = C(O) δab`, searched up to `d_max`.
pub fn kl_distance(codewords: &[StateVec], d_max: usize, tol: f64) -> Result<KlDistance> {
    let Some(first) = codewords.first() else {
        return Err(Error::Input("no codewords".into()));
    };
    let n = first.n_qubits();
    for (a, ca) in codewords.iter().enumerate() {
        for (b, cb) in codewords.iter().enumerate() {
            let z = ca.inner(cb)?;
            let expect = if a == b { 1.0 } else { 0.0 };
            if (z - Complex64::new(expect, 0.0)).norm() > tol {
                return Err(Error::Input(format!("codewords {} and {} are not orthonormal", a + 1, b + 1)));
            }
        }
    }
    let sparse: Vec<Sparse> = codewords.iter().map(Sparse::new).collect();
    for w in 1..=d_max.min(n) {
        let ops: Vec<PauliOp> = PauliErrorIter::new(n, w).skip(PauliErrorIter::expected_len(n, w - 1)).collect();
        let hit = ops.par_iter().map(|op| violation(codewords, &sparse, op, tol)).find_first(Option::is_some);
        if let Some(Some(witness)) = hit {
            return Ok(KlDistance::Exact { distance: w, witness });
        }
    }
    Ok(KlDistance::AtLeast { distance: d_max + 1 })
}

/// `(|φ_m^+>, |φ_m^->)` on `m` qubits.
pub fn ghz_pair(m: usize) -> Result<Vec<StateVec>> {
    use crate::graph::{ghz_reference, Sign};
    Ok(vec![ghz_reference(m, Sign::Plus)?, ghz_reference(m, Sign::Minus)?])
}

/// `(|φ_m^+>^{⊗m}, |φ_m^->^{⊗m})` on `m²` qubits.
pub fn ghz_copy_code(m: usize) -> Result<Vec<StateVec>> {
    ghz_pair(m)?.into_iter().map(|phi| (1..m).try_fold(phi.clone(), |acc, _| acc.tensor(&phi))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::TOL;

    #[test]
    fn enumeration_counts() {
        for n in 1..=16 {
            for w in 0..=3 {
                assert_eq!(PauliErrorIter::new(n, w).count(), PauliErrorIter::expected_len(n, w), "n={n} w={w}");
            }
        }
        assert_eq!(PauliErrorIter::expected_len(9, 2), 9 * 3 + 36 * 9);
        let first: Vec<String> = PauliErrorIter::new(2, 1).map(|p| p.label()).collect();
        assert_eq!(first, vec!["XI", "YI", "ZI", "IX", "IY", "IZ"]);
    }

    #[test]
    fn ghz_pair_has_distance_one() {
        for m in 2..=4 {
            let d = kl_distance(&ghz_pair(m).unwrap(), 3, TOL).unwrap();
            match d {
                KlDistance::Exact { distance, witness } => {
                    assert_eq!(distance, 1);
                    assert_eq!(witness.condition, "off-diagonal");
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn copy_codes() {
        assert_eq!(kl_distance(&ghz_copy_code(2).unwrap(), 3, TOL).unwrap().exact(), Some(2));
        assert_eq!(kl_distance(&ghz_copy_code(3).unwrap(), 3, TOL).unwrap().exact(), Some(3));
    }

    #[test]
    fn search_limit_is_reported() {
        let d = kl_distance(&ghz_copy_code(3).unwrap(), 2, TOL).unwrap();
        assert_eq!(d, KlDistance::AtLeast { distance: 3 });
    }

    #[test]
    fn rejects_non_orthonormal() {
        let s = StateVec::zero(2).unwrap();
        assert!(matches!(kl_distance(&[s.clone(), s], 1, TOL), Err(Error::Input(_))));
    }
}
