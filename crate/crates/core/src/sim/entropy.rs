use nalgebra::DMatrix;
use num_complex::Complex64;

use super::StateVec;
use crate::error::{Error, Result};

/// Von Neumann entropy (base 2) of the reduced state on `subset` (1-based qubits).
pub fn entanglement_entropy(s: &StateVec, subset: &[usize]) -> Result<f64> {
    let n = s.n_qubits();
    let mut inside = vec![false; n + 1];
    for &q in subset {
        if q == 0 || q > n {
            return Err(Error::Index(format!("qubit {q} outside 1..={n}")));
        }
        inside[q] = true;
    }
    let a: Vec<usize> = (1..=n).filter(|&q| inside[q]).collect();
    let b: Vec<usize> = (1..=n).filter(|&q| !inside[q]).collect();
    if a.is_empty() || b.is_empty() {
        return Err(Error::Input("bipartition needs both sides nonempty".into()));
    }
    let gather = |part: &[usize], idx: usize| part.iter().fold(0usize, |acc, &q| (acc << 1) | (idx >> (n - q) & 1));
    let mut m = DMatrix::<Complex64>::zeros(1 << a.len(), 1 << b.len());
    for (idx, amp) in s.amplitudes().iter().enumerate() {
        m[(gather(&a, idx), gather(&b, idx))] = *amp;
    }
    let entropy =
        m.singular_values().iter().map(|sv| sv * sv).filter(|&p| p > 1e-14).map(|p| -p * p.log2()).sum::<f64>();
    Ok(entropy.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ghz_reference, Sign};

    #[test]
    fn product_state_has_zero_entropy() {
        let s = StateVec::basis(4, 0b1010).unwrap();
        for cut in [vec![1], vec![1, 3], vec![2, 3, 4]] {
            assert!(entanglement_entropy(&s, &cut).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn ghz_has_one_bit() {
        let s = ghz_reference(4, Sign::Plus).unwrap();
        for cut in [vec![1], vec![1, 2], vec![2, 4], vec![1, 2, 3]] {
            assert!((entanglement_entropy(&s, &cut).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn trivial_cuts_are_rejected() {
        let s = StateVec::zero(2).unwrap();
        assert!(entanglement_entropy(&s, &[]).is_err());
        assert!(entanglement_entropy(&s, &[1, 2]).is_err());
        assert!(entanglement_entropy(&s, &[3]).is_err());
    }
}
