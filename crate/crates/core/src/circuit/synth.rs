//! Logarithmic-depth circuits for star, half and toric graph states, and the
//! encoder of an unknown two-qubit state into the toric graph code.

use serde::{Deserialize, Serialize};

use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::lattice::{Dir, LatticeParams};
use crate::standard_form::{decomposition_components, HalfComponent, StarComponent};

/// `⌈log₂ k⌉` for `k ≥ 1`.
pub fn ceil_log2(k: usize) -> usize {
    assert!(k >= 1);
    (usize::BITS - (k - 1).leading_zeros()) as usize
}

/// CX tree on registers `1..=k`: after layer `d`, register `c·2^d` holds the
/// parity of its block, and register `k` ends with the parity of all `k`.
/// Targets past `k` are clamped to `k`; a clamped gate onto itself is skipped.
pub fn parity_layers(k: usize) -> Vec<Vec<(usize, usize)>> {
    if k == 0 {
        return Vec::new();
    }
    (1..=ceil_log2(k))
        .map(|d| {
            let half = 1 << (d - 1);
            (half..=k).step_by(2 * half).map(|i| (i, (i + half).min(k))).filter(|&(i, t)| t != i).collect()
        })
        .collect()
}

/// The diagonal part of the star circuit: parity network, `CZ(m-1, m)`, inverse network.
pub fn star_phase(m: usize) -> Result<Circuit> {
    if m < 2 {
        return Err(Error::Size(format!("star circuit needs m >= 2, got {m}")));
    }
    let mut compute = Circuit::new(m);
    for layer in parity_layers(m - 1) {
        compute.push_layer(layer.into_iter().map(|(c, t)| Gate::cx(c, t)).collect())?;
    }
    let mut c = compute.clone();
    c.push_layer(vec![Gate::cz(m - 1, m)])?;
    c.append(&compute.inverse())?;
    Ok(c)
}

/// Star graph state on `m` qubits with the center at qubit `m`.
pub fn synth_star(m: usize) -> Result<Circuit> {
    let mut c = Circuit::h_layer(m, 1..=m)?;
    c.append(&star_phase(m)?)?;
    Ok(c)
}

/// Level ordering for the half-graph phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfSchedule {
    /// Parities computed once and reused by every later level; uncomputed at the end.
    #[default]
    Reuse,
    /// Each level builds its parities, applies its CZs and uncomputes: `O(log² n)` depth.
    Independent,
}

/// Register layout of the half circuit: `x_i` is qubit `i`, `y_j` is qubit `n+j`.
fn half_cx_layer(n: usize, d: usize) -> Vec<Gate> {
    let half = 1 << (d - 1);
    (half..=n)
        .step_by(2 * half)
        .map(|i| (i, (i + half).min(n)))
        .filter(|&(i, t)| t != i)
        .flat_map(|(i, t)| [Gate::cx(i, t), Gate::cx(n + i, n + t)])
        .collect()
}

fn half_cz_layer(n: usize, d: usize) -> Vec<Gate> {
    let half = 1 << (d - 1);
    (half..=n)
        .step_by(2 * half)
        .map(|i| (i, (i + half).min(n)))
        .filter(|&(i, t)| t != i)
        .map(|(i, t)| Gate::cz(i, n + t))
        .collect()
}

/// The diagonal part of the half circuit, `(-1)^{Σ_{i≤j} x_i y_j}`.
///
/// Level `d` pairs the x-parity of a block of `2^{d-1}` with the y-parity of
/// the block right after it. With [`HalfSchedule::Reuse`] the top level's
/// CX layer would be undone immediately, so it is left out.
pub fn half_phase(n: usize, schedule: HalfSchedule) -> Result<Circuit> {
    if n < 1 {
        return Err(Error::Size("half circuit needs n >= 1".into()));
    }
    let levels = ceil_log2(n);
    let mut c = Circuit::new(2 * n);
    c.push_layer((1..=n).map(|i| Gate::cz(i, n + i)).collect())?;
    match schedule {
        HalfSchedule::Reuse => {
            let mut compute = Circuit::new(2 * n);
            for d in 1..=levels {
                c.push_layer(half_cz_layer(n, d))?;
                if d < levels {
                    let layer = half_cx_layer(n, d);
                    c.push_layer(layer.clone())?;
                    compute.push_layer(layer)?;
                }
            }
            c.append(&compute.inverse())?;
        }
        HalfSchedule::Independent => {
            for d in 1..=levels {
                let mut compute = Circuit::new(2 * n);
                for e in 1..d {
                    compute.push_layer(half_cx_layer(n, e))?;
                }
                c.append(&compute)?;
                c.push_layer(half_cz_layer(n, d))?;
                c.append(&compute.inverse())?;
            }
        }
    }
    Ok(c)
}

/// Half graph state on `2n` qubits (`x` register first).
pub fn synth_half(n: usize) -> Result<Circuit> {
    synth_half_with(n, HalfSchedule::Reuse)
}

pub fn synth_half_with(n: usize, schedule: HalfSchedule) -> Result<Circuit> {
    let mut c = Circuit::h_layer(2 * n, 1..=2 * n)?;
    c.append(&half_phase(n, schedule)?)?;
    Ok(c)
}

fn star_on(comp: &StarComponent, n: usize) -> Result<Circuit> {
    let mut map = comp.leaves.clone();
    map.push(comp.center);
    star_phase(map.len())?.remap(n, &map)
}

fn half_on(comp: &HalfComponent, n: usize, schedule: HalfSchedule) -> Result<Circuit> {
    let map: Vec<usize> = comp.x.iter().chain(&comp.y).copied().collect();
    half_phase(comp.x.len(), schedule)?.remap(n, &map)
}

/// `U^mstar`: all `2L` star phases in shared layers.
pub fn mstar_phase(p: LatticeParams) -> Result<Circuit> {
    let n = p.n_qubits();
    let (stars, _, _) = decomposition_components(p);
    let parts = stars.iter().map(|s| star_on(s, n)).collect::<Result<Vec<_>>>()?;
    Circuit::merge_parallel(n, &parts)
}

/// `U^mhalf`: the `mhalf1` components in shared layers, then the `mhalf2` components.
pub fn mhalf_phase(p: LatticeParams, schedule: HalfSchedule) -> Result<Circuit> {
    let n = p.n_qubits();
    let (_, half1, half2) = decomposition_components(p);
    let mut c = Circuit::new(n);
    for group in [&half1, &half2] {
        let parts = group.iter().map(|h| half_on(h, n, schedule)).collect::<Result<Vec<_>>>()?;
        c.append(&Circuit::merge_parallel(n, &parts)?)?;
    }
    Ok(c)
}

/// `U^mhalf U^mstar H^{⊗2L²}`.
pub fn synth_toric(p: LatticeParams) -> Result<Circuit> {
    synth_toric_with(p, HalfSchedule::Reuse)
}

pub fn synth_toric_with(p: LatticeParams, schedule: HalfSchedule) -> Result<Circuit> {
    let n = p.n_qubits();
    let mut c = Circuit::h_layer(n, 1..=n)?;
    c.append(&mstar_phase(p)?)?;
    c.append(&mhalf_phase(p, schedule)?)?;
    Ok(c)
}

/// The encoder in named stages, so intermediate states can be checked.
#[derive(Clone, Debug)]
pub struct EncoderStages {
    /// Copies each data qubit onto its `L` star centers.
    pub ghz: Circuit,
    /// `H` on every qubit.
    pub hadamard: Circuit,
    pub mstar: Circuit,
    pub mhalf: Circuit,
}

impl EncoderStages {
    pub fn full(&self) -> Circuit {
        let mut c = self.ghz.clone();
        for part in [&self.hadamard, &self.mstar, &self.mhalf] {
            c.append(part).expect("stages share one register");
        }
        c
    }
}

/// Data qubit carrying the first input qubit: `(L,1,x)`.
pub fn encoder_alpha_qubit(p: LatticeParams) -> usize {
    p.index(p.side(), 1, Dir::X)
}

/// Data qubit carrying the second input qubit: `(1,1,y)`.
pub fn encoder_beta_qubit(p: LatticeParams) -> usize {
    p.index(1, 1, Dir::Y)
}

/// Stages of the encoder. All qubits other than the two data qubits start in `|0>`.
pub fn encoder_stages(p: LatticeParams) -> Result<EncoderStages> {
    let l = p.side();
    let n = p.n_qubits();
    let registers = [
        (encoder_alpha_qubit(p), (2..=l).map(|j| p.index(l, j, Dir::X)).collect::<Vec<_>>()),
        (encoder_beta_qubit(p), (2..=l).map(|j| p.index(1, j, Dir::Y)).collect::<Vec<_>>()),
    ];
    let ancillas: Vec<usize> = registers.iter().flat_map(|(_, a)| a.iter().copied()).collect();
    let stars = registers
        .iter()
        .map(|(data, anc)| {
            let mut map = anc.clone();
            map.push(*data);
            star_phase(l)?.remap(n, &map)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut ghz = Circuit::h_layer(n, ancillas.iter().copied())?;
    ghz.append(&Circuit::merge_parallel(n, &stars)?)?;
    ghz.append(&Circuit::h_layer(n, ancillas.iter().copied())?)?;
    Ok(EncoderStages {
        ghz,
        hadamard: Circuit::h_layer(n, 1..=n)?,
        mstar: mstar_phase(p)?,
        mhalf: mhalf_phase(p, HalfSchedule::Reuse)?,
    })
}

pub fn synth_encoder(p: LatticeParams) -> Result<Circuit> {
    Ok(encoder_stages(p)?.full())
}
