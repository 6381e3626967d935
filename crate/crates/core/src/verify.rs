//! Verification suites with machine-readable reports.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::circuit::synth::{encoder_alpha_qubit, encoder_beta_qubit, encoder_stages, synth_toric};
use crate::circuit::{Circuit, Gate};
use crate::error::Result;
use crate::graph::{graph_state_vector, Adjacency};
use crate::lattice::{build_toric_tableau, string_operators, Dir, LatticeParams};
use crate::sim::kl::{ghz_copy_code, ghz_pair};
use crate::sim::{
    apply_circuit, entanglement_entropy, kl_distance, pauli_expectation, run, toric_code_reference_with, StateVec, TOL,
};
use crate::standard_form::{
    closed_form_adjacency, decompose_adjacency, expected_edge_count, r2_qubits, reduce_to_graph,
};
use crate::symplectic::PauliOp;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One named check. `witness` carries the evidence either way.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub check: String,
    pub status: Status,
    pub witness: Value,
}

impl Check {
    pub fn new(check: impl Into<String>, ok: bool, witness: Value) -> Self {
        Self { check: check.into(), status: if ok { Status::Pass } else { Status::Fail }, witness }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "status": if self.all_passed() { Status::Pass } else { Status::Fail },
            "checks": self.checks,
        })
    }
}

/// Deliberate damage for negative-control runs: toggles one adjacency edge
/// before it is compared or simulated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Corruption {
    pub flip_edge: Option<(usize, usize)>,
}

impl Corruption {
    fn apply(&self, a: &mut Adjacency) -> Result<()> {
        if let Some((u, v)) = self.flip_edge {
            a.flip_edge(u, v)?;
        }
        Ok(())
    }
}

/// Graph-form GF(2) checks: pipeline against closed form, edge count, decomposition.
pub fn verify_pipeline(p: LatticeParams, corrupt: Corruption) -> Result<Report> {
    let l = p.side();
    let mut r = Report::default();
    let (mut a, trace) = match reduce_to_graph(p) {
        Ok(x) => x,
        Err(e) => {
            r.push(Check::new("pipeline-runs", false, json!({ "L": l, "error": e.to_string() })));
            return Ok(r);
        }
    };
    corrupt.apply(&mut a)?;
    let closed = closed_form_adjacency(p);
    let diff = a.xor(&closed)?.edges();
    r.push(Check::new("pipeline-equals-closed-form", diff.is_empty(), json!({ "L": l, "differing_edges": diff })));
    r.push(Check::new(
        "edge-count",
        a.edge_count() == expected_edge_count(p),
        json!({ "L": l, "edges": a.edge_count(), "expected": expected_edge_count(p) }),
    ));
    r.push(Check::new(
        "hadamard-partition",
        trace.r1_mask.len() == l * l && trace.r2_mask.len() == l * l,
        json!({ "r1": trace.r1_mask.len(), "r2": trace.r2_mask.len() }),
    ));
    match decompose_adjacency(&a, p) {
        Ok(d) => r.push(Check::new(
            "decomposition",
            true,
            json!({
                "mstar": d.mstar.edge_count(),
                "mhalf1": d.mhalf1.edge_count(),
                "mhalf2": d.mhalf2.edge_count(),
            }),
        )),
        Err(e) => r.push(Check::new("decomposition", false, json!({ "error": e.to_string() }))),
    }
    Ok(r)
}

/// `H` on the `R₂` qubits, applied to a graph state.
pub fn hadamard_r2(p: LatticeParams, s: &StateVec) -> Result<StateVec> {
    apply_circuit(s, &Circuit::h_layer(p.n_qubits(), r2_qubits(p))?)
}

/// Statevector checks: synthesized circuit against the oracle, and local
/// Clifford equivalence of the graph state to the toric code state.
pub fn verify_state(p: LatticeParams, corrupt: Corruption) -> Result<Report> {
    let mut r = Report::default();
    let mut a = closed_form_adjacency(p);
    corrupt.apply(&mut a)?;
    let oracle = graph_state_vector(&a)?;
    let synthesized = run(&synth_toric(p)?)?;
    let diff = synthesized.max_abs_diff(&oracle)?;
    r.push(Check::new("circuit-equals-oracle", diff <= TOL, json!({ "max_abs_diff": diff })));

    let lc = hadamard_r2(p, &synthesized)?;
    let (alpha, beta) = string_operators(p);
    let mut ops: Vec<(String, PauliOp)> = build_toric_tableau(p)
        .generators()
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let cells = p.n_cells();
            let kind = if k < cells { "star" } else { "plaquette" };
            let c = k % cells;
            (format!("{kind}({},{})", c % p.side() + 1, c / p.side() + 1), g.clone())
        })
        .collect();
    ops.push(("S_alpha".into(), alpha));
    ops.push(("S_beta".into(), beta));
    let mut bad = Vec::new();
    for (name, op) in &ops {
        let e = pauli_expectation(&lc, op)?;
        if (e - Complex64::new(1.0, 0.0)).norm() > TOL {
            bad.push(json!({ "operator": name, "re": e.re, "im": e.im }));
        }
    }
    r.push(Check::new(
        "toric-stabilizers",
        bad.is_empty(),
        json!({ "satisfied": ops.len() - bad.len(), "total": ops.len(), "failing": bad }),
    ));

    let reference = toric_code_reference_with(p, true)?;
    let f = reference.fidelity(&lc)?;
    r.push(Check::new("toric-reference-fidelity", f >= 1.0 - TOL, json!({ "fidelity": f })));

    let n = p.n_qubits();
    let cuts: Vec<Vec<usize>> = vec![
        vec![1],
        (1..=n / 2).collect(),
        (1..=p.n_cells()).filter(|q| q % 2 == 1).collect(),
        (1..=p.side()).map(|i| p.index(i, 1, Dir::X)).collect(),
    ];
    let mut worst: f64 = 0.0;
    for cut in &cuts {
        let d = (entanglement_entropy(&lc, cut)? - entanglement_entropy(&reference, cut)?).abs();
        worst = worst.max(d);
    }
    r.push(Check::new("entropy-agreement", worst <= TOL, json!({ "cuts": cuts.len(), "max_diff": worst })));
    Ok(r)
}

/// Distance of the single GHZ pair and of the `m`-copy code.
pub fn verify_distance(m: usize) -> Result<Report> {
    let mut r = Report::default();
    let pair = kl_distance(&ghz_pair(m)?, m, TOL)?;
    r.push(Check::new("ghz-pair-distance", pair.exact() == Some(1), json!({ "m": m, "result": pair })));
    let code = kl_distance(&ghz_copy_code(m)?, m, TOL)?;
    r.push(Check::new("copy-code-distance", code.exact() == Some(m), json!({ "m": m, "result": code })));
    Ok(r)
}

/// Normalized complex coefficients drawn uniformly from the unit box.
pub fn random_coefficients(rng: &mut ChaCha8Rng) -> [Complex64; 4] {
    let mut c = [Complex64::new(0.0, 0.0); 4];
    for z in &mut c {
        *z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    let norm = c.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    c.map(|z| z / norm)
}

/// `c1|00> + c2|01> + c3|10> + c4|11>` on the two data qubits, ancillas in `|0>`.
pub fn encoder_input(p: LatticeParams, c: [Complex64; 4]) -> Result<StateVec> {
    let n = p.n_qubits();
    let (a, b) = (1usize << (n - encoder_alpha_qubit(p)), 1usize << (n - encoder_beta_qubit(p)));
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[0] = c[0];
    amps[b] = c[1];
    amps[a] = c[2];
    amps[a | b] = c[3];
    StateVec::from_amplitudes(n, amps)
}

/// `(c1 + c2 Z_β + c3 Z_α + c4 Z_α Z_β)|G>`.
pub fn logical_combination(p: LatticeParams, c: [Complex64; 4], g: &StateVec) -> Result<StateVec> {
    let l = p.side();
    let n = p.n_qubits();
    let z_alpha = PauliOp::z_on(n, (1..=l).map(|i| p.index(l, i, Dir::X)))?;
    let z_beta = PauliOp::z_on(n, (1..=l).map(|i| p.index(1, i, Dir::Y)))?;
    let mut out = StateVec::from_amplitudes(n, vec![Complex64::new(0.0, 0.0); 1 << n])?;
    out.add_scaled(c[0], g)?;
    out.add_scaled(c[1], &g.apply_pauli(&z_beta)?)?;
    out.add_scaled(c[2], &g.apply_pauli(&z_alpha)?)?;
    out.add_scaled(c[3], &g.apply_pauli(&z_alpha.mul(&z_beta)?)?)?;
    Ok(out)
}

/// Encodes `trials` random two-qubit states and compares with the logical target,
/// both after the star stage and at the end.
pub fn verify_encode(p: LatticeParams, seed: u64, trials: usize) -> Result<Report> {
    let mut r = Report::default();
    let stages = encoder_stages(p)?;
    let mut to_mstar = stages.ghz.clone();
    to_mstar.append(&stages.hadamard)?;
    to_mstar.append(&stages.mstar)?;
    let d = decompose_adjacency(&closed_form_adjacency(p), p)?;
    let g_mstar = graph_state_vector(&d.mstar)?;
    let g_toric = graph_state_vector(&closed_form_adjacency(p))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut worst_mid, mut worst_end) = (1.0f64, 1.0f64);
    for _ in 0..trials {
        let c = random_coefficients(&mut rng);
        let input = encoder_input(p, c)?;
        let mid = apply_circuit(&input, &to_mstar)?;
        worst_mid = worst_mid.min(mid.fidelity(&logical_combination(p, c, &g_mstar)?)?);
        let end = apply_circuit(&mid, &stages.mhalf)?;
        worst_end = worst_end.min(end.fidelity(&logical_combination(p, c, &g_toric)?)?);
    }
    let w = |f: f64| json!({ "trials": trials, "seed": seed, "min_fidelity": f });
    r.push(Check::new("encoder-after-stars", worst_mid >= 1.0 - TOL, w(worst_mid)));
    r.push(Check::new("encoder-output", worst_end >= 1.0 - TOL, w(worst_end)));
    Ok(r)
}

/// Local equivalence of the star state and GHZ: `H` on the center of the
/// `m`-qubit star state (center `m`) gives `(|+>^m + |->^m)/√2`.
pub fn star_center_hadamard(m: usize) -> Result<(StateVec, StateVec)> {
    let star = run(&crate::circuit::synth::synth_star(m)?)?;
    let mut c = Circuit::new(m);
    c.push_layer(vec![Gate::h(m)])?;
    let got = apply_circuit(&star, &c)?;
    let mut plus = StateVec::zero(m)?;
    let mut minus = StateVec::basis(m, (1 << m) - 1)?;
    let hs = Circuit::h_layer(m, 1..=m)?;
    plus = apply_circuit(&plus, &hs)?;
    minus = apply_circuit(&minus, &hs)?;
    let mut expect = StateVec::from_amplitudes(m, vec![Complex64::new(0.0, 0.0); 1 << m])?;
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    expect.add_scaled(s, &plus)?;
    expect.add_scaled(s, &minus)?;
    Ok((got, expect))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> LatticeParams {
        LatticeParams::new(2).unwrap()
    }

    #[test]
    fn pipeline_suite_passes() {
        for l in 2..=5 {
            assert!(verify_pipeline(LatticeParams::new(l).unwrap(), Corruption::default()).unwrap().all_passed());
        }
    }

    #[test]
    fn corrupted_pipeline_fails_by_name() {
        let r = verify_pipeline(p2(), Corruption { flip_edge: Some((1, 2)) }).unwrap();
        let failed: Vec<&str> = r.failures().map(|c| c.check.as_str()).collect();
        assert!(failed.contains(&"pipeline-equals-closed-form"));
    }

    #[test]
    fn state_suite_l2() {
        let r = verify_state(p2(), Corruption::default()).unwrap();
        assert!(r.all_passed(), "{:#?}", r);
        assert_eq!(r.checks[1].witness["satisfied"], 10);
    }

    #[test]
    fn corrupted_state_fails() {
        let r = verify_state(p2(), Corruption { flip_edge: Some((1, 5)) }).unwrap();
        assert!(!r.all_passed());
    }

    #[test]
    fn encode_suite_l2() {
        let r = verify_encode(p2(), 7, 5).unwrap();
        assert!(r.all_passed(), "{:#?}", r);
    }

    #[test]
    fn basis_inputs_give_logical_states() {
        let p = p2();
        let g = graph_state_vector(&closed_form_adjacency(p)).unwrap();
        let enc = crate::circuit::synth::synth_encoder(p).unwrap();
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let c = [one, zero, zero, zero];
        let out = apply_circuit(&encoder_input(p, c).unwrap(), &enc).unwrap();
        assert!(out.max_abs_diff(&g).unwrap() < TOL);
        let c = [zero, one, zero, zero];
        let out = apply_circuit(&encoder_input(p, c).unwrap(), &enc).unwrap();
        assert!(out.max_abs_diff(&logical_combination(p, c, &g).unwrap()).unwrap() < TOL);
    }

    #[test]
    fn distance_suite() {
        assert!(verify_distance(2).unwrap().all_passed());
        assert!(verify_distance(3).unwrap().all_passed());
    }

    #[test]
    fn report_json_shape() {
        let r = verify_pipeline(p2(), Corruption::default()).unwrap();
        let j = r.to_json();
        assert_eq!(j["status"], "pass");
        assert_eq!(j["checks"][0]["check"], "pipeline-equals-closed-form");
    }

    #[test]
    fn star_center_gives_ghz_superposition() {
        for m in 2..=8 {
            let (got, expect) = star_center_hadamard(m).unwrap();
            assert!(got.max_abs_diff(&expect).unwrap() < TOL, "m={m}");
        }
    }
}
