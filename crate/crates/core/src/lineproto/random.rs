//! Seeded generator of valid random line protocols.

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::Rng;

use super::{LineParams, LineProtocol, Measurement, INPUT_X, INPUT_Y};
use crate::qcore::random::random_unitary;
use crate::qcore::{Gate, GateKind, QubitRef};

/// Knobs for [`random_protocol`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    /// Gates per (party, round) are drawn uniformly from `0..=max_gates`.
    pub max_gates: usize,
    /// Probability that a gate is controlled by an input bit (parties 0 and d only).
    pub input_control: f64,
    /// Probability that a gate is an explicit random unitary.
    pub explicit: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_gates: 3,
            input_control: 0.4,
            explicit: 0.25,
        }
    }
}

fn local_qubits(params: &LineParams, party: usize) -> Vec<QubitRef> {
    let mut v = Vec::new();
    if party > 0 {
        v.extend((0..params.b).map(|j| QubitRef::new("L", j)));
    }
    v.extend((0..params.s).map(|j| QubitRef::new("A", j)));
    if party < params.d {
        v.extend((0..params.b).map(|j| QubitRef::new("R", j)));
    }
    v
}

fn random_gate<R: Rng + ?Sized>(
    params: &LineParams,
    party: usize,
    qubits: &[QubitRef],
    cfg: &GeneratorConfig,
    rng: &mut R,
) -> Gate {
    let max_arity = qubits.len().min(3);
    let kind = if rng.random_bool(cfg.explicit) {
        if max_arity >= 2 && rng.random_bool(0.5) {
            GateKind::U2(random_unitary(4, rng))
        } else {
            GateKind::U1(random_unitary(2, rng))
        }
    } else {
        let mut kinds = vec![
            GateKind::H,
            GateKind::X,
            GateKind::Z,
            GateKind::S,
            GateKind::T,
        ];
        if max_arity >= 2 {
            kinds.extend([GateKind::Cnot, GateKind::Cz, GateKind::Swap]);
        }
        if max_arity >= 3 {
            kinds.push(GateKind::Ccnot);
        }
        kinds.choose(rng).expect("nonempty").clone()
    };
    let targets: Vec<QubitRef> = qubits.choose_multiple(rng, kind.arity()).cloned().collect();
    let mut g = Gate::new(kind, targets);
    let input = if party == 0 {
        Some(INPUT_X)
    } else if party == params.d {
        Some(INPUT_Y)
    } else {
        None
    };
    if let Some(reg) = input {
        if rng.random_bool(cfg.input_control) {
            g = g.controlled_by(QubitRef::new(reg, rng.random_range(0..params.n)));
        }
    }
    g
}

/// A random protocol satisfying every validation rule.
pub fn random_protocol<R: Rng + ?Sized>(
    params: LineParams,
    cfg: &GeneratorConfig,
    rng: &mut R,
) -> LineProtocol {
    let mut circuits = BTreeMap::new();
    for t in 1..=params.r {
        for i in 0..=params.d {
            let qubits = local_qubits(&params, i);
            let k = rng.random_range(0..=cfg.max_gates);
            let gates: Vec<Gate> = (0..k)
                .map(|_| random_gate(&params, i, &qubits, cfg, rng))
                .collect();
            if !gates.is_empty() {
                circuits.insert((t, i), gates);
            }
        }
    }
    let qubits = local_qubits(&params, 0);
    let k = rng.random_range(0..=cfg.max_gates.min(2));
    let gates = (0..k)
        .map(|_| random_gate(&params, 0, &qubits, cfg, rng))
        .collect();
    let output = qubits.choose(rng).expect("party 0 has a port").clone();
    LineProtocol::from_parts(params, circuits, Measurement { gates, output })
}
