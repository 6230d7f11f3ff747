use super::{Party, TwoPartyProtocol, TwoPartyRound};
use crate::error::{Error, Result};
use crate::lineproto::{left, memory, right, LineParams, LineProtocol};
use crate::qcore::{Gate, GateKind, QubitRef};

fn swap_edge_gates(params: &LineParams, l: usize, out: &mut Vec<Gate>) {
    for q in 0..params.b {
        out.push(Gate::new(
            GateKind::Swap,
            vec![QubitRef::new(right(l - 1), q), QubitRef::new(left(l), q)],
        ));
    }
}

fn push_party(p: &LineProtocol, j: usize, l: usize, out: &mut Vec<Gate>) {
    out.extend(p.circuit(j, l).iter().map(|g| p.physical_gate(l, g)));
}

/// Registers exchanged in every message: `R0` and all of parties 1..d−1.
fn message_registers(params: &LineParams) -> Vec<String> {
    let mut v = vec![right(0)];
    for i in 1..params.d {
        v.push(left(i));
        if params.s > 0 {
            v.push(memory(i));
        }
        v.push(right(i));
    }
    v
}

/// Qubits per message of the compiled protocol, either direction.
pub fn compiled_message_size(params: &LineParams) -> usize {
    (2 * params.d - 1) * params.b + (params.d - 1) * params.s
}

/// Total communication of the compiled protocol (r a multiple of d).
pub fn compiled_total(params: &LineParams) -> usize {
    2 * (params.r / params.d) * compiled_message_size(params)
}

/// Simulate blocks of `d` line rounds with two messages each.
///
/// In block `k` (t = kd) Alice runs the upper-left triangle: for each
/// j = t+1..t+d she applies party 0 and parties `l ≤ d−(j−t)`, then swaps
/// edges `l ≤ d−(j−t)`. Bob completes the remaining parties and edges.
/// Alice keeps `X`, `A0`; Bob keeps `Y`, `A_d` and party d's left port,
/// which his first step of the next block reads.
pub fn compile_line_to_two_party(protocol: &LineProtocol) -> Result<TwoPartyProtocol> {
    protocol.validate().into_result()?;
    let params = *protocol.params();
    let d = params.d;
    if !params.r.is_multiple_of(d) {
        return Err(Error::Precondition(format!(
            "r = {} is not a multiple of d = {d}; pad the protocol first",
            params.r
        )));
    }
    let message = message_registers(&params);
    let mut rounds = Vec::with_capacity(2 * params.r / d);
    for k in 0..params.r / d {
        let t = k * d;
        let mut alice = Vec::new();
        for j in t + 1..=t + d {
            let reach = d - (j - t);
            push_party(protocol, j, 0, &mut alice);
            for l in 1..=reach {
                push_party(protocol, j, l, &mut alice);
            }
            for l in 1..=reach {
                swap_edge_gates(&params, l, &mut alice);
            }
        }
        rounds.push(TwoPartyRound {
            sender: Party::Alice,
            gates: alice,
            message: message.clone(),
        });
        let mut bob = Vec::new();
        for j in t + 1..=t + d {
            let from = d + 1 - (j - t);
            push_party(protocol, j, d, &mut bob);
            for l in from..d {
                push_party(protocol, j, l, &mut bob);
            }
            for l in from..=d {
                swap_edge_gates(&params, l, &mut bob);
            }
        }
        rounds.push(TwoPartyRound {
            sender: Party::Bob,
            gates: bob,
            message: message.clone(),
        });
    }
    let registers = params.work_registers();
    let bob_only = [left(d), memory(d)];
    let alice_initial = registers
        .iter()
        .map(|r| r.name.clone())
        .filter(|n| !bob_only.contains(n))
        .collect();
    let m = protocol.measurement();
    let out = &m.output;
    let output = QubitRef::new(
        protocol
            .physical_name(0, &out.register)
            .ok_or_else(|| Error::UnknownRegister(out.register.clone()))?,
        out.index,
    );
    Ok(TwoPartyProtocol {
        n: params.n,
        registers,
        alice_initial,
        rounds,
        measurer: Party::Alice,
        measurement: m
            .gates
            .iter()
            .map(|g| protocol.physical_gate(0, g))
            .collect(),
        output,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lineproto::random::{random_protocol, GeneratorConfig};
    use crate::lineproto::{simulate_line_with, InputMode};
    use crate::qcore::Bits;
    use crate::twoparty::{communication_total, simulate_two_party_with};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_counts() {
        for (r, d, m) in [(6, 3, 4), (3, 3, 2), (4, 2, 4), (2, 1, 4)] {
            let p = LineProtocol::new(LineParams::new(1, d, r, 1, 1).unwrap());
            assert_eq!(compile_line_to_two_party(&p).unwrap().m(), m);
        }
        let p = LineProtocol::new(LineParams::new(1, 3, 5, 1, 1).unwrap());
        assert!(compile_line_to_two_party(&p).is_err());
    }

    #[test]
    fn message_sizes() {
        let params = LineParams::new(1, 2, 2, 1, 1).unwrap();
        assert_eq!(compiled_message_size(&params), 4);
        let tp = compile_line_to_two_party(&LineProtocol::new(params)).unwrap();
        let acc = communication_total(&tp);
        assert_eq!(
            acc.per_round.iter().map(|x| x.2).collect::<Vec<_>>(),
            [4, 4]
        );
        assert_eq!(acc.total, compiled_total(&params));
        let params = LineParams::new(1, 2, 4, 1, 1).unwrap();
        let tp = compile_line_to_two_party(&LineProtocol::new(params)).unwrap();
        assert_eq!(communication_total(&tp).total, 16);
    }

    #[test]
    fn compiled_states_match_line_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 0..12 {
            let d = 2 + k % 2;
            let params = LineParams::new(1 + k % 2, d, d * (1 + k % 2), 1, k % 3).unwrap();
            let p = random_protocol(params, &GeneratorConfig::default(), &mut rng);
            let tp = compile_line_to_two_party(&p).unwrap();
            for x in Bits::all(params.n) {
                for y in Bits::all(params.n) {
                    let (lo, lt) = simulate_line_with(&p, &x, &y, InputMode::Bound).unwrap();
                    let (to, tt) = simulate_two_party_with(&tp, &x, &y, InputMode::Bound).unwrap();
                    let diff = tt.final_state().max_abs_diff(lt.final_state()).unwrap();
                    assert!(diff < 1e-9, "protocol {k}: {diff}");
                    assert!(lo.max_abs_diff(&to) < 1e-9);
                    // block invariant
                    for b in 1..=params.r / d {
                        let diff = tt.rounds[2 * b]
                            .state
                            .max_abs_diff(&lt.snapshots[b * d].state)
                            .unwrap();
                        assert!(diff < 1e-9);
                    }
                }
            }
        }
    }
}
