//! Two-party protocols, the line → two-party compiler, and communication accounting.
//!
//! Registers keep their physical line names (`A0`, `R0`, `L1`, …) so that
//! compiled and line simulations can be compared amplitude by amplitude.
//! Alice always holds `X`, Bob always holds `Y`.

mod compile;
mod ir;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::lineproto::{InputMode, OutputDistribution, INPUT_X, INPUT_Y};
use crate::qcore::{Bits, ClassicalBits, Gate, PureState, QubitRef, Register, RegisterLayout};

pub use compile::{compile_line_to_two_party, compiled_message_size, compiled_total};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }

    fn input(self) -> &'static str {
        match self {
            Party::Alice => INPUT_X,
            Party::Bob => INPUT_Y,
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::Alice => "alice",
            Party::Bob => "bob",
        })
    }
}

impl std::str::FromStr for Party {
    type Err = Error;
    fn from_str(s: &str) -> Result<Party> {
        match s {
            "alice" => Ok(Party::Alice),
            "bob" => Ok(Party::Bob),
            other => Err(Error::Invalid(format!("unknown party `{other}`"))),
        }
    }
}

/// One round: the sender's local circuit followed by sending `message`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPartyRound {
    pub sender: Party,
    pub gates: Vec<Gate>,
    pub message: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoPartyProtocol {
    /// Input length.
    pub n: usize,
    /// Work registers in canonical order (inputs excluded).
    pub registers: Vec<Register>,
    /// Work registers Alice holds before round 1; the rest start with Bob.
    pub alice_initial: Vec<String>,
    pub rounds: Vec<TwoPartyRound>,
    pub measurer: Party,
    pub measurement: Vec<Gate>,
    pub output: QubitRef,
}

/// Register holdings at the end of round `k` (k = 0: before round 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Holdings {
    pub k: usize,
    /// Alice's registers, inputs included.
    pub alice: Vec<String>,
    /// Bob's registers, inputs included.
    pub bob: Vec<String>,
    /// The message delivered in round k (empty for k = 0).
    pub message: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct TranscriptRound {
    pub holdings: Holdings,
    pub state: PureState,
}

/// Global state and partitions `E_k` (Alice) / `F_k` (Bob) after each round.
#[derive(Debug, Clone)]
pub struct TwoPartyTranscript {
    pub mode: InputMode,
    pub rounds: Vec<TranscriptRound>,
}

impl TwoPartyTranscript {
    pub fn final_state(&self) -> &PureState {
        &self.rounds.last().expect("round 0 present").state
    }
}

impl TwoPartyProtocol {
    pub fn m(&self) -> usize {
        self.rounds.len()
    }

    pub fn work_layout(&self) -> Result<RegisterLayout> {
        RegisterLayout::new(self.registers.clone())
    }

    pub fn full_layout(&self) -> Result<RegisterLayout> {
        let mut regs = vec![Register::new(INPUT_X, self.n)];
        regs.extend(self.registers.iter().cloned());
        regs.push(Register::new(INPUT_Y, self.n));
        RegisterLayout::new(regs)
    }

    fn width(&self, name: &str) -> Option<usize> {
        match name {
            INPUT_X | INPUT_Y => Some(self.n),
            _ => self
                .registers
                .iter()
                .find(|r| r.name == name)
                .map(|r| r.width),
        }
    }

    /// Holdings before round 1 and after every round. Fails on an invalid protocol.
    pub fn holdings(&self) -> Result<Vec<Holdings>> {
        let names: Vec<String> = self.registers.iter().map(|r| r.name.clone()).collect();
        let mut alice: BTreeSet<String> = BTreeSet::new();
        for a in &self.alice_initial {
            if !names.contains(a) {
                return Err(Error::Invalid(format!(
                    "alice holds unknown register `{a}`"
                )));
            }
            alice.insert(a.clone());
        }
        let order = |set: &BTreeSet<String>, party: Party| -> Vec<String> {
            let mut v: Vec<String> = Vec::new();
            if party == Party::Alice {
                v.push(INPUT_X.into());
            }
            v.extend(names.iter().filter(|n| set.contains(*n)).cloned());
            if party == Party::Bob {
                v.push(INPUT_Y.into());
            }
            v
        };
        let bob_of = |alice: &BTreeSet<String>| -> BTreeSet<String> {
            names
                .iter()
                .filter(|n| !alice.contains(*n))
                .cloned()
                .collect()
        };
        let mut out = vec![Holdings {
            k: 0,
            alice: order(&alice, Party::Alice),
            bob: order(&bob_of(&alice), Party::Bob),
            message: Vec::new(),
        }];
        let mut expected = Party::Alice;
        for (idx, round) in self.rounds.iter().enumerate() {
            let k = idx + 1;
            if round.sender != expected {
                return Err(Error::Invalid(format!(
                    "round {k}: sender must be {expected} (senders alternate, Alice first)"
                )));
            }
            let owned = match round.sender {
                Party::Alice => alice.clone(),
                Party::Bob => bob_of(&alice),
            };
            for g in &round.gates {
                self.check_gate(g, round.sender, &owned)
                    .map_err(|e| Error::Invalid(format!("round {k}: {e}")))?;
            }
            let mut seen = BTreeSet::new();
            for m in &round.message {
                if !owned.contains(m) || !seen.insert(m) {
                    return Err(Error::Invalid(format!(
                        "round {k}: {} cannot send `{m}`",
                        round.sender
                    )));
                }
                match round.sender {
                    Party::Alice => {
                        alice.remove(m);
                    }
                    Party::Bob => {
                        alice.insert(m.clone());
                    }
                }
            }
            out.push(Holdings {
                k,
                alice: order(&alice, Party::Alice),
                bob: order(&bob_of(&alice), Party::Bob),
                message: round.message.clone(),
            });
            expected = expected.other();
        }
        let owned = match self.measurer {
            Party::Alice => alice,
            Party::Bob => bob_of(&alice),
        };
        for g in &self.measurement {
            self.check_gate(g, self.measurer, &owned)
                .map_err(|e| Error::Invalid(format!("measurement: {e}")))?;
        }
        self.check_qubit(&self.output, self.measurer, &owned, false)
            .map_err(|e| Error::Invalid(format!("output: {e}")))?;
        Ok(out)
    }

    fn check_qubit(
        &self,
        q: &QubitRef,
        party: Party,
        owned: &BTreeSet<String>,
        control: bool,
    ) -> std::result::Result<(), String> {
        let w = self
            .width(&q.register)
            .ok_or_else(|| format!("unknown register `{}`", q.register))?;
        if q.index >= w {
            return Err(format!("{q} out of range (width {w})"));
        }
        if q.register == INPUT_X || q.register == INPUT_Y {
            if !control {
                return Err(format!("input register not read-only ({q})"));
            }
            if q.register != party.input() {
                return Err(format!("{party} cannot read {}", q.register));
            }
            return Ok(());
        }
        if !owned.contains(&q.register) {
            return Err(format!("{party} does not hold `{}`", q.register));
        }
        Ok(())
    }

    fn check_gate(
        &self,
        g: &Gate,
        party: Party,
        owned: &BTreeSet<String>,
    ) -> std::result::Result<(), String> {
        g.check().map_err(|e| e.to_string())?;
        for q in &g.targets {
            self.check_qubit(q, party, owned, false)?;
        }
        if let Some(c) = &g.control {
            self.check_qubit(c, party, owned, true)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds.is_empty() {
            return Err(Error::Invalid(
                "a two-party protocol needs m ≥ 1 rounds".into(),
            ));
        }
        RegisterLayout::with_cap(self.registers.clone(), usize::MAX)?;
        self.holdings().map(|_| ())
    }

    fn message_qubits(&self, msg: &[String]) -> usize {
        msg.iter().filter_map(|m| self.width(m)).sum()
    }
}

fn check_inputs(n: usize, x: &Bits, y: &Bits) -> Result<()> {
    if x.len() != n || y.len() != n {
        return Err(Error::Precondition(format!(
            "inputs must have {n} bits, got |x|={} |y|={}",
            x.len(),
            y.len()
        )));
    }
    Ok(())
}

/// Simulate with `X` and `Y` as qubit registers.
pub fn simulate_two_party(
    protocol: &TwoPartyProtocol,
    x: &Bits,
    y: &Bits,
) -> Result<(OutputDistribution, TwoPartyTranscript)> {
    simulate_two_party_with(protocol, x, y, InputMode::Registers)
}

pub fn simulate_two_party_with(
    protocol: &TwoPartyProtocol,
    x: &Bits,
    y: &Bits,
    mode: InputMode,
) -> Result<(OutputDistribution, TwoPartyTranscript)> {
    protocol.validate()?;
    check_inputs(protocol.n, x, y)?;
    let holdings = protocol.holdings()?;
    let (mut state, inputs) = match mode {
        InputMode::Registers => (
            PureState::basis(protocol.full_layout()?, &[(INPUT_X, x), (INPUT_Y, y)])?,
            ClassicalBits::new(),
        ),
        InputMode::Bound => (
            PureState::zero(protocol.work_layout()?),
            ClassicalBits::new()
                .with(INPUT_X, x.clone())
                .with(INPUT_Y, y.clone()),
        ),
    };
    let mut rounds = Vec::with_capacity(protocol.m() + 1);
    let mut hs = holdings.into_iter();
    rounds.push(TranscriptRound {
        holdings: hs.next().expect("round 0"),
        state: state.clone(),
    });
    for (round, h) in protocol.rounds.iter().zip(hs) {
        for g in &round.gates {
            state.apply_gate(g, &inputs)?;
        }
        rounds.push(TranscriptRound {
            holdings: h,
            state: state.clone(),
        });
    }
    let mut s = state;
    for g in &protocol.measurement {
        s.apply_gate(g, &inputs)?;
    }
    let q = s
        .layout()
        .qubit(&protocol.output.register, protocol.output.index)?;
    let out = OutputDistribution::from_p1(s.probability_one(q));
    Ok((out, TwoPartyTranscript { mode, rounds }))
}

/// Per-round message sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommAccount {
    pub per_round: Vec<(usize, Party, usize)>,
    pub total: usize,
    pub rounds: usize,
}

impl CommAccount {
    /// CSV with columns `round,sender,qubits`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("round,sender,qubits\n");
        for (k, p, q) in &self.per_round {
            s.push_str(&format!("{k},{p},{q}\n"));
        }
        s
    }
}

pub fn communication_total(protocol: &TwoPartyProtocol) -> CommAccount {
    let per_round: Vec<(usize, Party, usize)> = protocol
        .rounds
        .iter()
        .enumerate()
        .map(|(i, r)| (i + 1, r.sender, protocol.message_qubits(&r.message)))
        .collect();
    CommAccount {
        total: per_round.iter().map(|(_, _, q)| q).sum(),
        rounds: per_round.len(),
        per_round,
    }
}

/// Line rounds needed to stream `waves` waves of `q` qubits across `d` edges of bandwidth `b`.
pub fn pipeline_schedule(waves: usize, q: usize, d: usize, b: usize) -> Result<usize> {
    if b == 0 {
        return Err(Error::Precondition("bandwidth must be at least 1".into()));
    }
    Ok(d + waves * q.div_ceil(b))
}
