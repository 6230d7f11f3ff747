//! Protocols on a line of `d + 1` parties.
//!
//! Party `i` owns three physical register slots: `L{i}` (port to the left),
//! `A{i}` (private memory) and `R{i}` (port to the right). Party 0 has no
//! left port and additionally reads the input `X`; party `d` has no right
//! port and reads `Y`. A round consists of every party applying its circuit,
//! followed by the exchange of `R{i-1}` and `L{i}` across each edge.
//!
//! Circuits in the IR use party-local names `X`, `Y`, `A`, `L`, `R`; the
//! simulator renames them to physical slots.

mod ir;
pub mod random;
mod sim;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::qcore::{Gate, QubitRef, Register, RegisterLayout};

pub use sim::{
    ownership, side_holdings, simulate_line, simulate_line_with, snapshot_side, Holding, InputMode,
    OutputDistribution, RoundTrace, Side, Snapshot,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LineParams {
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub b: usize,
    pub s: usize,
}

impl LineParams {
    pub fn new(n: usize, d: usize, r: usize, b: usize, s: usize) -> Result<Self> {
        let p = LineParams { n, d, r, b, s };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<()> {
        for (name, v) in [("n", self.n), ("d", self.d), ("r", self.r), ("b", self.b)] {
            if v == 0 {
                return Err(Error::Invalid(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }

    /// Physical work registers (everything except the inputs), in canonical order.
    pub fn work_registers(&self) -> Vec<Register> {
        let mut regs = Vec::new();
        for i in 0..=self.d {
            if i > 0 {
                regs.push(Register::new(left(i), self.b));
            }
            if self.s > 0 {
                regs.push(Register::new(memory(i), self.s));
            }
            if i < self.d {
                regs.push(Register::new(right(i), self.b));
            }
        }
        regs
    }

    /// `X`, the work registers, then `Y`.
    pub fn full_registers(&self) -> Vec<Register> {
        let mut regs = vec![Register::new(INPUT_X, self.n)];
        regs.extend(self.work_registers());
        regs.push(Register::new(INPUT_Y, self.n));
        regs
    }

    pub fn work_layout(&self) -> Result<RegisterLayout> {
        RegisterLayout::new(self.work_registers())
    }

    pub fn full_layout(&self) -> Result<RegisterLayout> {
        RegisterLayout::new(self.full_registers())
    }

    /// Physical registers held by party `i` (inputs included).
    pub fn party_registers(&self, i: usize) -> Vec<String> {
        let mut v = Vec::new();
        if i == 0 {
            v.push(INPUT_X.to_string());
        }
        if i > 0 {
            v.push(left(i));
        }
        if self.s > 0 {
            v.push(memory(i));
        }
        if i < self.d {
            v.push(right(i));
        }
        if i == self.d {
            v.push(INPUT_Y.to_string());
        }
        v
    }
}

impl fmt::Display for LineParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} d={} r={} b={} s={}",
            self.n, self.d, self.r, self.b, self.s
        )
    }
}

pub const INPUT_X: &str = "X";
pub const INPUT_Y: &str = "Y";

pub fn memory(i: usize) -> String {
    format!("A{i}")
}

pub fn left(i: usize) -> String {
    format!("L{i}")
}

pub fn right(i: usize) -> String {
    format!("R{i}")
}

/// Final readout: a circuit on party 0's registers and the qubit measured afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub gates: Vec<Gate>,
    pub output: QubitRef,
}

impl Default for Measurement {
    fn default() -> Self {
        Measurement {
            gates: Vec::new(),
            output: QubitRef::new("R", 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineProtocol {
    params: LineParams,
    /// Keyed by (round, party); gates use party-local register names.
    circuits: BTreeMap<(usize, usize), Vec<Gate>>,
    measurement: Measurement,
}

/// One problem found by [`LineProtocol::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub party: Option<usize>,
    pub round: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.party, self.round) {
            (Some(p), Some(t)) => write!(f, "party {p}, round {t}: {}", self.message),
            (Some(p), None) => write!(f, "party {p}, measurement: {}", self.message),
            _ => write!(f, "{}", self.message),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            let msgs: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
            Err(Error::Invalid(msgs.join("; ")))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

impl LineProtocol {
    /// Protocol with identity circuits everywhere.
    pub fn new(params: LineParams) -> Self {
        LineProtocol {
            params,
            circuits: BTreeMap::new(),
            measurement: Measurement::default(),
        }
    }

    pub fn params(&self) -> &LineParams {
        &self.params
    }

    pub fn push_gate(&mut self, round: usize, party: usize, gate: Gate) {
        self.circuits.entry((round, party)).or_default().push(gate);
    }

    pub fn with_gate(mut self, round: usize, party: usize, gate: Gate) -> Self {
        self.push_gate(round, party, gate);
        self
    }

    pub fn circuit(&self, round: usize, party: usize) -> &[Gate] {
        self.circuits
            .get(&(round, party))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// All nonempty circuits keyed by (round, party).
    pub fn circuits(&self) -> &BTreeMap<(usize, usize), Vec<Gate>> {
        &self.circuits
    }

    pub fn measurement(&self) -> &Measurement {
        &self.measurement
    }

    pub fn set_measurement(&mut self, m: Measurement) {
        self.measurement = m;
    }

    pub fn with_measurement(mut self, m: Measurement) -> Self {
        self.measurement = m;
        self
    }

    /// Physical name of a party-local register, if the party has it.
    pub fn physical_name(&self, party: usize, local: &str) -> Option<String> {
        let p = &self.params;
        match local {
            INPUT_X if party == 0 => Some(INPUT_X.into()),
            INPUT_Y if party == p.d => Some(INPUT_Y.into()),
            "A" if p.s > 0 => Some(memory(party)),
            "L" if party > 0 => Some(left(party)),
            "R" if party < p.d => Some(right(party)),
            _ => None,
        }
    }

    /// Gate renamed from party-local to physical registers. Assumes a valid protocol.
    pub fn physical_gate(&self, party: usize, gate: &Gate) -> Gate {
        gate.rename(|r| {
            self.physical_name(party, r)
                .unwrap_or_else(|| r.to_string())
        })
    }

    fn check_operand(&self, party: usize, q: &QubitRef, control: bool) -> Option<String> {
        let p = &self.params;
        let within =
            |w: usize, what: &str| (q.index >= w).then(|| format!("{what} ({q}, width {w})"));
        match q.register.as_str() {
            INPUT_X | INPUT_Y if !control => Some(format!("input register not read-only ({q})")),
            INPUT_X if party != 0 => Some(format!("input X is not held by party {party}")),
            INPUT_Y if party != p.d => Some(format!("input Y is not held by party {party}")),
            INPUT_X | INPUT_Y => within(p.n, "input index out of range"),
            "A" => within(p.s, "memory exceeded"),
            "L" if party == 0 => Some("party 0 has no left port".into()),
            "R" if party == p.d => Some(format!("party {party} has no right port")),
            "L" | "R" => within(p.b, "bandwidth exceeded"),
            other => Some(format!("unknown register `{other}`")),
        }
    }

    fn check_gate(&self, party: usize, gate: &Gate) -> Vec<String> {
        let mut out = Vec::new();
        if let Err(e) = gate.check() {
            out.push(e.to_string());
        }
        for q in &gate.targets {
            out.extend(self.check_operand(party, q, false));
        }
        if let Some(c) = &gate.control {
            out.extend(self.check_operand(party, c, true));
        }
        out
    }

    /// Every violation of the register discipline, with its location.
    pub fn validate(&self) -> ValidationReport {
        let p = &self.params;
        let mut violations = Vec::new();
        if let Err(e) = p.check() {
            violations.push(Violation {
                party: None,
                round: None,
                message: e.to_string(),
            });
        }
        for (&(t, i), gates) in &self.circuits {
            let at = |message: String| Violation {
                party: Some(i),
                round: Some(t),
                message,
            };
            if t == 0 || t > p.r {
                violations.push(at(format!("round out of range 1..={}", p.r)));
                continue;
            }
            if i > p.d {
                violations.push(at(format!("party out of range 0..={}", p.d)));
                continue;
            }
            for g in gates {
                violations.extend(self.check_gate(i, g).into_iter().map(at));
            }
        }
        let at = |message: String| Violation {
            party: Some(0),
            round: None,
            message,
        };
        for g in &self.measurement.gates {
            violations.extend(self.check_gate(0, g).into_iter().map(at));
        }
        let out = &self.measurement.output;
        match out.register.as_str() {
            INPUT_X | INPUT_Y => violations.push(at(format!(
                "output must be a work qubit of party 0 ({out})"
            ))),
            _ => violations.extend(self.check_operand(0, out, false).map(at)),
        }
        ValidationReport { violations }
    }

    /// Pad with idle rounds up to the next multiple of `d`.
    ///
    /// The idle rounds go first: exchanging all-zero ports is the identity,
    /// while idle rounds at the end would still move the port qubit party 0
    /// measures.
    pub fn pad_to_multiple(&self) -> LineProtocol {
        let r = self.params.r.div_ceil(self.params.d) * self.params.d;
        let shift = r - self.params.r;
        let mut out = self.clone();
        out.params.r = r;
        out.circuits = self
            .circuits
            .iter()
            .map(|(&(t, i), g)| ((t + shift, i), g.clone()))
            .collect();
        out
    }

    /// Gates with layout-independent checks only; used by the generator and tests.
    pub(crate) fn from_parts(
        params: LineParams,
        circuits: BTreeMap<(usize, usize), Vec<Gate>>,
        measurement: Measurement,
    ) -> Self {
        LineProtocol {
            params,
            circuits,
            measurement,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::GateKind;

    fn params(d: usize, r: usize) -> LineParams {
        LineParams::new(1, d, r, 1, 1).unwrap()
    }

    #[test]
    fn identity_protocol_is_valid() {
        assert!(LineProtocol::new(params(2, 3)).validate().is_valid());
    }

    #[test]
    fn writing_an_input_is_rejected() {
        let p = LineProtocol::new(params(2, 2)).with_gate(1, 0, Gate::single(GateKind::X, "X", 0));
        let rep = p.validate();
        assert!(!rep.is_valid());
        assert!(rep.violations[0]
            .message
            .contains("input register not read-only"));
        assert_eq!(rep.violations[0].party, Some(0));
        assert_eq!(rep.violations[0].round, Some(1));
    }

    #[test]
    fn oversized_message_register_is_rejected() {
        let p = LineProtocol::new(params(2, 2)).with_gate(2, 1, Gate::single(GateKind::H, "R", 1));
        let rep = p.validate();
        assert!(rep.violations[0].message.contains("bandwidth exceeded"));
    }

    #[test]
    fn memory_and_port_rules() {
        let p = LineProtocol::new(params(2, 2))
            .with_gate(1, 1, Gate::single(GateKind::H, "A", 1))
            .with_gate(1, 0, Gate::single(GateKind::H, "L", 0))
            .with_gate(1, 2, Gate::single(GateKind::H, "R", 0))
            .with_gate(
                1,
                1,
                Gate::single(GateKind::H, "A", 0).controlled_by(QubitRef::new("X", 0)),
            )
            .with_gate(3, 1, Gate::single(GateKind::H, "A", 0));
        let msgs: Vec<String> = p
            .validate()
            .violations
            .iter()
            .map(|v| v.message.clone())
            .collect();
        assert_eq!(msgs.len(), 5, "{msgs:?}");
        assert!(msgs.iter().any(|m| m.contains("memory exceeded")));
        assert!(msgs.iter().any(|m| m.contains("no left port")));
        assert!(msgs.iter().any(|m| m.contains("no right port")));
        assert!(msgs.iter().any(|m| m.contains("not held by party 1")));
        assert!(msgs.iter().any(|m| m.contains("round out of range")));
    }

    #[test]
    fn pad_rounds() {
        for (r, d, want) in [(6, 3, 6), (5, 3, 6), (4, 3, 6), (1, 1, 1), (3, 4, 4)] {
            let p = LineProtocol::new(params(d, r)).pad_to_multiple();
            assert_eq!(p.params().r, want);
        }
    }

    #[test]
    fn layouts() {
        let p = LineParams::new(2, 2, 1, 1, 0).unwrap();
        let names: Vec<String> = p.full_registers().into_iter().map(|r| r.name).collect();
        assert_eq!(names, ["X", "R0", "L1", "R1", "L2", "Y"]);
        let p = LineParams::new(2, 1, 1, 2, 1).unwrap();
        let names: Vec<String> = p.work_registers().into_iter().map(|r| r.name).collect();
        assert_eq!(names, ["A0", "R0", "L1", "A1"]);
    }
}
