use super::{left, memory, right, LineParams, LineProtocol, INPUT_X, INPUT_Y};
use crate::error::{Error, Result};
use crate::qcore::{Bits, ClassicalBits, PureState};

/// How the inputs enter the simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputMode {
    /// `X` and `Y` are qubit registers of the state, prepared in the basis state |x⟩|y⟩.
    #[default]
    Registers,
    /// Only the work registers are simulated; controls on `X`/`Y` read the bound bits.
    Bound,
}

/// Born probabilities of the output qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputDistribution {
    pub p0: f64,
    pub p1: f64,
}

impl OutputDistribution {
    pub fn from_p1(p1: f64) -> Self {
        OutputDistribution { p0: 1.0 - p1, p1 }
    }

    pub fn max_abs_diff(&self, other: &OutputDistribution) -> f64 {
        (self.p0 - other.p0).abs().max((self.p1 - other.p1).abs())
    }
}

/// A logical register, the physical slot it currently occupies, and its holder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Holding {
    pub label: String,
    pub physical: String,
    pub party: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Parties 0..d−1.
    Left,
    /// Parties 1..d.
    Right,
}

/// Who holds what at the end of round `t` (t = 0: initial assignment).
///
/// Physical slots never move; the exchange swaps contents, so after round
/// `t ≥ 1` party `i`'s left slot carries `R_{i−1,t}` and its right slot
/// carries `L_{i+1,t}`. With `purified`, `Xh` goes to party 0 and `Yh` to party d.
pub fn ownership(params: &LineParams, t: usize, purified: bool) -> Vec<Holding> {
    let h = |label: String, physical: String, party: usize| Holding {
        label,
        physical,
        party,
    };
    let mut v = Vec::new();
    if purified {
        v.push(h("Xh".into(), "Xh".into(), 0));
    }
    v.push(h(INPUT_X.into(), INPUT_X.into(), 0));
    for i in 0..=params.d {
        if i > 0 {
            let label = if t == 0 {
                format!("L_{{{i},0}}")
            } else {
                format!("R_{{{},{t}}}", i - 1)
            };
            v.push(h(label, left(i), i));
        }
        if params.s > 0 {
            v.push(h(format!("A_{{{i},{t}}}"), memory(i), i));
        }
        if i < params.d {
            let label = if t == 0 {
                format!("R_{{{i},0}}")
            } else {
                format!("L_{{{},{t}}}", i + 1)
            };
            v.push(h(label, right(i), i));
        }
    }
    v.push(h(INPUT_Y.into(), INPUT_Y.into(), params.d));
    if purified {
        v.push(h("Yh".into(), "Yh".into(), params.d));
    }
    v
}

pub fn side_holdings(params: &LineParams, t: usize, side: Side, purified: bool) -> Vec<Holding> {
    ownership(params, t, purified)
        .into_iter()
        .filter(|h| match side {
            Side::Left => h.party < params.d,
            Side::Right => h.party >= 1,
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: usize,
    pub state: PureState,
    pub ownership: Vec<Holding>,
}

/// Global state after every round, starting with the initial state at t = 0.
#[derive(Debug, Clone)]
pub struct RoundTrace {
    pub params: LineParams,
    pub mode: InputMode,
    pub purified: bool,
    pub snapshots: Vec<Snapshot>,
}

impl RoundTrace {
    pub fn snapshot(&self, t: usize) -> Result<&Snapshot> {
        self.snapshots
            .get(t)
            .ok_or_else(|| Error::Precondition(format!("round {t} outside 0..={}", self.params.r)))
    }

    pub fn norms(&self) -> Vec<f64> {
        self.snapshots
            .iter()
            .map(|s| s.state.norm_sqr().sqrt())
            .collect()
    }

    pub fn final_state(&self) -> &PureState {
        &self.snapshots.last().expect("trace has round 0").state
    }
}

/// Logical register labels held by one side of the line at the end of round `t`.
pub fn snapshot_side(trace: &RoundTrace, t: usize, side: Side) -> Result<Vec<String>> {
    trace.snapshot(t)?;
    Ok(side_holdings(&trace.params, t, side, trace.purified)
        .into_iter()
        .map(|h| h.label)
        .collect())
}

/// Swap the contents of `R{l−1}` and `L{l}`.
pub fn swap_edge(state: &mut PureState, l: usize) -> Result<()> {
    state.swap_registers(&right(l - 1), &left(l))
}

pub fn exchange(params: &LineParams, state: &mut PureState) -> Result<()> {
    for l in 1..=params.d {
        swap_edge(state, l)?;
    }
    Ok(())
}

fn check_inputs(params: &LineParams, x: &Bits, y: &Bits) -> Result<()> {
    if x.len() != params.n || y.len() != params.n {
        return Err(Error::Precondition(format!(
            "inputs must have {} bits, got |x|={} |y|={}",
            params.n,
            x.len(),
            y.len()
        )));
    }
    Ok(())
}

impl LineProtocol {
    /// All work registers |0⟩; inputs per `mode`.
    pub fn initial_state(
        &self,
        mode: InputMode,
        x: &Bits,
        y: &Bits,
    ) -> Result<(PureState, ClassicalBits)> {
        let p = self.params();
        check_inputs(p, x, y)?;
        match mode {
            InputMode::Registers => {
                let state = PureState::basis(p.full_layout()?, &[(INPUT_X, x), (INPUT_Y, y)])?;
                Ok((state, ClassicalBits::new()))
            }
            InputMode::Bound => {
                let inputs = ClassicalBits::new()
                    .with(INPUT_X, x.clone())
                    .with(INPUT_Y, y.clone());
                Ok((PureState::zero(p.work_layout()?), inputs))
            }
        }
    }

    /// Party `i`'s circuit for round `t`.
    pub fn apply_party(
        &self,
        state: &mut PureState,
        t: usize,
        i: usize,
        inputs: &ClassicalBits,
    ) -> Result<()> {
        for g in self.circuit(t, i) {
            state.apply_gate(&self.physical_gate(i, g), inputs)?;
        }
        Ok(())
    }

    /// Every party's circuit, then the exchange.
    pub fn run_round(&self, state: &mut PureState, t: usize, inputs: &ClassicalBits) -> Result<()> {
        for i in 0..=self.params().d {
            self.apply_party(state, t, i, inputs)?;
        }
        exchange(self.params(), state)
    }

    /// Apply the measurement circuit to a copy of `state` and read the output qubit.
    pub fn measure(&self, state: &PureState, inputs: &ClassicalBits) -> Result<OutputDistribution> {
        let mut s = state.clone();
        for g in &self.measurement().gates {
            s.apply_gate(&self.physical_gate(0, g), inputs)?;
        }
        let out = &self.measurement().output;
        let reg = self
            .physical_name(0, &out.register)
            .ok_or_else(|| Error::UnknownRegister(out.register.clone()))?;
        let q = s.layout().qubit(&reg, out.index)?;
        Ok(OutputDistribution::from_p1(s.probability_one(q)))
    }
}

/// Simulate with `X` and `Y` as qubit registers.
pub fn simulate_line(
    protocol: &LineProtocol,
    x: &Bits,
    y: &Bits,
) -> Result<(OutputDistribution, RoundTrace)> {
    simulate_line_with(protocol, x, y, InputMode::Registers)
}

pub fn simulate_line_with(
    protocol: &LineProtocol,
    x: &Bits,
    y: &Bits,
    mode: InputMode,
) -> Result<(OutputDistribution, RoundTrace)> {
    protocol.validate().into_result()?;
    let p = *protocol.params();
    let (mut state, inputs) = protocol.initial_state(mode, x, y)?;
    let mut snapshots = Vec::with_capacity(p.r + 1);
    snapshots.push(Snapshot {
        t: 0,
        state: state.clone(),
        ownership: ownership(&p, 0, false),
    });
    for t in 1..=p.r {
        protocol.run_round(&mut state, t, &inputs)?;
        snapshots.push(Snapshot {
            t,
            state: state.clone(),
            ownership: ownership(&p, t, false),
        });
    }
    let out = protocol.measure(&state, &inputs)?;
    Ok((
        out,
        RoundTrace {
            params: p,
            mode,
            purified: false,
            snapshots,
        },
    ))
}
